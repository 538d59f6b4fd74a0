//! Regenerates `data/knot_table.jsonl` and its checksum from the curated braids.

use polyknot::invariants::{build_reference_table, sha256_hex, table_to_jsonl};

fn main() {
    let table = build_reference_table().expect("curated braids have invariants");
    let text = table_to_jsonl(&table);
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/data");
    std::fs::write(format!("{dir}/knot_table.jsonl"), &text).expect("write table");
    std::fs::write(format!("{dir}/knot_table.sha256"), sha256_hex(&text) + "\n").expect("write checksum");
    println!("{} entries", table.len());
}
