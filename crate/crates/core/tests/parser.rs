mod common;

use common::{table_strings, MALFORMED};
use polyknot::poly::{parse_poly, print_poly};

#[test]
fn table_strings_round_trip() {
    let strings = table_strings();
    assert_eq!(strings.len(), 105);
    for (label, text) in strings {
        let p = parse_poly(&text).unwrap_or_else(|e| panic!("{label}: {e}"));
        let printed = print_poly(&p);
        assert_eq!(parse_poly(&printed).unwrap(), p, "{label}");
        assert_eq!(print_poly(&parse_poly(&printed).unwrap()), printed, "{label}");
    }
}

#[test]
fn malformed_inputs_report_positions() {
    for (text, position) in MALFORMED {
        let err = parse_poly(text).expect_err(text);
        assert_eq!(err.position, position, "{text:?}: {err}");
        assert!(err.to_string().contains(&format!("position {position}")));
    }
}

#[test]
fn typeset_spellings() {
    let a = parse_poly("3.83628\\times10^6 \\times t - t^{3}").unwrap();
    assert_eq!(a.coeffs(), &[0.0, 3.83628e6, 0.0, -1.0]);
    let b = parse_poly("(t + 2)(t \u{2212} 2)").unwrap();
    assert_eq!(b.coeffs(), &[-4.0, 0.0, 1.0]);
}
