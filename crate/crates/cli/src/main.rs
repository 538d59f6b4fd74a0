use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use serde_json::json;

use polyknot::braid::{degree_sequence_bound, parse_braid, BraidError};
use polyknot::catalog::Catalog;
use polyknot::diagram::sign_variation_count;
use polyknot::export::{export_samples, Format};
use polyknot::invariants::{identify, Handedness, Identification, InvariantProfile};
use polyknot::lift::{construct_from_word, LiftError, PolyKnot, PolyKnotJson};
use polyknot::poly::parse_poly;
use polyknot::verify::{analyze_texts, verify_catalog, Analysis, Outcome, Status};
use polyknot::Tolerances;

const GRAMMAR: &str = "\
Input grammar
  polynomial  expr := ['+'|'-'] term (('+'|'-') term)*
              term := factor (('*'|'×'|'\\times'|'/')? factor)*
              factor := atom ('^' integer | '^{' integer '}')*
              atom := number | 't' | '(' expr ')'
              e.g. \"t^3 - 3t\", \"(t^2 - 1)(t^2 - 4)\", \"2.5\\times10^3 \\times t\"
  braid       [p=<strands>;] s<i> | s<i>^-1 ...
              e.g. \"s1 s1 s1\", \"p=3; s1^-1 s2 s1 s2^-1\"
  knot.json   {\"f\": <polynomial>, \"g\": <polynomial>, \"h\": <polynomial>, \"degrees\": [l, m, n]}
              as written by `polyknot construct --json`";

#[derive(Parser)]
#[command(name = "polyknot", version, about = "Polynomial representations of long knots")]
struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Catalog file (JSON lines) used instead of the built-in one.
    #[arg(long, global = true, value_name = "PATH")]
    catalog: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a polynomial knot from a quasitoric braid word.
    Construct {
        braid: String,
        /// Also write the knot as JSON to this file.
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Find crossings, lift and identify the knot of (f, g, h).
    Analyze { f: String, g: String, h: String },
    /// Alexander and Jones polynomials and determinant of (f, g, h).
    Invariants { f: String, g: String, h: String },
    /// Verify catalog entries (all of them when no name is given).
    VerifyCatalog {
        name: Option<String>,
        /// Apply the annotated transcription fixes.
        #[arg(long)]
        overlay: bool,
        /// Overlay file used with --catalog.
        #[arg(long, value_name = "PATH")]
        overlay_file: Option<PathBuf>,
    },
    /// Degree sequence bound for r crossing changes on the (p, q) toric braid.
    DegreeBound { p: u32, q: u32, r: u32 },
    /// Sample a knot written by `construct --json` along its parameter.
    Export {
        knot: PathBuf,
        #[arg(long, default_value_t = 1000)]
        points: usize,
        /// csv, json or obj.
        #[arg(long, default_value = "csv")]
        format: String,
        /// Parameter range as t0,t1.
        #[arg(long, value_name = "T0,T1", allow_hyphen_values = true)]
        range: Option<String>,
        /// Output file (stdout when omitted).
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

enum Failure {
    Usage(String),
    Domain(String),
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Failure {
        Failure::Domain(e.to_string())
    }
}

type CliResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = e.print();
                    ExitCode::SUCCESS
                }
                _ => {
                    let _ = e.print();
                    eprintln!("\n{GRAMMAR}");
                    ExitCode::from(2)
                }
            };
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}\n\n{GRAMMAR}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli) -> CliResult {
    let tol = Tolerances::default();
    match &cli.command {
        Command::Construct { braid, out } => construct(cli.json, braid, out.as_ref(), &tol),
        Command::Analyze { f, g, h } => analyze(cli.json, f, g, h, &tol),
        Command::Invariants { f, g, h } => invariants(cli.json, f, g, h, &tol),
        Command::VerifyCatalog {
            name,
            overlay,
            overlay_file,
        } => verify(cli, name.as_deref(), *overlay, overlay_file.as_ref(), &tol),
        Command::DegreeBound { p, q, r } => {
            let seq = degree_sequence_bound(*p, *q, *r).map_err(|e| Failure::Domain(e.to_string()))?;
            if cli.json {
                print_json(&json!({ "bound": seq, "display": seq.to_string() }));
            } else {
                println!("{seq}");
            }
            Ok(())
        }
        Command::Export {
            knot,
            points,
            format,
            range,
            output,
        } => export(knot, *points, format, range.as_deref(), output.as_ref(), &tol),
    }
}

fn print_json(v: &impl serde::Serialize) {
    println!("{}", serde_json::to_string_pretty(v).expect("output serializes"));
}

fn check_polys(f: &str, g: &str, h: &str) -> CliResult {
    for (field, text) in [("f", f), ("g", g), ("h", h)] {
        parse_poly(text).map_err(|e| Failure::Usage(format!("{field}: {e}\n  {text}\n  {:>w$}", "^", w = e.position + 1)))?;
    }
    Ok(())
}

fn describe(ids: &[Identification]) -> String {
    ids.iter()
        .map(|i| match i.handedness {
            Handedness::AsTabulated => i.name.clone(),
            Handedness::Mirror => format!("{} (mirror)", i.name),
            Handedness::Either => format!("{} (mirror undetected)", i.name),
        })
        .collect::<Vec<_>>()
        .join(", ")
}

fn construct(json: bool, braid: &str, out: Option<&PathBuf>, tol: &Tolerances) -> CliResult {
    let word = parse_braid(braid).map_err(|e| match e {
        BraidError::Parse { .. } => Failure::Usage(format!("braid: {e}")),
        other => Failure::Domain(other.to_string()),
    })?;
    let k = construct_from_word(&word, tol).map_err(|e: LiftError| Failure::Domain(e.to_string()))?;
    let profile = InvariantProfile::of(&k.diagram).map_err(|e| Failure::Domain(e.to_string()))?;
    let ids = identify(&profile).unwrap_or_default();
    let variations = sign_variation_count(&k.diagram.visits);
    let knot = k.to_json();
    if let Some(path) = out {
        let file = File::create(path)?;
        serde_json::to_writer_pretty(file, &knot).map_err(|e| Failure::Domain(e.to_string()))?;
    }
    if json {
        print_json(&json!({
            "f": knot.f,
            "g": knot.g,
            "h": knot.h,
            "degrees": knot.degrees,
            "crossings": k.diagram.crossing_count(),
            "variations": variations,
            "gauss": k.diagram.gauss,
            "profile": profile,
            "identified_as": ids,
        }));
    } else {
        let [l, m, n] = knot.degrees;
        println!("f(t) = {}", knot.f);
        println!("g(t) = {}", knot.g);
        println!("h(t) = {}", knot.h);
        println!("degrees: ({l}, {m}, {n})");
        println!("crossings: {}", k.diagram.crossing_count());
        println!("height sign variations: {variations}");
        println!("gauss: {}", k.diagram.gauss);
        println!("identified: {}", if ids.is_empty() { "-".to_string() } else { describe(&ids) });
    }
    Ok(())
}

fn print_analysis(a: &Analysis) {
    if let Some([l, m, n]) = a.degrees {
        println!("degrees: ({l}, {m}, {n})");
    }
    if let Some(c) = a.crossing_count {
        println!("crossings: {c}");
    }
    if let Some(g) = &a.gauss {
        println!("gauss: {g}");
    }
    if let Some(w) = a.writhe {
        println!("writhe: {w}");
    }
    if let Some(p) = &a.profile {
        println!("alexander: {}", p.alexander);
        println!("jones: {}", p.jones);
        println!("determinant: {}", p.determinant);
    }
    if !a.identified_as.is_empty() {
        println!("identified: {}", describe(&a.identified_as));
    }
    for d in &a.diagnostics {
        println!("note: {d}");
    }
}

fn analysis_result(a: &Analysis) -> CliResult {
    match a.outcome {
        Outcome::Identified | Outcome::Unidentified => Ok(()),
        Outcome::Degenerate | Outcome::Error => Err(Failure::Domain(a.diagnostics.join("; "))),
    }
}

fn analyze(json: bool, f: &str, g: &str, h: &str, tol: &Tolerances) -> CliResult {
    check_polys(f, g, h)?;
    let a = analyze_texts(f, g, h, tol);
    if json {
        print_json(&a);
    } else {
        println!("outcome: {}", serde_json::to_value(a.outcome).expect("enum serializes").as_str().unwrap_or("?"));
        print_analysis(&a);
    }
    analysis_result(&a)
}

fn invariants(json: bool, f: &str, g: &str, h: &str, tol: &Tolerances) -> CliResult {
    check_polys(f, g, h)?;
    let a = analyze_texts(f, g, h, tol);
    analysis_result(&a)?;
    let profile = match &a.profile {
        Some(p) => p.clone(),
        // An injective projection has the invariants of the unknot.
        None => InvariantProfile::unknot(),
    };
    if json {
        print_json(&json!({ "crossings": a.crossing_count, "writhe": a.writhe, "profile": profile }));
    } else {
        println!("alexander: {}", profile.alexander);
        println!("jones: {}", profile.jones);
        println!("determinant: {}", profile.determinant);
    }
    Ok(())
}

fn verify(cli: &Cli, name: Option<&str>, overlay: bool, overlay_file: Option<&PathBuf>, tol: &Tolerances) -> CliResult {
    let catalog = match &cli.catalog {
        Some(path) => Catalog::load(path, overlay_file.map(|p| p.as_path())).map_err(|e| Failure::Domain(e.to_string()))?,
        None => Catalog::builtin(),
    };
    if let Some(n) = name {
        if !catalog.entries.iter().any(|e| e.name == n) {
            return Err(Failure::Domain(format!("no catalog entry named {n}")));
        }
    }
    let reports = verify_catalog(&catalog, name, overlay, tol);
    let verified = reports.iter().filter(|r| r.status == Status::Verified).count();
    if cli.json {
        print_json(&reports);
    } else {
        for r in &reports {
            let status = serde_json::to_value(r.status).expect("enum serializes");
            let source = serde_json::to_value(r.source).expect("enum serializes");
            let degrees = r.degrees.map_or("-".to_string(), |[l, m, n]| format!("({l}, {m}, {n})"));
            let crossings = r.crossing_count.map_or("-".to_string(), |c| c.to_string());
            println!(
                "{:<6} {:<9} {:<10} crossings {:<3} degrees {:<13} {}",
                r.name,
                source.as_str().unwrap_or("?"),
                status.as_str().unwrap_or("?"),
                crossings,
                degrees,
                r.identified_as.join(", ")
            );
            for d in &r.diagnostics {
                println!("       {d}");
            }
        }
        println!("{verified} of {} verified", reports.len());
    }
    if verified == reports.len() {
        Ok(())
    } else {
        Err(Failure::Domain(format!("{} of {} entries not verified", reports.len() - verified, reports.len())))
    }
}

fn parse_range(text: &str) -> Result<(f64, f64), Failure> {
    let bad = || Failure::Usage(format!("range: expected T0,T1, got {text:?}"));
    let (a, b) = text.split_once(',').ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

fn export(
    path: &PathBuf,
    points: usize,
    format: &str,
    range: Option<&str>,
    output: Option<&PathBuf>,
    tol: &Tolerances,
) -> CliResult {
    let format: Format = format.parse().map_err(|e: polyknot::export::ExportError| Failure::Usage(e.to_string()))?;
    let range = range.map(parse_range).transpose()?;
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))?;
    let j: PolyKnotJson =
        serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let k = PolyKnot::from_json(&j, tol).map_err(|e| Failure::Domain(e.to_string()))?;
    let result = match output {
        Some(p) => export_samples(&k, points, range, format, BufWriter::new(File::create(p)?)),
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            let r = export_samples(&k, points, range, format, &mut lock);
            lock.flush()?;
            r
        }
    };
    result.map_err(|e| Failure::Domain(e.to_string()))
}
