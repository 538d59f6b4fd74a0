//! End-to-end verification of catalog triples: parse, find crossings, lift,
//! compute invariants and identify.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::catalog::{Catalog, CatalogEntry, Source};
use crate::diagram::{lift_with_points, DiagramError, KnotDiagram};
use crate::invariants::{identify, Handedness, Identification, InvariantError, InvariantProfile};
use crate::nodal::{double_points, validate_generic, DoublePoint, PlaneCurve};
use crate::poly::{parse_poly, Poly};
use crate::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Verified,
    Mismatch,
    Degenerate,
    Error,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub name: String,
    pub source: Source,
    pub crossing_count: Option<usize>,
    pub degrees: Option<[usize; 3]>,
    pub profile: Option<InvariantProfile>,
    pub identified_as: Vec<String>,
    pub mirror_flag: Option<Handedness>,
    pub status: Status,
    pub diagnostics: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    /// The profile matches at least one table knot.
    Identified,
    /// A valid diagram whose profile is trivial or not in the table.
    Unidentified,
    Degenerate,
    Error,
}

/// Everything learned about an arbitrary `(f, g, h)` triple.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Analysis {
    pub degrees: Option<[usize; 3]>,
    pub crossing_count: Option<usize>,
    pub gauss: Option<String>,
    pub writhe: Option<i64>,
    pub profile: Option<InvariantProfile>,
    pub identified_as: Vec<Identification>,
    pub unknot_candidate: bool,
    pub outcome: Outcome,
    pub diagnostics: Vec<String>,
    #[serde(skip)]
    diagram: Option<KnotDiagram>,
    #[serde(skip)]
    points: Vec<DoublePoint>,
    #[serde(skip)]
    height: Option<Poly>,
}

impl Analysis {
    fn fail(mut self, outcome: Outcome, message: String) -> Analysis {
        self.outcome = outcome;
        self.diagnostics.push(message);
        self
    }
}

/// Parses the three strings and runs double points, the genericity check,
/// the lift, the invariants and table lookup. Failures are recorded in the
/// result rather than returned.
pub fn analyze_texts(f: &str, g: &str, h: &str, tol: &Tolerances) -> Analysis {
    let mut a = Analysis {
        degrees: None,
        crossing_count: None,
        gauss: None,
        writhe: None,
        profile: None,
        identified_as: Vec::new(),
        unknot_candidate: false,
        outcome: Outcome::Error,
        diagnostics: Vec::new(),
        diagram: None,
        points: Vec::new(),
        height: None,
    };
    let mut polys: Vec<Poly> = Vec::with_capacity(3);
    for (field, text) in [("f", f), ("g", g), ("h", h)] {
        match parse_poly(text) {
            Ok(p) => polys.push(p),
            Err(err) => return a.fail(Outcome::Error, format!("{field}: {err}")),
        }
    }
    let h = polys.pop().expect("three polynomials");
    let g = polys.pop().expect("three polynomials");
    let f = polys.pop().expect("three polynomials");
    a.degrees = Some([f.degree(), g.degree(), h.degree()]);
    let curve = PlaneCurve::new(f, g);
    let pts = match double_points(&curve, tol) {
        Ok(p) => p,
        Err(err) => return a.fail(Outcome::Degenerate, format!("double points: {err}")),
    };
    a.crossing_count = Some(pts.len());
    let validation = validate_generic(&curve, &pts, tol);
    if !validation.valid {
        return a.fail(Outcome::Degenerate, format!("projection: {}", validation.summary()));
    }
    if pts.is_empty() {
        a.unknot_candidate = true;
        a.outcome = Outcome::Unidentified;
        a.diagnostics.push("projection has no crossings; unknot candidate".into());
        return a;
    }
    let diagram = match lift_with_points(&curve, &pts, &h, tol) {
        Ok(d) => d,
        Err(err @ DiagramError::HeightSeparationFailure { .. }) => {
            return a.fail(Outcome::Degenerate, err.to_string())
        }
        Err(err) => return a.fail(Outcome::Error, err.to_string()),
    };
    a.gauss = Some(diagram.gauss.clone());
    a.writhe = Some(diagram.writhe);
    let profile = match InvariantProfile::of(&diagram) {
        Ok(p) => p,
        Err(err) => return a.fail(Outcome::Error, format!("invariants: {err}")),
    };
    a.profile = Some(profile.clone());
    a.diagram = Some(diagram);
    a.points = pts;
    a.height = Some(h);
    match identify(&profile) {
        Ok(ids) => {
            a.identified_as = ids;
            a.outcome = Outcome::Identified;
        }
        Err(InvariantError::NoMatch { unknot_candidate }) => {
            a.unknot_candidate = unknot_candidate;
            a.outcome = Outcome::Unidentified;
            a.diagnostics.push(if unknot_candidate {
                "unknot candidate".to_string()
            } else {
                "knot not in the reference table".to_string()
            });
        }
        Err(err) => return a.fail(Outcome::Error, err.to_string()),
    }
    a
}

/// Runs the full pipeline on one catalog triple and compares the result with
/// the entry's name.
pub fn verify_entry(e: &CatalogEntry, tol: &Tolerances) -> VerificationReport {
    let a = analyze_texts(&e.f, &e.g, &e.h, tol);
    let mut report = VerificationReport {
        name: e.name.clone(),
        source: e.source,
        crossing_count: a.crossing_count,
        degrees: a.degrees,
        profile: a.profile.clone(),
        identified_as: a.identified_as.iter().map(|i| i.name.clone()).collect(),
        mirror_flag: None,
        status: match a.outcome {
            Outcome::Unidentified if a.crossing_count == Some(0) => Status::Degenerate,
            Outcome::Identified | Outcome::Unidentified => Status::Mismatch,
            Outcome::Degenerate => Status::Degenerate,
            Outcome::Error => Status::Error,
        },
        diagnostics: a.diagnostics.clone(),
    };
    if let Some(hit) = a.identified_as.iter().find(|i| i.name == e.name) {
        report.mirror_flag = Some(hit.handedness);
        report.status = Status::Verified;
        return report;
    }
    if a.outcome == Outcome::Identified {
        report
            .diagnostics
            .push(format!("identified as {}", report.identified_as.join(", ")));
    }
    if let (Some(d), Some(h)) = (&a.diagram, &a.height) {
        report
            .diagnostics
            .extend(precision_diagnostic(&e.name, &e.h, h, &a.points, d));
    }
    report
}

/// Fewest significant digits among the decimal literals of `text` (six when
/// there are none).
pub fn printed_digits(text: &str) -> usize {
    let bytes = text.as_bytes();
    let mut best: Option<usize> = None;
    let mut i = 0;
    while i < bytes.len() {
        if !bytes[i].is_ascii_digit() {
            i += 1;
            continue;
        }
        let start = i;
        while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
            i += 1;
        }
        let lit = &text[start..i];
        let after_caret = start > 0 && matches!(bytes[start - 1], b'^' | b'{');
        if lit.contains('.') && !after_caret {
            let digits = lit.trim_start_matches(['0', '.']).chars().filter(char::is_ascii_digit).count();
            best = Some(best.map_or(digits, |b| b.min(digits)));
        }
    }
    best.unwrap_or(6).max(1)
}

/// Worst-case change of `h(s) - h(t)` when every coefficient moves by half a
/// unit in its last printed digit.
pub fn height_rounding_bound(h: &Poly, digits: usize, s: f64, t: f64) -> f64 {
    let rel = 0.5 * 10f64.powi(1 - digits as i32);
    h.coeffs()
        .iter()
        .enumerate()
        .map(|(k, c)| c.abs() * (s.abs().powi(k as i32) + t.abs().powi(k as i32)))
        .sum::<f64>()
        * rel
}

fn flipped(d: &KnotDiagram, id: usize) -> Option<KnotDiagram> {
    let mut visits = d.visits.clone();
    for v in visits.iter_mut().filter(|v| v.crossing_id == id) {
        v.role = v.role.flip();
        v.local_sign = -v.local_sign;
    }
    KnotDiagram::from_visits(visits, d.closure).ok()
}

/// Looks for crossings whose over/under choice is below the precision of the
/// printed height and whose single flip yields the expected knot.
fn precision_diagnostic(
    name: &str,
    h_text: &str,
    h: &Poly,
    pts: &[DoublePoint],
    d: &KnotDiagram,
) -> Vec<String> {
    let digits = printed_digits(h_text);
    let mut out = Vec::new();
    for (id, p) in pts.iter().enumerate() {
        let gap = (h.eval(p.s) - h.eval(p.t)).abs();
        let bound = height_rounding_bound(h, digits, p.s, p.t);
        if gap >= bound {
            continue;
        }
        let Some(alt) = flipped(d, id) else { continue };
        let hit = InvariantProfile::of(&alt)
            .ok()
            .and_then(|prof| identify(&prof).ok())
            .is_some_and(|ids| ids.iter().any(|i| i.name == name));
        if hit {
            out.push(format!(
                "precision irregularity: crossing at t = {:.6}, {:.6} has height gap {gap:.4e}, below the {digits}-digit rounding bound {bound:.4e}; flipping it gives {name}",
                p.s, p.t
            ));
        }
    }
    out
}

/// Verifies the catalog entries whose name matches `name` (all when `None`),
/// in catalog order. With `apply_overlay`, annotated fixes replace the raw
/// strings; otherwise failing entries that have a fix get its note attached.
pub fn verify_catalog(
    catalog: &Catalog,
    name: Option<&str>,
    apply_overlay: bool,
    tol: &Tolerances,
) -> Vec<VerificationReport> {
    let selected: Vec<&CatalogEntry> = catalog
        .entries
        .iter()
        .filter(|e| name.is_none_or(|n| e.name == n))
        .collect();
    selected
        .par_iter()
        .map(|e| {
            let fixes = if e.source == Source::Section5 {
                catalog.fixes_for(&e.name)
            } else {
                Vec::new()
            };
            if apply_overlay && !fixes.is_empty() {
                let mut r = verify_entry(&catalog.corrected(e), tol);
                r.diagnostics
                    .extend(fixes.iter().map(|f| format!("overlay applied to {:?}: {}", f.field, f.note)));
                r
            } else {
                let mut r = verify_entry(e, tol);
                if r.status != Status::Verified {
                    r.diagnostics
                        .extend(fixes.iter().map(|f| format!("transcription irregularity: {}", f.note)));
                }
                r
            }
        })
        .collect()
}
