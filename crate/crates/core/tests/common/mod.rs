//! Helpers shared by the integration tests, including an independent
//! brute-force double-point finder that never touches the resultant code.

#![allow(dead_code)]

use std::collections::BTreeSet;

use polyknot::braid::{braid_closure_diagram, parse_braid, BraidWord, QuasitoricPattern};
use polyknot::catalog::{Catalog, CatalogEntry};
use polyknot::diagram::KnotDiagram;
use polyknot::invariants::{InvariantProfile, CURATED_BRAIDS};
use polyknot::lift::{apply_crossing_changes, construct_from_word, construct_polyknot, PolyKnot};
use polyknot::nodal::{double_points, PlaneCurve};
use polyknot::poly::{parse_poly, Poly};
use polyknot::Tolerances;
use rand::rngs::StdRng;
use rand::RngExt;

pub const WORD_8_17: &str = "p=3; s1^-1 s2 s1 s2^-1 s1^-1 s2 s1 s2^-1 s1^-1 s2 s1 s2^-1 s1^-1 s2";

/// Every table entry of the shipped catalog with its overlay fixes applied.
pub fn corrected_table() -> Vec<CatalogEntry> {
    let c = Catalog::builtin();
    c.section5().map(|e| c.corrected(e)).collect()
}

pub fn polys(e: &CatalogEntry) -> (Poly, Poly, Poly) {
    (
        parse_poly(&e.f).unwrap(),
        parse_poly(&e.g).unwrap(),
        parse_poly(&e.h).unwrap(),
    )
}

fn eval(c: &[f64], t: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &a| acc * t + a)
}

fn deriv(c: &[f64]) -> Vec<f64> {
    c.iter().enumerate().skip(1).map(|(k, &a)| k as f64 * a).collect()
}

/// Parameter interval outside of which `p(s) = p(t)` has no solution with
/// `s != t`, for `p` of odd degree. Beyond its outermost critical points `p`
/// is monotone, so both parameters of a repeated value lie in the preimage
/// of `p([c_min, c_max])`.
fn odd_window(c: &[f64]) -> (f64, f64) {
    let lead = *c.last().unwrap();
    let c: Vec<f64> = c.iter().map(|a| a / lead).collect();
    let d = deriv(&c);
    let cauchy = 1.0 + d[..d.len() - 1].iter().map(|a| (a / d[d.len() - 1]).abs()).fold(0.0, f64::max);
    let n = 200_000;
    let grid: Vec<f64> = (0..=n).map(|i| -cauchy + 2.0 * cauchy * i as f64 / n as f64).collect();
    let crit: Vec<f64> = grid
        .windows(2)
        .filter(|w| eval(&d, w[0]).signum() != eval(&d, w[1]).signum())
        .map(|w| 0.5 * (w[0] + w[1]))
        .collect();
    if crit.is_empty() {
        return (0.0, 0.0);
    }
    let (lo, hi) = (crit[0], crit[crit.len() - 1]);
    let inner = grid.iter().filter(|&&t| t >= lo - 1e-3 && t <= hi + 1e-3);
    let (m, big_m) = inner.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &t| {
        let v = eval(&c, t);
        (a.min(v), b.max(v))
    });
    let pad = 1e-6 * (big_m - m).abs().max(1.0);
    // Walk outward until the monotone branches leave [m, M].
    let mut left = lo;
    while eval(&c, left) > m - pad {
        left -= 1e-3 * (1.0 + left.abs());
    }
    let mut right = hi;
    while eval(&c, right) < big_m + pad {
        right += 1e-3 * (1.0 + right.abs());
    }
    (left, right)
}

/// Window for the double points of `(f, g)`: the narrower of the odd-degree
/// windows.
pub fn parameter_window(f: &Poly, g: &Poly) -> (f64, f64) {
    let wins: Vec<(f64, f64)> = [f, g]
        .iter()
        .filter(|p| p.degree() % 2 == 1)
        .map(|p| odd_window(p.coeffs()))
        .collect();
    assert!(!wins.is_empty(), "oracle needs a coordinate of odd degree");
    let lo = wins.iter().map(|w| w.0).fold(f64::NEG_INFINITY, f64::max);
    let hi = wins.iter().map(|w| w.1).fold(f64::INFINITY, f64::min);
    (lo, hi)
}

/// Double points `(s, t)`, `s < t`, found by sign changes of the divided
/// differences on a dense parameter grid followed by Newton's method on
/// `f(s) = f(t), g(s) = g(t)`.
pub fn brute_force_double_points(f: &Poly, g: &Poly, grid: usize) -> Vec<(f64, f64)> {
    let (lo, hi) = parameter_window(f, g);
    let (fc, gc) = (f.coeffs().to_vec(), g.coeffs().to_vec());
    let (df, dg) = (deriv(&fc), deriv(&gc));
    let ts: Vec<f64> = (0..=grid).map(|i| lo + (hi - lo) * i as f64 / grid as f64).collect();
    let fv: Vec<f64> = ts.iter().map(|&t| eval(&fc, t)).collect();
    let gv: Vec<f64> = ts.iter().map(|&t| eval(&gc, t)).collect();
    let sign = |v: &[f64], i: usize, j: usize| ((v[i] - v[j]) / (ts[i] - ts[j])).signum();
    let mut found: Vec<(f64, f64)> = Vec::new();
    for i in 0..grid {
        for j in (i + 2)..grid {
            let corners = [(i, j), (i + 1, j), (i, j + 1), (i + 1, j + 1)];
            let fs: Vec<f64> = corners.iter().map(|&(a, b)| sign(&fv, a, b)).collect();
            if fs.iter().all(|&x| x == fs[0]) {
                continue;
            }
            let gs: Vec<f64> = corners.iter().map(|&(a, b)| sign(&gv, a, b)).collect();
            if gs.iter().all(|&x| x == gs[0]) {
                continue;
            }
            let (mut s, mut t) = (0.5 * (ts[i] + ts[i + 1]), 0.5 * (ts[j] + ts[j + 1]));
            for _ in 0..60 {
                let r1 = eval(&fc, s) - eval(&fc, t);
                let r2 = eval(&gc, s) - eval(&gc, t);
                let (a, b) = (eval(&df, s), -eval(&df, t));
                let (c, d) = (eval(&dg, s), -eval(&dg, t));
                let det = a * d - b * c;
                if det == 0.0 || !det.is_finite() {
                    break;
                }
                let ds = (d * r1 - b * r2) / det;
                let dt = (a * r2 - c * r1) / det;
                s -= ds;
                t -= dt;
                if ds.abs().max(dt.abs()) < 1e-15 * (1.0 + s.abs().max(t.abs())) {
                    break;
                }
            }
            // Accept when both residuals are at round-off level for the
            // magnitudes involved.
            let scale = |c: &[f64], x: f64| {
                let ax: Vec<f64> = c.iter().map(|a| a.abs()).collect();
                eval(&ax, x.abs())
            };
            let ok = s.is_finite()
                && t.is_finite()
                && (eval(&fc, s) - eval(&fc, t)).abs() <= 1e-11 * (scale(&fc, s) + scale(&fc, t))
                && (eval(&gc, s) - eval(&gc, t)).abs() <= 1e-11 * (scale(&gc, s) + scale(&gc, t));
            if !ok || (s - t).abs() < 1e-6 {
                continue;
            }
            let p = if s < t { (s, t) } else { (t, s) };
            if !found.iter().any(|q| (q.0 - p.0).abs() < 1e-7 && (q.1 - p.1).abs() < 1e-7) {
                found.push(p);
            }
        }
    }
    found.sort_by(|a, b| a.0.total_cmp(&b.0));
    found
}

const GRID: usize = 1500;
const AGREE: f64 = 1e-6;

/// Compares the resultant-based solver with the brute-force oracle and
/// returns a description of the first disagreement.
pub fn compare(f: &Poly, g: &Poly) -> Result<usize, String> {
    let curve = PlaneCurve::new(f.clone(), g.clone());
    let fast = double_points(&curve, &Tolerances::default()).map_err(|e| e.to_string())?;
    let slow = brute_force_double_points(f, g, GRID);
    if fast.len() != slow.len() {
        return Err(format!("solver found {}, oracle {}", fast.len(), slow.len()));
    }
    let mut fast: Vec<(f64, f64)> = fast.iter().map(|p| (p.s.min(p.t), p.s.max(p.t))).collect();
    fast.sort_by(|a, b| a.0.total_cmp(&b.0));
    for (a, b) in fast.iter().zip(&slow) {
        if (a.0 - b.0).abs() > AGREE || (a.1 - b.1).abs() > AGREE {
            return Err(format!("pair {a:?} vs {b:?}"));
        }
    }
    Ok(fast.len())
}

pub fn random_curve(rng: &mut StdRng) -> (Poly, Poly) {
    let mut coeffs = |deg: usize| {
        let mut c: Vec<f64> = (0..deg).map(|_| rng.random_range(-3.0..3.0)).collect();
        c.push(1.0);
        Poly::new(c)
    };
    (coeffs(3), coeffs(7))
}

/// Braid words that differ from the table's (conjugates, stabilizations and
/// other closures of the same knot), so the comparison is between unrelated
/// diagrams.
pub const ALTERNATE_BRAIDS: [(&str, usize, &[i32]); 10] = [
    ("3_1", 3, &[1, 2, 1, 2]),
    ("4_1", 4, &[-2, 1, -2, 1, 3]),
    ("5_1", 3, &[1, 1, 1, 1, 1, -2]),
    ("5_2", 4, &[2, -1, 2, 1, 1, 1, -3]),
    ("6_1", 5, &[-3, 2, -3, 1, 1, 2, -1, 4]),
    ("6_2", 4, &[-2, 1, -2, 1, 1, 1, 3]),
    ("6_3", 4, &[-2, -2, 1, 1, -2, 1, -3]),
    ("7_1", 3, &[1, 1, 1, 1, 1, 1, 1, 2]),
    ("8_17", 3, &[-1, 2, 1, -2, -1, 2, 1, -2, -1, 2, 1, -2, -1, 2]),
    ("8_19", 3, &[1, 2, 1, 2, 1, 2, 1, 2]),
];

pub fn catalog_knots() -> Vec<(String, PolyKnot)> {
    let tol = Tolerances::default();
    corrected_table()
        .iter()
        .map(|e| {
            let (f, g, h) = polys(e);
            (e.name.clone(), PolyKnot::from_polys(f, g, h, &tol).unwrap())
        })
        .collect()
}

/// Every diagram the other suites build: catalog lifts, constructed knots
/// and their single flips, and braid closures.
pub fn all_diagrams() -> Vec<KnotDiagram> {
    let tol = Tolerances::default();
    let mut out: Vec<KnotDiagram> = catalog_knots().into_iter().map(|(_, k)| k.diagram).collect();
    for (p, q) in [(2, 3), (2, 5), (2, 7), (3, 4), (3, 5), (3, 7)] {
        let k = construct_polyknot(&QuasitoricPattern::toric(p, q)).unwrap();
        for id in 0..k.diagram.crossing_count().min(3) {
            out.push(apply_crossing_changes(&k, &BTreeSet::from([id]), &tol).unwrap().diagram);
        }
        out.push(k.diagram);
    }
    let word = parse_braid(WORD_8_17).unwrap();
    out.push(construct_from_word(&word, &tol).unwrap().diagram);
    for (_, strands, w) in CURATED_BRAIDS.iter().chain(ALTERNATE_BRAIDS.iter()) {
        out.push(braid_closure_diagram(&BraidWord::from_signed(*strands, w).unwrap()).unwrap());
    }
    out
}

pub fn identity_violation(p: &InvariantProfile) -> Option<String> {
    let a = &p.alexander;
    if *a != a.invert_variable() {
        return Some(format!("Δ(t) = {a} is not symmetric"));
    }
    if a.eval_unit(1).abs() != 1 {
        return Some(format!("|Δ(1)| = {}", a.eval_unit(1).abs()));
    }
    if p.jones.eval_unit(1) != 1 {
        return Some(format!("V(1) = {}", p.jones.eval_unit(1)));
    }
    if p.determinant.is_multiple_of(2) {
        return Some(format!("even determinant {}", p.determinant));
    }
    None
}

/// Malformed inputs with the character offset the error must point at.
pub const MALFORMED: [(&str, usize); 20] = [
    ("", 0),
    ("   ", 3),
    ("t^", 2),
    ("t^-2", 2),
    ("t^{3", 4),
    ("(t + 1", 6),
    ("t + 1)", 5),
    ("2 +", 3),
    ("* t", 0),
    ("t ++ 1", 3),
    ("t^2.5", 2),
    ("x^2", 0),
    ("1.2.3", 3),
    ("t^{}", 3),
    ("3 / t", 4),
    ("t^999", 2),
    ("t^2 \\foo t", 4),
    ("(t))", 3),
    ("t $ 1", 2),
    ("()", 1),
];

/// Every polynomial string of the table, raw where it parses and corrected
/// by the overlay where it does not.
pub fn table_strings() -> Vec<(String, String)> {
    let c = Catalog::builtin();
    let mut out = Vec::new();
    for e in c.section5() {
        let fixed = c.corrected(e);
        for (field, raw, corrected) in [("f", &e.f, &fixed.f), ("g", &e.g, &fixed.g), ("h", &e.h, &fixed.h)] {
            let text = if parse_poly(raw).is_ok() { raw } else { corrected };
            out.push((format!("{} {field}", e.name), text.clone()));
        }
    }
    out
}
