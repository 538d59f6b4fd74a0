//! Transverse double points of polynomial plane curves.
//!
//! With `u = s + t` and `v = st`, the divided differences
//! `F = (f(s) - f(t)) / (s - t)` and `G = (g(s) - g(t)) / (s - t)` become
//! polynomials in `(u, v)`. The resultant in `v` gives the candidate sums
//! `u`; each candidate is completed to `(s, t)` and polished by Newton
//! iteration on `(F, G)`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poly::{Poly, PolyError};
use crate::Tolerances;

pub mod templates;

pub use templates::toric_projection;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NodalError {
    #[error("tangential or higher-order contact at t = {s}, {t} (transversality {transversality:e})")]
    DegenerateIntersection { s: f64, t: f64, transversality: f64 },
    #[error("double point polishing did not converge near (s, t) = ({s}, {t})")]
    NoConvergence { s: f64, t: f64 },
    #[error("the curve has infinitely many double points")]
    InfiniteDoublePoints,
    #[error("invalid curve: {0}")]
    InvalidCurve(String),
    #[error("no template found for ({p}, {q}) within the search budget (best: {best_nodes} of {target} nodes)")]
    TemplateSearchFailed {
        p: usize,
        q: usize,
        best_nodes: usize,
        target: usize,
    },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlaneCurve {
    pub f: Poly,
    pub g: Poly,
}

impl PlaneCurve {
    pub fn new(f: Poly, g: Poly) -> PlaneCurve {
        PlaneCurve { f, g }
    }

    pub fn point(&self, t: f64) -> (f64, f64) {
        (self.f.eval(t), self.g.eval(t))
    }

    pub fn tangent(&self, t: f64) -> (f64, f64) {
        (self.f.derivative().eval(t), self.g.derivative().eval(t))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DoublePoint {
    pub s: f64,
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub tangent_s: [f64; 2],
    pub tangent_t: [f64; 2],
    /// `|tangent_s × tangent_t|` of the unit tangents.
    pub transversality: f64,
}

impl DoublePoint {
    fn at(c: &PlaneCurve, s: f64, t: f64) -> DoublePoint {
        let unit = |(a, b): (f64, f64)| {
            let n = a.hypot(b);
            if n > 0.0 {
                [a / n, b / n]
            } else {
                [0.0, 0.0]
            }
        };
        let ts = unit(c.tangent(s));
        let tt = unit(c.tangent(t));
        let (x, y) = c.point(s);
        DoublePoint {
            s,
            t,
            x,
            y,
            tangent_s: ts,
            tangent_t: tt,
            transversality: (ts[0] * tt[1] - ts[1] * tt[0]).abs(),
        }
    }
}

/// A polynomial in `(u, v)` stored by powers of `v`.
type UvPoly = Vec<Poly>;

/// Complete homogeneous symmetric polynomials `h_0 ..= h_n` in `(u, v)`:
/// `h_k = u h_{k-1} - v h_{k-2}`.
fn complete_symmetric(n: usize) -> Vec<UvPoly> {
    let mut out: Vec<UvPoly> = vec![vec![Poly::constant(1.0)]];
    for k in 1..=n {
        let prev = &out[k - 1];
        let mut next: UvPoly = prev.iter().map(|c| c * &Poly::t()).collect();
        if k >= 2 {
            for (j, c) in out[k - 2].iter().enumerate() {
                if next.len() <= j + 1 {
                    next.resize(j + 2, Poly::zero());
                }
                next[j + 1] = &next[j + 1] - c;
            }
        }
        out.push(next);
    }
    out
}

/// `(p(s) - p(t)) / (s - t)` in `(u, v)`.
fn divided_difference_uv(p: &Poly, h: &[UvPoly]) -> UvPoly {
    let mut acc: UvPoly = Vec::new();
    for (k, &a) in p.coeffs().iter().enumerate().skip(1) {
        for (j, c) in h[k - 1].iter().enumerate() {
            if acc.len() <= j {
                acc.resize(j + 1, Poly::zero());
            }
            acc[j] = &acc[j] + &c.scale(a);
        }
    }
    while acc.last().is_some_and(|c| c.is_zero()) {
        acc.pop();
    }
    acc
}

fn eval_in_u(p: &UvPoly, u: f64) -> Poly {
    Poly::new(p.iter().map(|c| c.eval(u)).collect())
}

/// Determinant of a square polynomial matrix by fraction-free (Bareiss)
/// elimination. Each exact division drops the rounding remainder.
fn bareiss_det(mut m: Vec<Vec<Poly>>) -> Poly {
    let n = m.len();
    if n == 0 {
        return Poly::constant(1.0);
    }
    let mut sign = 1.0;
    let mut prev = Poly::constant(1.0);
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    sign = -sign;
                }
                None => return Poly::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&m[k][k] * &m[i][j]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = num.div_rem(&prev).0;
            }
        }
        prev = m[k][k].clone();
    }
    m[n - 1][n - 1].scale(sign)
}

/// Sylvester resultant in `v` of two `(u, v)` polynomials.
fn resultant_v(a: &UvPoly, b: &UvPoly) -> Poly {
    let (da, db) = (a.len().saturating_sub(1), b.len().saturating_sub(1));
    if a.is_empty() || b.is_empty() {
        return Poly::zero();
    }
    let n = da + db;
    if n == 0 {
        return Poly::constant(1.0);
    }
    let mut m = vec![vec![Poly::zero(); n]; n];
    for i in 0..db {
        for (j, c) in a.iter().rev().enumerate() {
            m[i][i + j] = c.clone();
        }
    }
    for i in 0..da {
        for (j, c) in b.iter().rev().enumerate() {
            m[db + i][i + j] = c.clone();
        }
    }
    bareiss_det(m)
}

/// `p(c + s τ)` as a polynomial in `τ`.
fn affine_substitute(p: &Poly, c: f64, s: f64) -> Poly {
    let lin = Poly::new(vec![c, s]);
    p.coeffs()
        .iter()
        .rev()
        .fold(Poly::zero(), |acc, &a| &(&acc * &lin) + &Poly::constant(a))
}

/// Parameter interval containing every double point, derived from `p`
/// alone. `None` when `p` cannot bound it (even degree).
fn node_interval(p: &Poly, tol: f64) -> Result<Option<(f64, f64)>, NodalError> {
    if p.degree().is_multiple_of(2) {
        return Ok(None);
    }
    let crit = p.derivative().real_roots(tol)?;
    if crit.is_empty() {
        return Ok(Some((0.0, 0.0)));
    }
    let values: Vec<f64> = crit.values().iter().map(|&x| p.eval(x)).collect();
    let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut ends = Vec::new();
    for level in [lo, hi] {
        let shifted = p - &Poly::constant(level);
        ends.extend(shifted.real_roots(tol)?.values());
    }
    ends.extend(crit.values());
    let a = ends.iter().cloned().fold(f64::INFINITY, f64::min);
    let b = ends.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    Ok(Some((a, b)))
}

/// Complete homogeneous `h_j(s, t)` and `∂h_j/∂s` for `j < n`.
fn h_and_ds(s: f64, t: f64, n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut h = Vec::with_capacity(n);
    let mut d = Vec::with_capacity(n);
    let mut tp = 1.0;
    for j in 0..n {
        if j == 0 {
            h.push(1.0);
            d.push(0.0);
        } else {
            tp *= t;
            let hj = s * h[j - 1] + tp;
            let dj = h[j - 1] + s * d[j - 1];
            h.push(hj);
            d.push(dj);
        }
    }
    (h, d)
}

/// Divided difference of `p` at `(s, t)` with its partial derivatives.
fn dd_with_grad(p: &Poly, s: f64, t: f64) -> (f64, f64, f64) {
    let n = p.coeffs().len().saturating_sub(1);
    let (hs, ds) = h_and_ds(s, t, n);
    let (_, dt) = h_and_ds(t, s, n);
    let mut val = 0.0;
    let mut gs = 0.0;
    let mut gt = 0.0;
    for (k, &a) in p.coeffs().iter().enumerate().skip(1) {
        val += a * hs[k - 1];
        gs += a * ds[k - 1];
        gt += a * dt[k - 1];
    }
    (val, gs, gt)
}

/// Divided difference of `p` at `(s, t)`.
pub fn divided_difference(p: &Poly, s: f64, t: f64) -> f64 {
    dd_with_grad(p, s, t).0
}

/// Damped Newton iteration on `(F, G)(s, t) = 0`. Returns `None` when the
/// iteration stalls.
pub fn polish_pair(f: &Poly, g: &Poly, mut s: f64, mut t: f64, budget: usize) -> Option<(f64, f64)> {
    let resid = |s: f64, t: f64| {
        let a = divided_difference(f, s, t) / f.abs_eval(s.abs().max(t.abs()) + 1.0);
        let b = divided_difference(g, s, t) / g.abs_eval(s.abs().max(t.abs()) + 1.0);
        a.hypot(b)
    };
    let mut r = resid(s, t);
    for _ in 0..budget {
        if r < 1e-15 {
            break;
        }
        let (fv, fs, ft) = dd_with_grad(f, s, t);
        let (gv, gs, gt) = dd_with_grad(g, s, t);
        let det = fs * gt - ft * gs;
        if det == 0.0 || !det.is_finite() {
            return None;
        }
        let ds = (fv * gt - ft * gv) / det;
        let dt = (fs * gv - fv * gs) / det;
        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..30 {
            let (ns, nt) = (s - lambda * ds, t - lambda * dt);
            let nr = resid(ns, nt);
            if nr.is_finite() && nr < r {
                s = ns;
                t = nt;
                r = nr;
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        let scale = 1.0 + s.abs().max(t.abs());
        if !accepted || (ds.hypot(dt) * lambda) < 4.0 * f64::EPSILON * scale {
            break;
        }
    }
    let ok = r < 1e-9;
    ok.then_some(if s <= t { (s, t) } else { (t, s) })
}

fn relative_gap(p: &Poly, s: f64, t: f64) -> f64 {
    (p.eval(s) - p.eval(t)).abs() / p.abs_eval(s.abs().max(t.abs())).max(1.0)
}

/// All real transverse double points, sorted by `s`.
pub fn double_points(c: &PlaneCurve, tol: &Tolerances) -> Result<Vec<DoublePoint>, NodalError> {
    if c.f.is_zero() || c.g.is_zero() {
        return Err(NodalError::InvalidCurve("coordinate polynomial is zero".into()));
    }
    if c.f.degree() <= 1 || c.g.degree() <= 1 {
        // One coordinate is injective (or constant, which cannot be regular).
        if c.f.degree() == 0 || c.g.degree() == 0 {
            return Err(NodalError::InfiniteDoublePoints);
        }
        return Ok(Vec::new());
    }
    let rt = tol.root_tol;
    let window = match (node_interval(&c.f, rt)?, node_interval(&c.g, rt)?) {
        (Some(a), Some(b)) => Some((a.0.max(b.0), a.1.min(b.1))),
        (Some(a), None) | (None, Some(a)) => Some(a),
        (None, None) => None,
    };
    let (center, scale) = match window {
        Some((a, b)) if b < a => return Ok(Vec::new()),
        Some((a, b)) => (0.5 * (a + b), (0.5 * (b - a)).max(1e-3)),
        None => (0.0, 1.0),
    };
    let normalize = |p: &Poly| {
        let q = affine_substitute(p, center, scale);
        q.scale(1.0 / q.norm_inf())
    };
    let (fs, gs) = (normalize(&c.f), normalize(&c.g));
    let h = complete_symmetric(fs.degree().max(gs.degree()));
    let fuv = divided_difference_uv(&fs, &h);
    let guv = divided_difference_uv(&gs, &h);

    let candidates = candidate_sums(&fuv, &guv, window.is_some())?;

    let mut pairs: Vec<(f64, f64)> = Vec::new();
    for w in candidates {
        let fv = eval_in_u(&fuv, w);
        let gv = eval_in_u(&guv, w);
        let size = |p: &UvPoly| p.iter().map(|c| c.abs_eval(w.abs())).fold(0.0, f64::max);
        let f_flat = fv.norm_inf() <= 1e-12 * size(&fuv).max(1e-300);
        let g_flat = gv.norm_inf() <= 1e-12 * size(&guv).max(1e-300);
        if f_flat && g_flat {
            return Err(NodalError::InfiniteDoublePoints);
        }
        let (primary, other) = if fv.degree() >= 1 && !f_flat {
            (&fv, &gv)
        } else {
            (&gv, &fv)
        };
        if primary.degree() == 0 {
            continue;
        }
        for v in primary.real_roots(rt)?.values() {
            let disc = w * w - 4.0 * v;
            if disc <= 0.0 {
                continue;
            }
            let other_scale = other.abs_eval(v).max(1e-300);
            if other.eval(v).abs() > 1e-3 * other_scale {
                continue;
            }
            let d = disc.sqrt();
            let (s0, t0) = (0.5 * (w - d), 0.5 * (w + d));
            if let Some((s1, t1)) = polish_pair(&fs, &gs, s0, t0, 100) {
                let (s2, t2) = (center + scale * s1, center + scale * t1);
                let (s3, t3) = polish_pair(&c.f, &c.g, s2, t2, 100).unwrap_or((s2, t2));
                pairs.push((s3, t3));
            }
        }
    }

    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let mut out: Vec<DoublePoint> = Vec::new();
    for (s, t) in pairs {
        if t - s <= tol.separation_tol {
            continue;
        }
        if relative_gap(&c.f, s, t) >= tol.point_tol || relative_gap(&c.g, s, t) >= tol.point_tol {
            return Err(NodalError::NoConvergence { s, t });
        }
        let dup = out.iter().any(|p| {
            (p.s - s).abs() <= tol.separation_tol * (1.0 + s.abs())
                && (p.t - t).abs() <= tol.separation_tol * (1.0 + t.abs())
        });
        if dup {
            continue;
        }
        let dp = DoublePoint::at(c, s, t);
        if dp.transversality <= tol.trans_tol {
            return Err(NodalError::DegenerateIntersection {
                s,
                t,
                transversality: dp.transversality,
            });
        }
        out.push(dp);
    }
    out.sort_by(|a, b| a.s.total_cmp(&b.s));
    Ok(out)
}

/// Real roots of the resultant, plus near-zero extrema of it (even
/// multiplicity roots produced by symmetric curves).
fn candidate_sums(fuv: &UvPoly, guv: &UvPoly, windowed: bool) -> Result<Vec<f64>, NodalError> {
    let r = if fuv.len() <= 1 {
        // F does not involve v: its own zeros in u are the candidates.
        fuv.first().cloned().unwrap_or_else(Poly::zero)
    } else {
        resultant_v(fuv, guv)
    };
    let r = r.trim_relative(1e-13);
    if r.is_zero() {
        return Err(NodalError::InfiniteDoublePoints);
    }
    if r.degree() == 0 {
        return Ok(Vec::new());
    }
    let limit = if windowed { 2.2 } else { f64::INFINITY };
    let mut out: Vec<f64> = r
        .real_roots(1e-12)
        .map(|l| l.values())
        .or_else(|_| Ok::<_, NodalError>(Vec::new()))?;
    if r.degree() >= 2 {
        let dr = r.derivative();
        if let Ok(crit) = dr.real_roots(1e-12) {
            for x in crit.values() {
                if r.eval(x).abs() <= 1e-7 * r.abs_eval(x.abs()) {
                    out.push(x);
                }
            }
        }
    }
    out.retain(|x| x.abs() <= limit);
    out.sort_by(f64::total_cmp);
    out.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    CloseParameters { a: f64, b: f64 },
    TriplePoint { first: usize, second: usize },
    Tangential { index: usize, transversality: f64 },
    NotRegular { reason: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn summary(&self) -> String {
        self.violations
            .iter()
            .map(|v| match v {
                Violation::CloseParameters { a, b } => {
                    format!("crossing parameters {a} and {b} are not separated")
                }
                Violation::TriplePoint { first, second } => {
                    format!("double points {first} and {second} coincide (triple point)")
                }
                Violation::Tangential {
                    index,
                    transversality,
                } => format!("double point {index} is tangential ({transversality:e})"),
                Violation::NotRegular { reason } => reason.clone(),
            })
            .collect::<Vec<_>>()
            .join("; ")
    }
}

/// Checks that the double points describe a regular projection.
pub fn validate_generic(c: &PlaneCurve, pts: &[DoublePoint], tol: &Tolerances) -> ValidationReport {
    let mut violations = Vec::new();
    let mut params: Vec<f64> = pts.iter().flat_map(|p| [p.s, p.t]).collect();
    params.sort_by(f64::total_cmp);
    for w in params.windows(2) {
        if w[1] - w[0] <= tol.separation_tol {
            violations.push(Violation::CloseParameters { a: w[0], b: w[1] });
        }
    }
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let (a, b) = (&pts[i], &pts[j]);
            let scale = 1.0 + a.x.abs().max(a.y.abs());
            if (a.x - b.x).abs() <= tol.point_tol * scale && (a.y - b.y).abs() <= tol.point_tol * scale {
                violations.push(Violation::TriplePoint { first: i, second: j });
            }
        }
    }
    for (index, p) in pts.iter().enumerate() {
        let fresh = DoublePoint::at(c, p.s, p.t);
        if fresh.transversality <= tol.trans_tol {
            violations.push(Violation::Tangential {
                index,
                transversality: fresh.transversality,
            });
        }
    }
    ValidationReport {
        valid: violations.is_empty(),
        violations,
    }
}

/// Computes the double points and validates them in one step; solver
/// failures become violations.
pub fn check_projection(c: &PlaneCurve, tol: &Tolerances) -> (Vec<DoublePoint>, ValidationReport) {
    match double_points(c, tol) {
        Ok(pts) => {
            let report = validate_generic(c, &pts, tol);
            (pts, report)
        }
        Err(e) => (
            Vec::new(),
            ValidationReport {
                valid: false,
                violations: vec![Violation::NotRegular {
                    reason: format!("projection not regular: {e}"),
                }],
            },
        ),
    }
}
