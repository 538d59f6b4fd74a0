//! Dense real univariate polynomials: arithmetic, evaluation and real-root
//! isolation. The text grammar lives in [`crate::poly::parse`].

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub mod parse;

pub use parse::{parse_poly, print_poly, ParseError};

/// Coefficients at or below this magnitude are dropped from the top end.
pub const EPS_LEAD: f64 = 1e-12;
/// Default residual tolerance for [`Poly::real_roots`].
pub const ROOT_TOL: f64 = 1e-10;
/// Relative remainder cutoff of the approximate gcd used for multiplicities.
pub const GCD_CUTOFF: f64 = 1e-8;
/// Newton iteration budget per root.
pub const NEWTON_BUDGET: usize = 100;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PolyError {
    #[error("the zero polynomial has no isolated roots")]
    ZeroPolynomial,
    #[error("root polishing did not converge near t = {near} (residual {residual:e})")]
    NoConvergence { near: f64, residual: f64 },
}

/// A real polynomial stored in ascending degree order. The zero polynomial
/// is the empty coefficient list.
#[derive(Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(into = "Vec<f64>", from = "Vec<f64>")]
pub struct Poly {
    coeffs: Vec<f64>,
}

impl From<Vec<f64>> for Poly {
    fn from(coeffs: Vec<f64>) -> Self {
        Poly::new(coeffs)
    }
}

impl From<Poly> for Vec<f64> {
    fn from(p: Poly) -> Self {
        p.coeffs
    }
}

impl Poly {
    /// Builds a polynomial from ascending coefficients, dropping negligible
    /// leading terms.
    ///
    /// Panics if a coefficient is not finite.
    pub fn new(mut coeffs: Vec<f64>) -> Poly {
        assert!(
            coeffs.iter().all(|c| c.is_finite()),
            "polynomial coefficients must be finite"
        );
        while coeffs.last().is_some_and(|c| c.abs() <= EPS_LEAD) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Poly {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: f64) -> Poly {
        Poly::new(vec![c])
    }

    /// The identity polynomial `t`.
    pub fn t() -> Poly {
        Poly::new(vec![0.0, 1.0])
    }

    pub fn monomial(c: f64, k: usize) -> Poly {
        let mut coeffs = vec![0.0; k + 1];
        coeffs[k] = c;
        Poly::new(coeffs)
    }

    /// `lead * ∏ (t - r)`.
    pub fn from_roots(roots: &[f64], lead: f64) -> Poly {
        let mut coeffs = vec![lead];
        for &r in roots {
            let mut next = vec![0.0; coeffs.len() + 1];
            for (k, &c) in coeffs.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= r * c;
            }
            coeffs = next;
        }
        Poly::new(coeffs)
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> f64 {
        self.coeffs.last().copied().unwrap_or(0.0)
    }

    pub fn coeff(&self, k: usize) -> f64 {
        self.coeffs.get(k).copied().unwrap_or(0.0)
    }

    /// Horner evaluation.
    pub fn eval(&self, t: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * t + c)
    }

    /// Value and first derivative in one Horner pass.
    pub fn eval_with_derivative(&self, t: f64) -> (f64, f64) {
        let mut p = 0.0;
        let mut dp = 0.0;
        for &c in self.coeffs.iter().rev() {
            dp = dp * t + p;
            p = p * t + c;
        }
        (p, dp)
    }

    /// `Σ |a_k| |t|^k`, the natural rounding scale of an evaluation at `t`.
    pub fn abs_eval(&self, t: f64) -> f64 {
        let t = t.abs();
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * t + c.abs())
    }

    pub fn norm_inf(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| k as f64 * c)
                .collect(),
        )
    }

    pub fn scale(&self, k: f64) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    /// `p(-t)`.
    pub fn reflect(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, &c)| if k % 2 == 1 { -c } else { c })
                .collect(),
        )
    }

    /// Drops top coefficients that are negligible relative to the largest one.
    pub fn trim_relative(&self, rel: f64) -> Poly {
        let cut = self.norm_inf() * rel;
        let mut coeffs = self.coeffs.clone();
        while coeffs.last().is_some_and(|c| c.abs() <= cut) {
            coeffs.pop();
        }
        Poly::new(coeffs)
    }

    /// Zeroes every coefficient that is negligible relative to the largest one.
    pub fn chop(&self, rel: f64) -> Poly {
        let cut = self.norm_inf() * rel;
        Poly::new(self.coeffs.iter().map(|&c| if c.abs() <= cut { 0.0 } else { c }).collect())
    }

    pub fn powi(&self, n: u32) -> Poly {
        let mut acc = Poly::constant(1.0);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Euclidean division. Panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let dd = divisor.degree();
        if self.is_zero() || self.degree() < dd {
            return (Poly::zero(), self.clone());
        }
        let lead = divisor.leading();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0.0; self.degree() - dd + 1];
        for k in (0..quot.len()).rev() {
            let c = rem[k + dd] / lead;
            quot[k] = c;
            for (j, &d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= c * d;
            }
            rem[k + dd] = 0.0;
        }
        rem.truncate(dd);
        (Poly::new(quot), Poly::new(rem))
    }

    /// Scales so the leading coefficient is 1.
    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        self.scale(1.0 / self.leading())
    }

    /// Sturm sequence `p, p', -rem(p, p'), ...`, each term normalized to unit
    /// max-norm. Only reliable for well-conditioned inputs.
    pub fn sturm_sequence(&self) -> Vec<Poly> {
        let mut seq = Vec::new();
        if self.is_zero() {
            return seq;
        }
        let norm = |p: &Poly| {
            let n = p.norm_inf();
            if n > 0.0 {
                p.scale(1.0 / n)
            } else {
                p.clone()
            }
        };
        let mut a = norm(self);
        let mut b = norm(&self.derivative());
        seq.push(a.clone());
        while !b.is_zero() {
            seq.push(b.clone());
            let (_, r) = a.div_rem(&b);
            let r = r.trim_relative(1e-13);
            a = b;
            b = norm(&(-&r));
        }
        seq
    }

    /// Number of distinct real roots in `(a, b]` by Sturm's theorem.
    pub fn sturm_count(&self, a: f64, b: f64) -> usize {
        let seq = self.sturm_sequence();
        let changes = |x: f64| {
            let mut count = 0usize;
            let mut last = 0.0f64;
            for p in &seq {
                let v = p.eval(x);
                if v != 0.0 {
                    if last != 0.0 && (v > 0.0) != (last > 0.0) {
                        count += 1;
                    }
                    last = v;
                }
            }
            count
        };
        changes(a).saturating_sub(changes(b))
    }

    /// Cauchy bound: every root has absolute value below it.
    pub fn root_bound(&self) -> f64 {
        let lead = self.leading().abs();
        let m = self.coeffs[..self.coeffs.len().saturating_sub(1)]
            .iter()
            .fold(0.0f64, |m, c| m.max(c.abs()));
        1.0 + m / lead
    }

    /// Real roots with multiplicities.
    ///
    /// Roots are bracketed between consecutive extrema (found recursively from
    /// the derivative), polished by safeguarded Newton iteration, and merged
    /// with the multiple roots reported by an approximate gcd with `p'`.
    pub fn real_roots(&self, tol: f64) -> Result<RealRootList, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        let mut roots: Vec<RealRoot> = Vec::new();
        // Exact zero roots from vanishing low coefficients.
        let zeros = self.coeffs.iter().take_while(|&&c| c == 0.0).count();
        let reduced = Poly::new(self.coeffs[zeros..].to_vec());
        if zeros > 0 {
            roots.push(RealRoot {
                value: 0.0,
                multiplicity: zeros,
            });
        }
        if reduced.degree() >= 1 {
            roots.extend(reduced.nonzero_real_roots(tol)?);
        }
        roots.sort_by(|a, b| a.value.total_cmp(&b.value));
        Ok(RealRootList::clustered(roots, tol))
    }

    fn nonzero_real_roots(&self, tol: f64) -> Result<Vec<RealRoot>, PolyError> {
        let bound = self.root_bound();
        let simple = sign_change_roots(self, -bound, bound, tol)?;
        let mut roots: Vec<RealRoot> = simple
            .into_iter()
            .map(|value| RealRoot {
                value,
                multiplicity: 1,
            })
            .collect();

        let g = approx_gcd(self, &self.derivative(), GCD_CUTOFF);
        if g.degree() >= 1 {
            let repeated = g.real_roots(tol.max(1e-8))?;
            for rr in repeated.roots {
                let scale = self.abs_eval(rr.value).max(1.0);
                if self.eval(rr.value).abs() > 1e-6 * scale {
                    continue;
                }
                let radius = 1e-4 * rr.value.abs().max(1.0);
                roots.retain(|r| (r.value - rr.value).abs() > radius);
                roots.push(RealRoot {
                    value: rr.value,
                    multiplicity: rr.multiplicity + 1,
                });
            }
        }
        Ok(roots)
    }
}

/// Approximate monic gcd by a Euclidean remainder sequence that stops once a
/// remainder falls below `cutoff` relative to its dividend.
pub fn approx_gcd(a: &Poly, b: &Poly, cutoff: f64) -> Poly {
    if b.is_zero() {
        return a.monic();
    }
    let mut x = a.scale(1.0 / a.norm_inf());
    let mut y = b.scale(1.0 / b.norm_inf());
    loop {
        if y.degree() == 0 {
            return Poly::constant(1.0);
        }
        let (_, r) = x.div_rem(&y);
        if r.norm_inf() <= cutoff * x.norm_inf().max(y.norm_inf()) {
            return y.monic();
        }
        x = y;
        y = r.scale(1.0 / r.norm_inf());
    }
}

/// Roots in `[lo, hi]` at which `p` changes sign.
fn sign_change_roots(p: &Poly, lo: f64, hi: f64, tol: f64) -> Result<Vec<f64>, PolyError> {
    match p.degree() {
        0 => return Ok(Vec::new()),
        1 => {
            let r = -p.coeff(0) / p.coeff(1);
            return Ok(if (lo..=hi).contains(&r) {
                vec![r]
            } else {
                Vec::new()
            });
        }
        _ => {}
    }
    let extrema = sign_change_roots(&p.derivative(), lo, hi, tol)?;
    let mut knots = Vec::with_capacity(extrema.len() + 2);
    knots.push(lo);
    knots.extend(extrema.into_iter().filter(|&x| x > lo && x < hi));
    knots.push(hi);

    let mut roots: Vec<f64> = Vec::new();
    for w in knots.windows(2) {
        let (a, b) = (w[0], w[1]);
        let (pa, pb) = (p.eval(a), p.eval(b));
        if pa == 0.0 {
            if roots.last() != Some(&a) {
                roots.push(a);
            }
            continue;
        }
        if pb == 0.0 {
            roots.push(b);
            continue;
        }
        if (pa > 0.0) != (pb > 0.0) {
            roots.push(polish_bracketed(p, a, b, pa, tol)?);
        }
    }
    Ok(roots)
}

/// Safeguarded Newton iteration inside a sign-change bracket.
fn polish_bracketed(p: &Poly, mut a: f64, mut b: f64, pa: f64, tol: f64) -> Result<f64, PolyError> {
    let neg_at_a = pa < 0.0;
    let mut x = 0.5 * (a + b);
    for _ in 0..NEWTON_BUDGET + 64 {
        let (v, dv) = p.eval_with_derivative(x);
        if v == 0.0 {
            return Ok(x);
        }
        if (v < 0.0) == neg_at_a {
            a = x;
        } else {
            b = x;
        }
        if (b - a).abs() <= 2.0 * f64::EPSILON * x.abs().max(f64::MIN_POSITIVE) {
            break;
        }
        let newton = x - v / dv;
        x = if dv != 0.0 && newton > a && newton < b {
            newton
        } else {
            0.5 * (a + b)
        };
        if (b - a).abs() <= 4.0 * f64::EPSILON * x.abs().max(1e-300) {
            break;
        }
    }
    let residual = p.eval(x).abs();
    let scale = neighbourhood_scale(p, x);
    if residual > tol * scale {
        return Err(PolyError::NoConvergence { near: x, residual });
    }
    Ok(x)
}

/// Bound for `|p|` on `[x - 1, x + 1]`, floored at 1.
fn neighbourhood_scale(p: &Poly, x: f64) -> f64 {
    p.abs_eval(x.abs() + 1.0).max(1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RealRoot {
    pub value: f64,
    pub multiplicity: usize,
}

/// Sorted real roots whose values differ by more than twice the tolerance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealRootList {
    pub roots: Vec<RealRoot>,
    pub tolerance: f64,
}

impl RealRootList {
    fn clustered(sorted: Vec<RealRoot>, tol: f64) -> RealRootList {
        let mut roots: Vec<RealRoot> = Vec::with_capacity(sorted.len());
        for r in sorted {
            match roots.last_mut() {
                Some(last) if r.value - last.value <= 2.0 * tol => {
                    if r.multiplicity > last.multiplicity {
                        last.value = r.value;
                    }
                    last.multiplicity = last.multiplicity.max(r.multiplicity);
                }
                _ => roots.push(r),
            }
        }
        RealRootList {
            roots,
            tolerance: tol,
        }
    }

    pub fn values(&self) -> Vec<f64> {
        self.roots.iter().map(|r| r.value).collect()
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({})", print_poly(self))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_poly(self))
    }
}

fn add_coeffs(a: &[f64], b: &[f64], sign: f64) -> Poly {
    let n = a.len().max(b.len());
    Poly::new(
        (0..n)
            .map(|k| a.get(k).copied().unwrap_or(0.0) + sign * b.get(k).copied().unwrap_or(0.0))
            .collect(),
    )
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        add_coeffs(&self.coeffs, &rhs.coeffs, 1.0)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        add_coeffs(&self.coeffs, &rhs.coeffs, -1.0)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![0.0; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(-1.0)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}
