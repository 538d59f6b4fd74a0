//! Seed projections realizing toric braid closures for two and three strands,
//! with a deterministic coordinate search for pairs without a working seed.

use rayon::prelude::*;

use super::{double_points, NodalError, PlaneCurve};
use crate::braid::{braid_closure_diagram, gcd, toric_braid};
use crate::diagram::canonical_gauss;
use crate::poly::{parse_poly, Poly};
use crate::Tolerances;

/// Default number of candidate evaluations in the coordinate search.
pub const SEARCH_BUDGET: usize = 400;

enum Coeffs {
    /// `Σ c_k · 2T_k(t/2)`.
    Chebyshev(&'static [f64]),
    Text(&'static str),
}

struct Seed {
    p: usize,
    q: usize,
    f: Coeffs,
    g: Coeffs,
}

const CUBIC: Coeffs = Coeffs::Chebyshev(&[0.0, 0.0, 0.0, 1.0]);
const QUINTIC: Coeffs = Coeffs::Chebyshev(&[0.0, 0.0, 0.0, 0.0, 0.0, 1.0]);

const SEEDS: &[Seed] = &[
    Seed {
        p: 2,
        q: 3,
        f: Coeffs::Text("t(t - 1)(t + 1)"),
        g: Coeffs::Text("t^2(t - 1.15)(t + 1.15)"),
    },
    Seed {
        p: 2,
        q: 5,
        f: CUBIC,
        g: Coeffs::Chebyshev(&[0.0, -1.17045, 4.422047, 0.0, -2.196935, -2.171331, 0.0, 1.0]),
    },
    Seed {
        p: 2,
        q: 7,
        f: CUBIC,
        g: Coeffs::Chebyshev(&[
            0.0, -5.6e-5, 7.22997, 0.0, -5.888952, -3.8e-5, 0.0, 5.9e-5, -2.336647, 0.0, 1.0,
        ]),
    },
    Seed {
        p: 3,
        q: 4,
        f: QUINTIC,
        g: Coeffs::Chebyshev(&[0.0, 0.68345, -0.18056, -1.18708, -0.79462, 0.0, 1.0]),
    },
    Seed {
        p: 3,
        q: 5,
        f: QUINTIC,
        g: Coeffs::Chebyshev(&[0.0, -0.31377, -0.39265, -0.00394, -0.03559, 0.0, 1.0]),
    },
    Seed {
        p: 3,
        q: 7,
        f: Coeffs::Text("t(t^2 - 6.431)(t^2 - 15.91)"),
        g: Coeffs::Text("t(t^2 - 0.18)(t^2 - 2.4899)(t^2 - 17.458)(t^2 - 16.15)(t^2 - 14.8)(t^2 - 11)"),
    },
];

/// `2 T_k(t / 2)`, the monic Chebyshev polynomial of degree `k`
/// (`2` for `k = 0`).
pub fn chebyshev2(k: usize) -> Poly {
    let mut a = Poly::constant(2.0);
    let mut b = Poly::t();
    if k == 0 {
        return a;
    }
    for _ in 1..k {
        let next = &(&b * &Poly::t()) - &a;
        a = b;
        b = next;
    }
    b
}

fn realize(c: &Coeffs) -> Poly {
    match c {
        Coeffs::Chebyshev(cs) => cs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0.0)
            .fold(Poly::zero(), |acc, (k, &c)| &acc + &chebyshev2(k).scale(c)),
        Coeffs::Text(s) => parse_poly(s).expect("seed polynomial parses"),
    }
}

/// Canonical unsigned Gauss sequence of the toric `(p, q)` closure.
pub fn toric_gauss_target(p: usize, q: usize) -> Vec<usize> {
    let d = braid_closure_diagram(&toric_braid(p, q)).expect("coprime toric closure is a knot");
    canonical_gauss(&d.gauss_sequence())
}

/// Crossing ids of a curve's double points in parameter order.
pub fn curve_gauss_sequence(pts: &[super::DoublePoint]) -> Vec<usize> {
    let mut visits: Vec<(f64, usize)> = pts
        .iter()
        .enumerate()
        .flat_map(|(i, p)| [(p.s, i), (p.t, i)])
        .collect();
    visits.sort_by(|a, b| a.0.total_cmp(&b.0));
    visits.into_iter().map(|(_, i)| i).collect()
}

/// Node count and whether the Gauss sequence matches `target`.
fn evaluate(c: &PlaneCurve, target: &[usize], tol: &Tolerances) -> (usize, bool) {
    match double_points(c, tol) {
        Ok(pts) => {
            let matched = canonical_gauss(&curve_gauss_sequence(&pts)) == target;
            (pts.len(), matched)
        }
        Err(_) => (0, false),
    }
}

fn score(nodes: usize, matched: bool, goal: usize) -> i64 {
    -(nodes.abs_diff(goal) as i64) * 2 + matched as i64
}

/// A plane curve of degree `(2p - 1, ≥ q + r0)` with exactly `(p - 1) q`
/// transverse double points whose Gauss sequence is that of the toric
/// `(p, q)` braid closure.
pub fn toric_projection(p: usize, q: usize, r0: usize) -> Result<PlaneCurve, NodalError> {
    toric_projection_with(p, q, r0, &Tolerances::default(), SEARCH_BUDGET)
}

pub fn toric_projection_with(
    p: usize,
    q: usize,
    r0: usize,
    tol: &Tolerances,
    budget: usize,
) -> Result<PlaneCurve, NodalError> {
    if !(p == 2 || p == 3) {
        return Err(NodalError::InvalidCurve(format!("no projection templates for p = {p}")));
    }
    if q == 0 || gcd(p as u32, q as u32) != 1 {
        return Err(NodalError::InvalidCurve(format!("({p}, {q}) is not a coprime pair")));
    }
    let goal = (p - 1) * q;
    let target = toric_gauss_target(p, q);
    let m = q + r0;
    let seed = SEEDS
        .iter()
        .filter(|s| s.p == p && s.q == q)
        .map(|s| PlaneCurve::new(realize(&s.f), realize(&s.g)))
        .filter(|c| c.g.degree() >= m)
        .min_by_key(|c| c.g.degree());
    let start = seed.unwrap_or_else(|| PlaneCurve::new(chebyshev2(2 * p - 1), chebyshev2(m)));
    coordinate_search(start, &target, goal, tol, budget).map_err(|best_nodes| NodalError::TemplateSearchFailed {
        p,
        q,
        best_nodes,
        target: goal,
    })
}

/// Perturbs one coefficient of `g` at a time, sweeping step sizes from coarse
/// to fine, and keeps the best candidate of each sweep (ties broken by
/// sweep order).
fn coordinate_search(
    start: PlaneCurve,
    target: &[usize],
    goal: usize,
    tol: &Tolerances,
    budget: usize,
) -> Result<PlaneCurve, usize> {
    let (nodes, matched) = evaluate(&start, target, tol);
    if nodes == goal && matched {
        return Ok(start);
    }
    let mut best = start;
    let mut best_score = score(nodes, matched, goal);
    let mut best_nodes = nodes;
    let mut used = 1;
    let steps = [0.3, 0.1, 0.03, 0.01];
    let mut step_idx = 0;
    while used < budget && step_idx < steps.len() {
        let step = steps[step_idx];
        let base = best.g.coeffs().to_vec();
        let norm = best.g.norm_inf();
        let lead = base.len() - 1;
        let candidates: Vec<PlaneCurve> = (0..lead)
            .flat_map(|k| [(k, 1.0), (k, -1.0)])
            .map(|(k, sign)| {
                let mut c = base.clone();
                c[k] += sign * step * base[k].abs().max(0.05 * norm);
                PlaneCurve::new(best.f.clone(), Poly::new(c))
            })
            .take(budget - used)
            .collect();
        used += candidates.len();
        let results: Vec<(usize, bool)> = candidates.par_iter().map(|c| evaluate(c, target, tol)).collect();
        let pick = results
            .iter()
            .enumerate()
            .map(|(i, &(n, m))| (score(n, m, goal), std::cmp::Reverse(i)))
            .max();
        match pick {
            Some((s, std::cmp::Reverse(i))) if s > best_score => {
                best = candidates[i].clone();
                best_score = s;
                best_nodes = results[i].0;
                if results[i].0 == goal && results[i].1 {
                    return Ok(best);
                }
            }
            _ => step_idx += 1,
        }
    }
    Err(best_nodes)
}
