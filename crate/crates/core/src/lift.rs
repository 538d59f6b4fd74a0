//! Height polynomials realizing prescribed over/under data on a fixed
//! projection, crossing changes, and the braid-to-polynomial-knot pipeline.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::braid::{
    as_quasitoric, braid_closure_diagram, crossing_change_count, degree_sequence_bound, BraidError, BraidWord,
    DegreeSequence, QuasitoricPattern,
};
use crate::diagram::{gauss_alignments, lift_with_points, DiagramError, KnotDiagram, Role};
use crate::invariants::{InvariantError, InvariantProfile};
use crate::nodal::templates::{curve_gauss_sequence, toric_projection_with, SEARCH_BUDGET};
use crate::nodal::{double_points, validate_generic, DoublePoint, NodalError, PlaneCurve};
use crate::poly::{parse_poly, ParseError, Poly};
use crate::Tolerances;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LiftError {
    #[error("crossing {0} has both visits in runs of the same role")]
    InconsistentRoles(usize),
    #[error("crossing {id} is not a crossing of this diagram ({count} crossings)")]
    UnknownCrossing { id: usize, count: usize },
    #[error("deg h = {degree} exceeds the bound {bound}")]
    DegreeBoundExceeded { degree: usize, bound: usize },
    #[error("projection does not realize the braid closure: {0}")]
    GaussMismatch(String),
    #[error("malformed polynomial knot: {0}")]
    Malformed(String),
    #[error(transparent)]
    Braid(#[from] BraidError),
    #[error(transparent)]
    Nodal(#[from] NodalError),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Invariant(#[from] InvariantError),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// Desired roles at the sorted crossing parameters of a projection.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LiftPlan {
    pub crossing_params: Vec<f64>,
    pub desired_roles: Vec<Role>,
    /// Crossing id of each parameter.
    pub crossing_ids: Vec<usize>,
    /// Half-open index ranges of maximal constant-role blocks.
    pub runs: Vec<(usize, usize)>,
    /// Separators, one between each pair of adjacent runs.
    pub separators: Vec<f64>,
}

impl LiftPlan {
    /// Visits are sorted by parameter; each crossing id must appear twice
    /// with opposite roles.
    pub fn new(mut visits: Vec<(f64, usize, Role)>) -> Result<LiftPlan, LiftError> {
        visits.sort_by(|a, b| a.0.total_cmp(&b.0));
        let n = visits.len() / 2;
        let mut first: Vec<Option<Role>> = vec![None; n];
        let mut count = vec![0usize; n];
        for &(_, id, role) in &visits {
            if id >= n || visits.len() % 2 == 1 {
                return Err(LiftError::InconsistentRoles(id));
            }
            count[id] += 1;
            match first[id] {
                None => first[id] = Some(role),
                Some(r) if r != role => {}
                Some(_) => return Err(LiftError::InconsistentRoles(id)),
            }
        }
        if let Some(id) = count.iter().position(|&c| c != 2) {
            return Err(LiftError::InconsistentRoles(id));
        }
        let mut runs = Vec::new();
        let mut start = 0;
        for i in 1..=visits.len() {
            if i == visits.len() || visits[i].2 != visits[start].2 {
                runs.push((start, i));
                start = i;
            }
        }
        let separators = runs
            .windows(2)
            .map(|w| 0.5 * (visits[w[0].1 - 1].0 + visits[w[1].0].0))
            .collect();
        Ok(LiftPlan {
            crossing_params: visits.iter().map(|v| v.0).collect(),
            desired_roles: visits.iter().map(|v| v.2).collect(),
            crossing_ids: visits.iter().map(|v| v.1).collect(),
            runs,
            separators,
        })
    }

    /// Plan reproducing the roles of an existing diagram.
    pub fn from_diagram(d: &KnotDiagram) -> Result<LiftPlan, LiftError> {
        LiftPlan::new(d.visits.iter().map(|v| (v.param, v.crossing_id, v.role)).collect())
    }

    /// Number of sign variations in the role sequence.
    pub fn variations(&self) -> usize {
        self.separators.len()
    }
}

/// `h = ±∏(t − s_i)`, positive on over-visits and negative on under-visits.
pub fn construct_height(plan: &LiftPlan) -> Result<Poly, LiftError> {
    let n = plan.variations();
    // Symmetric separators leave round-off in coefficients that vanish exactly.
    let mut h = Poly::from_roots(&plan.separators, 1.0).chop(1e-13);
    let first_over = plan.desired_roles.first() == Some(&Role::Over);
    // Sign of the product left of every separator is (-1)^N.
    if first_over != n.is_multiple_of(2) {
        h = -h;
    }
    if plan.desired_roles.is_empty() {
        return Ok(Poly::constant(1.0));
    }
    let mut over_value = vec![f64::NAN; plan.crossing_params.len() / 2];
    let mut under_value = over_value.clone();
    for ((&t, &role), &id) in plan
        .crossing_params
        .iter()
        .zip(&plan.desired_roles)
        .zip(&plan.crossing_ids)
    {
        let v = h.eval(t);
        let good = match role {
            Role::Over => v > 0.0,
            Role::Under => v < 0.0,
        };
        if !good {
            return Err(LiftError::InconsistentRoles(id));
        }
        match role {
            Role::Over => over_value[id] = v,
            Role::Under => under_value[id] = v,
        }
    }
    if let Some(id) = (0..over_value.len()).find(|&i| over_value[i] <= under_value[i]) {
        return Err(LiftError::InconsistentRoles(id));
    }
    debug_assert_eq!(h.degree(), n);
    Ok(h)
}

/// A height of degree at most `degree` with `h(over) > h(under)` at every
/// crossing, found by the Ho-Kashyap iteration on the separation
/// inequalities in a scaled Chebyshev basis. `None` when the iteration does
/// not reach a separating solution.
pub fn separating_height(plan: &LiftPlan, degree: usize) -> Option<Poly> {
    let n = plan.crossing_params.len() / 2;
    if n == 0 || degree == 0 {
        return None;
    }
    let mut over = vec![0.0; n];
    let mut under = vec![0.0; n];
    for ((&t, &role), &id) in plan.crossing_params.iter().zip(&plan.desired_roles).zip(&plan.crossing_ids) {
        match role {
            Role::Over => over[id] = t,
            Role::Under => under[id] = t,
        }
    }
    let scale = 1.05 * plan.crossing_params.iter().fold(1.0f64, |m, t| m.max(t.abs()));
    let x = Poly::monomial(1.0 / scale, 1);
    let mut basis = vec![Poly::constant(1.0), x.clone()];
    while basis.len() <= degree {
        let k = basis.len();
        let next = &(&x * &basis[k - 1]).scale(2.0) - &basis[k - 2];
        basis.push(next);
    }
    let m = nalgebra::DMatrix::from_fn(n, degree, |c, k| basis[k + 1].eval(over[c]) - basis[k + 1].eval(under[c]));
    let pinv = m.clone().pseudo_inverse(1e-12).ok()?;
    let mut b = nalgebra::DVector::from_element(n, 1.0);
    for _ in 0..5000 {
        let a = &pinv * &b;
        let fit = &m * &a;
        if fit.min() > 1e-3 * fit.max() {
            let h = a
                .iter()
                .zip(&basis[1..])
                .fold(Poly::zero(), |acc, (&c, t)| &acc + &t.scale(c));
            return Some(h.scale(1.0 / fit.min()));
        }
        let e = &fit - &b;
        if e.amax() < 1e-12 {
            return None;
        }
        b += e.map(|v| v + v.abs()) * 0.5;
    }
    None
}

/// A polynomial long knot `t ↦ (f(t), g(t), h(t))` with its diagram.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyKnot {
    pub f: Poly,
    pub g: Poly,
    pub h: Poly,
    pub diagram: KnotDiagram,
    pub degree_seq: DegreeSequence,
    /// Double points of `(f, g)`; crossing `k` of the diagram is point `k`.
    pub points: Vec<DoublePoint>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyKnotJson {
    pub f: String,
    pub g: String,
    pub h: String,
    pub degrees: [usize; 3],
}

impl PolyKnot {
    /// Lifts `(f, g)` by `h`, computing and validating the double points.
    pub fn from_polys(f: Poly, g: Poly, h: Poly, tol: &Tolerances) -> Result<PolyKnot, LiftError> {
        let curve = PlaneCurve::new(f, g);
        let points = double_points(&curve, tol)?;
        let report = validate_generic(&curve, &points, tol);
        if !report.valid {
            return Err(DiagramError::NotRegular(report.summary()).into());
        }
        PolyKnot::with_points(curve, h, points, tol)
    }

    fn with_points(curve: PlaneCurve, h: Poly, points: Vec<DoublePoint>, tol: &Tolerances) -> Result<PolyKnot, LiftError> {
        let diagram = lift_with_points(&curve, &points, &h, tol)?;
        let degree_seq = DegreeSequence::exact(curve.f.degree() as u32, curve.g.degree() as u32, h.degree() as u32);
        Ok(PolyKnot {
            f: curve.f,
            g: curve.g,
            h,
            diagram,
            degree_seq,
            points,
        })
    }

    pub fn curve(&self) -> PlaneCurve {
        PlaneCurve::new(self.f.clone(), self.g.clone())
    }

    pub fn degrees(&self) -> [usize; 3] {
        [self.f.degree(), self.g.degree(), self.h.degree()]
    }

    pub fn to_json(&self) -> PolyKnotJson {
        PolyKnotJson {
            f: self.f.to_string(),
            g: self.g.to_string(),
            h: self.h.to_string(),
            degrees: self.degrees(),
        }
    }

    pub fn from_json(j: &PolyKnotJson, tol: &Tolerances) -> Result<PolyKnot, LiftError> {
        let k = PolyKnot::from_polys(parse_poly(&j.f)?, parse_poly(&j.g)?, parse_poly(&j.h)?, tol)?;
        if k.degrees() != j.degrees {
            return Err(LiftError::Malformed(format!(
                "declared degrees {:?} but polynomials have {:?}",
                j.degrees,
                k.degrees()
            )));
        }
        Ok(k)
    }
}

/// Flips both visits of each listed crossing and rebuilds `h` from scratch.
/// The result satisfies `deg h ≤ N + 4·|ids|`, where `N` counts the role
/// variations of `k`.
pub fn apply_crossing_changes(k: &PolyKnot, ids: &BTreeSet<usize>, tol: &Tolerances) -> Result<PolyKnot, LiftError> {
    let count = k.diagram.crossing_count();
    if let Some(&id) = ids.iter().find(|&&id| id >= count) {
        return Err(LiftError::UnknownCrossing { id, count });
    }
    let old = LiftPlan::from_diagram(&k.diagram)?;
    let plan = LiftPlan::new(
        k.diagram
            .visits
            .iter()
            .map(|v| {
                let role = if ids.contains(&v.crossing_id) { v.role.flip() } else { v.role };
                (v.param, v.crossing_id, role)
            })
            .collect(),
    )?;
    let h = construct_height(&plan)?;
    let bound = old.variations() + 4 * ids.len();
    if h.degree() > bound {
        return Err(LiftError::DegreeBoundExceeded {
            degree: h.degree(),
            bound,
        });
    }
    let out = PolyKnot::with_points(k.curve(), h, k.points.clone(), tol)?;
    if out.diagram.roles() != plan_roles_in_visit_order(&out.diagram, &plan) {
        return Err(LiftError::InconsistentRoles(0));
    }
    Ok(out)
}

fn plan_roles_in_visit_order(d: &KnotDiagram, plan: &LiftPlan) -> Vec<Role> {
    d.visits
        .iter()
        .map(|v| {
            let i = plan
                .crossing_params
                .iter()
                .zip(&plan.crossing_ids)
                .position(|(&t, &id)| t == v.param && id == v.crossing_id)
                .expect("visit present in plan");
            plan.desired_roles[i]
        })
        .collect()
}

/// Builds a polynomial knot for the closure of a quasitoric braid: a
/// projection of the toric closure, roles transported from the braid along a
/// Gauss-sequence alignment, and a height from the sign variations.
pub fn construct_polyknot(pat: &QuasitoricPattern) -> Result<PolyKnot, LiftError> {
    construct_polyknot_with(pat, &Tolerances::default())
}

pub fn construct_polyknot_with(pat: &QuasitoricPattern, tol: &Tolerances) -> Result<PolyKnot, LiftError> {
    let (p, q) = (pat.p, pat.q);
    if !pat.is_well_formed() {
        return Err(LiftError::Malformed("quasitoric sign table has the wrong shape".into()));
    }
    let word = pat.to_word();
    let target_diagram = braid_closure_diagram(&word)?;
    let r = crossing_change_count(pat);
    let bound = degree_sequence_bound(p as u32, q as u32, r as u32)?;
    let curve = toric_projection_with(p, q, bound.r0.unwrap_or(1) as usize, tol, SEARCH_BUDGET)?;
    let points = double_points(&curve, tol)?;
    let report = validate_generic(&curve, &points, tol);
    if !report.valid {
        return Err(DiagramError::NotRegular(report.summary()).into());
    }
    let curve_seq = curve_gauss_sequence(&points);
    let alignments = gauss_alignments(&curve_seq, &target_diagram.gauss_sequence());
    if alignments.is_empty() {
        return Err(LiftError::GaussMismatch(format!(
            "{} double points against {} braid crossings",
            points.len(),
            target_diagram.crossing_count()
        )));
    }
    let target = InvariantProfile::of(&target_diagram)?;

    // Curve visits in parameter order, as (param, crossing id).
    let mut visits: Vec<(f64, usize)> = points
        .iter()
        .enumerate()
        .flat_map(|(i, pt)| [(pt.s, i), (pt.t, i)])
        .collect();
    visits.sort_by(|a, b| a.0.total_cmp(&b.0));
    let braid_roles = target_diagram.roles();
    let len = visits.len();

    let mut plans = Vec::new();
    for a in &alignments {
        let roles: Vec<(f64, usize, Role)> = visits
            .iter()
            .enumerate()
            .map(|(i, &(t, id))| {
                let j = if a.reversed { (a.rotation + len - i) % len } else { (a.rotation + i) % len };
                (t, id, braid_roles[j])
            })
            .collect();
        let plan = LiftPlan::new(roles)?;
        plans.push(plan);
    }
    plans.sort_by_key(|p| p.variations());
    plans.dedup_by(|a, b| a.desired_roles == b.desired_roles);

    let degree_bound = 2 * q - 1 + 4 * r;
    let mut last_err = None;
    for plan in &plans {
        let mut h = construct_height(plan)?;
        if h.degree() > degree_bound {
            // The cut at infinity can split a run, costing one variation
            // over the cyclic count; a lower-degree height may still exist.
            match separating_height(plan, degree_bound) {
                Some(low) => h = low,
                None => continue,
            }
        }
        for h in [h.clone(), -h] {
            let k = match PolyKnot::with_points(curve.clone(), h, points.clone(), tol) {
                Ok(k) => k,
                Err(e) => {
                    last_err = Some(e);
                    continue;
                }
            };
            if InvariantProfile::of(&k.diagram)? == target {
                return Ok(k);
            }
        }
    }
    if let Some(plan) = plans.first() {
        let degree = plan.variations();
        if degree > degree_bound {
            return Err(LiftError::DegreeBoundExceeded {
                degree,
                bound: degree_bound,
            });
        }
    }
    Err(last_err.unwrap_or_else(|| {
        LiftError::GaussMismatch("no alignment reproduces the invariants of the braid closure".into())
    }))
}

/// Parses a braid, checks it is quasitoric, and constructs its polynomial knot.
pub fn construct_from_word(w: &BraidWord, tol: &Tolerances) -> Result<PolyKnot, LiftError> {
    construct_polyknot_with(&as_quasitoric(w)?, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::parse_braid;
    use crate::diagram::sign_variation_count;

    fn plan(visits: &[(f64, usize, Role)]) -> LiftPlan {
        LiftPlan::new(visits.to_vec()).unwrap()
    }

    #[test]
    fn single_crossing_height() {
        let p = plan(&[(-1.0, 0, Role::Over), (1.0, 0, Role::Under)]);
        assert_eq!(p.separators, vec![0.0]);
        let h = construct_height(&p).unwrap();
        assert_eq!(h.coeffs(), &[0.0, -1.0]);
    }

    #[test]
    fn empty_plan_is_constant() {
        let p = plan(&[]);
        assert_eq!(construct_height(&p).unwrap(), Poly::constant(1.0));
    }

    #[test]
    fn rejects_same_roles() {
        assert!(LiftPlan::new(vec![(0.0, 0, Role::Over), (1.0, 0, Role::Over)]).is_err());
    }

    #[test]
    fn trefoil_construction_and_mirror() {
        let tol = Tolerances::default();
        let k = construct_polyknot(&QuasitoricPattern::toric(2, 3)).unwrap();
        assert_eq!(k.diagram.crossing_count(), 3);
        assert_eq!(&k.degrees()[..2], &[3, 4]);
        assert!(k.h.degree() <= 5);
        let all: BTreeSet<usize> = (0..3).collect();
        let m = apply_crossing_changes(&k, &all, &tol).unwrap();
        assert_eq!(m.diagram.gauss, k.diagram.mirror().gauss);
        let same = apply_crossing_changes(&k, &BTreeSet::new(), &tol).unwrap();
        assert_eq!(same.diagram, k.diagram);
        assert_eq!(same.h, k.h);
    }

    #[test]
    fn torus_3_4() {
        let k = construct_polyknot(&QuasitoricPattern::toric(3, 4)).unwrap();
        assert_eq!(k.diagram.crossing_count(), 8);
        let word = crate::braid::toric_braid(3, 4);
        let expected = InvariantProfile::of(&braid_closure_diagram(&word).unwrap()).unwrap();
        assert_eq!(InvariantProfile::of(&k.diagram).unwrap(), expected);
        assert_eq!(
            sign_variation_count(&k.diagram.visits),
            LiftPlan::from_diagram(&k.diagram).unwrap().variations()
        );
    }

    #[test]
    fn json_round_trip() {
        let tol = Tolerances::default();
        let k = construct_polyknot(&QuasitoricPattern::toric(2, 3)).unwrap();
        let j = k.to_json();
        let text = serde_json::to_string(&j).unwrap();
        let back = PolyKnot::from_json(&serde_json::from_str(&text).unwrap(), &tol).unwrap();
        assert_eq!(back.diagram.gauss, k.diagram.gauss);
    }

    #[test]
    fn section_four_word() {
        let w = parse_braid("p=3; s1^-1 s2 s1 s2^-1 s1^-1 s2 s1 s2^-1 s1^-1 s2 s1 s2^-1 s1^-1 s2").unwrap();
        let pat = as_quasitoric(&w).unwrap();
        assert_eq!(crossing_change_count(&pat), 7);
        let k = construct_polyknot(&pat).unwrap();
        assert_eq!(k.diagram.crossing_count(), 14);
        assert_eq!(k.h.degree(), 9);
        let ids = crate::invariants::identify(&InvariantProfile::of(&k.diagram).unwrap()).unwrap();
        assert_eq!(ids[0].name, "8_17");
    }
}
