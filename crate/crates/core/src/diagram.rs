//! Knot diagrams: crossing visits along the knot, Gauss and PD codes, writhe,
//! and the lift of a plane projection by a height polynomial.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::nodal::{double_points, validate_generic, DoublePoint, NodalError, PlaneCurve};
use crate::poly::Poly;
use crate::Tolerances;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DiagramError {
    #[error("crossing {0} is not visited exactly twice with opposite roles")]
    Unbalanced(usize),
    #[error("crossing {0} carries two different signs")]
    InconsistentSign(usize),
    #[error("height does not separate crossing {crossing} at t = {s} and t = {t} (gap {gap:e})")]
    HeightSeparationFailure {
        crossing: usize,
        s: f64,
        t: f64,
        gap: f64,
    },
    #[error("projection is not regular: {0}")]
    NotRegular(String),
    #[error("malformed Gauss code at token {position}: {message}")]
    GaussSyntax { position: usize, message: String },
    #[error(transparent)]
    Nodal(#[from] NodalError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Over,
    Under,
}

impl Role {
    pub fn flip(self) -> Role {
        match self {
            Role::Over => Role::Under,
            Role::Under => Role::Over,
        }
    }

    fn letter(self) -> char {
        match self {
            Role::Over => 'O',
            Role::Under => 'U',
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossingVisit {
    pub param: f64,
    pub crossing_id: usize,
    pub role: Role,
    pub local_sign: i8,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Closure {
    LongKnotArc,
    BraidClosure,
}

/// One `X[a, b, c, d]` tuple per crossing, listed counterclockwise from the
/// incoming under-edge.
pub type PdCode = Vec<[usize; 4]>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnotDiagram {
    pub visits: Vec<CrossingVisit>,
    pub gauss: String,
    pub pd: PdCode,
    pub writhe: i64,
    pub closure: Closure,
}

impl KnotDiagram {
    /// Builds the diagram from visits in traversal order. Crossing ids must be
    /// `0..n`. Edge `k` (1-based) runs into visit `k`; the last visit leads
    /// back into the first.
    pub fn from_visits(visits: Vec<CrossingVisit>, closure: Closure) -> Result<KnotDiagram, DiagramError> {
        let n = visits.len() / 2;
        let mut seen: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (i, v) in visits.iter().enumerate() {
            if v.crossing_id >= n || visits.len() % 2 == 1 {
                return Err(DiagramError::Unbalanced(v.crossing_id));
            }
            seen[v.crossing_id].push(i);
        }
        let len = visits.len();
        let mut pd = Vec::with_capacity(n);
        let mut writhe = 0i64;
        for (id, idx) in seen.iter().enumerate() {
            if idx.len() != 2 || visits[idx[0]].role == visits[idx[1]].role {
                return Err(DiagramError::Unbalanced(id));
            }
            let sign = visits[idx[0]].local_sign;
            if visits[idx[1]].local_sign != sign || !(sign == 1 || sign == -1) {
                return Err(DiagramError::InconsistentSign(id));
            }
            writhe += sign as i64;
            let (u, o) = if visits[idx[0]].role == Role::Under {
                (idx[0], idx[1])
            } else {
                (idx[1], idx[0])
            };
            let edge_in = |k: usize| k + 1;
            let edge_out = |k: usize| (k + 1) % len + 1;
            let (a, c) = (edge_in(u), edge_out(u));
            pd.push(if sign > 0 {
                [a, edge_out(o), c, edge_in(o)]
            } else {
                [a, edge_in(o), c, edge_out(o)]
            });
        }
        let gauss = visits
            .iter()
            .map(|v| {
                format!(
                    "{}{}{}",
                    v.role.letter(),
                    v.crossing_id + 1,
                    if v.local_sign > 0 { '+' } else { '-' }
                )
            })
            .collect::<Vec<_>>()
            .join(" ");
        Ok(KnotDiagram {
            visits,
            gauss,
            pd,
            writhe,
            closure,
        })
    }

    pub fn crossing_count(&self) -> usize {
        self.pd.len()
    }

    pub fn roles(&self) -> Vec<Role> {
        self.visits.iter().map(|v| v.role).collect()
    }

    /// Crossing ids in traversal order.
    pub fn gauss_sequence(&self) -> Vec<usize> {
        self.visits.iter().map(|v| v.crossing_id).collect()
    }

    /// Signs indexed by crossing id.
    pub fn crossing_signs(&self) -> Vec<i8> {
        let mut signs = vec![0; self.crossing_count()];
        for v in &self.visits {
            signs[v.crossing_id] = v.local_sign;
        }
        signs
    }

    /// Mirror image: every role swapped and every sign negated.
    pub fn mirror(&self) -> KnotDiagram {
        let visits = self
            .visits
            .iter()
            .map(|v| CrossingVisit {
                role: v.role.flip(),
                local_sign: -v.local_sign,
                ..v.clone()
            })
            .collect();
        KnotDiagram::from_visits(visits, self.closure).expect("mirror of a valid diagram")
    }

    /// Equality of the combinatorial data, ignoring visit parameters.
    pub fn same_crossings(&self, other: &KnotDiagram) -> bool {
        self.gauss == other.gauss && self.closure == other.closure
    }
}

impl fmt::Display for KnotDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.gauss)
    }
}

/// Number of adjacent visit pairs whose roles differ.
pub fn sign_variation_count(visits: &[CrossingVisit]) -> usize {
    role_variations(&visits.iter().map(|v| v.role).collect::<Vec<_>>())
}

pub fn role_variations(roles: &[Role]) -> usize {
    roles.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Parses `O1+ U2- ...` (a Unicode minus is accepted) into visits with
/// zero-based crossing ids and traversal-index parameters.
pub fn parse_gauss(text: &str, closure: Closure) -> Result<KnotDiagram, DiagramError> {
    let mut visits = Vec::new();
    for (position, tok) in text.split_whitespace().enumerate() {
        let err = |message: &str| DiagramError::GaussSyntax {
            position,
            message: message.to_string(),
        };
        let mut chars = tok.chars();
        let role = match chars.next() {
            Some('O') | Some('o') => Role::Over,
            Some('U') | Some('u') => Role::Under,
            _ => return Err(err("expected 'O' or 'U'")),
        };
        let rest: String = chars.collect();
        let (num, sign) = match rest.chars().last() {
            Some('+') => (&rest[..rest.len() - 1], 1),
            Some('-') => (&rest[..rest.len() - 1], -1),
            Some('\u{2212}') => (&rest[..rest.len() - '\u{2212}'.len_utf8()], -1),
            _ => return Err(err("expected a trailing '+' or '-'")),
        };
        let label: usize = num.parse().map_err(|_| err("expected a crossing number"))?;
        if label == 0 {
            return Err(err("crossing numbers start at 1"));
        }
        visits.push(CrossingVisit {
            param: position as f64,
            crossing_id: label - 1,
            role,
            local_sign: sign,
        });
    }
    KnotDiagram::from_visits(visits, closure)
}

fn relabel_by_first_occurrence(seq: &[usize]) -> Vec<usize> {
    let mut map = HashMap::new();
    seq.iter()
        .map(|&x| {
            let next = map.len();
            *map.entry(x).or_insert(next)
        })
        .collect()
}

fn rotated(seq: &[usize], r: usize, reversed: bool) -> Vec<usize> {
    let n = seq.len();
    (0..n)
        .map(|i| {
            if reversed {
                seq[(r + n - i) % n]
            } else {
                seq[(r + i) % n]
            }
        })
        .collect()
}

/// Canonical form of a cyclic unsigned Gauss sequence: relabeled by first
/// occurrence and minimized over rotations and both directions.
pub fn canonical_gauss(seq: &[usize]) -> Vec<usize> {
    let mut best: Option<Vec<usize>> = None;
    for r in 0..seq.len().max(1) {
        for reversed in [false, true] {
            let cand = relabel_by_first_occurrence(&rotated(seq, r, reversed));
            if best.as_ref().is_none_or(|b| cand < *b) {
                best = Some(cand);
            }
        }
    }
    best.unwrap_or_default()
}

/// A way of reading one Gauss sequence as another: start at visit `rotation`
/// of the source, walk forward or backward, and rename crossings by `map`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alignment {
    pub rotation: usize,
    pub reversed: bool,
    /// Source crossing id to target crossing id.
    pub map: Vec<usize>,
}

/// Every alignment carrying the cyclic sequence `source` onto `target`.
pub fn gauss_alignments(source: &[usize], target: &[usize]) -> Vec<Alignment> {
    let n = source.len();
    if n != target.len() {
        return Vec::new();
    }
    let labels = n / 2;
    let mut out = Vec::new();
    for rotation in 0..n.max(1) {
        for reversed in [false, true] {
            let s = rotated(source, rotation, reversed);
            let mut map = vec![usize::MAX; labels];
            let mut inverse = vec![usize::MAX; labels];
            let ok = s.iter().zip(target).all(|(&a, &b)| {
                if a >= labels || b >= labels {
                    return false;
                }
                if map[a] == usize::MAX && inverse[b] == usize::MAX {
                    map[a] = b;
                    inverse[b] = a;
                    true
                } else {
                    map[a] == b && inverse[b] == a
                }
            });
            if ok && n > 0 {
                out.push(Alignment {
                    rotation,
                    reversed,
                    map,
                });
            }
        }
    }
    out
}

/// Lifts a projection by a height function, computing its double points.
pub fn lift_diagram(c: &PlaneCurve, h: &Poly, tol: &Tolerances) -> Result<KnotDiagram, DiagramError> {
    let pts = double_points(c, tol)?;
    let report = validate_generic(c, &pts, tol);
    if !report.valid {
        return Err(DiagramError::NotRegular(report.summary()));
    }
    lift_with_points(c, &pts, h, tol)
}

/// Lifts with precomputed double points, which are taken as crossing ids in
/// their given order.
pub fn lift_with_points(
    c: &PlaneCurve,
    pts: &[DoublePoint],
    h: &Poly,
    tol: &Tolerances,
) -> Result<KnotDiagram, DiagramError> {
    let mut visits = Vec::with_capacity(2 * pts.len());
    for (id, p) in pts.iter().enumerate() {
        let (hs, ht) = (h.eval(p.s), h.eval(p.t));
        if (hs - ht).abs() <= tol.height_tol {
            return Err(DiagramError::HeightSeparationFailure {
                crossing: id,
                s: p.s,
                t: p.t,
                gap: (hs - ht).abs(),
            });
        }
        let (over, under) = if hs > ht { (p.s, p.t) } else { (p.t, p.s) };
        let sign = crossing_sign(c, over, under);
        visits.push(CrossingVisit {
            param: over,
            crossing_id: id,
            role: Role::Over,
            local_sign: sign,
        });
        visits.push(CrossingVisit {
            param: under,
            crossing_id: id,
            role: Role::Under,
            local_sign: sign,
        });
    }
    visits.sort_by(|a, b| a.param.total_cmp(&b.param));
    KnotDiagram::from_visits(visits, Closure::LongKnotArc)
}

/// +1 when the over-strand tangent turns counterclockwise onto the
/// under-strand tangent.
pub fn crossing_sign(c: &PlaneCurve, over: f64, under: f64) -> i8 {
    let (ox, oy) = (c.f.derivative().eval(over), c.g.derivative().eval(over));
    let (ux, uy) = (c.f.derivative().eval(under), c.g.derivative().eval(under));
    if ox * uy - oy * ux > 0.0 {
        1
    } else {
        -1
    }
}
