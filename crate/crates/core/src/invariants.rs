//! Exact knot invariants from PD codes: Kauffman bracket, Jones and Alexander
//! polynomials, determinant, and identification against the reference table.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::braid::{braid_closure_diagram, BraidWord};
use crate::diagram::{KnotDiagram, PdCode};

/// Largest crossing count accepted by the bracket state sum.
pub const MAX_BRACKET_CROSSINGS: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantError {
    #[error("{0} crossings exceed the state-sum limit of {MAX_BRACKET_CROSSINGS}")]
    TooManyCrossings(usize),
    #[error("inconsistent PD code: {0}")]
    InconsistentPd(String),
    #[error("Jones polynomial has non-integer exponents (not a knot diagram?)")]
    NonIntegerExponents,
    #[error("Alexander matrix is singular or mislabeled")]
    SingularLabeling,
    #[error("integer overflow in exact arithmetic")]
    Overflow,
    #[error("no table knot matches (unknot candidate: {unknot_candidate})")]
    NoMatch { unknot_candidate: bool },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Var {
    A,
    T,
}

/// Integer Laurent polynomial; no zero coefficients are stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    pub var: Var,
    terms: BTreeMap<i64, i64>,
}

impl LaurentPoly {
    pub fn zero(var: Var) -> LaurentPoly {
        LaurentPoly {
            var,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(var: Var, exp: i64, coef: i64) -> LaurentPoly {
        LaurentPoly::from_terms(var, [(exp, coef)])
    }

    pub fn one(var: Var) -> LaurentPoly {
        LaurentPoly::monomial(var, 0, 1)
    }

    pub fn from_terms(var: Var, terms: impl IntoIterator<Item = (i64, i64)>) -> LaurentPoly {
        let mut map = BTreeMap::new();
        for (e, c) in terms {
            *map.entry(e).or_insert(0) += c;
        }
        map.retain(|_, c| *c != 0);
        LaurentPoly { var, terms: map }
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.terms.iter().map(|(&e, &c)| (e, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn add(&self, other: &LaurentPoly) -> LaurentPoly {
        LaurentPoly::from_terms(self.var, self.terms().chain(other.terms()))
    }

    pub fn mul(&self, other: &LaurentPoly) -> LaurentPoly {
        LaurentPoly::from_terms(
            self.var,
            self.terms()
                .flat_map(|(e1, c1)| other.terms().map(move |(e2, c2)| (e1 + e2, c1 * c2))),
        )
    }

    pub fn scale(&self, k: i64) -> LaurentPoly {
        LaurentPoly::from_terms(self.var, self.terms().map(|(e, c)| (e, c * k)))
    }

    pub fn shift(&self, by: i64) -> LaurentPoly {
        LaurentPoly::from_terms(self.var, self.terms().map(|(e, c)| (e + by, c)))
    }

    /// `x ↦ x⁻¹`.
    pub fn invert_variable(&self) -> LaurentPoly {
        LaurentPoly::from_terms(self.var, self.terms().map(|(e, c)| (-e, c)))
    }

    /// Value at `x = ±1`.
    pub fn eval_unit(&self, x: i64) -> i64 {
        debug_assert!(x == 1 || x == -1);
        self.terms()
            .map(|(e, c)| if x == -1 && e.rem_euclid(2) == 1 { -c } else { c })
            .sum()
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let name = match self.var {
            Var::A => "A",
            Var::T => "t",
        };
        for (i, (e, c)) in self.terms().enumerate() {
            let sign = if c < 0 { "-" } else { "+" };
            if i == 0 {
                if c < 0 {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let a = c.abs();
            match e {
                0 => write!(f, "{a}")?,
                _ => {
                    if a != 1 {
                        write!(f, "{a}")?;
                    }
                    f.write_str(name)?;
                    if e != 1 {
                        write!(f, "^{e}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({self})")
    }
}

impl Serialize for LaurentPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.terms().map(|(e, c)| [e, c]).collect::<Vec<_>>().serialize(s)
    }
}

/// Deserialized polynomials are tagged as polynomials in `t`.
impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let pairs = Vec::<[i64; 2]>::deserialize(d)?;
        Ok(LaurentPoly::from_terms(Var::T, pairs.into_iter().map(|[e, c]| (e, c))))
    }
}

fn check_pd(pd: &PdCode) -> Result<(), InvariantError> {
    let mut count: HashMap<usize, usize> = HashMap::new();
    for x in pd.iter().flatten() {
        *count.entry(*x).or_insert(0) += 1;
    }
    if let Some((label, n)) = count.iter().find(|(_, &n)| n != 2) {
        return Err(InvariantError::InconsistentPd(format!(
            "edge {label} appears {n} times"
        )));
    }
    Ok(())
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns true when two classes merged.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}

/// Kauffman bracket with the number of states visited.
pub fn kauffman_bracket_counted(pd: &PdCode) -> Result<(LaurentPoly, u64), InvariantError> {
    let n = pd.len();
    if n > MAX_BRACKET_CROSSINGS {
        return Err(InvariantError::TooManyCrossings(n));
    }
    if n == 0 {
        return Ok((LaurentPoly::one(Var::A), 1));
    }
    check_pd(pd)?;
    let mut labels: Vec<usize> = pd.iter().flatten().copied().collect();
    labels.sort_unstable();
    labels.dedup();
    let index: HashMap<usize, usize> = labels.iter().enumerate().map(|(i, &l)| (l, i)).collect();
    let xs: Vec<[usize; 4]> = pd.iter().map(|x| x.map(|l| index[&l])).collect();
    let edges = labels.len();

    // Histogram of (A-smoothings, loops) over all 2^n states.
    let states: u64 = 1 << n;
    let chunk = 1u64 << n.saturating_sub(6).min(10);
    let hist: BTreeMap<(usize, usize), i64> = (0..states.div_ceil(chunk))
        .into_par_iter()
        .map(|c| {
            let mut local: BTreeMap<(usize, usize), i64> = BTreeMap::new();
            for state in c * chunk..((c + 1) * chunk).min(states) {
                let mut uf = UnionFind::new(edges);
                let mut comps = edges;
                let mut a_count = 0;
                for (k, &[a, b, cc, d]) in xs.iter().enumerate() {
                    let merges = if state >> k & 1 == 0 {
                        a_count += 1;
                        [(a, b), (cc, d)]
                    } else {
                        [(a, d), (b, cc)]
                    };
                    for (x, y) in merges {
                        if uf.union(x, y) {
                            comps -= 1;
                        }
                    }
                }
                *local.entry((a_count, comps)).or_insert(0) += 1;
            }
            local
        })
        .reduce(BTreeMap::new, |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_insert(0) += v;
            }
            a
        });

    let loop_factor = LaurentPoly::from_terms(Var::A, [(2, -1), (-2, -1)]);
    let max_loops = hist.keys().map(|k| k.1).max().unwrap_or(1);
    let mut powers = vec![LaurentPoly::one(Var::A)];
    for _ in 1..max_loops {
        let next = powers.last().unwrap().mul(&loop_factor);
        powers.push(next);
    }
    let mut total = LaurentPoly::zero(Var::A);
    for (&(a, loops), &count) in &hist {
        let b = n - a;
        let term = powers[loops - 1].shift(a as i64 - b as i64).scale(count);
        total = total.add(&term);
    }
    Ok((total, states))
}

pub fn kauffman_bracket(pd: &PdCode) -> Result<LaurentPoly, InvariantError> {
    kauffman_bracket_counted(pd).map(|r| r.0)
}

/// `V(t) = (-A³)^(-w) ⟨D⟩` at `A = t^(-1/4)`.
pub fn jones(d: &KnotDiagram) -> Result<LaurentPoly, InvariantError> {
    let bracket = kauffman_bracket(&d.pd)?;
    let w = d.writhe;
    let sign = if w.rem_euclid(2) == 0 { 1 } else { -1 };
    let normalized = bracket.shift(-3 * w).scale(sign);
    let mut terms = Vec::new();
    for (e, c) in normalized.terms() {
        if e % 4 != 0 {
            return Err(InvariantError::NonIntegerExponents);
        }
        terms.push((-e / 4, c));
    }
    Ok(LaurentPoly::from_terms(Var::T, terms))
}

/// Dense polynomial in `t` over exact integers.
type ZPoly = Vec<i128>;

fn zp_trim(mut p: ZPoly) -> ZPoly {
    while p.last() == Some(&0) {
        p.pop();
    }
    p
}

fn zp_mul(a: &ZPoly, b: &ZPoly) -> Result<ZPoly, InvariantError> {
    if a.is_empty() || b.is_empty() {
        return Ok(Vec::new());
    }
    let mut out = vec![0i128; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            let prod = x.checked_mul(y).ok_or(InvariantError::Overflow)?;
            out[i + j] = out[i + j].checked_add(prod).ok_or(InvariantError::Overflow)?;
        }
    }
    Ok(zp_trim(out))
}

fn zp_sub(a: &ZPoly, b: &ZPoly) -> Result<ZPoly, InvariantError> {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let x = a.get(k).copied().unwrap_or(0);
        let y = b.get(k).copied().unwrap_or(0);
        out.push(x.checked_sub(y).ok_or(InvariantError::Overflow)?);
    }
    Ok(zp_trim(out))
}

/// Exact quotient; fails when the division leaves a remainder.
fn zp_div_exact(a: &ZPoly, b: &ZPoly) -> Result<ZPoly, InvariantError> {
    if b.is_empty() {
        return Err(InvariantError::SingularLabeling);
    }
    if a.is_empty() {
        return Ok(Vec::new());
    }
    if a.len() < b.len() {
        return Err(InvariantError::SingularLabeling);
    }
    let mut rem = a.clone();
    let lead = *b.last().unwrap();
    let mut q = vec![0i128; a.len() - b.len() + 1];
    for k in (0..q.len()).rev() {
        let top = rem[k + b.len() - 1];
        if top % lead != 0 {
            return Err(InvariantError::SingularLabeling);
        }
        let c = top / lead;
        q[k] = c;
        for (j, &y) in b.iter().enumerate() {
            let prod = c.checked_mul(y).ok_or(InvariantError::Overflow)?;
            rem[k + j] = rem[k + j].checked_sub(prod).ok_or(InvariantError::Overflow)?;
        }
    }
    if rem.iter().any(|&x| x != 0) {
        return Err(InvariantError::SingularLabeling);
    }
    Ok(zp_trim(q))
}

/// Fraction-free Gaussian elimination.
fn bareiss(mut m: Vec<Vec<ZPoly>>) -> Result<ZPoly, InvariantError> {
    let n = m.len();
    if n == 0 {
        return Ok(vec![1]);
    }
    let mut negate = false;
    let mut prev: ZPoly = vec![1];
    for k in 0..n - 1 {
        if m[k][k].is_empty() {
            match (k + 1..n).find(|&i| !m[i][k].is_empty()) {
                Some(i) => {
                    m.swap(k, i);
                    negate = !negate;
                }
                None => return Ok(Vec::new()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = zp_sub(&zp_mul(&m[k][k], &m[i][j])?, &zp_mul(&m[i][k], &m[k][j])?)?;
                m[i][j] = zp_div_exact(&num, &prev)?;
            }
            m[i][k] = Vec::new();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    Ok(if negate { det.iter().map(|x| -x).collect() } else { det })
}

/// Alexander polynomial from the Wirtinger arcs of the PD code, normalized
/// to a symmetric exponent range with positive leading coefficient.
pub fn alexander(d: &KnotDiagram) -> Result<LaurentPoly, InvariantError> {
    alexander_from_pd(&d.pd, &d.crossing_signs())
}

pub fn alexander_from_pd(pd: &PdCode, signs: &[i8]) -> Result<LaurentPoly, InvariantError> {
    let n = pd.len();
    if n == 0 {
        return Ok(LaurentPoly::one(Var::T));
    }
    check_pd(pd)?;
    let mut labels: Vec<usize> = pd.iter().flatten().copied().collect();
    labels.sort_unstable();
    labels.dedup();
    let index: HashMap<usize, usize> = labels.iter().enumerate().map(|(i, &l)| (l, i)).collect();
    let mut uf = UnionFind::new(labels.len());
    for x in pd {
        uf.union(index[&x[1]], index[&x[3]]);
    }
    let mut arc_of = HashMap::new();
    let mut arcs = 0;
    for i in 0..labels.len() {
        let r = uf.find(i);
        if let std::collections::hash_map::Entry::Vacant(e) = arc_of.entry(r) {
            e.insert(arcs);
            arcs += 1;
        }
    }
    if arcs != n {
        return Err(InvariantError::InconsistentPd(format!(
            "{arcs} arcs for {n} crossings"
        )));
    }
    let arc = |label: usize, uf: &mut UnionFind| arc_of[&uf.find(index[&label])];
    let mut matrix = vec![vec![ZPoly::new(); n]; n];
    let add = |cell: &mut ZPoly, v: &ZPoly| {
        let n = cell.len().max(v.len());
        let mut out = vec![0i128; n];
        for (k, o) in out.iter_mut().enumerate() {
            *o = cell.get(k).copied().unwrap_or(0) + v.get(k).copied().unwrap_or(0);
        }
        *cell = zp_trim(out);
    };
    let one_minus_t: ZPoly = vec![1, -1];
    let t: ZPoly = vec![0, 1];
    let minus_one: ZPoly = vec![-1];
    for (row, x) in pd.iter().enumerate() {
        let over = arc(x[1], &mut uf);
        let under_in = arc(x[0], &mut uf);
        let under_out = arc(x[2], &mut uf);
        add(&mut matrix[row][over], &one_minus_t);
        if signs[row] > 0 {
            add(&mut matrix[row][under_in], &t);
            add(&mut matrix[row][under_out], &minus_one);
        } else {
            add(&mut matrix[row][under_in], &minus_one);
            add(&mut matrix[row][under_out], &t);
        }
    }
    let minor: Vec<Vec<ZPoly>> = matrix[..n - 1].iter().map(|r| r[..n - 1].to_vec()).collect();
    let det = bareiss(minor)?;
    normalize_alexander(&det)
}

fn normalize_alexander(det: &ZPoly) -> Result<LaurentPoly, InvariantError> {
    let lo = det.iter().position(|&c| c != 0).ok_or(InvariantError::SingularLabeling)?;
    let hi = det.len() - 1;
    if (lo + hi) % 2 == 1 {
        return Err(InvariantError::SingularLabeling);
    }
    let mid = ((lo + hi) / 2) as i64;
    let sign: i128 = if det[hi] < 0 { -1 } else { 1 };
    let mut terms = Vec::new();
    for (k, &c) in det.iter().enumerate().skip(lo) {
        let v = i64::try_from(c * sign).map_err(|_| InvariantError::Overflow)?;
        terms.push((k as i64 - mid, v));
    }
    let p = LaurentPoly::from_terms(Var::T, terms);
    if p.eval_unit(1).abs() != 1 || p != p.invert_variable() {
        return Err(InvariantError::SingularLabeling);
    }
    Ok(p)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantProfile {
    pub alexander: LaurentPoly,
    pub jones: LaurentPoly,
    pub determinant: u64,
}

impl InvariantProfile {
    pub fn of(d: &KnotDiagram) -> Result<InvariantProfile, InvariantError> {
        let alexander = alexander(d)?;
        let jones = jones(d)?;
        let determinant = alexander.eval_unit(-1).unsigned_abs();
        Ok(InvariantProfile {
            alexander,
            jones,
            determinant,
        })
    }

    /// The profile of the trivial knot.
    pub fn unknot() -> InvariantProfile {
        InvariantProfile {
            alexander: LaurentPoly::one(Var::T),
            jones: LaurentPoly::one(Var::T),
            determinant: 1,
        }
    }

    pub fn mirror(&self) -> InvariantProfile {
        InvariantProfile {
            jones: self.jones.invert_variable(),
            ..self.clone()
        }
    }

    /// Equal as given or after mirroring one side.
    pub fn equal_up_to_mirror(&self, other: &InvariantProfile) -> bool {
        self == other || self.mirror() == *other
    }

    pub fn is_trivial(&self) -> bool {
        self.alexander == LaurentPoly::one(Var::T) && self.jones == LaurentPoly::one(Var::T)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Handedness {
    /// Matches the tabulated chirality.
    AsTabulated,
    /// Matches the mirror image of the table entry.
    Mirror,
    /// Both match (the Jones polynomial is palindromic).
    Either,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Identification {
    pub name: String,
    pub handedness: Handedness,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableEntry {
    pub name: String,
    pub alexander: LaurentPoly,
    pub jones: LaurentPoly,
}

/// Braid words whose closures define the reference table.
pub const CURATED_BRAIDS: &[(&str, usize, &[i32])] = &[
    ("3_1", 2, &[1, 1, 1]),
    ("4_1", 3, &[1, -2, 1, -2]),
    ("5_1", 2, &[1, 1, 1, 1, 1]),
    ("5_2", 3, &[1, 1, 1, 2, -1, 2]),
    ("6_1", 4, &[1, 1, 2, -1, -3, 2, -3]),
    ("6_2", 3, &[1, 1, 1, -2, 1, -2]),
    ("6_3", 3, &[1, 1, -2, 1, -2, -2]),
    ("7_1", 2, &[1, 1, 1, 1, 1, 1, 1]),
    ("7_2", 4, &[1, 1, 1, 2, -1, 2, 3, -2, 3]),
    ("7_3", 3, &[1, 1, 1, 1, 1, 2, -1, 2]),
    ("7_4", 4, &[1, 1, 2, -1, 2, 2, 3, -2, 3]),
    ("7_5", 3, &[1, 1, 1, 1, 2, -1, 2, 2]),
    ("7_6", 4, &[1, 1, -2, 1, 3, -2, 3]),
    ("7_7", 4, &[-1, 2, -1, 2, -3, 2, -3]),
    ("8_1", 5, &[1, 1, 2, -1, 2, 3, -2, -4, 3, -4]),
    ("8_2", 3, &[1, 1, 1, 1, 1, -2, 1, -2]),
    ("8_3", 5, &[1, 1, 2, -1, -3, 2, -3, -4, 3, -4]),
    ("8_4", 4, &[-1, -1, -1, 2, -1, 2, 3, -2, 3]),
    ("8_5", 3, &[1, 1, 1, -2, 1, 1, 1, -2]),
    ("8_6", 4, &[1, 1, 1, 1, 2, -1, -3, 2, -3]),
    ("8_7", 3, &[-1, -1, -1, -1, 2, -1, 2, 2]),
    ("8_8", 4, &[-1, -1, -1, -2, 1, 3, -2, 3, 3]),
    ("8_9", 3, &[1, 1, 1, -2, 1, -2, -2, -2]),
    ("8_10", 3, &[-1, -1, -1, 2, -1, -1, 2, 2]),
    ("8_11", 4, &[1, 1, 2, -1, 2, 2, -3, 2, -3]),
    ("8_12", 5, &[1, -2, 1, 3, -2, -4, 3, -4]),
    ("8_13", 4, &[1, 1, -2, 1, -2, -2, -3, 2, -3]),
    ("8_14", 4, &[1, 1, 1, 2, -1, 2, -3, 2, -3]),
    ("8_15", 4, &[1, 1, -2, 1, 3, 2, 2, 2, 3]),
    ("8_16", 3, &[-1, -1, 2, -1, -1, 2, -1, 2]),
    ("8_17", 3, &[1, 1, -2, 1, -2, 1, -2, -2]),
    ("8_18", 3, &[1, -2, 1, -2, 1, -2, 1, -2]),
    ("8_19", 3, &[1, 1, 1, 2, 1, 1, 1, 2]),
    ("8_20", 3, &[1, 1, 1, -2, -1, -1, -1, -2]),
    ("8_21", 3, &[1, 1, 1, 2, -1, -1, 2, 2]),
];

/// The reference table computed from [`CURATED_BRAIDS`].
pub fn build_reference_table() -> Result<Vec<TableEntry>, InvariantError> {
    CURATED_BRAIDS
        .par_iter()
        .map(|&(name, strands, word)| {
            let w = BraidWord::from_signed(strands, word).expect("curated braid is well formed");
            let d = braid_closure_diagram(&w).expect("curated braid closes to a knot");
            let p = InvariantProfile::of(&d)?;
            Ok(TableEntry {
                name: name.to_string(),
                alexander: p.alexander,
                jones: p.jones,
            })
        })
        .collect()
}

/// JSON-lines serialization of a table.
pub fn table_to_jsonl(table: &[TableEntry]) -> String {
    table
        .iter()
        .map(|e| serde_json::to_string(e).expect("table entry serializes") + "\n")
        .collect()
}

pub const SHIPPED_TABLE: &str = include_str!("../data/knot_table.jsonl");
pub const SHIPPED_TABLE_SHA256: &str = include_str!("../data/knot_table.sha256");

pub fn sha256_hex(data: &str) -> String {
    Sha256::digest(data.as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// The shipped table, parsed once.
pub fn reference_table() -> &'static [TableEntry] {
    static TABLE: OnceLock<Vec<TableEntry>> = OnceLock::new();
    TABLE.get_or_init(|| {
        SHIPPED_TABLE
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(|l| serde_json::from_str(l).expect("shipped table line parses"))
            .collect()
    })
}

/// All table knots matching the profile, up to mirror image.
pub fn identify(p: &InvariantProfile) -> Result<Vec<Identification>, InvariantError> {
    identify_in(reference_table(), p)
}

pub fn identify_in(table: &[TableEntry], p: &InvariantProfile) -> Result<Vec<Identification>, InvariantError> {
    let mirrored = p.jones.invert_variable();
    let out: Vec<Identification> = table
        .iter()
        .filter(|e| e.alexander == p.alexander)
        .filter_map(|e| {
            let same = e.jones == p.jones;
            let mirror = e.jones == mirrored;
            let handedness = match (same, mirror) {
                (true, true) => Handedness::Either,
                (true, false) => Handedness::AsTabulated,
                (false, true) => Handedness::Mirror,
                (false, false) => return None,
            };
            Some(Identification {
                name: e.name.clone(),
                handedness,
            })
        })
        .collect();
    if out.is_empty() {
        return Err(InvariantError::NoMatch {
            unknot_candidate: p.is_trivial(),
        });
    }
    Ok(out)
}
