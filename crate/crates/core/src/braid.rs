//! Braid words, toric and quasitoric structure, closures, and degree-sequence
//! arithmetic.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::{Closure, CrossingVisit, KnotDiagram, Role};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BraidError {
    #[error("braid syntax error at position {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("generator s{index} at position {position} needs more than {strands} strands")]
    IndexOutOfRange {
        index: usize,
        strands: usize,
        position: usize,
    },
    #[error("letter {position} breaks the quasitoric block structure")]
    NotQuasitoric { position: usize },
    #[error("gcd({p}, {q}) = {gcd}, expected coprime parameters")]
    NotCoprime { p: u32, q: u32, gcd: u32 },
    #[error("closure has {0} components, expected a knot")]
    NotAKnot(usize),
    #[error("{0}")]
    OutOfFamily(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Letter {
    /// Generator index, 1-based.
    pub index: usize,
    pub sign: i8,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BraidWord {
    pub strands: usize,
    pub letters: Vec<Letter>,
}

impl BraidWord {
    pub fn new(strands: usize, letters: Vec<Letter>) -> Result<BraidWord, BraidError> {
        for (position, l) in letters.iter().enumerate() {
            if l.index == 0 || l.index >= strands {
                return Err(BraidError::IndexOutOfRange {
                    index: l.index,
                    strands,
                    position,
                });
            }
        }
        Ok(BraidWord { strands, letters })
    }

    /// Builds a word from signed generator indices such as `[1, -2, 1]`.
    pub fn from_signed(strands: usize, word: &[i32]) -> Result<BraidWord, BraidError> {
        let letters = word
            .iter()
            .map(|&x| Letter {
                index: x.unsigned_abs() as usize,
                sign: if x < 0 { -1 } else { 1 },
            })
            .collect();
        BraidWord::new(strands, letters)
    }

    pub fn writhe(&self) -> i64 {
        self.letters.iter().map(|l| l.sign as i64).sum()
    }

    /// Position permutation of the braid read bottom to top:
    /// `perm[i]` is where the strand starting at position `i` ends.
    pub fn permutation(&self) -> Vec<usize> {
        let mut at: Vec<usize> = (0..self.strands).collect();
        for l in &self.letters {
            let (a, b) = (l.index - 1, l.index);
            for pos in at.iter_mut() {
                if *pos == a {
                    *pos = b;
                } else if *pos == b {
                    *pos = a;
                }
            }
        }
        at
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p={};", self.strands)?;
        for l in &self.letters {
            write!(f, " s{}", l.index)?;
            if l.sign < 0 {
                f.write_str("^-1")?;
            }
        }
        Ok(())
    }
}

/// `(σ1 … σ_{p-1})^q`.
pub fn toric_braid(p: usize, q: usize) -> BraidWord {
    let letters = (0..q)
        .flat_map(|_| (1..p).map(|index| Letter { index, sign: 1 }))
        .collect();
    BraidWord { strands: p, letters }
}

/// Parses `p=<n>; s1^-1 s2 ...`. Without the prefix the strand count is one
/// more than the largest generator index.
pub fn parse_braid(text: &str) -> Result<BraidWord, BraidError> {
    let mut body = text;
    let mut offset = 0;
    let mut declared = None;
    let trimmed = text.trim_start();
    if trimmed.starts_with('p') && trimmed[1..].trim_start().starts_with('=') {
        let semi = text.find(';').ok_or(BraidError::Parse {
            position: text.len(),
            message: "expected ';' after the strand count".into(),
        })?;
        let eq = text.find('=').expect("checked above");
        let n = text[eq + 1..semi].trim();
        let strands: usize = n.parse().map_err(|_| BraidError::Parse {
            position: eq + 1,
            message: format!("expected a strand count, found '{n}'"),
        })?;
        if strands < 2 {
            return Err(BraidError::Parse {
                position: eq + 1,
                message: "a braid needs at least 2 strands".into(),
            });
        }
        declared = Some(strands);
        body = &text[semi + 1..];
        offset = semi + 1;
    }
    let mut letters = Vec::new();
    let mut positions = Vec::new();
    let mut i = 0;
    let bytes = body.as_bytes();
    while i < bytes.len() {
        if bytes[i].is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let end = body[i..]
            .find(|c: char| c.is_whitespace())
            .map_or(body.len(), |k| i + k);
        let tok = &body[start..end];
        let err = |message: String| BraidError::Parse {
            position: offset + start,
            message,
        };
        let rest = tok
            .strip_prefix('s')
            .or_else(|| tok.strip_prefix('σ'))
            .ok_or_else(|| err(format!("expected a generator like 's1', found '{tok}'")))?;
        let (idx, sign) = match rest.split_once('^') {
            None => (rest, 1),
            Some((idx, "-1")) | Some((idx, "{-1}")) => (idx, -1),
            Some((idx, "1")) => (idx, 1),
            Some((_, e)) => return Err(err(format!("exponent must be 1 or -1, found '{e}'"))),
        };
        let index: usize = idx
            .parse()
            .map_err(|_| err(format!("expected a generator index, found '{idx}'")))?;
        if index == 0 {
            return Err(err("generator indices start at 1".into()));
        }
        letters.push(Letter { index, sign });
        positions.push(offset + start);
        i = end;
    }
    let strands = declared.unwrap_or_else(|| letters.iter().map(|l| l.index + 1).max().unwrap_or(2));
    for (l, &position) in letters.iter().zip(&positions) {
        if l.index >= strands {
            return Err(BraidError::IndexOutOfRange {
                index: l.index,
                strands,
                position,
            });
        }
    }
    Ok(BraidWord { strands, letters })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuasitoricPattern {
    pub p: usize,
    pub q: usize,
    /// `q` rows of `p - 1` entries, each ±1.
    pub signs: Vec<Vec<i8>>,
}

impl QuasitoricPattern {
    pub fn toric(p: usize, q: usize) -> QuasitoricPattern {
        QuasitoricPattern {
            p,
            q,
            signs: vec![vec![1; p - 1]; q],
        }
    }

    pub fn is_well_formed(&self) -> bool {
        self.p >= 2
            && self.signs.len() == self.q
            && self
                .signs
                .iter()
                .all(|row| row.len() == self.p - 1 && row.iter().all(|&e| e == 1 || e == -1))
    }

    pub fn to_word(&self) -> BraidWord {
        let letters = self
            .signs
            .iter()
            .flat_map(|row| {
                row.iter()
                    .enumerate()
                    .map(|(k, &sign)| Letter { index: k + 1, sign })
            })
            .collect();
        BraidWord {
            strands: self.p,
            letters,
        }
    }

    /// Letter positions (in the flattened word) that differ from the toric braid.
    pub fn changed_letters(&self) -> Vec<usize> {
        self.signs
            .iter()
            .flatten()
            .enumerate()
            .filter(|(_, &e)| e == -1)
            .map(|(i, _)| i)
            .collect()
    }
}

pub fn as_quasitoric(w: &BraidWord) -> Result<QuasitoricPattern, BraidError> {
    let width = w.strands - 1;
    for (position, l) in w.letters.iter().enumerate() {
        if l.index != position % width + 1 {
            return Err(BraidError::NotQuasitoric { position });
        }
    }
    if w.letters.is_empty() || !w.letters.len().is_multiple_of(width) {
        return Err(BraidError::NotQuasitoric {
            position: w.letters.len(),
        });
    }
    Ok(QuasitoricPattern {
        p: w.strands,
        q: w.letters.len() / width,
        signs: w
            .letters
            .chunks(width)
            .map(|c| c.iter().map(|l| l.sign).collect())
            .collect(),
    })
}

pub fn closure_components(w: &BraidWord) -> usize {
    let perm = w.permutation();
    let mut seen = vec![false; perm.len()];
    let mut cycles = 0;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        cycles += 1;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = perm[i];
        }
    }
    cycles
}

pub fn crossing_change_count(pat: &QuasitoricPattern) -> usize {
    pat.signs.iter().flatten().filter(|&&e| e == -1).count()
}

/// Closure diagram of a braid whose closure is a knot. Crossing `k` is letter
/// `k`; the traversal starts at the bottom of strand 1 and follows the
/// closure. For a positive letter the strand entering at the left goes over.
pub fn braid_closure_diagram(w: &BraidWord) -> Result<KnotDiagram, BraidError> {
    let comps = closure_components(w);
    if comps != 1 {
        return Err(BraidError::NotAKnot(comps));
    }
    let n = w.letters.len();
    let mut visits = Vec::with_capacity(2 * n);
    let mut pos = 0usize;
    loop {
        for (k, l) in w.letters.iter().enumerate() {
            let left = l.index - 1;
            if pos == left || pos == left + 1 {
                let from_left = pos == left;
                let role = if from_left == (l.sign > 0) {
                    Role::Over
                } else {
                    Role::Under
                };
                visits.push(CrossingVisit {
                    param: visits.len() as f64,
                    crossing_id: k,
                    role,
                    local_sign: l.sign,
                });
                pos = if from_left { left + 1 } else { left };
            }
        }
        if pos == 0 {
            break;
        }
    }
    Ok(KnotDiagram::from_visits(visits, Closure::BraidClosure).expect("closure visits are balanced"))
}

pub fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeSequence {
    pub l: u32,
    pub m: u32,
    pub n: u32,
    /// `n` is an upper bound rather than an attained degree.
    pub bound_only_last: bool,
    /// Lower end when the last entry is only known to lie in `[n_min, n]`.
    pub n_min: Option<u32>,
    pub r0: Option<u32>,
}

impl DegreeSequence {
    pub fn exact(l: u32, m: u32, n: u32) -> DegreeSequence {
        DegreeSequence {
            l,
            m,
            n,
            bound_only_last: false,
            n_min: None,
            r0: None,
        }
    }

    pub fn triple(&self) -> (u32, u32, u32) {
        (self.l, self.m, self.n)
    }
}

impl fmt::Display for DegreeSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, ", self.l, self.m)?;
        match (self.n_min, self.bound_only_last) {
            (Some(lo), _) => write!(f, "{lo}..{})", self.n)?,
            (None, true) => write!(f, "≤{})", self.n)?,
            (None, false) => write!(f, "{})", self.n)?,
        }
        if let Some(r0) = self.r0 {
            write!(f, ", r0={r0}")?;
        }
        Ok(())
    }
}

/// Least `r0 ≥ 1` with `gcd(2p - 1, q + r0) = 1`.
pub fn least_r0(p: u32, q: u32) -> u32 {
    let l = 2 * p - 1;
    (1..).find(|&r| gcd(l, q + r) == 1).expect("gcd search terminates")
}

/// `(2p - 1, q + r0, ≤ 2q - 1 + 4r)` for a knot obtained by `r` crossing
/// changes on the toric braid of type `(p, q)`.
pub fn degree_sequence_bound(p: u32, q: u32, r: u32) -> Result<DegreeSequence, BraidError> {
    if p < 2 || q < 1 {
        return Err(BraidError::OutOfFamily(format!("need p ≥ 2 and q ≥ 1, got ({p}, {q})")));
    }
    let g = gcd(p, q);
    if g != 1 {
        return Err(BraidError::NotCoprime { p, q, gcd: g });
    }
    let r0 = least_r0(p, q);
    Ok(DegreeSequence {
        l: 2 * p - 1,
        m: q + r0,
        n: 2 * q - 1 + 4 * r,
        bound_only_last: true,
        n_min: None,
        r0: Some(r0),
    })
}

/// Knot families with published degree sequences.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "family")]
pub enum Family {
    /// Torus knot `(2, 2n + 1)`, the general (non-minimal) sequence.
    Torus2Strand { n: u32 },
    /// Torus knot `(2, 2n + 1)`, minimal sequence.
    Torus2StrandMinimal { n: u32 },
    /// Torus knot `(p, q)` with `2 < p < q`.
    TorusPq { p: u32, q: u32 },
    /// Two-bridge knot of crossing number `n`, minimal sequence.
    TwoBridge { n: u32 },
    /// Torus knot `(p, 2p - 1)`, minimal sequence with an interval last entry.
    TorusP2pMinus1 { p: u32 },
}

pub fn known_degree_sequences(family: Family) -> Result<DegreeSequence, BraidError> {
    let out = |msg: String| Err(BraidError::OutOfFamily(msg));
    match family {
        Family::Torus2Strand { n } => {
            if n == 0 {
                return out("torus (2, 2n+1) needs n ≥ 1".into());
            }
            Ok(DegreeSequence::exact(3, 4 * n, 4 * n + 1))
        }
        Family::Torus2StrandMinimal { n } => {
            if n == 0 {
                return out("torus (2, 2n+1) needs n ≥ 1".into());
            }
            Ok(match n % 3 {
                0 => DegreeSequence::exact(3, 2 * n + 2, 2 * n + 4),
                1 => DegreeSequence::exact(3, 2 * n + 2, 2 * n + 3),
                _ => DegreeSequence::exact(3, 2 * n + 3, 2 * n + 4),
            })
        }
        Family::TorusPq { p, q } => {
            if !(p > 2 && p < q) || gcd(p, q) != 1 {
                return out(format!("torus ({p}, {q}) needs 2 < p < q, coprime"));
            }
            Ok(DegreeSequence::exact(2 * p - 1, 2 * q - 1, 2 * q))
        }
        Family::TwoBridge { n } => {
            if n < 3 {
                return out(format!("no two-bridge knot has crossing number {n}"));
            }
            Ok(match n % 3 {
                0 => DegreeSequence::exact(3, n + 1, n + 2),
                1 => DegreeSequence::exact(3, n + 1, n + 3),
                _ => DegreeSequence::exact(3, n + 2, n + 3),
            })
        }
        Family::TorusP2pMinus1 { p } => {
            if p < 2 {
                return out("torus (p, 2p-1) needs p ≥ 2".into());
            }
            Ok(DegreeSequence {
                l: 2 * p - 1,
                m: 2 * p,
                n: 4 * p - 3,
                bound_only_last: true,
                n_min: Some(2 * p + 1),
                r0: None,
            })
        }
    }
}
