use std::collections::BTreeSet;

use polyknot::braid::{
    braid_closure_diagram, degree_sequence_bound, known_degree_sequences, least_r0, parse_braid, toric_braid,
    DegreeSequence, Family, QuasitoricPattern,
};
use polyknot::diagram::sign_variation_count;
use polyknot::invariants::{identify, InvariantProfile};
use polyknot::lift::{apply_crossing_changes, construct_from_word, construct_polyknot, PolyKnot};
use polyknot::Tolerances;
use rand::rngs::StdRng;
use rand::{RngExt, SeedableRng};

const TORI: [(usize, usize); 6] = [(2, 3), (2, 5), (2, 7), (3, 4), (3, 5), (3, 7)];
const WORD_8_17: &str = "p=3; s1^-1 s2 s1 s2^-1 s1^-1 s2 s1 s2^-1 s1^-1 s2 s1 s2^-1 s1^-1 s2";

fn euclid(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        euclid(b, a % b)
    }
}

#[test]
fn torus_ledger() {
    for (p, q) in TORI {
        let k = construct_polyknot(&QuasitoricPattern::toric(p, q)).unwrap();
        assert_eq!(k.diagram.crossing_count(), (p - 1) * q, "({p}, {q})");
        assert!(k.h.degree() < 2 * q, "({p}, {q}): deg h = {}", k.h.degree());
        assert_eq!(k.f.degree(), 2 * p - 1);
        let closure = InvariantProfile::of(&braid_closure_diagram(&toric_braid(p, q)).unwrap()).unwrap();
        assert_eq!(InvariantProfile::of(&k.diagram).unwrap(), closure);
    }
}

#[test]
fn r0_matches_exhaustive_search() {
    for p in 2..=12u32 {
        for q in 1..=40u32 {
            let brute = (1..=200).find(|&r| euclid(2 * p - 1, q + r) == 1).unwrap();
            assert_eq!(least_r0(p, q), brute, "({p}, {q})");
        }
    }
    let b = degree_sequence_bound(3, 7, 7).unwrap();
    assert_eq!(b.to_string(), "(5, 8, ≤41), r0=1");
}

#[test]
fn published_sequences() {
    let cases = [
        (Family::Torus2Strand { n: 3 }, "(3, 12, 13)"),
        (Family::TorusPq { p: 3, q: 7 }, "(5, 13, 14)"),
        (Family::Torus2StrandMinimal { n: 4 }, "(3, 10, 11)"),
        (Family::TwoBridge { n: 8 }, "(3, 10, 11)"),
        (Family::TorusP2pMinus1 { p: 3 }, "(5, 6, 7..9)"),
    ];
    for (family, text) in cases {
        assert_eq!(known_degree_sequences(family).unwrap().to_string(), text, "{family:?}");
    }
    assert_eq!(
        known_degree_sequences(Family::Torus2StrandMinimal { n: 3 }).unwrap(),
        DegreeSequence::exact(3, 8, 10)
    );
    assert!(known_degree_sequences(Family::TorusPq { p: 3, q: 6 }).is_err());
}

fn constructed() -> Vec<PolyKnot> {
    let mut out: Vec<PolyKnot> = TORI
        .iter()
        .map(|&(p, q)| construct_polyknot(&QuasitoricPattern::toric(p, q)).unwrap())
        .collect();
    out.push(construct_from_word(&parse_braid(WORD_8_17).unwrap(), &Tolerances::default()).unwrap());
    out
}

#[test]
fn single_flips_cost_at_most_four_degrees() {
    let tol = Tolerances::default();
    let knots = constructed();
    let mut rng = StdRng::seed_from_u64(32);
    for _ in 0..50 {
        let k = &knots[rng.random_range(0..knots.len())];
        let id = rng.random_range(0..k.diagram.crossing_count());
        let n_before = sign_variation_count(&k.diagram.visits);
        let flipped = apply_crossing_changes(k, &BTreeSet::from([id]), &tol).unwrap();
        assert!(flipped.h.degree() <= n_before + 4, "{} > {n_before} + 4", flipped.h.degree());
        let changed: Vec<usize> = (0..k.diagram.visits.len())
            .filter(|&i| k.diagram.visits[i].role != flipped.diagram.visits[i].role)
            .map(|i| k.diagram.visits[i].crossing_id)
            .collect();
        assert_eq!(changed, vec![id, id]);
        let back = apply_crossing_changes(&flipped, &BTreeSet::from([id]), &tol).unwrap();
        assert_eq!(back.diagram, k.diagram);
    }
}

#[test]
fn worked_example_8_17() {
    let k = construct_from_word(&parse_braid(WORD_8_17).unwrap(), &Tolerances::default()).unwrap();
    assert_eq!(k.diagram.crossing_count(), 14);
    assert_eq!(k.f.degree(), 5);
    assert_eq!(k.h.degree(), 9);
    assert_eq!(sign_variation_count(&k.diagram.visits), 9);
    let ids = identify(&InvariantProfile::of(&k.diagram).unwrap()).unwrap();
    assert!(ids.iter().any(|i| i.name == "8_17"));
}
