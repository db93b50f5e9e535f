#![allow(dead_code)]

use polar_wef::monomial_algebra::{precedes, Monomial};
use polar_wef::polar_transform::index_to_monomial;
use polar_wef::{BitVector, CodeSpec, FreezeConstraint, WeightEnumerator};
use rand::seq::SliceRandom;
use rand::Rng;

pub const TABLE3_UNFROZEN: [usize; 64] = [
    27, 29, 30, 31, 39, 43, 45, 46, 47, 51, 53, 54, 55, 57, 58, 59, 60, 61, 62, 63, 71, 75, 77, 78,
    79, 83, 85, 86, 87, 89, 90, 91, 92, 93, 94, 95, 99, 101, 102, 103, 104, 105, 106, 107, 108,
    109, 110, 111, 112, 113, 114, 115, 116, 117, 118, 119, 120, 121, 122, 123, 124, 125, 126, 127,
];

/// Nonzero coefficients up to weight 64; the rest follow by symmetry.
pub const TABLE3_HALF: [(usize, u64); 15] = [
    (0, 1),
    (8, 48),
    (16, 68856),
    (20, 897024),
    (24, 62174352),
    (28, 3788558336),
    (32, 340898548764),
    (36, 18388352700416),
    (40, 552957778921776),
    (44, 9486025399037952),
    (48, 94114632655641288),
    (52, 549860758309036032),
    (56, 1920565170953912848),
    (60, 4051922167606616064),
    (64, 5193703182097324102),
];

pub fn table3_spec() -> CodeSpec {
    CodeSpec::from_unfrozen_set(7, &TABLE3_UNFROZEN).unwrap()
}

pub fn table3_wef() -> WeightEnumerator {
    let mut terms: Vec<(usize, u64)> = TABLE3_HALF.to_vec();
    terms.extend(
        TABLE3_HALF
            .iter()
            .filter(|&&(w, _)| w < 64)
            .map(|&(w, c)| (128 - w, c)),
    );
    WeightEnumerator::from_terms(terms)
}

/// The (16, 11) code with `u_0, u_1, u_2, u_4, u_8` frozen.
pub fn hamming16() -> CodeSpec {
    CodeSpec::from_frozen_set(4, &[0, 1, 2, 4, 8]).unwrap()
}

pub fn hamming16_wef() -> WeightEnumerator {
    WeightEnumerator::from_terms([
        (0, 1u32),
        (4, 140),
        (6, 448),
        (8, 870),
        (10, 448),
        (12, 140),
        (16, 1),
    ])
}

pub fn monomials(m: u32) -> Vec<Monomial> {
    (0..1usize << m)
        .map(|i| index_to_monomial(i, m).unwrap())
        .collect()
}

/// Plain code with a random unfrozen set of size at most `max_k`.
pub fn random_plain(rng: &mut impl Rng, m: u32, max_k: usize) -> CodeSpec {
    let n = 1usize << m;
    let k = rng.gen_range(0..=max_k.min(n));
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(rng);
    CodeSpec::from_unfrozen_set(m, &idx[..k]).unwrap()
}

/// Random unfrozen set with random affine constraints on the frozen bits.
pub fn random_dynamic(rng: &mut impl Rng, m: u32, max_k: usize) -> CodeSpec {
    let base = random_plain(rng, m, max_k);
    let unfrozen = base.unfrozen_indices();
    let mut constraints = Vec::new();
    for t in base.frozen_indices() {
        if rng.gen_bool(0.6) {
            let support: Vec<usize> = (0..t).filter(|_| rng.gen_bool(0.3)).collect();
            constraints.push(FreezeConstraint::new(t, &support, rng.gen_bool(0.2)).unwrap());
        }
    }
    CodeSpec::with_constraints(m, &unfrozen, constraints).unwrap()
}

/// Random decreasing set of size at most `max_k`, grown from random
/// generators by adding whole down-sets.
pub fn random_decreasing(rng: &mut impl Rng, m: u32, max_k: usize) -> CodeSpec {
    let all = monomials(m);
    let target = rng.gen_range(0..=max_k.min(all.len()));
    let mut order = all.clone();
    order.shuffle(rng);
    let mut set: Vec<Monomial> = Vec::new();
    for g in order {
        if set.contains(&g) {
            continue;
        }
        let down: Vec<Monomial> = all
            .iter()
            .copied()
            .filter(|f| precedes(f, &g) && !set.contains(f))
            .collect();
        if set.len() + down.len() <= target {
            set.extend(down);
        }
    }
    let unfrozen: Vec<usize> = set.iter().map(|f| f.index()).collect();
    CodeSpec::from_unfrozen_set(m, &unfrozen).unwrap()
}

/// Random full-rank generator matrix with `k` rows of length `2^m`.
pub fn random_generator(rng: &mut impl Rng, m: u32, k: usize) -> Vec<BitVector> {
    let n = 1usize << m;
    loop {
        let rows: Vec<BitVector> = (0..k)
            .map(|_| (0..n).map(|_| rng.gen_bool(0.5)).collect())
            .collect();
        if CodeSpec::from_generator_matrix(&rows).is_ok() {
            return rows;
        }
    }
}
