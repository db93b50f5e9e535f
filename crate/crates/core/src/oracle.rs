//! Brute-force ground truth.
//!
//! Every codeword (or coset member) is generated explicitly, encoded and
//! tallied. Only suitable for small dimensions; the guards refuse anything
//! larger.

use crate::code_model::CodeSpec;
use crate::coset_wef::PolarCosetSpec;
use crate::error::{Error, Result};
use crate::polar_transform::{encode, log2_exact, BitVector};
use crate::wef_poly::WeightEnumerator;

/// Limits on what the oracle is willing to enumerate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleGuard {
    /// Largest number of free bits, i.e. `2^max_free_bits` words.
    pub max_free_bits: usize,
    pub max_n: usize,
}

impl Default for OracleGuard {
    fn default() -> Self {
        Self {
            max_free_bits: 24,
            max_n: 4096,
        }
    }
}

impl OracleGuard {
    fn check(&self, free_bits: usize, n: usize) -> Result<()> {
        if free_bits > self.max_free_bits {
            return Err(Error::GuardExceeded {
                bits: free_bits,
                limit: self.max_free_bits,
            });
        }
        if n > self.max_n {
            return Err(Error::GuardExceeded {
                bits: n,
                limit: self.max_n,
            });
        }
        Ok(())
    }
}

fn tally(n: usize, words: impl Iterator<Item = BitVector>) -> WeightEnumerator {
    let mut counts = vec![0u64; n + 1];
    for c in words {
        counts[c.weight()] += 1;
    }
    WeightEnumerator::from_counts(&counts)
}

fn assignment(value: u64, bits: usize) -> impl Iterator<Item = bool> {
    (0..bits).map(move |j| (value >> (bits - 1 - j)) & 1 == 1)
}

/// Every word of the code (or affine subset, when constants are 1) in
/// lexicographic order of the free bits.
pub fn codewords(spec: &CodeSpec, guard: &OracleGuard) -> Result<Vec<BitVector>> {
    let (k, m) = (spec.k(), spec.m());
    guard.check(k, spec.n())?;
    (0..1u64 << k)
        .map(|a| encode(&spec.information_vector(assignment(a, k)), m))
        .collect()
}

/// Weight enumerator of a spec by exhaustive enumeration, default guard.
pub fn brute_force_wef(spec: &CodeSpec) -> Result<WeightEnumerator> {
    brute_force_wef_with(spec, &OracleGuard::default())
}

pub fn brute_force_wef_with(spec: &CodeSpec, guard: &OracleGuard) -> Result<WeightEnumerator> {
    let (k, m) = (spec.k(), spec.m());
    guard.check(k, spec.n())?;
    let words = (0..1u64 << k)
        .map(|a| encode(&spec.information_vector(assignment(a, k)), m).expect("length matches"));
    Ok(tally(spec.n(), words))
}

/// Weight enumerator of a polar coset by exhaustive enumeration of the
/// free suffix, default guard.
pub fn brute_force_coset_wef(coset: &PolarCosetSpec) -> Result<WeightEnumerator> {
    brute_force_coset_wef_with(coset, &OracleGuard::default())
}

pub fn brute_force_coset_wef_with(
    coset: &PolarCosetSpec,
    guard: &OracleGuard,
) -> Result<WeightEnumerator> {
    let n = coset.n();
    let m = log2_exact(n)?;
    let free = n - 1 - coset.index();
    guard.check(free, n)?;
    let mut head = coset.prefix().clone();
    head.push(coset.last_bit());
    let words = (0..1u64 << free).map(|a| {
        let mut u = head.clone();
        for b in assignment(a, free) {
            u.push(b);
        }
        encode(&u, m).expect("length matches")
    });
    Ok(tally(n, words))
}
