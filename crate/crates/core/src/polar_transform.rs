//! The polar transform `G_n = B_n · K_2^{⊗m}`.
//!
//! Vectors are bit-packed into 64-bit words. Encoding runs the Kronecker
//! butterfly in place and then applies the bit-reversal permutation; the
//! dense generator matrix is only materialized on request.

use std::fmt;
use std::str::FromStr;

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::monomial_algebra::Monomial;

/// Largest `m` for which [`generator_matrix`] will materialize `G_n`.
pub const MATRIX_GUARD_M: u32 = 12;

/// Largest supported length exponent for encoding and code specifications.
pub const MAX_M: u32 = 24;

const EVEN_MASKS: [u64; 6] = [
    0x5555_5555_5555_5555,
    0x3333_3333_3333_3333,
    0x0f0f_0f0f_0f0f_0f0f,
    0x00ff_00ff_00ff_00ff,
    0x0000_ffff_0000_ffff,
    0x0000_0000_ffff_ffff,
];

/// A binary vector of explicit length, packed little-endian into words.
///
/// Bits beyond `len` are always zero, so derived equality and hashing are
/// by value.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct BitVector {
    words: SmallVec<[u64; 2]>,
    len: usize,
}

impl BitVector {
    /// The empty vector.
    pub fn new() -> Self {
        Self::default()
    }

    pub fn zeros(len: usize) -> Self {
        let mut words = SmallVec::new();
        words.resize(len.div_ceil(64), 0);
        Self { words, len }
    }

    /// Builds a vector from 0/1 values; any nonzero byte counts as 1.
    pub fn from_bits(bits: &[u8]) -> Self {
        bits.iter().map(|&b| b != 0).collect()
    }

    /// Builds a vector of `len` bits from the low bits of `value`.
    pub fn from_u64(value: u64, len: usize) -> Self {
        assert!(len <= 64);
        let mut v = Self::zeros(len);
        if len > 0 {
            let mask = if len == 64 { u64::MAX } else { (1 << len) - 1 };
            v.words[0] = value & mask;
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, bit: bool) {
        assert!(
            i < self.len,
            "bit index {i} out of range for length {}",
            self.len
        );
        let w = &mut self.words[i / 64];
        if bit {
            *w |= 1 << (i % 64);
        } else {
            *w &= !(1 << (i % 64));
        }
    }

    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len);
        self.words[i / 64] ^= 1 << (i % 64);
    }

    pub fn push(&mut self, bit: bool) {
        if self.len.is_multiple_of(64) {
            self.words.push(0);
        }
        self.len += 1;
        self.set(self.len - 1, bit);
    }

    /// Hamming weight.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    pub fn to_bits(&self) -> Vec<u8> {
        self.iter().map(u8::from).collect()
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// The first `len` bits.
    pub fn prefix(&self, len: usize) -> Self {
        assert!(len <= self.len);
        let mut out = Self {
            words: self.words[..len.div_ceil(64)].into(),
            len,
        };
        out.clear_tail();
        out
    }

    pub fn xor_assign(&mut self, other: &Self) {
        assert_eq!(self.len, other.len, "xor of vectors with different lengths");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    /// Parity of the bits selected by `indices`.
    pub fn parity_of(&self, indices: &[usize]) -> bool {
        indices.iter().fold(false, |acc, &j| acc ^ self.get(j))
    }

    /// The subvector `(v_0, v_2, v_4, ...)`.
    pub fn even_bits(&self) -> Self {
        self.compact(0)
    }

    /// The subvector `(v_1, v_3, v_5, ...)`.
    pub fn odd_bits(&self) -> Self {
        self.compact(1)
    }

    fn compact(&self, offset: u32) -> Self {
        let len = (self.len + 1 - offset as usize) / 2;
        let mut out = Self::zeros(len);
        for (w, &word) in self.words.iter().enumerate() {
            let half = compact_even_bits(word >> offset);
            if half != 0 {
                out.words[w / 2] |= half << (32 * (w % 2));
            }
        }
        out
    }

    fn clear_tail(&mut self) {
        let rem = self.len % 64;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1 << rem) - 1;
            }
        }
    }
}

#[inline]
fn compact_even_bits(mut x: u64) -> u64 {
    x &= EVEN_MASKS[0];
    x = (x | (x >> 1)) & EVEN_MASKS[1];
    x = (x | (x >> 2)) & EVEN_MASKS[2];
    x = (x | (x >> 4)) & EVEN_MASKS[3];
    x = (x | (x >> 8)) & EVEN_MASKS[4];
    x = (x | (x >> 16)) & EVEN_MASKS[5];
    x
}

impl FromIterator<bool> for BitVector {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        let mut v = Self::new();
        for b in iter {
            v.push(b);
        }
        v
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("ψ");
        }
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

impl FromStr for BitVector {
    type Err = Error;

    /// Parses a string of `0`/`1` characters; `ψ` and the empty string are
    /// the empty vector.
    fn from_str(s: &str) -> Result<Self> {
        if s == "ψ" {
            return Ok(Self::new());
        }
        s.chars()
            .enumerate()
            .map(|(position, c)| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::Parse {
                    position,
                    message: format!("unexpected character {c:?} in bit string"),
                }),
            })
            .collect()
    }
}

/// Checks that `n` is a power of two and returns `log2(n)`.
pub fn log2_exact(n: usize) -> Result<u32> {
    if n.is_power_of_two() {
        Ok(n.trailing_zeros())
    } else {
        Err(Error::NotPowerOfTwo(n))
    }
}

#[inline]
fn reverse_bits(i: usize, m: u32) -> usize {
    if m == 0 {
        0
    } else {
        i.reverse_bits() >> (usize::BITS - m)
    }
}

/// The bit-reversal permutation of `{0, ..., 2^m - 1}`.
pub fn bit_reversal_permutation(m: u32) -> Vec<usize> {
    (0..1usize << m).map(|i| reverse_bits(i, m)).collect()
}

/// Computes `u · G_n` over GF(2) with `n = 2^m`.
pub fn encode(u: &BitVector, m: u32) -> Result<BitVector> {
    if m > MAX_M {
        return Err(Error::LengthExponentTooLarge { m, limit: MAX_M });
    }
    let n = 1usize << m;
    if u.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            actual: u.len(),
        });
    }
    let mut y = u.clone();
    kronecker_butterfly(&mut y.words, m);
    Ok(bit_reverse_positions(&y, m))
}

/// In-place `x ↦ x · K_2^{⊗m}`: position `j` becomes the XOR of all
/// positions whose index contains `j` bitwise.
fn kronecker_butterfly(words: &mut [u64], m: u32) {
    for b in 0..m {
        if b < 6 {
            let h = 1u32 << b;
            let mask = EVEN_MASKS[b as usize];
            for w in words.iter_mut() {
                *w ^= (*w >> h) & mask;
            }
        } else {
            let stride = 1usize << (b - 6);
            for w in 0..words.len() {
                if w & stride == 0 {
                    words[w] ^= words[w + stride];
                }
            }
        }
    }
}

fn bit_reverse_positions(y: &BitVector, m: u32) -> BitVector {
    let n = y.len();
    let mut out = BitVector::zeros(n);
    for (w, &word) in y.words.iter().enumerate() {
        let mut bits = word;
        while bits != 0 {
            let t = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let i = w * 64 + t;
            let j = reverse_bits(i, m);
            out.words[j / 64] |= 1 << (j % 64);
        }
    }
    out
}

/// The rows of `G_n`, materialized. Refuses `m > 12`.
pub fn generator_matrix(m: u32) -> Result<Vec<BitVector>> {
    if m > MATRIX_GUARD_M {
        return Err(Error::LengthExponentTooLarge {
            m,
            limit: MATRIX_GUARD_M,
        });
    }
    let n = 1usize << m;
    (0..n)
        .map(|i| {
            let mut e = BitVector::zeros(n);
            e.set(i, true);
            encode(&e, m)
        })
        .collect()
}

/// The monomial whose evaluation vector is row `i` of `G_n`.
///
/// Variable `x_j` is present exactly when bit `j` of `i` is zero, so row
/// `n - 1` is the constant monomial and row 0 is `x_0 x_1 ⋯ x_{m-1}`.
pub fn index_to_monomial(i: usize, m: u32) -> Result<Monomial> {
    let n = 1usize << m;
    if i >= n {
        return Err(Error::IndexOutOfRange { index: i, len: n });
    }
    Ok(Monomial::from_mask((!i & (n - 1)) as u32, m))
}

/// Inverse of [`index_to_monomial`].
pub fn monomial_to_index(f: &Monomial) -> usize {
    let n = 1usize << f.m();
    !(f.mask() as usize) & (n - 1)
}
