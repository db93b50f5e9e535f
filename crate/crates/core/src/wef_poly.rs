//! Exact weight enumerating functions.
//!
//! [`WeightEnumerator`] is a dense polynomial with arbitrary-precision
//! non-negative coefficients. The hot coset recursion works on
//! [`DensePoly`] over any [`Coeff`]; machine-word coefficients are used
//! only when the coset size bounds every coefficient.

use std::fmt;
use std::ops::{Add, AddAssign, Mul};

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Coefficient ring for [`DensePoly`].
pub trait Coeff: Zero + One + Clone + Send + Sync + PartialEq + fmt::Debug + 'static {
    fn add_assign_ref(&mut self, rhs: &Self);
    /// `self += a * b`
    fn mul_add_assign(&mut self, a: &Self, b: &Self);
    fn to_biguint(&self) -> BigUint;
}

macro_rules! impl_coeff_prim {
    ($t:ty) => {
        impl Coeff for $t {
            #[inline]
            fn add_assign_ref(&mut self, rhs: &Self) {
                *self += *rhs;
            }
            #[inline]
            fn mul_add_assign(&mut self, a: &Self, b: &Self) {
                *self += *a * *b;
            }
            fn to_biguint(&self) -> BigUint {
                BigUint::from(*self)
            }
        }
    };
}

impl_coeff_prim!(u64);
impl_coeff_prim!(u128);

impl Coeff for BigUint {
    fn add_assign_ref(&mut self, rhs: &Self) {
        *self += rhs;
    }
    fn mul_add_assign(&mut self, a: &Self, b: &Self) {
        *self += a * b;
    }
    fn to_biguint(&self) -> BigUint {
        self.clone()
    }
}

/// Dense polynomial used inside the coset recursion. Trailing zeros are
/// allowed.
#[derive(Clone, Debug, PartialEq)]
pub struct DensePoly<T> {
    pub(crate) coeffs: Vec<T>,
}

impl<T: Coeff> DensePoly<T> {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    /// `X^w`
    pub fn monomial(w: usize) -> Self {
        let mut coeffs = vec![T::zero(); w + 1];
        coeffs[w] = T::one();
        Self { coeffs }
    }

    fn support(&self) -> Option<(usize, usize)> {
        let lo = self.coeffs.iter().position(|c| !c.is_zero())?;
        let hi = self.coeffs.iter().rposition(|c| !c.is_zero())?;
        Some((lo, hi))
    }

    pub fn add_assign(&mut self, other: &Self) {
        if self.coeffs.len() < other.coeffs.len() {
            self.coeffs.resize(other.coeffs.len(), T::zero());
        }
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            if !b.is_zero() {
                a.add_assign_ref(b);
            }
        }
    }

    /// `self += a * b` by schoolbook convolution over the nonzero ranges.
    pub fn add_product(&mut self, a: &Self, b: &Self) {
        let (Some((alo, ahi)), Some((blo, bhi))) = (a.support(), b.support()) else {
            return;
        };
        if self.coeffs.len() < ahi + bhi + 1 {
            self.coeffs.resize(ahi + bhi + 1, T::zero());
        }
        for i in alo..=ahi {
            let x = &a.coeffs[i];
            if x.is_zero() {
                continue;
            }
            let out = &mut self.coeffs[i + blo..=i + bhi];
            for (o, y) in out.iter_mut().zip(&b.coeffs[blo..=bhi]) {
                o.mul_add_assign(x, y);
            }
        }
    }

    pub fn product(a: &Self, b: &Self) -> Self {
        let mut out = Self::zero();
        out.add_product(a, b);
        out
    }

    pub fn to_weight_enumerator(&self) -> WeightEnumerator {
        WeightEnumerator::from_coeffs(self.coeffs.iter().map(Coeff::to_biguint).collect())
    }
}

/// A weight enumerating function `Σ A_w X^w` with exact coefficients.
///
/// The representation is normalized: no trailing zero coefficients, so
/// equality is polynomial equality.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct WeightEnumerator {
    coeffs: Vec<BigUint>,
}

impl WeightEnumerator {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self {
            coeffs: vec![BigUint::one()],
        }
    }

    /// `c · X^w`
    pub fn term(w: usize, c: impl Into<BigUint>) -> Self {
        let mut coeffs = vec![BigUint::zero(); w + 1];
        coeffs[w] = c.into();
        Self::from_coeffs(coeffs)
    }

    pub fn from_coeffs(mut coeffs: Vec<BigUint>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_counts(counts: &[u64]) -> Self {
        Self::from_coeffs(counts.iter().map(|&c| BigUint::from(c)).collect())
    }

    /// Builds from sparse `(weight, count)` terms; repeated weights add up.
    pub fn from_terms<C: Into<BigUint>>(terms: impl IntoIterator<Item = (usize, C)>) -> Self {
        let mut out = Self::zero();
        for (w, c) in terms {
            out += &Self::term(w, c);
        }
        out
    }

    /// `(1 + X)^n`
    pub fn binomial(n: usize) -> Self {
        let mut coeffs = Vec::with_capacity(n + 1);
        let mut c = BigUint::one();
        for w in 0..=n {
            coeffs.push(c.clone());
            c = c * (n - w) / (w + 1);
        }
        Self::from_coeffs(coeffs)
    }

    pub fn coefficients(&self) -> &[BigUint] {
        &self.coeffs
    }

    /// `A_w`, zero beyond the degree.
    pub fn coefficient(&self, w: usize) -> BigUint {
        self.coeffs.get(w).cloned().unwrap_or_default()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Nonzero terms in increasing weight order.
    pub fn terms(&self) -> impl Iterator<Item = (usize, &BigUint)> {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero())
    }

    /// Sum of coefficients, i.e. the number of enumerated words.
    pub fn eval_at_one(&self) -> BigUint {
        self.coeffs.iter().sum()
    }

    /// Multiplies every coefficient by `2^bits`.
    pub fn shifted_left(&self, bits: usize) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c << bits).collect(),
        }
    }

    /// `A_w = A_{n-w}` for all `w`.
    pub fn is_palindromic(&self, n: usize) -> bool {
        if self.degree().is_some_and(|d| d > n) {
            return false;
        }
        (0..=n).all(|w| self.coefficient(w) == self.coefficient(n - w))
    }

    /// The enumerator of the dual code,
    /// `2^{-k} (1 + X)^n A((1 - X) / (1 + X))`.
    ///
    /// `self` must enumerate a linear `(n, k)` code; exact divisibility and
    /// non-negativity of the transform are checked, not assumed.
    pub fn macwilliams(&self, n: usize, k: usize) -> Result<Self> {
        let bad = |msg: String| Error::NotLinearCodeEnumerator(msg);
        if let Some(d) = self.degree() {
            if d > n {
                return Err(bad(format!("degree {d} exceeds length {n}")));
            }
        }
        if k > n {
            return Err(bad(format!("dimension {k} exceeds length {n}")));
        }
        let size = BigUint::one() << k;
        if self.eval_at_one() != size {
            return Err(bad(format!("{} words, expected 2^{k}", self.eval_at_one())));
        }
        let binom = pascal_triangle(n);
        let mut acc = vec![BigInt::zero(); n + 1];
        for (w, a) in self.terms() {
            let a = BigInt::from(a.clone());
            for (j, slot) in acc.iter_mut().enumerate() {
                // Krawtchouk K_j(w) = Σ_i (-1)^i C(w,i) C(n-w,j-i)
                let mut kj = BigInt::zero();
                let lo = j.saturating_sub(n - w);
                for i in lo..=j.min(w) {
                    let t = &binom[w][i] * &binom[n - w][j - i];
                    if i % 2 == 0 {
                        kj += t;
                    } else {
                        kj -= t;
                    }
                }
                *slot += &a * kj;
            }
        }
        let mut out = Vec::with_capacity(n + 1);
        for (j, c) in acc.into_iter().enumerate() {
            let (sign, mag) = c.into_parts();
            if sign == Sign::Minus {
                return Err(bad(format!("negative transform coefficient at weight {j}")));
            }
            if mag.trailing_zeros().is_some_and(|t| t < k as u64) {
                return Err(bad(format!(
                    "coefficient at weight {j} not divisible by 2^{k}"
                )));
            }
            out.push(mag >> k);
        }
        Ok(Self::from_coeffs(out))
    }

    /// Coefficients padded with zeros to length `len` (if shorter).
    pub fn padded(&self, len: usize) -> Vec<BigUint> {
        let mut c = self.coeffs.clone();
        if c.len() < len {
            c.resize(len, BigUint::zero());
        }
        c
    }
}

fn pascal_triangle(n: usize) -> Vec<Vec<BigInt>> {
    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(n + 1);
    for r in 0..=n {
        let mut row = vec![BigInt::one(); r + 1];
        for i in 1..r {
            row[i] = &rows[r - 1][i - 1] + &rows[r - 1][i];
        }
        rows.push(row);
    }
    rows
}

impl AddAssign<&WeightEnumerator> for WeightEnumerator {
    fn add_assign(&mut self, rhs: &WeightEnumerator) {
        if self.coeffs.len() < rhs.coeffs.len() {
            self.coeffs.resize(rhs.coeffs.len(), BigUint::zero());
        }
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
    }
}

impl Add for &WeightEnumerator {
    type Output = WeightEnumerator;

    fn add(self, rhs: &WeightEnumerator) -> WeightEnumerator {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for WeightEnumerator {
    type Output = WeightEnumerator;

    fn add(mut self, rhs: WeightEnumerator) -> WeightEnumerator {
        self += &rhs;
        self
    }
}

impl Mul for &WeightEnumerator {
    type Output = WeightEnumerator;

    fn mul(self, rhs: &WeightEnumerator) -> WeightEnumerator {
        if self.is_zero() || rhs.is_zero() {
            return WeightEnumerator::zero();
        }
        let mut out = vec![BigUint::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.terms() {
            for (j, b) in rhs.terms() {
                out[i + j] += a * b;
            }
        }
        WeightEnumerator::from_coeffs(out)
    }
}

impl Mul for WeightEnumerator {
    type Output = WeightEnumerator;

    fn mul(self, rhs: WeightEnumerator) -> WeightEnumerator {
        &self * &rhs
    }
}

impl fmt::Display for WeightEnumerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (w, c) in self.terms() {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match (w, c.is_one()) {
                (0, _) => write!(f, "{c}")?,
                (1, true) => f.write_str("X")?,
                (1, false) => write!(f, "{c}X")?,
                (_, true) => write!(f, "X^{w}")?,
                (_, false) => write!(f, "{c}X^{w}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for WeightEnumerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WeightEnumerator({self})")
    }
}
