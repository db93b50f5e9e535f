//! Weight enumerators of polar cosets
//! `C_n^{(i)}(u_{i-1}, u_i) = {(u_{i-1}, u_i, u') · G_n : u' ∈ {0,1}^{n-1-i}}`.
//!
//! `G_{2n}` splits a length-`2n` input into `(u_even ⊕ u_odd) · G_n` and
//! `u_odd · G_n`, so the enumerator of a coset of length `2n` is a sum of
//! products of two length-`n` coset enumerators:
//!
//! * even `i = 2j`: `A(u, b) = Σ_c A_f(b ⊕ c) · A_g(c)`
//! * odd `i = 2j + 1`, with `a = u_{i-1}`: `A(u, b) = A_f(a ⊕ b) · A_g(b)`
//!
//! where `f` and `g` are the half-length cosets with prefixes
//! `u_even ⊕ u_odd` and `u_odd` (over the first `2j` bits). The recursion
//! bottoms out at `n = 1` with `(1, X)`.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;

use dashmap::DashMap;
use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::polar_transform::{log2_exact, BitVector};
use crate::wef_poly::{Coeff, DensePoly, WeightEnumerator};

/// Identifies the polar coset `C_n^{(i)}(prefix, last_bit)` with `i = |prefix|`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolarCosetSpec {
    n: usize,
    prefix: BitVector,
    last_bit: bool,
}

impl PolarCosetSpec {
    pub fn new(n: usize, prefix: BitVector, last_bit: bool) -> Result<Self> {
        check_args(n, &prefix)?;
        Ok(Self {
            n,
            prefix,
            last_bit,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// The index `i` of the last fixed bit.
    pub fn index(&self) -> usize {
        self.prefix.len()
    }

    pub fn prefix(&self) -> &BitVector {
        &self.prefix
    }

    pub fn last_bit(&self) -> bool {
        self.last_bit
    }

    /// `|C| = 2^{n-1-i}`
    pub fn size(&self) -> BigUint {
        BigUint::from(1u8) << (self.n - 1 - self.index())
    }

    /// The full fixed part `(u_0, ..., u_i)`.
    pub fn fixed_bits(&self) -> BitVector {
        let mut u = self.prefix.clone();
        u.push(self.last_bit);
        u
    }
}

fn check_args(n: usize, prefix: &BitVector) -> Result<()> {
    log2_exact(n)?;
    if prefix.len() >= n {
        return Err(Error::PrefixTooLong {
            prefix: prefix.len(),
            n,
        });
    }
    Ok(())
}

/// `(prefix_even ⊕ prefix_odd, prefix_odd)` over the longest even-length
/// prefix; an unpaired trailing bit is dropped.
pub fn even_odd_transform(prefix: &BitVector) -> (BitVector, BitVector) {
    let odd = prefix.odd_bits();
    let mut mixed = prefix.prefix(prefix.len() & !1).even_bits();
    mixed.xor_assign(&odd);
    (mixed, odd)
}

type Pair<T> = [DensePoly<T>; 2];
type CacheKey = (usize, BitVector);

/// Smallest block length whose results are cached.
const CACHE_MIN_N: usize = 8;

/// Default number of cached coset pairs.
pub const DEFAULT_CACHE_CAPACITY: usize = 1 << 16;

/// Bounded concurrent memo of sub-coset pairs keyed by `(n, prefix)`.
///
/// Entries are immutable once inserted; when full, new results are simply
/// not stored.
#[derive(Debug)]
pub struct CosetCache {
    capacity: usize,
    len: AtomicUsize,
    word: DashMap<CacheKey, Arc<Pair<u64>>>,
    wide: DashMap<CacheKey, Arc<Pair<u128>>>,
    big: DashMap<CacheKey, Arc<Pair<BigUint>>>,
}

impl CosetCache {
    pub fn new(capacity: usize) -> Self {
        Self {
            capacity,
            len: AtomicUsize::new(0),
            word: DashMap::new(),
            wide: DashMap::new(),
            big: DashMap::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.len.load(Ordering::Relaxed)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    fn get<T: Cached>(&self, key: &CacheKey) -> Option<Arc<Pair<T>>> {
        T::slot(self).get(key).map(|e| Arc::clone(e.value()))
    }

    fn insert<T: Cached>(&self, key: CacheKey, value: &Arc<Pair<T>>) {
        if self.len.load(Ordering::Relaxed) >= self.capacity {
            return;
        }
        let slot = T::slot(self);
        if let dashmap::Entry::Vacant(v) = slot.entry(key) {
            v.insert(Arc::clone(value));
            self.len.fetch_add(1, Ordering::Relaxed);
        }
    }
}

impl Default for CosetCache {
    fn default() -> Self {
        Self::new(DEFAULT_CACHE_CAPACITY)
    }
}

/// Coefficient types that have a slot in [`CosetCache`].
pub(crate) trait Cached: Coeff {
    fn slot(cache: &CosetCache) -> &DashMap<CacheKey, Arc<Pair<Self>>>;
}

impl Cached for u64 {
    fn slot(cache: &CosetCache) -> &DashMap<CacheKey, Arc<Pair<u64>>> {
        &cache.word
    }
}

impl Cached for u128 {
    fn slot(cache: &CosetCache) -> &DashMap<CacheKey, Arc<Pair<u128>>> {
        &cache.wide
    }
}

impl Cached for BigUint {
    fn slot(cache: &CosetCache) -> &DashMap<CacheKey, Arc<Pair<BigUint>>> {
        &cache.big
    }
}

/// Coefficient width for a coset of size `2^bits`. Every coefficient is at
/// most the coset size, and every sub-coset in the recursion is no larger
/// than its parent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Width {
    Word,
    Wide,
    Big,
}

impl Width {
    pub(crate) fn for_bound_bits(bits: usize) -> Self {
        if bits < 64 {
            Width::Word
        } else if bits < 128 {
            Width::Wide
        } else {
            Width::Big
        }
    }
}

/// Both enumerators `(A(prefix, 0), A(prefix, 1))`.
pub(crate) fn pair<T: Cached>(
    n: usize,
    prefix: &BitVector,
    cache: Option<&CosetCache>,
) -> Arc<Pair<T>> {
    if n == 1 {
        return Arc::new([DensePoly::monomial(0), DensePoly::monomial(1)]);
    }
    let cache = cache.filter(|_| n >= CACHE_MIN_N);
    if let Some(c) = cache {
        let key = (n, prefix.clone());
        if let Some(hit) = c.get::<T>(&key) {
            return hit;
        }
        let value = Arc::new(compute_pair::<T>(n, prefix, Some(c)));
        c.insert(key, &value);
        return value;
    }
    Arc::new(compute_pair::<T>(n, prefix, None))
}

fn compute_pair<T: Cached>(n: usize, prefix: &BitVector, cache: Option<&CosetCache>) -> Pair<T> {
    let i = prefix.len();
    let (a, b) = even_odd_transform(prefix);
    let f = pair::<T>(n / 2, &a, cache);
    let g = pair::<T>(n / 2, &b, cache);
    if i.is_multiple_of(2) {
        let mut r0 = DensePoly::product(&f[0], &g[0]);
        r0.add_product(&f[1], &g[1]);
        let mut r1 = DensePoly::product(&f[0], &g[1]);
        r1.add_product(&f[1], &g[0]);
        [r0, r1]
    } else if !prefix.get(i - 1) {
        [
            DensePoly::product(&f[0], &g[0]),
            DensePoly::product(&f[1], &g[1]),
        ]
    } else {
        [
            DensePoly::product(&f[1], &g[0]),
            DensePoly::product(&f[0], &g[1]),
        ]
    }
}

/// The single enumerator `A(prefix, bit)`; at odd indices only one
/// component of each half is needed. Only the pairs below this level go
/// through the cache.
pub(crate) fn component<T: Cached>(
    n: usize,
    prefix: &BitVector,
    bit: bool,
    cache: Option<&CosetCache>,
) -> DensePoly<T> {
    if n == 1 {
        return DensePoly::monomial(bit as usize);
    }
    let i = prefix.len();
    let (a, b) = even_odd_transform(prefix);
    if i.is_multiple_of(2) {
        let f = pair::<T>(n / 2, &a, cache);
        let g = pair::<T>(n / 2, &b, cache);
        let mut r = DensePoly::product(&f[bit as usize], &g[0]);
        r.add_product(&f[!bit as usize], &g[1]);
        r
    } else {
        let last = prefix.get(i - 1);
        let f = component::<T>(n / 2, &a, last ^ bit, cache);
        let g = component::<T>(n / 2, &b, bit, cache);
        DensePoly::product(&f, &g)
    }
}

fn pair_to_wefs<T: Cached>(p: &Pair<T>) -> (WeightEnumerator, WeightEnumerator) {
    (p[0].to_weight_enumerator(), p[1].to_weight_enumerator())
}

/// Computes `(A_n^{(i)}(prefix, 0), A_n^{(i)}(prefix, 1))` with `i = |prefix|`.
pub fn calc_a(n: usize, prefix: &BitVector) -> Result<(WeightEnumerator, WeightEnumerator)> {
    calc_a_with_cache(n, prefix, None)
}

/// [`calc_a`] sharing sub-results through `cache`.
pub fn calc_a_with_cache(
    n: usize,
    prefix: &BitVector,
    cache: Option<&CosetCache>,
) -> Result<(WeightEnumerator, WeightEnumerator)> {
    check_args(n, prefix)?;
    Ok(match Width::for_bound_bits(n - 1 - prefix.len()) {
        Width::Word => pair_to_wefs(&pair::<u64>(n, prefix, cache)),
        Width::Wide => pair_to_wefs(&pair::<u128>(n, prefix, cache)),
        Width::Big => pair_to_wefs(&pair::<BigUint>(n, prefix, cache)),
    })
}

/// The enumerator of a single coset.
pub fn coset_wef(coset: &PolarCosetSpec, cache: Option<&CosetCache>) -> WeightEnumerator {
    let (n, prefix, bit) = (coset.n, &coset.prefix, coset.last_bit);
    match Width::for_bound_bits(n - 1 - coset.index()) {
        Width::Word => component::<u64>(n, prefix, bit, cache).to_weight_enumerator(),
        Width::Wide => component::<u128>(n, prefix, bit, cache).to_weight_enumerator(),
        Width::Big => component::<BigUint>(n, prefix, bit, cache).to_weight_enumerator(),
    }
}
