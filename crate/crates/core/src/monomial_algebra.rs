//! Monomials of `F_2[x_0, ..., x_{m-1}] / (x_i^2 - x_i)` and the partial
//! orders used by decreasing monomial codes.
//!
//! A monomial is a set of variable indices stored as a bitmask. The partial
//! order `≼` compares sorted index lists; `≼_s` is its covering relation
//! (one variable swapped for a smaller one, or one variable removed).

use std::fmt;

use crate::error::{Error, Result};
use crate::polar_transform::{monomial_to_index, BitVector};

/// A squarefree monomial over `m` variables.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    mask: u32,
    m: u32,
}

/// Outcome of comparing two monomials under `≼`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MonomialOrder {
    Equal,
    FPrecedesG,
    GPrecedesF,
    Incomparable,
}

impl MonomialOrder {
    pub fn as_str(self) -> &'static str {
        match self {
            MonomialOrder::Equal => "equal",
            MonomialOrder::FPrecedesG => "f_precedes_g",
            MonomialOrder::GPrecedesF => "g_precedes_f",
            MonomialOrder::Incomparable => "incomparable",
        }
    }
}

/// Largest supported number of variables.
pub const MAX_VARS: u32 = 31;

fn check_vars(m: u32) -> Result<()> {
    if m > MAX_VARS {
        return Err(Error::LengthExponentTooLarge { m, limit: MAX_VARS });
    }
    Ok(())
}

impl Monomial {
    /// The constant monomial `1`.
    pub fn one(m: u32) -> Self {
        Self::from_mask(0, m)
    }

    pub fn from_mask(mask: u32, m: u32) -> Self {
        assert!(m <= MAX_VARS, "at most {MAX_VARS} variables are supported");
        assert!(mask >> m == 0, "variable index out of range for m = {m}");
        Self { mask, m }
    }

    pub fn from_vars(vars: &[usize], m: u32) -> Result<Self> {
        check_vars(m)?;
        let mut mask = 0u32;
        for &v in vars {
            if v >= m as usize {
                return Err(Error::IndexOutOfRange {
                    index: v,
                    len: m as usize,
                });
            }
            mask |= 1 << v;
        }
        Ok(Self::from_mask(mask, m))
    }

    /// Parses `1`, `x0`, `x0*x3` or `x2x3` over `m` variables.
    pub fn parse(s: &str, m: u32) -> Result<Self> {
        let err = |position: usize, message: String| Error::Parse { position, message };
        check_vars(m)?;
        let s_trim = s.trim();
        if s_trim == "1" {
            return Ok(Self::one(m));
        }
        if s_trim.is_empty() {
            return Err(err(0, "empty monomial".into()));
        }
        let bytes = s.as_bytes();
        let mut vars = Vec::new();
        let mut pos = s.len() - s.trim_start().len();
        let end = pos + s_trim.len();
        while pos < end {
            match bytes[pos] {
                b'x' | b'X' => pos += 1,
                b'*' if !vars.is_empty() && bytes[pos - 1] != b'*' => {
                    pos += 1;
                    continue;
                }
                c => return Err(err(pos, format!("expected 'x', found {:?}", c as char))),
            }
            let start = pos;
            while pos < end && bytes[pos].is_ascii_digit() {
                pos += 1;
            }
            if start == pos {
                return Err(err(pos, "expected a variable index".into()));
            }
            let index: usize = s[start..pos]
                .parse()
                .map_err(|_| err(start, "variable index too large".into()))?;
            if index >= m as usize {
                return Err(err(
                    start,
                    format!("variable x{index} out of range for m = {m}"),
                ));
            }
            if vars.contains(&index) {
                return Err(err(start, format!("variable x{index} repeated")));
            }
            vars.push(index);
        }
        if bytes[end - 1] == b'*' {
            return Err(err(end - 1, "trailing '*'".into()));
        }
        Self::from_vars(&vars, m)
    }

    pub fn mask(&self) -> u32 {
        self.mask
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn degree(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn contains(&self, var: usize) -> bool {
        (self.mask >> var) & 1 == 1
    }

    /// Variable indices in increasing order.
    pub fn vars(&self) -> Vec<usize> {
        (0..self.m as usize).filter(|&v| self.contains(v)).collect()
    }

    /// Row index of this monomial in `G_n`.
    pub fn index(&self) -> usize {
        monomial_to_index(self)
    }

    fn with_var(self, var: usize) -> Self {
        Self::from_mask(self.mask | (1 << var), self.m)
    }

    fn without_var(self, var: usize) -> Self {
        Self::from_mask(self.mask & !(1 << var), self.m)
    }

    /// The evaluation vector `(f(b))_b`, with points `b` ordered so that
    /// `Σ (1 - b_i) 2^{m-1-i}` runs through `0, 1, ..., 2^m - 1`.
    ///
    /// Position `p` therefore has `b_i = 1 - bit_{m-1-i}(p)`.
    pub fn evaluate(&self) -> BitVector {
        let m = self.m;
        let n = 1usize << m;
        // b_i = 1 for all i in f  <=>  bit (m-1-i) of p is clear for all i in f
        let mut forbidden = 0usize;
        for v in self.vars() {
            forbidden |= 1 << (m as usize - 1 - v);
        }
        (0..n).map(|p| p & forbidden == 0).collect()
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.mask == 0 {
            return f.write_str("1");
        }
        for v in self.vars() {
            write!(f, "x{v}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Decides `f ≼ g`, `g ≼ f`, or incomparability in `O(deg)` time.
///
/// Monomials of equal degree are compared index-by-index after the first
/// difference. For unequal degrees the shorter index list is aligned with
/// the top entries of the longer one, which is the best possible divisor.
pub fn compare(f: &Monomial, g: &Monomial) -> MonomialOrder {
    assert_eq!(f.m, g.m, "monomials over different variable counts");
    if f == g {
        return MonomialOrder::Equal;
    }
    let fi = f.vars();
    let gj = g.vars();
    use std::cmp::Ordering::*;
    match fi.len().cmp(&gj.len()) {
        Greater => {
            let off = fi.len() - gj.len();
            if gj.iter().enumerate().any(|(k, &j)| fi[k + off] < j) {
                MonomialOrder::Incomparable
            } else {
                MonomialOrder::GPrecedesF
            }
        }
        Less => {
            let off = gj.len() - fi.len();
            if fi.iter().enumerate().any(|(k, &i)| i > gj[k + off]) {
                MonomialOrder::Incomparable
            } else {
                MonomialOrder::FPrecedesG
            }
        }
        Equal => {
            let r = (0..fi.len())
                .find(|&k| fi[k] != gj[k])
                .expect("distinct monomials");
            if fi[r] > gj[r] {
                if (r + 1..fi.len()).any(|k| fi[k] < gj[k]) {
                    MonomialOrder::Incomparable
                } else {
                    MonomialOrder::GPrecedesF
                }
            } else if (r + 1..fi.len()).any(|k| fi[k] > gj[k]) {
                MonomialOrder::Incomparable
            } else {
                MonomialOrder::FPrecedesG
            }
        }
    }
}

/// `f ≼ g` (reflexive).
pub fn precedes(f: &Monomial, g: &Monomial) -> bool {
    matches!(
        compare(f, g),
        MonomialOrder::Equal | MonomialOrder::FPrecedesG
    )
}

/// `f ≼_s g`: `g = h·x_k` and either `f = h·x_j` with `j < k`, or `f = h`.
pub fn single_shift_le(f: &Monomial, g: &Monomial) -> bool {
    assert_eq!(f.m, g.m, "monomials over different variable counts");
    let only_f = f.mask & !g.mask;
    let only_g = g.mask & !f.mask;
    match (only_f.count_ones(), only_g.count_ones()) {
        (0, 1) => true,
        (1, 1) => only_f < only_g,
        _ => false,
    }
}

/// The monomials `h` with `h ≼_s g`, swaps first (largest replacement index
/// first), then removals.
pub fn immediate_predecessors(g: &Monomial) -> Vec<Monomial> {
    let mut out = Vec::new();
    for k in g.vars() {
        for j in (0..k).rev().filter(|&j| !g.contains(j)) {
            out.push(g.without_var(k).with_var(j));
        }
    }
    for k in g.vars() {
        out.push(g.without_var(k));
    }
    out
}

/// A chain `f = f_0 ≼_s f_1 ≼_s ⋯ ≼_s f_t = g`, or `None` if `f ⋠ g`.
pub fn chain_decompose(f: &Monomial, g: &Monomial) -> Option<Vec<Monomial>> {
    if !precedes(f, g) {
        return None;
    }
    let fi = f.vars();
    let gj = g.vars();
    let off = gj.len() - fi.len();
    let mut chain = vec![*f];
    let mut cur = *f;
    // raise variables top-down to the matching top entries of g
    for k in (0..fi.len()).rev() {
        let target = gj[k + off];
        if fi[k] != target {
            cur = cur.without_var(fi[k]).with_var(target);
            chain.push(cur);
        }
    }
    for &v in &gj[..off] {
        cur = cur.with_var(v);
        chain.push(cur);
    }
    debug_assert_eq!(cur, *g);
    Some(chain)
}

/// Returns a pair `(f, g)` with `g` in the set, `f ≼_s g` and `f` missing,
/// or `None` if the set is decreasing.
///
/// Checking immediate `≼_s` predecessors suffices because every relation
/// `f ≼ g` factors through a `≼_s` chain.
pub fn decreasing_violation(set: &[Monomial]) -> Option<(Monomial, Monomial)> {
    let members: std::collections::HashSet<Monomial> = set.iter().copied().collect();
    for g in set {
        for f in immediate_predecessors(g) {
            if !members.contains(&f) {
                return Some((f, *g));
            }
        }
    }
    None
}

pub fn is_decreasing(set: &[Monomial]) -> bool {
    decreasing_violation(set).is_none()
}

/// For each row `τ` of `G_n`, the number of rows above it that are
/// incomparable with `τ`.
pub fn incomparable_above_counts(m: u32) -> Vec<usize> {
    let n = 1usize << m;
    let monos: Vec<Monomial> = (0..n)
        .map(|i| Monomial::from_mask((!i & (n - 1)) as u32, m))
        .collect();
    (0..n)
        .map(|t| {
            monos[..t]
                .iter()
                .filter(|g| compare(&monos[t], g) == MonomialOrder::Incomparable)
                .count()
        })
        .collect()
}

/// Largest mixing factor of any length-`2^m` decreasing monomial code, and
/// all row indices `τ` (as last frozen row) attaining it.
pub fn max_mixing_factor(m: u32) -> (usize, Vec<usize>) {
    let counts = incomparable_above_counts(m);
    let best = counts.iter().copied().max().unwrap_or(0);
    let taus = (0..counts.len()).filter(|&t| counts[t] == best).collect();
    (best, taus)
}

/// Upper bound on the mixing factor of decreasing monomial codes of rate at
/// most one half: a rate-½ code with last frozen row `t` has `n - 1 - t`
/// unfrozen rows below it, leaving at most `t + 1 - n/2` above.
pub fn max_mixing_factor_rate_half(m: u32) -> usize {
    let n = 1usize << m;
    incomparable_above_counts(m)
        .into_iter()
        .enumerate()
        .map(|(t, c)| c.min((t + 1).saturating_sub(n / 2)))
        .max()
        .unwrap_or(0)
}
