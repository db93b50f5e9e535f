//! Code specifications: which information bits are free, and how frozen
//! bits are determined.
//!
//! A frozen bit is fixed by an affine constraint on strictly earlier bits,
//! `u_i = c ⊕ (⊕_{j ∈ support} u_j)`. Plain polar codes use `c = 0` and an
//! empty support everywhere; dynamically frozen codes (PAC, codes built
//! from an arbitrary generator matrix) use the general form.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::monomial_algebra::{decreasing_violation, Monomial};
use crate::polar_transform::{encode, index_to_monomial, BitVector, MAX_M};

/// `u_target = constant ⊕ (⊕_{j ∈ support} u_j)` with every `j < target`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FreezeConstraint {
    target: usize,
    support: Vec<usize>,
    constant: bool,
}

impl FreezeConstraint {
    /// Builds a constraint; repeated support indices cancel in pairs.
    pub fn new(target: usize, support: &[usize], constant: bool) -> Result<Self> {
        let mut set = BTreeSet::new();
        for &j in support {
            if j >= target {
                return Err(Error::InvalidSpec(format!(
                    "constraint on u_{target} refers to u_{j}, which is not earlier"
                )));
            }
            if !set.insert(j) {
                set.remove(&j);
            }
        }
        Ok(Self {
            target,
            support: set.into_iter().collect(),
            constant,
        })
    }

    /// `u_target = 0`
    pub fn zero(target: usize) -> Self {
        Self {
            target,
            support: Vec::new(),
            constant: false,
        }
    }

    /// `u_target = constant`
    pub fn fixed(target: usize, constant: bool) -> Self {
        Self {
            target,
            support: Vec::new(),
            constant,
        }
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn constant(&self) -> bool {
        self.constant
    }

    pub fn is_plain(&self) -> bool {
        !self.constant && self.support.is_empty()
    }

    /// Value of the frozen bit given the earlier bits of `u`.
    #[inline]
    pub fn evaluate(&self, u: &BitVector) -> bool {
        self.constant ^ u.parity_of(&self.support)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BitStatus {
    Unfrozen,
    Frozen(FreezeConstraint),
}

/// The red/blue structure around the last frozen bit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Profile {
    /// Index `s` of the last frozen bit.
    pub last_frozen: Option<usize>,
    /// Unfrozen indices below `s`.
    pub red: Vec<usize>,
    /// Unfrozen indices above `s`.
    pub blue: Vec<usize>,
    /// Mixing factor, the number of red bits.
    pub gamma: usize,
}

/// A binary linear code of length `2^m` described through `G_n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CodeSpec {
    m: u32,
    status: Vec<BitStatus>,
    label: Option<String>,
}

fn check_m(m: u32) -> Result<usize> {
    if m > MAX_M {
        return Err(Error::LengthExponentTooLarge { m, limit: MAX_M });
    }
    Ok(1usize << m)
}

fn check_index(i: usize, n: usize) -> Result<()> {
    if i >= n {
        return Err(Error::IndexOutOfRange { index: i, len: n });
    }
    Ok(())
}

impl CodeSpec {
    /// Plain code with the given indices frozen to zero.
    pub fn from_frozen_set(m: u32, frozen: &[usize]) -> Result<Self> {
        let n = check_m(m)?;
        let mut status = vec![BitStatus::Unfrozen; n];
        for &i in frozen {
            check_index(i, n)?;
            status[i] = BitStatus::Frozen(FreezeConstraint::zero(i));
        }
        Ok(Self {
            m,
            status,
            label: None,
        })
    }

    /// Plain code with exactly the given indices unfrozen.
    pub fn from_unfrozen_set(m: u32, unfrozen: &[usize]) -> Result<Self> {
        let n = check_m(m)?;
        let mut status: Vec<BitStatus> = (0..n)
            .map(|i| BitStatus::Frozen(FreezeConstraint::zero(i)))
            .collect();
        for &i in unfrozen {
            check_index(i, n)?;
            status[i] = BitStatus::Unfrozen;
        }
        Ok(Self {
            m,
            status,
            label: None,
        })
    }

    /// Code with dynamic constraints. Indices that are neither unfrozen nor
    /// constrained are frozen to zero.
    pub fn with_constraints(
        m: u32,
        unfrozen: &[usize],
        constraints: Vec<FreezeConstraint>,
    ) -> Result<Self> {
        let mut spec = Self::from_unfrozen_set(m, unfrozen)?;
        let n = spec.n();
        let mut seen = BTreeSet::new();
        for c in constraints {
            let t = c.target;
            check_index(t, n)?;
            if spec.status[t] == BitStatus::Unfrozen {
                return Err(Error::InvalidSpec(format!(
                    "u_{t} is both unfrozen and constrained"
                )));
            }
            if !seen.insert(t) {
                return Err(Error::InvalidSpec(format!(
                    "u_{t} has more than one constraint"
                )));
            }
            spec.status[t] = BitStatus::Frozen(c);
        }
        Ok(spec)
    }

    /// Reed–Muller code `RM(r, m)`: rows whose monomial has degree `≤ r`.
    pub fn from_rm(r: u32, m: u32) -> Result<Self> {
        if r > m {
            return Err(Error::InvalidSpec(format!(
                "RM order r = {r} exceeds m = {m}"
            )));
        }
        let n = check_m(m)?;
        let unfrozen: Vec<usize> = (0..n)
            .filter(|&i| (!i & (n - 1)).count_ones() <= r)
            .collect();
        Ok(Self::from_unfrozen_set(m, &unfrozen)?.with_label(format!("RM({r},{m})")))
    }

    /// Polar code for the binary erasure channel: unfreezes the `k` indices
    /// with the smallest Bhattacharyya parameter under `z⁻ = 2z − z²`,
    /// `z⁺ = z²`, starting from `z = erasure`.
    ///
    /// Equal parameters prefer unfreezing the larger index. The result is
    /// rejected if its monomial set is not decreasing.
    pub fn from_bhattacharyya_bec(m: u32, k: usize, erasure: f64) -> Result<Self> {
        let n = check_m(m)?;
        if k > n {
            return Err(Error::InvalidSpec(format!(
                "dimension {k} exceeds length {n}"
            )));
        }
        if !(erasure > 0.0 && erasure < 1.0) {
            return Err(Error::InvalidSpec(format!(
                "erasure probability {erasure} not in (0, 1)"
            )));
        }
        let unfrozen = most_reliable(&bec_bhattacharyya(m, erasure), k);
        let spec = Self::from_unfrozen_set(m, &unfrozen)?
            .with_label(format!("BEC({erasure}) polar ({n},{k})"));
        if let Some((lower, upper)) = decreasing_violation(&spec.unfrozen_monomials()) {
            return Err(Error::NotDecreasing {
                lower: lower.to_string(),
                upper: upper.to_string(),
            });
        }
        Ok(spec)
    }

    /// Represents the row space of `rows` as a code with dynamically frozen
    /// bits.
    ///
    /// Each row `c` is mapped to `u = c · G_n` and the result is brought to
    /// reduced echelon form with pivots at the lowest set index. Pivots are
    /// the unfrozen bits; every other bit is the XOR of the pivots whose
    /// rows cover it, all of which lie below it.
    pub fn from_generator_matrix(rows: &[BitVector]) -> Result<Self> {
        let Some(first) = rows.first() else {
            return Err(Error::InvalidSpec("generator matrix has no rows".into()));
        };
        let n = first.len();
        let m = crate::polar_transform::log2_exact(n)?;
        check_m(m)?;
        if let Some(r) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::LengthMismatch {
                expected: n,
                actual: r.len(),
            });
        }
        let mut reduced: Vec<BitVector> =
            rows.iter().map(|r| encode(r, m)).collect::<Result<_>>()?;
        let mut pivots: Vec<usize> = Vec::new();
        let mut rank = 0;
        for col in 0..n {
            let Some(p) = (rank..reduced.len()).find(|&r| reduced[r].get(col)) else {
                continue;
            };
            reduced.swap(rank, p);
            let pivot_row = reduced[rank].clone();
            for (r, row) in reduced.iter_mut().enumerate() {
                if r != rank && row.get(col) {
                    row.xor_assign(&pivot_row);
                }
            }
            pivots.push(col);
            rank += 1;
        }
        if rank < rows.len() {
            return Err(Error::RankDeficient {
                rank,
                rows: rows.len(),
            });
        }
        let mut constraints = Vec::new();
        for i in (0..n).filter(|i| !pivots.contains(i)) {
            let support: Vec<usize> = pivots
                .iter()
                .zip(&reduced)
                .filter(|(_, row)| row.get(i))
                .map(|(&p, _)| p)
                .collect();
            constraints.push(FreezeConstraint::new(i, &support, false)?);
        }
        Self::with_constraints(m, &pivots, constraints)
    }

    /// Polarization-adjusted convolutional code: `u = v · T` with `T` the
    /// upper-triangular Toeplitz matrix of `taps` and `v` supported on
    /// `profile`.
    ///
    /// Since `taps[0] = 1`, `v_k = u_k ⊕ ⊕_{j ≥ 1} taps[j] v_{k-j}` for every
    /// `k`, and each frozen position becomes a constraint on earlier `u`'s.
    pub fn pac(m: u32, profile: &[usize], taps: &BitVector) -> Result<Self> {
        let n = check_m(m)?;
        if taps.is_empty() || !taps.get(0) {
            return Err(Error::InvalidSpec(
                "convolution taps must start with 1".into(),
            ));
        }
        let in_profile = {
            let mut v = vec![false; n];
            for &i in profile {
                check_index(i, n)?;
                v[i] = true;
            }
            v
        };
        // v_k as a set of u-indices
        let mut v_expr: Vec<BitVector> = Vec::with_capacity(n);
        let mut constraints = Vec::new();
        for k in 0..n {
            let mut delayed = BitVector::zeros(n);
            for j in (1..taps.len().min(k + 1)).filter(|&j| taps.get(j)) {
                delayed.xor_assign(&v_expr[k - j]);
            }
            if !in_profile[k] {
                let support: Vec<usize> = (0..k).filter(|&j| delayed.get(j)).collect();
                constraints.push(FreezeConstraint::new(k, &support, false)?);
            }
            delayed.flip(k);
            v_expr.push(delayed);
        }
        let unfrozen: Vec<usize> = (0..n).filter(|&i| in_profile[i]).collect();
        Ok(Self::with_constraints(m, &unfrozen, constraints)?
            .with_label(format!("PAC ({n},{})", unfrozen.len())))
    }

    /// The dual code of a plain spec: unfrozen set `{n − 1 − i : i frozen}`.
    ///
    /// In general this is the dual with its coordinates reversed, which has
    /// the same weight distribution. It is the dual itself whenever the
    /// unfrozen monomials are closed under taking divisors, in particular
    /// for decreasing sets.
    pub fn dual(&self) -> Result<Self> {
        if !self.is_plain() {
            return Err(Error::NotPlain);
        }
        let n = self.n();
        let unfrozen: Vec<usize> = self.frozen_indices().iter().map(|&i| n - 1 - i).collect();
        let mut dual = Self::from_unfrozen_set(self.m, &unfrozen)?;
        dual.label = self.label.as_ref().map(|l| format!("dual of {l}"));
        Ok(dual)
    }

    /// Freezes a currently unfrozen bit to a constant.
    pub fn freeze(&self, index: usize, constant: bool) -> Result<Self> {
        check_index(index, self.n())?;
        if self.status[index] != BitStatus::Unfrozen {
            return Err(Error::InvalidSpec(format!("u_{index} is already frozen")));
        }
        let mut out = self.clone();
        out.status[index] = BitStatus::Frozen(FreezeConstraint::fixed(index, constant));
        Ok(out)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn n(&self) -> usize {
        self.status.len()
    }

    /// Dimension, the number of unfrozen bits.
    pub fn k(&self) -> usize {
        self.status
            .iter()
            .filter(|s| **s == BitStatus::Unfrozen)
            .count()
    }

    pub fn status(&self, i: usize) -> &BitStatus {
        &self.status[i]
    }

    pub fn is_frozen(&self, i: usize) -> bool {
        matches!(self.status[i], BitStatus::Frozen(_))
    }

    pub fn unfrozen_indices(&self) -> Vec<usize> {
        (0..self.n()).filter(|&i| !self.is_frozen(i)).collect()
    }

    pub fn frozen_indices(&self) -> Vec<usize> {
        (0..self.n()).filter(|&i| self.is_frozen(i)).collect()
    }

    pub fn constraints(&self) -> impl Iterator<Item = &FreezeConstraint> {
        self.status.iter().filter_map(|s| match s {
            BitStatus::Frozen(c) => Some(c),
            BitStatus::Unfrozen => None,
        })
    }

    /// Every frozen bit is fixed to zero.
    pub fn is_plain(&self) -> bool {
        self.constraints().all(FreezeConstraint::is_plain)
    }

    /// Every frozen bit is a constant (no support), possibly 1.
    pub fn has_constant_freezes(&self) -> bool {
        self.constraints().all(|c| c.support.is_empty())
    }

    pub fn unfrozen_monomials(&self) -> Vec<Monomial> {
        self.unfrozen_indices()
            .into_iter()
            .map(|i| index_to_monomial(i, self.m).expect("index in range"))
            .collect()
    }

    pub fn profile(&self) -> Profile {
        let last_frozen = (0..self.n()).rev().find(|&i| self.is_frozen(i));
        let s = last_frozen.unwrap_or(0);
        let (red, blue): (Vec<usize>, Vec<usize>) = self
            .unfrozen_indices()
            .into_iter()
            .partition(|&i| last_frozen.is_some() && i < s);
        Profile {
            last_frozen,
            gamma: red.len(),
            red,
            blue,
        }
    }

    /// Fills `u` given the values of the unfrozen bits in increasing index
    /// order; frozen bits are resolved causally from their constraints.
    pub fn information_vector(&self, free: impl IntoIterator<Item = bool>) -> BitVector {
        let mut free = free.into_iter();
        let mut u = BitVector::zeros(self.n());
        for (i, s) in self.status.iter().enumerate() {
            let bit = match s {
                BitStatus::Unfrozen => free.next().expect("one value per unfrozen bit"),
                BitStatus::Frozen(c) => c.evaluate(&u),
            };
            if bit {
                u.set(i, true);
            }
        }
        u
    }

    /// Parses the JSON code-spec schema.
    pub fn from_json_str(s: &str) -> Result<Self> {
        let value: Value =
            serde_json::from_str(s).map_err(|e| Error::MalformedJson(e.to_string()))?;
        Self::from_json(value)
    }

    pub fn from_json(value: Value) -> Result<Self> {
        let malformed = |e: serde_json::Error| Error::MalformedJson(e.to_string());
        let spec = if value.get("construction").is_some() {
            let doc: ConstructionDoc = serde_json::from_value(value).map_err(malformed)?;
            match doc.construction {
                Construction::Rm { r, m } => Self::from_rm(r, m)?,
                Construction::Bec { m, k, erasure } => Self::from_bhattacharyya_bec(m, k, erasure)?,
                Construction::Pac { m, profile, taps } => {
                    Self::pac(m, &profile, &BitVector::from_bits(&taps))?
                }
                Construction::Generator { matrix } => {
                    let rows: Vec<BitVector> =
                        matrix.iter().map(|r| BitVector::from_bits(r)).collect();
                    Self::from_generator_matrix(&rows)?
                }
            }
            .with_optional_label(doc.label)
        } else {
            let doc: ExplicitDoc = serde_json::from_value(value).map_err(malformed)?;
            let spec = match (doc.frozen, doc.unfrozen, doc.constraints) {
                (Some(frozen), None, None) => Self::from_frozen_set(doc.m, &frozen)?,
                (None, Some(unfrozen), None) => Self::from_unfrozen_set(doc.m, &unfrozen)?,
                (None, Some(unfrozen), Some(cs)) => {
                    let constraints = cs
                        .iter()
                        .map(|c| FreezeConstraint::new(c.target, &c.support, c.constant != 0))
                        .collect::<Result<Vec<_>>>()?;
                    if cs.iter().any(|c| c.constant > 1) {
                        return Err(Error::InvalidSpec("constraint constant must be 0 or 1".into()));
                    }
                    Self::with_constraints(doc.m, &unfrozen, constraints)?
                }
                _ => {
                    return Err(Error::InvalidSpec(
                        "give exactly one of \"frozen\" or \"unfrozen\" (constraints need \"unfrozen\")"
                            .into(),
                    ))
                }
            };
            spec.with_optional_label(doc.label)
        };
        Ok(spec)
    }

    fn with_optional_label(self, label: Option<String>) -> Self {
        match label {
            Some(l) => self.with_label(l),
            None => self,
        }
    }

    /// Serializes to the explicit JSON schema: `{"m", "frozen"}` for plain
    /// specs, `{"m", "unfrozen", "constraints"}` otherwise.
    pub fn to_json(&self) -> Value {
        let mut v = if self.is_plain() {
            json!({ "m": self.m, "frozen": self.frozen_indices() })
        } else {
            let constraints: Vec<Value> = self
                .constraints()
                .filter(|c| !c.is_plain())
                .map(|c| {
                    json!({ "target": c.target, "support": c.support, "constant": c.constant as u8 })
                })
                .collect();
            json!({ "m": self.m, "unfrozen": self.unfrozen_indices(), "constraints": constraints })
        };
        if let Some(l) = &self.label {
            v["label"] = json!(l);
        }
        v
    }
}

/// The `k` indices with the smallest parameter, ties going to the larger
/// index, in increasing index order.
fn most_reliable(z: &[f64], k: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..z.len()).collect();
    order.sort_by(|&a, &b| z[a].total_cmp(&z[b]).then(b.cmp(&a)));
    let mut chosen = order[..k].to_vec();
    chosen.sort_unstable();
    chosen
}

/// `z` for every bit channel, processing index bits from the most
/// significant one.
fn bec_bhattacharyya(m: u32, erasure: f64) -> Vec<f64> {
    let n = 1usize << m;
    (0..n)
        .map(|i| {
            (0..m).rev().fold(erasure, |z, b| {
                if (i >> b) & 1 == 1 {
                    z * z
                } else {
                    2.0 * z - z * z
                }
            })
        })
        .collect()
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ExplicitDoc {
    m: u32,
    frozen: Option<Vec<usize>>,
    unfrozen: Option<Vec<usize>>,
    constraints: Option<Vec<ConstraintDoc>>,
    label: Option<String>,
}

#[derive(Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct ConstraintDoc {
    target: usize,
    #[serde(default)]
    support: Vec<usize>,
    #[serde(default)]
    constant: u8,
}

#[derive(Deserialize)]
struct ConstructionDoc {
    #[serde(flatten)]
    construction: Construction,
    label: Option<String>,
}

#[derive(Deserialize)]
#[serde(tag = "construction", rename_all = "lowercase")]
enum Construction {
    Rm {
        r: u32,
        m: u32,
    },
    Bec {
        m: u32,
        k: usize,
        erasure: f64,
    },
    Pac {
        m: u32,
        profile: Vec<usize>,
        taps: Vec<u8>,
    },
    Generator {
        matrix: Vec<Vec<u8>>,
    },
}
