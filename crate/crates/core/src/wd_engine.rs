//! Weight distributions of whole codes.
//!
//! A code with last frozen bit `u_s` is the disjoint union of the polar
//! cosets obtained by fixing the red bits (unfrozen bits below `s`) in all
//! `2^γ` ways, so its enumerator is the sum of `2^γ` coset enumerators.
//! For decreasing monomial codes the lower-triangular affine group maps
//! whole families of these cosets onto each other, and one representative
//! per family suffices.

use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;

use crate::code_model::{BitStatus, CodeSpec};
use crate::coset_wef::{component, Cached, CosetCache, Width, DEFAULT_CACHE_CAPACITY};
use crate::error::{Error, Result};
use crate::monomial_algebra::{decreasing_violation, single_shift_le};
use crate::polar_transform::{index_to_monomial, BitVector};
use crate::wef_poly::{Coeff, DensePoly, WeightEnumerator};

/// Default limit on the number of coset evaluations, `2^28`.
pub const DEFAULT_BUDGET_BITS: u32 = 28;

/// Largest mixing factor the enumerator will attempt regardless of budget.
const MAX_ENUMERABLE_BITS: usize = 62;

/// Called with `(done, total)` as cosets complete; `done` never decreases.
pub type ProgressFn = Arc<dyn Fn(u64, u64) + Send + Sync>;

#[derive(Clone)]
pub struct EngineConfig {
    /// Maximum number of coset evaluations a single request may need.
    pub budget: BigUint,
    /// Worker threads; 0 uses every available core.
    pub threads: usize,
    /// Capacity of the sub-coset memo; `None` disables it.
    pub cache_capacity: Option<usize>,
    pub progress: Option<ProgressFn>,
}

impl Default for EngineConfig {
    fn default() -> Self {
        Self {
            budget: BigUint::one() << DEFAULT_BUDGET_BITS,
            threads: 0,
            cache_capacity: Some(DEFAULT_CACHE_CAPACITY),
            progress: None,
        }
    }
}

impl fmt::Debug for EngineConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("EngineConfig")
            .field("budget", &self.budget)
            .field("threads", &self.threads)
            .field("cache_capacity", &self.cache_capacity)
            .field("progress", &self.progress.is_some())
            .finish()
    }
}

/// Predicted number of coset evaluations for each route. `None` marks a
/// route that does not apply.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CostEstimate {
    pub direct_cosets: BigUint,
    pub lta_cosets: Option<BigUint>,
    pub dual_direct_cosets: Option<BigUint>,
    pub dual_lta_cosets: Option<BigUint>,
}

impl CostEstimate {
    pub fn get(&self, route: Route) -> Option<&BigUint> {
        match route {
            Route::Direct => Some(&self.direct_cosets),
            Route::Lta => self.lta_cosets.as_ref(),
            Route::DualDirect => self.dual_direct_cosets.as_ref(),
            Route::DualLta => self.dual_lta_cosets.as_ref(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Route {
    Direct,
    Lta,
    DualDirect,
    DualLta,
}

impl Route {
    pub const ALL: [Route; 4] = [Route::Direct, Route::Lta, Route::DualDirect, Route::DualLta];

    pub fn as_str(self) -> &'static str {
        match self {
            Route::Direct => "direct",
            Route::Lta => "lta",
            Route::DualDirect => "dual_direct",
            Route::DualLta => "dual_lta",
        }
    }

    pub fn is_dual(self) -> bool {
        matches!(self, Route::DualDirect | Route::DualLta)
    }

    pub fn uses_lta(self) -> bool {
        matches!(self, Route::Lta | Route::DualLta)
    }
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    #[default]
    Auto,
    Direct,
    Lta,
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(Strategy::Auto),
            "direct" => Ok(Strategy::Direct),
            "lta" => Ok(Strategy::Lta),
            _ => Err(Error::InvalidSpec(format!("unknown strategy {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub route: Route,
    pub predicted_cosets: BigUint,
    pub cosets_evaluated: BigUint,
    pub n: usize,
    pub k: usize,
}

/// Runs weight-distribution computations on a dedicated thread pool.
pub struct WdEngine {
    config: EngineConfig,
    pool: rayon::ThreadPool,
}

impl fmt::Debug for WdEngine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WdEngine")
            .field("config", &self.config)
            .finish()
    }
}

/// Shared state of one request: the memo and the coset counter.
struct Run<'a> {
    cache: Option<CosetCache>,
    done: Mutex<u64>,
    evaluated: AtomicU64,
    total: u64,
    progress: Option<&'a ProgressFn>,
}

impl Run<'_> {
    fn record(&self, count: u64) {
        self.evaluated.fetch_add(count, Ordering::Relaxed);
        if let Some(p) = self.progress {
            let mut done = self.done.lock().expect("progress lock");
            *done += count;
            p(*done, self.total);
        }
    }
}

impl WdEngine {
    pub fn new(config: EngineConfig) -> Result<Self> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.threads)
            .build()
            .map_err(|e| Error::InvalidSpec(format!("cannot start worker threads: {e}")))?;
        Ok(Self { config, pool })
    }

    pub fn config(&self) -> &EngineConfig {
        &self.config
    }

    fn run(&self, total: &BigUint) -> Run<'_> {
        Run {
            cache: self.config.cache_capacity.map(CosetCache::new),
            done: Mutex::new(0),
            evaluated: AtomicU64::new(0),
            total: total.to_u64().unwrap_or(u64::MAX),
            progress: self.config.progress.as_ref(),
        }
    }

    fn check_budget(&self, required: &BigUint) -> Result<()> {
        if *required > self.config.budget {
            return Err(Error::BudgetExceeded {
                required: required.clone(),
                budget: self.config.budget.clone(),
            });
        }
        Ok(())
    }

    /// Sum of the coset enumerators over all red-bit assignments.
    pub fn wef_direct(&self, spec: &CodeSpec) -> Result<WeightEnumerator> {
        let cost = direct_cost(spec);
        self.check_budget(&cost)?;
        let run = self.run(&cost);
        self.direct(spec, &run)
    }

    /// Same result as [`WdEngine::wef_direct`], evaluating one coset per
    /// orbit of the lower-triangular affine group. Requires a plain spec
    /// whose unfrozen monomials form a decreasing set.
    pub fn wef_lta(&self, spec: &CodeSpec) -> Result<WeightEnumerator> {
        let cost = lta_cost(spec)?;
        self.check_budget(&cost)?;
        let run = self.run(&cost);
        self.lta(spec, &run)
    }

    pub fn estimate_cost(&self, spec: &CodeSpec) -> CostEstimate {
        estimate_cost(spec)
    }

    /// Picks the cheapest admissible route allowed by `strategy` and
    /// `allow_dual`, ties going to the earlier of direct, lta, dual_direct,
    /// dual_lta.
    pub fn wef_auto(
        &self,
        spec: &CodeSpec,
        strategy: Strategy,
        allow_dual: bool,
    ) -> Result<(WeightEnumerator, Report)> {
        let estimate = estimate_cost(spec);
        let allowed = |r: Route| {
            let by_strategy = match strategy {
                Strategy::Auto => true,
                Strategy::Direct => !r.uses_lta(),
                Strategy::Lta => r.uses_lta(),
            };
            by_strategy && (allow_dual || !r.is_dual())
        };
        let mut best: Option<(Route, &BigUint)> = None;
        for route in Route::ALL.into_iter().filter(|&r| allowed(r)) {
            if let Some(c) = estimate.get(route) {
                if best.is_none_or(|(_, b)| c < b) {
                    best = Some((route, c));
                }
            }
        }
        let Some((route, predicted)) = best else {
            // Only the lta strategy can leave nothing admissible; report why.
            lta_cost(spec)?;
            return Err(Error::NotPlain);
        };
        let predicted = predicted.clone();
        self.check_budget(&predicted)?;
        let run = self.run(&predicted);
        let (n, k) = (spec.n(), spec.k());
        let wef = match route {
            Route::Direct => self.direct(spec, &run)?,
            Route::Lta => self.lta(spec, &run)?,
            Route::DualDirect | Route::DualLta => {
                let dual = spec.dual()?;
                let dual_wef = if route == Route::DualLta {
                    self.lta(&dual, &run)?
                } else {
                    self.direct(&dual, &run)?
                };
                dual_wef.macwilliams(n, n - k)?
            }
        };
        let report = Report {
            route,
            predicted_cosets: predicted,
            cosets_evaluated: BigUint::from(run.evaluated.load(Ordering::Relaxed)),
            n,
            k,
        };
        Ok((wef, report))
    }

    fn direct(&self, spec: &CodeSpec, run: &Run<'_>) -> Result<WeightEnumerator> {
        let n = spec.n();
        let profile = spec.profile();
        let Some(s) = profile.last_frozen else {
            run.record(1);
            return Ok(WeightEnumerator::binomial(n));
        };
        let gamma = profile.gamma;
        if gamma > MAX_ENUMERABLE_BITS {
            return Err(Error::BudgetExceeded {
                required: BigUint::one() << gamma,
                budget: self.config.budget.clone(),
            });
        }
        let job = DirectJob {
            spec,
            s,
            red: &profile.red,
            run,
        };
        let kernel = Width::for_bound_bits(n - 1 - s);
        let acc = Width::for_bound_bits(spec.k());
        let wef = self.pool.install(|| match (kernel, acc) {
            (Width::Word, Width::Word) => job.sum::<u64, u64>(),
            (Width::Word, Width::Wide) => job.sum::<u64, u128>(),
            (Width::Word, Width::Big) => job.sum::<u64, BigUint>(),
            (Width::Wide, Width::Wide) => job.sum::<u128, u128>(),
            (Width::Wide, Width::Big) => job.sum::<u128, BigUint>(),
            (Width::Big, _) => job.sum::<BigUint, BigUint>(),
            (Width::Wide, Width::Word) => unreachable!("coset larger than code"),
        });
        Ok(wef)
    }

    fn lta(&self, spec: &CodeSpec, run: &Run<'_>) -> Result<WeightEnumerator> {
        check_lta_admissible(spec)?;
        let mut current = spec.clone();
        let mut total = WeightEnumerator::zero();
        let m = spec.m();
        loop {
            let red = current.profile().red;
            let Some(&f) = red.first() else {
                total += &self.direct(&current, run)?;
                return Ok(total);
            };
            let fm = index_to_monomial(f, m)?;
            let orbit: Vec<usize> = red[1..]
                .iter()
                .copied()
                .filter(|&g| single_shift_le(&index_to_monomial(g, m).expect("in range"), &fm))
                .collect();
            let mut representative = current.freeze(f, true)?;
            for &g in &orbit {
                representative = representative.freeze(g, false)?;
            }
            total += &self.direct(&representative, run)?.shifted_left(orbit.len());
            current = current.freeze(f, false)?;
        }
    }
}

struct DirectJob<'a> {
    spec: &'a CodeSpec,
    s: usize,
    red: &'a [usize],
    run: &'a Run<'a>,
}

impl DirectJob<'_> {
    /// Fills `u_0 … u_s` for the red assignment `a`, whose most
    /// significant bit belongs to the first red index.
    fn head(&self, a: u64) -> (BitVector, bool) {
        let gamma = self.red.len();
        let mut u = BitVector::zeros(self.s + 1);
        let mut next_red = 0;
        for i in 0..=self.s {
            let bit = match self.spec.status(i) {
                BitStatus::Unfrozen => {
                    let b = (a >> (gamma - 1 - next_red)) & 1 == 1;
                    next_red += 1;
                    b
                }
                BitStatus::Frozen(c) => c.evaluate(&u),
            };
            if bit {
                u.set(i, true);
            }
        }
        let last = u.get(self.s);
        (u.prefix(self.s), last)
    }

    /// Exact sum over all `2^γ` cosets, split into contiguous ranges.
    fn sum<K, A>(&self) -> WeightEnumerator
    where
        K: Cached,
        A: Coeff + From<K>,
    {
        let n = self.spec.n();
        let total = 1u64 << self.red.len();
        let chunks = (rayon::current_num_threads() as u64 * 16).clamp(1, total);
        let per_chunk = total.div_ceil(chunks);
        let cache = self.run.cache.as_ref();
        let acc = (0..chunks)
            .into_par_iter()
            .map(|c| {
                let lo = c * per_chunk;
                let hi = (lo + per_chunk).min(total);
                let mut acc: Vec<A> = vec![A::zero(); n + 1];
                for a in lo..hi {
                    let (prefix, last) = self.head(a);
                    let poly: DensePoly<K> = component(n, &prefix, last, cache);
                    for (slot, c) in acc.iter_mut().zip(poly.coeffs) {
                        if !c.is_zero() {
                            slot.add_assign_ref(&A::from(c));
                        }
                    }
                }
                if hi > lo {
                    self.run.record(hi - lo);
                }
                acc
            })
            .reduce(
                || vec![A::zero(); n + 1],
                |mut x, y| {
                    for (a, b) in x.iter_mut().zip(&y) {
                        a.add_assign_ref(b);
                    }
                    x
                },
            );
        WeightEnumerator::from_coeffs(acc.iter().map(Coeff::to_biguint).collect())
    }
}

fn check_lta_admissible(spec: &CodeSpec) -> Result<()> {
    if !spec.is_plain() {
        return Err(Error::NotPlain);
    }
    if let Some((lower, upper)) = decreasing_violation(&spec.unfrozen_monomials()) {
        return Err(Error::NotDecreasing {
            lower: lower.to_string(),
            upper: upper.to_string(),
        });
    }
    Ok(())
}

/// `2^γ`; a code without frozen bits counts as one evaluation.
pub fn direct_cost(spec: &CodeSpec) -> BigUint {
    BigUint::one() << spec.profile().gamma
}

/// `1 + Σ_f 2^{λ_f}` over the red monomials `f`, where `λ_f` counts the
/// later red monomials not below `f` in the single-shift order. The `1` is
/// the final coset with every red bit frozen.
pub fn lta_cost(spec: &CodeSpec) -> Result<BigUint> {
    check_lta_admissible(spec)?;
    let m = spec.m();
    let red: Vec<_> = spec
        .profile()
        .red
        .iter()
        .map(|&i| index_to_monomial(i, m).expect("in range"))
        .collect();
    let mut total = BigUint::one();
    for (j, f) in red.iter().enumerate() {
        let lambda = red[j + 1..]
            .iter()
            .filter(|g| !single_shift_le(g, f))
            .count();
        total += BigUint::one() << lambda;
    }
    Ok(total)
}

/// Predicted coset counts for every route, without evaluating any coset.
pub fn estimate_cost(spec: &CodeSpec) -> CostEstimate {
    let dual = spec.dual().ok();
    CostEstimate {
        direct_cosets: direct_cost(spec),
        lta_cosets: lta_cost(spec).ok(),
        dual_direct_cosets: dual.as_ref().map(direct_cost),
        dual_lta_cosets: dual.as_ref().and_then(|d| lta_cost(d).ok()),
    }
}

/// [`WdEngine::wef_direct`] with the default configuration.
pub fn wef_direct(spec: &CodeSpec) -> Result<WeightEnumerator> {
    WdEngine::new(EngineConfig::default())?.wef_direct(spec)
}

/// [`WdEngine::wef_lta`] with the default configuration.
pub fn wef_lta(spec: &CodeSpec) -> Result<WeightEnumerator> {
    WdEngine::new(EngineConfig::default())?.wef_lta(spec)
}

/// [`WdEngine::wef_auto`] with the default configuration.
pub fn wef_auto(
    spec: &CodeSpec,
    strategy: Strategy,
    allow_dual: bool,
) -> Result<(WeightEnumerator, Report)> {
    WdEngine::new(EngineConfig::default())?.wef_auto(spec, strategy, allow_dual)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::brute_force_wef;

    fn hamming16() -> CodeSpec {
        CodeSpec::from_frozen_set(4, &[0, 1, 2, 4, 8]).unwrap()
    }

    fn hamming16_wef() -> WeightEnumerator {
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

    fn engine(threads: usize, cache: bool) -> WdEngine {
        WdEngine::new(EngineConfig {
            threads,
            cache_capacity: cache.then_some(DEFAULT_CACHE_CAPACITY),
            ..EngineConfig::default()
        })
        .unwrap()
    }

    #[test]
    fn rate_zero_and_rate_one() {
        let zero = CodeSpec::from_unfrozen_set(2, &[]).unwrap();
        assert_eq!(wef_direct(&zero).unwrap(), WeightEnumerator::one());
        let full = CodeSpec::from_frozen_set(3, &[]).unwrap();
        assert_eq!(wef_direct(&full).unwrap(), WeightEnumerator::binomial(8));
    }

    #[test]
    fn extended_hamming_all_routes() {
        let spec = hamming16();
        assert_eq!(wef_direct(&spec).unwrap(), hamming16_wef());
        assert_eq!(wef_lta(&spec).unwrap(), hamming16_wef());
        for strategy in [Strategy::Auto, Strategy::Direct, Strategy::Lta] {
            let (wef, _) = wef_auto(&spec, strategy, true).unwrap();
            assert_eq!(wef, hamming16_wef());
        }
    }

    #[test]
    fn hamming_costs() {
        let est = estimate_cost(&hamming16());
        assert_eq!(est.direct_cosets, BigUint::from(16u32));
        assert_eq!(est.lta_cosets, Some(BigUint::from(5u32)));
        assert_eq!(est.dual_direct_cosets, Some(BigUint::from(4u32)));
    }

    #[test]
    fn lta_counts_match_prediction() {
        let spec = hamming16();
        let (_, report) = engine(1, true)
            .wef_auto(&spec, Strategy::Lta, false)
            .unwrap();
        assert_eq!(report.route, Route::Lta);
        assert_eq!(report.cosets_evaluated, BigUint::from(5u32));
        assert_eq!(report.cosets_evaluated, report.predicted_cosets);
    }

    #[test]
    fn rm_1_3_via_lta() {
        let spec = CodeSpec::from_rm(1, 3).unwrap();
        let expected = WeightEnumerator::from_terms([(0, 1u32), (4, 14), (8, 1)]);
        assert_eq!(wef_lta(&spec).unwrap(), expected);
    }

    #[test]
    fn rm_1_4_auto() {
        let spec = CodeSpec::from_rm(1, 4).unwrap();
        let expected = WeightEnumerator::from_terms([(0, 1u32), (8, 30), (16, 1)]);
        assert_eq!(wef_auto(&spec, Strategy::Auto, true).unwrap().0, expected);
    }

    #[test]
    fn dual_route_matches_direct() {
        let spec = hamming16();
        let (wef, report) = wef_auto(&spec, Strategy::Direct, true).unwrap();
        assert_eq!(report.route, Route::DualDirect);
        assert_eq!(wef, wef_direct(&spec).unwrap());
    }

    #[test]
    fn lta_rejects_unsuitable_specs() {
        let not_decreasing = CodeSpec::from_unfrozen_set(2, &[1]).unwrap();
        assert!(matches!(
            wef_lta(&not_decreasing),
            Err(Error::NotDecreasing { .. })
        ));
        let pac = CodeSpec::pac(3, &[3, 5, 6, 7], &"1011".parse().unwrap()).unwrap();
        assert!(matches!(wef_lta(&pac), Err(Error::NotPlain)));
        assert!(matches!(
            wef_auto(&pac, Strategy::Lta, true),
            Err(Error::NotPlain)
        ));
    }

    #[test]
    fn budget_is_enforced() {
        let spec = CodeSpec::from_rm(2, 5).unwrap();
        let small = WdEngine::new(EngineConfig {
            budget: BigUint::from(2u32),
            ..Default::default()
        })
        .unwrap();
        assert!(matches!(
            small.wef_direct(&spec),
            Err(Error::BudgetExceeded { .. })
        ));
        assert!(matches!(
            small.wef_auto(&spec, Strategy::Auto, true),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn deterministic_across_threads_and_cache() {
        let spec = CodeSpec::from_rm(2, 5).unwrap();
        let reference = engine(1, false).wef_direct(&spec).unwrap();
        for threads in [1, 2, 8] {
            for cache in [false, true] {
                let e = engine(threads, cache);
                assert_eq!(e.wef_direct(&spec).unwrap(), reference);
                assert_eq!(e.wef_lta(&spec).unwrap(), reference);
            }
        }
    }

    #[test]
    fn dynamic_spec_matches_oracle() {
        let pac = CodeSpec::pac(4, &[7, 11, 12, 13, 14, 15], &"1101".parse().unwrap()).unwrap();
        assert_eq!(wef_direct(&pac).unwrap(), brute_force_wef(&pac).unwrap());
    }

    #[test]
    fn progress_is_monotone_and_complete() {
        let seen = Arc::new(Mutex::new(Vec::new()));
        let sink = Arc::clone(&seen);
        let e = WdEngine::new(EngineConfig {
            threads: 2,
            progress: Some(Arc::new(move |d, t| sink.lock().unwrap().push((d, t)))),
            ..Default::default()
        })
        .unwrap();
        e.wef_direct(&CodeSpec::from_rm(2, 5).unwrap()).unwrap();
        let seen = seen.lock().unwrap();
        assert!(seen.windows(2).all(|w| w[0].0 <= w[1].0));
        let &(done, total) = seen.last().unwrap();
        assert_eq!(done, total);
    }
}
