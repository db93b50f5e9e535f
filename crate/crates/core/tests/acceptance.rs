//! Acceptance suite. Prints one `PASS`/`FAIL` line per criterion and exits
//! non-zero if any criterion fails.

mod common;

use std::panic::{self, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_traits::One;
use polar_wef::coset_wef::calc_a;
use polar_wef::monomial_algebra::{
    chain_decompose, compare, max_mixing_factor, max_mixing_factor_rate_half, precedes,
    single_shift_le, Monomial, MonomialOrder,
};
use polar_wef::oracle::{brute_force_coset_wef, brute_force_wef};
use polar_wef::wd_engine::{estimate_cost, EngineConfig, Route, Strategy, WdEngine};
use polar_wef::{BitVector, CodeSpec, PolarCosetSpec, WeightEnumerator};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;

/// Outcome of a criterion: a short detail string, or a failure message.
type Check = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn engine(threads: usize, cache: bool) -> WdEngine {
    WdEngine::new(EngineConfig {
        threads,
        cache_capacity: cache.then_some(polar_wef::coset_wef::DEFAULT_CACHE_CAPACITY),
        ..EngineConfig::default()
    })
    .expect("thread pool")
}

fn table1() -> Check {
    let expected = [0, 0, 1, 4, 11, 27, 68, 156, 339, 721];
    let got: Vec<usize> = (1..=10).map(|m| max_mixing_factor(m).0).collect();
    ensure!(got == expected, "got {got:?}");
    Ok(format!("{got:?}"))
}

fn table2() -> Check {
    let expected = [0, 0, 1, 2, 9, 18, 49, 98, 225, 450];
    let got: Vec<usize> = (1..=10).map(max_mixing_factor_rate_half).collect();
    ensure!(got == expected, "got {got:?}");
    Ok(format!("{got:?}"))
}

fn table3() -> Check {
    let spec = table3_spec();
    let (wef, report) = engine(0, true)
        .wef_auto(&spec, Strategy::Lta, false)
        .map_err(|e| e.to_string())?;
    let expected = table3_wef();
    for w in 0..=128 {
        ensure!(
            wef.coefficient(w) == expected.coefficient(w),
            "A_{w} = {}, expected {}",
            wef.coefficient(w),
            expected.coefficient(w)
        );
    }
    ensure!(
        wef.eval_at_one() == BigUint::one() << 64,
        "total {}",
        wef.eval_at_one()
    );
    ensure!(wef.is_palindromic(128), "not palindromic");
    ensure!(report.route == Route::Lta, "route {}", report.route);
    ensure!(
        report.cosets_evaluated == BigUint::from(60752896u64),
        "{} cosets evaluated",
        report.cosets_evaluated
    );
    Ok(format!(
        "A_64 = {}, {} cosets",
        wef.coefficient(64),
        report.cosets_evaluated
    ))
}

fn oracle_suite() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0004);
    let e = engine(0, true);
    let (mut plain, mut dynamic, mut decreasing) = (0, 0, 0);
    for round in 0..64 {
        for m in 2..=5u32 {
            let spec = match round % 4 {
                0 => random_plain(&mut rng, m, 16),
                1 => random_dynamic(&mut rng, m, 16),
                2 => random_decreasing(&mut rng, m, 16),
                _ => {
                    let k = rng.gen_range(1..=(1usize << m).min(16));
                    CodeSpec::from_generator_matrix(&random_generator(&mut rng, m, k))
                        .map_err(|e| e.to_string())?
                }
            };
            let oracle = brute_force_wef(&spec).map_err(|e| e.to_string())?;
            let direct = e.wef_direct(&spec).map_err(|e| e.to_string())?;
            ensure!(
                direct == oracle,
                "direct {direct} vs oracle {oracle} for {:?}",
                spec.to_json()
            );
            if spec.is_plain() {
                plain += 1;
            } else {
                dynamic += 1;
            }
            if spec.is_plain()
                && polar_wef::monomial_algebra::is_decreasing(&spec.unfrozen_monomials())
            {
                let lta = e.wef_lta(&spec).map_err(|e| e.to_string())?;
                ensure!(
                    lta == oracle,
                    "lta {lta} vs oracle {oracle} for {:?}",
                    spec.to_json()
                );
                decreasing += 1;
            }
        }
    }
    let total = plain + dynamic;
    ensure!(total >= 200, "only {total} specs");
    Ok(format!(
        "{total} specs ({plain} plain, {dynamic} dynamic, {decreasing} via lta)"
    ))
}

fn coset_suite() -> Check {
    let mut checked = 0;
    let mut check = |n: usize, prefix: BitVector| -> Result<(), String> {
        let (a0, a1) = calc_a(n, &prefix).map_err(|e| e.to_string())?;
        for (bit, a) in [(false, a0), (true, a1)] {
            let coset = PolarCosetSpec::new(n, prefix.clone(), bit).map_err(|e| e.to_string())?;
            let oracle = brute_force_coset_wef(&coset).map_err(|e| e.to_string())?;
            ensure!(
                a == oracle,
                "n = {n}, prefix {prefix}, bit {bit}: {a} vs {oracle}"
            );
            checked += 1;
        }
        Ok(())
    };
    for n in [8usize, 16] {
        for len in 0..=6 {
            for v in 0..1u64 << len {
                check(n, BitVector::from_u64(v, len))?;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0005);
    for _ in 0..100 {
        let len = rng.gen_range(7..32);
        let prefix: BitVector = (0..len).map(|_| rng.gen_bool(0.5)).collect();
        check(32, prefix)?;
    }
    Ok(format!("{checked} cosets"))
}

fn hamming_routes() -> Check {
    let spec = hamming16();
    let oracle = brute_force_wef(&spec).map_err(|e| e.to_string())?;
    ensure!(oracle == hamming16_wef(), "oracle gave {oracle}");
    let e = engine(0, true);
    let direct = e.wef_direct(&spec).map_err(|e| e.to_string())?;
    let lta = e.wef_lta(&spec).map_err(|e| e.to_string())?;
    let dual = spec.dual().map_err(|e| e.to_string())?;
    let via_dual = e
        .wef_direct(&dual)
        .and_then(|d| d.macwilliams(16, 5))
        .map_err(|e| e.to_string())?;
    for (name, w) in [("direct", &direct), ("lta", &lta), ("dual", &via_dual)] {
        ensure!(*w == oracle, "{name} route gave {w}");
    }
    Ok(format!("{oracle}"))
}

fn rm_2_5() -> Check {
    let spec = CodeSpec::from_rm(2, 5).map_err(|e| e.to_string())?;
    let (wef, _) = engine(0, true)
        .wef_auto(&spec, Strategy::Auto, false)
        .map_err(|e| e.to_string())?;
    let dual = wef.macwilliams(32, 16).map_err(|e| e.to_string())?;
    ensure!(
        dual == wef,
        "MacWilliams transform {dual} differs from {wef}"
    );
    let oracle = brute_force_wef(&spec).map_err(|e| e.to_string())?;
    ensure!(oracle == wef, "oracle {oracle} differs from {wef}");
    Ok(format!("{wef}"))
}

fn orbit_equality() -> Check {
    // f = x2x3 at index 3, S = {x1x3, x0x3, x3} at indices 5, 6, 7.
    let base = hamming16().freeze(3, true).map_err(|e| e.to_string())?;
    let mut first: Option<WeightEnumerator> = None;
    for pattern in 0..8u32 {
        let mut subset = base.clone();
        for (j, idx) in [5usize, 6, 7].into_iter().enumerate() {
            subset = subset
                .freeze(idx, (pattern >> j) & 1 == 1)
                .map_err(|e| e.to_string())?;
        }
        ensure!(subset.k() == 7, "subset has {} free bits", subset.k());
        let wef = brute_force_wef(&subset).map_err(|e| e.to_string())?;
        match &first {
            None => first = Some(wef),
            Some(f) => ensure!(*f == wef, "subset {pattern:03b}: {wef} vs {f}"),
        }
    }
    Ok(format!("{}", first.expect("eight subsets")))
}

fn cost_model() -> Check {
    let t3 = estimate_cost(&table3_spec());
    ensure!(
        t3.direct_cosets == BigUint::one() << 37,
        "direct {}",
        t3.direct_cosets
    );
    ensure!(
        t3.lta_cosets == Some(BigUint::from(60752896u64)),
        "lta {:?}",
        t3.lta_cosets
    );
    let rm = estimate_cost(&CodeSpec::from_rm(3, 7).map_err(|e| e.to_string())?);
    ensure!(
        rm.lta_cosets == Some(BigUint::from(49761365064u64)),
        "RM(3,7) lta {:?}",
        rm.lta_cosets
    );
    Ok("2^37, 60752896, 49761365064".into())
}

/// Definition-level `f ≼ g`: some divisor of `g` with the degree of `f`
/// dominates `f` index by index.
fn precedes_by_divisors(f: &Monomial, g: &Monomial) -> bool {
    let fi = f.vars();
    let gj = g.vars();
    if fi.len() > gj.len() {
        return false;
    }
    let subsets = (0u32..1 << gj.len()).filter(|s| s.count_ones() as usize == fi.len());
    subsets.into_iter().any(|s| {
        let d: Vec<usize> = (0..gj.len())
            .filter(|&b| (s >> b) & 1 == 1)
            .map(|b| gj[b])
            .collect();
        fi.iter().zip(&d).all(|(i, j)| i <= j)
    })
}

fn partial_order() -> Check {
    let mut pairs = 0;
    for m in 1..=4u32 {
        let all = monomials(m);
        for f in &all {
            for g in &all {
                pairs += 1;
                let fg = precedes(f, g);
                ensure!(
                    fg == precedes_by_divisors(f, g),
                    "compare({f}, {g}) disagrees with the definition"
                );
                let expected = match (fg, precedes(g, f)) {
                    (true, true) => MonomialOrder::Equal,
                    (true, false) => MonomialOrder::FPrecedesG,
                    (false, true) => MonomialOrder::GPrecedesF,
                    (false, false) => MonomialOrder::Incomparable,
                };
                ensure!(compare(f, g) == expected, "compare({f}, {g}) inconsistent");
                ensure!(
                    !(fg && precedes(g, f)) || f == g,
                    "antisymmetry fails for {f}, {g}"
                );
                if fg && f != g {
                    ensure!(
                        f.index() > g.index(),
                        "{f} ≼ {g} but index {} ≤ {}",
                        f.index(),
                        g.index()
                    );
                }
                if single_shift_le(f, g) {
                    ensure!(fg, "{f} ≼_s {g} but not {f} ≼ {g}");
                }
                match chain_decompose(f, g) {
                    Some(chain) => {
                        ensure!(fg, "chain for unrelated {f}, {g}");
                        ensure!(
                            chain.first() == Some(f) && chain.last() == Some(g),
                            "chain endpoints"
                        );
                        ensure!(
                            chain.windows(2).all(|w| single_shift_le(&w[0], &w[1])),
                            "broken chain {chain:?}"
                        );
                    }
                    None => ensure!(!fg, "no chain for {f} ≼ {g}"),
                }
                for h in &all {
                    if fg && precedes(g, h) {
                        ensure!(precedes(f, h), "transitivity fails for {f}, {g}, {h}");
                    }
                }
            }
        }
    }
    Ok(format!("{pairs} pairs"))
}

fn determinism() -> Check {
    let spec = hamming16();
    let render = |e: &WdEngine| -> Result<String, String> {
        let direct = e.wef_direct(&spec).map_err(|e| e.to_string())?;
        let lta = e.wef_lta(&spec).map_err(|e| e.to_string())?;
        let (dual, _) = e
            .wef_auto(&spec, Strategy::Direct, true)
            .map_err(|e| e.to_string())?;
        Ok(format!("{direct:?}|{lta:?}|{dual:?}"))
    };
    let reference = render(&engine(1, false))?;
    let mut runs = 0;
    for threads in [1, 2, 8] {
        for cache in [false, true] {
            let out = render(&engine(threads, cache))?;
            ensure!(out == reference, "threads {threads}, cache {cache}: {out}");
            runs += 1;
        }
    }
    Ok(format!("{runs} configurations identical"))
}

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Option<Duration>,
    run: fn() -> Check,
}

fn main() {
    let criteria = [
        Criterion {
            id: 1,
            name: "table 1 maximum mixing factors",
            limit: Some(Duration::from_secs(60)),
            run: table1,
        },
        Criterion {
            id: 2,
            name: "table 2 rate-1/2 bounds",
            limit: Some(Duration::from_secs(60)),
            run: table2,
        },
        Criterion {
            id: 3,
            name: "table 3 (128,64) distribution",
            limit: None,
            run: table3,
        },
        Criterion {
            id: 4,
            name: "oracle equivalence suite",
            limit: Some(Duration::from_secs(300)),
            run: oracle_suite,
        },
        Criterion {
            id: 5,
            name: "coset oracle suite",
            limit: Some(Duration::from_secs(120)),
            run: coset_suite,
        },
        Criterion {
            id: 6,
            name: "extended Hamming via three routes",
            limit: Some(Duration::from_secs(1)),
            run: hamming_routes,
        },
        Criterion {
            id: 7,
            name: "RM(2,5) self-dual",
            limit: Some(Duration::from_secs(60)),
            run: rm_2_5,
        },
        Criterion {
            id: 8,
            name: "orbit equality of X_{f,S}",
            limit: Some(Duration::from_secs(1)),
            run: orbit_equality,
        },
        Criterion {
            id: 9,
            name: "cost model",
            limit: Some(Duration::from_secs(1)),
            run: cost_model,
        },
        Criterion {
            id: 10,
            name: "partial order properties",
            limit: Some(Duration::from_secs(10)),
            run: partial_order,
        },
        Criterion {
            id: 11,
            name: "determinism across threads and cache",
            limit: None,
            run: determinism,
        },
    ];
    let filter: Vec<String> = std::env::args()
        .skip(1)
        .filter(|a| !a.starts_with('-'))
        .collect();
    let mut failed = 0;
    for c in &criteria {
        if !filter.is_empty()
            && !filter
                .iter()
                .any(|f| c.id.to_string() == *f || c.name.contains(f.as_str()))
        {
            continue;
        }
        let start = Instant::now();
        let outcome =
            panic::catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let outcome = match (outcome, c.limit) {
            (Ok(_), Some(limit)) if elapsed > limit => {
                Err(format!("took {elapsed:.2?}, limit {limit:?}"))
            }
            (o, _) => o,
        };
        let (status, detail) = match &outcome {
            Ok(d) => ("PASS", d.as_str()),
            Err(d) => ("FAIL", d.as_str()),
        };
        if outcome.is_err() {
            failed += 1;
        }
        println!(
            "criterion {:>2} {status} {} [{elapsed:.2?}] {detail}",
            c.id, c.name
        );
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
