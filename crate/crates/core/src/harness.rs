//! Seeded randomized verification of the engine against the oracle and of the
//! base-change theorems over the homomorphism catalog.
//!
//! Every trial is a pure function of `(seed, property tag, trial index)`;
//! trials run in parallel and are merged in index order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::base_change::{
    check_ascent, check_descent, counterexample_exhibits, defect_transfer_check,
    membership_transfer_check, push_complex, restriction_transfer_check, spectral_compare,
    validate_exhibit, DescentStatus, ExhibitKind,
};
use crate::hom::{classify_hom, RingHomomorphism};
use crate::linalg::{kernel_generators, rank_over_field, smith_normal_form, solve_linear, Matrix};
use crate::module::{FpModule, Presentation, TwoTermComplex};
use crate::oracle::{enumerate_modules, oracle_filter_in, oracle_silting_in};
use crate::ring::{Component, Ring, RingDescriptor, Scalars};
use crate::silting::{gabriel_filter, is_silting, Verdict};

pub const DEFAULT_SEED: u64 = 0xC0FFEE;
pub const DEFAULT_ITERS: usize = 500;
pub const DEFAULT_BOUND: usize = 2;
pub const RNG_ALGORITHM: &str = "ChaCha8Rng (rand_chacha 0.3), seed_from_u64(seed), stream = tag << 32 | trial";

const MAX_RANK: usize = 3;
const INT_ENTRY: i128 = 6;
const SILTING_ATTEMPTS: usize = 4000;
/// Cap on sampled complexes per requested descent trial.
const DESCENT_OVERSAMPLE: usize = 50;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HarnessConfig {
    pub seed: u64,
    pub iters: usize,
    pub bound: usize,
}

impl Default for HarnessConfig {
    fn default() -> Self {
        HarnessConfig {
            seed: DEFAULT_SEED,
            iters: DEFAULT_ITERS,
            bound: DEFAULT_BOUND,
        }
    }
}

pub fn trial_rng(seed: u64, tag: u32, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((tag as u64) << 32) | (index & 0xFFFF_FFFF));
    rng
}

fn random_entry(comp: Component, rng: &mut ChaCha8Rng) -> i128 {
    match comp.modulus() {
        Some(q) => rng.gen_range(0..q) as i128,
        None => rng.gen_range(-INT_ENTRY..=INT_ENTRY),
    }
}

fn random_matrix(comp: Component, rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> Matrix {
    let data = (0..rows * cols).map(|_| random_entry(comp, rng)).collect();
    Matrix::new(comp.scalars(), rows, cols, data)
}

/// Ranks in `[0, 3]` per component, uniform entries.
pub fn random_complex(ring: &Ring, rng: &mut ChaCha8Rng) -> TwoTermComplex {
    let parts = ring
        .components()
        .iter()
        .map(|&c| {
            let m = rng.gen_range(0..=MAX_RANK);
            let n = rng.gen_range(0..=MAX_RANK);
            random_matrix(c, n, m, rng)
        })
        .collect();
    TwoTermComplex::new(ring.clone(), parts).expect("one matrix per component")
}

/// Rejection sampling; `None` if no silting complex turned up.
pub fn random_silting(ring: &Ring, rng: &mut ChaCha8Rng) -> Option<TwoTermComplex> {
    (0..SILTING_ATTEMPTS)
        .map(|_| random_complex(ring, rng))
        .find(|s| is_silting(s).verdict == Verdict::Silting)
}

/// A module with at most two generators and two random relations per component.
pub fn random_module(ring: &Ring, rng: &mut ChaCha8Rng) -> FpModule {
    let parts = ring
        .components()
        .iter()
        .map(|&c| {
            let g = rng.gen_range(0..=2);
            let r = rng.gen_range(0..=2);
            Presentation::new(g, random_matrix(c, g, r, rng)).expect("shape")
        })
        .collect();
    FpModule::new(ring.clone(), parts).expect("one presentation per component")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyOutcome {
    pub property: String,
    pub context: String,
    pub trials: usize,
    pub violations: usize,
    /// First few violating trials.
    pub examples: Vec<String>,
}

impl PropertyOutcome {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

const MAX_EXAMPLES: usize = 5;

/// Runs `trial` for indices `0..n` in parallel; `None` results are skipped,
/// `Some(Err)` are violations.
fn run_trials<F>(property: &str, context: String, n: usize, trial: F) -> PropertyOutcome
where
    F: Fn(u64) -> Option<Result<(), String>> + Sync,
{
    let results: Vec<Option<Result<(), String>>> =
        (0..n as u64).into_par_iter().map(&trial).collect();
    let mut out = PropertyOutcome {
        property: property.into(),
        context,
        trials: 0,
        violations: 0,
        examples: Vec::new(),
    };
    for (i, r) in results.into_iter().enumerate() {
        match r {
            None => {}
            Some(Ok(())) => out.trials += 1,
            Some(Err(e)) => {
                out.trials += 1;
                out.violations += 1;
                if out.examples.len() < MAX_EXAMPLES {
                    out.examples.push(format!("trial {i}: {e}"));
                }
            }
        }
    }
    out
}

fn check(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Finite rings on which the engine is compared with the oracle.
pub fn oracle_rings() -> Vec<Ring> {
    let mut rings: Vec<Ring> = [2u64, 3, 4, 6, 8, 12].into_iter().map(Ring::zmod).collect();
    rings.push(Ring::new(
        RingDescriptor::product(vec![RingDescriptor::ModularRing(2), RingDescriptor::ModularRing(2)])
            .expect("two factors"),
    ));
    rings
}

/// Homomorphisms covering all combinations of surjective, flat and faithfully flat.
pub fn hom_catalog() -> Vec<RingHomomorphism> {
    let zz = Ring::integers();
    let z = RingDescriptor::Integers;
    let zm = RingDescriptor::ModularRing;
    let quotient = |s: &RingDescriptor, t: u64| RingHomomorphism::quotient(s, &zm(t)).expect("catalog");
    let z6 = Ring::zmod(6);
    let z2x2 = Ring::new(RingDescriptor::product(vec![zm(2), zm(2)]).expect("two factors"));
    vec![
        RingHomomorphism::identity(&zz),
        quotient(&z, 6),
        quotient(&z, 4),
        RingHomomorphism::diagonal(&zz, 2).expect("catalog"),
        RingHomomorphism::projection(&z6, &[0]).expect("catalog"),
        RingHomomorphism::diagonal(&z6, 2).expect("catalog"),
        RingHomomorphism::crt(&z6),
        quotient(&zm(4), 2),
        RingHomomorphism::diagonal(&Ring::zmod(4), 2).expect("catalog"),
        RingHomomorphism::diagonal(&Ring::zmod(5), 2).expect("catalog"),
        quotient(&zm(12), 4),
        quotient(&zm(12), 6),
        quotient(&zm(8), 2),
        RingHomomorphism::projection(&z2x2, &[1]).expect("catalog"),
        RingHomomorphism::diagonal(&z2x2, 2).expect("catalog"),
        quotient(&z, 12)
            .then(&RingHomomorphism::crt(&Ring::zmod(12)))
            .expect("catalog"),
        quotient(&z, 6)
            .then(&RingHomomorphism::diagonal(&z6, 2).expect("catalog"))
            .expect("catalog"),
    ]
}

pub fn faithfully_flat_catalog() -> Vec<RingHomomorphism> {
    hom_catalog()
        .into_iter()
        .filter(|l| classify_hom(l).map(|c| c.faithfully_flat).unwrap_or(false))
        .collect()
}

mod tags {
    pub const ORACLE: u32 = 1;
    pub const ASCENT: u32 = 2;
    pub const DESCENT: u32 = 3;
    pub const SPECTRAL: u32 = 4;
    pub const MEMBERSHIP: u32 = 5;
    pub const RESTRICTION: u32 = 6;
    pub const DEFECT: u32 = 7;
    pub const FILTER: u32 = 8;
    pub const LINALG: u32 = 9;
}

/// Engine verdict against the brute-force oracle on random complexes.
pub fn prop_oracle_agreement(ring: &Ring, cfg: &HarnessConfig) -> PropertyOutcome {
    let family = enumerate_modules(ring, cfg.bound).expect("finite ring");
    run_trials("oracle agreement", ring.descriptor().to_string(), cfg.iters, |i| {
        let mut rng = trial_rng(cfg.seed, tags::ORACLE, i);
        let sigma = random_complex(ring, &mut rng);
        let engine = is_silting(&sigma).verdict == Verdict::Silting;
        let oracle = oracle_silting_in(&sigma, &family).expect("finite ring");
        Some(check(engine == oracle.consistent, || {
            format!("{sigma:?}: engine silting = {engine}, oracle consistent = {}", oracle.consistent)
        }))
    })
}

/// Ascent along λ and agreement with the `λ⋆(T⊗S) ∈ Gen(T)` criterion.
pub fn prop_ascent(lambda: &RingHomomorphism, cfg: &HarnessConfig) -> (PropertyOutcome, PropertyOutcome) {
    let reports: Vec<Option<(bool, bool)>> = (0..cfg.iters as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(cfg.seed, tags::ASCENT, i);
            let sigma = random_silting(lambda.source(), &mut rng)?;
            let r = check_ascent(&sigma, lambda).expect("silting source");
            Some((r.push_verdict == Verdict::Silting, r.criterion))
        })
        .collect();
    let ctx = lambda.to_string();
    let ascent = run_trials("ascent", ctx.clone(), reports.len(), |i| {
        reports[i as usize].map(|(push, _)| check(push, || "push is not silting".into()))
    });
    let criterion = run_trials("ascent criterion", ctx, reports.len(), |i| {
        reports[i as usize].map(|(push, crit)| {
            check(push == crit, || format!("push silting = {push}, criterion = {crit}"))
        })
    });
    (ascent, criterion)
}

/// Descent along a faithfully flat λ, counting only trials with silting push.
pub fn prop_descent(lambda: &RingHomomorphism, cfg: &HarnessConfig) -> PropertyOutcome {
    let mut out = PropertyOutcome {
        property: "descent".into(),
        context: lambda.to_string(),
        trials: 0,
        violations: 0,
        examples: Vec::new(),
    };
    let cap = cfg.iters * DESCENT_OVERSAMPLE;
    let mut next = 0usize;
    while out.trials < cfg.iters && next < cap {
        let batch = (cfg.iters - out.trials).max(16);
        let end = (next + batch).min(cap);
        let statuses: Vec<DescentStatus> = (next as u64..end as u64)
            .into_par_iter()
            .map(|i| {
                let mut rng = trial_rng(cfg.seed, tags::DESCENT, i);
                let sigma = random_complex(lambda.source(), &mut rng);
                check_descent(&sigma, lambda).expect("catalog map").status
            })
            .collect();
        for (k, s) in statuses.into_iter().enumerate() {
            if out.trials == cfg.iters {
                break;
            }
            match s {
                DescentStatus::Verified => out.trials += 1,
                DescentStatus::Violation => {
                    out.trials += 1;
                    out.violations += 1;
                    if out.examples.len() < MAX_EXAMPLES {
                        out.examples.push(format!("trial {}: source not silting", next + k));
                    }
                }
                DescentStatus::HypothesisNotMet => {}
                DescentStatus::NotApplicable => {
                    out.violations += 1;
                    out.examples.push("map is not faithfully flat".into());
                    return out;
                }
            }
        }
        next = end;
    }
    out
}

/// `λ⋆(V_{σ⊗S}) = V_σ` for faithfully flat λ.
pub fn prop_spectral(lambda: &RingHomomorphism, cfg: &HarnessConfig) -> PropertyOutcome {
    run_trials("spectral", lambda.to_string(), cfg.iters, |i| {
        let mut rng = trial_rng(cfg.seed, tags::SPECTRAL, i);
        let sigma = random_complex(lambda.source(), &mut rng);
        let r = spectral_compare(&sigma, lambda).expect("faithfully flat");
        Some(check(!r.violation, || {
            format!("V = {}, image of V(push) = {}", r.source_set, r.image)
        }))
    })
}

/// `N ∈ D_σ ⟺ N⊗S ∈ D_{σ⊗S}` and the `T_σ` analogue, for faithfully flat λ.
pub fn prop_membership_transfer(lambda: &RingHomomorphism, cfg: &HarnessConfig) -> PropertyOutcome {
    run_trials("membership transfer", lambda.to_string(), cfg.iters, |i| {
        let mut rng = trial_rng(cfg.seed, tags::MEMBERSHIP, i);
        let sigma = random_silting(lambda.source(), &mut rng)?;
        let n = random_module(lambda.source(), &mut rng);
        let r = membership_transfer_check(&sigma, lambda, &n).expect("preconditions hold");
        Some(check(r.holds, || format!("{r:?} for N = {:?}", n.canonical())))
    })
}

/// `D_{σ⊗S} = D_σ ∩ Mod-S` and `T_{σ⊗S} = T_σ ∩ Mod-S`, for any λ.
pub fn prop_restriction_transfer(lambda: &RingHomomorphism, cfg: &HarnessConfig) -> PropertyOutcome {
    run_trials("restriction transfer", lambda.to_string(), cfg.iters, |i| {
        let mut rng = trial_rng(cfg.seed, tags::RESTRICTION, i);
        let sigma = random_complex(lambda.source(), &mut rng);
        let m = random_module(lambda.target(), &mut rng);
        let r = restriction_transfer_check(&sigma, lambda, &m).expect("catalog map");
        Some(check(r.holds, || format!("{r:?} for M = {:?}", m.canonical())))
    })
}

/// `Def_{σ⊗S}(N⊗S) ≅ Def_σ(N)⊗S`.
pub fn prop_defect_transfer(lambda: &RingHomomorphism, cfg: &HarnessConfig) -> PropertyOutcome {
    run_trials("defect transfer", lambda.to_string(), cfg.iters, |i| {
        let mut rng = trial_rng(cfg.seed, tags::DEFECT, i);
        let sigma = random_complex(lambda.source(), &mut rng);
        let n = random_module(lambda.source(), &mut rng);
        let r = defect_transfer_check(&sigma, lambda, &n).expect("catalog map");
        Some(check(r.holds, || {
            format!("{:?} vs {:?}", r.pushed_defect, r.defect_base_changed)
        }))
    })
}

/// Engine filter against the module-quantified definition, on silting complexes.
pub fn prop_filter(ring: &Ring, cfg: &HarnessConfig) -> PropertyOutcome {
    let family = enumerate_modules(ring, cfg.bound).expect("finite ring");
    run_trials("filter consistency", ring.descriptor().to_string(), cfg.iters, |i| {
        let mut rng = trial_rng(cfg.seed, tags::FILTER, i);
        let sigma = random_silting(ring, &mut rng)?;
        let engine = gabriel_filter(&sigma).ideals.expect("finite ring");
        let oracle = oracle_filter_in(&sigma, &family).expect("finite ring");
        Some(check(engine == oracle, || format!("engine {engine:?}, oracle {oracle:?}")))
    })
}

/// Every stored exhibit recomputes to its advertised properties.
pub fn prop_exhibits() -> PropertyOutcome {
    let exhibits: Vec<_> = [ExhibitKind::DescentNeedsFaithful, ExhibitKind::AscentAnyHom]
        .into_iter()
        .flat_map(counterexample_exhibits)
        .collect();
    run_trials("exhibits", "stored exhibits".into(), exhibits.len(), |i| {
        let r = validate_exhibit(&exhibits[i as usize]).expect("catalog map");
        Some(check(r.validated, || format!("{r:?}")))
    })
}

const LINALG_SCALARS: [Scalars; 10] = [
    Scalars::Integers,
    Scalars::Modular(2),
    Scalars::Modular(3),
    Scalars::Modular(4),
    Scalars::Modular(5),
    Scalars::Modular(8),
    Scalars::Modular(9),
    Scalars::Modular(6),
    Scalars::Modular(12),
    Scalars::Rationals,
];

fn corpus_matrix(rng: &mut ChaCha8Rng, scalars: Scalars) -> Matrix {
    let rows = rng.gen_range(0..=4);
    let cols = rng.gen_range(0..=4);
    let data = (0..rows * cols)
        .map(|_| match scalars.modulus() {
            Some(q) => rng.gen_range(0..q) as i128,
            None => rng.gen_range(-9..=9),
        })
        .collect();
    Matrix::new(scalars, rows, cols, data)
}

/// 200 fixed matrices, 20 per coefficient ring.
pub fn linalg_corpus() -> Vec<Matrix> {
    let mut rng = trial_rng(0, tags::LINALG, u32::MAX as u64);
    LINALG_SCALARS
        .iter()
        .flat_map(|&s| (0..20).map(move |_| s))
        .map(|s| corpus_matrix(&mut rng, s))
        .collect()
}

fn is_field(s: Scalars) -> bool {
    match s {
        Scalars::Rationals => true,
        Scalars::Modular(q) => crate::arith::is_prime(q),
        Scalars::Integers => false,
    }
}

/// All vectors of length `len` over ℤ/q.
fn all_vectors(q: u64, len: usize) -> Vec<Vec<i128>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..q as i128).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

const EXHAUSTIVE_LIMIT: u64 = 1 << 12;

/// SNF identities, divisibility, rank-nullity and solver checks on one matrix.
pub fn check_linalg_invariants(a: &Matrix, rng: &mut ChaCha8Rng) -> Result<(), String> {
    let s = a.scalars();
    let snf_ok = matches!(s, Scalars::Integers)
        || s.modulus().is_some_and(|q| crate::arith::factorize(q).len() == 1);
    if snf_ok {
        let r = smith_normal_form(a).map_err(|e| e.to_string())?;
        check(r.u.mul(a).mul(&r.v) == r.d, || format!("U·A·V != D for {a:?}"))?;
        check(r.u.mul(&r.u_inv) == Matrix::identity(s, a.rows()), || "U·U⁻¹ != I".into())?;
        check(r.v.mul(&r.v_inv) == Matrix::identity(s, a.cols()), || "V·V⁻¹ != I".into())?;
        let f = &r.invariant_factors;
        for i in 0..f.len() {
            for j in 0..f.len() {
                if i != j {
                    check(r.d.get(i, j) == 0, || format!("D not diagonal for {a:?}"))?;
                }
            }
            check(r.d.get(i, i) == f[i], || "factor differs from D".into())?;
        }
        let nonzero: Vec<i128> = f.iter().copied().filter(|&x| x != 0).collect();
        check(nonzero.len() == r.rank && f[..r.rank] == nonzero[..], || {
            format!("zeros not trailing in {f:?}")
        })?;
        for w in nonzero.windows(2) {
            let ok = match s.modulus() {
                None => w[0] > 0 && w[1] % w[0] == 0,
                Some(q) => q as i128 % w[1] == 0 && w[1] % w[0] == 0,
            };
            check(ok, || format!("divisibility fails in {f:?}"))?;
        }
        if let [d] = nonzero[..] {
            check(s.modulus().is_some() || d > 0, || "negative factor".into())?;
        }
    }
    let k = kernel_generators(a).map_err(|e| e.to_string())?;
    for col in k.columns() {
        check(a.mul_vec(&col).iter().all(|&x| x == 0), || format!("kernel column {col:?} of {a:?}"))?;
    }
    if is_field(s) {
        let rank = rank_over_field(a).map_err(|e| e.to_string())?;
        check(rank + k.cols() == a.cols(), || format!("rank-nullity fails for {a:?}"))?;
    }
    if s == Scalars::Rationals {
        return Ok(());
    }
    let x0: Vec<i128> = (0..a.cols()).map(|_| rng.gen_range(-5..=5)).collect();
    let b = a.mul_vec(&x0);
    let x = solve_linear(a, &b).map_err(|e| e.to_string())?;
    check(x.as_ref().is_some_and(|x| a.mul_vec(x) == b), || {
        format!("consistent system reported unsolvable for {a:?}")
    })?;
    let b: Vec<i128> = (0..a.rows()).map(|_| s.reduce(rng.gen_range(-5..=5))).collect();
    let x = solve_linear(a, &b).map_err(|e| e.to_string())?;
    if let Some(x) = &x {
        check(a.mul_vec(x) == b, || format!("bad solution for {a:?}"))?;
    }
    if let Some(q) = s.modulus() {
        let size = (q as u128).pow(a.cols() as u32);
        if a.cols() <= 3 && size <= EXHAUSTIVE_LIMIT as u128 {
            let vectors = all_vectors(q, a.cols());
            if x.is_none() {
                check(vectors.iter().all(|v| a.mul_vec(v) != b), || {
                    format!("solver missed a solution for {a:?}")
                })?;
            }
            for v in vectors.iter().filter(|v| a.mul_vec(v).iter().all(|&y| y == 0)) {
                let spanned = solve_linear(&k, v).map_err(|e| e.to_string())?.is_some();
                check(spanned, || format!("kernel element {v:?} not generated for {a:?}"))?;
            }
        }
    }
    Ok(())
}

/// Linear algebra invariants on the fixed corpus and on `cfg.iters` random matrices.
pub fn prop_linalg(cfg: &HarnessConfig) -> PropertyOutcome {
    let corpus = linalg_corpus();
    let n = corpus.len() + cfg.iters;
    run_trials("linear algebra", format!("{} corpus + {} random", corpus.len(), cfg.iters), n, |i| {
        let mut rng = trial_rng(cfg.seed, tags::LINALG, i);
        let a = match corpus.get(i as usize) {
            Some(a) => a.clone(),
            None => {
                let s = LINALG_SCALARS[rng.gen_range(0..LINALG_SCALARS.len())];
                corpus_matrix(&mut rng, s)
            }
        };
        Some(check_linalg_invariants(&a, &mut rng))
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HarnessReport {
    pub rng: String,
    pub seed: u64,
    pub iters: usize,
    pub bound: usize,
    pub properties: Vec<PropertyOutcome>,
}

impl HarnessReport {
    pub fn passed(&self) -> bool {
        self.properties.iter().all(PropertyOutcome::passed)
    }
}

fn base_change_properties(lambda: &RingHomomorphism, cfg: &HarnessConfig, out: &mut Vec<PropertyOutcome>) {
    let (a, c) = prop_ascent(lambda, cfg);
    out.push(a);
    out.push(c);
    out.push(prop_restriction_transfer(lambda, cfg));
    out.push(prop_defect_transfer(lambda, cfg));
    if classify_hom(lambda).map(|c| c.faithfully_flat).unwrap_or(false) {
        out.push(prop_descent(lambda, cfg));
        out.push(prop_spectral(lambda, cfg));
        out.push(prop_membership_transfer(lambda, cfg));
    }
}

/// Runs the properties relevant to a ring and/or homomorphism; with neither,
/// the full catalog.
pub fn run_properties(
    ring: Option<&Ring>,
    lambda: Option<&RingHomomorphism>,
    cfg: &HarnessConfig,
) -> HarnessReport {
    let mut properties = Vec::new();
    let rings: Vec<Ring> = match (ring, lambda) {
        (_, Some(l)) => vec![l.source().clone()],
        (Some(r), None) => vec![r.clone()],
        (None, None) => oracle_rings(),
    };
    for r in rings.iter().filter(|r| r.is_finite()) {
        properties.push(prop_oracle_agreement(r, cfg));
        properties.push(prop_filter(r, cfg));
    }
    let homs: Vec<RingHomomorphism> = match (ring, lambda) {
        (_, Some(l)) => vec![l.clone()],
        (Some(r), None) => hom_catalog().into_iter().filter(|l| l.source() == r).collect(),
        (None, None) => hom_catalog(),
    };
    for l in &homs {
        base_change_properties(l, cfg, &mut properties);
    }
    properties.push(prop_exhibits());
    if ring.is_none() && lambda.is_none() {
        properties.push(prop_linalg(cfg));
    }
    HarnessReport {
        rng: RNG_ALGORITHM.into(),
        seed: cfg.seed,
        iters: cfg.iters,
        bound: cfg.bound,
        properties,
    }
}

/// Pushes along every catalog map whose source is the complex's ring.
pub fn catalog_pushes(sigma: &TwoTermComplex) -> Vec<(RingHomomorphism, TwoTermComplex)> {
    hom_catalog()
        .into_iter()
        .filter(|l| l.source() == sigma.ring())
        .map(|l| {
            let p = push_complex(sigma, &l).expect("same ring");
            (l, p)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> HarnessConfig {
        HarnessConfig {
            seed: 11,
            iters: 20,
            bound: 2,
        }
    }

    #[test]
    fn trials_are_reproducible() {
        let ring = Ring::zmod(12);
        let a = random_complex(&ring, &mut trial_rng(5, 1, 3));
        let b = random_complex(&ring, &mut trial_rng(5, 1, 3));
        let c = random_complex(&ring, &mut trial_rng(5, 1, 4));
        assert_eq!(a, b);
        assert_ne!(format!("{a:?}"), format!("{c:?}"));
    }

    #[test]
    fn catalog_covers_hypothesis_combinations() {
        let classes: std::collections::BTreeSet<(bool, bool, bool)> = hom_catalog()
            .iter()
            .map(|l| {
                let c = classify_hom(l).unwrap();
                (c.surjective, c.flat, c.faithfully_flat)
            })
            .collect();
        for want in [(true, true, true), (true, true, false), (false, true, true), (true, false, false), (false, false, false)] {
            assert!(classes.contains(&want), "{want:?} missing");
        }
        assert!(!faithfully_flat_catalog().is_empty());
    }

    #[test]
    fn sampler_finds_silting_complexes() {
        for ring in oracle_rings().into_iter().chain([Ring::integers()]) {
            let s = random_silting(&ring, &mut trial_rng(1, 0, 0)).expect("silting sample");
            assert_eq!(is_silting(&s).verdict, Verdict::Silting);
        }
    }

    #[test]
    fn small_runs_pass() {
        let cfg = small();
        assert!(prop_oracle_agreement(&Ring::zmod(6), &cfg).passed());
        let l = RingHomomorphism::diagonal(&Ring::zmod(6), 2).unwrap();
        let mut out = Vec::new();
        base_change_properties(&l, &cfg, &mut out);
        assert!(out.iter().all(PropertyOutcome::passed), "{out:?}");
        assert!(prop_exhibits().passed());
        assert!(prop_linalg(&HarnessConfig { iters: 10, ..cfg }).passed());
    }

    #[test]
    fn report_is_deterministic() {
        let cfg = small();
        let l = RingHomomorphism::diagonal(&Ring::zmod(5), 2).unwrap();
        let a = serde_json::to_string(&run_properties(None, Some(&l), &cfg)).unwrap();
        let b = serde_json::to_string(&run_properties(None, Some(&l), &cfg)).unwrap();
        assert_eq!(a, b);
    }
}
