//! The full chain: a base coloring of `Z/p_0^t_0` with `a` colors, then `b`
//! stages that each multiply in `Z/p_i^t'` and add three colors, finally
//! flattened to `Z/N` through the CRT.

use alloc::boxed::Box;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::One;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{blowup, mt_coloring, sparsify_coloring, BlowupParams};
use crate::group::Group;
use crate::planner::{
    check_gcol, check_synth, decompose, exponent_t, primes_in_window, FeasibilityReport, GcolVerdict,
    KappaEvidence, SynthInputs, Window,
};
use crate::progressions::{find_mono_ap, Coloring, VerifyMode};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    /// Refuse unless every blow-up stage meets the feasibility hypotheses.
    Strict,
    /// Build regardless; the verifier is the only arbiter.
    #[default]
    Forced,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PipelineConfig {
    pub k: u64,
    pub r: u32,
    pub epsilon: Ratio<u64>,
    pub seed: u64,
    pub mode: Mode,
    /// Replaces `((1 - eps) k, k]`; rejected in strict mode.
    pub window: Option<Window>,
    pub resample_cap: u64,
    pub retry_cap: u64,
}

impl PipelineConfig {
    pub fn new(k: u64, r: u32) -> Self {
        PipelineConfig {
            k,
            r,
            epsilon: Ratio::new(1, 20),
            seed: 0,
            mode: Mode::Forced,
            window: None,
            resample_cap: 100_000,
            retry_cap: 100,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PipelinePlan {
    pub k: u64,
    pub r: u32,
    pub epsilon: Ratio<u64>,
    pub a: u32,
    pub b: u32,
    /// `p_0, .., p_b`, largest first.
    pub primes: Vec<u64>,
    pub t0: u32,
    pub t_prime: u32,
    /// `|H_0|, .., |H_b|`.
    pub factors: Vec<BigUint>,
    pub n: BigUint,
    /// Corollary check for each `H_i` with its own palette (`a`, then 3).
    pub factor_gcol: Vec<GcolVerdict>,
    /// One report per blow-up stage `i = 1..=b`.
    pub reports: Vec<FeasibilityReport>,
}

impl PipelinePlan {
    pub fn feasible(&self) -> bool {
        self.reports.iter().all(|r| r.cond2 && r.cond3)
    }
}

/// Prime selection, exponents, and per-stage feasibility, without building.
pub fn plan(config: &PipelineConfig) -> Result<PipelinePlan> {
    let PipelineConfig { k, r, epsilon, mode, window, .. } = *config;
    if k < 3 {
        return Err(Error::InvalidParameter("k must be at least 3"));
    }
    if mode == Mode::Strict && window.is_some() {
        return Err(Error::InvalidParameter("strict mode does not accept a window override"));
    }
    let (a, b) = decompose(r)?;
    let needed = b as usize + 1;
    let t0 = exponent_t(k, a as u64, epsilon)?;
    let t_prime = exponent_t(k, 3, epsilon)?;
    if t0 == 0 || t_prime == 0 {
        return Err(Error::InvalidParameter("exponent formula gave t = 0"));
    }

    let mut available = primes_in_window(k, epsilon, window)?;
    if available.len() < needed {
        return Err(match mode {
            Mode::Strict => Error::Infeasible { reports: Vec::new() },
            Mode::Forced => Error::NotEnoughPrimes { found: available, needed },
        });
    }
    available.reverse();
    let primes: Vec<u64> = available.into_iter().take(needed).collect();

    let factors: Vec<BigUint> = primes
        .iter()
        .enumerate()
        .map(|(i, &p)| num_traits::Pow::pow(BigUint::from(p), if i == 0 { t0 } else { t_prime }))
        .collect();
    let factor_gcol = factors
        .iter()
        .zip(&primes)
        .enumerate()
        .map(|(i, (f, &p))| check_gcol(f, if i == 0 { a } else { 3 }, k, Some(p)))
        .collect();

    let mut reports = Vec::with_capacity(b as usize);
    let mut order = factors[0].clone();
    let mut min_order = primes[0];
    for i in 1..needed {
        order *= &factors[i];
        let mut report = check_synth(&SynthInputs {
            p: primes[i],
            t: t_prime,
            q: min_order,
            k,
            group_order: order.clone(),
            h1_min_order: Some(min_order),
            h2_palette: Some(3),
            evidence: None,
        })?;
        report.r = Some(r);
        report.epsilon = Some(epsilon);
        reports.push(report);
        min_order = min_order.min(primes[i]);
    }

    let n = factors.iter().fold(BigUint::one(), |acc, f| acc * f);
    let plan = PipelinePlan { k, r, epsilon, a, b, primes, t0, t_prime, factors, n, factor_gcol, reports };
    if mode == Mode::Strict && !plan.feasible() {
        return Err(Error::Infeasible { reports: plan.reports });
    }
    Ok(plan)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PipelineOutput {
    pub plan: PipelinePlan,
    /// Verified coloring of `Z/N` with `r` colors.
    pub coloring: Coloring,
    /// Blow-up attempts summed over all stages.
    pub attempts: u64,
    pub resamples: u64,
}

/// Runs the whole construction. Sub-seeds for every randomized step are
/// drawn in a fixed order from one stream seeded by `config.seed`.
pub fn build_pipeline(config: &PipelineConfig) -> Result<PipelineOutput> {
    let mut plan = plan(config)?;
    let k = usize::try_from(plan.k).map_err(|_| Error::TooLarge { what: "k" })?;
    let n = plan.n.clone();
    if n > BigUint::from(crate::ENUMERATION_LIMIT) {
        return Err(Error::TooLarge { what: "N" });
    }
    let sizes: Vec<u64> = plan.factors.iter().map(|f| f.iter_u64_digits().next().unwrap_or(0)).collect();

    let mut seeds = ChaCha8Rng::seed_from_u64(config.seed);
    let h0 = Group::cyclic(sizes[0])?;
    let base = mt_coloring(&h0, plan.a, k, seeds.next_u64(), config.resample_cap)?;
    let mut resamples = base.resamples;
    let mut attempts = 0u64;
    let mut current = base.coloring;

    for (stage, &size) in sizes.iter().enumerate().skip(1) {
        let hi = Group::cyclic(size)?;
        let mt_seed = seeds.next_u64();
        let blow_seed = seeds.next_u64();
        let c2 = mt_coloring(&hi, 3, k, mt_seed, config.resample_cap)?;
        resamples += c2.resamples;
        let sparse = sparsify_coloring(&c2.coloring, plan.primes[stage], k)?;

        let report = &mut plan.reports[stage - 1];
        report.evidence = Some(KappaEvidence {
            h1: current.content_hash(),
            h2: c2.coloring.content_hash(),
        });
        report.cond1 = true;

        let params = BlowupParams {
            r1: current.palette(),
            r2: 1,
            r3: 3,
            seed: blow_seed,
            retry_cap: config.retry_cap,
            q: current.group().min_order().unwrap_or(plan.k),
        };
        let out = blowup(&current, &sparse.coloring, &params, k)?;
        attempts += out.attempts;
        current = out.coloring;
    }

    let coloring = current.flatten_crt()?;
    if let Some(w) = find_mono_ap(&coloring, k, VerifyMode::Fast) {
        return Err(Error::VerificationFailed { witness: Box::new(w) });
    }
    Ok(PipelineOutput { plan, coloring, attempts, resamples })
}
