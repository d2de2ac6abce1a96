//! Monte Carlo discrimination experiments.
//!
//! Trials run in fixed-size batches. Batch `b` draws from
//! `ChaCha8Rng::seed_from_u64(seed)` on stream `b` (offset by a constant for
//! the pairwise strategy), and batch results are merged in index order, so
//! the counts depend only on `(seed, config)` and not on the thread count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::corelin::{PureState, StateEnsemble};
use crate::error::{Result, UsdError};
use crate::scalar::Real;
use crate::symusd::Povm;
use crate::trine::{multitrine_povm, p_max_multitrine, pairwise_success};

/// Born probabilities may miss 1 (or go negative) by at most this much
/// before the measurement is rejected; entries below it are treated as 0.
pub const PROBABILITY_DUST: f64 = 1e-9;

/// Trials per batch; one RNG stream per batch.
pub const BATCH_SIZE: u64 = 1 << 16;

const PAIRWISE_STREAM_BASE: u64 = 1 << 63;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DiscriminationOutcome {
    /// 1-based index of the identified state.
    Identified(usize),
    Inconclusive,
}

/// Outcome counts; row `j < N` is "identified state `j+1`", row `N` is
/// inconclusive, column `k` is the prepared state.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TrialStats {
    n_trials: u64,
    counts: Vec<Vec<u64>>,
}

impl TrialStats {
    pub fn new(n_states: usize) -> Self {
        Self {
            n_trials: 0,
            counts: vec![vec![0; n_states]; n_states + 1],
        }
    }

    pub fn n_states(&self) -> usize {
        self.counts.first().map_or(0, Vec::len)
    }

    pub fn n_trials(&self) -> u64 {
        self.n_trials
    }

    pub fn counts(&self) -> &[Vec<u64>] {
        &self.counts
    }

    /// `prepared` is 0-based.
    pub fn record(&mut self, outcome: DiscriminationOutcome, prepared: usize) {
        let row = match outcome {
            DiscriminationOutcome::Identified(j) => j - 1,
            DiscriminationOutcome::Inconclusive => self.n_states(),
        };
        self.counts[row][prepared] += 1;
        self.n_trials += 1;
    }

    pub fn merge(&mut self, other: &TrialStats) {
        debug_assert_eq!(self.n_states(), other.n_states());
        self.n_trials += other.n_trials;
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
        }
    }

    pub fn trials_for_state(&self, prepared: usize) -> u64 {
        self.counts.iter().map(|row| row[prepared]).sum()
    }

    pub fn success_count(&self) -> u64 {
        (0..self.n_states()).map(|j| self.counts[j][j]).sum()
    }

    pub fn inconclusive_count(&self) -> u64 {
        self.counts.last().map_or(0, |row| row.iter().sum())
    }

    pub fn error_count(&self) -> u64 {
        self.n_trials - self.success_count() - self.inconclusive_count()
    }

    fn rate(&self, count: u64) -> f64 {
        if self.n_trials == 0 {
            0.0
        } else {
            count as f64 / self.n_trials as f64
        }
    }

    pub fn success_rate(&self) -> f64 {
        self.rate(self.success_count())
    }

    pub fn inconclusive_rate(&self) -> f64 {
        self.rate(self.inconclusive_count())
    }

    pub fn error_rate(&self) -> f64 {
        self.rate(self.error_count())
    }

    /// `|success_rate - p| <= k σ` with `σ = √(p(1-p)/n)`.
    pub fn success_within_sigma(&self, p: f64, k: f64) -> bool {
        (self.success_rate() - p).abs() <= k * binomial_sigma(p, self.n_trials)
    }
}

pub fn binomial_sigma(p: f64, n: u64) -> f64 {
    if n == 0 {
        return f64::INFINITY;
    }
    (p * (1.0 - p) / n as f64).sqrt()
}

/// Serialisable summary of one simulation run.
#[derive(Clone, Debug, Serialize)]
pub struct SimulationRecord<C: Serialize> {
    pub config: C,
    pub n_trials: u64,
    pub counts: Vec<Vec<u64>>,
    pub success_rate: f64,
    pub inconclusive_rate: f64,
    pub error_count: u64,
    pub analytic_success: f64,
}

impl<C: Serialize> SimulationRecord<C> {
    pub fn new(config: C, stats: &TrialStats, analytic_success: f64) -> Self {
        Self {
            config,
            n_trials: stats.n_trials(),
            counts: stats.counts().to_vec(),
            success_rate: stats.success_rate(),
            inconclusive_rate: stats.inconclusive_rate(),
            error_count: stats.error_count(),
            analytic_success,
        }
    }
}

/// Cumulative distribution over outcomes `Identified(1..N), Inconclusive`.
#[derive(Clone, Debug, PartialEq)]
pub struct OutcomeDistribution {
    cdf: Vec<f64>,
}

impl OutcomeDistribution {
    /// Validates and cleans raw Born probabilities.
    pub fn from_probabilities(raw: &[f64]) -> Result<Self> {
        if raw.len() < 2 {
            return Err(UsdError::InvalidPovm(
                "need at least one identifying outcome".into(),
            ));
        }
        if let Some(p) = raw
            .iter()
            .find(|p| !p.is_finite() || **p < -PROBABILITY_DUST || **p > 1.0 + PROBABILITY_DUST)
        {
            return Err(UsdError::InvalidPovm(format!(
                "outcome probability {p} outside [0, 1]"
            )));
        }
        let total: f64 = raw.iter().sum();
        if (total - 1.0).abs() >= PROBABILITY_DUST {
            return Err(UsdError::InvalidPovm(format!(
                "outcome probabilities sum to {total}"
            )));
        }
        let clean: Vec<f64> = raw
            .iter()
            .map(|p| {
                if *p < PROBABILITY_DUST {
                    0.0
                } else {
                    p.min(1.0)
                }
            })
            .collect();
        let total: f64 = clean.iter().sum();
        let mut acc = 0.0;
        let cdf = clean
            .iter()
            .map(|p| {
                acc += p / total;
                acc
            })
            .collect();
        Ok(Self { cdf })
    }

    pub fn for_state<T: Real>(m: &Povm<T>, s: &PureState<T>) -> Result<Self> {
        let raw: Vec<f64> = m
            .born_probabilities(s)?
            .into_iter()
            .map(Real::as_f64)
            .collect();
        Self::from_probabilities(&raw)
    }

    /// Probability of each outcome after cleaning.
    pub fn probabilities(&self) -> Vec<f64> {
        let mut prev = 0.0;
        self.cdf
            .iter()
            .map(|c| {
                let p = c - prev;
                prev = *c;
                p
            })
            .collect()
    }

    /// Inverse-CDF lookup for `u ∈ [0, 1)`.
    pub fn draw(&self, u: f64) -> DiscriminationOutcome {
        let n = self.cdf.len() - 1;
        let idx = self.cdf.iter().position(|c| u < *c).unwrap_or_else(|| {
            // Partial sums can round below 1: take the last outcome with mass.
            (1..=n)
                .rev()
                .find(|&i| self.cdf[i] > self.cdf[i - 1])
                .unwrap_or(0)
        });
        if idx == n {
            DiscriminationOutcome::Inconclusive
        } else {
            DiscriminationOutcome::Identified(idx + 1)
        }
    }
}

pub fn sample_outcome<T: Real, R: Rng + ?Sized>(
    m: &Povm<T>,
    s: &PureState<T>,
    rng: &mut R,
) -> Result<DiscriminationOutcome> {
    let dist = OutcomeDistribution::for_state(m, s)?;
    Ok(dist.draw(rng.random::<f64>()))
}

fn draw_index(cdf: &[f64], u: f64) -> usize {
    cdf.iter().position(|c| u < *c).unwrap_or(cdf.len() - 1)
}

fn prior_cdf<T: Real>(e: &StateEnsemble<T>) -> Vec<f64> {
    let mut acc = 0.0;
    e.priors()
        .iter()
        .map(|p| {
            acc += p.as_f64();
            acc
        })
        .collect()
}

fn batch_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn run_batched<F>(n: u64, n_states: usize, batch: F) -> Result<TrialStats>
where
    F: Fn(u64, u64) -> Result<TrialStats> + Sync,
{
    if n == 0 {
        return Err(UsdError::InvalidArgument(
            "number of trials must be >= 1".into(),
        ));
    }
    let n_batches = n.div_ceil(BATCH_SIZE);
    let parts = (0..n_batches)
        .into_par_iter()
        .map(|b| {
            let len = BATCH_SIZE.min(n - b * BATCH_SIZE);
            batch(b, len)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut total = TrialStats::new(n_states);
    for p in &parts {
        total.merge(p);
    }
    Ok(total)
}

/// `n` trials: draw the prepared state from the priors, then the outcome
/// from the Born rule.
pub fn run_trials<T: Real>(
    e: &StateEnsemble<T>,
    m: &Povm<T>,
    n: u64,
    seed: u64,
) -> Result<TrialStats> {
    if m.len() != e.len() {
        return Err(UsdError::DimensionMismatch {
            expected: e.len(),
            found: m.len(),
        });
    }
    let dists = e
        .states()
        .iter()
        .map(|s| OutcomeDistribution::for_state(m, s))
        .collect::<Result<Vec<_>>>()?;
    let priors = prior_cdf(e);
    run_batched(n, e.len(), |b, len| {
        let mut rng = batch_rng(seed, b);
        let mut stats = TrialStats::new(e.len());
        for _ in 0..len {
            let k = draw_index(&priors, rng.random::<f64>());
            stats.record(dists[k].draw(rng.random::<f64>()), k);
        }
        Ok(stats)
    })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub enum PairwiseMode {
    /// Measure every pair and check that all identifications agree.
    #[default]
    Exhaustive,
    /// Stop at the first pair that identifies the state.
    EarlyExit,
}

/// Trine copies measured two at a time with the optimal 2-copy measurement;
/// a trial succeeds if any of the `C/2` pairs identifies the state.
pub fn pairwise_strategy(
    copies: usize,
    n: u64,
    seed: u64,
    mode: PairwiseMode,
) -> Result<TrialStats> {
    if copies < 2 || !copies.is_multiple_of(2) {
        return Err(UsdError::InvalidArgument(format!(
            "pairwise strategy needs an even copy number >= 2, got {copies}"
        )));
    }
    let pairs = copies / 2;
    let (e, m) = multitrine_povm::<f64>(2, p_max_multitrine(2)?)?;
    let dists = e
        .states()
        .iter()
        .map(|s| OutcomeDistribution::for_state(&m, s))
        .collect::<Result<Vec<_>>>()?;
    let priors = prior_cdf(&e);
    run_batched(n, e.len(), |b, len| {
        let mut rng = batch_rng(seed, PAIRWISE_STREAM_BASE + b);
        let mut stats = TrialStats::new(e.len());
        for _ in 0..len {
            let k = draw_index(&priors, rng.random::<f64>());
            let mut found: Option<usize> = None;
            for _ in 0..pairs {
                if let DiscriminationOutcome::Identified(j) = dists[k].draw(rng.random::<f64>()) {
                    match found {
                        None => found = Some(j),
                        Some(first) if first != j => {
                            return Err(UsdError::InconsistentPairs { first, second: j });
                        }
                        Some(_) => {}
                    }
                    if mode == PairwiseMode::EarlyExit {
                        break;
                    }
                }
            }
            let outcome = found.map_or(
                DiscriminationOutcome::Inconclusive,
                DiscriminationOutcome::Identified,
            );
            stats.record(outcome, k);
        }
        Ok(stats)
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct StrategyResult {
    /// Copies actually measured.
    pub copies_used: usize,
    pub analytic_success: f64,
    pub success_rate: f64,
    pub inconclusive_rate: f64,
    pub error_count: u64,
    pub n_trials: u64,
    pub within_4_sigma: bool,
    #[serde(skip)]
    pub stats: TrialStats,
}

impl StrategyResult {
    fn new(copies_used: usize, analytic_success: f64, stats: TrialStats) -> Self {
        Self {
            copies_used,
            analytic_success,
            success_rate: stats.success_rate(),
            inconclusive_rate: stats.inconclusive_rate(),
            error_count: stats.error_count(),
            n_trials: stats.n_trials(),
            within_4_sigma: stats.success_within_sigma(analytic_success, 4.0),
            stats,
        }
    }
}

/// Collective optimum on all `C` copies versus pairwise measurements
/// (discarding one copy when `C` is odd).
#[derive(Clone, Debug, Serialize)]
pub struct StrategyReport {
    pub copies: usize,
    /// One copy of the trines is linearly dependent: no zero-error identification.
    pub single_copy_baseline: f64,
    pub collective: StrategyResult,
    pub pairwise: StrategyResult,
}

pub fn collective_trials(copies: usize, n: u64, seed: u64) -> Result<StrategyResult> {
    let p = p_max_multitrine::<f64>(copies)?;
    let (e, m) = multitrine_povm::<f64>(copies, p)?;
    Ok(StrategyResult::new(copies, p, run_trials(&e, &m, n, seed)?))
}

pub fn pairwise_trials(
    copies: usize,
    n: u64,
    seed: u64,
    mode: PairwiseMode,
) -> Result<StrategyResult> {
    if copies < 2 {
        return Err(UsdError::InvalidArgument(format!(
            "need at least 2 copies, got {copies}"
        )));
    }
    let used = copies - copies % 2;
    let analytic = pairwise_success::<f64>(used)?;
    Ok(StrategyResult::new(
        used,
        analytic,
        pairwise_strategy(used, n, seed, mode)?,
    ))
}

pub fn strategy_report(copies: usize, n: u64, seed: u64) -> Result<StrategyReport> {
    Ok(StrategyReport {
        copies,
        single_copy_baseline: 0.0,
        collective: collective_trials(copies, n, seed)?,
        pairwise: pairwise_trials(copies, n, seed, PairwiseMode::Exhaustive)?,
    })
}
