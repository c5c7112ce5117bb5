//! Synthetic tournaments with known ground truth.
//!
//! Everything here is driven by ChaCha8, a counter-based stream cipher RNG
//! with a published algorithm, so a (config, seed) pair yields identical
//! output on every platform and release. Uniforms take the top 53 bits of
//! each 64-bit word; normals come from the Box-Muller transform; binomials
//! are sums of Bernoulli draws.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fit::win_probability;
use crate::model::{Orientation, PairCounts, PlayerId, ScoreRecord, ScoreTable, TournamentId};

/// Deterministic sampler over a ChaCha8 stream.
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Uniform in [0, 1) with 53 random bits.
    pub fn uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard normal via Box-Muller (cosine branch only, one draw pair
    /// per call, so consumption is easy to reason about).
    pub fn normal(&mut self) -> f64 {
        let u1 = self.uniform();
        let u2 = self.uniform();
        (-2.0 * (1.0 - u1).ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }

    pub fn binomial(&mut self, n: u32, p: f64) -> u32 {
        (0..n).filter(|_| self.uniform() < p).count() as u32
    }

    /// Uniform index in `0..bound`.
    pub fn index(&mut self, bound: usize) -> usize {
        assert!(bound > 0, "index bound must be positive");
        ((self.uniform() * bound as f64) as usize).min(bound - 1)
    }

    /// In-place Fisher-Yates shuffle.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for k in (1..items.len()).rev() {
            items.swap(k, self.index(k + 1));
        }
    }
}

/// Ground truth for one synthetic tournament.
#[derive(Debug, Clone, PartialEq)]
pub struct SynthConfig {
    /// True ratings, one per player; must be centered (|sum| < 1e-12).
    pub true_beta: Vec<f64>,
    pub n_comparisons_per_pair: u32,
    pub seed: u64,
}

impl SynthConfig {
    fn validate(&self) -> Result<()> {
        if self.true_beta.len() < 2 {
            return Err(Error::TooFewPlayers(format!(
                "synthetic tournament needs at least 2 players, got {}",
                self.true_beta.len()
            )));
        }
        if self.true_beta.iter().any(|b| !b.is_finite()) {
            return Err(Error::Domain("true_beta must be finite".into()));
        }
        let sum: f64 = self.true_beta.iter().sum();
        if sum.abs() >= 1e-12 {
            return Err(Error::Domain(format!(
                "true_beta must be centered, sum is {sum}"
            )));
        }
        if self.n_comparisons_per_pair == 0 {
            return Err(Error::Domain("n_comparisons_per_pair must be >= 1".into()));
        }
        Ok(())
    }

    fn players(&self) -> Vec<PlayerId> {
        let width = (self.true_beta.len().saturating_sub(1)).to_string().len();
        (0..self.true_beta.len())
            .map(|k| PlayerId::new("sim", format!("p{k:0width$}")))
            .collect()
    }
}

/// Name of the tournament both generators emit.
pub const SYNTH_TOURNAMENT: &str = "synthetic";

/// Draws one tournament straight from the pairwise model: for each player
/// pair, wins are Binomial(n, invlogit(beta_i - beta_j)).
pub fn generate_pair_counts(config: &SynthConfig) -> Result<Vec<PairCounts>> {
    config.validate()?;
    let players = config.players();
    let mut sampler = Sampler::new(config.seed);
    let tournament = TournamentId::new(SYNTH_TOURNAMENT);
    let n = config.n_comparisons_per_pair;
    let mut counts = Vec::new();
    for i in 0..players.len() {
        for j in i + 1..players.len() {
            let p = win_probability(config.true_beta[i], config.true_beta[j])?;
            let wins_i = sampler.binomial(n, p) as f64;
            counts.push(PairCounts::new(
                tournament.clone(),
                players[i].clone(),
                players[j].clone(),
                wins_i,
                n as f64 - wins_i,
                0.0,
            )?);
        }
    }
    Ok(counts)
}

/// Draws a per-split score table: `score = beta_player + noise * N(0, 1)`,
/// one draw per (player, split). Scores then feed the normal ingest ->
/// matches -> fit pipeline, which approximately follows the pairwise model.
pub fn generate_score_table(
    config: &SynthConfig,
    n_splits: u32,
    noise_scale: f64,
    tournament: &str,
) -> Result<ScoreTable> {
    config.validate()?;
    if n_splits == 0 {
        return Err(Error::Domain("n_splits must be >= 1".into()));
    }
    if !(noise_scale > 0.0) || !noise_scale.is_finite() {
        return Err(Error::Domain(format!(
            "noise_scale must be finite and > 0, got {noise_scale}"
        )));
    }
    let players = config.players();
    let mut sampler = Sampler::new(config.seed);
    let tournament = TournamentId::new(tournament);
    let mut records = Vec::new();
    for (player, &beta) in players.iter().zip(&config.true_beta) {
        for split in 0..n_splits {
            records.push(ScoreRecord {
                tournament: tournament.clone(),
                player: player.clone(),
                split,
                score: beta + noise_scale * sampler.normal(),
            });
        }
    }
    Ok(ScoreTable::new(records, Orientation::HigherBetter))
}
