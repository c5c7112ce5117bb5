//! Shared fixtures for the pipeline benches.

use epp_core::{
    generate_pair_counts, EppMatrix, Orientation, PairCounts, PlayerId, Sampler, ScoreRecord,
    ScoreTable, SynthConfig, TournamentId,
};

/// Evenly spaced ratings over [-2, 2], centered exactly.
pub fn spread_beta(n: usize) -> Vec<f64> {
    let span = n as f64 - 1.0;
    let mut betas: Vec<f64> = (0..n)
        .map(|k| (k as f64 - span / 2.0) * (4.0 / span))
        .collect();
    for _ in 0..2 {
        let mean = betas.iter().sum::<f64>() / betas.len().max(1) as f64;
        for b in betas.iter_mut() {
            *b -= mean;
        }
    }
    betas
}

pub fn synthetic_counts(n_players: usize, per_pair: u32, seed: u64) -> Vec<PairCounts> {
    let config = SynthConfig {
        true_beta: spread_beta(n_players),
        n_comparisons_per_pair: per_pair,
        seed,
    };
    generate_pair_counts(&config).expect("valid synthetic config")
}

/// A table shaped like a full benchmarking study: 4 algorithms with 11
/// hyperparameter settings each, scored on 20 splits per tournament.
pub fn benchmark_table(n_tournaments: u32, seed: u64) -> ScoreTable {
    let mut draw = Sampler::new(seed);
    let mut records = Vec::new();
    for t in 0..n_tournaments {
        for alg in 0..4u32 {
            for hp in 0..11u32 {
                for split in 0..20u32 {
                    records.push(ScoreRecord {
                        tournament: TournamentId::new(format!("t{t:02}")),
                        player: PlayerId::new(format!("alg{alg}"), format!("h{hp:02}")),
                        split,
                        score: draw.uniform(),
                    });
                }
            }
        }
    }
    ScoreTable::new(records, Orientation::HigherBetter)
}

pub fn rating_matrix(rows: usize, cols: usize, seed: u64) -> EppMatrix {
    let mut draw = Sampler::new(seed);
    EppMatrix {
        tournaments: (0..rows)
            .map(|r| TournamentId::new(format!("t{r:02}")))
            .collect(),
        players: (0..cols)
            .map(|c| PlayerId::new("alg", format!("h{c:02}")))
            .collect(),
        cells: (0..rows)
            .map(|_| {
                (0..cols)
                    .map(|_| Some(draw.uniform() * 2.0 - 1.0))
                    .collect()
            })
            .collect(),
    }
}
