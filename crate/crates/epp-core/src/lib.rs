//! EPP (Elo-based Predictive Power) ratings for predictive models.
//!
//! Benchmark measures such as AUC or RMSE order models, but their differences
//! are not on an interval scale, and averaging across cross-validation splits
//! hides how often one model actually beats another. This crate rates models
//! the way chess rates players instead: every pair of (algorithm,
//! hyperparameter setting) entries plays "matches" within a tournament (one
//! data set), one match per comparison of two per-split scores, and the
//! aggregated win/loss record is fitted with a Bradley-Terry model
//!
//! ```text
//! logit P(i beats j) = beta_i - beta_j
//! ```
//!
//! by maximum likelihood. The fitted `beta` are the EPP ratings: rating
//! differences are log-odds of winning, so they translate directly into win
//! probabilities, support Wald significance tests, and mean the same thing in
//! every tournament.
//!
//! The pipeline, one module per stage:
//!
//! - [`ingest`] parses, validates and orients score tables (CSV or JSON).
//! - [`matches`] turns a score table into per-pair win counts under a
//!   comparison scheme (cross-split or same-split) and a tie policy.
//! - [`fit`] estimates EPP ratings by Newton maximum likelihood, with an
//!   identifiability constraint, standard errors and separation detection.
//! - [`elo`] is the classic sequential Elo system, kept as a baseline.
//! - [`analysis`] derives the deliverables: win-probability matrices,
//!   leaderboards, pairwise significance tests, tunability summaries and PCA
//!   embeddings of tournaments.
//! - [`synth`] generates seeded synthetic tournaments for calibration and
//!   recovery testing.

pub mod analysis;
pub mod elo;
pub mod error;
pub mod fit;
pub mod ingest;
pub mod matches;
pub mod model;
pub mod special;
pub mod synth;

pub use analysis::{
    compare, epp_matrix, leaderboard, leaderboard_csv, pca_embed, probability_matrix, tunability,
    tunability_by_algorithm, tunability_csv, Comparison, EmbeddingResult, EppMatrix,
    LeaderboardEntry, ProbabilityMatrix, TunabilitySummary,
};
pub use elo::{expected_score, run_sequential, update, EloConfig, EloTable};
pub use error::{Error, Result};
pub use fit::{
    fit_epp, gradient, hessian, log_likelihood, win_probability, Constraint, DesignRow, EppResult,
    FitConfig, FitWarning,
};
pub use ingest::{
    orient_scores, parse_score_table, score_table_to_csv, score_table_to_json, validate, Issue,
    Severity, TableFormat, ValidationReport,
};
pub use matches::{
    comparison_census, generate_matches, pair_counts_csv, Census, MatchConfig, Scheme, TiePolicy,
    TournamentCensus,
};
pub use model::{
    canonical_pair, MatchOutcome, Orientation, PairCounts, PlayerId, ScoreRecord, ScoreTable,
    TournamentId,
};
pub use synth::{generate_pair_counts, generate_score_table, Sampler, SynthConfig};
