//! Error type shared by every stage of the pipeline.

use crate::model::PlayerId;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A player was paired or matched against itself.
    #[error("invalid pair: '{0}' cannot be matched against itself")]
    InvalidPair(PlayerId),

    /// Malformed input data. `line` is 1-based (CSV line or JSON array index).
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// The same (tournament, player, split) key appeared twice.
    #[error("duplicate record key at line {line}: {key}")]
    DuplicateKey { line: usize, key: String },

    /// Mismatched dimensions or an out-of-range index.
    #[error("shape mismatch: {0}")]
    Shape(String),

    /// A rating fit needs at least two players.
    #[error("tournament '{0}' has fewer than two players")]
    TooFewPlayers(String),

    /// Rating differences across disconnected components are unidentifiable.
    #[error("comparison graph is disconnected; components: {}", format_components(.0))]
    DisconnectedGraph(Vec<Vec<PlayerId>>),

    /// A non-finite value where a finite one is required.
    #[error("non-finite input: {0}")]
    Domain(String),

    /// The fit did not converge and the caller did not force the operation.
    #[error("fit did not converge; pass force to override")]
    NotConverged,

    #[error("unknown player '{0}'")]
    UnknownPlayer(PlayerId),

    /// The EPP matrix has masked cells; callers must filter to fully
    /// observed columns before embedding.
    #[error("EPP matrix has masked cells; filter to fully observed columns first")]
    IncompleteMatrix,

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn format_components(components: &[Vec<PlayerId>]) -> String {
    components
        .iter()
        .map(|c| {
            let names: Vec<String> = c.iter().map(|p| p.to_string()).collect();
            format!("[{}]", names.join(", "))
        })
        .collect::<Vec<_>>()
        .join(" | ")
}
