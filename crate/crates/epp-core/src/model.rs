//! Core domain types: players, tournaments, score records and aggregated
//! pair counts.
//!
//! A *player* is one algorithm together with one hyperparameter setting; a
//! *tournament* is one data set. All types here are immutable after
//! construction and safe to share across threads.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One rated entity: an algorithm paired with a hyperparameter setting.
///
/// Identity is exact string equality on both fields. The `Ord` impl (field
/// order: algorithm, then hyperparam_set) defines the canonical ordering used
/// everywhere deterministic output is required.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PlayerId {
    pub algorithm: String,
    pub hyperparam_set: String,
}

impl PlayerId {
    pub fn new(algorithm: impl Into<String>, hyperparam_set: impl Into<String>) -> Self {
        PlayerId {
            algorithm: algorithm.into(),
            hyperparam_set: hyperparam_set.into(),
        }
    }
}

impl fmt::Display for PlayerId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.algorithm, self.hyperparam_set)
    }
}

impl FromStr for PlayerId {
    type Err = Error;

    /// Parses `algorithm:hyperparam_set`, splitting on the first `:`.
    fn from_str(s: &str) -> Result<Self> {
        match s.split_once(':') {
            Some((a, h)) if !a.is_empty() && !h.is_empty() => Ok(PlayerId::new(a, h)),
            _ => Err(Error::Parse {
                line: 0,
                message: format!("expected 'algorithm:hyperparam_set', got '{s}'"),
            }),
        }
    }
}

/// One data set. All matches and one EPP fit happen within a tournament.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TournamentId(pub String);

impl TournamentId {
    pub fn new(name: impl Into<String>) -> Self {
        TournamentId(name.into())
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for TournamentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Whether larger ingested scores are better (AUC) or worse (RMSE).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Orientation {
    HigherBetter,
    LowerBetter,
}

/// One performance measurement: a player's score on one split of one
/// tournament.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreRecord {
    pub tournament: TournamentId,
    pub player: PlayerId,
    pub split: u32,
    pub score: f64,
}

/// The sole ingestion unit: a long-format collection of score records plus
/// the orientation they were recorded in.
///
/// Record order is preserved, so serialization round-trips byte-identically.
/// Invariants (unique keys, finite scores, non-empty labels) are checked by
/// [`crate::ingest::parse_score_table`] and [`crate::ingest::validate`], not
/// by this constructor.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreTable {
    records: Vec<ScoreRecord>,
    orientation: Orientation,
}

impl ScoreTable {
    pub fn new(records: Vec<ScoreRecord>, orientation: Orientation) -> Self {
        ScoreTable {
            records,
            orientation,
        }
    }

    pub fn records(&self) -> &[ScoreRecord] {
        &self.records
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Re-marks the table's orientation without touching the scores.
    pub fn with_orientation(mut self, orientation: Orientation) -> Self {
        self.orientation = orientation;
        self
    }

    pub fn into_records(self) -> Vec<ScoreRecord> {
        self.records
    }
}

/// Winner-relative result of one comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MatchOutcome {
    WinI,
    WinJ,
    Tie,
}

/// Returns the pair in canonical (lexicographic) order.
///
/// Idempotent and symmetric: `canonical_pair(a, b) == canonical_pair(b, a)`.
pub fn canonical_pair(i: PlayerId, j: PlayerId) -> Result<(PlayerId, PlayerId)> {
    if i == j {
        return Err(Error::InvalidPair(i));
    }
    if i <= j {
        Ok((i, j))
    } else {
        Ok((j, i))
    }
}

/// Aggregated match outcomes for one unordered player pair within one
/// tournament: the fitter's sufficient statistic.
///
/// Wins are real-valued because the half-win tie policy adds 0.5 to each
/// side per tie; `ties_converted` records how many raw comparisons were ties
/// (folded into the wins or dropped, depending on the policy that produced
/// this value). Stored in canonical order: `i < j`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairCounts {
    pub tournament: TournamentId,
    pub i: PlayerId,
    pub j: PlayerId,
    pub wins_i: f64,
    pub wins_j: f64,
    pub ties_converted: f64,
}

impl PairCounts {
    /// Builds a pair-count record, swapping roles if needed so that the
    /// stored pair is in canonical order.
    pub fn new(
        tournament: TournamentId,
        i: PlayerId,
        j: PlayerId,
        wins_i: f64,
        wins_j: f64,
        ties_converted: f64,
    ) -> Result<Self> {
        if i == j {
            return Err(Error::InvalidPair(i));
        }
        for (label, v) in [
            ("wins_i", wins_i),
            ("wins_j", wins_j),
            ("ties", ties_converted),
        ] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::Domain(format!(
                    "{label} must be finite and >= 0, got {v}"
                )));
            }
        }
        let (wins_i, wins_j, i, j) = if i <= j {
            (wins_i, wins_j, i, j)
        } else {
            (wins_j, wins_i, j, i)
        };
        Ok(PairCounts {
            tournament,
            i,
            j,
            wins_i,
            wins_j,
            ties_converted,
        })
    }

    /// Total comparisons that survived the tie policy.
    pub fn total(&self) -> f64 {
        self.wins_i + self.wins_j
    }

    /// Wins credited to `player`, if it is part of this pair.
    pub fn wins_of(&self, player: &PlayerId) -> Option<f64> {
        if *player == self.i {
            Some(self.wins_i)
        } else if *player == self.j {
            Some(self.wins_j)
        } else {
            None
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(a: &str, h: &str) -> PlayerId {
        PlayerId::new(a, h)
    }

    #[test]
    fn canonical_pair_orders_lexicographically() {
        let (a, b) = canonical_pair(p("rf", "h3"), p("gbm", "h1")).unwrap();
        assert_eq!(a, p("gbm", "h1"));
        assert_eq!(b, p("rf", "h3"));
    }

    #[test]
    fn canonical_pair_keeps_ordered_input() {
        let (a, b) = canonical_pair(p("a", "1"), p("a", "2")).unwrap();
        assert_eq!((a, b), (p("a", "1"), p("a", "2")));
    }

    #[test]
    fn canonical_pair_rejects_self_pair() {
        assert!(matches!(
            canonical_pair(p("a", "1"), p("a", "1")),
            Err(Error::InvalidPair(_))
        ));
    }

    #[test]
    fn canonical_pair_is_symmetric_and_idempotent() {
        let x = p("knn", "h07");
        let y = p("gbm", "h02");
        let once = canonical_pair(x.clone(), y.clone()).unwrap();
        let swapped = canonical_pair(y, x).unwrap();
        assert_eq!(once, swapped);
        let again = canonical_pair(once.0.clone(), once.1.clone()).unwrap();
        assert_eq!(once, again);
    }

    #[test]
    fn pair_counts_swap_preserves_per_player_wins() {
        let t = TournamentId::new("ds1");
        let fwd = PairCounts::new(t.clone(), p("a", "1"), p("b", "1"), 3.0, 1.0, 0.0).unwrap();
        let rev = PairCounts::new(t, p("b", "1"), p("a", "1"), 1.0, 3.0, 0.0).unwrap();
        assert_eq!(fwd, rev);
        assert_eq!(fwd.wins_of(&p("a", "1")), Some(3.0));
        assert_eq!(fwd.wins_of(&p("b", "1")), Some(1.0));
        assert_eq!(fwd.total(), rev.total());
    }

    #[test]
    fn pair_counts_rejects_self_and_negative() {
        let t = TournamentId::new("ds1");
        assert!(PairCounts::new(t.clone(), p("a", "1"), p("a", "1"), 1.0, 0.0, 0.0).is_err());
        assert!(PairCounts::new(t, p("a", "1"), p("b", "1"), -1.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn player_id_round_trips_through_display() {
        let id = p("gbm", "h01");
        let parsed: PlayerId = id.to_string().parse().unwrap();
        assert_eq!(parsed, id);
        // splits on the first colon only
        let odd: PlayerId = "glm:alpha:0.5".parse().unwrap();
        assert_eq!(odd, p("glm", "alpha:0.5"));
    }
}
