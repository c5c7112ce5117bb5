//! Classic sequential Elo ratings, as a baseline next to EPP.
//!
//! The expected score of player 1 against player 2 is
//! `E1 = 1 / (1 + base^((r2 - r1) / scale))`, and after a match with actual
//! score A1 (1 win, 0 loss, 0.5 tie) the ratings move by `K * (A1 - E1)` in
//! opposite directions. Unlike EPP, the result depends on match order.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{MatchOutcome, PlayerId};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EloConfig {
    pub initial_rating: f64,
    pub k_factor: f64,
    pub scale: f64,
    pub base: f64,
}

impl Default for EloConfig {
    fn default() -> Self {
        EloConfig {
            initial_rating: 1500.0,
            k_factor: 32.0,
            scale: 400.0,
            base: 10.0,
        }
    }
}

impl EloConfig {
    fn validate(&self) -> Result<()> {
        if !(self.k_factor > 0.0) || !self.k_factor.is_finite() {
            return Err(Error::Domain(format!(
                "k_factor must be > 0, got {}",
                self.k_factor
            )));
        }
        if !(self.scale > 0.0) || !self.scale.is_finite() {
            return Err(Error::Domain(format!(
                "scale must be > 0, got {}",
                self.scale
            )));
        }
        if !(self.base > 1.0) || !self.base.is_finite() {
            return Err(Error::Domain(format!(
                "base must be > 1, got {}",
                self.base
            )));
        }
        if !self.initial_rating.is_finite() {
            return Err(Error::Domain(format!(
                "initial_rating must be finite, got {}",
                self.initial_rating
            )));
        }
        Ok(())
    }
}

/// Expected score of the first player: `1 / (1 + base^((r2 - r1) / scale))`.
///
/// At the defaults a 200-point edge gives roughly 0.76, the conventional
/// "about 3 wins in 4" calibration.
pub fn expected_score(r1: f64, r2: f64, config: &EloConfig) -> Result<f64> {
    config.validate()?;
    if !r1.is_finite() || !r2.is_finite() {
        return Err(Error::Domain(format!(
            "expected_score requires finite ratings, got ({r1}, {r2})"
        )));
    }
    Ok(1.0 / (1.0 + config.base.powf((r2 - r1) / config.scale)))
}

/// Applies one match result, returning the updated `(r1, r2)`.
///
/// Both players move by the same amount in opposite directions, so the
/// rating sum is conserved.
pub fn update(r1: f64, r2: f64, outcome: MatchOutcome, config: &EloConfig) -> Result<(f64, f64)> {
    let e1 = expected_score(r1, r2, config)?;
    let a1 = match outcome {
        MatchOutcome::WinI => 1.0,
        MatchOutcome::WinJ => 0.0,
        MatchOutcome::Tie => 0.5,
    };
    let delta = config.k_factor * (a1 - e1);
    Ok((r1 + delta, r2 - delta))
}

/// Ratings and match counts after a sequence of updates.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct EloTable {
    ratings: BTreeMap<PlayerId, f64>,
    matches_played: BTreeMap<PlayerId, u64>,
}

impl EloTable {
    pub fn rating(&self, player: &PlayerId) -> Option<f64> {
        self.ratings.get(player).copied()
    }

    pub fn matches_played(&self, player: &PlayerId) -> u64 {
        self.matches_played.get(player).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.ratings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ratings.is_empty()
    }

    /// Players with ratings and match counts, sorted by rating descending;
    /// rating ties fall back to player order.
    pub fn standings(&self) -> Vec<(&PlayerId, f64, u64)> {
        let mut rows: Vec<_> = self
            .ratings
            .iter()
            .map(|(p, &r)| (p, r, self.matches_played(p)))
            .collect();
        rows.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then_with(|| a.0.cmp(b.0)));
        rows
    }

    /// Renders `player,rating,matches_played` in standings order.
    pub fn to_csv(&self) -> String {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer
            .write_record(["player", "rating", "matches_played"])
            .expect("in-memory write");
        for (player, rating, played) in self.standings() {
            writer
                .write_record([player.to_string(), rating.to_string(), played.to_string()])
                .expect("in-memory write");
        }
        String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("utf-8")
    }
}

/// Plays `matches` in order, rating players from `initial_rating` on first
/// appearance. The outcome is order-sensitive by design; feed a canonical
/// order for reproducible tables.
pub fn run_sequential(
    matches: &[(PlayerId, PlayerId, MatchOutcome)],
    config: &EloConfig,
) -> Result<EloTable> {
    config.validate()?;
    let mut table = EloTable::default();
    for (i, j, outcome) in matches {
        if i == j {
            return Err(Error::InvalidPair(i.clone()));
        }
        let r1 = table.rating(i).unwrap_or(config.initial_rating);
        let r2 = table.rating(j).unwrap_or(config.initial_rating);
        let (r1, r2) = update(r1, r2, *outcome, config)?;
        table.ratings.insert(i.clone(), r1);
        table.ratings.insert(j.clone(), r2);
        *table.matches_played.entry(i.clone()).or_insert(0) += 1;
        *table.matches_played.entry(j.clone()).or_insert(0) += 1;
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn p(a: &str) -> PlayerId {
        PlayerId::new(a, "1")
    }

    #[test]
    fn equal_ratings_expect_half() {
        let e = expected_score(1500.0, 1500.0, &EloConfig::default()).unwrap();
        assert_eq!(e, 0.5);
    }

    #[test]
    fn two_hundred_point_gap() {
        let e = expected_score(1700.0, 1500.0, &EloConfig::default()).unwrap();
        assert!((e - 0.75975).abs() < 1e-5);
        assert_relative_eq!(e, 1.0 / (1.0 + 10f64.powf(-0.5)), epsilon = 1e-15);
    }

    #[test]
    fn update_oracle_equal_ratings() {
        let (r1, r2) = update(1500.0, 1500.0, MatchOutcome::WinI, &EloConfig::default()).unwrap();
        assert_eq!((r1, r2), (1516.0, 1484.0));
    }

    #[test]
    fn tie_at_equal_ratings_is_a_no_op() {
        let (r1, r2) = update(1500.0, 1500.0, MatchOutcome::Tie, &EloConfig::default()).unwrap();
        assert_eq!((r1, r2), (1500.0, 1500.0));
    }

    #[test]
    fn invalid_config_is_rejected() {
        for config in [
            EloConfig {
                k_factor: 0.0,
                ..EloConfig::default()
            },
            EloConfig {
                scale: -1.0,
                ..EloConfig::default()
            },
            EloConfig {
                base: 1.0,
                ..EloConfig::default()
            },
            EloConfig {
                initial_rating: f64::NAN,
                ..EloConfig::default()
            },
        ] {
            assert!(expected_score(1500.0, 1500.0, &config).is_err());
        }
        assert!(expected_score(f64::NAN, 1500.0, &EloConfig::default()).is_err());
    }

    #[test]
    fn empty_match_list_gives_empty_table() {
        let table = run_sequential(&[], &EloConfig::default()).unwrap();
        assert!(table.is_empty());
    }

    #[test]
    fn single_match_at_defaults() {
        let matches = [(p("a"), p("b"), MatchOutcome::WinI)];
        let table = run_sequential(&matches, &EloConfig::default()).unwrap();
        assert_eq!(table.rating(&p("a")), Some(1516.0));
        assert_eq!(table.rating(&p("b")), Some(1484.0));
        assert_eq!(table.matches_played(&p("a")), 1);
    }

    #[test]
    fn self_match_is_rejected() {
        let matches = [(p("a"), p("a"), MatchOutcome::WinI)];
        assert!(matches!(
            run_sequential(&matches, &EloConfig::default()),
            Err(Error::InvalidPair(_))
        ));
    }

    #[test]
    fn match_order_matters() {
        let config = EloConfig::default();
        let one = run_sequential(
            &[
                (p("a"), p("b"), MatchOutcome::WinI),
                (p("a"), p("c"), MatchOutcome::WinI),
            ],
            &config,
        )
        .unwrap();
        let two = run_sequential(
            &[
                (p("a"), p("c"), MatchOutcome::WinI),
                (p("a"), p("b"), MatchOutcome::WinI),
            ],
            &config,
        )
        .unwrap();
        // b loses to a fresh 1500 in one order and to a rated winner in the
        // other, so the final tables differ
        assert_ne!(one.rating(&p("b")), two.rating(&p("b")));
        assert_ne!(one, two);
    }

    #[test]
    fn translation_invariance() {
        let matches = [
            (p("a"), p("b"), MatchOutcome::WinI),
            (p("b"), p("c"), MatchOutcome::Tie),
            (p("c"), p("a"), MatchOutcome::WinJ),
        ];
        let base = run_sequential(&matches, &EloConfig::default()).unwrap();
        let shifted = run_sequential(
            &matches,
            &EloConfig {
                initial_rating: 1600.0,
                ..EloConfig::default()
            },
        )
        .unwrap();
        for player in ["a", "b", "c"] {
            assert_relative_eq!(
                base.rating(&p(player)).unwrap() + 100.0,
                shifted.rating(&p(player)).unwrap(),
                epsilon = 1e-9
            );
        }
    }

    #[test]
    fn csv_is_sorted_by_rating_descending() {
        let matches = [
            (p("a"), p("b"), MatchOutcome::WinJ),
            (p("c"), p("b"), MatchOutcome::WinJ),
        ];
        let table = run_sequential(&matches, &EloConfig::default()).unwrap();
        let csv = table.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "player,rating,matches_played");
        assert!(lines[1].starts_with("b:1,"));
        assert_eq!(lines.len(), 4);
        let ratings: Vec<f64> = lines[1..]
            .iter()
            .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
            .collect();
        assert!(ratings.windows(2).all(|w| w[0] >= w[1]));
    }

    proptest! {
        // E(r1, r2) + E(r2, r1) = 1
        #[test]
        fn expected_score_antisymmetry(r1 in 0.0f64..3000.0, r2 in 0.0f64..3000.0) {
            let config = EloConfig::default();
            let forward = expected_score(r1, r2, &config).unwrap();
            let backward = expected_score(r2, r1, &config).unwrap();
            prop_assert!((forward + backward - 1.0).abs() < 1e-12);
        }

        // one update moves the rating sum by at most rounding noise
        #[test]
        fn update_conserves_rating_sum(
            r1 in 0.0f64..3000.0,
            r2 in 0.0f64..3000.0,
            outcome_pick in 0u8..3,
        ) {
            let outcome = match outcome_pick {
                0 => MatchOutcome::WinI,
                1 => MatchOutcome::WinJ,
                _ => MatchOutcome::Tie,
            };
            let (n1, n2) = update(r1, r2, outcome, &EloConfig::default()).unwrap();
            prop_assert!(((n1 + n2) - (r1 + r2)).abs() < 1e-11);
        }
    }
}
