//! Turns per-split scores into pairwise win counts.
//!
//! A round is one comparison of two score values for the same tournament.
//! Under [`Scheme::CrossSplit`] every split of player i meets every split of
//! player j (n_i x n_j rounds); under [`Scheme::SameSplit`] only splits held
//! by both players are compared. Exact score equality is a tie and is
//! resolved by the [`TiePolicy`]. Comparisons never cross tournaments.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::model::{PairCounts, PlayerId, ScoreTable, TournamentId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    /// Compare every split of one player against every split of the other.
    #[default]
    CrossSplit,
    /// Compare only scores from the same split index.
    SameSplit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TiePolicy {
    /// Drop tied comparisons.
    Ignore,
    /// Credit each side with half a win; keeps fractional counts
    /// well-defined for the binomial likelihood.
    #[default]
    HalfWin,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct MatchConfig {
    pub scheme: Scheme,
    pub tie_policy: TiePolicy,
}

/// Per-split scores of one tournament, keyed by player then split index.
type TournamentScores<'a> = BTreeMap<&'a PlayerId, BTreeMap<u32, f64>>;

fn group_by_tournament(table: &ScoreTable) -> BTreeMap<&TournamentId, TournamentScores<'_>> {
    let mut grouped: BTreeMap<&TournamentId, TournamentScores<'_>> = BTreeMap::new();
    for r in table.records() {
        grouped
            .entry(&r.tournament)
            .or_default()
            .entry(&r.player)
            .or_default()
            .insert(r.split, r.score);
    }
    grouped
}

fn tally(
    scores_i: &BTreeMap<u32, f64>,
    scores_j: &BTreeMap<u32, f64>,
    scheme: Scheme,
) -> (f64, f64, f64) {
    let mut wins_i = 0.0;
    let mut wins_j = 0.0;
    let mut ties = 0.0;
    let mut compare = |a: f64, b: f64| {
        if a > b {
            wins_i += 1.0;
        } else if a < b {
            wins_j += 1.0;
        } else {
            ties += 1.0;
        }
    };
    match scheme {
        Scheme::CrossSplit => {
            for &a in scores_i.values() {
                for &b in scores_j.values() {
                    compare(a, b);
                }
            }
        }
        Scheme::SameSplit => {
            for (split, &a) in scores_i {
                if let Some(&b) = scores_j.get(split) {
                    compare(a, b);
                }
            }
        }
    }
    (wins_i, wins_j, ties)
}

/// Plays every unordered player pair within each tournament and aggregates
/// the outcomes into [`PairCounts`].
///
/// Output is sorted by tournament, then by the canonical pair order, and is
/// independent of the record order in `table`. Pairs whose every comparison
/// was dropped by [`TiePolicy::Ignore`] are omitted.
pub fn generate_matches(table: &ScoreTable, config: MatchConfig) -> Vec<PairCounts> {
    let mut out = Vec::new();
    for (tournament, players) in group_by_tournament(table) {
        let players: Vec<_> = players.into_iter().collect();
        for (a, (player_i, scores_i)) in players.iter().enumerate() {
            for (player_j, scores_j) in &players[a + 1..] {
                let (mut wins_i, mut wins_j, ties) = tally(scores_i, scores_j, config.scheme);
                if config.tie_policy == TiePolicy::HalfWin {
                    wins_i += 0.5 * ties;
                    wins_j += 0.5 * ties;
                }
                if wins_i + wins_j == 0.0 {
                    continue;
                }
                out.push(
                    PairCounts::new(
                        tournament.clone(),
                        (*player_i).clone(),
                        (*player_j).clone(),
                        wins_i,
                        wins_j,
                        ties,
                    )
                    .expect("players are distinct and counts non-negative"),
                );
            }
        }
    }
    out
}

/// Raw comparison counts for one tournament, before tie handling.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TournamentCensus {
    pub tournament: TournamentId,
    pub players: usize,
    pub pairs: u64,
    pub comparisons: u64,
}

/// Audit summary of a score table under a match configuration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Census {
    pub score_records: usize,
    pub tournaments: Vec<TournamentCensus>,
}

impl Census {
    pub fn total_pairs(&self) -> u64 {
        self.tournaments.iter().map(|t| t.pairs).sum()
    }

    pub fn total_comparisons(&self) -> u64 {
        self.tournaments.iter().map(|t| t.comparisons).sum()
    }
}

/// Counts players, unordered pairs and scheduled comparisons per tournament.
///
/// Comparisons are counted before any tie handling, so the census reports
/// the scheduled rounds, not the surviving wins.
pub fn comparison_census(table: &ScoreTable, config: MatchConfig) -> Census {
    let mut tournaments = Vec::new();
    for (tournament, players) in group_by_tournament(table) {
        let players: Vec<_> = players.into_values().collect();
        let n = players.len();
        let mut comparisons = 0u64;
        for (a, scores_i) in players.iter().enumerate() {
            for scores_j in &players[a + 1..] {
                comparisons += match config.scheme {
                    Scheme::CrossSplit => (scores_i.len() * scores_j.len()) as u64,
                    Scheme::SameSplit => scores_i
                        .keys()
                        .filter(|s| scores_j.contains_key(*s))
                        .count() as u64,
                };
            }
        }
        tournaments.push(TournamentCensus {
            tournament: tournament.clone(),
            players: n,
            pairs: (n * n.saturating_sub(1) / 2) as u64,
            comparisons,
        });
    }
    Census {
        score_records: table.len(),
        tournaments,
    }
}

/// Audit dump: `tournament,player_i,player_j,wins_i,wins_j,n_comparisons`.
///
/// `n_comparisons` is the raw round count for the pair, including any ties
/// that `tie_policy` dropped; `tie_policy` must be the one that produced the
/// counts.
pub fn pair_counts_csv(counts: &[PairCounts], tie_policy: TiePolicy) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer
        .write_record([
            "tournament",
            "player_i",
            "player_j",
            "wins_i",
            "wins_j",
            "n_comparisons",
        ])
        .expect("in-memory write");
    for c in counts {
        let raw = match tie_policy {
            TiePolicy::Ignore => c.wins_i + c.wins_j + c.ties_converted,
            TiePolicy::HalfWin => c.wins_i + c.wins_j,
        };
        writer
            .write_record([
                c.tournament.name().to_string(),
                c.i.to_string(),
                c.j.to_string(),
                c.wins_i.to_string(),
                c.wins_j.to_string(),
                raw.to_string(),
            ])
            .expect("in-memory write");
    }
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("utf-8")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Orientation, ScoreRecord};
    use proptest::prelude::*;

    fn table(rows: &[(&str, &str, &str, u32, f64)]) -> ScoreTable {
        let records = rows
            .iter()
            .map(|&(t, a, h, split, score)| ScoreRecord {
                tournament: TournamentId::new(t),
                player: PlayerId::new(a, h),
                split,
                score,
            })
            .collect();
        ScoreTable::new(records, Orientation::HigherBetter)
    }

    fn fold_table(scores_1: &[f64], scores_2: &[f64]) -> ScoreTable {
        let mut rows = Vec::new();
        for (split, &s) in scores_1.iter().enumerate() {
            rows.push(("ds", "AutoML_1", "default", split as u32, s));
        }
        for (split, &s) in scores_2.iter().enumerate() {
            rows.push(("ds", "AutoML_2", "default", split as u32, s));
        }
        table(&rows)
    }

    #[test]
    fn four_fold_example_same_split() {
        // one 4-fold tournament: the second model wins one fold by a large
        // margin, loses the other three narrowly
        let t = fold_table(&[0.8, 0.8, 0.8, 0.8], &[0.9, 0.78, 0.78, 0.78]);
        let config = MatchConfig {
            scheme: Scheme::SameSplit,
            tie_policy: TiePolicy::Ignore,
        };
        let counts = generate_matches(&t, config);
        assert_eq!(counts.len(), 1);
        assert_eq!(counts[0].wins_i, 3.0);
        assert_eq!(counts[0].wins_j, 1.0);
        assert_eq!(counts[0].ties_converted, 0.0);
    }

    #[test]
    fn identical_scores_half_win() {
        let t = fold_table(&[0.5; 5], &[0.5; 5]);
        let config = MatchConfig {
            scheme: Scheme::SameSplit,
            tie_policy: TiePolicy::HalfWin,
        };
        let counts = generate_matches(&t, config);
        assert_eq!(counts.len(), 1);
        assert_eq!(counts[0].wins_i, 2.5);
        assert_eq!(counts[0].wins_j, 2.5);
        assert_eq!(counts[0].ties_converted, 5.0);
    }

    #[test]
    fn all_ties_omitted_under_ignore() {
        let t = fold_table(&[0.5; 5], &[0.5; 5]);
        let config = MatchConfig {
            scheme: Scheme::SameSplit,
            tie_policy: TiePolicy::Ignore,
        };
        assert!(generate_matches(&t, config).is_empty());
    }

    #[test]
    fn cross_split_accounts_for_every_round() {
        let scores_1: Vec<f64> = (0..20).map(|k| 0.5 + 0.01 * k as f64).collect();
        let scores_2: Vec<f64> = (0..20).map(|k| 0.5 + 0.012 * k as f64).collect();
        let t = fold_table(&scores_1, &scores_2);
        let config = MatchConfig {
            scheme: Scheme::CrossSplit,
            tie_policy: TiePolicy::Ignore,
        };
        let counts = generate_matches(&t, config);
        assert_eq!(counts.len(), 1);
        let c = &counts[0];
        assert_eq!(c.wins_i + c.wins_j + c.ties_converted, 400.0);
    }

    #[test]
    fn same_split_bounded_by_shared_splits() {
        // player i has splits 0..6, player j only 0..3
        let mut rows = Vec::new();
        for split in 0..6u32 {
            rows.push(("ds", "a", "1", split, 0.1 * split as f64));
        }
        for split in 0..3u32 {
            rows.push(("ds", "b", "1", split, 0.25));
        }
        let t = table(&rows);
        let config = MatchConfig {
            scheme: Scheme::SameSplit,
            tie_policy: TiePolicy::HalfWin,
        };
        let counts = generate_matches(&t, config);
        assert_eq!(counts[0].total(), 3.0);
    }

    #[test]
    fn output_is_independent_of_record_order() {
        let rows = [
            ("B", "q", "2", 0, 0.3),
            ("A", "p", "1", 1, 0.9),
            ("A", "q", "2", 0, 0.4),
            ("A", "p", "1", 0, 0.8),
            ("A", "q", "2", 1, 0.95),
            ("B", "p", "1", 0, 0.5),
        ];
        let forward = generate_matches(&table(&rows), MatchConfig::default());
        let mut reversed_rows = rows;
        reversed_rows.reverse();
        let reversed = generate_matches(&table(&reversed_rows), MatchConfig::default());
        assert_eq!(forward, reversed);
        assert_eq!(forward.len(), 2);
        assert_eq!(forward[0].tournament, TournamentId::new("A"));
        assert_eq!(forward[1].tournament, TournamentId::new("B"));
    }

    #[test]
    fn census_counts_scheduled_rounds() {
        // 3 players x 4 splits in one tournament, lone player in another
        let mut rows = Vec::new();
        for player in ["a", "b", "c"] {
            for split in 0..4u32 {
                rows.push(("ds1", player, "1", split, 0.5));
            }
        }
        rows.push(("ds2", "a", "1", 0, 0.5));
        let t = table(&rows);

        let census = comparison_census(&t, MatchConfig::default());
        assert_eq!(census.score_records, 13);
        assert_eq!(census.tournaments.len(), 2);
        assert_eq!(census.tournaments[0].players, 3);
        assert_eq!(census.tournaments[0].pairs, 3);
        assert_eq!(census.tournaments[0].comparisons, 3 * 16);
        assert_eq!(census.tournaments[1].players, 1);
        assert_eq!(census.tournaments[1].pairs, 0);
        assert_eq!(census.tournaments[1].comparisons, 0);
        assert_eq!(census.total_pairs(), 3);

        let same = comparison_census(
            &t,
            MatchConfig {
                scheme: Scheme::SameSplit,
                tie_policy: TiePolicy::HalfWin,
            },
        );
        assert_eq!(same.tournaments[0].comparisons, 3 * 4);
    }

    #[test]
    fn audit_csv_reports_raw_rounds() {
        let t = fold_table(&[0.5, 0.6], &[0.5, 0.4]);
        for policy in [TiePolicy::Ignore, TiePolicy::HalfWin] {
            let config = MatchConfig {
                scheme: Scheme::SameSplit,
                tie_policy: policy,
            };
            let counts = generate_matches(&t, config);
            let csv = pair_counts_csv(&counts, policy);
            let mut lines = csv.lines();
            assert_eq!(
                lines.next().unwrap(),
                "tournament,player_i,player_j,wins_i,wins_j,n_comparisons"
            );
            let row = lines.next().unwrap();
            assert!(row.ends_with(",2"), "raw rounds should be 2: {row}");
            assert!(row.starts_with("ds,AutoML_1:default,AutoML_2:default,"));
        }
    }

    proptest! {
        // cross-split with half-wins conserves rounds: wins_i + wins_j = n_i * n_j
        #[test]
        fn cross_split_half_win_conservation(
            scores_1 in proptest::collection::vec(0.0f64..1.0, 1..12),
            scores_2 in proptest::collection::vec(0.0f64..1.0, 1..12),
        ) {
            let t = fold_table(&scores_1, &scores_2);
            let counts = generate_matches(&t, MatchConfig::default());
            prop_assert_eq!(counts.len(), 1);
            let expected = (scores_1.len() * scores_2.len()) as f64;
            prop_assert_eq!(counts[0].wins_i + counts[0].wins_j, expected);
        }

        // renaming a player so the canonical order flips permutes the
        // stored roles but leaves its win count unchanged
        #[test]
        fn relabeling_preserves_win_values(
            scores_1 in proptest::collection::vec(0.0f64..1.0, 1..8),
            scores_2 in proptest::collection::vec(0.0f64..1.0, 1..8),
        ) {
            let named = |name: &'static str| -> Vec<(&str, &str, &str, u32, f64)> {
                let mut rows = Vec::new();
                for (split, &s) in scores_1.iter().enumerate() {
                    rows.push((("ds"), name, "1", split as u32, s));
                }
                for (split, &s) in scores_2.iter().enumerate() {
                    rows.push((("ds"), "m", "1", split as u32, s));
                }
                rows
            };
            let config = MatchConfig::default();
            // "a" sorts before "m", "z" after; same scores either way
            let rows_a = named("a");
            let rows_z = named("z");
            let low = generate_matches(&table(&rows_a), config);
            let high = generate_matches(&table(&rows_z), config);
            prop_assert_eq!((low[0].i.clone(), high[0].j.clone()),
                            (PlayerId::new("a", "1"), PlayerId::new("z", "1")));
            prop_assert_eq!(
                low[0].wins_of(&PlayerId::new("a", "1")).unwrap(),
                high[0].wins_of(&PlayerId::new("z", "1")).unwrap()
            );
            prop_assert_eq!(
                low[0].wins_of(&PlayerId::new("m", "1")).unwrap(),
                high[0].wins_of(&PlayerId::new("m", "1")).unwrap()
            );
        }
    }
}
