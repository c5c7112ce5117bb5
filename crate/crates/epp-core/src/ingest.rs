//! Parsing, validation and orientation of score tables.
//!
//! The canonical CSV schema is the five-column header
//! `tournament,algorithm,hyperparam_set,split,score` with RFC 4180 quoting;
//! the JSON form is an array of objects with the same five keys. Scores are
//! rendered with full round-trip precision, so `parse(serialize(t)) == t`.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Orientation, PlayerId, ScoreRecord, ScoreTable, TournamentId};

/// Expected CSV header, in order. Unknown or reordered columns are rejected.
pub const CSV_HEADER: [&str; 5] = [
    "tournament",
    "algorithm",
    "hyperparam_set",
    "split",
    "score",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableFormat {
    Csv,
    Json,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRecord {
    tournament: String,
    algorithm: String,
    hyperparam_set: String,
    split: u32,
    score: f64,
}

/// Parses a score table from raw bytes.
///
/// The returned table is marked [`Orientation::HigherBetter`]; callers
/// ingesting a lower-is-better measure re-mark it with
/// [`ScoreTable::with_orientation`] before calling [`orient_scores`].
///
/// Rejects malformed rows (with their line number), unknown columns,
/// non-finite scores and duplicate (tournament, player, split) keys.
pub fn parse_score_table(source: &[u8], format: TableFormat) -> Result<ScoreTable> {
    let records = match format {
        TableFormat::Csv => parse_csv(source)?,
        TableFormat::Json => parse_json(source)?,
    };
    Ok(ScoreTable::new(records, Orientation::HigherBetter))
}

fn check_record(raw: &RawRecord, line: usize, seen: &mut BTreeSet<String>) -> Result<ScoreRecord> {
    for (field, value) in [
        ("tournament", &raw.tournament),
        ("algorithm", &raw.algorithm),
        ("hyperparam_set", &raw.hyperparam_set),
    ] {
        if value.is_empty() {
            return Err(Error::Parse {
                line,
                message: format!("empty {field} label"),
            });
        }
    }
    if !raw.score.is_finite() {
        return Err(Error::Parse {
            line,
            message: format!("score must be finite, got {}", raw.score),
        });
    }
    let key = format!(
        "{},{}:{},{}",
        raw.tournament, raw.algorithm, raw.hyperparam_set, raw.split
    );
    if !seen.insert(key.clone()) {
        return Err(Error::DuplicateKey { line, key });
    }
    Ok(ScoreRecord {
        tournament: TournamentId::new(raw.tournament.clone()),
        player: PlayerId::new(raw.algorithm.clone(), raw.hyperparam_set.clone()),
        split: raw.split,
        score: raw.score,
    })
}

fn parse_csv(source: &[u8]) -> Result<Vec<ScoreRecord>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(source);
    let headers = reader
        .headers()
        .map_err(|e| Error::Parse {
            line: 1,
            message: e.to_string(),
        })?
        .clone();
    if headers.iter().ne(CSV_HEADER) {
        return Err(Error::Parse {
            line: 1,
            message: format!(
                "expected header '{}', got '{}'",
                CSV_HEADER.join(","),
                headers.iter().collect::<Vec<_>>().join(",")
            ),
        });
    }

    let mut seen = BTreeSet::new();
    let mut records = Vec::new();
    for (idx, row) in reader.records().enumerate() {
        let row = row.map_err(|e| {
            let line = e.position().map(|p| p.line() as usize).unwrap_or(idx + 2);
            Error::Parse {
                line,
                message: e.to_string(),
            }
        })?;
        let line = row.position().map(|p| p.line() as usize).unwrap_or(idx + 2);
        if row.len() != CSV_HEADER.len() {
            return Err(Error::Parse {
                line,
                message: format!("expected {} fields, got {}", CSV_HEADER.len(), row.len()),
            });
        }
        let split: u32 = row[3].parse().map_err(|_| Error::Parse {
            line,
            message: format!("invalid split index '{}'", &row[3]),
        })?;
        let score: f64 = row[4].parse().map_err(|_| Error::Parse {
            line,
            message: format!("invalid score '{}'", &row[4]),
        })?;
        let raw = RawRecord {
            tournament: row[0].to_string(),
            algorithm: row[1].to_string(),
            hyperparam_set: row[2].to_string(),
            split,
            score,
        };
        records.push(check_record(&raw, line, &mut seen)?);
    }
    Ok(records)
}

fn parse_json(source: &[u8]) -> Result<Vec<ScoreRecord>> {
    let raws: Vec<RawRecord> = serde_json::from_slice(source).map_err(|e| Error::Parse {
        line: e.line(),
        message: e.to_string(),
    })?;
    let mut seen = BTreeSet::new();
    raws.iter()
        .enumerate()
        .map(|(idx, raw)| check_record(raw, idx + 1, &mut seen))
        .collect()
}

/// Renders the canonical five-column CSV. Scores use Rust's shortest
/// round-trip formatting.
pub fn score_table_to_csv(table: &ScoreTable) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(CSV_HEADER).expect("in-memory write");
    for r in table.records() {
        writer
            .write_record([
                r.tournament.name(),
                &r.player.algorithm,
                &r.player.hyperparam_set,
                &r.split.to_string(),
                &r.score.to_string(),
            ])
            .expect("in-memory write");
    }
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("utf-8")
}

/// Renders the JSON form: an array of objects with the five canonical keys.
pub fn score_table_to_json(table: &ScoreTable) -> String {
    let raws: Vec<RawRecord> = table
        .records()
        .iter()
        .map(|r| RawRecord {
            tournament: r.tournament.name().to_string(),
            algorithm: r.player.algorithm.clone(),
            hyperparam_set: r.player.hyperparam_set.clone(),
            split: r.split,
            score: r.score,
        })
        .collect();
    serde_json::to_string_pretty(&raws).expect("serializable")
}

/// Normalizes a table to higher-is-better by negating every score of a
/// lower-is-better table. Higher-is-better tables pass through unchanged.
///
/// Negation preserves the win relation: RMSE 0.7 beats 1.2 iff -0.7 > -1.2.
pub fn orient_scores(table: ScoreTable) -> ScoreTable {
    match table.orientation() {
        Orientation::HigherBetter => table,
        Orientation::LowerBetter => {
            let records = table
                .into_records()
                .into_iter()
                .map(|mut r| {
                    r.score = -r.score;
                    r
                })
                .collect();
            ScoreTable::new(records, Orientation::HigherBetter)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, Serialize)]
pub struct Issue {
    pub severity: Severity,
    pub message: String,
    pub locus: String,
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{tag}: {} ({})", self.message, self.locus)
    }
}

/// Outcome of [`validate`]. Any error-level issue blocks downstream use.
#[derive(Debug, Clone, Default, Serialize)]
pub struct ValidationReport {
    pub issues: Vec<Issue>,
}

impl ValidationReport {
    pub fn has_errors(&self) -> bool {
        self.issues.iter().any(|i| i.severity == Severity::Error)
    }

    pub fn errors(&self) -> impl Iterator<Item = &Issue> {
        self.issues.iter().filter(|i| i.severity == Severity::Error)
    }

    pub fn warnings(&self) -> impl Iterator<Item = &Issue> {
        self.issues
            .iter()
            .filter(|i| i.severity == Severity::Warning)
    }

    pub fn is_empty(&self) -> bool {
        self.issues.is_empty()
    }

    fn error(&mut self, message: String, locus: String) {
        self.issues.push(Issue {
            severity: Severity::Error,
            message,
            locus,
        });
    }

    fn warning(&mut self, message: String, locus: String) {
        self.issues.push(Issue {
            severity: Severity::Warning,
            message,
            locus,
        });
    }
}

/// Checks a table for blocking errors (duplicates, non-finite scores, empty
/// labels, no records at all) and for warnings (unbalanced split counts
/// within a tournament, single-player tournaments, players missing from some
/// tournaments).
///
/// Tables built by [`parse_score_table`] cannot trigger the error paths;
/// they exist for programmatically constructed tables.
pub fn validate(table: &ScoreTable) -> ValidationReport {
    use std::collections::BTreeMap;

    let mut report = ValidationReport::default();
    if table.is_empty() {
        report.error("table contains no records".into(), "table".into());
        return report;
    }

    let mut seen = BTreeSet::new();
    // tournament -> player -> number of splits
    let mut splits: BTreeMap<&TournamentId, BTreeMap<&PlayerId, usize>> = BTreeMap::new();
    for (idx, r) in table.records().iter().enumerate() {
        let locus = format!(
            "record {}: {},{},{}",
            idx + 1,
            r.tournament,
            r.player,
            r.split
        );
        if r.tournament.name().is_empty() {
            report.error("empty tournament name".into(), locus.clone());
        }
        if r.player.algorithm.is_empty() || r.player.hyperparam_set.is_empty() {
            report.error("empty player label".into(), locus.clone());
        }
        if !r.score.is_finite() {
            report.error(format!("non-finite score {}", r.score), locus.clone());
        }
        if !seen.insert((&r.tournament, &r.player, r.split)) {
            report.error("duplicate (tournament, player, split) key".into(), locus);
        }
        *splits
            .entry(&r.tournament)
            .or_default()
            .entry(&r.player)
            .or_insert(0) += 1;
    }

    for (tournament, players) in &splits {
        if players.len() == 1 {
            report.warning(
                "tournament has a single player; no pairs can be formed".into(),
                tournament.to_string(),
            );
        }
        let min = players.values().min().copied().unwrap_or(0);
        let max = players.values().max().copied().unwrap_or(0);
        if min != max {
            report.warning(
                format!("unbalanced split counts across players (min {min}, max {max})"),
                tournament.to_string(),
            );
        }
    }

    if splits.len() > 1 {
        let mut coverage: BTreeMap<&PlayerId, usize> = BTreeMap::new();
        for players in splits.values() {
            for player in players.keys() {
                *coverage.entry(player).or_insert(0) += 1;
            }
        }
        let total = splits.len();
        for (player, count) in coverage {
            if count < total {
                report.warning(
                    format!("player appears in {count} of {total} tournaments"),
                    player.to_string(),
                );
            }
        }
    }

    report
}
