//! Deliverables computed from fitted ratings: win-probability matrices,
//! leaderboards, pairwise significance tests, tunability summaries and PCA
//! embeddings of tournaments.

use std::collections::{BTreeMap, BTreeSet};

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fit::{win_probability, EppResult};
use crate::model::{PlayerId, TournamentId};
use crate::special::two_sided_p;

/// Pairwise win probabilities `P[a][b] = invlogit(beta_a - beta_b)`.
///
/// Rows and columns follow `players`; the diagonal is exactly 0.5 and
/// opposite entries sum to 1.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbabilityMatrix {
    pub players: Vec<PlayerId>,
    pub p: Vec<Vec<f64>>,
}

impl ProbabilityMatrix {
    /// Renders a square CSV with a `player` label column.
    pub fn to_csv(&self) -> String {
        let mut writer = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["player".to_string()];
        header.extend(self.players.iter().map(|p| p.to_string()));
        writer.write_record(&header).expect("in-memory write");
        for (player, row) in self.players.iter().zip(&self.p) {
            let mut record = vec![player.to_string()];
            record.extend(row.iter().map(|v| v.to_string()));
            writer.write_record(&record).expect("in-memory write");
        }
        String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("utf-8")
    }
}

fn check_usable(result: &EppResult, force: bool) -> Result<()> {
    if result.converged || force {
        Ok(())
    } else {
        Err(Error::NotConverged)
    }
}

/// Win probabilities between every player pair of a fitted tournament.
///
/// Refuses an unconverged fit unless `force` is set.
pub fn probability_matrix(result: &EppResult, force: bool) -> Result<ProbabilityMatrix> {
    check_usable(result, force)?;
    let n = result.players.len();
    let mut p = vec![vec![0.5; n]; n];
    for a in 0..n {
        for b in 0..n {
            p[a][b] = win_probability(result.beta[a], result.beta[b])?;
        }
    }
    Ok(ProbabilityMatrix {
        players: result.players.clone(),
        p,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LeaderboardEntry {
    pub rank: usize,
    pub player: PlayerId,
    pub beta: f64,
    pub stderr: f64,
}

/// Ranks players by rating, best first.
///
/// Equal ratings share the smaller rank (competition ranking) and are listed
/// in player order. Refuses an unconverged fit unless `force` is set.
pub fn leaderboard(result: &EppResult, force: bool) -> Result<Vec<LeaderboardEntry>> {
    check_usable(result, force)?;
    let mut order: Vec<usize> = (0..result.players.len()).collect();
    order.sort_by(|&a, &b| {
        result.beta[b]
            .partial_cmp(&result.beta[a])
            .expect("finite ratings")
            .then_with(|| result.players[a].cmp(&result.players[b]))
    });
    let mut entries: Vec<LeaderboardEntry> = Vec::with_capacity(order.len());
    for (position, &k) in order.iter().enumerate() {
        let rank = match entries.last() {
            Some(prev) if prev.beta == result.beta[k] => prev.rank,
            _ => position + 1,
        };
        entries.push(LeaderboardEntry {
            rank,
            player: result.players[k].clone(),
            beta: result.beta[k],
            stderr: result.stderr[k],
        });
    }
    Ok(entries)
}

/// Renders `rank,player,beta,stderr` rows.
pub fn leaderboard_csv(entries: &[LeaderboardEntry]) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer
        .write_record(["rank", "player", "beta", "stderr"])
        .expect("in-memory write");
    for e in entries {
        writer
            .write_record([
                e.rank.to_string(),
                e.player.to_string(),
                e.beta.to_string(),
                e.stderr.to_string(),
            ])
            .expect("in-memory write");
    }
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("utf-8")
}

/// One pairwise comparison: the rating gap, the implied win probability, and
/// a Wald test of the gap against zero.
///
/// `z` and `p_value` are absent when the contrast variance is zero, which
/// happens exactly when a player is compared with itself.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    pub i: PlayerId,
    pub j: PlayerId,
    pub delta: f64,
    pub prob: f64,
    pub z: Option<f64>,
    pub p_value: Option<f64>,
}

impl Comparison {
    pub fn is_degenerate(&self) -> bool {
        self.z.is_none()
    }
}

/// Compares two players of one fitted tournament.
///
/// The Wald statistic is `delta / sqrt(var)` with
/// `var = cov_ii + cov_jj - 2 cov_ij`, the curvature-based variance of the
/// rating difference; the p-value is the two-sided normal tail.
pub fn compare(result: &EppResult, i: &PlayerId, j: &PlayerId) -> Result<Comparison> {
    let a = result
        .index_of(i)
        .ok_or_else(|| Error::UnknownPlayer(i.clone()))?;
    let b = result
        .index_of(j)
        .ok_or_else(|| Error::UnknownPlayer(j.clone()))?;
    let delta = result.beta[a] - result.beta[b];
    let prob = win_probability(result.beta[a], result.beta[b])?;
    let var = result.contrast_variance(a, b);
    let (z, p_value) = if var > 0.0 && var.is_finite() {
        let z = delta / var.sqrt();
        (Some(z), Some(two_sided_p(z)))
    } else {
        (None, None)
    };
    Ok(Comparison {
        i: i.clone(),
        j: j.clone(),
        delta,
        prob,
        z,
        p_value,
    })
}

/// Rating spread of one algorithm's hyperparameter settings within one
/// tournament. A wide spread means tuning the algorithm matters.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TunabilitySummary {
    pub tournament: TournamentId,
    pub algorithm: String,
    pub n_settings: usize,
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
    pub range: f64,
}

/// Quantile by linear interpolation between order statistics (the common
/// "type 7" rule): h = (n - 1) q, interpolate between floor(h) and ceil(h).
fn quantile(sorted: &[f64], q: f64) -> f64 {
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let h = (n - 1) as f64 * q;
    let lo = h.floor() as usize;
    let frac = h - lo as f64;
    if lo + 1 == n {
        sorted[lo]
    } else {
        sorted[lo] + frac * (sorted[lo + 1] - sorted[lo])
    }
}

/// Tunability grouped by the `algorithm` half of each player id.
pub fn tunability(results: &[EppResult]) -> Vec<TunabilitySummary> {
    tunability_by_algorithm(results, |p| p.algorithm.clone())
}

/// Tunability with a caller-chosen grouping label per player.
pub fn tunability_by_algorithm<F>(results: &[EppResult], label: F) -> Vec<TunabilitySummary>
where
    F: Fn(&PlayerId) -> String,
{
    let mut summaries = Vec::new();
    for result in results {
        let mut groups: BTreeMap<String, Vec<f64>> = BTreeMap::new();
        for (player, &beta) in result.players.iter().zip(&result.beta) {
            groups.entry(label(player)).or_default().push(beta);
        }
        for (algorithm, mut values) in groups {
            values.sort_by(|a, b| a.partial_cmp(b).expect("finite ratings"));
            summaries.push(TunabilitySummary {
                tournament: result.tournament.clone(),
                algorithm,
                n_settings: values.len(),
                min: values[0],
                q1: quantile(&values, 0.25),
                median: quantile(&values, 0.5),
                q3: quantile(&values, 0.75),
                max: values[values.len() - 1],
                range: values[values.len() - 1] - values[0],
            });
        }
    }
    summaries.sort_by(|a, b| (&a.tournament, &a.algorithm).cmp(&(&b.tournament, &b.algorithm)));
    summaries
}

/// Renders `tournament,algorithm,n_settings,min,q1,median,q3,max,range`.
pub fn tunability_csv(summaries: &[TunabilitySummary]) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer
        .write_record([
            "tournament",
            "algorithm",
            "n_settings",
            "min",
            "q1",
            "median",
            "q3",
            "max",
            "range",
        ])
        .expect("in-memory write");
    for s in summaries {
        writer
            .write_record([
                s.tournament.name().to_string(),
                s.algorithm.clone(),
                s.n_settings.to_string(),
                s.min.to_string(),
                s.q1.to_string(),
                s.median.to_string(),
                s.q3.to_string(),
                s.max.to_string(),
                s.range.to_string(),
            ])
            .expect("in-memory write");
    }
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("utf-8")
}

/// Tournaments x players grid of EPP ratings; `None` marks a player absent
/// from a tournament.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EppMatrix {
    pub tournaments: Vec<TournamentId>,
    pub players: Vec<PlayerId>,
    pub cells: Vec<Vec<Option<f64>>>,
}

impl EppMatrix {
    pub fn n_cells(&self) -> usize {
        self.tournaments.len() * self.players.len()
    }

    pub fn observed_cells(&self) -> usize {
        self.cells.iter().flatten().filter(|c| c.is_some()).count()
    }

    pub fn is_complete(&self) -> bool {
        self.cells.iter().flatten().all(|c| c.is_some())
    }

    /// Keeps only players rated in every tournament.
    pub fn complete_columns(&self) -> EppMatrix {
        let keep: Vec<usize> = (0..self.players.len())
            .filter(|&c| self.cells.iter().all(|row| row[c].is_some()))
            .collect();
        EppMatrix {
            tournaments: self.tournaments.clone(),
            players: keep.iter().map(|&c| self.players[c].clone()).collect(),
            cells: self
                .cells
                .iter()
                .map(|row| keep.iter().map(|&c| row[c]).collect())
                .collect(),
        }
    }

    /// Renders a tournaments x players CSV; absent cells are empty fields.
    pub fn to_csv(&self) -> String {
        let mut writer = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["tournament".to_string()];
        header.extend(self.players.iter().map(|p| p.to_string()));
        writer.write_record(&header).expect("in-memory write");
        for (tournament, row) in self.tournaments.iter().zip(&self.cells) {
            let mut record = vec![tournament.name().to_string()];
            record.extend(
                row.iter()
                    .map(|cell| cell.map(|v| v.to_string()).unwrap_or_default()),
            );
            writer.write_record(&record).expect("in-memory write");
        }
        String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("utf-8")
    }
}

/// Assembles per-tournament fits into one ratings grid over the union of
/// players, masking players a tournament never rated.
pub fn epp_matrix(results: &[EppResult]) -> Result<EppMatrix> {
    if results.is_empty() {
        return Err(Error::Shape("epp_matrix needs at least one result".into()));
    }
    let mut by_tournament: BTreeMap<&TournamentId, &EppResult> = BTreeMap::new();
    for r in results {
        if by_tournament.insert(&r.tournament, r).is_some() {
            return Err(Error::Shape(format!(
                "duplicate result for tournament '{}'",
                r.tournament
            )));
        }
    }
    let players: BTreeSet<&PlayerId> = results.iter().flat_map(|r| &r.players).collect();
    let players: Vec<PlayerId> = players.into_iter().cloned().collect();
    let mut tournaments = Vec::with_capacity(by_tournament.len());
    let mut cells = Vec::with_capacity(by_tournament.len());
    for (tournament, result) in by_tournament {
        tournaments.push(tournament.clone());
        cells.push(players.iter().map(|p| result.beta_of(p)).collect());
    }
    Ok(EppMatrix {
        tournaments,
        players,
        cells,
    })
}

/// Principal components of a complete EPP matrix.
///
/// `scores[r]` are the coordinates of tournament r; `loadings[c]` those of
/// player c; `explained_variance` is non-increasing. Columns of the loading
/// matrix are orthonormal, each oriented so its largest-magnitude entry is
/// positive.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmbeddingResult {
    pub row_labels: Vec<TournamentId>,
    pub col_labels: Vec<PlayerId>,
    #[serde(skip)]
    pub matrix: Vec<Vec<f64>>,
    pub scores: Vec<Vec<f64>>,
    pub loadings: Vec<Vec<f64>>,
    pub explained_variance: Vec<f64>,
}

/// PCA of the column-centered EPP matrix via singular value decomposition.
///
/// Scores are the row projections U * Sigma, loadings the right singular
/// vectors, and the variance of component c is sigma_c^2 / (rows - 1).
pub fn pca_embed(matrix: &EppMatrix, k: usize) -> Result<EmbeddingResult> {
    if !matrix.is_complete() {
        return Err(Error::IncompleteMatrix);
    }
    let rows = matrix.tournaments.len();
    let cols = matrix.players.len();
    if k == 0 || k > rows.min(cols) {
        return Err(Error::Shape(format!(
            "k = {k} components requested from a {rows} x {cols} matrix"
        )));
    }
    let dense = DMatrix::from_fn(rows, cols, |r, c| matrix.cells[r][c].expect("complete"));
    let mut centered = dense.clone();
    for c in 0..cols {
        let mean = dense.column(c).sum() / rows as f64;
        for r in 0..rows {
            centered[(r, c)] -= mean;
        }
    }

    let svd = centered.clone().svd(true, true);
    let u = svd.u.as_ref().expect("u requested");
    let v_t = svd.v_t.as_ref().expect("v_t requested");
    let sigma = &svd.singular_values;
    let mut order: Vec<usize> = (0..sigma.len()).collect();
    order.sort_by(|&a, &b| {
        sigma[b]
            .partial_cmp(&sigma[a])
            .expect("nonneg singular values")
    });

    let denominator = if rows > 1 { (rows - 1) as f64 } else { 1.0 };
    let mut scores = vec![vec![0.0; k]; rows];
    let mut loadings = vec![vec![0.0; k]; cols];
    let mut explained_variance = Vec::with_capacity(k);
    for (component, &s) in order.iter().take(k).enumerate() {
        // orient the component so its largest-magnitude loading is positive
        let mut anchor = 0;
        for c in 0..cols {
            if v_t[(s, c)].abs() > v_t[(s, anchor)].abs() {
                anchor = c;
            }
        }
        let flip = if v_t[(s, anchor)] < 0.0 { -1.0 } else { 1.0 };
        for r in 0..rows {
            scores[r][component] = flip * u[(r, s)] * sigma[s];
        }
        for c in 0..cols {
            loadings[c][component] = flip * v_t[(s, c)];
        }
        explained_variance.push(sigma[s] * sigma[s] / denominator);
    }

    Ok(EmbeddingResult {
        row_labels: matrix.tournaments.clone(),
        col_labels: matrix.players.clone(),
        matrix: (0..rows)
            .map(|r| (0..cols).map(|c| dense[(r, c)]).collect())
            .collect(),
        scores,
        loadings,
        explained_variance,
    })
}
