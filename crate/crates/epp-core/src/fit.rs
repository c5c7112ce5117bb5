//! Maximum-likelihood estimation of EPP ratings.
//!
//! Ratings follow the Bradley-Terry/logistic model: the log-odds that player
//! i beats player j is `beta_i - beta_j`, so with p = invlogit(beta_i -
//! beta_j) a pair with s wins for i and f for j contributes `s*log(p) +
//! f*log(1-p)` to the log-likelihood. The model is invariant under a common
//! shift of beta, so a constraint (mean zero, or a pinned reference player)
//! makes the solution unique per tournament.
//!
//! The optimizer is Newton-Raphson with step-halving on the concave
//! (optionally ridge-penalized) log-likelihood, working on aggregated pair
//! counts so cost scales with pairs, not comparisons.

use std::collections::{BTreeMap, BTreeSet};

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{PairCounts, PlayerId, TournamentId};

/// |beta| beyond this is treated as numerically infinite; invlogit(30)
/// differs from 1 by about 1e-13.
const SEPARATION_BETA: f64 = 30.0;

const MAX_HALVINGS: u32 = 30;

/// Identifiability constraint for one tournament's ratings.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub enum Constraint {
    /// Ratings sum to zero; a rating of 0 is the tournament average.
    #[default]
    MeanZero,
    /// The named player's rating is fixed at 0.
    Reference(PlayerId),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitConfig {
    pub constraint: Constraint,
    /// L2 penalty coefficient; 0 keeps the exact maximum-likelihood fit.
    pub ridge: f64,
    /// Convergence threshold on the constrained gradient norm.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for FitConfig {
    fn default() -> Self {
        FitConfig {
            constraint: Constraint::MeanZero,
            ridge: 0.0,
            tol: 1e-8,
            max_iter: 100,
        }
    }
}

/// One aggregated pair in design form: coefficient +1 on player `i`,
/// -1 on player `j`, with `successes` wins for `i` and `failures` for `j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DesignRow {
    pub i: usize,
    pub j: usize,
    pub successes: f64,
    pub failures: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FitWarning {
    NotConverged,
    Separated,
}

/// A fitted tournament: EPP scores with uncertainty and diagnostics.
///
/// `beta[k]`, `stderr[k]` and the covariance row/column k belong to
/// `players[k]`; `players` is sorted. The covariance is the constrained
/// curvature-based estimate, so rating contrasts are its supported use:
/// `var(beta_a - beta_b) = cov_aa + cov_bb - 2 cov_ab`.
#[derive(Debug, Clone, Serialize)]
pub struct EppResult {
    pub tournament: TournamentId,
    pub players: Vec<PlayerId>,
    pub beta: Vec<f64>,
    pub stderr: Vec<f64>,
    #[serde(skip)]
    pub covariance: DMatrix<f64>,
    pub loglik: f64,
    pub converged: bool,
    pub iterations: usize,
    pub separated_players: Vec<PlayerId>,
    pub warnings: Vec<FitWarning>,
}

impl EppResult {
    pub fn index_of(&self, player: &PlayerId) -> Option<usize> {
        self.players.binary_search(player).ok()
    }

    pub fn beta_of(&self, player: &PlayerId) -> Option<f64> {
        self.index_of(player).map(|k| self.beta[k])
    }

    /// Variance of the rating difference `beta_a - beta_b`; identical under
    /// either constraint because contrasts are shift-invariant.
    pub fn contrast_variance(&self, a: usize, b: usize) -> f64 {
        self.covariance[(a, a)] + self.covariance[(b, b)] - 2.0 * self.covariance[(a, b)]
    }
}

/// Overflow-safe invlogit: exp(d)/(1+exp(d)).
fn invlogit(d: f64) -> f64 {
    if d >= 0.0 {
        1.0 / (1.0 + (-d).exp())
    } else {
        let e = d.exp();
        e / (1.0 + e)
    }
}

/// log(invlogit(x)), finite for all finite x.
fn log_sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        -(-x).exp().ln_1p()
    } else {
        x - x.exp().ln_1p()
    }
}

/// Probability that a player rated `beta_i` beats one rated `beta_j`.
pub fn win_probability(beta_i: f64, beta_j: f64) -> Result<f64> {
    if !beta_i.is_finite() || !beta_j.is_finite() {
        return Err(Error::Domain(format!(
            "win_probability requires finite ratings, got ({beta_i}, {beta_j})"
        )));
    }
    Ok(invlogit(beta_i - beta_j))
}

fn check_rows(beta: &[f64], rows: &[DesignRow]) -> Result<()> {
    for row in rows {
        if row.i >= beta.len() || row.j >= beta.len() || row.i == row.j {
            return Err(Error::Shape(format!(
                "design row ({}, {}) out of range for {} players",
                row.i,
                row.j,
                beta.len()
            )));
        }
        if !(row.successes >= 0.0 && row.failures >= 0.0)
            || !row.successes.is_finite()
            || !row.failures.is_finite()
        {
            return Err(Error::Domain(format!(
                "win counts must be finite and >= 0, got ({}, {})",
                row.successes, row.failures
            )));
        }
    }
    Ok(())
}

/// Ridge-penalized binomial log-likelihood of `beta` given the design rows.
pub fn log_likelihood(beta: &[f64], rows: &[DesignRow], ridge: f64) -> Result<f64> {
    check_rows(beta, rows)?;
    let mut ll = 0.0;
    for row in rows {
        let d = beta[row.i] - beta[row.j];
        ll += row.successes * log_sigmoid(d) + row.failures * log_sigmoid(-d);
    }
    if ridge > 0.0 {
        ll -= 0.5 * ridge * beta.iter().map(|b| b * b).sum::<f64>();
    }
    Ok(ll)
}

/// Gradient of [`log_likelihood`] in `beta`.
pub fn gradient(beta: &[f64], rows: &[DesignRow], ridge: f64) -> Result<Vec<f64>> {
    check_rows(beta, rows)?;
    let mut g = vec![0.0; beta.len()];
    for row in rows {
        let n = row.successes + row.failures;
        let p = invlogit(beta[row.i] - beta[row.j]);
        let resid = row.successes - n * p;
        g[row.i] += resid;
        g[row.j] -= resid;
    }
    if ridge > 0.0 {
        for (gk, bk) in g.iter_mut().zip(beta) {
            *gk -= ridge * bk;
        }
    }
    Ok(g)
}

/// Hessian of [`log_likelihood`] in `beta`; symmetric and negative
/// semidefinite (negative definite for ridge > 0).
pub fn hessian(beta: &[f64], rows: &[DesignRow], ridge: f64) -> Result<DMatrix<f64>> {
    check_rows(beta, rows)?;
    let n = beta.len();
    let mut h = DMatrix::zeros(n, n);
    for row in rows {
        let count = row.successes + row.failures;
        let p = invlogit(beta[row.i] - beta[row.j]);
        let w = count * p * (1.0 - p);
        h[(row.i, row.i)] -= w;
        h[(row.j, row.j)] -= w;
        h[(row.i, row.j)] += w;
        h[(row.j, row.i)] += w;
    }
    if ridge > 0.0 {
        for k in 0..n {
            h[(k, k)] -= ridge;
        }
    }
    Ok(h)
}

/// Working parameterization: either one coordinate pinned to zero (dropped
/// from the free vector) or the full space.
#[derive(Clone, Copy)]
enum Mode {
    Pinned(usize),
    Full,
}

impl Mode {
    fn free_dim(self, n: usize) -> usize {
        match self {
            Mode::Pinned(_) => n - 1,
            Mode::Full => n,
        }
    }

    /// Full-space index of free coordinate `c`.
    fn full_index(self, c: usize) -> usize {
        match self {
            Mode::Pinned(pin) if c >= pin => c + 1,
            _ => c,
        }
    }
}

fn reduce_vec(full: &[f64], mode: Mode) -> DVector<f64> {
    let m = mode.free_dim(full.len());
    DVector::from_fn(m, |c, _| full[mode.full_index(c)])
}

fn reduce_mat(full: &DMatrix<f64>, mode: Mode) -> DMatrix<f64> {
    let m = mode.free_dim(full.nrows());
    DMatrix::from_fn(m, m, |r, c| full[(mode.full_index(r), mode.full_index(c))])
}

/// Newton ascent direction: solves (-H) d = g, falling back to the gradient
/// when the curvature matrix is numerically singular or indefinite.
fn ascent_direction(neg_h: &DMatrix<f64>, g: &DVector<f64>) -> DVector<f64> {
    if let Some(chol) = neg_h.clone().cholesky() {
        let d = chol.solve(g);
        if d.iter().all(|x| x.is_finite()) {
            return d;
        }
    }
    if let Some(d) = neg_h.clone().lu().solve(g) {
        if d.iter().all(|x| x.is_finite()) && d.dot(g) > 0.0 {
            return d;
        }
    }
    g.clone()
}

struct NewtonOutcome {
    beta: Vec<f64>,
    converged: bool,
    iterations: usize,
    /// Accepted log-likelihood after each iteration, starting at beta = 0.
    #[allow(dead_code)]
    ll_trace: Vec<f64>,
}

fn newton(rows: &[DesignRow], n: usize, mode: Mode, config: &FitConfig) -> Result<NewtonOutcome> {
    let mut beta = vec![0.0; n];
    let mut ll = log_likelihood(&beta, rows, config.ridge)?;
    let mut ll_trace = vec![ll];
    let mut iterations = 0;
    let converged = loop {
        let g = reduce_vec(&gradient(&beta, rows, config.ridge)?, mode);
        if g.norm() < config.tol {
            break true;
        }
        if iterations >= config.max_iter {
            break false;
        }
        iterations += 1;
        let neg_h = -reduce_mat(&hessian(&beta, rows, config.ridge)?, mode);
        let dir = ascent_direction(&neg_h, &g);
        // once the predicted gain drops below the resolution of the
        // likelihood value, the acceptance test is blind; take the plain
        // step so the gradient can keep contracting
        let predicted = 0.5 * g.dot(&dir);
        if predicted <= 4.0 * f64::EPSILON * (1.0 + ll.abs()) {
            for (c, d) in dir.iter().enumerate() {
                beta[mode.full_index(c)] += d;
            }
            ll = log_likelihood(&beta, rows, config.ridge)?;
            ll_trace.push(ll);
            continue;
        }
        let mut step = 1.0;
        let mut accepted = false;
        for _ in 0..=MAX_HALVINGS {
            let mut cand = beta.clone();
            for (c, d) in dir.iter().enumerate() {
                cand[mode.full_index(c)] += step * d;
            }
            let cand_ll = log_likelihood(&cand, rows, config.ridge)?;
            if cand_ll >= ll {
                beta = cand;
                ll = cand_ll;
                ll_trace.push(ll);
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            // no step improves the likelihood at this resolution
            break false;
        }
    };
    Ok(NewtonOutcome {
        beta,
        converged,
        iterations,
        ll_trace,
    })
}

fn center(beta: &mut [f64]) {
    let n = beta.len() as f64;
    // second pass removes the rounding residue of the first
    for _ in 0..2 {
        let mean = beta.iter().sum::<f64>() / n;
        for b in beta.iter_mut() {
            *b -= mean;
        }
    }
}

/// Inverse of the reduced negative Hessian, degrading gracefully to a
/// pseudo-inverse when the curvature has collapsed (separation).
fn invert_curvature(neg_h: &DMatrix<f64>) -> DMatrix<f64> {
    let m = neg_h.nrows();
    if let Some(chol) = neg_h.clone().cholesky() {
        let inv = chol.inverse();
        if inv.iter().all(|x| x.is_finite()) {
            return inv;
        }
    }
    if let Some(inv) = neg_h.clone().try_inverse() {
        if inv.iter().all(|x| x.is_finite()) {
            return inv;
        }
    }
    neg_h
        .clone()
        .svd(true, true)
        .pseudo_inverse(1e-12)
        .unwrap_or_else(|_| DMatrix::zeros(m, m))
}

/// Maps the reduced covariance back to the full player space.
///
/// For a reference constraint the pinned row and column are exactly zero.
/// For mean-zero the constrained estimate is `C E beta_free` with C the
/// centering projection and E the pinned embedding, so the covariance maps
/// through A = C E.
fn expand_covariance(
    cov_red: &DMatrix<f64>,
    n: usize,
    pin: usize,
    mean_zero: bool,
) -> DMatrix<f64> {
    let mode = Mode::Pinned(pin);
    if !mean_zero {
        let mut full = DMatrix::zeros(n, n);
        for r in 0..n - 1 {
            for c in 0..n - 1 {
                full[(mode.full_index(r), mode.full_index(c))] = cov_red[(r, c)];
            }
        }
        return full;
    }
    let a = DMatrix::from_fn(n, n - 1, |r, c| {
        let hit = if mode.full_index(c) == r { 1.0 } else { 0.0 };
        hit - 1.0 / n as f64
    });
    let mut cov = &a * cov_red * a.transpose();
    // symmetrize away inversion round-off
    for r in 0..n {
        for c in 0..r {
            let s = 0.5 * (cov[(r, c)] + cov[(c, r)]);
            cov[(r, c)] = s;
            cov[(c, r)] = s;
        }
    }
    cov
}

fn connected_components(n: usize, rows: &[DesignRow]) -> Vec<Vec<usize>> {
    let mut adjacency = vec![Vec::new(); n];
    for row in rows {
        adjacency[row.i].push(row.j);
        adjacency[row.j].push(row.i);
    }
    let mut seen = vec![false; n];
    let mut components = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut component = vec![start];
        seen[start] = true;
        let mut queue = vec![start];
        while let Some(k) = queue.pop() {
            for &next in &adjacency[k] {
                if !seen[next] {
                    seen[next] = true;
                    component.push(next);
                    queue.push(next);
                }
            }
        }
        component.sort_unstable();
        components.push(component);
    }
    components
}

/// Fits EPP ratings for one tournament's pair counts.
///
/// Players with every comparison won (or lost) have no finite maximum under a
/// pure likelihood; they and any player pushed past |beta| = 30 are reported
/// in `separated_players` with a [`FitWarning::Separated`] flag, and all
/// outputs stay finite.
pub fn fit_epp(counts: &[PairCounts], config: &FitConfig) -> Result<EppResult> {
    if !(config.tol > 0.0) {
        return Err(Error::Domain(format!(
            "tol must be > 0, got {}",
            config.tol
        )));
    }
    if !(config.ridge >= 0.0) || !config.ridge.is_finite() {
        return Err(Error::Domain(format!(
            "ridge must be finite and >= 0, got {}",
            config.ridge
        )));
    }
    if config.max_iter == 0 {
        return Err(Error::Domain("max_iter must be >= 1".into()));
    }

    let active: Vec<&PairCounts> = counts.iter().filter(|c| c.total() > 0.0).collect();
    let mut players = BTreeSet::new();
    for c in &active {
        if c.tournament != active[0].tournament {
            return Err(Error::Shape(format!(
                "pair counts span tournaments '{}' and '{}'",
                active[0].tournament, c.tournament
            )));
        }
        players.insert(c.i.clone());
        players.insert(c.j.clone());
    }
    let players: Vec<PlayerId> = players.into_iter().collect();
    let n = players.len();
    if n < 2 {
        return Err(Error::TooFewPlayers(format!(
            "a tournament needs at least 2 players with comparisons, found {n}"
        )));
    }
    let tournament = active[0].tournament.clone();
    let index: BTreeMap<&PlayerId, usize> = players.iter().zip(0..).collect();
    let rows: Vec<DesignRow> = active
        .iter()
        .map(|c| DesignRow {
            i: index[&c.i],
            j: index[&c.j],
            successes: c.wins_i,
            failures: c.wins_j,
        })
        .collect();

    let components = connected_components(n, &rows);
    if components.len() > 1 {
        return Err(Error::DisconnectedGraph(
            components
                .into_iter()
                .map(|c| c.into_iter().map(|k| players[k].clone()).collect())
                .collect(),
        ));
    }

    let (mode, mean_zero) = match &config.constraint {
        Constraint::Reference(player) => match index.get(player) {
            Some(&r) => (Mode::Pinned(r), false),
            None => return Err(Error::UnknownPlayer(player.clone())),
        },
        // with a ridge the penalized optimum already has mean zero, so the
        // full space is usable; without one a coordinate must be pinned
        Constraint::MeanZero if config.ridge > 0.0 => (Mode::Full, true),
        Constraint::MeanZero => (Mode::Pinned(n - 1), true),
    };

    let outcome = newton(&rows, n, mode, config)?;
    let mut beta = outcome.beta;
    if mean_zero {
        center(&mut beta);
    }
    let loglik = log_likelihood(&beta, &rows, config.ridge)?;

    let cov_pin = match mode {
        Mode::Pinned(pin) => pin,
        Mode::Full => n - 1,
    };
    let neg_h_red = -reduce_mat(&hessian(&beta, &rows, config.ridge)?, Mode::Pinned(cov_pin));
    let covariance = expand_covariance(&invert_curvature(&neg_h_red), n, cov_pin, mean_zero);
    let stderr: Vec<f64> = (0..n).map(|k| covariance[(k, k)].max(0.0).sqrt()).collect();

    let mut separated: BTreeSet<usize> = beta
        .iter()
        .enumerate()
        .filter(|(_, b)| b.abs() > SEPARATION_BETA)
        .map(|(k, _)| k)
        .collect();
    if config.ridge == 0.0 {
        // a player with zero losses (or zero wins) has no finite optimum,
        // whatever beta the iteration cap left it at
        let mut wins = vec![0.0; n];
        let mut losses = vec![0.0; n];
        for row in &rows {
            wins[row.i] += row.successes;
            losses[row.i] += row.failures;
            wins[row.j] += row.failures;
            losses[row.j] += row.successes;
        }
        for k in 0..n {
            if wins[k] == 0.0 || losses[k] == 0.0 {
                separated.insert(k);
            }
        }
    }
    let separated_players: Vec<PlayerId> = separated.iter().map(|&k| players[k].clone()).collect();

    let mut warnings = Vec::new();
    if !outcome.converged {
        warnings.push(FitWarning::NotConverged);
    }
    if !separated_players.is_empty() {
        warnings.push(FitWarning::Separated);
    }

    Ok(EppResult {
        tournament,
        players,
        beta,
        stderr,
        covariance,
        loglik,
        converged: outcome.converged,
        iterations: outcome.iterations,
        separated_players,
        warnings,
    })
}
