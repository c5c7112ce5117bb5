//! Command-line pipeline for rating predictive models from per-split scores.
//!
//! Exit codes: 0 on success, 2 for input problems (unreadable files, parse
//! and validation failures, bad flags), 3 for computation problems
//! (disconnected comparison graphs, unknown reference players, fits the
//! caller required to converge, incomplete rating matrices).

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use epp_core::{
    compare, comparison_census, epp_matrix, fit_epp, generate_matches, generate_score_table,
    leaderboard, leaderboard_csv, orient_scores, pair_counts_csv, parse_score_table, pca_embed,
    probability_matrix, run_sequential, validate, Comparison, Constraint, EloConfig, EppResult,
    FitConfig, MatchConfig, MatchOutcome, Orientation, PairCounts, PlayerId, Sampler, Scheme,
    ScoreTable, SynthConfig, TableFormat, TiePolicy, TournamentId,
};

const PERMUTE_SALT: u64 = 0x9E37_79B9_7F4A_7C15;
const SUMMARY_ROWS: usize = 10;

/// Rate predictive models from per-split benchmark scores.
#[derive(Parser)]
#[command(name = "epp", version, propagate_version = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fit a rating per player for each tournament and write results plus a census
    Rate(RateArgs),
    /// Write the pairwise win-probability matrix for each tournament
    Probs(ProbsArgs),
    /// Test the rating gap between two players of one tournament
    Compare(CompareArgs),
    /// Run classic sequential Elo over a chronological match list
    Elo(EloArgs),
    /// Embed tournaments by PCA of the tournament-by-player rating matrix
    Embed(EmbedArgs),
    /// Generate a synthetic score table with known ratings
    Simulate(SimulateArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum SchemeArg {
    /// Compare every split of one player against every split of the other
    Cross,
    /// Compare only identical split indices
    Same,
}

#[derive(Clone, Copy, ValueEnum)]
enum TiesArg {
    /// Drop tied comparisons
    Ignore,
    /// Credit half a win to each side
    Half,
}

#[derive(Clone, Copy, ValueEnum)]
enum OrientationArg {
    /// Larger scores are better (accuracy, AUC)
    Higher,
    /// Smaller scores are better (loss, error rate)
    Lower,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Args)]
struct FitFlags {
    /// Split-pairing scheme for building matches
    #[arg(long, value_enum, default_value_t = SchemeArg::Cross)]
    scheme: SchemeArg,
    /// Tie handling
    #[arg(long, value_enum, default_value_t = TiesArg::Half)]
    ties: TiesArg,
    /// Identifiability constraint: mean-zero or reference=<algorithm>:<hyperparam_set>
    #[arg(long, default_value = "mean-zero", value_parser = parse_constraint)]
    constraint: Constraint,
    /// L2 penalty on the ratings
    #[arg(long, default_value_t = 0.0)]
    ridge: f64,
    /// Convergence tolerance on the gradient norm
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    /// Iteration cap for the fitter
    #[arg(long, default_value_t = 100)]
    max_iter: usize,
    /// Score direction of the input table
    #[arg(long, value_enum, default_value_t = OrientationArg::Higher)]
    orientation: OrientationArg,
}

impl FitFlags {
    fn match_config(&self) -> MatchConfig {
        MatchConfig {
            scheme: match self.scheme {
                SchemeArg::Cross => Scheme::CrossSplit,
                SchemeArg::Same => Scheme::SameSplit,
            },
            tie_policy: match self.ties {
                TiesArg::Ignore => TiePolicy::Ignore,
                TiesArg::Half => TiePolicy::HalfWin,
            },
        }
    }

    fn fit_config(&self) -> FitConfig {
        FitConfig {
            constraint: self.constraint.clone(),
            ridge: self.ridge,
            tol: self.tol,
            max_iter: self.max_iter,
        }
    }
}

#[derive(Args)]
struct IoArgs {
    /// Directory artifacts are written into (created if missing)
    #[arg(long, default_value = ".")]
    output: PathBuf,
    /// Format of written artifacts
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
}

#[derive(Args)]
struct RateArgs {
    /// Score table, read as CSV unless the extension is .json
    input: PathBuf,
    #[command(flatten)]
    fit: FitFlags,
    #[command(flatten)]
    io: IoArgs,
    /// Also write pair_counts.csv with the match-level win counts
    #[arg(long)]
    audit: bool,
}

#[derive(Args)]
struct ProbsArgs {
    /// Score table, read as CSV unless the extension is .json
    input: PathBuf,
    #[command(flatten)]
    fit: FitFlags,
    #[command(flatten)]
    io: IoArgs,
    /// Emit matrices even for fits that did not converge
    #[arg(long)]
    force: bool,
}

#[derive(Args)]
struct CompareArgs {
    /// Score table, read as CSV unless the extension is .json
    input: PathBuf,
    /// First player as <algorithm>:<hyperparam_set>
    player_i: PlayerId,
    /// Second player as <algorithm>:<hyperparam_set>
    player_j: PlayerId,
    /// Tournament to compare within (required when the table has several)
    #[arg(long)]
    tournament: Option<String>,
    #[command(flatten)]
    fit: FitFlags,
    #[command(flatten)]
    io: IoArgs,
}

#[derive(Args)]
struct EloArgs {
    /// Match list CSV with header algorithm_i,hyperparam_set_i,algorithm_j,hyperparam_set_j,outcome
    input: PathBuf,
    /// Rating every player starts from
    #[arg(long, default_value_t = 1500.0)]
    initial_rating: f64,
    /// Step size of one rating update
    #[arg(long, default_value_t = 32.0)]
    k_factor: f64,
    /// Rating gap at which expected odds are 10:1
    #[arg(long, default_value_t = 400.0)]
    scale: f64,
    #[command(flatten)]
    io: IoArgs,
}

#[derive(Args)]
struct EmbedArgs {
    /// Score table, read as CSV unless the extension is .json
    input: PathBuf,
    /// Number of principal components
    #[arg(long, default_value_t = 2)]
    components: usize,
    #[command(flatten)]
    fit: FitFlags,
    /// Directory embedding.json is written into (created if missing)
    #[arg(long, default_value = ".")]
    output: PathBuf,
}

#[derive(Args)]
struct SimulateArgs {
    /// Number of players
    #[arg(long, default_value_t = 10)]
    players: usize,
    /// Number of tournaments; later tournaments permute the rating assignment
    #[arg(long, default_value_t = 1)]
    tournaments: u32,
    /// Splits per player and tournament
    #[arg(long, default_value_t = 20)]
    splits: u32,
    /// Standard deviation of the score noise
    #[arg(long, default_value_t = 0.5)]
    noise: f64,
    /// RNG seed; the same seed always yields the same table
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[command(flatten)]
    io: IoArgs,
}

enum CliError {
    Input(String),
    Compute(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Compute(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::Compute(m) => m,
        }
    }
}

fn classify(e: epp_core::Error) -> CliError {
    use epp_core::Error;
    match e {
        Error::DisconnectedGraph(_)
        | Error::NotConverged
        | Error::UnknownPlayer(_)
        | Error::IncompleteMatrix => CliError::Compute(e.to_string()),
        _ => CliError::Input(e.to_string()),
    }
}

fn parse_constraint(raw: &str) -> Result<Constraint, String> {
    if raw == "mean-zero" {
        return Ok(Constraint::MeanZero);
    }
    if let Some(player) = raw.strip_prefix("reference=") {
        return player
            .parse::<PlayerId>()
            .map(Constraint::Reference)
            .map_err(|e| e.to_string());
    }
    Err(format!(
        "expected mean-zero or reference=<algorithm>:<hyperparam_set>, got {raw}"
    ))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Rate(args) => cmd_rate(args),
        Command::Probs(args) => cmd_probs(args),
        Command::Compare(args) => cmd_compare(args),
        Command::Elo(args) => cmd_elo(args),
        Command::Embed(args) => cmd_embed(args),
        Command::Simulate(args) => cmd_simulate(args),
    }
}

fn read_score_table(path: &Path, orientation: OrientationArg) -> Result<ScoreTable, CliError> {
    let bytes = fs::read(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let format = match path.extension().and_then(|e| e.to_str()) {
        Some("json") => TableFormat::Json,
        _ => TableFormat::Csv,
    };
    let table = parse_score_table(&bytes, format).map_err(classify)?;
    let table = match orientation {
        OrientationArg::Higher => table,
        OrientationArg::Lower => table.with_orientation(Orientation::LowerBetter),
    };
    let report = validate(&table);
    for issue in report.warnings() {
        eprintln!("{issue}");
    }
    if report.has_errors() {
        let messages: Vec<String> = report.errors().map(|i| i.to_string()).collect();
        return Err(CliError::Input(messages.join("; ")));
    }
    Ok(orient_scores(table))
}

struct FitOutput {
    counts: Vec<PairCounts>,
    fits: Vec<EppResult>,
}

fn fit_all(table: &ScoreTable, flags: &FitFlags) -> Result<FitOutput, CliError> {
    let counts = generate_matches(table, flags.match_config());
    let config = flags.fit_config();
    let mut groups: BTreeMap<&TournamentId, Vec<PairCounts>> = BTreeMap::new();
    for c in &counts {
        groups.entry(&c.tournament).or_default().push(c.clone());
    }
    let mut fits = Vec::new();
    for group in groups.values() {
        let fit = fit_epp(group, &config).map_err(classify)?;
        report_fit_warnings(&fit);
        fits.push(fit);
    }
    Ok(FitOutput { counts, fits })
}

fn report_fit_warnings(fit: &EppResult) {
    if !fit.converged {
        eprintln!(
            "warning: tournament {}: fit stopped after {} iterations without converging",
            fit.tournament.name(),
            fit.iterations
        );
    }
    if !fit.separated_players.is_empty() {
        let names: Vec<String> = fit
            .separated_players
            .iter()
            .map(|p| p.to_string())
            .collect();
        eprintln!(
            "warning: tournament {}: perfect separation for {}",
            fit.tournament.name(),
            names.join(", ")
        );
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    let mut rendered = serde_json::to_string_pretty(value).expect("serializable artifact");
    rendered.push('\n');
    rendered
}

fn write_artifact(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, CliError> {
    let io_err = |e: &dyn std::fmt::Display| CliError::Input(format!("{}: {e}", dir.display()));
    fs::create_dir_all(dir).map_err(|e| io_err(&e))?;
    let mut tmp = tempfile::Builder::new()
        .prefix(".epp-")
        .tempfile_in(dir)
        .map_err(|e| io_err(&e))?;
    tmp.write_all(contents.as_bytes()).map_err(|e| io_err(&e))?;
    let path = dir.join(name);
    tmp.persist(&path)
        .map_err(|e| CliError::Input(format!("{}: {}", path.display(), e.error)))?;
    Ok(path)
}

/// Maps a tournament name onto a unique filesystem-safe file stem.
fn artifact_stem(name: &str, used: &mut BTreeSet<String>) -> String {
    let base: String = name
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.') {
                c
            } else {
                '_'
            }
        })
        .collect();
    let base = if base.is_empty() {
        "tournament".to_string()
    } else {
        base
    };
    let mut stem = base.clone();
    let mut k = 2;
    while !used.insert(stem.clone()) {
        stem = format!("{base}-{k}");
        k += 1;
    }
    stem
}

fn print_fit_summary(fit: &EppResult, path: &Path) {
    let status = if fit.converged {
        format!("converged in {} iterations", fit.iterations)
    } else {
        format!("stopped after {} iterations", fit.iterations)
    };
    println!(
        "tournament {}: {} players, {}, log-likelihood {:.4} -> {}",
        fit.tournament.name(),
        fit.players.len(),
        status,
        fit.loglik,
        path.display()
    );
    let entries = leaderboard(fit, true).expect("forced leaderboard");
    println!("{:>4}  {:<28} {:>10} {:>10}", "rank", "player", "epp", "se");
    for e in entries.iter().take(SUMMARY_ROWS) {
        println!(
            "{:>4}  {:<28} {:>10.4} {:>10.4}",
            e.rank,
            e.player.to_string(),
            e.beta,
            e.stderr
        );
    }
    if entries.len() > SUMMARY_ROWS {
        println!("      (+{} more)", entries.len() - SUMMARY_ROWS);
    }
}

fn cmd_rate(args: RateArgs) -> Result<(), CliError> {
    let table = read_score_table(&args.input, args.fit.orientation)?;
    let census = comparison_census(&table, args.fit.match_config());
    let out = fit_all(&table, &args.fit)?;
    let mut used = BTreeSet::new();
    for fit in &out.fits {
        let stem = artifact_stem(fit.tournament.name(), &mut used);
        let path = match args.io.format {
            FormatArg::Json => {
                write_artifact(&args.io.output, &format!("{stem}.epp.json"), &to_json(fit))?
            }
            FormatArg::Csv => {
                let entries = leaderboard(fit, true).map_err(classify)?;
                write_artifact(
                    &args.io.output,
                    &format!("{stem}.epp.csv"),
                    &leaderboard_csv(&entries),
                )?
            }
        };
        print_fit_summary(fit, &path);
    }
    let census_path = write_artifact(&args.io.output, "census.json", &to_json(&census))?;
    println!(
        "census: {} records, {} tournaments, {} comparisons -> {}",
        census.score_records,
        census.tournaments.len(),
        census.total_comparisons(),
        census_path.display()
    );
    if args.audit {
        let audit_path = write_artifact(
            &args.io.output,
            "pair_counts.csv",
            &pair_counts_csv(&out.counts, args.fit.match_config().tie_policy),
        )?;
        println!(
            "audit: {} pairs -> {}",
            out.counts.len(),
            audit_path.display()
        );
    }
    Ok(())
}

fn cmd_probs(args: ProbsArgs) -> Result<(), CliError> {
    let table = read_score_table(&args.input, args.fit.orientation)?;
    let out = fit_all(&table, &args.fit)?;
    let mut used = BTreeSet::new();
    for fit in &out.fits {
        let matrix = probability_matrix(fit, args.force).map_err(classify)?;
        let stem = artifact_stem(fit.tournament.name(), &mut used);
        let path = match args.io.format {
            FormatArg::Json => write_artifact(
                &args.io.output,
                &format!("{stem}.probs.json"),
                &to_json(&matrix),
            )?,
            FormatArg::Csv => write_artifact(
                &args.io.output,
                &format!("{stem}.probs.csv"),
                &matrix.to_csv(),
            )?,
        };
        println!(
            "tournament {}: {n}x{n} win-probability matrix -> {}",
            fit.tournament.name(),
            path.display(),
            n = matrix.players.len()
        );
    }
    Ok(())
}

#[derive(serde::Serialize)]
struct CompareArtifact<'a> {
    tournament: &'a str,
    #[serde(flatten)]
    comparison: &'a Comparison,
}

fn compare_csv(tournament: &str, c: &Comparison) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer
        .write_record([
            "tournament",
            "player_i",
            "player_j",
            "delta",
            "prob",
            "z",
            "p_value",
        ])
        .expect("in-memory write");
    writer
        .write_record([
            tournament.to_string(),
            c.i.to_string(),
            c.j.to_string(),
            c.delta.to_string(),
            c.prob.to_string(),
            c.z.map(|v| v.to_string()).unwrap_or_default(),
            c.p_value.map(|v| v.to_string()).unwrap_or_default(),
        ])
        .expect("in-memory write");
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("utf-8")
}

fn select_tournament<'a>(
    fits: &'a [EppResult],
    wanted: Option<&str>,
) -> Result<&'a EppResult, CliError> {
    match wanted {
        Some(name) => fits
            .iter()
            .find(|f| f.tournament.name() == name)
            .ok_or_else(|| {
                let known: Vec<&str> = fits.iter().map(|f| f.tournament.name()).collect();
                CliError::Input(format!(
                    "tournament {name} not found; table has {}",
                    known.join(", ")
                ))
            }),
        None if fits.len() == 1 => Ok(&fits[0]),
        None if fits.is_empty() => Err(CliError::Input(
            "no tournaments survived match generation".into(),
        )),
        None => Err(CliError::Input(format!(
            "table has {} tournaments; pass --tournament",
            fits.len()
        ))),
    }
}

fn cmd_compare(args: CompareArgs) -> Result<(), CliError> {
    let table = read_score_table(&args.input, args.fit.orientation)?;
    let out = fit_all(&table, &args.fit)?;
    let fit = select_tournament(&out.fits, args.tournament.as_deref())?;
    let comparison = compare(fit, &args.player_i, &args.player_j).map_err(classify)?;
    let artifact = CompareArtifact {
        tournament: fit.tournament.name(),
        comparison: &comparison,
    };
    let path = match args.io.format {
        FormatArg::Json => write_artifact(&args.io.output, "compare.json", &to_json(&artifact))?,
        FormatArg::Csv => write_artifact(
            &args.io.output,
            "compare.csv",
            &compare_csv(fit.tournament.name(), &comparison),
        )?,
    };
    let test = match (comparison.z, comparison.p_value) {
        (Some(z), Some(p)) => format!("z = {z:.3}, p = {p:.4}"),
        _ => "degenerate contrast".to_string(),
    };
    println!(
        "P({} beats {}) = {:.4} (gap {:+.4}, {test}) -> {}",
        comparison.i,
        comparison.j,
        comparison.prob,
        comparison.delta,
        path.display()
    );
    Ok(())
}

#[derive(serde::Deserialize)]
struct MatchRow {
    algorithm_i: String,
    hyperparam_set_i: String,
    algorithm_j: String,
    hyperparam_set_j: String,
    outcome: String,
}

fn read_match_list(path: &Path) -> Result<Vec<(PlayerId, PlayerId, MatchOutcome)>, CliError> {
    let bytes = fs::read(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let mut reader = csv::Reader::from_reader(bytes.as_slice());
    let mut matches = Vec::new();
    for (idx, row) in reader.deserialize::<MatchRow>().enumerate() {
        let line = idx + 2;
        let row = row.map_err(|e| CliError::Input(format!("line {line}: {e}")))?;
        let outcome = match row.outcome.as_str() {
            "win_i" => MatchOutcome::WinI,
            "win_j" => MatchOutcome::WinJ,
            "tie" => MatchOutcome::Tie,
            other => {
                return Err(CliError::Input(format!(
                    "line {line}: unknown outcome {other}; expected win_i, win_j or tie"
                )))
            }
        };
        matches.push((
            PlayerId::new(row.algorithm_i, row.hyperparam_set_i),
            PlayerId::new(row.algorithm_j, row.hyperparam_set_j),
            outcome,
        ));
    }
    if matches.is_empty() {
        return Err(CliError::Input("match list is empty".into()));
    }
    Ok(matches)
}

#[derive(serde::Serialize)]
struct EloStanding {
    player: String,
    rating: f64,
    matches_played: u64,
}

fn cmd_elo(args: EloArgs) -> Result<(), CliError> {
    let matches = read_match_list(&args.input)?;
    let config = EloConfig {
        initial_rating: args.initial_rating,
        k_factor: args.k_factor,
        scale: args.scale,
        ..EloConfig::default()
    };
    let table = run_sequential(&matches, &config).map_err(classify)?;
    let path = match args.io.format {
        FormatArg::Csv => write_artifact(&args.io.output, "elo.csv", &table.to_csv())?,
        FormatArg::Json => {
            let standings: Vec<EloStanding> = table
                .standings()
                .into_iter()
                .map(|(player, rating, played)| EloStanding {
                    player: player.to_string(),
                    rating,
                    matches_played: played,
                })
                .collect();
            write_artifact(&args.io.output, "elo.json", &to_json(&standings))?
        }
    };
    println!(
        "{} matches over {} players -> {}",
        matches.len(),
        table.len(),
        path.display()
    );
    println!(
        "{:>4}  {:<28} {:>10} {:>8}",
        "rank", "player", "rating", "played"
    );
    for (rank, (player, rating, played)) in
        table.standings().into_iter().enumerate().take(SUMMARY_ROWS)
    {
        println!(
            "{:>4}  {:<28} {:>10.1} {:>8}",
            rank + 1,
            player.to_string(),
            rating,
            played
        );
    }
    if table.len() > SUMMARY_ROWS {
        println!("      (+{} more)", table.len() - SUMMARY_ROWS);
    }
    Ok(())
}

fn cmd_embed(args: EmbedArgs) -> Result<(), CliError> {
    let table = read_score_table(&args.input, args.fit.orientation)?;
    let out = fit_all(&table, &args.fit)?;
    let matrix = epp_matrix(&out.fits).map_err(classify)?;
    let embedding = pca_embed(&matrix, args.components).map_err(classify)?;
    let path = write_artifact(&args.output, "embedding.json", &to_json(&embedding))?;
    let variances: Vec<String> = embedding
        .explained_variance
        .iter()
        .map(|v| format!("{v:.4}"))
        .collect();
    println!(
        "{} tournaments x {} players -> {} components (variance {}) -> {}",
        matrix.tournaments.len(),
        matrix.players.len(),
        args.components,
        variances.join(", "),
        path.display()
    );
    Ok(())
}

/// Evenly spaced ratings over [-2, 2], centered exactly.
fn simulated_betas(n: usize) -> Vec<f64> {
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

fn cmd_simulate(args: SimulateArgs) -> Result<(), CliError> {
    if args.tournaments == 0 {
        return Err(CliError::Input("tournaments must be >= 1".into()));
    }
    let base = simulated_betas(args.players);
    let width = (args.tournaments - 1).to_string().len();
    let mut records = Vec::new();
    for t in 0..args.tournaments {
        let sub_seed = args
            .seed
            .wrapping_add(u64::from(t).wrapping_mul(PERMUTE_SALT));
        let mut betas = base.clone();
        if t > 0 {
            Sampler::new(sub_seed ^ PERMUTE_SALT).shuffle(&mut betas);
            for _ in 0..2 {
                let mean = betas.iter().sum::<f64>() / betas.len().max(1) as f64;
                for b in betas.iter_mut() {
                    *b -= mean;
                }
            }
        }
        let config = SynthConfig {
            true_beta: betas,
            n_comparisons_per_pair: 1,
            seed: sub_seed,
        };
        let name = if args.tournaments == 1 {
            epp_core::synth::SYNTH_TOURNAMENT.to_string()
        } else {
            format!("{}-{t:0width$}", epp_core::synth::SYNTH_TOURNAMENT)
        };
        let tournament_table =
            generate_score_table(&config, args.splits, args.noise, &name).map_err(classify)?;
        records.extend(tournament_table.into_records());
    }
    let table = ScoreTable::new(records, Orientation::HigherBetter);
    let (name, contents) = match args.io.format {
        FormatArg::Csv => ("scores.csv", epp_core::score_table_to_csv(&table)),
        FormatArg::Json => ("scores.json", epp_core::score_table_to_json(&table)),
    };
    let path = write_artifact(&args.io.output, name, &contents)?;
    println!(
        "{} records: {} tournaments x {} players x {} splits -> {}",
        table.len(),
        args.tournaments,
        args.players,
        args.splits,
        path.display()
    );
    Ok(())
}
