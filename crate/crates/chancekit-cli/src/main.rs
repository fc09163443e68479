//! chancekit: exact PGFs, moments and winning probabilities for absorbing
//! board games, pile games and gambler's-ruin walks, over JSON files.
//!
//! Every command prints one JSON document (schema `chancekit-output/1`) on
//! stdout. Exact values are rendered as `p/q` strings; any decimal in a
//! payload is derived from an exact field that is also present. Exit codes:
//! 0 success, 2 input/validation error, 3 computational failure.

mod render;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::json;
use sha2::{Digest, Sha256};

use chancekit::error::Error;
use chancekit::markov::{
    build_board_process, moments_by_linear_solve, solve_duration_pgfs, win_prob_approx,
    win_prob_exact, BoardSpec,
};
use chancekit::montecarlo::{simulate_board, simulate_two_player, simulate_walk};
use chancekit::pile::{
    asymptotic_central_moment, asymptotic_moment, two_player_win_prob, win_prob_recurrence,
    PositiveDie,
};
use chancekit::rational::Rational;
use chancekit::ruin::{
    moment_min_poly, pgf_algebraic_equation, reach_m_expectation, verify_twoplayer_recurrences,
    Drift, FixtureId, GeneralDie, ReachExpectation,
};
use chancekit::seriesfit::{fit_algebraic, fit_cfinite, fit_precursive};
use chancekit::truncate::truncated_pgf;

use render::{
    bivar_equation, bivar_triples, cfinite_equation, dec, poly_coeffs, poly_in_var,
    precursive_equation, rat,
};

const SCHEMA: &str = "chancekit-output/1";

#[derive(Parser)]
#[command(name = "chancekit", version, about = "Exact game-length toolkit")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Absorbing board games (snakes and ladders)
    #[command(subcommand)]
    Board(BoardCmd),
    /// Positive-step pile games
    #[command(subcommand)]
    Pile(PileCmd),
    /// Gambler's-ruin walks with unlimited credit
    #[command(subcommand)]
    Ruin(RuinCmd),
    /// Guess-and-verify engines on exact sequence data
    #[command(subcommand)]
    Guess(GuessCmd),
    /// Monte Carlo sanity checks
    #[command(subcommand)]
    Simulate(SimulateCmd),
}

#[derive(Subcommand)]
enum BoardCmd {
    /// Exact duration PGF of one start state
    Pgf {
        #[arg(long)]
        board: PathBuf,
        /// Transient start state (1 = before the first move)
        #[arg(long, default_value_t = 1)]
        state: usize,
    },
    /// Exact duration moments
    Moments {
        #[arg(long)]
        board: PathBuf,
        /// Highest central moment to compute
        #[arg(long = "moment-order", default_value_t = 4)]
        moment_order: usize,
        #[arg(long, default_value_t = 1)]
        state: usize,
    },
    /// Probability that the first mover wins the two-player race
    Winprob {
        #[arg(long)]
        board: PathBuf,
        /// Exact Hadamard-square evaluation (the default)
        #[arg(long, conflicts_with = "eps")]
        exact: bool,
        /// Certified truncation bracket of total width <= eps^2 instead
        #[arg(long)]
        eps: Option<String>,
    },
}

#[derive(Subcommand)]
enum PileCmd {
    /// Asymptotic moment polynomial in the pile size n
    Moments {
        #[arg(long)]
        die: PathBuf,
        /// 1 = expectation, k >= 2 = k-th central moment
        #[arg(long, default_value_t = 1)]
        order: usize,
    },
    /// Exact first-mover winning probability at pile size n
    Winprob {
        #[arg(long)]
        die: PathBuf,
        #[arg(long)]
        goal: usize,
    },
    /// Fit the P-recursive recurrence of the winning-probability sequence
    Recurrence {
        #[arg(long)]
        die: PathBuf,
        /// How many exact sequence terms to fit on
        #[arg(long, default_value_t = 40)]
        terms: usize,
    },
}

#[derive(Subcommand)]
enum RuinCmd {
    /// Algebraic equation P(f, t) = 0 of the first-passage PGF
    Equation {
        #[arg(long)]
        die: PathBuf,
    },
    /// Integer annihilating polynomial of a duration moment
    #[command(name = "moment-poly")]
    MomentPoly {
        #[arg(long)]
        die: PathBuf,
        #[arg(long, default_value_t = 1)]
        order: usize,
    },
    /// Exact truncated PGF for reaching goal m within K rounds
    Truncate {
        #[arg(long)]
        die: PathBuf,
        #[arg(long)]
        goal: usize,
        #[arg(long, default_value_t = 400)]
        terms: usize,
    },
    /// Expected rounds to first reach goal m
    Reach {
        #[arg(long)]
        die: PathBuf,
        #[arg(long)]
        goal: usize,
    },
    /// Check the transcribed two-player recurrences against fresh numerics
    #[command(name = "verify-fixtures")]
    VerifyFixtures {
        /// prop7|prop8|prop10|prop11|prop12|prop13 (default: all)
        #[arg(long)]
        fixture: Option<String>,
    },
}

#[derive(Args)]
struct GuessArgs {
    /// JSON array of exact "p/q" values
    #[arg(long)]
    data: PathBuf,
}

#[derive(Subcommand)]
enum GuessCmd {
    /// Constant-coefficient linear recurrence
    Cfinite {
        #[command(flatten)]
        args: GuessArgs,
        #[arg(long = "max-order", default_value_t = 8)]
        max_order: usize,
    },
    /// Polynomial-coefficient linear recurrence
    Precursive {
        #[command(flatten)]
        args: GuessArgs,
        #[arg(long = "max-order", default_value_t = 4)]
        max_order: usize,
        #[arg(long = "max-degree", default_value_t = 3)]
        max_degree: usize,
    },
    /// Algebraic equation satisfied by the generating function
    Algebraic {
        #[command(flatten)]
        args: GuessArgs,
        #[arg(long = "max-degree", default_value_t = 8)]
        max_degree: usize,
    },
}

#[derive(Subcommand)]
enum SimulateCmd {
    /// Board-game trials from state 1
    Board {
        #[arg(long)]
        board: PathBuf,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Alternating two-player mode (reports win_rate)
        #[arg(long = "two-player")]
        two_player: bool,
    },
    /// First-passage walk trials
    Walk {
        #[arg(long)]
        die: PathBuf,
        #[arg(long, default_value_t = 1)]
        goal: u32,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Censor trajectories longer than this many rounds
        #[arg(long, default_value_t = 10_000)]
        cap: u64,
    },
}

enum Failure {
    Validation(String),
    Computation(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::ParseRational(_)
            | Error::ZeroDenominator
            | Error::InvalidBoard(_)
            | Error::InvalidDie(_)
            | Error::InvalidParameter(_) => Failure::Validation(e.to_string()),
            other => Failure::Computation(other.to_string()),
        }
    }
}

#[derive(Serialize)]
struct Provenance {
    #[serde(skip_serializing_if = "Option::is_none")]
    input_sha256: Option<String>,
    version: &'static str,
}

#[derive(Serialize)]
struct CommandResult {
    schema: &'static str,
    kind: &'static str,
    payload: serde_json::Value,
    provenance: Provenance,
}

fn result(
    kind: &'static str,
    payload: serde_json::Value,
    input_sha256: Option<String>,
) -> CommandResult {
    CommandResult {
        schema: SCHEMA,
        kind,
        payload,
        provenance: Provenance { input_sha256, version: env!("CARGO_PKG_VERSION") },
    }
}

/// Read + parse one JSON input, returning its content hash for provenance.
fn load_json<T: DeserializeOwned>(path: &Path) -> Result<(T, String), Failure> {
    let bytes = fs::read(path)
        .map_err(|e| Failure::Validation(format!("{}: {e}", path.display())))?;
    let value = serde_json::from_slice(&bytes)
        .map_err(|e| Failure::Validation(format!("{}: {e}", path.display())))?;
    let digest = Sha256::digest(&bytes);
    let hash = digest.iter().map(|b| format!("{b:02x}")).collect::<String>();
    Ok((value, hash))
}

fn load_board(path: &Path) -> Result<(BoardSpec, String), Failure> {
    let (spec, hash): (BoardSpec, String) = load_json(path)?;
    spec.validate()?;
    Ok((spec, hash))
}

fn load_positive_die(path: &Path) -> Result<(PositiveDie, String), Failure> {
    let (die, hash): (PositiveDie, String) = load_json(path)?;
    die.validate()?;
    Ok((die, hash))
}

fn load_general_die(path: &Path) -> Result<(GeneralDie, String), Failure> {
    let (die, hash): (GeneralDie, String) = load_json(path)?;
    die.validate()?;
    Ok((die, hash))
}

fn parse_eps(s: &str) -> Result<Rational, Failure> {
    let eps = s
        .parse::<Rational>()
        .or_else(|_| Rational::from_decimal_str(s))
        .map_err(|e| Failure::Validation(format!("--eps {s:?}: {e}")))?;
    Ok(eps)
}

fn pair(r: &Rational) -> serde_json::Value {
    json!({ "exact": rat(r), "decimal": dec(r) })
}

fn run(cli: Cli) -> Result<CommandResult, Failure> {
    match cli.cmd {
        Cmd::Board(cmd) => run_board(cmd),
        Cmd::Pile(cmd) => run_pile(cmd),
        Cmd::Ruin(cmd) => run_ruin(cmd),
        Cmd::Guess(cmd) => run_guess(cmd),
        Cmd::Simulate(cmd) => run_simulate(cmd),
    }
}

fn check_state(state: usize, transient: usize) -> Result<(), Failure> {
    if state == 0 || state > transient {
        return Err(Failure::Validation(format!(
            "state {state} out of range (transient states are 1..={transient})"
        )));
    }
    Ok(())
}

fn run_board(cmd: BoardCmd) -> Result<CommandResult, Failure> {
    match cmd {
        BoardCmd::Pgf { board, state } => {
            let (spec, hash) = load_board(&board)?;
            let process = build_board_process(&spec)?;
            check_state(state, process.transient_count())?;
            let fs = solve_duration_pgfs(&process)?;
            let f = &fs[state - 1];
            Ok(result(
                "board.pgf",
                json!({
                    "state": state,
                    "num": poly_coeffs(f.num()),
                    "den": poly_coeffs(f.den()),
                }),
                Some(hash),
            ))
        }
        BoardCmd::Moments { board, moment_order, state } => {
            let (spec, hash) = load_board(&board)?;
            let process = build_board_process(&spec)?;
            check_state(state, process.transient_count())?;
            let stats = moments_by_linear_solve(&process, moment_order)?;
            let s = &stats[state - 1];
            Ok(result(
                "board.moments",
                json!({
                    "state": state,
                    "expectation": pair(&s.expectation),
                    "variance": pair(&s.variance),
                    "standard_deviation": s.standard_deviation,
                    "central_moments": s.central_moments.iter().map(rat).collect::<Vec<_>>(),
                    "skewness": s.skewness,
                    "kurtosis": s.kurtosis,
                }),
                Some(hash),
            ))
        }
        BoardCmd::Winprob { board, exact: _, eps } => {
            let (spec, hash) = load_board(&board)?;
            let process = build_board_process(&spec)?;
            let f = solve_duration_pgfs(&process)?.swap_remove(0);
            match eps {
                None => {
                    let w = win_prob_exact(&f)?;
                    Ok(result(
                        "board.winprob",
                        json!({ "win_prob": rat(&w), "decimal": dec(&w) }),
                        Some(hash),
                    ))
                }
                Some(e) => {
                    let eps = parse_eps(&e)?;
                    let (lo, hi) = win_prob_approx(&f, &f, &eps)?;
                    Ok(result(
                        "board.winprob",
                        json!({
                            "lower": rat(&lo),
                            "upper": rat(&hi),
                            "decimal": dec(&lo),
                            "eps": rat(&eps),
                        }),
                        Some(hash),
                    ))
                }
            }
        }
    }
}

fn run_pile(cmd: PileCmd) -> Result<CommandResult, Failure> {
    match cmd {
        PileCmd::Moments { die, order } => {
            let (die, hash) = load_positive_die(&die)?;
            let m = if order <= 1 {
                asymptotic_moment(&die, 1)?
            } else {
                asymptotic_central_moment(&die, order)?
            };
            Ok(result(
                "pile.moments",
                json!({
                    "order": m.order,
                    "kind": if order <= 1 { "expectation" } else { "central" },
                    "poly": poly_coeffs(&m.poly_part),
                    "rendered": poly_in_var(&m.poly_part, "n"),
                }),
                Some(hash),
            ))
        }
        PileCmd::Winprob { die, goal } => {
            let (die, hash) = load_positive_die(&die)?;
            let a = two_player_win_prob(&die, goal)?;
            let f = &(&a + &a) - &Rational::one();
            Ok(result(
                "pile.winprob",
                json!({
                    "goal": goal,
                    "win_prob": rat(&a),
                    "decimal": dec(&a),
                    "f": rat(&f),
                }),
                Some(hash),
            ))
        }
        PileCmd::Recurrence { die, terms } => {
            let (die, hash) = load_positive_die(&die)?;
            let rec = win_prob_recurrence(&die, terms)?;
            Ok(result(
                "pile.recurrence",
                json!({
                    "order": rec.order,
                    "degree": rec.degree,
                    "valid_from": rec.valid_from,
                    "coeffs": rec.coeffs.iter().map(poly_coeffs).collect::<Vec<_>>(),
                    "rendered": precursive_equation(&rec.coeffs),
                }),
                Some(hash),
            ))
        }
    }
}

fn drift_name(d: Drift) -> &'static str {
    match d {
        Drift::Positive => "positive",
        Drift::Zero => "zero",
        Drift::Negative => "negative",
    }
}

fn run_ruin(cmd: RuinCmd) -> Result<CommandResult, Failure> {
    match cmd {
        RuinCmd::Equation { die } => {
            let (die, hash) = load_general_die(&die)?;
            let pgf = pgf_algebraic_equation(&die)?;
            Ok(result(
                "ruin.equation",
                json!({
                    "triples": bivar_triples(&pgf.equation),
                    "rendered": bivar_equation(&pgf.equation),
                    "drift": drift_name(pgf.drift_class),
                    "series_prefix": pgf.series.iter().take(12).map(rat).collect::<Vec<_>>(),
                }),
                Some(hash),
            ))
        }
        RuinCmd::MomentPoly { die, order } => {
            let (die, hash) = load_general_die(&die)?;
            let res = moment_min_poly(&die, order)?;
            let (lo, hi) = &res.isolated_root;
            let mid = &(&(lo + hi) / &Rational::from(2));
            Ok(result(
                "ruin.moment_poly",
                json!({
                    "moment_order": res.moment_order,
                    "annihilating_poly": poly_coeffs(&res.annihilating_poly),
                    "rendered": poly_in_var(&res.annihilating_poly, "x"),
                    "root_interval": [rat(lo), rat(hi)],
                    "root_decimal": dec(mid),
                }),
                Some(hash),
            ))
        }
        RuinCmd::Truncate { die, goal, terms } => {
            let (die, hash) = load_general_die(&die)?;
            let t = truncated_pgf(&die, goal, terms)?;
            let residual = &Rational::one() - &t.captured_mass;
            let mean = if t.captured_mass.is_zero() {
                serde_json::Value::Null
            } else {
                pair(&t.conditional_moment(1)?)
            };
            Ok(result(
                "ruin.truncate",
                json!({
                    "goal": goal,
                    "terms": terms,
                    "captured_mass": pair(&t.captured_mass),
                    "residual_mass": pair(&residual),
                    "conditional_mean": mean,
                    "coeffs": t.coeffs.iter().map(rat).collect::<Vec<_>>(),
                }),
                Some(hash),
            ))
        }
        RuinCmd::Reach { die, goal } => {
            let (die, hash) = load_general_die(&die)?;
            let payload = match reach_m_expectation(&die, goal)? {
                ReachExpectation::Exact(v) => json!({
                    "goal": goal, "kind": "exact",
                    "expectation": pair(&v),
                }),
                ReachExpectation::Numeric { value, error_bound } => json!({
                    "goal": goal, "kind": "numeric",
                    "expectation": value,
                    "error_bound": error_bound,
                }),
            };
            Ok(result("ruin.reach", payload, Some(hash)))
        }
        RuinCmd::VerifyFixtures { fixture } => {
            let which: Vec<FixtureId> = match &fixture {
                None => FixtureId::all().to_vec(),
                Some(s) => match FixtureId::parse(s) {
                    Some(id) => vec![id],
                    None => {
                        return Err(Failure::Validation(format!(
                            "unknown fixture {s:?} (try prop7|prop8|prop10|prop11|prop12|prop13)"
                        )))
                    }
                },
            };
            let mut reports = Vec::new();
            let mut all_ok = true;
            for id in which {
                let report =
                    verify_twoplayer_recurrences(id, &id.default_p(), id.default_m_range())?;
                all_ok &= report.ok;
                reports.push(serde_json::to_value(&report).expect("report serializes"));
            }
            Ok(result(
                "ruin.verify_fixtures",
                json!({ "all_ok": all_ok, "reports": reports }),
                None,
            ))
        }
    }
}

fn run_guess(cmd: GuessCmd) -> Result<CommandResult, Failure> {
    match cmd {
        GuessCmd::Cfinite { args, max_order } => {
            let (data, hash): (Vec<Rational>, String) = load_json(&args.data)?;
            let rec = fit_cfinite(&data, max_order)?;
            Ok(result(
                "guess.cfinite",
                json!({
                    "order": rec.order,
                    "coeffs": rec.coeffs.iter().map(rat).collect::<Vec<_>>(),
                    "valid_from": rec.valid_from,
                    "rendered": cfinite_equation(&rec.coeffs),
                }),
                Some(hash),
            ))
        }
        GuessCmd::Precursive { args, max_order, max_degree } => {
            let (data, hash): (Vec<Rational>, String) = load_json(&args.data)?;
            let rec = fit_precursive(&data, max_order, max_degree)?;
            Ok(result(
                "guess.precursive",
                json!({
                    "order": rec.order,
                    "degree": rec.degree,
                    "valid_from": rec.valid_from,
                    "coeffs": rec.coeffs.iter().map(poly_coeffs).collect::<Vec<_>>(),
                    "rendered": precursive_equation(&rec.coeffs),
                }),
                Some(hash),
            ))
        }
        GuessCmd::Algebraic { args, max_degree } => {
            let (data, hash): (Vec<Rational>, String) = load_json(&args.data)?;
            let eq = fit_algebraic(&data, max_degree)?;
            Ok(result(
                "guess.algebraic",
                json!({
                    "triples": bivar_triples(&eq),
                    "rendered": bivar_equation(&eq),
                }),
                Some(hash),
            ))
        }
    }
}

fn run_simulate(cmd: SimulateCmd) -> Result<CommandResult, Failure> {
    match cmd {
        SimulateCmd::Board { board, trials, seed, two_player } => {
            if trials == 0 {
                return Err(Failure::Validation("--trials must be at least 1".into()));
            }
            let (spec, hash) = load_board(&board)?;
            let process = build_board_process(&spec)?;
            let report = if two_player {
                simulate_two_player(&process, trials, seed)
            } else {
                simulate_board(&process, trials, seed)
            };
            Ok(result(
                "simulate.board",
                serde_json::to_value(&report).expect("report serializes"),
                Some(hash),
            ))
        }
        SimulateCmd::Walk { die, goal, trials, seed, cap } => {
            if trials == 0 || goal == 0 || cap == 0 {
                return Err(Failure::Validation(
                    "--trials, --goal and --cap must be at least 1".into(),
                ));
            }
            let (die, hash) = load_general_die(&die)?;
            let report = simulate_walk(&die, goal, trials, seed, cap);
            Ok(result(
                "simulate.walk",
                serde_json::to_value(&report).expect("report serializes"),
                Some(hash),
            ))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(res) => {
            let text = serde_json::to_string_pretty(&res).expect("result serializes");
            // tolerate a closed pipe (e.g. `chancekit ... | head`)
            use std::io::Write;
            let _ = writeln!(std::io::stdout(), "{text}");
            ExitCode::SUCCESS
        }
        Err(Failure::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Computation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
