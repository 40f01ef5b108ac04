//! Command line driver for the expectation-games engine.
//!
//! Exit codes follow a fixed protocol so shell scripts can branch on
//! verdicts: 0 for success, equilibrium, fixed point, or tautology; 1
//! for a refutation, cycle, or non-tautology; 2 when the result is not
//! certified either way; 64 for usage errors, 65 for input files or
//! formulas that fail to parse, 66 for unreadable files, 70 for
//! resource-limit or solver failures.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use exg_core::rational::parse_rational;
use exg_core::rcf::{
    compile_existence_sentence, compile_verification_query, SmtScript, SolverAnswer, SolverCommand,
};
use exg_core::{
    best_response_dynamics, eval_goal, expected_payoff, is_tautology, search_equilibrium,
    tautology_counterexample, verify_equilibrium, Diagnostic, Game, Limits, LkScale, Profile,
    SearchOutcome, TerminalStatus, Valuation, Verdict,
};

const EXIT_REFUTED: u8 = 1;
const EXIT_UNKNOWN: u8 = 2;
const EXIT_USAGE: u8 = 64;
const EXIT_DATA: u8 = 65;
const EXIT_NOINPUT: u8 = 66;
const EXIT_SOFTWARE: u8 = 70;

#[derive(Parser)]
#[command(
    name = "exg",
    version,
    about = "Lukasiewicz games with goals over expected payoffs",
    after_help = "Exit codes: 0 equilibrium/success, 1 refuted, 2 unknown, \
                  64 usage, 65 parse, 66 missing file, 70 engine failure."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a game file and report any validation problems
    Check {
        /// Game description file
        game: PathBuf,
    },
    /// Evaluate every payoff formula on one pure strategy combination
    Eval {
        /// Game description file
        game: PathBuf,
        /// Joint assignment of all variables, e.g. "p1=1,p2=1/2"
        #[arg(long)]
        combination: String,
    },
    /// Print every player's expected payoff under a mixed profile
    Expect {
        /// Game description file
        game: PathBuf,
        /// Profile file
        profile: PathBuf,
    },
    /// Print every player's goal value under a mixed profile
    Goals {
        /// Game description file
        game: PathBuf,
        /// Profile file
        profile: PathBuf,
    },
    /// Check a profile for equilibrium against a deviation grid
    Verify {
        /// Game description file
        game: PathBuf,
        /// Profile file
        profile: PathBuf,
        /// Deviation grid denominator (1 scans pure deviations)
        #[arg(long, default_value_t = 1)]
        grid: u64,
        /// Write a machine-readable report to this file
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Run round-robin best response dynamics from a start profile
    Dynamics {
        /// Game description file
        game: PathBuf,
        /// Start profile file (default: every player's first pure strategy)
        #[arg(long)]
        start: Option<PathBuf>,
        /// Stop after this many strategy updates
        #[arg(long, default_value_t = 100)]
        max_iters: usize,
        /// Best-response grid denominator
        #[arg(long, default_value_t = 1)]
        grid: u64,
        /// Write a machine-readable report to this file
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Search the probability grid for a certified equilibrium
    Search {
        /// Game description file
        game: PathBuf,
        /// Probability grid denominator
        #[arg(long)]
        grid: u64,
        /// Write a machine-readable report to this file
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Compile an equilibrium query to SMT-LIB and optionally run a solver
    Compile {
        /// Game description file
        game: PathBuf,
        /// Compile the equilibrium existence sentence
        #[arg(long, conflicts_with_all = ["verify", "player"])]
        existence: bool,
        /// Compile the deviation query for this profile file
        #[arg(long, requires = "player")]
        verify: Option<PathBuf>,
        /// Player whose deviation is questioned (name or 0-based index)
        #[arg(long, requires = "verify")]
        player: Option<String>,
        /// Solver command to run on the script (overrides EXG_SOLVER)
        #[arg(long)]
        solver: Option<String>,
    },
    /// Decide whether a propositional formula is a tautology at scale k
    Taut {
        /// Formula text, e.g. "p (+) ~p"
        formula: String,
        /// Scale parameter: truth values are multiples of 1/k
        #[arg(long)]
        k: u32,
    },
}

enum Failure {
    Usage(String),
    /// Diagnostics were already rendered to stderr.
    Parse,
    Io(PathBuf, std::io::Error),
    Engine(exg_core::Error),
}

impl Failure {
    fn exit(self) -> ExitCode {
        match self {
            Failure::Usage(message) => {
                eprintln!("error: {message}");
                ExitCode::from(EXIT_USAGE)
            }
            Failure::Parse => ExitCode::from(EXIT_DATA),
            Failure::Io(path, err) => {
                eprintln!("error: cannot read {}: {err}", path.display());
                ExitCode::from(EXIT_NOINPUT)
            }
            Failure::Engine(err) => {
                eprintln!("error: {err}");
                ExitCode::from(EXIT_SOFTWARE)
            }
        }
    }
}

impl From<exg_core::Error> for Failure {
    fn from(err: exg_core::Error) -> Self {
        Failure::Engine(err)
    }
}

fn main() -> ExitCode {
    match Cli::try_parse() {
        Ok(cli) => match run(cli.command) {
            Ok(code) => ExitCode::from(code),
            Err(failure) => failure.exit(),
        },
        Err(err) => {
            let code = if err.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = err.print();
            ExitCode::from(code)
        }
    }
}

fn print_diagnostics(diagnostics: &[Diagnostic], source: &str) {
    for diagnostic in diagnostics {
        eprintln!("{}", diagnostic.render(source));
    }
}

fn read_source(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|err| Failure::Io(path.to_path_buf(), err))
}

fn load_game(path: &Path) -> Result<Game, Failure> {
    let source = read_source(path)?;
    exg_core::parse_game_file(&source).map_err(|diagnostics| {
        print_diagnostics(&diagnostics, &source);
        Failure::Parse
    })
}

fn load_profile(path: &Path, game: &Game) -> Result<Profile, Failure> {
    let source = read_source(path)?;
    exg_core::parse_profile_file(&source, game).map_err(|diagnostics| {
        print_diagnostics(&diagnostics, &source);
        Failure::Parse
    })
}

fn require_grid(grid: u64) -> Result<(), Failure> {
    if grid == 0 {
        return Err(Failure::Usage(
            "grid denominator must be at least 1".to_string(),
        ));
    }
    Ok(())
}

/// Parses "var=value,var=value" into a valuation covering exactly the
/// game's variables, all values on the scale.
fn parse_combination(game: &Game, text: &str) -> Result<Valuation, Failure> {
    let usage = |message: String| Err(Failure::Usage(message));
    let mut valuation = Valuation::new();
    let mut seen = Vec::new();
    for part in text.split(',') {
        let part = part.trim();
        let Some((var, value)) = part.split_once('=') else {
            return usage(format!("assignment `{part}` is not of the form var=value"));
        };
        let (var, value) = (var.trim(), value.trim());
        if !game.variables().iter().any(|v| v == var) {
            return usage(format!("unknown variable `{var}`"));
        }
        if seen.iter().any(|s| s == var) {
            return usage(format!("variable `{var}` assigned twice"));
        }
        let Some(v) = parse_rational(value) else {
            return usage(format!("`{value}` is not a rational a/b"));
        };
        if !game.scale().contains(&v) {
            return usage(format!(
                "value {v} for `{var}` is not a truth value of {}",
                game.scale()
            ));
        }
        seen.push(var.to_string());
        valuation = valuation.bind(var, v);
    }
    for var in game.variables() {
        if !seen.iter().any(|s| s == var) {
            return usage(format!("variable `{var}` is not assigned"));
        }
    }
    Ok(valuation)
}

fn resolve_player(game: &Game, text: &str) -> Result<usize, Failure> {
    if let Some(index) = game.player_index(text) {
        return Ok(index);
    }
    if let Ok(index) = text.parse::<usize>() {
        if index < game.num_players() {
            return Ok(index);
        }
    }
    Err(Failure::Usage(format!(
        "unknown player `{text}`; expected a player name or an index below {}",
        game.num_players()
    )))
}

fn write_report(path: Option<&Path>, contents: &str) -> Result<(), Failure> {
    if let Some(path) = path {
        fs::write(path, contents).map_err(|err| Failure::Io(path.to_path_buf(), err))?;
    }
    Ok(())
}

/// Prints the script to stdout and, when a solver is configured, runs it
/// and maps its answer to an exit code. `sat_exit` says what a sat
/// answer means for this query kind.
fn emit_script(
    script: &SmtScript,
    solver: Option<String>,
    sat_exit: u8,
    unsat_exit: u8,
) -> Result<u8, Failure> {
    print!("{}", script.render());
    let command = match solver {
        Some(template) => SolverCommand::new(template),
        None => match SolverCommand::from_env() {
            Some(command) => command,
            None => return Ok(0),
        },
    };
    let run = command.run(script)?;
    eprintln!("solver answer: {}", run.first_line);
    Ok(match run.answer {
        SolverAnswer::Sat => sat_exit,
        SolverAnswer::Unsat => unsat_exit,
        SolverAnswer::Unknown => EXIT_UNKNOWN,
    })
}

fn run(command: Command) -> Result<u8, Failure> {
    let limits = Limits::default();
    match command {
        Command::Check { game } => {
            let game = load_game(&game)?;
            println!(
                "ok: {} players, {} variables, k = {}",
                game.num_players(),
                game.variables().len(),
                game.scale().k()
            );
            Ok(0)
        }
        Command::Eval { game, combination } => {
            let game = load_game(&game)?;
            let valuation = parse_combination(&game, &combination)?;
            for (i, name) in game.players().iter().enumerate() {
                let value = game.payoff_formula(i).eval(&valuation, game.scale())?;
                println!("payoff({name}) = {value}");
            }
            Ok(0)
        }
        Command::Expect { game, profile } => {
            let game = load_game(&game)?;
            let profile = load_profile(&profile, &game)?;
            for (i, name) in game.players().iter().enumerate() {
                let value = expected_payoff(&game, i, &profile, &limits)?;
                println!("E[{name}] = {value}");
            }
            Ok(0)
        }
        Command::Goals { game, profile } => {
            let game = load_game(&game)?;
            let profile = load_profile(&profile, &game)?;
            for (i, name) in game.players().iter().enumerate() {
                let value = eval_goal(&game, i, &profile, &limits)?;
                println!("goal({name}) = {value}");
            }
            Ok(0)
        }
        Command::Verify {
            game,
            profile,
            grid,
            report,
        } => {
            require_grid(grid)?;
            let game = load_game(&game)?;
            let profile = load_profile(&profile, &game)?;
            let outcome = verify_equilibrium(&game, &profile, grid, &limits)?;
            print!("{}", outcome.render_text(&game, &limits)?);
            write_report(report.as_deref(), &outcome.render_machine(&game, &limits)?)?;
            Ok(match outcome.overall {
                Verdict::Equilibrium(_) => 0,
                Verdict::NotEquilibrium(_) => EXIT_REFUTED,
                Verdict::Unknown { .. } => EXIT_UNKNOWN,
            })
        }
        Command::Dynamics {
            game,
            start,
            max_iters,
            grid,
            report,
        } => {
            require_grid(grid)?;
            let game = load_game(&game)?;
            let start = match start {
                Some(path) => load_profile(&path, &game)?,
                None => Profile::pure(&vec![0; game.num_players()]),
            };
            let trace = best_response_dynamics(&game, &start, max_iters, grid, &limits)?;
            print!("{}", trace.render_text(&game, &limits)?);
            write_report(report.as_deref(), &trace.render_machine())?;
            Ok(match trace.status {
                TerminalStatus::FixedPoint => 0,
                TerminalStatus::Cycle { .. } => EXIT_REFUTED,
                TerminalStatus::MaxIters => EXIT_UNKNOWN,
            })
        }
        Command::Search { game, grid, report } => {
            require_grid(grid)?;
            let game = load_game(&game)?;
            let found = search_equilibrium(&game, grid, &limits)?;
            print!("{}", found.render_text(&game, &limits)?);
            write_report(report.as_deref(), &found.render_machine(&game, &limits)?)?;
            Ok(match found.outcome {
                SearchOutcome::Found(_) => 0,
                SearchOutcome::Candidate { .. } => EXIT_UNKNOWN,
            })
        }
        Command::Compile {
            game,
            existence,
            verify,
            player,
            solver,
        } => {
            let game = load_game(&game)?;
            match (existence, verify) {
                (true, None) => {
                    let script = compile_existence_sentence(&game, &limits)?;
                    emit_script(&script, solver, 0, EXIT_REFUTED)
                }
                (false, Some(path)) => {
                    let profile = load_profile(&path, &game)?;
                    let player = resolve_player(&game, &player.expect("clap enforces requires"))?;
                    let script = compile_verification_query(&game, &profile, player, &limits)?;
                    emit_script(&script, solver, EXIT_REFUTED, 0)
                }
                _ => Err(Failure::Usage(
                    "pass exactly one of --existence or --verify <profile> --player <P>"
                        .to_string(),
                )),
            }
        }
        Command::Taut { formula, k } => {
            if k == 0 {
                return Err(Failure::Usage("k must be at least 1".to_string()));
            }
            let parsed = exg_core::parse_formula(&formula).map_err(|diagnostics| {
                print_diagnostics(&diagnostics, &formula);
                Failure::Parse
            })?;
            let scale = LkScale::new(k);
            if is_tautology(&parsed, scale, &limits)? {
                println!("tautology at k = {k}");
                Ok(0)
            } else {
                let witness = tautology_counterexample(&parsed, scale, &limits)?
                    .expect("a non-tautology has a counterexample");
                let mut line = String::new();
                for (name, value) in witness.iter() {
                    if !line.is_empty() {
                        line.push_str(", ");
                    }
                    let _ = write!(line, "{name} = {value}");
                }
                println!("not a tautology at k = {k}; counterexample: {line}");
                Ok(EXIT_REFUTED)
            }
        }
    }
}
