//! Command dispatch for the `open-games` binary. All heavy lifting lives in
//! the library; this module parses arguments, routes to it, and renders
//! JSON reports with a stable key order so identical invocations produce
//! byte-identical output.

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde_json::{json, Value as Json};

use crate::classical::BayesianGame;
use crate::error::{Error, Result};
use crate::files;
use crate::laws;
use crate::rational;
use crate::scenarios;
use crate::value::Value;

#[derive(Parser)]
#[command(
    name = "open-games",
    about = "Exact compositional game theory: solve, check, and update with rational arithmetic",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate pure equilibria with both engines and cross-check them.
    Solve {
        game: PathBuf,
        /// Restrict the search to pure strategy profiles (required; mixed
        /// search is out of scope).
        #[arg(long)]
        pure: bool,
    },
    /// Check a mixed profile with both engines.
    Check {
        game: PathBuf,
        #[arg(long)]
        profile: PathBuf,
    },
    /// Expected utility of a profile for one player.
    Utility {
        game: PathBuf,
        #[arg(long)]
        profile: PathBuf,
        #[arg(long)]
        player: String,
        /// One of: post, interim, ante.
        #[arg(long)]
        epistemic: String,
        /// Type assignments `player=label`; all players for `post`, the
        /// queried player for `interim`.
        #[arg(long = "types")]
        types: Vec<String>,
    },
    /// Exact Bayesian update of a joint prior on an observation.
    Update {
        #[arg(long)]
        prior: PathBuf,
        #[arg(long)]
        observe: String,
    },
    /// Run the randomized law suite.
    Laws {
        #[arg(long, default_value_t = 100)]
        cases: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run a built-in scenario and print its report.
    Examples { name: String },
}

/// Exit codes: 0 success, 1 validation/parse, 2 resource budget, 3 internal
/// invariant violation (engine disagreement).
pub fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::BudgetExceeded { .. } => 2,
        Error::Internal(_) => 3,
        _ => 1,
    }
}

/// Run the CLI on the given argument list (including the program name).
/// Returns `(exit_code, stdout, stderr)`.
pub fn run<I, S>(args: I) -> (i32, String, String)
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // clap renders its own help/usage text; preserve its exit code
            // semantics (0 for --help/--version).
            let code = if e.use_stderr() { 1 } else { 0 };
            let rendered = e.to_string();
            return if code == 0 {
                (0, rendered, String::new())
            } else {
                (1, String::new(), rendered)
            };
        }
    };
    match dispatch(cli.command) {
        Ok((code, report)) => (code, render(&report), String::new()),
        Err(e) => (
            exit_code_for(&e),
            String::new(),
            format!("error: {e}\n"),
        ),
    }
}

fn render(report: &Json) -> String {
    let mut out = serde_json::to_string_pretty(report).expect("report serializes");
    out.push('\n');
    out
}

fn dispatch(command: Command) -> Result<(i32, Json)> {
    match command {
        Command::Solve { game, pure } => {
            if !pure {
                return Err(Error::validation(
                    "solve",
                    "pass --pure; mixed-equilibrium search is not supported",
                ));
            }
            let game = files::parse_game(&game)?;
            solve_pure(&game).map(|r| (0, r))
        }
        Command::Check { game, profile } => {
            let game = files::parse_game(&game)?;
            let s = files::parse_profile(&profile, &game)?;
            let classical = game.is_bayes_nash(&s)?;
            let (encoded, context) = game.encode_to_open_game()?;
            let sp = game.profile_to_open_game(&s)?;
            let compositional = encoded.is_equilibrium(&context, &sp)?;
            let agree = classical == compositional;
            let report = json!({
                "classical": classical,
                "compositional": compositional,
                "agree": agree,
            });
            Ok((if agree { 0 } else { 3 }, report))
        }
        Command::Utility {
            game,
            profile,
            player,
            epistemic,
            types,
        } => {
            let game = files::parse_game(&game)?;
            let s = files::parse_profile(&profile, &game)?;
            let i = game.player_index(&player)?;
            let assignments = parse_type_assignments(&types)?;
            let value = match epistemic.as_str() {
                "post" => {
                    let theta = full_type_profile(&game, &assignments)?;
                    game.ex_post(&s, &theta, i)?
                }
                "interim" => {
                    let label = assignments.get(&player).ok_or_else(|| {
                        Error::validation(
                            "types",
                            format!("interim utility needs --types {player}=<label>"),
                        )
                    })?;
                    game.ex_interim(&s, i, &Value::atom(label.clone()))?
                }
                "ante" => game.ex_ante(&s, i)?,
                other => {
                    return Err(Error::validation(
                        "epistemic",
                        format!("unknown epistemic state {other:?}; use post, interim, or ante"),
                    ))
                }
            };
            Ok((0, json!(rational::to_string(&value))))
        }
        Command::Update { prior, observe } => {
            let joint = files::parse_prior(&prior)?;
            let posterior = joint.bayes_update(&Value::atom(observe))?;
            Ok((0, files::dist_to_json(&posterior)))
        }
        Command::Laws { cases, seed } => {
            let families = laws::run_all(cases, seed)?;
            let mut all_passed = true;
            let mut family_reports = BTreeMap::new();
            for (family, reports) in families {
                let mut law_reports = BTreeMap::new();
                let mut passed = 0u32;
                let mut failed = 0u32;
                for r in reports {
                    if r.failures == 0 {
                        passed += 1;
                    } else {
                        failed += 1;
                        all_passed = false;
                    }
                    law_reports.insert(
                        r.law.clone(),
                        json!({"cases": r.cases, "failures": r.failures}),
                    );
                }
                family_reports.insert(
                    family,
                    json!({"laws": law_reports, "passed": passed, "failed": failed}),
                );
            }
            let report = json!({
                "cases": cases,
                "seed": seed,
                "families": family_reports,
                "all_passed": all_passed,
            });
            Ok((if all_passed { 0 } else { 3 }, report))
        }
        Command::Examples { name } => scenarios::scenario_report(&name).map(|r| (0, r)),
    }
}

fn solve_pure(game: &BayesianGame) -> Result<Json> {
    let classical = game.enumerate_pure_bayes_nash()?;
    let (encoded, context) = game.encode_to_open_game()?;
    let mut compositional = Vec::new();
    for sp in encoded.enumerate_pure_equilibria(&context)? {
        compositional.push(game.profile_from_open_game(&sp)?);
    }
    compositional.sort();
    if classical != compositional {
        return Err(Error::Internal(format!(
            "engines disagree: classical found {}, compositional found {}",
            classical.len(),
            compositional.len()
        )));
    }
    Ok(json!({
        "pure_equilibria": classical
            .iter()
            .map(|p| json!(files::pure_profile_to_file(game, p)))
            .collect::<Vec<_>>(),
    }))
}

fn parse_type_assignments(raw: &[String]) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for item in raw {
        for piece in item.split(',') {
            let (player, label) = piece.split_once('=').ok_or_else(|| {
                Error::validation("types", format!("expected player=label, got {piece:?}"))
            })?;
            out.insert(player.trim().to_string(), label.trim().to_string());
        }
    }
    Ok(out)
}

fn full_type_profile(
    game: &BayesianGame,
    assignments: &BTreeMap<String, String>,
) -> Result<Vec<Value>> {
    let mut out = Vec::new();
    for p in game.players() {
        let label = assignments.get(p).ok_or_else(|| {
            Error::validation(
                "types",
                format!("post utility needs --types {p}=<label> for every player"),
            )
        })?;
        out.push(Value::atom(label.clone()));
    }
    Ok(out)
}
