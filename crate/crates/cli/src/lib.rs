//! The `pnl` command line: model checking, games, proof search.
//!
//! Exit codes: 0 true/proved/conforms, 1 false/refuted/violations,
//! 2 unknown, 64 usage error, 65 bad input.

use clap::{Args, Parser, Subcommand, ValueEnum};
use pnl_core::dynamic::{check_dproof, parse_relational_sequent, prove_dds, DSearchOutcome};
use pnl_core::game::{
    build_game_tree, play_interactive, render_tree, solve, GameState, Mode, Player, Role,
};
use pnl_core::model::{check_frame, eval_at, load_model, FrameClass, NetworkModel};
use pnl_core::parse_formula;
use pnl_core::sequent::{
    check_proof, elementary_winning, extract_countermodel, parse_sequent, prove, Budget,
    SearchOutcome,
};
use pnl_core::syntax::{Formula, Nominal, Style};
use serde_json::json;
use std::io::{BufRead, Write};
use thiserror::Error;

pub const EXIT_TRUE: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_UNKNOWN: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_DATA: i32 = 65;

#[derive(Parser, Debug)]
#[command(
    name = "pnl",
    version,
    about = "Positive/negative network logic: evaluation, games and proofs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Target {
    /// Model file.
    model: String,
    /// Agent name, or a nominal with --nominal.
    agent: String,
    formula: String,
    /// Address the starting position by nominal.
    #[arg(long)]
    nominal: bool,
}

#[derive(Args, Debug)]
struct BudgetArgs {
    #[arg(long, default_value_t = Budget::default().max_fresh_nominals)]
    max_fresh: usize,
    #[arg(long, default_value_t = Budget::default().max_contractions_per_formula)]
    max_contractions: usize,
    #[arg(long, default_value_t = Budget::default().max_depth)]
    max_depth: usize,
}

impl BudgetArgs {
    fn budget(&self) -> Budget {
        Budget {
            max_fresh_nominals: self.max_fresh,
            max_contractions_per_formula: self.max_contractions,
            max_depth: self.max_depth,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum RoleArg {
    P,
    O,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PlayerArg {
    /// Me, the player who wins when the formula holds for P.
    I,
    /// You.
    Y,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print whether the formula holds at the agent.
    Eval(Target),
    /// Solve the evaluation game and print the winning strategy or the full tree.
    Solve {
        #[command(flatten)]
        target: Target,
        #[arg(long, value_enum, default_value = "p")]
        role: RoleArg,
        /// Print the whole solved game tree.
        #[arg(long, conflicts_with = "strategy")]
        tree: bool,
        /// Print the winner's strategy (the default).
        #[arg(long)]
        strategy: bool,
        #[arg(long)]
        ascii: bool,
        #[arg(long)]
        json: bool,
    },
    /// Play the evaluation game against the solver on stdin.
    Play {
        #[command(flatten)]
        target: Target,
        #[arg(long, value_enum, default_value = "p")]
        role: RoleArg,
        /// Which player you control.
        #[arg(long, value_enum, default_value = "i")]
        human: PlayerArg,
    },
    /// Search for a DS proof of a labeled sequent such as ". => i: [A](p | ~p)".
    Prove {
        sequent: String,
        /// Prove over collectively connected models.
        #[arg(long)]
        cc: bool,
        #[command(flatten)]
        budget: BudgetArgs,
        #[arg(long)]
        json: bool,
    },
    /// Search for a dDS proof of a relational sequent such as "[R-(i,j)] ; . => i: (+) p".
    ProveDyn {
        sequent: String,
        #[command(flatten)]
        budget: BudgetArgs,
        #[arg(long)]
        json: bool,
    },
    /// Decide an elementary sequent and print its canonical countermodel.
    Countermodel {
        sequent: String,
        #[arg(long)]
        cc: bool,
    },
    /// List the frame conditions a model violates.
    CheckFrame {
        model: String,
        #[arg(long)]
        cc: bool,
    },
}

#[derive(Debug, Error)]
enum Failure {
    #[error("{0}")]
    Data(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn data(e: impl std::fmt::Display) -> Failure {
    Failure::Data(e.to_string())
}

fn frame_class(cc: bool) -> FrameClass {
    if cc {
        FrameClass::CollectivelyConnected
    } else {
        FrameClass::Pnl
    }
}

fn read_model(path: &str) -> Result<NetworkModel, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Data(format!("{path}: {e}")))?;
    load_model(&text).map_err(|e| Failure::Data(format!("{path}: {e}")))
}

struct Loaded {
    model: NetworkModel,
    formula: Formula,
    state_at: Box<dyn Fn(Role) -> GameState>,
    mode: Mode,
    agent: usize,
}

fn load_target(t: &Target) -> Result<Loaded, Failure> {
    let model = read_model(&t.model)?;
    let formula = parse_formula(&t.formula).map_err(|e| Failure::Data(format!("formula: {e}")))?;
    let (agent, mode) = if t.nominal {
        let i = Nominal::new(&t.agent);
        let a = model
            .denote(&i)
            .ok_or_else(|| Failure::Data(format!("nominal `{i}` is not in the model")))?;
        (a, Mode::Nominal)
    } else {
        (
            model.index(&t.agent.as_str().into()).map_err(data)?,
            Mode::Agent,
        )
    };
    let (name, nominal, f, m) = (t.agent.clone(), t.nominal, formula.clone(), model.clone());
    let state_at = Box::new(move |role| {
        let g = if nominal {
            GameState::at_nominal(role, &name, f.clone())
        } else {
            GameState::at_agent(role, &name, f.clone())
        };
        g.with_snapshot(m.clone())
    });
    Ok(Loaded {
        model,
        formula,
        state_at,
        mode,
        agent,
    })
}

fn role(r: RoleArg) -> Role {
    match r {
        RoleArg::P => Role::P,
        RoleArg::O => Role::O,
    }
}

fn verdict(yes: bool) -> i32 {
    if yes {
        EXIT_TRUE
    } else {
        EXIT_FALSE
    }
}

/// Runs the command line `args` (including the program name).
pub fn run<I, S>(
    args: I,
    stdin: &mut dyn BufRead,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_TRUE
            };
            let out: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(out, "{}", e.render());
            return code;
        }
    };
    match dispatch(cli.command, stdin, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "pnl: {e}");
            EXIT_DATA
        }
    }
}

fn dispatch(cmd: Command, stdin: &mut dyn BufRead, out: &mut dyn Write) -> Result<i32, Failure> {
    match cmd {
        Command::Eval(t) => {
            let l = load_target(&t)?;
            let v = eval_at(&l.model, l.agent, &l.formula).map_err(data)?;
            writeln!(out, "{v}")?;
            Ok(verdict(v))
        }
        Command::Solve {
            target,
            role: r,
            tree,
            strategy: _,
            ascii,
            json,
        } => {
            let l = load_target(&target)?;
            let g = (l.state_at)(role(r));
            let solved = solve(build_game_tree(&l.model, &g, l.mode).map_err(data)?);
            let shown = if tree {
                &solved.tree
            } else {
                &solved.strategy.tree
            };
            if json {
                let v = json!({ "winner": solved.winner(), "tree": shown });
                writeln!(out, "{}", serde_json::to_string_pretty(&v).map_err(data)?)?;
            } else {
                let style = if ascii { Style::Ascii } else { Style::Unicode };
                write!(out, "{}", render_tree(shown, style))?;
            }
            Ok(verdict(solved.winner() == Player::Me))
        }
        Command::Play {
            target,
            role: r,
            human,
        } => {
            let l = load_target(&target)?;
            let g = (l.state_at)(role(r));
            let human = match human {
                PlayerArg::I => Player::Me,
                PlayerArg::Y => Player::You,
            };
            let outcome =
                play_interactive(&l.model, &g, l.mode, human, stdin, &mut *out).map_err(data)?;
            Ok(verdict(outcome.winner == Player::Me))
        }
        Command::Prove {
            sequent,
            cc,
            budget,
            json,
        } => {
            let s = parse_sequent(&sequent).map_err(data)?;
            let fc = frame_class(cc);
            let outcome = prove(&s, fc, budget.budget());
            match &outcome {
                SearchOutcome::Proved(p) => {
                    if let Err(v) = check_proof(p, fc) {
                        return Err(Failure::Data(format!(
                            "internal: search produced an invalid proof: {v}"
                        )));
                    }
                    if json {
                        writeln!(out, "{}", json!({ "outcome": "proved", "proof": p }))?;
                    } else {
                        write!(out, "Proved\n{}", p.render())?;
                    }
                    Ok(EXIT_TRUE)
                }
                SearchOutcome::Refuted { model, evidence } => {
                    if json {
                        let v = json!({ "outcome": "refuted", "model": model.to_string(), "evidence": evidence });
                        writeln!(out, "{v}")?;
                    } else {
                        writeln!(
                            out,
                            "# Refuted: a {} countermodel",
                            if cc { "connected" } else { "PNL" }
                        )?;
                        write!(out, "{model}")?;
                        for e in evidence {
                            writeln!(out, "# {} is {} at {}", e.formula.ascii(), e.holds, e.agent)?;
                        }
                    }
                    Ok(EXIT_FALSE)
                }
                SearchOutcome::Unknown(report) => {
                    if json {
                        writeln!(out, "{}", json!({ "outcome": "unknown", "report": report }))?;
                    } else {
                        writeln!(out, "Unknown")?;
                        writeln!(out, "{}", serde_json::to_string(report).map_err(data)?)?;
                    }
                    Ok(EXIT_UNKNOWN)
                }
            }
        }
        Command::ProveDyn {
            sequent,
            budget,
            json,
        } => {
            let s = parse_relational_sequent(&sequent).map_err(data)?;
            match prove_dds(&s, budget.budget()).map_err(data)? {
                DSearchOutcome::Proved(p) => {
                    if let Err(v) = check_dproof(&p) {
                        return Err(Failure::Data(format!(
                            "internal: search produced an invalid proof: {v}"
                        )));
                    }
                    if json {
                        writeln!(out, "{}", json!({ "outcome": "proved", "proof": p }))?;
                    } else {
                        write!(out, "Proved\n{}", p.render())?;
                    }
                    Ok(EXIT_TRUE)
                }
                DSearchOutcome::Unknown(report) => {
                    if json {
                        writeln!(out, "{}", json!({ "outcome": "unknown", "report": report }))?;
                    } else {
                        writeln!(out, "Unknown")?;
                        writeln!(out, "{}", serde_json::to_string(&report).map_err(data)?)?;
                    }
                    Ok(EXIT_UNKNOWN)
                }
            }
        }
        Command::Countermodel { sequent, cc } => {
            let s = parse_sequent(&sequent).map_err(data)?;
            let fc = frame_class(cc);
            if let Some(w) = elementary_winning(&s, fc).map_err(data)? {
                writeln!(out, "winning (condition {})", w.condition())?;
                return Ok(EXIT_TRUE);
            }
            let m = extract_countermodel(&s, fc).map_err(data)?;
            write!(out, "{m}")?;
            Ok(EXIT_FALSE)
        }
        Command::CheckFrame { model, cc } => {
            let m = read_model(&model)?;
            let violations = check_frame(&m, frame_class(cc));
            if violations.is_empty() {
                writeln!(out, "conforms")?;
            }
            for v in &violations {
                writeln!(out, "{v}")?;
            }
            Ok(verdict(violations.is_empty()))
        }
    }
}
