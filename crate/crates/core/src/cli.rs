//! Command-line driver.
//!
//! Exit codes: 0 affirmative (valid, sat, passed), 1 negative (invalid,
//! unsat up to the bound, violations, counterexamples), 2 usage or parse
//! error, 3 aborted by a budget or cap.

use std::fmt::Display;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::checker;
use crate::frames::validate_model;
use crate::kernel::{Agent, Formula, Model};
use crate::oracle;
use crate::satbound::{self, SatVerdict};
use crate::soundness::{binding_pool, run_suite, LabelledModel, SuiteError, Verdict};
use crate::textio::{parse_formula, parse_model, render_formula, render_model};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct ExitStatus {
    pub code: i32,
}

impl ExitStatus {
    pub const AFFIRMATIVE: ExitStatus = ExitStatus { code: 0 };
    pub const NEGATIVE: ExitStatus = ExitStatus { code: 1 };
    pub const USAGE: ExitStatus = ExitStatus { code: 2 };
    pub const ABORTED: ExitStatus = ExitStatus { code: 3 };

    fn verdict(affirmative: bool) -> Self {
        if affirmative {
            Self::AFFIRMATIVE
        } else {
            Self::NEGATIVE
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "bpictl",
    version,
    about = "Model checker for CTL with belief, preference and intention"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a formula on a model.
    Check {
        model: PathBuf,
        #[command(flatten)]
        formula: FormulaArg,
        /// Print the satisfying states (the default).
        #[arg(long, conflicts_with = "valid")]
        states: bool,
        /// Print VALID, or INVALID with a counterexample state.
        #[arg(long)]
        valid: bool,
        /// Evaluate with the reference interpreter instead of the checker.
        #[arg(long)]
        oracle: bool,
    },
    /// Check every frame condition.
    Validate { model: PathBuf },
    /// Run the soundness suite on a frame-valid model.
    Axioms {
        model: PathBuf,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Number of metavariable bindings.
        #[arg(long, default_value_t = 50)]
        pool: usize,
    },
    /// Bounded satisfiability over small frame-valid models.
    Sat {
        #[command(flatten)]
        formula: FormulaArg,
        #[arg(long, default_value_t = satbound::DEFAULT_MAX_STATES)]
        max_states: usize,
        #[arg(long, default_value_t = satbound::DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Parse a `.bpi` or `.bpm` file and print it canonically.
    Fmt { file: PathBuf },
}

#[derive(Args, Debug)]
struct FormulaArg {
    /// Formula text, or a `.bpi` file if the text does not parse.
    #[arg(required_unless_present = "expr")]
    formula: Option<String>,
    /// Inline formula; takes precedence over the positional argument.
    #[arg(short = 'e', long = "expr")]
    expr: Option<String>,
}

/// A failure that ends the invocation with a diagnostic.
struct Failure {
    status: ExitStatus,
    message: String,
}

impl Failure {
    fn usage(message: impl Display) -> Self {
        Failure {
            status: ExitStatus::USAGE,
            message: message.to_string(),
        }
    }
}

type Outcome = Result<ExitStatus, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn load_model(path: &Path) -> Result<Model, Failure> {
    parse_model(&read(path)?).map_err(|e| Failure::usage(format!("{}:{e}", path.display())))
}

fn load_formula(arg: &FormulaArg) -> Result<Formula, Failure> {
    if let Some(text) = &arg.expr {
        return parse_formula(text).map_err(|e| Failure::usage(format!("formula:{e}")));
    }
    let text = arg.formula.as_deref().expect("clap requires one of the two");
    match parse_formula(text) {
        Ok(f) => Ok(f),
        Err(inline_err) => {
            let path = Path::new(text);
            if path.is_file() {
                parse_formula(&read(path)?).map_err(|e| Failure::usage(format!("{}:{e}", path.display())))
            } else {
                Err(Failure::usage(format!("formula:{inline_err}")))
            }
        }
    }
}

/// Runs one invocation; `argv[0]` is the program name.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> ExitStatus
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                ExitStatus::USAGE
            } else {
                // --help and --version
                let _ = write!(out, "{text}");
                ExitStatus::AFFIRMATIVE
            };
        }
    };
    let result = match cli.command {
        Command::Check {
            model,
            formula,
            valid,
            oracle,
            ..
        } => check(&model, &formula, valid, oracle, out),
        Command::Validate { model } => validate(&model, out),
        Command::Axioms { model, seed, pool } => axioms(&model, seed, pool, out, err),
        Command::Sat {
            formula,
            max_states,
            budget,
        } => sat(&formula, max_states, budget, out, err),
        Command::Fmt { file } => fmt(&file, out),
    };
    match result {
        Ok(status) => status,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.status
        }
    }
}

fn emit(out: &mut dyn Write, text: impl Display) -> Result<(), Failure> {
    write!(out, "{text}").map_err(|e| Failure::usage(format!("write failed: {e}")))
}

fn check(model: &Path, formula: &FormulaArg, valid: bool, use_oracle: bool, out: &mut dyn Write) -> Outcome {
    let m = load_model(model)?;
    let f = load_formula(formula)?;
    let states = if use_oracle {
        oracle::denote(&m, &f)
    } else {
        checker::eval(&m, &f)
    }
    .map_err(Failure::usage)?;
    if !valid {
        emit(out, format!("{}\n", m.render_set(&states)))?;
        return Ok(ExitStatus::AFFIRMATIVE);
    }
    match (0..m.len()).find(|&s| !states.contains(s)) {
        None => {
            emit(out, "VALID\n")?;
            Ok(ExitStatus::AFFIRMATIVE)
        }
        Some(s) => {
            emit(out, format!("INVALID\nCEX: {}\n", m.state_name(s)))?;
            Ok(ExitStatus::NEGATIVE)
        }
    }
}

fn validate(model: &Path, out: &mut dyn Write) -> Outcome {
    let m = load_model(model)?;
    let report = validate_model(&m);
    emit(out, report.render(&m))?;
    Ok(if report.violations.is_empty() && !report.skipped.is_empty() {
        ExitStatus::ABORTED
    } else {
        ExitStatus::verdict(report.passed())
    })
}

fn axioms(model: &Path, seed: u64, pool: usize, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let m = load_model(model)?;
    let atoms: Vec<&str> = m.atoms().iter().map(String::as_str).collect();
    let agents: Vec<Agent> = m.agents().map(|a| a.agent().clone()).collect();
    if atoms.is_empty() || agents.is_empty() {
        return Err(Failure::usage(
            "the suite needs a model with at least one atom and one agent",
        ));
    }
    let bindings = binding_pool(seed, &atoms, &agents, pool);
    let id = model
        .file_stem()
        .map_or("model".into(), |s| s.to_string_lossy().into_owned());
    let report = match run_suite(&[LabelledModel { id, model: m }], &bindings) {
        Ok(report) => report,
        Err(SuiteError::Rejected { report, .. }) => {
            emit(out, "REJECTED\n")?;
            let _ = write!(err, "{report}");
            return Ok(ExitStatus::NEGATIVE);
        }
        Err(e) => return Err(Failure::usage(e)),
    };
    let mut text = String::new();
    for instance in &report {
        text.push_str(&instance.line());
        text.push('\n');
    }
    let cex = report.iter().filter(|i| i.verdict != Verdict::Valid).count();
    text.push_str(&format!("TOTAL {} CEX {cex}\n", report.len()));
    emit(out, text)?;
    Ok(ExitStatus::verdict(cex == 0))
}

fn sat(formula: &FormulaArg, max_states: usize, budget: u64, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let f = load_formula(formula)?;
    let result = satbound::sat_search(&f, max_states, budget).map_err(Failure::usage)?;
    let bound = result
        .theoretical_bound
        .map_or("overflow".to_string(), |b| b.to_string());
    let _ = writeln!(
        err,
        "explored {} candidates; |Sub*| = {}, state bound {bound}",
        result.explored, result.bound_exponent
    );
    match &result.verdict {
        SatVerdict::Sat { model, witness } => {
            emit(
                out,
                format!("SAT {}\n{}", model.state_name(*witness), render_model(model)),
            )?;
            Ok(ExitStatus::AFFIRMATIVE)
        }
        SatVerdict::UnsatUpTo(k) => {
            emit(out, format!("UNSAT-UP-TO {k}\n"))?;
            Ok(ExitStatus::NEGATIVE)
        }
        SatVerdict::Aborted { budget } => {
            emit(out, format!("ABORTED budget {budget}\n"))?;
            Ok(ExitStatus::ABORTED)
        }
    }
}

fn fmt(file: &Path, out: &mut dyn Write) -> Outcome {
    let text = read(file)?;
    let located = |e| Failure::usage(format!("{}:{e}", file.display()));
    let rendered = match file.extension().and_then(|e| e.to_str()) {
        Some("bpm") => render_model(&parse_model(&text).map_err(located)?),
        Some("bpi") => format!("{}\n", render_formula(&parse_formula(&text).map_err(located)?)),
        _ => match parse_model(&text) {
            Ok(m) => render_model(&m),
            Err(_) => format!("{}\n", render_formula(&parse_formula(&text).map_err(located)?)),
        },
    };
    emit(out, rendered)?;
    Ok(ExitStatus::AFFIRMATIVE)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("bpictl").chain(args.iter().copied());
        let status = run(argv, &mut out, &mut err);
        (
            status.code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn unknown_subcommand_is_usage() {
        let (code, out, err) = call(&["frobnicate"]);
        assert_eq!(code, 2);
        assert!(out.is_empty());
        assert!(err.contains("Usage"), "{err}");
    }

    #[test]
    fn unknown_flag_is_usage() {
        let (code, _, err) = call(&["sat", "p", "--bogus"]);
        assert_eq!(code, 2);
        assert!(err.contains("Usage"));
    }

    #[test]
    fn inline_sat() {
        let (code, out, _) = call(&["sat", "p & !p"]);
        assert_eq!((code, out.as_str()), (1, "UNSAT-UP-TO 3\n"));
        let (code, out, _) = call(&["sat", "--max-states", "1", "-e", "p", "ignored.bpi"]);
        assert_eq!(code, 0);
        assert!(out.starts_with("SAT s0\nstates s0\n"), "{out}");
    }

    #[test]
    fn missing_file_and_bad_formula() {
        let (code, _, err) = call(&["validate", "/nonexistent/m.bpm"]);
        assert_eq!(code, 2);
        assert!(err.starts_with("error: /nonexistent/m.bpm"));
        let (code, _, err) = call(&["sat", "p &"]);
        assert_eq!(code, 2);
        assert!(err.starts_with("error: formula:1:"), "{err}");
    }

    #[test]
    fn tiny_budget_aborts() {
        let (code, out, _) = call(&["sat", "--budget", "1", "P{a}p & !p"]);
        assert_eq!((code, out.as_str()), (3, "ABORTED budget 1\n"));
    }
}
