//! `teamlogic`: command-line access to the team-logic toolkit.
//!
//! Exit codes: 0 for success or a true answer, 1 for a false answer or a
//! rejected proof, 2 for usage and input errors, 3 when a size guard trips.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use teamlogic::decide::{
    entailment_counterexample, equivalent, is_satisfiable, is_valid, truth_table,
};
use teamlogic::formula::{parse, parse_any, render, vars, Formula, FormulaError, Fragment, VarId};
use teamlogic::normalform::{normalize, synthesize, NormalFormError, NormalFormStyle};
use teamlogic::proof::{
    check_hilbert, check_nd, parse_hilbert, parse_proof, render_proof, synth_entailment_pd,
    synth_entailment_pdv_all, ProofError, ProofSystem,
};
use teamlogic::semantics::{eval, is_flat, Mode, SemanticsError};
use teamlogic::team::{IndexSet, Team, TeamError, TeamFamily};
use teamlogic::translate::{translate_atoms, AtomStyle};

const STACK_SIZE: usize = 256 * 1024 * 1024;

#[derive(Parser)]
#[command(
    name = "teamlogic",
    version,
    about = "Propositional team logics: evaluation, decision, normal forms and proofs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a formula, check it against a fragment and print it back.
    Parse {
        #[arg(long, default_value = "pt0")]
        fragment: String,
        formula: String,
    },
    /// Evaluate a formula on the team stored in a CSV file.
    Eval {
        #[arg(long)]
        team: PathBuf,
        /// Enumerate every cover for tensor instead of complementary splits.
        #[arg(long)]
        oracle: bool,
        formula: String,
    },
    /// Is the formula true in every team?
    Valid { formula: String },
    /// Is the formula true in some nonempty team?
    Sat { formula: String },
    /// Do the premises entail the conclusion?
    Entails {
        #[arg(long = "premise")]
        premises: Vec<String>,
        conclusion: String,
    },
    /// Are the two formulas equivalent?
    Equiv { left: String, right: String },
    /// Tabulate a formula over every team.
    Table {
        /// Comma-separated variable list such as `1,2` or `p1,p2`.
        #[arg(long)]
        vars: Option<String>,
        #[arg(long, value_enum, default_value_t = TableFormat::Ascii)]
        format: TableFormat,
        formula: String,
    },
    /// Rewrite a formula into a normal form.
    Nf {
        #[arg(long, value_enum)]
        style: NfStyle,
        /// Use only maximal teams (or minimal non-members for dep-cnf).
        #[arg(long)]
        maximal: bool,
        formula: String,
    },
    /// Build a formula defining the family of teams in a JSON file.
    Synth {
        #[arg(long)]
        family: PathBuf,
        #[arg(long, value_enum)]
        style: NfStyle,
        #[arg(long)]
        maximal: bool,
    },
    /// Rewrite every dependence atom.
    Translate {
        #[arg(long, value_enum)]
        style: TranslateStyle,
        formula: String,
    },
    /// Is the formula flat?
    Flat { formula: String },
    /// Produce a natural deduction derivation of an entailment.
    Prove {
        #[arg(long, value_enum)]
        system: NdSystem,
        #[arg(long = "premise")]
        premises: Vec<String>,
        conclusion: String,
        /// Write the derivation here instead of standard output.
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
    /// Check a derivation file.
    Checkproof {
        #[arg(long, value_enum)]
        system: AnySystem,
        file: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum TableFormat {
    Ascii,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum NfStyle {
    TensorDnf,
    NegnegDnf,
    DepCnf,
}

impl From<NfStyle> for NormalFormStyle {
    fn from(s: NfStyle) -> Self {
        match s {
            NfStyle::TensorDnf => NormalFormStyle::TensorDnf,
            NfStyle::NegnegDnf => NormalFormStyle::NegNegDnf,
            NfStyle::DepCnf => NormalFormStyle::DepCnf,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum TranslateStyle {
    Lem,
    Realizations,
    Implication,
}

impl From<TranslateStyle> for AtomStyle {
    fn from(s: TranslateStyle) -> Self {
        match s {
            TranslateStyle::Lem => AtomStyle::TensorLem,
            TranslateStyle::Realizations => AtomStyle::RealizationDisjunction,
            TranslateStyle::Implication => AtomStyle::Implication,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum NdSystem {
    Pdv,
    Pd,
}

#[derive(Clone, Copy, ValueEnum)]
enum AnySystem {
    Inql,
    Pid,
    Pdv,
    Pd,
}

impl From<AnySystem> for ProofSystem {
    fn from(s: AnySystem) -> Self {
        match s {
            AnySystem::Inql => ProofSystem::HInqL,
            AnySystem::Pid => ProofSystem::HPid,
            AnySystem::Pdv => ProofSystem::NdPdV,
            AnySystem::Pd => ProofSystem::NdPd,
        }
    }
}

/// A diagnostic and the exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Failure {
        Failure {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<FormulaError> for Failure {
    fn from(e: FormulaError) -> Self {
        Failure::usage(e.to_string())
    }
}

impl From<TeamError> for Failure {
    fn from(e: TeamError) -> Self {
        let code = if matches!(e, TeamError::SizeGuard { .. }) {
            3
        } else {
            2
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<SemanticsError> for Failure {
    fn from(e: SemanticsError) -> Self {
        match e {
            SemanticsError::Team(t) => t.into(),
            other => Failure::usage(other.to_string()),
        }
    }
}

impl From<NormalFormError> for Failure {
    fn from(e: NormalFormError) -> Self {
        match e {
            NormalFormError::Semantics(s) => s.into(),
            other => Failure::usage(other.to_string()),
        }
    }
}

impl From<ProofError> for Failure {
    fn from(e: ProofError) -> Self {
        match e {
            ProofError::SizeGuard { .. } => Failure {
                code: 3,
                message: e.to_string(),
            },
            ProofError::Semantics(s) => s.into(),
            ProofError::Formula(f) => f.into(),
            ProofError::Syntax { .. } | ProofError::WrongSystem(_) | ProofError::BadParams(_) => {
                Failure::usage(e.to_string())
            }
            other => Failure {
                code: 1,
                message: other.to_string(),
            },
        }
    }
}

/// What a successful command prints and which code it ends with.
struct Outcome {
    stdout: String,
    code: u8,
}

fn answer(b: bool) -> Outcome {
    Outcome {
        stdout: format!("{b}\n"),
        code: u8::from(!b),
    }
}

fn line(s: impl std::fmt::Display) -> Outcome {
    Outcome {
        stdout: format!("{s}\n"),
        code: 0,
    }
}

fn formula(text: &str) -> Result<Formula, Failure> {
    parse_any(text).map_err(|e| Failure::usage(format!("in {text:?}: {e}")))
}

fn read(path: &PathBuf) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn var_list(text: &str) -> Result<IndexSet, Failure> {
    let mut out = Vec::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let digits = item.strip_prefix('p').unwrap_or(item);
        let v: VarId = digits
            .parse()
            .map_err(|_| Failure::usage(format!("bad variable {item:?} in --vars")))?;
        out.push(v);
    }
    Ok(IndexSet::new(out))
}

fn team_string(n: &IndexSet, mask: u64) -> Result<String, Failure> {
    let team = Team::from_mask(n.clone(), mask)?;
    let vars: Vec<String> = n.vars().iter().map(|v| format!("p{v}")).collect();
    let rows: Vec<String> = team.members().iter().map(|s| s.bitstring()).collect();
    Ok(format!("({}) {{{}}}", vars.join(","), rows.join(", ")))
}

fn run(command: Command) -> Result<Outcome, Failure> {
    match command {
        Command::Parse {
            fragment,
            formula: text,
        } => {
            let frag = Fragment::from_name(&fragment)
                .ok_or_else(|| Failure::usage(format!("unknown fragment {fragment:?}")))?;
            let f = parse(&text, frag).map_err(|e| Failure::usage(format!("in {text:?}: {e}")))?;
            Ok(line(render(&f)))
        }
        Command::Eval {
            team,
            oracle,
            formula: text,
        } => {
            let f = formula(&text)?;
            let x = Team::from_csv(read(&team)?.as_bytes())?;
            let mode = if oracle { Mode::Oracle } else { Mode::Fast };
            Ok(answer(eval(&f, &x, mode)?))
        }
        Command::Valid { formula: text } => Ok(answer(is_valid(&formula(&text)?)?)),
        Command::Sat { formula: text } => Ok(answer(is_satisfiable(&formula(&text)?)?)),
        Command::Entails {
            premises,
            conclusion,
        } => {
            let gamma = premises
                .iter()
                .map(|s| formula(s))
                .collect::<Result<Vec<_>, _>>()?;
            let phi = formula(&conclusion)?;
            match entailment_counterexample(&gamma, &phi)? {
                None => Ok(answer(true)),
                Some((n, mask)) => Ok(Outcome {
                    stdout: format!("false\ncounterexample: {}\n", team_string(&n, mask)?),
                    code: 1,
                }),
            }
        }
        Command::Equiv { left, right } => {
            Ok(answer(equivalent(&formula(&left)?, &formula(&right)?)?))
        }
        Command::Table {
            vars: list,
            format,
            formula: text,
        } => {
            let f = formula(&text)?;
            let n = match list {
                Some(l) => var_list(&l)?,
                None => IndexSet::from(vars(&f)),
            };
            let table = truth_table(&f, &n)?;
            let stdout = match format {
                TableFormat::Ascii => table.to_ascii(),
                TableFormat::Csv => table.to_csv(),
            };
            Ok(Outcome { stdout, code: 0 })
        }
        Command::Nf {
            style,
            maximal,
            formula: text,
        } => Ok(line(normalize(&formula(&text)?, style.into(), maximal)?)),
        Command::Synth {
            family,
            style,
            maximal,
        } => {
            let k = TeamFamily::from_json(&read(&family)?)?;
            Ok(line(synthesize(&k, style.into(), maximal)?))
        }
        Command::Translate {
            style,
            formula: text,
        } => Ok(line(translate_atoms(&formula(&text)?, style.into()))),
        Command::Flat { formula: text } => Ok(answer(is_flat(&formula(&text)?)?)),
        Command::Prove {
            system,
            premises,
            conclusion,
            output,
        } => {
            let frag = match system {
                NdSystem::Pdv => Fragment::PdV,
                NdSystem::Pd => Fragment::Pd,
            };
            let parse_in =
                |s: &str| parse(s, frag).map_err(|e| Failure::usage(format!("in {s:?}: {e}")));
            let gamma = premises
                .iter()
                .map(|s| parse_in(s))
                .collect::<Result<Vec<_>, _>>()?;
            let phi = parse_in(&conclusion)?;
            let d = match system {
                NdSystem::Pdv => synth_entailment_pdv_all(&gamma, &phi)?,
                NdSystem::Pd => synth_entailment_pd(&gamma, &phi)?,
            };
            let text = render_proof(&d);
            match output {
                Some(path) => {
                    fs::write(&path, &text)
                        .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
                    let sys = match system {
                        NdSystem::Pdv => ProofSystem::NdPdV,
                        NdSystem::Pd => ProofSystem::NdPd,
                    };
                    Ok(line(check_nd(&d, sys)?))
                }
                None => Ok(Outcome {
                    stdout: text,
                    code: 0,
                }),
            }
        }
        Command::Checkproof { system, file } => {
            let text = read(&file)?;
            let sys: ProofSystem = system.into();
            let judgment = if sys.is_hilbert() {
                check_hilbert(&parse_hilbert(&text)?, sys)?
            } else {
                check_nd(&parse_proof(&text)?, sys)?
            };
            Ok(line(judgment))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let worker = std::thread::Builder::new()
        .stack_size(STACK_SIZE)
        .spawn(move || run(cli.command));
    let result = match worker.map(|h| h.join()) {
        Ok(Ok(r)) => r,
        _ => Err(Failure {
            code: 101,
            message: "internal error".into(),
        }),
    };
    match result {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(out.stdout.as_bytes());
            ExitCode::from(out.code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
