//! The `propnet` command line.

use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::afflag::{aff_blackbox, AffLagRelModel};
use crate::bondgraph::{naturality_sides, BondFModel, BondGModel};
use crate::circuit::{CircuitError, CircuitModel, LCircuit};
use crate::laws::{run_suite, SuiteError};
use crate::linrel::{blackbox, describe_difference, LagRelModel, RelError, VarStyle};
use crate::scalar::{Field, Rat, RatFunc};
use crate::setprops::{BoolRelModel, CorelModel, CospanModel, SpanModel};
use crate::sigflow::{square_sides, FinRelModel};
use crate::term::{eval, parse_terms, PropModel, PropTerm, TermError};

pub const MODELS: [&str; 11] = [
    "circuit",
    "lagrel",
    "afflag",
    "corel",
    "cospan",
    "span",
    "finrel-set",
    "finrelk",
    "sigflow",
    "bondgraph-f",
    "bondgraph-g",
];

#[derive(Debug, Parser)]
#[command(name = "propnet", version, about = "Semantics of circuits, signal-flow diagrams and bond graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FieldChoice {
    /// Rationals.
    Q,
    /// Rational functions in s.
    Qs,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the behavior of a circuit given as JSON.
    Blackbox {
        #[arg(long)]
        circuit: PathBuf,
        #[arg(long, value_enum, default_value = "qs")]
        field: FieldChoice,
    },
    /// Evaluate every term in a file in a model.
    Eval {
        #[arg(long)]
        model: String,
        #[arg(long)]
        term: PathBuf,
        #[arg(long, value_enum, default_value = "qs")]
        field: FieldChoice,
    },
    /// Compare the first term of two files in a model.
    Eq {
        #[arg(long)]
        model: String,
        #[arg(long, value_enum, default_value = "qs")]
        field: FieldChoice,
        lhs: PathBuf,
        rhs: PathBuf,
    },
    /// Run a named law suite.
    Laws { suite: String },
    /// Check naturality of α on every bond graph term in a file.
    Alpha {
        #[arg(long)]
        term: PathBuf,
    },
    /// Check the circuit/signal-flow square on every circuit term in a file.
    Square {
        #[arg(long)]
        term: PathBuf,
        #[arg(long, value_enum, default_value = "qs")]
        field: FieldChoice,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("{path}: {source}")]
    Term { path: String, source: TermError },
    #[error("{path}: no term found")]
    NoTerm { path: String },
    #[error(transparent)]
    Eval(#[from] TermError),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Relation(#[from] RelError),
    #[error(transparent)]
    Suite(#[from] SuiteError),
    #[error("unknown model `{0}` (known: {known})", known = MODELS.join(", "))]
    UnknownModel(String),
    #[error("{0}")]
    Check(String),
    #[error("writing output: {0}")]
    Output(#[from] io::Error),
}

fn read_source(path: &Path) -> Result<String, CliError> {
    let io_err = |source| CliError::Io {
        path: path.display().to_string(),
        source,
    };
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(io_err)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(io_err)
    }
}

fn read_terms(path: &Path) -> Result<Vec<PropTerm>, CliError> {
    let src = read_source(path)?;
    let terms = parse_terms(&src).map_err(|source| CliError::Term {
        path: path.display().to_string(),
        source,
    })?;
    if terms.is_empty() {
        return Err(CliError::NoTerm {
            path: path.display().to_string(),
        });
    }
    Ok(terms)
}

/// A model together with a printer for its values.
trait Semantics {
    fn show(&self, t: &PropTerm) -> Result<String, TermError>;
    /// Whether the terms denote equal values, with a witness when they differ.
    fn compare(&self, a: &PropTerm, b: &PropTerm) -> Result<(bool, Option<String>), TermError>;
}

struct Registered<M: PropModel> {
    model: M,
    show: fn(&M::Value) -> String,
}

impl<M: PropModel> Semantics for Registered<M> {
    fn show(&self, t: &PropTerm) -> Result<String, TermError> {
        Ok((self.show)(&eval(t, &self.model)?))
    }

    fn compare(&self, a: &PropTerm, b: &PropTerm) -> Result<(bool, Option<String>), TermError> {
        let (x, y) = (eval(a, &self.model)?, eval(b, &self.model)?);
        if self.model.equal(&x, &y) {
            return Ok((true, None));
        }
        let witness = self
            .model
            .distinguish(&x, &y)
            .unwrap_or_else(|| format!("first:\n{}\nsecond:\n{}", (self.show)(&x), (self.show)(&y)));
        Ok((false, Some(witness)))
    }
}

fn boxed<M: PropModel + 'static>(model: M, show: fn(&M::Value) -> String) -> Box<dyn Semantics> {
    Box::new(Registered { model, show })
}

fn field_model<F: Field + 'static>(name: &str) -> Option<Box<dyn Semantics>> {
    Some(match name {
        "lagrel" => boxed(LagRelModel::<F>::default(), |v| v.to_text(VarStyle::Circuit)),
        "afflag" => boxed(AffLagRelModel::<F>::default(), |v| v.to_text(VarStyle::Circuit)),
        "finrelk" | "sigflow" => boxed(FinRelModel::<F>::default(), |v| v.to_text(VarStyle::Plain)),
        "bondgraph-f" => boxed(BondFModel::<F>::default(), |v| v.to_text(VarStyle::Bond)),
        _ => return None,
    })
}

fn model(name: &str, field: FieldChoice) -> Result<Box<dyn Semantics>, CliError> {
    let fixed = match name {
        "circuit" => Some(boxed(CircuitModel::default(), |c| c.to_json())),
        "corel" => Some(boxed(CorelModel::default(), |v| v.to_string())),
        "cospan" => Some(boxed(CospanModel::default(), |v| v.to_string())),
        "span" => Some(boxed(SpanModel::default(), |v| v.to_string())),
        "finrel-set" => Some(boxed(BoolRelModel::default(), |v| v.to_string())),
        "bondgraph-g" => Some(boxed(BondGModel::default(), |v| v.to_string())),
        _ => None,
    };
    fixed
        .or_else(|| match field {
            FieldChoice::Q => field_model::<Rat>(name),
            FieldChoice::Qs => field_model::<RatFunc>(name),
        })
        .ok_or_else(|| CliError::UnknownModel(name.to_string()))
}

fn blackbox_text<F: Field>(c: &LCircuit) -> Result<String, CliError> {
    Ok(if c.has_sources() {
        aff_blackbox::<F>(c)?.to_text(VarStyle::Circuit)
    } else {
        blackbox::<F>(c)?.to_text(VarStyle::Circuit)
    })
}

fn square_line<F: Field>(t: &PropTerm) -> Result<(bool, Option<String>), CliError> {
    let (flow, direct) = square_sides::<F>(t).map_err(CliError::Check)?;
    let same = flow.equals(&direct);
    Ok((same, describe_difference(&flow, &direct, VarStyle::Circuit)))
}

fn verdict(out: &mut dyn Write, ok: bool, what: &str, detail: Option<String>) -> io::Result<()> {
    writeln!(out, "{} {what}", if ok { "PASS" } else { "FAIL" })?;
    if let (false, Some(d)) = (ok, detail) {
        writeln!(out, "  {d}")?;
    }
    Ok(())
}

/// Runs one command, writing its report to `out`. `Ok(true)` when every
/// check in the invocation passed.
pub fn run(cmd: &Command, out: &mut dyn Write) -> Result<bool, CliError> {
    match cmd {
        Command::Blackbox { circuit, field } => {
            let c = LCircuit::from_json(&read_source(circuit)?)?;
            let text = match field {
                FieldChoice::Q => blackbox_text::<Rat>(&c)?,
                FieldChoice::Qs => blackbox_text::<RatFunc>(&c)?,
            };
            write!(out, "{text}")?;
            Ok(true)
        }
        Command::Eval { model: name, term, field } => {
            let m = model(name, *field)?;
            for t in read_terms(term)? {
                let text = m.show(&t)?;
                writeln!(out, "{}", text.trim_end())?;
            }
            Ok(true)
        }
        Command::Eq { model: name, field, lhs, rhs } => {
            let m = model(name, *field)?;
            let a = read_terms(lhs)?.swap_remove(0);
            let b = read_terms(rhs)?.swap_remove(0);
            let (same, witness) = m.compare(&a, &b)?;
            if same {
                writeln!(out, "EQUAL")?;
            } else {
                writeln!(out, "DIFFER")?;
                if let Some(w) = witness {
                    writeln!(out, "{w}")?;
                }
            }
            Ok(same)
        }
        Command::Laws { suite } => {
            let checks = run_suite(suite)?;
            for c in &checks {
                writeln!(out, "{}", c.line())?;
            }
            let unexpected = checks.iter().filter(|c| !c.as_expected()).count();
            writeln!(out, "{suite}: {} checks, {unexpected} unexpected", checks.len())?;
            Ok(unexpected == 0)
        }
        Command::Alpha { term } => {
            let mut all = true;
            for t in read_terms(term)? {
                let (lhs, rhs) = naturality_sides::<Rat>(&t)?;
                let ok = lhs.equals(&rhs);
                all &= ok;
                verdict(out, ok, &t.to_string(), describe_difference(&lhs, &rhs, VarStyle::Bond))?;
            }
            Ok(all)
        }
        Command::Square { term, field } => {
            let mut all = true;
            for t in read_terms(term)? {
                let (ok, detail) = match field {
                    FieldChoice::Q => square_line::<Rat>(&t)?,
                    FieldChoice::Qs => square_line::<RatFunc>(&t)?,
                };
                all &= ok;
                verdict(out, ok, &t.to_string(), detail)?;
            }
            Ok(all)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (Result<bool, CliError>, String) {
        let cli = Cli::try_parse_from(std::iter::once("propnet").chain(args.iter().copied())).unwrap();
        let mut buf = Vec::new();
        let r = run(&cli.command, &mut buf);
        (r, String::from_utf8(buf).unwrap())
    }

    fn temp(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    #[test]
    fn eval_corel_and_eq() {
        let a = temp("(seq (gen d) (gen m))");
        let b = temp("(id 1)");
        let (r, out) = run_args(&["eval", "--model", "corel", "--term", a.path().to_str().unwrap()]);
        assert!(r.unwrap());
        assert!(out.starts_with("corel 1 1"));
        let (r, out) = run_args(&["eq", "--model", "corel", a.path().to_str().unwrap(), b.path().to_str().unwrap()]);
        assert!(r.unwrap());
        assert_eq!(out, "EQUAL\n");
        let c = temp("(seq (gen e) (gen i))");
        let (r, out) = run_args(&["eq", "--model", "corel", c.path().to_str().unwrap(), b.path().to_str().unwrap()]);
        assert!(!r.unwrap());
        assert!(out.starts_with("DIFFER\n"));
    }

    #[test]
    fn unknown_names_are_errors() {
        let a = temp("(id 1)");
        let (r, _) = run_args(&["eval", "--model", "nope", "--term", a.path().to_str().unwrap()]);
        assert!(matches!(r, Err(CliError::UnknownModel(_))));
        let (r, _) = run_args(&["laws", "nope"]);
        assert!(matches!(r, Err(CliError::Suite(SuiteError::Unknown(_)))));
    }

    #[test]
    fn every_model_name_resolves() {
        for name in MODELS {
            assert!(model(name, FieldChoice::Q).is_ok(), "{name}");
        }
    }
}
