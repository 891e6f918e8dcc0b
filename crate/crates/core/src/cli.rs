//! Command-line front end. [`run`] takes the argument list and the output
//! streams so that it can be driven from tests.

use crate::algebra::{compose, join_all, split};
use crate::completion::{completion, is_tight, loop_formulas, render_formulas};
use crate::decomposition::decompose;
use crate::equivalence::{
    eva_counterexample, equivalent_in_context_with, modularly_equivalent_with, Method, Side,
};
use crate::error::{Error, Result};
use crate::model::{atom_set, show_set, DlpFunction};
use crate::parser::{parse_document, render_document, render_models, ModuleDocument, ParseOptions};
use crate::qbf::{encode_sat, encode_unsat, evaluate_qbf_with, parse_qbf_reporting};
use crate::semantics::{solve, Engine, Limits};
use crate::shifting::general_shift_named;
use clap::{Parser, Subcommand, ValueEnum};
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

#[derive(Parser, Debug)]
#[command(name = "modlp", version, about = "Modular disjunctive logic programs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the stable models of a module.
    Solve {
        file: PathBuf,
        #[arg(long, default_value_t = Engine::Reduct, value_enum)]
        engine: Engine,
        /// Largest signature enumerated.
        #[arg(long, default_value_t = 24)]
        cap: usize,
        /// Largest component whose loops are enumerated.
        #[arg(long, default_value_t = 12)]
        loop_cap: usize,
    },
    /// Compose two modules that respect each other's interfaces.
    Compose { first: PathBuf, second: PathBuf },
    /// Join modules from left to right.
    Join {
        #[arg(required = true, num_args = 1..)]
        files: Vec<PathBuf>,
    },
    /// Split a module along its strongly connected components.
    Decompose {
        file: PathBuf,
        /// Write one file per part instead of printing them.
        #[arg(long)]
        outdir: Option<PathBuf>,
    },
    /// Apply general shifting.
    Shift {
        file: PathBuf,
        /// Name rule bodies with at least N literals (2 when N is omitted).
        #[arg(long, value_name = "N", num_args = 0..=1, default_missing_value = "2")]
        name_bodies: Option<usize>,
    },
    /// Split an ordinary program at a splitting set.
    Split {
        file: PathBuf,
        /// Comma-separated atoms of the splitting set.
        #[arg(long, value_delimiter = ',', required = true)]
        set: Vec<String>,
    },
    /// Report whether the positive dependency graph is acyclic.
    Tight { file: PathBuf },
    /// Print the completion, optionally with the loop formulas.
    Completion {
        file: PathBuf,
        #[arg(long)]
        with_loops: bool,
        #[arg(long, default_value_t = 12)]
        loop_cap: usize,
    },
    /// Check modular equivalence of two modules.
    Verify {
        first: PathBuf,
        second: PathBuf,
        #[arg(long, default_value_t = Method::Direct, value_enum)]
        method: Method,
        /// Compare the joins with this module instead.
        #[arg(long)]
        context: Option<PathBuf>,
        #[arg(long, default_value_t = 24)]
        cap: usize,
        /// Largest visible signature scanned by the EVA check.
        #[arg(long, default_value_t = 16)]
        eva_cap: usize,
    },
    /// Encode or evaluate a two-level QBF.
    Qbf {
        #[command(subcommand)]
        action: QbfAction,
    },
    /// Check whether a module has enough visible atoms.
    Eva {
        file: PathBuf,
        #[arg(long, default_value_t = 16)]
        eva_cap: usize,
    },
}

#[derive(Subcommand, Debug)]
enum QbfAction {
    /// Print the two modules of the encoding.
    Encode {
        file: PathBuf,
        #[arg(long, value_enum)]
        part: Option<Part>,
    },
    /// Decide validity through the encoding.
    Eval {
        file: PathBuf,
        #[arg(long, default_value_t = 24)]
        cap: usize,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Part {
    Sat,
    Unsat,
}

impl ValueEnum for Method {
    fn value_variants<'a>() -> &'a [Self] {
        &[Method::Direct, Method::Translate]
    }

    fn to_possible_value(&self) -> Option<clap::builder::PossibleValue> {
        Some(clap::builder::PossibleValue::new(match self {
            Method::Direct => "direct",
            Method::Translate => "translate",
        }))
    }
}

impl ValueEnum for Engine {
    fn value_variants<'a>() -> &'a [Self] {
        &[Engine::Reduct, Engine::Complf]
    }

    fn to_possible_value(&self) -> Option<clap::builder::PossibleValue> {
        Some(clap::builder::PossibleValue::new(match self {
            Engine::Reduct => "reduct",
            Engine::Complf => "complf",
        }))
    }
}

/// Runs one command and returns the exit status: 0 for success or a
/// positive answer, 1 for a negative answer, 2 for errors.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                2
            } else {
                let _ = write!(out, "{text}");
                0
            };
        }
    };
    match execute(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {}: {e}", e.kind());
            2
        }
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn load(path: &Path) -> Result<DlpFunction> {
    let options = ParseOptions {
        allow_reserved: true,
    };
    Ok(parse_document(&read(path)?, options)?.module)
}

fn emit(out: &mut dyn Write, text: &str) -> Result<()> {
    out.write_all(text.as_bytes()).map_err(|e| Error::Io {
        path: "<stdout>".into(),
        message: e.to_string(),
    })
}

fn emit_line(out: &mut dyn Write, text: &str) -> Result<()> {
    emit(out, text)?;
    emit(out, "\n")
}

fn document(name: &str, module: DlpFunction) -> String {
    render_document(&ModuleDocument {
        name: Some(name.to_owned()),
        module,
    })
}

/// File-name friendly form of an atom name.
fn sanitize(name: &str) -> String {
    name.chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '_' { c } else { '_' })
        .collect()
}

fn execute(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let defaults = Limits::default();
    match command {
        Command::Solve {
            file,
            engine,
            cap,
            loop_cap,
        } => {
            let limits = Limits {
                enumeration: cap,
                minimal: cap.min(defaults.minimal),
                loops: loop_cap,
                ..defaults
            };
            let models = solve(&load(&file)?, engine, &limits)?;
            if models.is_empty() {
                return Ok(1);
            }
            emit_line(out, &render_models(&models))?;
            Ok(0)
        }
        Command::Compose { first, second } => {
            let module = compose(&load(&first)?, &load(&second)?)?;
            emit(out, &module.to_string())?;
            Ok(0)
        }
        Command::Join { files } => {
            let modules = files.iter().map(|f| load(f)).collect::<Result<Vec<_>>>()?;
            emit(out, &join_all(&modules)?.to_string())?;
            Ok(0)
        }
        Command::Decompose { file, outdir } => {
            let d = decompose(&load(&file)?);
            let mut named = vec![("part_0".to_owned(), d.constraint_module.clone())];
            for (set, module) in &d.parts {
                let base = format!(
                    "part_{}",
                    sanitize(set.first().map(|a| a.name()).unwrap_or("empty"))
                );
                let mut name = base.clone();
                let mut k = 1;
                while named.iter().any(|(n, _)| *n == name) {
                    k += 1;
                    name = format!("{base}_{k}");
                }
                named.push((name, module.clone()));
            }
            match outdir {
                Some(dir) => {
                    std::fs::create_dir_all(&dir).map_err(|e| Error::Io {
                        path: dir.display().to_string(),
                        message: e.to_string(),
                    })?;
                    for (name, module) in named {
                        let path = dir.join(format!("{name}.dlpm"));
                        std::fs::write(&path, document(&name, module)).map_err(|e| Error::Io {
                            path: path.display().to_string(),
                            message: e.to_string(),
                        })?;
                        emit_line(out, &path.display().to_string())?;
                    }
                }
                None => {
                    let texts: Vec<String> =
                        named.into_iter().map(|(n, m)| document(&n, m)).collect();
                    emit(out, &texts.join("\n"))?;
                }
            }
            Ok(0)
        }
        Command::Shift { file, name_bodies } => {
            emit(out, &general_shift_named(&load(&file)?, name_bodies).to_string())?;
            Ok(0)
        }
        Command::Split { file, set } => {
            let set = atom_set(set.iter().map(|s| s.trim()).filter(|s| !s.is_empty()));
            let (bottom, top) = split(&load(&file)?, &set)?;
            emit(out, &document("bottom", bottom))?;
            emit(out, "\n")?;
            emit(out, &document("top", top))?;
            Ok(0)
        }
        Command::Tight { file } => {
            let tight = is_tight(&load(&file)?);
            emit_line(out, if tight { "tight" } else { "not tight" })?;
            Ok(if tight { 0 } else { 1 })
        }
        Command::Completion {
            file,
            with_loops,
            loop_cap,
        } => {
            let module = load(&file)?;
            let mut formulas = completion(&module);
            if with_loops {
                formulas.extend(loop_formulas(&module, loop_cap)?);
            }
            if !formulas.is_empty() {
                emit_line(out, &render_formulas(&formulas))?;
            }
            Ok(0)
        }
        Command::Verify {
            first,
            second,
            method,
            context,
            cap,
            eva_cap,
        } => {
            let limits = Limits {
                enumeration: cap,
                eva: eva_cap,
                ..defaults
            };
            let (p1, p2) = (load(&first)?, load(&second)?);
            let verdict = match (context, method) {
                (None, method) => modularly_equivalent_with(&p1, &p2, method, &limits)?,
                (Some(c), Method::Direct) => {
                    let ctx = load(&c)?;
                    modularly_equivalent_with(
                        &crate::algebra::join(&p1, &ctx)?,
                        &crate::algebra::join(&p2, &ctx)?,
                        Method::Direct,
                        &limits,
                    )?
                }
                (Some(c), Method::Translate) => {
                    equivalent_in_context_with(&p1, &p2, &load(&c)?, &limits)?
                }
            };
            if verdict.equivalent {
                emit_line(out, "EQUIVALENT")?;
                return Ok(0);
            }
            emit_line(out, "NOT EQUIVALENT")?;
            if let Some((side, model)) = verdict.witness {
                let file = match side {
                    Side::First => &first,
                    Side::Second => &second,
                };
                emit_line(
                    out,
                    &format!("witness: {} from {}", show_set(&model), file.display()),
                )?;
            }
            Ok(1)
        }
        Command::Qbf { action } => match action {
            QbfAction::Encode { file, part } => {
                let (q, dropped) = parse_qbf_reporting(&read(&file)?)?;
                for line in &dropped {
                    emit_line(out, &format!("% duplicate disjunct on line {line} removed"))?;
                }
                match part {
                    Some(Part::Sat) => emit(out, &encode_sat(&q).to_string())?,
                    Some(Part::Unsat) => emit(out, &encode_unsat(&q).to_string())?,
                    None => {
                        emit(out, &document("sat", encode_sat(&q)))?;
                        emit(out, "\n")?;
                        emit(out, &document("unsat", encode_unsat(&q)))?;
                    }
                }
                Ok(0)
            }
            QbfAction::Eval { file, cap } => {
                let (q, dropped) = parse_qbf_reporting(&read(&file)?)?;
                for line in &dropped {
                    let _ = writeln!(err, "note: duplicate disjunct on line {line} removed");
                }
                let limits = Limits {
                    enumeration: cap,
                    ..defaults
                };
                let verdict = evaluate_qbf_with(&q, &limits)?;
                match verdict.certificate {
                    Some(c) if verdict.valid => {
                        emit_line(out, &format!("VALID {}", show_set(&c)))?;
                        Ok(0)
                    }
                    _ => {
                        emit_line(out, "INVALID")?;
                        Ok(1)
                    }
                }
            }
        },
        Command::Eva { file, eva_cap } => {
            let limits = Limits {
                eva: eva_cap,
                ..defaults
            };
            match eva_counterexample(&load(&file)?, &limits)? {
                None => {
                    emit_line(out, "EVA")?;
                    Ok(0)
                }
                Some(mv) => {
                    emit_line(out, &format!("NO EVA on input {}", show_set(&mv)))?;
                    Ok(1)
                }
            }
        }
    }
}
