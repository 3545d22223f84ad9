//! `bocl`: check and evaluate OCL invariants stored in a model file.
//!
//! Exit codes: 0 when everything holds, 1 when some invariant is violated,
//! 2 on any error (unreadable input, bad constraint, evaluation failure).

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bocl_core::ast::ast_to_json;
use bocl_core::eval::{check_constraint, evaluate_all, ConstraintError, Outcome};
use bocl_core::io::{load_objects, load_structural, write_report, IoError, Loaded, ReportFormat};
use bocl_core::model::ModelDiagnostic;
use clap::{Parser, Subcommand, ValueEnum};

const EXIT_FALSE: u8 = 1;
const EXIT_ERROR: u8 = 2;

#[derive(Parser)]
#[command(name = "bocl", version, about = "Check and evaluate OCL invariants over object models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and type-check every constraint of a structural model.
    Check {
        model: PathBuf,
        /// Write the syntax tree of each constraint as JSON into this directory.
        #[arg(long, value_name = "DIR")]
        emit_ast: Option<PathBuf>,
    },
    /// Evaluate every constraint over an object model.
    Eval {
        model: PathBuf,
        objects: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Check { model, emit_ast } => cmd_check(&model, emit_ast.as_deref()),
        Command::Eval { model, objects, format } => cmd_eval(&model, &objects, format),
    };
    ExitCode::from(code)
}

fn report_load_error(what: &Path, err: &IoError) {
    match err {
        IoError::NotFound { .. } | IoError::Io { .. } => eprintln!("error: {err}"),
        _ => eprintln!("error: {}: {err}", what.display()),
    }
    for diag in err.diagnostics() {
        eprintln!("  {diag}");
    }
}

fn print_warnings(warnings: &[ModelDiagnostic]) {
    for w in warnings {
        eprintln!("{w}");
    }
}

fn load<T>(path: &Path, loader: impl FnOnce(&Path) -> Result<Loaded<T>, IoError>) -> Result<T, u8> {
    match loader(path) {
        Ok(loaded) => {
            print_warnings(&loaded.warnings);
            Ok(loaded.value)
        }
        Err(err) => {
            report_load_error(path, &err);
            Err(EXIT_ERROR)
        }
    }
}

fn cmd_check(model_path: &Path, emit_ast: Option<&Path>) -> u8 {
    let model = match load(model_path, |p| load_structural(p)) {
        Ok(m) => m,
        Err(code) => return code,
    };
    if let Some(dir) = emit_ast {
        if let Err(err) = fs::create_dir_all(dir) {
            eprintln!("error: {}: {err}", dir.display());
            return EXIT_ERROR;
        }
    }

    let mut failed = false;
    for def in &model.constraints {
        match check_constraint(def, &model) {
            Ok(typed) => {
                println!("{}: OK", def.name);
                if let Some(dir) = emit_ast {
                    let path = dir.join(format!("{}.ast.json", def.name));
                    let text = serde_json::to_string_pretty(&ast_to_json(&typed.ast))
                        .expect("AST JSON always serializes")
                        + "\n";
                    if let Err(err) = fs::write(&path, text) {
                        eprintln!("error: {}: {err}", path.display());
                        failed = true;
                    }
                }
            }
            Err(ConstraintError::Resolve(errors)) => {
                failed = true;
                for e in errors {
                    eprintln!("{}: error: {e}", def.name);
                }
            }
            Err(err) => {
                failed = true;
                eprintln!("{}: error: {err}", def.name);
            }
        }
    }
    if failed {
        EXIT_ERROR
    } else {
        0
    }
}

fn cmd_eval(model_path: &Path, objects_path: &Path, format: Format) -> u8 {
    let model = match load(model_path, |p| load_structural(p)) {
        Ok(m) => m,
        Err(code) => return code,
    };
    let objects = match load(objects_path, |p| load_objects(p, &model)) {
        Ok(o) => o,
        Err(code) => return code,
    };

    let report = evaluate_all(&model, &objects);
    let format = match format {
        Format::Text => ReportFormat::Text,
        Format::Json => ReportFormat::Json,
    };
    let mut stdout = io::stdout().lock();
    if let Err(err) = write_report(&report, format, &mut stdout).and_then(|_| stdout.flush()) {
        eprintln!("error: writing report: {err}");
        return EXIT_ERROR;
    }

    if report.any(Outcome::Error) {
        EXIT_ERROR
    } else if report.any(Outcome::False) {
        EXIT_FALSE
    } else {
        0
    }
}
