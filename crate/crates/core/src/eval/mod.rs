//! Resolution and evaluation of invariants.

mod interp;
mod resolve;
mod value;

use std::fmt;

use crate::model::{ConstraintDef, ObjectModel, StructuralModel};
use crate::parser::{parse_constraint, ParseError, ParseErrorKind};

pub use interp::{evaluate_constraint, evaluate_expr, RuntimeError};
pub use resolve::{
    resolve, resolve_expr, ResolutionError, ResolutionErrorKind, Type, TypedConstraint, TypedExpr, TypedKind,
};
pub use value::{Collection, Environment, MixedCollection, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    True,
    False,
    Error,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::True => "True",
            Outcome::False => "False",
            Outcome::Error => "Error",
        })
    }
}

/// Result of checking one invariant over one object model.
///
/// `overall` is `True` iff every entry of `per_instance` is true (vacuously so
/// with no instances). On `Error`, `per_instance` holds the instances checked
/// before the failure.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintVerdict {
    pub constraint_name: String,
    /// Name written after `inv` in the constraint text, if any.
    pub invariant_name: Option<String>,
    pub overall: Outcome,
    pub per_instance: Vec<(String, bool)>,
    pub error_message: Option<String>,
}

impl ConstraintVerdict {
    fn error(constraint_name: &str, message: String) -> Self {
        ConstraintVerdict {
            constraint_name: constraint_name.to_string(),
            invariant_name: None,
            overall: Outcome::Error,
            per_instance: Vec::new(),
            error_message: Some(message),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportEntry {
    /// The constraint text as written in the model.
    pub expression: String,
    pub verdict: ConstraintVerdict,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct EvaluationReport {
    pub results: Vec<ReportEntry>,
}

impl EvaluationReport {
    pub fn all_true(&self) -> bool {
        self.results.iter().all(|r| r.verdict.overall == Outcome::True)
    }

    pub fn any(&self, outcome: Outcome) -> bool {
        self.results.iter().any(|r| r.verdict.overall == outcome)
    }
}

/// Why a model constraint could not be turned into a typed invariant.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConstraintError {
    #[error("{}", parse_message(.0))]
    Parse(ParseError),
    #[error("constraint is declared on {declared} but its text has context {found}")]
    ContextMismatch { declared: String, found: String },
    #[error("{}", join_resolution(.0))]
    Resolve(Vec<ResolutionError>),
}

fn parse_message(err: &ParseError) -> String {
    match err.kind {
        ParseErrorKind::UnsupportedStereotype => err.to_string(),
        ParseErrorKind::Lexical | ParseErrorKind::Syntax => format!("syntax error at {err}"),
    }
}

fn join_resolution(errors: &[ResolutionError]) -> String {
    errors.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

/// Parses and resolves one model constraint.
pub fn check_constraint(def: &ConstraintDef, model: &StructuralModel) -> Result<TypedConstraint, ConstraintError> {
    let ast = parse_constraint(&def.expression).map_err(ConstraintError::Parse)?;
    if ast.context != def.context {
        return Err(ConstraintError::ContextMismatch { declared: def.context.clone(), found: ast.context });
    }
    resolve(&ast, model).map_err(ConstraintError::Resolve)
}

/// Parses, resolves and evaluates every constraint of `model` in declaration
/// order. A failing constraint yields an `Error` verdict; the rest still run.
pub fn evaluate_all(model: &StructuralModel, objects: &ObjectModel) -> EvaluationReport {
    let results = model
        .constraints
        .iter()
        .map(|def| {
            let verdict = match check_constraint(def, model) {
                Ok(typed) => {
                    ConstraintVerdict { constraint_name: def.name.clone(), ..evaluate_constraint(&typed, objects) }
                }
                Err(err) => ConstraintVerdict::error(&def.name, err.to_string()),
            };
            ReportEntry { expression: def.expression.clone(), verdict }
        })
        .collect();
    EvaluationReport { results }
}
