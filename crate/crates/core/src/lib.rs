//! Parse OCL invariants against a structural model and evaluate them over an
//! object model.
//!
//! The pipeline is: [`io`] loads a [`model::StructuralModel`] (with its
//! constraint texts) and an [`model::ObjectModel`]; [`parser`] turns each
//! constraint into an [`ast::ConstraintAst`]; [`eval::resolve`] type-checks it
//! against the structural model; [`eval::evaluate_constraint`] runs it over
//! every instance of the context class. [`eval::evaluate_all`] drives the whole
//! thing and captures failures per constraint.

pub mod ast;
pub mod eval;
pub mod io;
pub mod model;
pub mod parser;
