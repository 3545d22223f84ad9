//! Name and type resolution of a parsed constraint against a structural model.

use std::fmt;

use crate::ast::{CollectionOperator, ConstraintAst, Expr, InfixOperator, IteratorKind, UnaryOperator};
use crate::model::{EndRef, PrimitiveType, StructuralModel};

use super::value::Value;

/// Static type of an expression.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Type {
    Bool,
    Int,
    Real,
    Str,
    Date,
    /// An instance of the named class.
    Object(String),
    /// A flat collection; the element type is never itself a collection.
    Collection(Box<Type>),
}

impl Type {
    fn is_numeric(&self) -> bool {
        matches!(self, Type::Int | Type::Real)
    }

    fn collection_of(element: Type) -> Type {
        match element {
            Type::Collection(_) => element,
            other => Type::Collection(Box::new(other)),
        }
    }
}

impl From<PrimitiveType> for Type {
    fn from(ty: PrimitiveType) -> Self {
        match ty {
            PrimitiveType::Int => Type::Int,
            PrimitiveType::Real => Type::Real,
            PrimitiveType::Str => Type::Str,
            PrimitiveType::Bool => Type::Bool,
            PrimitiveType::Date => Type::Date,
        }
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Type::Bool => f.write_str("Boolean"),
            Type::Int => f.write_str("Integer"),
            Type::Real => f.write_str("Real"),
            Type::Str => f.write_str("String"),
            Type::Date => f.write_str("Date"),
            Type::Object(class) => f.write_str(class),
            Type::Collection(elem) => write!(f, "Collection({elem})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TypedExpr {
    pub ty: Type,
    pub kind: TypedKind,
}

#[derive(Debug, Clone, PartialEq)]
pub enum TypedKind {
    SelfRef,
    Variable(String),
    Literal(Value),
    Attribute {
        source: Box<TypedExpr>,
        name: String,
    },
    /// `scalar` is set when the end's upper bound is 1.
    Navigation {
        source: Box<TypedExpr>,
        role: String,
        end: EndRef,
        scalar: bool,
    },
    Binary {
        op: InfixOperator,
        left: Box<TypedExpr>,
        right: Box<TypedExpr>,
    },
    Unary {
        op: UnaryOperator,
        operand: Box<TypedExpr>,
    },
    If {
        condition: Box<TypedExpr>,
        then_branch: Box<TypedExpr>,
        else_branch: Box<TypedExpr>,
    },
    Iterator {
        source: Box<TypedExpr>,
        kind: IteratorKind,
        variable: String,
        body: Box<TypedExpr>,
    },
    CollectionOp {
        source: Box<TypedExpr>,
        op: CollectionOperator,
    },
    /// Wraps a single value into a one-element collection (`x->op()` on a
    /// non-collection `x`).
    AsCollection(Box<TypedExpr>),
    /// Integer to real promotion.
    ToReal(Box<TypedExpr>),
}

/// A constraint whose body has been resolved to type Boolean.
#[derive(Debug, Clone, PartialEq)]
pub struct TypedConstraint {
    pub ast: ConstraintAst,
    pub body: TypedExpr,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ResolutionErrorKind {
    UnknownProperty,
    UnknownRole,
    UnknownVariable,
    TypeMismatch,
    UnknownContextClass,
    UnsupportedConstruct,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{path}: {message}")]
pub struct ResolutionError {
    pub kind: ResolutionErrorKind,
    pub message: String,
    /// Location in the tree, e.g. `body.left.source`.
    pub path: String,
}

/// Resolves every name in `ast` against `model` and assigns types. All
/// problems are collected rather than stopping at the first.
pub fn resolve(ast: &ConstraintAst, model: &StructuralModel) -> Result<TypedConstraint, Vec<ResolutionError>> {
    let body = resolve_expr(&ast.body, &ast.context, model)?;
    if body.ty != Type::Bool {
        return Err(vec![ResolutionError {
            kind: ResolutionErrorKind::TypeMismatch,
            message: format!("invariant body must be Boolean, found {}", body.ty),
            path: "body".into(),
        }]);
    }
    Ok(TypedConstraint { ast: ast.clone(), body })
}

/// Types a free-standing expression with `self` bound to an instance of
/// `context`. Unlike [`resolve`], the result may have any type.
pub fn resolve_expr(expr: &Expr, context: &str, model: &StructuralModel) -> Result<TypedExpr, Vec<ResolutionError>> {
    if model.class(context).is_none() {
        return Err(vec![ResolutionError {
            kind: ResolutionErrorKind::UnknownContextClass,
            message: format!("unknown context class '{context}'"),
            path: "context".into(),
        }]);
    }
    let mut resolver = Resolver { model, self_class: context, scope: Vec::new(), errors: Vec::new() };
    match resolver.expr(expr, "body") {
        Some(body) if resolver.errors.is_empty() => Ok(body),
        _ => Err(resolver.errors),
    }
}

struct Resolver<'m> {
    model: &'m StructuralModel,
    self_class: &'m str,
    scope: Vec<(String, Type)>,
    errors: Vec<ResolutionError>,
}

fn typed(ty: Type, kind: TypedKind) -> Option<TypedExpr> {
    Some(TypedExpr { ty, kind })
}

/// Lifts a scalar to a collection for `->`. A single-valued navigation becomes
/// the set of linked objects, so an unlinked end gives an empty collection.
fn as_collection(expr: TypedExpr) -> TypedExpr {
    let ty = match expr.ty {
        Type::Collection(_) => return expr,
        ref ty => Type::collection_of(ty.clone()),
    };
    match expr.kind {
        TypedKind::Navigation { source, role, end, scalar: true } => {
            TypedExpr { ty, kind: TypedKind::Navigation { source, role, end, scalar: false } }
        }
        kind => TypedExpr { ty, kind: TypedKind::AsCollection(Box::new(TypedExpr { ty: expr.ty, kind })) },
    }
}

fn promote(expr: TypedExpr) -> TypedExpr {
    if expr.ty == Type::Int {
        TypedExpr { ty: Type::Real, kind: TypedKind::ToReal(Box::new(expr)) }
    } else {
        expr
    }
}

impl Resolver<'_> {
    fn error(&mut self, kind: ResolutionErrorKind, path: &str, message: impl Into<String>) {
        self.errors.push(ResolutionError { kind, message: message.into(), path: path.to_string() });
    }

    fn mismatch(&mut self, path: &str, message: impl Into<String>) -> Option<TypedExpr> {
        self.error(ResolutionErrorKind::TypeMismatch, path, message);
        None
    }

    fn expr(&mut self, expr: &Expr, path: &str) -> Option<TypedExpr> {
        match expr {
            Expr::SelfRef => typed(Type::Object(self.self_class.to_string()), TypedKind::SelfRef),
            Expr::Variable { name } => match self.scope.iter().rev().find(|(n, _)| n == name) {
                Some((_, ty)) => typed(ty.clone(), TypedKind::Variable(name.clone())),
                None => {
                    self.error(ResolutionErrorKind::UnknownVariable, path, format!("unknown variable '{name}'"));
                    None
                }
            },
            Expr::IntegerLiteral { value } => typed(Type::Int, TypedKind::Literal(Value::Int(*value))),
            Expr::RealLiteral { value } => typed(Type::Real, TypedKind::Literal(Value::Real(*value))),
            Expr::StringLiteral { value } => typed(Type::Str, TypedKind::Literal(Value::Str(value.clone()))),
            Expr::BooleanLiteral { value } => typed(Type::Bool, TypedKind::Literal(Value::Bool(*value))),
            Expr::Property { source, name } => {
                let source = self.expr(source, &format!("{path}.source"))?;
                self.property(source, name, path)
            }
            Expr::OperationCall { op, left, right } => {
                let left = self.expr(left, &format!("{path}.left"));
                let right = self.expr(right, &format!("{path}.right"));
                self.binary(*op, left?, right?, path)
            }
            Expr::Unary { op, operand } => {
                let operand = self.expr(operand, &format!("{path}.operand"))?;
                let ty = match (op, &operand.ty) {
                    (UnaryOperator::Not, Type::Bool) => Type::Bool,
                    (UnaryOperator::Neg, ty @ (Type::Int | Type::Real)) => ty.clone(),
                    (UnaryOperator::Not, ty) => {
                        return self.mismatch(path, format!("'not' requires Boolean, found {ty}"))
                    }
                    (UnaryOperator::Neg, ty) => {
                        return self.mismatch(path, format!("'-' requires a number, found {ty}"))
                    }
                };
                typed(ty, TypedKind::Unary { op: *op, operand: Box::new(operand) })
            }
            Expr::If { condition, then_branch, else_branch } => {
                let condition = self.expr(condition, &format!("{path}.condition"));
                let then_branch = self.expr(then_branch, &format!("{path}.then"));
                let else_branch = self.expr(else_branch, &format!("{path}.else"));
                let (condition, then_branch, else_branch) = (condition?, then_branch?, else_branch?);
                if condition.ty != Type::Bool {
                    return self.mismatch(path, format!("if condition must be Boolean, found {}", condition.ty));
                }
                let (then_branch, else_branch) = match (&then_branch.ty, &else_branch.ty) {
                    (a, b) if a == b => (then_branch, else_branch),
                    (a, b) if a.is_numeric() && b.is_numeric() => (promote(then_branch), promote(else_branch)),
                    (a, b) => return self.mismatch(path, format!("if branches have incompatible types {a} and {b}")),
                };
                typed(
                    then_branch.ty.clone(),
                    TypedKind::If {
                        condition: Box::new(condition),
                        then_branch: Box::new(then_branch),
                        else_branch: Box::new(else_branch),
                    },
                )
            }
            Expr::Iterator { source, iterator, variable, variable_type, body } => {
                let source = as_collection(self.expr(source, &format!("{path}.source"))?);
                let Type::Collection(element) = source.ty.clone() else { unreachable!() };
                if let Some(annotated) = variable_type {
                    let expected = match element.as_ref() {
                        Type::Object(class) => class.as_str(),
                        Type::Int => "Integer",
                        Type::Real => "Real",
                        Type::Str => "String",
                        Type::Bool => "Boolean",
                        Type::Date => "Date",
                        Type::Collection(_) => unreachable!("collections are flat"),
                    };
                    if annotated != expected {
                        return self.mismatch(
                            path,
                            format!(
                                "iterator variable '{variable}' declared as {annotated} but iterates over {element}"
                            ),
                        );
                    }
                }
                self.scope.push((variable.clone(), *element.clone()));
                let body = self.expr(body, &format!("{path}.body"));
                self.scope.pop();
                let body = body?;
                let ty = match iterator {
                    IteratorKind::Collect => Type::collection_of(body.ty.clone()),
                    _ if body.ty != Type::Bool => {
                        return self.mismatch(
                            &format!("{path}.body"),
                            format!("{} body must be Boolean, found {}", iterator.name(), body.ty),
                        )
                    }
                    IteratorKind::ForAll | IteratorKind::Exists => Type::Bool,
                    IteratorKind::Select | IteratorKind::Reject => source.ty.clone(),
                };
                typed(
                    ty,
                    TypedKind::Iterator {
                        source: Box::new(source),
                        kind: *iterator,
                        variable: variable.clone(),
                        body: Box::new(body),
                    },
                )
            }
            Expr::CollectionOp { source, op } => {
                let source = as_collection(self.expr(source, &format!("{path}.source"))?);
                let ty = match op {
                    CollectionOperator::Size => Type::Int,
                    CollectionOperator::IsEmpty | CollectionOperator::NotEmpty => Type::Bool,
                };
                typed(ty, TypedKind::CollectionOp { source: Box::new(source), op: *op })
            }
        }
    }

    fn property(&mut self, source: TypedExpr, name: &str, path: &str) -> Option<TypedExpr> {
        let class_name = match &source.ty {
            Type::Object(class) => class.clone(),
            Type::Collection(_) => {
                self.error(
                    ResolutionErrorKind::UnsupportedConstruct,
                    path,
                    format!("implicit collect is not supported; write ->collect(x | x.{name})"),
                );
                return None;
            }
            other => return self.mismatch(path, format!("cannot access '{name}' on a value of type {other}")),
        };
        let model = self.model;
        let class = model.class(&class_name).expect("object types always name a model class");
        if let Some(attr) = class.attribute(name) {
            return typed(attr.ty.into(), TypedKind::Attribute { source: Box::new(source), name: name.to_string() });
        }
        if let Some((end_ref, end)) = model.navigable_end(&class_name, name) {
            let target = Type::Object(end.target.clone());
            let scalar = end.multiplicity.is_scalar();
            let ty = if scalar { target } else { Type::collection_of(target) };
            return typed(
                ty,
                TypedKind::Navigation { source: Box::new(source), role: name.to_string(), end: end_ref, scalar },
            );
        }
        let is_role_elsewhere = model.associations.iter().any(|a| a.end_named(name).is_some());
        if is_role_elsewhere {
            self.error(
                ResolutionErrorKind::UnknownRole,
                path,
                format!("role '{name}' is not navigable from {class_name}"),
            );
        } else {
            self.error(
                ResolutionErrorKind::UnknownProperty,
                path,
                format!("class {class_name} has no attribute or role '{name}'"),
            );
        }
        None
    }

    fn binary(&mut self, op: InfixOperator, left: TypedExpr, right: TypedExpr, path: &str) -> Option<TypedExpr> {
        let (lt, rt) = (&left.ty, &right.ty);
        let ty = match op {
            InfixOperator::And | InfixOperator::Or => {
                if lt != &Type::Bool || rt != &Type::Bool {
                    return self.mismatch(path, format!("'{op}' requires Boolean operands, found {lt} and {rt}"));
                }
                Type::Bool
            }
            InfixOperator::Eq | InfixOperator::Ne => {
                let ok = (lt.is_numeric() && rt.is_numeric())
                    || (lt == rt && matches!(lt, Type::Str | Type::Bool | Type::Date))
                    || (matches!(lt, Type::Object(_)) && matches!(rt, Type::Object(_)));
                if !ok {
                    return self.mismatch(path, format!("cannot compare {lt} with {rt} using '{op}'"));
                }
                Type::Bool
            }
            InfixOperator::Lt | InfixOperator::Gt | InfixOperator::Le | InfixOperator::Ge => {
                let ok = (lt.is_numeric() && rt.is_numeric()) || (lt == &Type::Date && rt == &Type::Date);
                if !ok {
                    return self.mismatch(path, format!("cannot order {lt} and {rt} using '{op}'"));
                }
                Type::Bool
            }
            InfixOperator::Add | InfixOperator::Sub | InfixOperator::Mul | InfixOperator::Div => {
                if !lt.is_numeric() || !rt.is_numeric() {
                    return self.mismatch(path, format!("'{op}' requires numeric operands, found {lt} and {rt}"));
                }
                if op != InfixOperator::Div && lt == &Type::Int && rt == &Type::Int {
                    Type::Int
                } else {
                    Type::Real
                }
            }
        };
        typed(ty, TypedKind::Binary { op, left: Box::new(left), right: Box::new(right) })
    }
}
