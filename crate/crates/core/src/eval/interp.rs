//! Tree-walking evaluation of resolved expressions over an object model.

use std::cmp::Ordering;
use std::collections::HashMap;

use thiserror::Error;

use crate::ast::{CollectionOperator, InfixOperator, IteratorKind, UnaryOperator};
use crate::model::{follow_end, instances_of, ObjectInstance, ObjectModel};

use super::resolve::{TypedConstraint, TypedExpr, TypedKind};
use super::value::{Collection, Environment, Value};
use super::{ConstraintVerdict, Outcome};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuntimeError {
    #[error("object '{object}' has no value for attribute '{attribute}'")]
    MissingSlot { object: String, attribute: String },
    #[error("division by zero")]
    DivisionByZero,
    #[error("object '{object}' has no link via '{role}'")]
    NavigationEmpty { object: String, role: String },
    #[error("object '{object}' has {count} links via single-valued role '{role}'")]
    NavigationAmbiguous { object: String, role: String, count: usize },
    #[error("integer overflow")]
    IntegerOverflow,
    /// The expression and environment disagree (unbound variable, unknown
    /// object, ill-typed operand); cannot happen for resolved constraints.
    #[error("internal evaluation error: {0}")]
    Internal(String),
}

type EvalResult = Result<Value, RuntimeError>;

fn internal(msg: impl Into<String>) -> RuntimeError {
    RuntimeError::Internal(msg.into())
}

/// Evaluates a resolved expression with the given bindings.
pub fn evaluate_expr(expr: &TypedExpr, env: &mut Environment, objects: &ObjectModel) -> EvalResult {
    Interpreter::new(objects).eval(expr, env)
}

/// Evaluates a resolved invariant once per instance of its context class, in
/// ascending object-name order, stopping at the first runtime error.
pub fn evaluate_constraint(typed: &TypedConstraint, objects: &ObjectModel) -> ConstraintVerdict {
    let interp = Interpreter::new(objects);
    let mut verdict = ConstraintVerdict {
        constraint_name: typed.ast.name.clone().unwrap_or_default(),
        invariant_name: typed.ast.name.clone(),
        overall: Outcome::True,
        per_instance: Vec::new(),
        error_message: None,
    };
    for instance in instances_of(objects, &typed.ast.context) {
        let mut env = Environment::new(instance.name.clone());
        match interp.eval(&typed.body, &mut env) {
            Ok(Value::Bool(holds)) => {
                verdict.per_instance.push((instance.name.clone(), holds));
                if !holds {
                    verdict.overall = Outcome::False;
                }
            }
            Ok(other) => {
                verdict.overall = Outcome::Error;
                verdict.error_message = Some(format!("invariant evaluated to non-Boolean value {other}"));
                break;
            }
            Err(err) => {
                verdict.overall = Outcome::Error;
                verdict.error_message = Some(err.to_string());
                break;
            }
        }
    }
    verdict
}

struct Interpreter<'a> {
    objects: &'a ObjectModel,
    by_name: HashMap<&'a str, &'a ObjectInstance>,
}

impl<'a> Interpreter<'a> {
    fn new(objects: &'a ObjectModel) -> Self {
        let by_name = objects.objects.iter().map(|o| (o.name.as_str(), o)).collect();
        Interpreter { objects, by_name }
    }

    fn object(&self, value: &Value) -> Result<&'a ObjectInstance, RuntimeError> {
        match value {
            Value::Object(name) => {
                self.by_name.get(name.as_str()).copied().ok_or_else(|| internal(format!("unknown object '{name}'")))
            }
            other => Err(internal(format!("expected an object, found {other}"))),
        }
    }

    fn eval_bool(&self, expr: &TypedExpr, env: &mut Environment) -> Result<bool, RuntimeError> {
        match self.eval(expr, env)? {
            Value::Bool(b) => Ok(b),
            other => Err(internal(format!("expected a Boolean, found {other}"))),
        }
    }

    fn eval_collection(&self, expr: &TypedExpr, env: &mut Environment) -> Result<Collection, RuntimeError> {
        match self.eval(expr, env)? {
            Value::Collection(c) => Ok(c),
            other => Err(internal(format!("expected a collection, found {other}"))),
        }
    }

    fn eval(&self, expr: &TypedExpr, env: &mut Environment) -> EvalResult {
        match &expr.kind {
            TypedKind::SelfRef => Ok(Value::Object(env.self_object().to_string())),
            TypedKind::Variable(name) => {
                env.lookup(name).cloned().ok_or_else(|| internal(format!("unbound variable '{name}'")))
            }
            TypedKind::Literal(value) => Ok(value.clone()),
            TypedKind::Attribute { source, name } => {
                let object = self.object(&self.eval(source, env)?)?;
                object
                    .slots
                    .get(name)
                    .map(Value::from)
                    .ok_or_else(|| RuntimeError::MissingSlot { object: object.name.clone(), attribute: name.clone() })
            }
            TypedKind::Navigation { source, role, end, scalar } => {
                let object = self.object(&self.eval(source, env)?)?;
                let linked = follow_end(self.objects, end, &object.name);
                if *scalar {
                    match linked.as_slice() {
                        [one] => Ok(Value::Object(one.name.clone())),
                        [] => Err(RuntimeError::NavigationEmpty { object: object.name.clone(), role: role.clone() }),
                        many => Err(RuntimeError::NavigationAmbiguous {
                            object: object.name.clone(),
                            role: role.clone(),
                            count: many.len(),
                        }),
                    }
                } else {
                    let items = linked.into_iter().map(|o| Value::Object(o.name.clone())).collect();
                    Ok(Value::Collection(Collection::new(items).map_err(|e| internal(e.to_string()))?))
                }
            }
            TypedKind::Binary { op, left, right } => self.binary(*op, left, right, env),
            TypedKind::Unary { op, operand } => match (op, self.eval(operand, env)?) {
                (UnaryOperator::Not, Value::Bool(b)) => Ok(Value::Bool(!b)),
                (UnaryOperator::Neg, Value::Int(i)) => {
                    i.checked_neg().map(Value::Int).ok_or(RuntimeError::IntegerOverflow)
                }
                (UnaryOperator::Neg, Value::Real(r)) => Ok(Value::Real(-r)),
                (_, other) => Err(internal(format!("bad unary operand {other}"))),
            },
            TypedKind::If { condition, then_branch, else_branch } => {
                // only the selected branch is evaluated
                if self.eval_bool(condition, env)? {
                    self.eval(then_branch, env)
                } else {
                    self.eval(else_branch, env)
                }
            }
            TypedKind::Iterator { source, kind, variable, body } => {
                let source = self.eval_collection(source, env)?;
                self.iterate(*kind, source, variable, body, env)
            }
            TypedKind::CollectionOp { source, op } => {
                let source = self.eval_collection(source, env)?;
                Ok(match op {
                    CollectionOperator::Size => {
                        Value::Int(i64::try_from(source.len()).map_err(|_| RuntimeError::IntegerOverflow)?)
                    }
                    CollectionOperator::IsEmpty => Value::Bool(source.is_empty()),
                    CollectionOperator::NotEmpty => Value::Bool(!source.is_empty()),
                })
            }
            TypedKind::AsCollection(inner) => match self.eval(inner, env)? {
                Value::Collection(c) => Ok(Value::Collection(c)),
                single => Ok(Value::Collection(Collection::new(vec![single]).map_err(|e| internal(e.to_string()))?)),
            },
            TypedKind::ToReal(inner) => match self.eval(inner, env)? {
                Value::Int(i) => Ok(Value::Real(i as f64)),
                other => Ok(other),
            },
        }
    }

    fn iterate(
        &self,
        kind: IteratorKind,
        source: Collection,
        variable: &str,
        body: &TypedExpr,
        env: &mut Environment,
    ) -> EvalResult {
        let run = |item: &Value, env: &mut Environment| {
            env.push(variable, item.clone());
            let result = self.eval(body, env);
            env.pop();
            result
        };
        let as_bool = |v: Value| v.as_bool().ok_or_else(|| internal("iterator body is not Boolean"));
        match kind {
            IteratorKind::ForAll => {
                for item in source.items() {
                    if !as_bool(run(item, env)?)? {
                        return Ok(Value::Bool(false));
                    }
                }
                Ok(Value::Bool(true))
            }
            IteratorKind::Exists => {
                for item in source.items() {
                    if as_bool(run(item, env)?)? {
                        return Ok(Value::Bool(true));
                    }
                }
                Ok(Value::Bool(false))
            }
            IteratorKind::Select | IteratorKind::Reject => {
                let keep_when = kind == IteratorKind::Select;
                let mut kept = Vec::new();
                for item in source.items() {
                    if as_bool(run(item, env)?)? == keep_when {
                        kept.push(item.clone());
                    }
                }
                Ok(Value::Collection(Collection::new(kept).map_err(|e| internal(e.to_string()))?))
            }
            IteratorKind::Collect => {
                let mut collected = Vec::new();
                for item in source.items() {
                    match run(item, env)? {
                        Value::Collection(inner) => collected.extend(inner.into_items()),
                        value => collected.push(value),
                    }
                }
                Ok(Value::Collection(Collection::new(collected).map_err(|e| internal(e.to_string()))?))
            }
        }
    }

    fn binary(&self, op: InfixOperator, left: &TypedExpr, right: &TypedExpr, env: &mut Environment) -> EvalResult {
        // and/or short-circuit left to right
        match op {
            InfixOperator::And => {
                return Ok(Value::Bool(self.eval_bool(left, env)? && self.eval_bool(right, env)?));
            }
            InfixOperator::Or => {
                return Ok(Value::Bool(self.eval_bool(left, env)? || self.eval_bool(right, env)?));
            }
            _ => {}
        }
        let l = self.eval(left, env)?;
        let r = self.eval(right, env)?;
        if op.is_comparison() {
            let result = match op {
                InfixOperator::Eq => equals(&l, &r)?,
                InfixOperator::Ne => !equals(&l, &r)?,
                _ => {
                    // None only for NaN, where every ordering test is false
                    let ord = order(&l, &r)?;
                    match op {
                        InfixOperator::Lt => ord == Some(Ordering::Less),
                        InfixOperator::Gt => ord == Some(Ordering::Greater),
                        InfixOperator::Le => matches!(ord, Some(Ordering::Less | Ordering::Equal)),
                        InfixOperator::Ge => matches!(ord, Some(Ordering::Greater | Ordering::Equal)),
                        _ => unreachable!(),
                    }
                }
            };
            return Ok(Value::Bool(result));
        }
        arithmetic(op, l, r)
    }
}

fn equals(l: &Value, r: &Value) -> Result<bool, RuntimeError> {
    Ok(match (l, r) {
        (Value::Int(a), Value::Int(b)) => a == b,
        (Value::Int(a), Value::Real(b)) => (*a as f64) == *b,
        (Value::Real(a), Value::Int(b)) => *a == (*b as f64),
        (Value::Real(a), Value::Real(b)) => a == b,
        (Value::Str(a), Value::Str(b)) => a == b,
        (Value::Bool(a), Value::Bool(b)) => a == b,
        (Value::Date(a), Value::Date(b)) => a == b,
        (Value::Object(a), Value::Object(b)) => a == b,
        _ => return Err(internal(format!("cannot compare {l} with {r}"))),
    })
}

fn order(l: &Value, r: &Value) -> Result<Option<Ordering>, RuntimeError> {
    Ok(match (l, r) {
        (Value::Int(a), Value::Int(b)) => Some(a.cmp(b)),
        (Value::Int(a), Value::Real(b)) => (*a as f64).partial_cmp(b),
        (Value::Real(a), Value::Int(b)) => a.partial_cmp(&(*b as f64)),
        (Value::Real(a), Value::Real(b)) => a.partial_cmp(b),
        (Value::Date(a), Value::Date(b)) => Some(a.cmp(b)),
        _ => return Err(internal(format!("cannot order {l} and {r}"))),
    })
}

fn arithmetic(op: InfixOperator, l: Value, r: Value) -> EvalResult {
    if let (Value::Int(a), Value::Int(b)) = (&l, &r) {
        let (a, b) = (*a, *b);
        let result = match op {
            InfixOperator::Add => a.checked_add(b),
            InfixOperator::Sub => a.checked_sub(b),
            InfixOperator::Mul => a.checked_mul(b),
            InfixOperator::Div => {
                if b == 0 {
                    return Err(RuntimeError::DivisionByZero);
                }
                return Ok(Value::Real(a as f64 / b as f64));
            }
            _ => unreachable!("not an arithmetic operator"),
        };
        return result.map(Value::Int).ok_or(RuntimeError::IntegerOverflow);
    }
    let as_real = |v: &Value| match v {
        Value::Int(i) => Ok(*i as f64),
        Value::Real(r) => Ok(*r),
        other => Err(internal(format!("expected a number, found {other}"))),
    };
    let (a, b) = (as_real(&l)?, as_real(&r)?);
    Ok(Value::Real(match op {
        InfixOperator::Add => a + b,
        InfixOperator::Sub => a - b,
        InfixOperator::Mul => a * b,
        InfixOperator::Div => {
            if b == 0.0 {
                return Err(RuntimeError::DivisionByZero);
            }
            a / b
        }
        _ => unreachable!("not an arithmetic operator"),
    }))
}
