//! A slow, direct reference evaluator over the untyped tree.
//!
//! It shares nothing with the library evaluator beyond the input types:
//! properties are classified by scanning the model on every access, links are
//! scanned linearly, and integer arithmetic is done in i128 with an explicit
//! range check.

use bocl_core::ast::{CollectionOperator, ConstraintAst, Expr, InfixOperator, IteratorKind, UnaryOperator};
use bocl_core::model::{LiteralValue, ObjectModel, StructuralModel};
use chrono::NaiveDate;

#[derive(Debug, Clone, PartialEq)]
pub enum RVal {
    B(bool),
    I(i64),
    R(f64),
    S(String),
    D(NaiveDate),
    O(String),
    C(Vec<RVal>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RVerdict {
    True,
    False,
    Error,
}

/// Any runtime failure. The reference does not distinguish kinds.
#[derive(Debug)]
pub struct Fail;

type R = Result<RVal, Fail>;

struct Ctx<'a> {
    model: &'a StructuralModel,
    objects: &'a ObjectModel,
}

pub fn reference_verdict(ast: &ConstraintAst, model: &StructuralModel, objects: &ObjectModel) -> RVerdict {
    let ctx = Ctx { model, objects };
    let mut names: Vec<&str> =
        objects.objects.iter().filter(|o| o.classifier == ast.context).map(|o| o.name.as_str()).collect();
    names.sort();
    let mut all = true;
    for name in names {
        let mut env = vec![("self".to_string(), RVal::O(name.to_string()))];
        match ctx.eval(&ast.body, &mut env) {
            Ok(RVal::B(b)) => all &= b,
            _ => return RVerdict::Error,
        }
    }
    if all {
        RVerdict::True
    } else {
        RVerdict::False
    }
}

/// Evaluates `expr` with `self` bound to the named object.
pub fn reference_value(
    expr: &Expr,
    self_object: &str,
    model: &StructuralModel,
    objects: &ObjectModel,
) -> Result<RVal, Fail> {
    let ctx = Ctx { model, objects };
    ctx.eval(expr, &mut vec![("self".to_string(), RVal::O(self_object.to_string()))])
}

fn literal(v: &LiteralValue) -> RVal {
    match v {
        LiteralValue::Int(i) => RVal::I(*i),
        LiteralValue::Real(r) => RVal::R(*r),
        LiteralValue::Str(s) => RVal::S(s.clone()),
        LiteralValue::Bool(b) => RVal::B(*b),
        LiteralValue::Date(d) => RVal::D(*d),
    }
}

fn int(v: i128) -> R {
    i64::try_from(v).map(RVal::I).map_err(|_| Fail)
}

fn real(v: &RVal) -> Result<f64, Fail> {
    match v {
        RVal::I(i) => Ok(*i as f64),
        RVal::R(r) => Ok(*r),
        _ => Err(Fail),
    }
}

fn boolean(v: RVal) -> Result<bool, Fail> {
    match v {
        RVal::B(b) => Ok(b),
        _ => Err(Fail),
    }
}

impl Ctx<'_> {
    fn classifier(&self, object: &str) -> Result<&str, Fail> {
        self.objects.objects.iter().find(|o| o.name == object).map(|o| o.classifier.as_str()).ok_or(Fail)
    }

    /// Objects reached from `object` through `role`, sorted and deduplicated,
    /// plus whether the end is single-valued. `None` when `role` is not a
    /// navigable end of the object's class.
    fn navigate(&self, object: &str, role: &str) -> Result<Option<(Vec<String>, bool)>, Fail> {
        let class = self.classifier(object)?;
        for assoc in &self.model.associations {
            let ends = [(&assoc.end1, &assoc.end2, true), (&assoc.end2, &assoc.end1, false)];
            for (far, near, far_is_first) in ends {
                if far.name != role || near.target != class {
                    continue;
                }
                let mut found: Vec<String> = Vec::new();
                for link in self.objects.links.iter().filter(|l| l.association == assoc.name) {
                    let (here, there) = if far_is_first {
                        (&link.end2_object, &link.end1_object)
                    } else {
                        (&link.end1_object, &link.end2_object)
                    };
                    if here == object && !found.contains(there) {
                        found.push(there.clone());
                    }
                }
                found.sort();
                return Ok(Some((found, far.multiplicity.upper == Some(1))));
            }
        }
        Ok(None)
    }

    fn property(&self, source: &RVal, name: &str, lifted: bool) -> R {
        let RVal::O(object) = source else { return Err(Fail) };
        let class = self.classifier(object)?;
        let has_attribute =
            self.model.classes.iter().any(|c| c.name == class && c.attributes.iter().any(|a| a.name == name));
        if has_attribute {
            let obj = self.objects.objects.iter().find(|o| &o.name == object).ok_or(Fail)?;
            return obj.slots.get(name).map(literal).ok_or(Fail);
        }
        let (found, single) = self.navigate(object, name)?.ok_or(Fail)?;
        if single && !lifted {
            if found.len() == 1 {
                Ok(RVal::O(found[0].clone()))
            } else {
                Err(Fail)
            }
        } else {
            Ok(RVal::C(found.into_iter().map(RVal::O).collect()))
        }
    }

    /// The source of `->`: navigations yield all linked objects, other
    /// scalars become one-element collections.
    fn arrow_source(&self, expr: &Expr, env: &mut Vec<(String, RVal)>) -> Result<Vec<RVal>, Fail> {
        let value = match expr {
            Expr::Property { source, name } => {
                let src = self.eval(source, env)?;
                self.property(&src, name, true)?
            }
            other => self.eval(other, env)?,
        };
        Ok(match value {
            RVal::C(items) => items,
            single => vec![single],
        })
    }

    fn eval(&self, expr: &Expr, env: &mut Vec<(String, RVal)>) -> R {
        match expr {
            Expr::SelfRef => Ok(env[0].1.clone()),
            Expr::Variable { name } => env.iter().rev().find(|(n, _)| n == name).map(|(_, v)| v.clone()).ok_or(Fail),
            Expr::IntegerLiteral { value } => Ok(RVal::I(*value)),
            Expr::RealLiteral { value } => Ok(RVal::R(*value)),
            Expr::StringLiteral { value } => Ok(RVal::S(value.clone())),
            Expr::BooleanLiteral { value } => Ok(RVal::B(*value)),
            Expr::Property { source, name } => {
                let src = self.eval(source, env)?;
                self.property(&src, name, false)
            }
            Expr::Unary { op: UnaryOperator::Not, operand } => Ok(RVal::B(!boolean(self.eval(operand, env)?)?)),
            Expr::Unary { op: UnaryOperator::Neg, operand } => match self.eval(operand, env)? {
                RVal::I(i) => int(-(i as i128)),
                RVal::R(r) => Ok(RVal::R(-r)),
                _ => Err(Fail),
            },
            Expr::If { condition, then_branch, else_branch } => {
                if boolean(self.eval(condition, env)?)? {
                    self.eval(then_branch, env)
                } else {
                    self.eval(else_branch, env)
                }
            }
            Expr::OperationCall { op, left, right } => self.operation(*op, left, right, env),
            Expr::Iterator { source, iterator, variable, body, .. } => {
                let items = self.arrow_source(source, env)?;
                let mut out = Vec::new();
                for item in items {
                    env.push((variable.clone(), item.clone()));
                    let result = self.eval(body, env);
                    env.pop();
                    let result = result?;
                    match iterator {
                        IteratorKind::ForAll => {
                            if !boolean(result)? {
                                return Ok(RVal::B(false));
                            }
                        }
                        IteratorKind::Exists => {
                            if boolean(result)? {
                                return Ok(RVal::B(true));
                            }
                        }
                        IteratorKind::Select => {
                            if boolean(result)? {
                                out.push(item);
                            }
                        }
                        IteratorKind::Reject => {
                            if !boolean(result)? {
                                out.push(item);
                            }
                        }
                        IteratorKind::Collect => match result {
                            RVal::C(inner) => out.extend(inner),
                            v => out.push(v),
                        },
                    }
                }
                Ok(match iterator {
                    IteratorKind::ForAll => RVal::B(true),
                    IteratorKind::Exists => RVal::B(false),
                    _ => RVal::C(out),
                })
            }
            Expr::CollectionOp { source, op } => {
                let n = self.arrow_source(source, env)?.len();
                Ok(match op {
                    CollectionOperator::Size => RVal::I(n as i64),
                    CollectionOperator::IsEmpty => RVal::B(n == 0),
                    CollectionOperator::NotEmpty => RVal::B(n != 0),
                })
            }
        }
    }

    fn operation(&self, op: InfixOperator, left: &Expr, right: &Expr, env: &mut Vec<(String, RVal)>) -> R {
        use InfixOperator::*;
        if op == And {
            return Ok(RVal::B(boolean(self.eval(left, env)?)? && boolean(self.eval(right, env)?)?));
        }
        if op == Or {
            return Ok(RVal::B(boolean(self.eval(left, env)?)? || boolean(self.eval(right, env)?)?));
        }
        let l = self.eval(left, env)?;
        let r = self.eval(right, env)?;
        match op {
            Eq | Ne => {
                let same = match (&l, &r) {
                    (RVal::I(a), RVal::I(b)) => a == b,
                    (RVal::I(_) | RVal::R(_), RVal::I(_) | RVal::R(_)) => real(&l)? == real(&r)?,
                    (RVal::S(a), RVal::S(b)) => a == b,
                    (RVal::B(a), RVal::B(b)) => a == b,
                    (RVal::D(a), RVal::D(b)) => a == b,
                    (RVal::O(a), RVal::O(b)) => a == b,
                    _ => return Err(Fail),
                };
                Ok(RVal::B(same == (op == Eq)))
            }
            Lt | Le | Gt | Ge => {
                let (lt, eq) = match (&l, &r) {
                    (RVal::I(a), RVal::I(b)) => (a < b, a == b),
                    (RVal::D(a), RVal::D(b)) => (a < b, a == b),
                    _ => {
                        let (a, b) = (real(&l)?, real(&r)?);
                        (a < b, a == b)
                    }
                };
                // NaN: neither lt nor eq nor gt
                let gt = match (&l, &r) {
                    (RVal::I(_), RVal::I(_)) | (RVal::D(_), RVal::D(_)) => !lt && !eq,
                    _ => real(&l)? > real(&r)?,
                };
                Ok(RVal::B(match op {
                    Lt => lt,
                    Le => lt || eq,
                    Gt => gt,
                    _ => gt || eq,
                }))
            }
            Div => {
                let (a, b) = (real(&l)?, real(&r)?);
                if b == 0.0 {
                    return Err(Fail);
                }
                Ok(RVal::R(a / b))
            }
            Add | Sub | Mul => match (&l, &r) {
                (RVal::I(a), RVal::I(b)) => {
                    let (a, b) = (*a as i128, *b as i128);
                    int(match op {
                        Add => a + b,
                        Sub => a - b,
                        _ => a * b,
                    })
                }
                _ => {
                    let (a, b) = (real(&l)?, real(&r)?);
                    Ok(RVal::R(match op {
                        Add => a + b,
                        Sub => a - b,
                        _ => a * b,
                    }))
                }
            },
            And | Or => unreachable!(),
        }
    }
}
