use std::fmt;
use std::mem::discriminant;

use chrono::NaiveDate;

use crate::ast::print::format_real;
use crate::model::LiteralValue;

/// A runtime value. There is no null: a missing value is an evaluation error.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Bool(bool),
    Int(i64),
    Real(f64),
    Str(String),
    Date(NaiveDate),
    /// Reference to an object, by name.
    Object(String),
    Collection(Collection),
}

impl Value {
    pub fn as_bool(&self) -> Option<bool> {
        match self {
            Value::Bool(b) => Some(*b),
            _ => None,
        }
    }

    fn kind_name(&self) -> &'static str {
        match self {
            Value::Bool(_) => "Boolean",
            Value::Int(_) => "Integer",
            Value::Real(_) => "Real",
            Value::Str(_) => "String",
            Value::Date(_) => "Date",
            Value::Object(_) => "Object",
            Value::Collection(_) => "Collection",
        }
    }
}

impl From<&LiteralValue> for Value {
    fn from(lit: &LiteralValue) -> Self {
        match lit {
            LiteralValue::Int(v) => Value::Int(*v),
            LiteralValue::Real(v) => Value::Real(*v),
            LiteralValue::Str(v) => Value::Str(v.clone()),
            LiteralValue::Bool(v) => Value::Bool(*v),
            LiteralValue::Date(v) => Value::Date(*v),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Bool(b) => write!(f, "{b}"),
            Value::Int(v) => write!(f, "{v}"),
            Value::Real(v) => f.write_str(&format_real(*v)),
            Value::Str(s) => write!(f, "'{}'", s.replace('\'', "''")),
            Value::Date(d) => write!(f, "{}", d.format("%Y-%m-%d")),
            Value::Object(name) => f.write_str(name),
            Value::Collection(c) => {
                f.write_str("Collection{")?;
                for (i, item) in c.items().iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{item}")?;
                }
                f.write_str("}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("collection elements must share one kind: found {first} and {other}")]
pub struct MixedCollection {
    pub first: &'static str,
    pub other: &'static str,
}

/// An ordered, flat collection whose elements all have the same kind.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Collection {
    items: Vec<Value>,
}

impl Collection {
    pub fn new(items: Vec<Value>) -> Result<Self, MixedCollection> {
        if let Some(first) = items.first() {
            for item in &items {
                if discriminant(item) != discriminant(first) || matches!(item, Value::Collection(_)) {
                    return Err(MixedCollection { first: first.kind_name(), other: item.kind_name() });
                }
            }
        }
        Ok(Collection { items })
    }

    pub fn empty() -> Self {
        Collection::default()
    }

    pub fn items(&self) -> &[Value] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn into_items(self) -> Vec<Value> {
        self.items
    }
}

/// Variable bindings for evaluating one expression: the contextual instance
/// plus a stack of iterator variables (innermost last).
#[derive(Debug, Clone)]
pub struct Environment {
    self_object: String,
    frames: Vec<(String, Value)>,
}

impl Environment {
    pub fn new(self_object: impl Into<String>) -> Self {
        Environment { self_object: self_object.into(), frames: Vec::new() }
    }

    pub fn self_object(&self) -> &str {
        &self.self_object
    }

    pub fn push(&mut self, name: impl Into<String>, value: Value) {
        self.frames.push((name.into(), value));
    }

    pub fn pop(&mut self) {
        self.frames.pop();
    }

    pub fn lookup(&self, name: &str) -> Option<&Value> {
        self.frames.iter().rev().find(|(n, _)| n == name).map(|(_, v)| v)
    }
}
