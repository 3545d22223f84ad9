//! Structural models (classes, attributes, binary associations, constraints)
//! and object models (objects with slots, links between them).
//!
//! Both model kinds are plain data. Validation lives in [`validate`] and the
//! read-only queries used by the evaluator live in [`query`].

mod query;
mod validate;

use std::collections::BTreeMap;
use std::fmt;

use chrono::NaiveDate;

pub(crate) use query::follow_end;
pub use query::{instances_of, navigate, NavigationError};
pub use validate::{validate_conformance, validate_structural, ModelDiagnostic, Severity};

/// Returns true if `name` matches `[A-Za-z_][A-Za-z0-9_]*`.
pub fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PrimitiveType {
    Int,
    Real,
    Str,
    Bool,
    Date,
}

impl PrimitiveType {
    pub const ALL: [PrimitiveType; 5] =
        [PrimitiveType::Int, PrimitiveType::Real, PrimitiveType::Str, PrimitiveType::Bool, PrimitiveType::Date];

    /// Lowercase spelling used in model documents.
    pub fn as_str(self) -> &'static str {
        match self {
            PrimitiveType::Int => "int",
            PrimitiveType::Real => "real",
            PrimitiveType::Str => "str",
            PrimitiveType::Bool => "bool",
            PrimitiveType::Date => "date",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        PrimitiveType::ALL.into_iter().find(|t| t.as_str() == name)
    }

    /// Type name as written in an OCL iterator annotation (`x : Integer`).
    pub fn ocl_name(self) -> &'static str {
        match self {
            PrimitiveType::Int => "Integer",
            PrimitiveType::Real => "Real",
            PrimitiveType::Str => "String",
            PrimitiveType::Bool => "Boolean",
            PrimitiveType::Date => "Date",
        }
    }
}

impl fmt::Display for PrimitiveType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Attribute {
    pub name: String,
    pub ty: PrimitiveType,
}

impl Attribute {
    pub fn new(name: impl Into<String>, ty: PrimitiveType) -> Self {
        Attribute { name: name.into(), ty }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassDef {
    pub name: String,
    pub attributes: Vec<Attribute>,
}

impl ClassDef {
    pub fn new(name: impl Into<String>, attributes: Vec<Attribute>) -> Self {
        ClassDef { name: name.into(), attributes }
    }

    pub fn attribute(&self, name: &str) -> Option<&Attribute> {
        self.attributes.iter().find(|a| a.name == name)
    }
}

/// Allowed number of linked objects at an association end. `upper == None`
/// stands for `*`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Multiplicity {
    pub lower: u32,
    pub upper: Option<u32>,
}

impl Multiplicity {
    pub fn new(lower: u32, upper: Option<u32>) -> Self {
        Multiplicity { lower, upper }
    }

    pub fn exactly(n: u32) -> Self {
        Multiplicity { lower: n, upper: Some(n) }
    }

    pub fn unbounded(lower: u32) -> Self {
        Multiplicity { lower, upper: None }
    }

    /// Navigation through an end with upper bound 1 yields a single object.
    pub fn is_scalar(&self) -> bool {
        self.upper == Some(1)
    }

    pub fn admits(&self, count: usize) -> bool {
        let count = count as u64;
        count >= u64::from(self.lower) && self.upper.is_none_or(|u| count <= u64::from(u))
    }
}

impl fmt::Display for Multiplicity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.upper {
            Some(u) => write!(f, "{}..{}", self.lower, u),
            None => write!(f, "{}..*", self.lower),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssociationEnd {
    /// Role name used for navigation.
    pub name: String,
    /// Name of the class at this end.
    pub target: String,
    pub multiplicity: Multiplicity,
}

impl AssociationEnd {
    pub fn new(name: impl Into<String>, target: impl Into<String>, multiplicity: Multiplicity) -> Self {
        AssociationEnd { name: name.into(), target: target.into(), multiplicity }
    }
}

/// Which of the two ends of a binary association.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EndIndex {
    First,
    Second,
}

impl EndIndex {
    pub fn opposite(self) -> Self {
        match self {
            EndIndex::First => EndIndex::Second,
            EndIndex::Second => EndIndex::First,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryAssociation {
    pub name: String,
    pub end1: AssociationEnd,
    pub end2: AssociationEnd,
}

impl BinaryAssociation {
    pub fn new(name: impl Into<String>, end1: AssociationEnd, end2: AssociationEnd) -> Self {
        BinaryAssociation { name: name.into(), end1, end2 }
    }

    pub fn end(&self, which: EndIndex) -> &AssociationEnd {
        match which {
            EndIndex::First => &self.end1,
            EndIndex::Second => &self.end2,
        }
    }

    pub fn end_named(&self, role: &str) -> Option<EndIndex> {
        if self.end1.name == role {
            Some(EndIndex::First)
        } else if self.end2.name == role {
            Some(EndIndex::Second)
        } else {
            None
        }
    }
}

/// A resolved navigable association end: following `role` from an instance of
/// the opposite end's class reaches objects of `target`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EndRef {
    pub association: String,
    pub end: EndIndex,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintDef {
    pub name: String,
    pub context: String,
    /// Raw OCL text, e.g. `context Book inv pageNumberInv: self.pages>0`.
    pub expression: String,
    pub language: String,
}

impl ConstraintDef {
    pub fn new(name: impl Into<String>, context: impl Into<String>, expression: impl Into<String>) -> Self {
        ConstraintDef {
            name: name.into(),
            context: context.into(),
            expression: expression.into(),
            language: "OCL".to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct StructuralModel {
    pub name: String,
    pub classes: Vec<ClassDef>,
    pub associations: Vec<BinaryAssociation>,
    pub constraints: Vec<ConstraintDef>,
}

impl StructuralModel {
    pub fn class(&self, name: &str) -> Option<&ClassDef> {
        self.classes.iter().find(|c| c.name == name)
    }

    pub fn association(&self, name: &str) -> Option<&BinaryAssociation> {
        self.associations.iter().find(|a| a.name == name)
    }

    /// Ends that can be navigated from instances of `class`, i.e. ends whose
    /// opposite end targets `class`. Declaration order.
    pub fn navigable_ends(&self, class: &str) -> Vec<(EndRef, &AssociationEnd)> {
        let mut found = Vec::new();
        for assoc in &self.associations {
            for which in [EndIndex::First, EndIndex::Second] {
                if assoc.end(which.opposite()).target == class {
                    found.push((EndRef { association: assoc.name.clone(), end: which }, assoc.end(which)));
                }
            }
        }
        found
    }

    /// Looks up the end reached by following `role` from an instance of `class`.
    pub fn navigable_end(&self, class: &str, role: &str) -> Option<(EndRef, &AssociationEnd)> {
        self.navigable_ends(class).into_iter().find(|(_, end)| end.name == role)
    }

    pub fn resolve_end(&self, end: &EndRef) -> Option<&AssociationEnd> {
        self.association(&end.association).map(|a| a.end(end.end))
    }
}

/// A scalar slot value.
#[derive(Debug, Clone, PartialEq)]
pub enum LiteralValue {
    Int(i64),
    Real(f64),
    Str(String),
    Bool(bool),
    Date(NaiveDate),
}

impl LiteralValue {
    pub fn kind(&self) -> PrimitiveType {
        match self {
            LiteralValue::Int(_) => PrimitiveType::Int,
            LiteralValue::Real(_) => PrimitiveType::Real,
            LiteralValue::Str(_) => PrimitiveType::Str,
            LiteralValue::Bool(_) => PrimitiveType::Bool,
            LiteralValue::Date(_) => PrimitiveType::Date,
        }
    }
}

impl fmt::Display for LiteralValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LiteralValue::Int(v) => write!(f, "{v}"),
            LiteralValue::Real(v) => write!(f, "{v:?}"),
            LiteralValue::Str(v) => write!(f, "'{v}'"),
            LiteralValue::Bool(v) => write!(f, "{v}"),
            LiteralValue::Date(v) => write!(f, "{}", v.format("%Y-%m-%d")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ObjectInstance {
    pub name: String,
    pub classifier: String,
    pub slots: BTreeMap<String, LiteralValue>,
}

impl ObjectInstance {
    pub fn new(name: impl Into<String>, classifier: impl Into<String>) -> Self {
        ObjectInstance { name: name.into(), classifier: classifier.into(), slots: BTreeMap::new() }
    }

    pub fn with_slot(mut self, attribute: impl Into<String>, value: LiteralValue) -> Self {
        self.slots.insert(attribute.into(), value);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkInstance {
    pub name: String,
    pub association: String,
    /// Object attached at the association's first end.
    pub end1_object: String,
    /// Object attached at the association's second end.
    pub end2_object: String,
}

impl LinkInstance {
    pub fn new(
        name: impl Into<String>,
        association: impl Into<String>,
        end1_object: impl Into<String>,
        end2_object: impl Into<String>,
    ) -> Self {
        LinkInstance {
            name: name.into(),
            association: association.into(),
            end1_object: end1_object.into(),
            end2_object: end2_object.into(),
        }
    }

    pub fn object_at(&self, which: EndIndex) -> &str {
        match which {
            EndIndex::First => &self.end1_object,
            EndIndex::Second => &self.end2_object,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ObjectModel {
    pub name: String,
    pub objects: Vec<ObjectInstance>,
    pub links: Vec<LinkInstance>,
}

impl ObjectModel {
    pub fn object(&self, name: &str) -> Option<&ObjectInstance> {
        self.objects.iter().find(|o| o.name == name)
    }
}
