//! Syntax tree for OCL invariants.
//!
//! The tree is what the parser produces and what [`crate::eval::resolve`]
//! consumes. It serializes losslessly to JSON (`bocl-ast/1`): every node is an
//! object with a `kind` discriminator followed by its fields.

pub(crate) mod print;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use print::{pretty_print, pretty_print_expr};

pub const AST_SCHEMA_VERSION: &str = "bocl-ast/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum InfixOperator {
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = "<>")]
    Ne,
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = ">")]
    Gt,
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = "and")]
    And,
    #[serde(rename = "or")]
    Or,
    #[serde(rename = "+")]
    Add,
    #[serde(rename = "-")]
    Sub,
    #[serde(rename = "*")]
    Mul,
    #[serde(rename = "/")]
    Div,
}

impl InfixOperator {
    pub const ALL: [InfixOperator; 12] = [
        InfixOperator::Eq,
        InfixOperator::Ne,
        InfixOperator::Lt,
        InfixOperator::Gt,
        InfixOperator::Le,
        InfixOperator::Ge,
        InfixOperator::And,
        InfixOperator::Or,
        InfixOperator::Add,
        InfixOperator::Sub,
        InfixOperator::Mul,
        InfixOperator::Div,
    ];

    pub fn symbol(self) -> &'static str {
        match self {
            InfixOperator::Eq => "=",
            InfixOperator::Ne => "<>",
            InfixOperator::Lt => "<",
            InfixOperator::Gt => ">",
            InfixOperator::Le => "<=",
            InfixOperator::Ge => ">=",
            InfixOperator::And => "and",
            InfixOperator::Or => "or",
            InfixOperator::Add => "+",
            InfixOperator::Sub => "-",
            InfixOperator::Mul => "*",
            InfixOperator::Div => "/",
        }
    }

    /// Binding strength; higher binds tighter.
    pub fn precedence(self) -> u8 {
        match self {
            InfixOperator::Or => 1,
            InfixOperator::And => 2,
            InfixOperator::Eq
            | InfixOperator::Ne
            | InfixOperator::Lt
            | InfixOperator::Gt
            | InfixOperator::Le
            | InfixOperator::Ge => 3,
            InfixOperator::Add | InfixOperator::Sub => 4,
            InfixOperator::Mul | InfixOperator::Div => 5,
        }
    }

    pub fn is_comparison(self) -> bool {
        self.precedence() == 3
    }

    pub fn is_arithmetic(self) -> bool {
        self.precedence() >= 4
    }

    pub fn is_logical(self) -> bool {
        matches!(self, InfixOperator::And | InfixOperator::Or)
    }
}

impl fmt::Display for InfixOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum UnaryOperator {
    #[serde(rename = "not")]
    Not,
    #[serde(rename = "-")]
    Neg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum IteratorKind {
    #[serde(rename = "forAll")]
    ForAll,
    #[serde(rename = "exists")]
    Exists,
    #[serde(rename = "select")]
    Select,
    #[serde(rename = "reject")]
    Reject,
    #[serde(rename = "collect")]
    Collect,
}

impl IteratorKind {
    pub const ALL: [IteratorKind; 5] =
        [IteratorKind::ForAll, IteratorKind::Exists, IteratorKind::Select, IteratorKind::Reject, IteratorKind::Collect];

    pub fn name(self) -> &'static str {
        match self {
            IteratorKind::ForAll => "forAll",
            IteratorKind::Exists => "exists",
            IteratorKind::Select => "select",
            IteratorKind::Reject => "reject",
            IteratorKind::Collect => "collect",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        IteratorKind::ALL.into_iter().find(|k| k.name() == name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CollectionOperator {
    #[serde(rename = "size")]
    Size,
    #[serde(rename = "isEmpty")]
    IsEmpty,
    #[serde(rename = "notEmpty")]
    NotEmpty,
}

impl CollectionOperator {
    pub const ALL: [CollectionOperator; 3] =
        [CollectionOperator::Size, CollectionOperator::IsEmpty, CollectionOperator::NotEmpty];

    pub fn name(self) -> &'static str {
        match self {
            CollectionOperator::Size => "size",
            CollectionOperator::IsEmpty => "isEmpty",
            CollectionOperator::NotEmpty => "notEmpty",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        CollectionOperator::ALL.into_iter().find(|k| k.name() == name)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Expr {
    /// The contextual instance.
    #[serde(rename = "Self")]
    SelfRef,
    /// Attribute access or association navigation; which one is decided
    /// during resolution.
    Property {
        source: Box<Expr>,
        name: String,
    },
    /// Reference to an iterator variable.
    Variable {
        name: String,
    },
    IntegerLiteral {
        value: i64,
    },
    RealLiteral {
        value: f64,
    },
    StringLiteral {
        value: String,
    },
    BooleanLiteral {
        value: bool,
    },
    OperationCall {
        op: InfixOperator,
        left: Box<Expr>,
        right: Box<Expr>,
    },
    Unary {
        op: UnaryOperator,
        operand: Box<Expr>,
    },
    If {
        condition: Box<Expr>,
        #[serde(rename = "then")]
        then_branch: Box<Expr>,
        #[serde(rename = "else")]
        else_branch: Box<Expr>,
    },
    Iterator {
        source: Box<Expr>,
        iterator: IteratorKind,
        variable: String,
        #[serde(rename = "variableType", default, skip_serializing_if = "Option::is_none")]
        variable_type: Option<String>,
        body: Box<Expr>,
    },
    CollectionOp {
        source: Box<Expr>,
        op: CollectionOperator,
    },
}

impl Expr {
    pub fn property(source: Expr, name: impl Into<String>) -> Expr {
        Expr::Property { source: Box::new(source), name: name.into() }
    }

    pub fn variable(name: impl Into<String>) -> Expr {
        Expr::Variable { name: name.into() }
    }

    pub fn int(value: i64) -> Expr {
        Expr::IntegerLiteral { value }
    }

    pub fn real(value: f64) -> Expr {
        Expr::RealLiteral { value }
    }

    pub fn string(value: impl Into<String>) -> Expr {
        Expr::StringLiteral { value: value.into() }
    }

    pub fn boolean(value: bool) -> Expr {
        Expr::BooleanLiteral { value }
    }

    pub fn binary(op: InfixOperator, left: Expr, right: Expr) -> Expr {
        Expr::OperationCall { op, left: Box::new(left), right: Box::new(right) }
    }

    pub fn unary(op: UnaryOperator, operand: Expr) -> Expr {
        Expr::Unary { op, operand: Box::new(operand) }
    }

    pub fn if_then_else(condition: Expr, then_branch: Expr, else_branch: Expr) -> Expr {
        Expr::If {
            condition: Box::new(condition),
            then_branch: Box::new(then_branch),
            else_branch: Box::new(else_branch),
        }
    }

    pub fn iterate(
        source: Expr,
        iterator: IteratorKind,
        variable: impl Into<String>,
        variable_type: Option<String>,
        body: Expr,
    ) -> Expr {
        Expr::Iterator {
            source: Box::new(source),
            iterator,
            variable: variable.into(),
            variable_type,
            body: Box::new(body),
        }
    }

    pub fn collection_op(source: Expr, op: CollectionOperator) -> Expr {
        Expr::CollectionOp { source: Box::new(source), op }
    }

    /// Nesting depth; literals and leaves have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Expr::SelfRef
            | Expr::Variable { .. }
            | Expr::IntegerLiteral { .. }
            | Expr::RealLiteral { .. }
            | Expr::StringLiteral { .. }
            | Expr::BooleanLiteral { .. } => 0,
            Expr::Property { source, .. } | Expr::CollectionOp { source, .. } => 1 + source.depth(),
            Expr::Unary { operand, .. } => 1 + operand.depth(),
            Expr::OperationCall { left, right, .. } => 1 + left.depth().max(right.depth()),
            Expr::If { condition, then_branch, else_branch } => {
                1 + condition.depth().max(then_branch.depth()).max(else_branch.depth())
            }
            Expr::Iterator { source, body, .. } => 1 + source.depth().max(body.depth()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Stereotype {
    #[serde(rename = "inv")]
    Inv,
}

/// `context <Class> inv [name]: <body>`
#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintAst {
    pub context: String,
    pub stereotype: Stereotype,
    pub name: Option<String>,
    pub body: Expr,
}

#[derive(Serialize)]
struct AstDocumentRef<'a> {
    version: &'static str,
    context: &'a str,
    stereotype: Stereotype,
    name: Option<&'a str>,
    body: &'a Expr,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AstDocument {
    version: String,
    context: String,
    stereotype: Stereotype,
    #[serde(default)]
    name: Option<String>,
    body: Expr,
}

#[derive(Debug, thiserror::Error)]
pub enum AstJsonError {
    #[error("malformed AST document: {0}")]
    Malformed(#[from] serde_json::Error),
    #[error("unsupported AST schema version '{0}'")]
    Version(String),
}

/// Serializes a constraint to a `bocl-ast/1` JSON document.
pub fn ast_to_json(ast: &ConstraintAst) -> serde_json::Value {
    let doc = AstDocumentRef {
        version: AST_SCHEMA_VERSION,
        context: &ast.context,
        stereotype: ast.stereotype,
        name: ast.name.as_deref(),
        body: &ast.body,
    };
    serde_json::to_value(doc).expect("AST serialization is infallible")
}

pub fn ast_from_json(value: &serde_json::Value) -> Result<ConstraintAst, AstJsonError> {
    let doc = AstDocument::deserialize(value)?;
    if doc.version != AST_SCHEMA_VERSION {
        return Err(AstJsonError::Version(doc.version));
    }
    Ok(ConstraintAst { context: doc.context, stereotype: doc.stereotype, name: doc.name, body: doc.body })
}
