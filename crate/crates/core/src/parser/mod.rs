//! Recursive-descent parser for OCL invariants.
//!
//! Precedence, loosest first: `or`, `and`, comparisons (non-associative),
//! `+ -`, `* /`, prefix `not -`, postfix `.name` / `->op(...)`, primaries.

mod lexer;

use std::fmt;

use thiserror::Error;

use crate::ast::{CollectionOperator, ConstraintAst, Expr, InfixOperator, IteratorKind, Stereotype, UnaryOperator};

pub use lexer::{tokenize, Keyword, Symbol, Token, TokenKind};

/// Maximum nesting of parenthesized/prefix/if constructs.
const MAX_NESTING: usize = 100;

const UNSUPPORTED_STEREOTYPES: [&str; 6] = ["pre", "post", "derive", "init", "def", "body"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParseErrorKind {
    Lexical,
    Syntax,
    UnsupportedStereotype,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub message: String,
    pub line: usize,
    pub col: usize,
    /// Descriptions of what would have been accepted at the failure point.
    pub expected: Vec<String>,
}

impl ParseError {
    pub(crate) fn new(kind: ParseErrorKind, message: impl Into<String>, line: usize, col: usize) -> Self {
        ParseError { kind, message: message.into(), line, col, expected: Vec::new() }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.col, self.message)?;
        if !self.expected.is_empty() {
            write!(f, " (expected {})", self.expected.join(", "))?;
        }
        Ok(())
    }
}

type PResult<T> = Result<T, ParseError>;

/// Parses `context <Class> inv [name]: <expr>`.
pub fn parse_constraint(source: &str) -> PResult<ConstraintAst> {
    let mut parser = Parser::new(source)?;
    let ast = parser.constraint()?;
    parser.expect_eof()?;
    Ok(ast)
}

/// Parses a bare expression (no context header).
pub fn parse_expression(source: &str) -> PResult<Expr> {
    let mut parser = Parser::new(source)?;
    let expr = parser.expression()?;
    parser.expect_eof()?;
    Ok(expr)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    nesting: usize,
}

impl Parser {
    fn new(source: &str) -> PResult<Self> {
        Ok(Parser { tokens: tokenize(source)?, pos: 0, nesting: 0 })
    }

    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn advance(&mut self) -> Token {
        let tok = self.tokens[self.pos].clone();
        if tok.kind != TokenKind::Eof {
            self.pos += 1;
        }
        tok
    }

    fn at_symbol(&self, sym: Symbol) -> bool {
        self.peek().kind == TokenKind::Symbol(sym)
    }

    fn at_keyword(&self, kw: Keyword) -> bool {
        self.peek().kind == TokenKind::Keyword(kw)
    }

    fn error_at(&self, tok: &Token, message: impl Into<String>, expected: &[&str]) -> ParseError {
        let mut err = ParseError::new(ParseErrorKind::Syntax, message, tok.line, tok.col);
        err.expected = expected.iter().map(|s| s.to_string()).collect();
        err
    }

    fn unexpected(&self, expected: &[&str]) -> ParseError {
        let tok = self.peek();
        let found = match tok.kind {
            TokenKind::Eof => "end of input".to_string(),
            TokenKind::StringLit => format!("string literal '{}'", tok.text),
            _ => format!("'{}'", tok.text),
        };
        self.error_at(tok, format!("unexpected {found}"), expected)
    }

    fn expect_symbol(&mut self, sym: Symbol) -> PResult<Token> {
        if self.at_symbol(sym) {
            Ok(self.advance())
        } else {
            Err(self.unexpected(&[&format!("'{}'", sym.as_str())]))
        }
    }

    fn expect_keyword(&mut self, kw: Keyword) -> PResult<Token> {
        if self.at_keyword(kw) {
            Ok(self.advance())
        } else {
            Err(self.unexpected(&[&format!("'{}'", kw.as_str())]))
        }
    }

    fn expect_ident(&mut self, what: &str) -> PResult<String> {
        if self.peek().kind == TokenKind::Ident {
            Ok(self.advance().text)
        } else {
            Err(self.unexpected(&[what]))
        }
    }

    fn expect_eof(&self) -> PResult<()> {
        if self.peek().kind == TokenKind::Eof {
            Ok(())
        } else {
            Err(self.unexpected(&["end of input"]))
        }
    }

    fn enter(&mut self) -> PResult<()> {
        self.nesting += 1;
        if self.nesting > MAX_NESTING {
            let tok = self.peek();
            return Err(self.error_at(tok, "expression nested too deeply", &[]));
        }
        Ok(())
    }

    fn leave(&mut self) {
        self.nesting -= 1;
    }

    fn constraint(&mut self) -> PResult<ConstraintAst> {
        self.expect_keyword(Keyword::Context)?;
        let context = self.expect_ident("class name")?;
        if !self.at_keyword(Keyword::Inv) {
            if let Some(err) = self.unsupported_stereotype() {
                return Err(err);
            }
            return Err(self.unexpected(&["'inv'"]));
        }
        self.advance();
        let name = if self.peek().kind == TokenKind::Ident { Some(self.advance().text) } else { None };
        self.expect_symbol(Symbol::Colon)?;
        let body = self.expression()?;
        Ok(ConstraintAst { context, stereotype: Stereotype::Inv, name, body })
    }

    /// Looks ahead for a `pre:`/`post name:`/`derive:`-style clause.
    fn unsupported_stereotype(&self) -> Option<ParseError> {
        let rest = &self.tokens[self.pos..];
        rest.iter().enumerate().find_map(|(i, tok)| {
            let word = match tok.kind {
                TokenKind::Keyword(Keyword::Pre | Keyword::Post) | TokenKind::Ident => tok.text.to_ascii_lowercase(),
                _ => return None,
            };
            if !UNSUPPORTED_STEREOTYPES.contains(&word.as_str()) {
                return None;
            }
            let colon = |j: usize| rest.get(j).is_some_and(|t| t.kind == TokenKind::Symbol(Symbol::Colon));
            let named = rest.get(i + 1).is_some_and(|t| t.kind == TokenKind::Ident) && colon(i + 2);
            (colon(i + 1) || named).then(|| {
                ParseError::new(
                    ParseErrorKind::UnsupportedStereotype,
                    format!("unsupported stereotype '{word}': only invariants (inv) are supported"),
                    tok.line,
                    tok.col,
                )
            })
        })
    }

    fn expression(&mut self) -> PResult<Expr> {
        self.or_expr()
    }

    fn or_expr(&mut self) -> PResult<Expr> {
        let mut left = self.and_expr()?;
        while self.at_keyword(Keyword::Or) {
            self.advance();
            let right = self.and_expr()?;
            left = Expr::binary(InfixOperator::Or, left, right);
        }
        Ok(left)
    }

    fn and_expr(&mut self) -> PResult<Expr> {
        let mut left = self.comparison()?;
        while self.at_keyword(Keyword::And) {
            self.advance();
            let right = self.comparison()?;
            left = Expr::binary(InfixOperator::And, left, right);
        }
        Ok(left)
    }

    fn comparison_op(&self) -> Option<InfixOperator> {
        match self.peek().kind {
            TokenKind::Symbol(Symbol::Eq) => Some(InfixOperator::Eq),
            TokenKind::Symbol(Symbol::Ne) => Some(InfixOperator::Ne),
            TokenKind::Symbol(Symbol::Lt) => Some(InfixOperator::Lt),
            TokenKind::Symbol(Symbol::Gt) => Some(InfixOperator::Gt),
            TokenKind::Symbol(Symbol::Le) => Some(InfixOperator::Le),
            TokenKind::Symbol(Symbol::Ge) => Some(InfixOperator::Ge),
            _ => None,
        }
    }

    fn comparison(&mut self) -> PResult<Expr> {
        let left = self.additive()?;
        let Some(op) = self.comparison_op() else {
            return Ok(left);
        };
        self.advance();
        let right = self.additive()?;
        if self.comparison_op().is_some() {
            let tok = self.peek();
            return Err(self.error_at(
                tok,
                "comparison operators are non-associative; add parentheses",
                &["'and'", "'or'", "end of expression"],
            ));
        }
        Ok(Expr::binary(op, left, right))
    }

    fn additive(&mut self) -> PResult<Expr> {
        let mut left = self.multiplicative()?;
        loop {
            let op = match self.peek().kind {
                TokenKind::Symbol(Symbol::Plus) => InfixOperator::Add,
                TokenKind::Symbol(Symbol::Minus) => InfixOperator::Sub,
                _ => return Ok(left),
            };
            self.advance();
            let right = self.multiplicative()?;
            left = Expr::binary(op, left, right);
        }
    }

    fn multiplicative(&mut self) -> PResult<Expr> {
        let mut left = self.unary()?;
        loop {
            let op = match self.peek().kind {
                TokenKind::Symbol(Symbol::Star) => InfixOperator::Mul,
                TokenKind::Symbol(Symbol::Slash) => InfixOperator::Div,
                _ => return Ok(left),
            };
            self.advance();
            let right = self.unary()?;
            left = Expr::binary(op, left, right);
        }
    }

    fn unary(&mut self) -> PResult<Expr> {
        let op = match self.peek().kind {
            TokenKind::Keyword(Keyword::Not) => UnaryOperator::Not,
            TokenKind::Symbol(Symbol::Minus) => UnaryOperator::Neg,
            _ => return self.postfix(),
        };
        self.advance();
        self.enter()?;
        let operand = self.unary();
        self.leave();
        Ok(Expr::unary(op, operand?))
    }

    fn postfix(&mut self) -> PResult<Expr> {
        let mut expr = self.primary()?;
        loop {
            if self.at_symbol(Symbol::Dot) {
                self.advance();
                let name = self.expect_ident("property name")?;
                expr = Expr::property(expr, name);
            } else if self.at_symbol(Symbol::Arrow) {
                self.advance();
                expr = self.arrow_call(expr)?;
            } else {
                return Ok(expr);
            }
        }
    }

    /// Parses what follows `->`: an iterator or a collection operation.
    fn arrow_call(&mut self, source: Expr) -> PResult<Expr> {
        const OPS: &[&str] = &["forAll", "exists", "select", "reject", "collect", "size", "isEmpty", "notEmpty"];
        let tok = self.peek().clone();
        if tok.kind != TokenKind::Ident {
            return Err(self.unexpected(OPS));
        }
        if let Some(kind) = IteratorKind::from_name(&tok.text) {
            self.advance();
            self.expect_symbol(Symbol::LParen)?;
            let variable = self.expect_ident("iterator variable")?;
            let variable_type = if self.at_symbol(Symbol::Colon) {
                self.advance();
                Some(self.expect_ident("type name")?)
            } else {
                None
            };
            self.expect_symbol(Symbol::Pipe)?;
            self.enter()?;
            let body = self.expression();
            self.leave();
            let body = body?;
            self.expect_symbol(Symbol::RParen)?;
            Ok(Expr::iterate(source, kind, variable, variable_type, body))
        } else if let Some(op) = CollectionOperator::from_name(&tok.text) {
            self.advance();
            self.expect_symbol(Symbol::LParen)?;
            self.expect_symbol(Symbol::RParen)?;
            Ok(Expr::collection_op(source, op))
        } else {
            Err(self.error_at(&tok, format!("unsupported collection operation '{}'", tok.text), OPS))
        }
    }

    fn primary(&mut self) -> PResult<Expr> {
        let tok = self.peek().clone();
        match tok.kind {
            TokenKind::Keyword(Keyword::SelfKw) => {
                self.advance();
                Ok(Expr::SelfRef)
            }
            TokenKind::Keyword(Keyword::True) => {
                self.advance();
                Ok(Expr::boolean(true))
            }
            TokenKind::Keyword(Keyword::False) => {
                self.advance();
                Ok(Expr::boolean(false))
            }
            TokenKind::Ident => {
                self.advance();
                Ok(Expr::variable(tok.text))
            }
            TokenKind::IntLit => {
                self.advance();
                tok.text
                    .parse::<i64>()
                    .map(Expr::int)
                    .map_err(|_| self.error_at(&tok, format!("integer literal {} out of range", tok.text), &[]))
            }
            TokenKind::RealLit => {
                self.advance();
                match tok.text.parse::<f64>() {
                    Ok(v) if v.is_finite() => Ok(Expr::real(v)),
                    _ => Err(self.error_at(&tok, format!("real literal {} out of range", tok.text), &[])),
                }
            }
            TokenKind::StringLit => {
                self.advance();
                Ok(Expr::string(tok.text))
            }
            TokenKind::Symbol(Symbol::LParen) => {
                self.advance();
                self.enter()?;
                let inner = self.expression();
                self.leave();
                let inner = inner?;
                self.expect_symbol(Symbol::RParen)?;
                Ok(inner)
            }
            TokenKind::Keyword(Keyword::If) => {
                self.advance();
                self.enter()?;
                let result = self.if_rest();
                self.leave();
                result
            }
            _ => Err(self.unexpected(&["expression"])),
        }
    }

    fn if_rest(&mut self) -> PResult<Expr> {
        let condition = self.expression()?;
        self.expect_keyword(Keyword::Then)?;
        let then_branch = self.expression()?;
        self.expect_keyword(Keyword::Else)?;
        let else_branch = self.expression()?;
        self.expect_keyword(Keyword::Endif)?;
        Ok(Expr::if_then_else(condition, then_branch, else_branch))
    }
}
