use std::fmt::Write;

use super::{ConstraintAst, Expr, UnaryOperator};

const UNARY_PRECEDENCE: u8 = 6;
const POSTFIX_PRECEDENCE: u8 = 7;
const PRIMARY_PRECEDENCE: u8 = 8;

/// Renders a constraint as canonical OCL text, e.g.
/// `context Book inv invBook: self.pages > 0`.
pub fn pretty_print(ast: &ConstraintAst) -> String {
    let mut out = format!("context {} inv", ast.context);
    if let Some(name) = &ast.name {
        out.push(' ');
        out.push_str(name);
    }
    out.push_str(": ");
    write_expr(&mut out, &ast.body);
    out
}

/// Renders an expression with the minimum parentheses needed to parse back
/// to the same tree.
pub fn pretty_print_expr(expr: &Expr) -> String {
    let mut out = String::new();
    write_expr(&mut out, expr);
    out
}

fn precedence(expr: &Expr) -> u8 {
    match expr {
        Expr::OperationCall { op, .. } => op.precedence(),
        Expr::Unary { .. } => UNARY_PRECEDENCE,
        Expr::IntegerLiteral { value } if *value < 0 => UNARY_PRECEDENCE,
        Expr::RealLiteral { value } if value.is_sign_negative() => UNARY_PRECEDENCE,
        Expr::Property { .. } | Expr::Iterator { .. } | Expr::CollectionOp { .. } => POSTFIX_PRECEDENCE,
        _ => PRIMARY_PRECEDENCE,
    }
}

fn write_wrapped(out: &mut String, expr: &Expr, wrap: bool) {
    if wrap {
        out.push('(');
        write_expr(out, expr);
        out.push(')');
    } else {
        write_expr(out, expr);
    }
}

pub(crate) fn format_real(value: f64) -> String {
    let mut s = value.to_string();
    if value.is_finite() && !s.contains('.') {
        s.push_str(".0");
    }
    s
}

fn write_expr(out: &mut String, expr: &Expr) {
    match expr {
        Expr::SelfRef => out.push_str("self"),
        Expr::Variable { name } => out.push_str(name),
        Expr::IntegerLiteral { value } => {
            let _ = write!(out, "{value}");
        }
        Expr::RealLiteral { value } => out.push_str(&format_real(*value)),
        Expr::StringLiteral { value } => {
            out.push('\'');
            out.push_str(&value.replace('\'', "''"));
            out.push('\'');
        }
        Expr::BooleanLiteral { value } => out.push_str(if *value { "true" } else { "false" }),
        Expr::Property { source, name } => {
            write_wrapped(out, source, precedence(source) < POSTFIX_PRECEDENCE);
            out.push('.');
            out.push_str(name);
        }
        Expr::OperationCall { op, left, right } => {
            let p = op.precedence();
            let left_wrap = precedence(left) < p || (op.is_comparison() && precedence(left) == p);
            write_wrapped(out, left, left_wrap);
            let _ = write!(out, " {} ", op.symbol());
            write_wrapped(out, right, precedence(right) <= p);
        }
        Expr::Unary { op, operand } => {
            let wrap = precedence(operand) < UNARY_PRECEDENCE;
            match op {
                UnaryOperator::Not => {
                    out.push_str("not ");
                    write_wrapped(out, operand, wrap);
                }
                UnaryOperator::Neg => {
                    out.push('-');
                    // "--" would start a line comment
                    let inner = pretty_print_expr(operand);
                    write_wrapped(out, operand, wrap || inner.starts_with('-'));
                }
            }
        }
        Expr::If { condition, then_branch, else_branch } => {
            out.push_str("if ");
            write_expr(out, condition);
            out.push_str(" then ");
            write_expr(out, then_branch);
            out.push_str(" else ");
            write_expr(out, else_branch);
            out.push_str(" endif");
        }
        Expr::Iterator { source, iterator, variable, variable_type, body } => {
            write_wrapped(out, source, precedence(source) < POSTFIX_PRECEDENCE);
            let _ = write!(out, "->{}({variable}", iterator.name());
            if let Some(ty) = variable_type {
                let _ = write!(out, " : {ty}");
            }
            out.push_str(" | ");
            write_expr(out, body);
            out.push(')');
        }
        Expr::CollectionOp { source, op } => {
            write_wrapped(out, source, precedence(source) < POSTFIX_PRECEDENCE);
            let _ = write!(out, "->{}()", op.name());
        }
    }
}
