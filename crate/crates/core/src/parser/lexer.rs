use std::fmt;

use super::{ParseError, ParseErrorKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Keyword {
    Context,
    Inv,
    Pre,
    Post,
    If,
    Then,
    Else,
    Endif,
    And,
    Or,
    Not,
    True,
    False,
    SelfKw,
}

impl Keyword {
    const ALL: [Keyword; 14] = [
        Keyword::Context,
        Keyword::Inv,
        Keyword::Pre,
        Keyword::Post,
        Keyword::If,
        Keyword::Then,
        Keyword::Else,
        Keyword::Endif,
        Keyword::And,
        Keyword::Or,
        Keyword::Not,
        Keyword::True,
        Keyword::False,
        Keyword::SelfKw,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Keyword::Context => "context",
            Keyword::Inv => "inv",
            Keyword::Pre => "pre",
            Keyword::Post => "post",
            Keyword::If => "if",
            Keyword::Then => "then",
            Keyword::Else => "else",
            Keyword::Endif => "endif",
            Keyword::And => "and",
            Keyword::Or => "or",
            Keyword::Not => "not",
            Keyword::True => "true",
            Keyword::False => "false",
            Keyword::SelfKw => "self",
        }
    }

    /// Keywords match case-insensitively.
    pub fn lookup(word: &str) -> Option<Keyword> {
        Keyword::ALL.into_iter().find(|k| k.as_str().eq_ignore_ascii_case(word))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Symbol {
    Colon,
    ColonColon,
    LParen,
    RParen,
    Pipe,
    Arrow,
    Dot,
    Eq,
    Ne,
    Lt,
    Gt,
    Le,
    Ge,
    Plus,
    Minus,
    Star,
    Slash,
    Comma,
}

impl Symbol {
    pub fn as_str(self) -> &'static str {
        match self {
            Symbol::Colon => ":",
            Symbol::ColonColon => "::",
            Symbol::LParen => "(",
            Symbol::RParen => ")",
            Symbol::Pipe => "|",
            Symbol::Arrow => "->",
            Symbol::Dot => ".",
            Symbol::Eq => "=",
            Symbol::Ne => "<>",
            Symbol::Lt => "<",
            Symbol::Gt => ">",
            Symbol::Le => "<=",
            Symbol::Ge => ">=",
            Symbol::Plus => "+",
            Symbol::Minus => "-",
            Symbol::Star => "*",
            Symbol::Slash => "/",
            Symbol::Comma => ",",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TokenKind {
    Ident,
    IntLit,
    RealLit,
    StringLit,
    Keyword(Keyword),
    Symbol(Symbol),
    Eof,
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TokenKind::Ident => f.write_str("identifier"),
            TokenKind::IntLit => f.write_str("integer literal"),
            TokenKind::RealLit => f.write_str("real literal"),
            TokenKind::StringLit => f.write_str("string literal"),
            TokenKind::Keyword(k) => write!(f, "'{}'", k.as_str()),
            TokenKind::Symbol(s) => write!(f, "'{}'", s.as_str()),
            TokenKind::Eof => f.write_str("end of input"),
        }
    }
}

/// A lexical token. For string literals `text` holds the unescaped contents;
/// otherwise it is the source slice. Positions are 1-based, columns count
/// characters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub text: String,
    pub line: usize,
    pub col: usize,
}

struct Cursor<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    col: usize,
}

impl Cursor<'_> {
    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn peek2(&self) -> Option<char> {
        let mut it = self.chars.clone();
        it.next();
        it.next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }
}

/// Splits OCL source into tokens, ending with a single `Eof` token.
pub fn tokenize(source: &str) -> Result<Vec<Token>, ParseError> {
    let mut cur = Cursor { chars: source.chars().peekable(), line: 1, col: 1 };
    let mut tokens = Vec::new();

    loop {
        // whitespace and `--` comments
        loop {
            match cur.peek() {
                Some(c) if c.is_whitespace() => {
                    cur.bump();
                }
                Some('-') if cur.peek2() == Some('-') => {
                    while cur.peek().is_some_and(|c| c != '\n') {
                        cur.bump();
                    }
                }
                _ => break,
            }
        }

        let (line, col) = (cur.line, cur.col);
        let Some(c) = cur.bump() else {
            tokens.push(Token { kind: TokenKind::Eof, text: String::new(), line, col });
            return Ok(tokens);
        };
        let mut text = String::from(c);

        let kind = match c {
            'A'..='Z' | 'a'..='z' | '_' => {
                while let Some(c) = cur.peek().filter(|c| c.is_ascii_alphanumeric() || *c == '_') {
                    text.push(c);
                    cur.bump();
                }
                Keyword::lookup(&text).map_or(TokenKind::Ident, TokenKind::Keyword)
            }
            '0'..='9' => {
                while let Some(c) = cur.peek().filter(char::is_ascii_digit) {
                    text.push(c);
                    cur.bump();
                }
                if cur.peek() == Some('.') && cur.peek2().is_some_and(|c| c.is_ascii_digit()) {
                    text.push('.');
                    cur.bump();
                    while let Some(c) = cur.peek().filter(char::is_ascii_digit) {
                        text.push(c);
                        cur.bump();
                    }
                    TokenKind::RealLit
                } else {
                    TokenKind::IntLit
                }
            }
            '\'' => {
                text.clear();
                loop {
                    match cur.bump() {
                        None => {
                            return Err(ParseError::new(
                                ParseErrorKind::Lexical,
                                "unterminated string literal",
                                line,
                                col,
                            ))
                        }
                        Some('\'') if cur.peek() == Some('\'') => {
                            cur.bump();
                            text.push('\'');
                        }
                        Some('\'') => break,
                        Some(c) => text.push(c),
                    }
                }
                TokenKind::StringLit
            }
            _ => {
                let two = |cur: &mut Cursor, next: char, sym: Symbol, text: &mut String| {
                    if cur.peek() == Some(next) {
                        cur.bump();
                        text.push(next);
                        Some(sym)
                    } else {
                        None
                    }
                };
                let sym = match c {
                    ':' => two(&mut cur, ':', Symbol::ColonColon, &mut text).unwrap_or(Symbol::Colon),
                    '(' => Symbol::LParen,
                    ')' => Symbol::RParen,
                    '|' => Symbol::Pipe,
                    '-' => two(&mut cur, '>', Symbol::Arrow, &mut text).unwrap_or(Symbol::Minus),
                    '.' => Symbol::Dot,
                    '=' => Symbol::Eq,
                    '<' => two(&mut cur, '>', Symbol::Ne, &mut text)
                        .or_else(|| two(&mut cur, '=', Symbol::Le, &mut text))
                        .unwrap_or(Symbol::Lt),
                    '>' => two(&mut cur, '=', Symbol::Ge, &mut text).unwrap_or(Symbol::Gt),
                    '+' => Symbol::Plus,
                    '*' => Symbol::Star,
                    '/' => Symbol::Slash,
                    ',' => Symbol::Comma,
                    other => {
                        return Err(ParseError::new(
                            ParseErrorKind::Lexical,
                            format!("illegal character {other:?}"),
                            line,
                            col,
                        ))
                    }
                };
                TokenKind::Symbol(sym)
            }
        };
        tokens.push(Token { kind, text, line, col });
    }
}
