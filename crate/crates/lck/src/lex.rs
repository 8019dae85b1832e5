//! Tokenizer for the workspace DSL. Tokens carry line/column positions;
//! `#` and `//` start line comments. The three-character sequence `(x)` is
//! the tensor product operator.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Int(i64),
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    LParen,
    RParen,
    Comma,
    Semi,
    Colon,
    Dot,
    Arrow,
    Eq,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    OTimes,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "identifier `{s}`"),
            Tok::Int(n) => write!(f, "integer `{n}`"),
            Tok::LBrace => write!(f, "`{{`"),
            Tok::RBrace => write!(f, "`}}`"),
            Tok::LBracket => write!(f, "`[`"),
            Tok::RBracket => write!(f, "`]`"),
            Tok::LParen => write!(f, "`(`"),
            Tok::RParen => write!(f, "`)`"),
            Tok::Comma => write!(f, "`,`"),
            Tok::Semi => write!(f, "`;`"),
            Tok::Colon => write!(f, "`:`"),
            Tok::Dot => write!(f, "`.`"),
            Tok::Arrow => write!(f, "`->`"),
            Tok::Eq => write!(f, "`=`"),
            Tok::Plus => write!(f, "`+`"),
            Tok::Minus => write!(f, "`-`"),
            Tok::Star => write!(f, "`*`"),
            Tok::Slash => write!(f, "`/`"),
            Tok::Caret => write!(f, "`^`"),
            Tok::OTimes => write!(f, "`(x)`"),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone)]
pub struct Token {
    pub tok: Tok,
    pub pos: Pos,
}

#[derive(Debug, Clone, thiserror::Error)]
#[error("{pos}: {message}")]
pub struct LexError {
    pub pos: Pos,
    pub message: String,
}

pub fn tokenize(src: &str) -> Result<Vec<Token>, LexError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0usize;
    let mut line = 1usize;
    let mut col = 1usize;
    macro_rules! bump {
        () => {{
            if chars[i] == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            i += 1;
        }};
    }
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, col };
        match c {
            ' ' | '\t' | '\r' | '\n' => {
                bump!();
            }
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    bump!();
                }
            }
            '/' if i + 1 < chars.len() && chars[i + 1] == '/' => {
                while i < chars.len() && chars[i] != '\n' {
                    bump!();
                }
            }
            '(' => {
                // the exact sequence `(x)` is the tensor product operator
                if i + 2 < chars.len() && chars[i + 1] == 'x' && chars[i + 2] == ')' {
                    out.push(Token {
                        tok: Tok::OTimes,
                        pos,
                    });
                    bump!();
                    bump!();
                    bump!();
                } else {
                    out.push(Token {
                        tok: Tok::LParen,
                        pos,
                    });
                    bump!();
                }
            }
            ')' => {
                out.push(Token {
                    tok: Tok::RParen,
                    pos,
                });
                bump!();
            }
            '{' => {
                out.push(Token { tok: Tok::LBrace, pos });
                bump!();
            }
            '}' => {
                out.push(Token { tok: Tok::RBrace, pos });
                bump!();
            }
            '[' => {
                out.push(Token {
                    tok: Tok::LBracket,
                    pos,
                });
                bump!();
            }
            ']' => {
                out.push(Token {
                    tok: Tok::RBracket,
                    pos,
                });
                bump!();
            }
            ',' => {
                out.push(Token { tok: Tok::Comma, pos });
                bump!();
            }
            ';' => {
                out.push(Token { tok: Tok::Semi, pos });
                bump!();
            }
            ':' => {
                out.push(Token { tok: Tok::Colon, pos });
                bump!();
            }
            '.' => {
                out.push(Token { tok: Tok::Dot, pos });
                bump!();
            }
            '=' => {
                out.push(Token { tok: Tok::Eq, pos });
                bump!();
            }
            '+' => {
                out.push(Token { tok: Tok::Plus, pos });
                bump!();
            }
            '-' => {
                if i + 1 < chars.len() && chars[i + 1] == '>' {
                    out.push(Token { tok: Tok::Arrow, pos });
                    bump!();
                    bump!();
                } else {
                    out.push(Token { tok: Tok::Minus, pos });
                    bump!();
                }
            }
            '*' => {
                out.push(Token { tok: Tok::Star, pos });
                bump!();
            }
            '/' => {
                out.push(Token { tok: Tok::Slash, pos });
                bump!();
            }
            '^' => {
                out.push(Token { tok: Tok::Caret, pos });
                bump!();
            }
            c if c.is_ascii_digit() => {
                let mut n: i64 = 0;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    n = n
                        .checked_mul(10)
                        .and_then(|m| m.checked_add(chars[i] as i64 - '0' as i64))
                        .ok_or_else(|| LexError {
                            pos,
                            message: "integer literal overflows".into(),
                        })?;
                    bump!();
                }
                out.push(Token { tok: Tok::Int(n), pos });
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut s = String::new();
                while i < chars.len()
                    && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == '\'')
                {
                    s.push(chars[i]);
                    bump!();
                }
                out.push(Token { tok: Tok::Ident(s), pos });
            }
            other => {
                return Err(LexError {
                    pos,
                    message: format!("unexpected character `{other}`"),
                });
            }
        }
    }
    out.push(Token {
        tok: Tok::Eof,
        pos: Pos { line, col },
    });
    Ok(out)
}
