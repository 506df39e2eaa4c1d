//! Recursive-descent parser.
//!
//! ```text
//! expr   = term { ("+" | "-") term } ;
//! term   = unary { ("*" | "/") unary } ;
//! unary  = "-" unary | power ;
//! power  = atom [ "^" unary ] ;
//! atom   = number | "x" | "pi" | "e" | func "(" expr ")" | "(" expr ")" ;
//! func   = "exp" | "log" | "sin" | "cos" | "sqrt" ;
//! number = digits [ "." digits ] [ ("e" | "E") [ "+" | "-" ] digits ]
//!        | "." digits [ ("e" | "E") [ "+" | "-" ] digits ] ;
//! ```
//!
//! `^` is right-associative and binds tighter than unary minus, so `-x^2`
//! is `-(x^2)` and `2^-x` is `2^(-x)`.

use super::ast::{BinOp, Constant, Expr, Func};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    offset: usize,
}

fn lex(text: &str) -> Result<Vec<Token>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let simple = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => Some(Tok::Plus),
            b'-' => Some(Tok::Minus),
            b'*' => Some(Tok::Star),
            b'/' => Some(Tok::Slash),
            b'^' => Some(Tok::Caret),
            b'(' => Some(Tok::LParen),
            b')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(tok) = simple {
            out.push(Token { tok, offset: start });
            i += 1;
            continue;
        }
        if c.is_ascii_digit() || c == b'.' {
            i = scan_number(bytes, i);
            let lexeme = &text[start..i];
            let value: f64 = lexeme.parse().map_err(|_| Error::Syntax {
                offset: start,
                expected: vec!["number".into()],
            })?;
            out.push(Token {
                tok: Tok::Num(value),
                offset: start,
            });
            continue;
        }
        if c.is_ascii_alphabetic() || c == b'_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push(Token {
                tok: Tok::Ident(text[start..i].to_string()),
                offset: start,
            });
            continue;
        }
        return Err(Error::Syntax {
            offset: start,
            expected: expected_operand(),
        });
    }
    out.push(Token {
        tok: Tok::End,
        offset: text.len(),
    });
    Ok(out)
}

fn scan_number(bytes: &[u8], mut i: usize) -> usize {
    let digits = |mut i: usize| {
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
        }
        i
    };
    i = digits(i);
    if i < bytes.len() && bytes[i] == b'.' {
        i = digits(i + 1);
    }
    if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
        let mut j = i + 1;
        if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
            j += 1;
        }
        // Only an exponent if digits follow; otherwise `2e` is `2` then `e`.
        if j < bytes.len() && bytes[j].is_ascii_digit() {
            i = digits(j);
        }
    }
    i
}

fn expected_operand() -> Vec<String> {
    ["number", "x", "pi", "e", "function", "(", "-"]
        .into_iter()
        .map(String::from)
        .collect()
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if t.tok != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok, name: &str) -> Result<()> {
        let t = self.peek();
        if t.tok == tok {
            self.bump();
            Ok(())
        } else {
            Err(Error::Syntax {
                offset: t.offset,
                expected: vec![name.to_string()],
            })
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek().tok {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek().tok {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.unary()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.peek().tok == Tok::Minus {
            self.bump();
            return Ok(Expr::neg(self.unary()?));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.peek().tok == Tok::Caret {
            self.bump();
            let exponent = self.unary()?;
            return Ok(Expr::binary(BinOp::Pow, base, exponent));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        let t = self.bump();
        match t.tok {
            Tok::Num(v) => Ok(Expr::Num(v)),
            Tok::LParen => {
                let inner = self.expr()?;
                self.expect(Tok::RParen, ")")?;
                Ok(inner)
            }
            Tok::Ident(name) => {
                if name == "x" {
                    return Ok(Expr::Var);
                }
                if let Some(c) = Constant::from_name(&name) {
                    return Ok(Expr::Const(c));
                }
                if let Some(func) = Func::from_name(&name) {
                    self.expect(Tok::LParen, "(")?;
                    let arg = self.expr()?;
                    self.expect(Tok::RParen, ")")?;
                    return Ok(Expr::call(func, arg));
                }
                Err(Error::UnknownIdentifier {
                    name,
                    offset: t.offset,
                })
            }
            _ => Err(Error::Syntax {
                offset: t.offset,
                expected: expected_operand(),
            }),
        }
    }
}

/// Parses a one-variable expression.
pub fn parse(text: &str) -> Result<Expr> {
    let tokens = lex(text)?;
    let mut p = Parser { tokens, pos: 0 };
    let e = p.expr()?;
    let t = p.peek();
    if t.tok != Tok::End {
        return Err(Error::Syntax {
            offset: t.offset,
            expected: ["+", "-", "*", "/", "^", "end of input"]
                .into_iter()
                .map(String::from)
                .collect(),
        });
    }
    Ok(e)
}
