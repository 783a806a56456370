use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};

use super::poly::{Polynomial, Rat};

/// Expression grammar: integer and `p/q` rational literals, `+ - * ^`,
/// parentheses, variables `[a-zA-Z][a-zA-Z0-9_]*`. Multiplication is always
/// explicit (`2*x`, never `2x`); `/` appears only inside rational literals.
pub fn parse_poly(text: &str, variables: &[String]) -> Result<Polynomial> {
    let tokens = lex(text)?;
    let mut p = Parser {
        tokens,
        pos: 0,
        variables,
        text_len: text.len(),
    };
    let poly = p.expr()?;
    if p.pos < p.tokens.len() {
        let t = &p.tokens[p.pos];
        return Err(Error::Parse {
            position: t.pos,
            message: format!("unexpected `{}`", t.kind.describe()),
        });
    }
    Ok(poly)
}

#[derive(Debug, Clone, PartialEq)]
enum TokKind {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
}

impl TokKind {
    fn describe(&self) -> String {
        match self {
            TokKind::Int(n) => n.to_string(),
            TokKind::Ident(s) => s.clone(),
            TokKind::Plus => "+".into(),
            TokKind::Minus => "-".into(),
            TokKind::Star => "*".into(),
            TokKind::Caret => "^".into(),
            TokKind::Slash => "/".into(),
            TokKind::LParen => "(".into(),
            TokKind::RParen => ")".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    kind: TokKind,
    /// 1-based byte position in the source text.
    pos: usize,
}

fn lex(text: &str) -> Result<Vec<Token>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let pos = i + 1;
        match c {
            ' ' | '\t' | '\r' | '\n' => {
                i += 1;
            }
            '+' => {
                out.push(Token {
                    kind: TokKind::Plus,
                    pos,
                });
                i += 1;
            }
            '-' => {
                out.push(Token {
                    kind: TokKind::Minus,
                    pos,
                });
                i += 1;
            }
            '*' => {
                out.push(Token {
                    kind: TokKind::Star,
                    pos,
                });
                i += 1;
            }
            '^' => {
                out.push(Token {
                    kind: TokKind::Caret,
                    pos,
                });
                i += 1;
            }
            '/' => {
                out.push(Token {
                    kind: TokKind::Slash,
                    pos,
                });
                i += 1;
            }
            '(' => {
                out.push(Token {
                    kind: TokKind::LParen,
                    pos,
                });
                i += 1;
            }
            ')' => {
                out.push(Token {
                    kind: TokKind::RParen,
                    pos,
                });
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = text[start..i].parse().expect("digits");
                out.push(Token {
                    kind: TokKind::Int(n),
                    pos,
                });
            }
            'a'..='z' | 'A'..='Z' => {
                let start = i;
                i += 1;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push(Token {
                    kind: TokKind::Ident(text[start..i].to_string()),
                    pos,
                });
            }
            _ => {
                return Err(Error::Parse {
                    position: pos,
                    message: format!("unexpected character `{}`", c),
                });
            }
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    variables: &'a [String],
    text_len: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn end_pos(&self) -> usize {
        self.text_len + 1
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        self.pos += 1;
        t
    }

    fn nvars(&self) -> usize {
        self.variables.len()
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut acc = self.term()?;
        while let Some(t) = self.peek() {
            match t.kind {
                TokKind::Plus => {
                    self.bump();
                    acc = acc.add(&self.term()?);
                }
                TokKind::Minus => {
                    self.bump();
                    acc = acc.sub(&self.term()?);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.unary()?;
        while let Some(t) = self.peek() {
            match t.kind {
                TokKind::Star => {
                    self.bump();
                    acc = acc.mul(&self.unary()?);
                }
                TokKind::Slash => {
                    return Err(Error::Parse {
                        position: t.pos,
                        message: "`/` is only allowed inside rational literals `p/q`".into(),
                    });
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Polynomial> {
        let mut sign = 1i32;
        while let Some(t) = self.peek() {
            match t.kind {
                TokKind::Plus => {
                    self.bump();
                }
                TokKind::Minus => {
                    sign = -sign;
                    self.bump();
                }
                _ => break,
            }
        }
        let p = self.power()?;
        Ok(if sign < 0 { p.neg() } else { p })
    }

    fn power(&mut self) -> Result<Polynomial> {
        let mut base = self.atom()?;
        while let Some(t) = self.peek() {
            if t.kind != TokKind::Caret {
                break;
            }
            let caret_pos = t.pos;
            self.bump();
            match self.peek() {
                Some(t) if matches!(t.kind, TokKind::Int(_)) => {
                    let t = self.bump();
                    let TokKind::Int(n) = t.kind else {
                        unreachable!()
                    };
                    let e: u32 = n.try_into().map_err(|_| Error::Parse {
                        position: t.pos,
                        message: "exponent too large".into(),
                    })?;
                    base = base.pow(e);
                }
                Some(t) if t.kind == TokKind::Minus => {
                    return Err(Error::NegativeExponent(t.pos));
                }
                Some(t) => {
                    return Err(Error::Parse {
                        position: t.pos,
                        message: "exponent must be a non-negative integer literal".into(),
                    });
                }
                None => {
                    return Err(Error::Parse {
                        position: caret_pos,
                        message: "missing exponent after `^`".into(),
                    });
                }
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Polynomial> {
        let Some(t) = self.peek() else {
            return Err(Error::Parse {
                position: self.end_pos(),
                message: "unexpected end of expression".into(),
            });
        };
        match t.kind.clone() {
            TokKind::Int(n) => {
                self.bump();
                // rational literal p/q
                if matches!(self.peek().map(|t| &t.kind), Some(TokKind::Slash)) {
                    let slash = self.bump();
                    match self.peek() {
                        Some(t2) if matches!(t2.kind, TokKind::Int(_)) => {
                            let t2 = self.bump();
                            let TokKind::Int(d) = t2.kind else {
                                unreachable!()
                            };
                            if d.is_zero() {
                                return Err(Error::Parse {
                                    position: t2.pos,
                                    message: "rational literal with zero denominator".into(),
                                });
                            }
                            return Ok(Polynomial::constant(self.nvars(), BigRational::new(n, d)));
                        }
                        _ => {
                            return Err(Error::Parse {
                                position: slash.pos,
                                message: "`/` must be followed by an integer denominator".into(),
                            });
                        }
                    }
                }
                Ok(Polynomial::constant(self.nvars(), Rat::from_integer(n)))
            }
            TokKind::Ident(name) => {
                let t = self.bump();
                match self.variables.iter().position(|v| *v == name) {
                    Some(i) => Ok(Polynomial::var(i, self.nvars())),
                    None => {
                        let _ = t;
                        Err(Error::UnknownVariable(name))
                    }
                }
            }
            TokKind::LParen => {
                self.bump();
                let inner = self.expr()?;
                match self.peek() {
                    Some(t) if t.kind == TokKind::RParen => {
                        self.bump();
                        Ok(inner)
                    }
                    Some(t) => Err(Error::Parse {
                        position: t.pos,
                        message: format!("expected `)`, found `{}`", t.kind.describe()),
                    }),
                    None => Err(Error::Parse {
                        position: self.end_pos(),
                        message: "missing closing `)`".into(),
                    }),
                }
            }
            other => Err(Error::Parse {
                position: t.pos,
                message: format!("unexpected `{}`", other.describe()),
            }),
        }
    }
}
