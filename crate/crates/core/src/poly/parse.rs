//! Polynomial text format.
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor (('*'|'×'|'/')? factor)*
//! factor := atom ('^' exponent)*
//! atom   := number | 't' | '(' expr ')'
//! exponent := integer | '{' integer '}'
//! ```
//!
//! Juxtaposition multiplies. `/` only accepts a nonzero constant divisor.
//! TeX spellings found in typeset sources are accepted as well: `\times`,
//! `\cdot`, `\ ` and `\,` spacing, and `−` (U+2212) for minus.

use thiserror::Error;

use super::Poly;

const MAX_EXPONENT: u32 = 200;
const MAX_DEPTH: usize = 200;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at position {position}: expected {expected}, found {found}")]
pub struct ParseError {
    /// Character offset into the input.
    pub position: usize,
    pub expected: String,
    pub found: String,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64, bool),
    T,
    Plus,
    Minus,
    Times,
    Slash,
    Caret,
    LParen,
    RParen,
    LBrace,
    RBrace,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(v, _) => format!("number {v}"),
            Tok::T => "'t'".into(),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Times => "'*'".into(),
            Tok::Slash => "'/'".into(),
            Tok::Caret => "'^'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::LBrace => "'{'".into(),
            Tok::RBrace => "'}'".into(),
            Tok::End => "end of input".into(),
        }
    }

    fn starts_atom(&self) -> bool {
        matches!(self, Tok::Num(..) | Tok::T | Tok::LParen)
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let simple = match c {
            't' => Some(Tok::T),
            '+' => Some(Tok::Plus),
            '-' | '\u{2212}' => Some(Tok::Minus),
            '*' | '×' | '·' => Some(Tok::Times),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '{' => Some(Tok::LBrace),
            '}' => Some(Tok::RBrace),
            _ => None,
        };
        if let Some(tok) = simple {
            out.push((tok, start));
            i += 1;
            continue;
        }
        if c == '\\' {
            let rest: String = chars[i + 1..].iter().take_while(|c| c.is_ascii_alphabetic()).collect();
            match rest.as_str() {
                "times" | "cdot" => {
                    out.push((Tok::Times, start));
                    i += 1 + rest.len();
                }
                "" if matches!(chars.get(i + 1), Some(' ' | ',' | ';' | '!')) => i += 2,
                _ => {
                    return Err(ParseError {
                        position: start,
                        expected: "a number, 't', an operator or '('".into(),
                        found: format!("'\\{rest}'"),
                    })
                }
            }
            continue;
        }
        if c.is_ascii_digit() || c == '.' {
            let mut j = i;
            while j < chars.len() && chars[j].is_ascii_digit() {
                j += 1;
            }
            let mut fractional = false;
            if j < chars.len() && chars[j] == '.' {
                fractional = true;
                j += 1;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
            }
            if fractional && j < chars.len() && chars[j] == '.' {
                return Err(ParseError {
                    position: j,
                    expected: "a digit or an operator".into(),
                    found: "a second '.'".into(),
                });
            }
            let text: String = chars[i..j].iter().collect();
            if text == "." {
                return Err(ParseError {
                    position: start,
                    expected: "a digit".into(),
                    found: "'.'".into(),
                });
            }
            let value: f64 = text.parse().map_err(|_| ParseError {
                position: start,
                expected: "a number".into(),
                found: format!("'{text}'"),
            })?;
            if !value.is_finite() {
                return Err(ParseError {
                    position: start,
                    expected: "a finite number".into(),
                    found: format!("'{text}'"),
                });
            }
            out.push((Tok::Num(value, fractional), start));
            i = j;
            continue;
        }
        return Err(ParseError {
            position: start,
            expected: "a number, 't', an operator or '('".into(),
            found: format!("'{c}'"),
        });
    }
    out.push((Tok::End, chars.len()));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    depth: usize,
}

type Coeffs = Vec<f64>;

fn add(a: &[f64], b: &[f64], sign: f64) -> Coeffs {
    (0..a.len().max(b.len()))
        .map(|k| a.get(k).copied().unwrap_or(0.0) + sign * b.get(k).copied().unwrap_or(0.0))
        .collect()
}

fn mul(a: &[f64], b: &[f64]) -> Coeffs {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0.0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn effective_degree(a: &[f64]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0.0)
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn fail<T>(&self, expected: &str) -> Result<T, ParseError> {
        Err(ParseError {
            position: self.offset(),
            expected: expected.into(),
            found: self.peek().describe(),
        })
    }

    fn finite(&self, c: Coeffs, at: usize) -> Result<Coeffs, ParseError> {
        if c.iter().all(|x| x.is_finite()) {
            Ok(c)
        } else {
            Err(ParseError {
                position: at,
                expected: "a finite value".into(),
                found: "overflow".into(),
            })
        }
    }

    fn expr(&mut self) -> Result<Coeffs, ParseError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return self.fail("shallower nesting");
        }
        let mut sign = 1.0;
        match self.peek() {
            Tok::Plus => {
                self.bump();
            }
            Tok::Minus => {
                self.bump();
                sign = -1.0;
            }
            _ => {}
        }
        let mut acc = self.term()?.iter().map(|c| sign * c).collect::<Coeffs>();
        loop {
            let s = match self.peek() {
                Tok::Plus => 1.0,
                Tok::Minus => -1.0,
                _ => break,
            };
            let at = self.offset();
            self.bump();
            let rhs = self.term()?;
            acc = self.finite(add(&acc, &rhs, s), at)?;
        }
        self.depth -= 1;
        Ok(acc)
    }

    fn term(&mut self) -> Result<Coeffs, ParseError> {
        let mut acc = self.factor()?;
        loop {
            let at = self.offset();
            match self.peek() {
                Tok::Times => {
                    self.bump();
                    let rhs = self.factor()?;
                    acc = self.finite(mul(&acc, &rhs), at)?;
                }
                Tok::Slash => {
                    self.bump();
                    let div_at = self.offset();
                    let rhs = self.factor()?;
                    match effective_degree(&rhs) {
                        Some(0) => {
                            let d = rhs[0];
                            acc = self.finite(acc.iter().map(|c| c / d).collect(), at)?;
                        }
                        _ => {
                            return Err(ParseError {
                                position: div_at,
                                expected: "a nonzero constant divisor".into(),
                                found: "a non-constant or zero divisor".into(),
                            })
                        }
                    }
                }
                t if t.starts_atom() => {
                    let rhs = self.factor()?;
                    acc = self.finite(mul(&acc, &rhs), at)?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Coeffs, ParseError> {
        let mut base = self.atom()?;
        while *self.peek() == Tok::Caret {
            let at = self.offset();
            self.bump();
            let n = self.exponent()?;
            let mut acc = vec![1.0];
            for _ in 0..n {
                acc = mul(&acc, &base);
            }
            base = self.finite(acc, at)?;
        }
        Ok(base)
    }

    fn exponent(&mut self) -> Result<u32, ParseError> {
        let braced = *self.peek() == Tok::LBrace;
        if braced {
            self.bump();
        }
        let n = match self.peek() {
            Tok::Num(v, false) if *v <= MAX_EXPONENT as f64 => *v as u32,
            _ => return self.fail("a non-negative integer exponent of at most 200"),
        };
        self.bump();
        if braced {
            if *self.peek() != Tok::RBrace {
                return self.fail("'}'");
            }
            self.bump();
        }
        Ok(n)
    }

    fn atom(&mut self) -> Result<Coeffs, ParseError> {
        match self.peek().clone() {
            Tok::Num(v, _) => {
                self.bump();
                Ok(vec![v])
            }
            Tok::T => {
                self.bump();
                Ok(vec![0.0, 1.0])
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                if *self.peek() != Tok::RParen {
                    return self.fail("')'");
                }
                self.bump();
                Ok(inner)
            }
            _ => self.fail("a number, 't' or '('"),
        }
    }
}

/// Parses a polynomial in `t`.
pub fn parse_poly(src: &str) -> Result<Poly, ParseError> {
    let toks = lex(src)?;
    let mut p = Parser {
        toks,
        pos: 0,
        depth: 0,
    };
    let coeffs = p.expr()?;
    if *p.peek() != Tok::End {
        return p.fail("an operator or end of input");
    }
    Ok(Poly::new(coeffs))
}

/// Canonical text form: descending powers, `c*t^k` terms. Parsing the output
/// reproduces the coefficients bit for bit.
pub fn print_poly(p: &Poly) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, &c) in p.coeffs().iter().enumerate().rev() {
        if c == 0.0 {
            continue;
        }
        let neg = c < 0.0;
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let a = c.abs();
        match k {
            0 => out.push_str(&format!("{a}")),
            _ => {
                if a != 1.0 {
                    out.push_str(&format!("{a}*"));
                }
                out.push('t');
                if k > 1 {
                    out.push_str(&format!("^{k}"));
                }
            }
        }
    }
    out
}
