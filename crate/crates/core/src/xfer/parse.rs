//! Recursive-descent parser for transfer-function expressions.
//!
//! Grammar (whitespace insensitive):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/' | implicit) unary)*
//! unary  := ('+' | '-')* power
//! power  := atom ('^' uint)?
//! atom   := number | 's' | '(' expr ')'
//! ```
//!
//! Adjacency implies multiplication (`2s^3`, `12s`, `(1+s)(2+s)`). Numbers
//! are integers or decimals; fractions like `3/4` arrive through the
//! division operator, which together with left associativity makes
//! `3/4s^2` read as `(3/4)·s²`. The whole expression is evaluated exactly
//! as a ratio of polynomials; the descending-power convention people write
//! by hand maps onto the ascending-power storage here.

use thiserror::Error;

use super::{sign_normalize, TransferFunction, XferError};
use crate::poly::Polynomial;
use crate::scalar::{int, Scalar};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("numerator is identically zero")]
    ZeroNumerator,
    #[error("division by an identically zero expression at byte {position}")]
    ZeroDenominator { position: usize },
}

/// Degree guard; expressions beyond this are data-entry mistakes.
const MAX_EXPONENT: u32 = 4096;

fn syntax(position: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        position,
        message: message.into(),
    }
}

pub fn parse_tf(text: &str) -> Result<TransferFunction, ParseError> {
    let tokens = lex(text)?;
    let mut p = Parser {
        tokens: &tokens,
        pos: 0,
        end: text.len(),
    };
    let rf = p.expr()?;
    if let Some((at, _)) = p.peek() {
        return Err(syntax(at, "unexpected trailing input"));
    }
    // Expression arithmetic can leave a shared constant factor (e.g. from
    // fraction coefficients) in the denominator; scale it away so the
    // stored denominator is a primitive integer polynomial.
    let inv_content = Scalar::from_integer(1.into()) / rf.den.content();
    let num = rf.num.scale(&inv_content);
    let den = rf.den.scale(&inv_content);
    let tf = TransferFunction::new(Scalar::from_integer(1.into()), 0, num, den).map_err(
        |e| match e {
            XferError::ZeroNumerator => ParseError::ZeroNumerator,
            // A zero denominator is caught at the division that makes it.
            other => syntax(0, other.to_string()),
        },
    )?;
    Ok(sign_normalize(tf))
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(Scalar),
    Var,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0usize;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                out.push((i, Tok::Plus));
                i += 1;
            }
            '-' => {
                out.push((i, Tok::Minus));
                i += 1;
            }
            '*' => {
                out.push((i, Tok::Star));
                i += 1;
            }
            '/' => {
                out.push((i, Tok::Slash));
                i += 1;
            }
            '^' => {
                out.push((i, Tok::Caret));
                i += 1;
            }
            '(' => {
                out.push((i, Tok::LParen));
                i += 1;
            }
            ')' => {
                out.push((i, Tok::RParen));
                i += 1;
            }
            's' | 'S' => {
                out.push((i, Tok::Var));
                i += 1;
            }
            '0'..='9' | '.' => {
                let start = i;
                let mut seen_dot = false;
                while i < bytes.len() {
                    match bytes[i] as char {
                        '0'..='9' => i += 1,
                        '.' if !seen_dot => {
                            seen_dot = true;
                            i += 1;
                        }
                        _ => break,
                    }
                }
                if i < bytes.len() && bytes[i] == b'.' {
                    return Err(syntax(start, "malformed numeric literal"));
                }
                let lit = &text[start..i];
                let value = crate::scalar::parse_scalar(lit)
                    .map_err(|e| syntax(start, e.to_string()))?;
                out.push((start, Tok::Num(value)));
            }
            other => return Err(syntax(i, format!("unexpected character `{other}`"))),
        }
    }
    Ok(out)
}

/// Exact ratio of polynomials used while folding the expression tree.
struct RatFunc {
    num: Polynomial,
    den: Polynomial,
}

impl RatFunc {
    fn constant(c: Scalar) -> Self {
        Self {
            num: Polynomial::constant(c),
            den: Polynomial::one(),
        }
    }

    fn var() -> Self {
        Self {
            num: Polynomial::monomial(int(1), 1),
            den: Polynomial::one(),
        }
    }

    fn add(&self, rhs: &Self) -> Self {
        Self {
            num: &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            den: &self.den * &rhs.den,
        }
    }

    fn sub(&self, rhs: &Self) -> Self {
        Self {
            num: &(&self.num * &rhs.den) - &(&rhs.num * &self.den),
            den: &self.den * &rhs.den,
        }
    }

    fn mul(&self, rhs: &Self) -> Self {
        Self {
            num: &self.num * &rhs.num,
            den: &self.den * &rhs.den,
        }
    }

    fn div(&self, rhs: &Self, at: usize) -> Result<Self, ParseError> {
        if rhs.num.is_zero() {
            return Err(ParseError::ZeroDenominator { position: at });
        }
        Ok(Self {
            num: &self.num * &rhs.den,
            den: &self.den * &rhs.num,
        })
    }

    fn neg(&self) -> Self {
        Self {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    fn pow(&self, k: u32) -> Self {
        let mut num = Polynomial::one();
        let mut den = Polynomial::one();
        for _ in 0..k {
            num = &num * &self.num;
            den = &den * &self.den;
        }
        Self { num, den }
    }
}

struct Parser<'a> {
    tokens: &'a [(usize, Tok)],
    pos: usize,
    end: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<(usize, &'a Tok)> {
        self.tokens.get(self.pos).map(|(at, t)| (*at, t))
    }

    fn bump(&mut self) -> Option<(usize, &'a Tok)> {
        let t = self.peek();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn here(&self) -> usize {
        self.peek().map_or(self.end, |(at, _)| at)
    }

    fn expr(&mut self) -> Result<RatFunc, ParseError> {
        let mut acc = self.term()?;
        while let Some((_, tok)) = self.peek() {
            match tok {
                Tok::Plus => {
                    self.bump();
                    acc = acc.add(&self.term()?);
                }
                Tok::Minus => {
                    self.bump();
                    acc = acc.sub(&self.term()?);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RatFunc, ParseError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some((_, Tok::Star)) => {
                    self.bump();
                    acc = acc.mul(&self.unary()?);
                }
                Some((at, Tok::Slash)) => {
                    self.bump();
                    let rhs = self.unary()?;
                    acc = acc.div(&rhs, at)?;
                }
                // Adjacent factor: implicit multiplication.
                Some((_, Tok::Num(_) | Tok::Var | Tok::LParen)) => {
                    acc = acc.mul(&self.unary()?);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<RatFunc, ParseError> {
        match self.peek() {
            Some((_, Tok::Minus)) => {
                self.bump();
                Ok(self.unary()?.neg())
            }
            Some((_, Tok::Plus)) => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<RatFunc, ParseError> {
        let base = self.atom()?;
        if let Some((_, Tok::Caret)) = self.peek() {
            self.bump();
            let at = self.here();
            match self.bump() {
                Some((_, Tok::Num(v))) if v.is_integer() => {
                    let k = u32::try_from(v.to_integer())
                        .ok()
                        .filter(|&k| k <= MAX_EXPONENT)
                        .ok_or_else(|| syntax(at, "exponent too large"))?;
                    Ok(base.pow(k))
                }
                _ => Err(syntax(at, "expected a nonnegative integer exponent")),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<RatFunc, ParseError> {
        let at = self.here();
        match self.bump() {
            Some((_, Tok::Num(v))) => Ok(RatFunc::constant(v.clone())),
            Some((_, Tok::Var)) => Ok(RatFunc::var()),
            Some((_, Tok::LParen)) => {
                let inner = self.expr()?;
                match self.bump() {
                    Some((_, Tok::RParen)) => Ok(inner),
                    Some((at, _)) => Err(syntax(at, "expected `)`")),
                    None => Err(syntax(self.end, "unclosed `(`")),
                }
            }
            Some((at, t)) => Err(syntax(at, format!("unexpected token {t:?}"))),
            None => Err(syntax(at, "unexpected end of input")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;

    fn num_den(text: &str) -> (Vec<Scalar>, Vec<Scalar>) {
        let tf = parse_tf(text).unwrap();
        (tf.num().coeffs().to_vec(), tf.den().coeffs().to_vec())
    }

    #[test]
    fn implicit_multiplication_and_powers() {
        let (n, d) = num_den("(1+s)(2+s)/(1+s^2)");
        assert_eq!(n, vec![int(2), int(3), int(1)]);
        assert_eq!(d, vec![int(1), int(0), int(1)]);
    }

    #[test]
    fn fraction_coefficients_bind_like_coefficients() {
        let (n, _) = num_den("3/4s^2+1");
        assert_eq!(n, vec![int(1), int(0), ratio(3, 4)]);
    }

    #[test]
    fn decimals_become_exact_rationals() {
        let (n, _) = num_den("0.5s+1");
        assert_eq!(n, vec![int(1), ratio(1, 2)]);
    }

    #[test]
    fn caret_binds_tighter_than_division() {
        let tf = parse_tf("1/s^2").unwrap();
        assert_eq!(tf.origin_poles(), 2);
    }

    #[test]
    fn squared_group() {
        let (n, _) = num_den("(1+s)^2/(1-s)");
        assert_eq!(n, vec![int(1), int(2), int(1)]);
    }

    #[test]
    fn malformed_inputs_error_without_panicking() {
        for bad in [
            "((((", "s^", "^2", "1//2", "()", "s()", "*(1+s)", "1+", "s s s^", "1e5", "0x10",
            "∞", "/", "s/", "(1+s)/()", "s^-1", "..", "1.2.3",
        ] {
            assert!(parse_tf(bad).is_err(), "`{bad}` should not parse");
        }
    }

    #[test]
    fn error_positions() {
        match parse_tf("(1+s") {
            Err(ParseError::Syntax { position, .. }) => assert_eq!(position, 4),
            other => panic!("expected syntax error, got {other:?}"),
        }
        match parse_tf("1+*2") {
            Err(ParseError::Syntax { position, .. }) => assert_eq!(position, 2),
            other => panic!("expected syntax error, got {other:?}"),
        }
        match parse_tf("s^1.5") {
            Err(ParseError::Syntax { position, .. }) => assert_eq!(position, 2),
            other => panic!("expected syntax error, got {other:?}"),
        }
        match parse_tf("1/0") {
            Err(ParseError::ZeroDenominator { position }) => assert_eq!(position, 1),
            other => panic!("expected zero denominator, got {other:?}"),
        }
        assert!(parse_tf("").is_err());
        assert!(parse_tf("x+1").is_err());
    }
}
