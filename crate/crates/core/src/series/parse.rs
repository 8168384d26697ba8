//! Text syntax for exact series: `5*S - T^3 + 1`, `p^2*T^-1`, `(1 - p*T)^3`.
//!
//! `p`, `w` and `pi` denote the pseudouniformizer. Exponents are integers,
//! possibly negative (`T^-1` or `T^(-1)`). Division is only by constants.

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use super::{Series, SeriesError};
use crate::basefield::prime_power;
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("empty expression")]
    Empty,
    #[error("unexpected character `{0}` at offset {1}")]
    UnexpectedChar(char, usize),
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("unexpected token `{0}` at offset {1}")]
    UnexpectedToken(String, usize),
    #[error("malformed exponent at offset {0}")]
    BadExponent(usize),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("division by a non-constant or zero expression")]
    BadDivisor,
    #[error(transparent)]
    Series(#[from] SeriesError),
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Sym(char),
}

fn is_pi(name: &str) -> bool {
    matches!(name, "p" | "w" | "pi")
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let mut j = i;
            while j < chars.len() && chars[j].1.is_ascii_digit() {
                j += 1;
            }
            let text: String = chars[i..j].iter().map(|(_, c)| c).collect();
            out.push((Tok::Num(text.parse().expect("digits")), pos));
            i = j;
        } else if c.is_alphabetic() || c == '_' {
            let mut j = i;
            while j < chars.len() && (chars[j].1.is_alphanumeric() || chars[j].1 == '_') {
                j += 1;
            }
            out.push((Tok::Ident(chars[i..j].iter().map(|(_, c)| c).collect()), pos));
            i = j;
        } else if "+-*/^()".contains(c) {
            out.push((Tok::Sym(c), pos));
            i += 1;
        } else {
            return Err(ParseError::UnexpectedChar(c, pos));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    at: usize,
    prime: u64,
    vars: &'a [String],
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.at).map_or(usize::MAX, |(_, p)| *p)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn unexpected(&self) -> ParseError {
        match self.toks.get(self.at) {
            None => ParseError::UnexpectedEnd,
            Some((t, p)) => {
                let text = match t {
                    Tok::Num(n) => n.to_string(),
                    Tok::Ident(s) => s.clone(),
                    Tok::Sym(c) => c.to_string(),
                };
                ParseError::UnexpectedToken(text, *p)
            }
        }
    }

    fn expr(&mut self) -> Result<Series, ParseError> {
        let mut acc = if self.eat('-') {
            self.term()?.neg()
        } else {
            self.eat('+');
            self.term()?
        };
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?)?;
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Series, ParseError> {
        let mut acc = self.power()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.power()?)?;
            } else if self.eat('/') {
                let d = self.power()?;
                if !d.is_constant() || d.constant_term().is_zero() {
                    return Err(ParseError::BadDivisor);
                }
                acc = acc.scale(&d.constant_term().recip());
            } else {
                return Ok(acc);
            }
        }
    }

    fn power(&mut self) -> Result<Series, ParseError> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let at = self.offset();
        let paren = self.eat('(');
        let neg = self.eat('-');
        let Some(Tok::Num(n)) = self.peek().cloned() else {
            return Err(ParseError::BadExponent(at));
        };
        self.at += 1;
        if paren && !self.eat(')') {
            return Err(ParseError::BadExponent(at));
        }
        let n: i64 = n.try_into().map_err(|_| ParseError::BadExponent(at))?;
        let n = if neg { -n } else { n };
        Ok(base.pow(n)?)
    }

    fn atom(&mut self) -> Result<Series, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.at += 1;
                Ok(Series::constant(self.vars, Rational::from_integer(n)))
            }
            Some(Tok::Ident(name)) if is_pi(&name) => {
                self.at += 1;
                Ok(Series::constant(self.vars, prime_power(self.prime, 1)))
            }
            Some(Tok::Ident(name)) => {
                self.at += 1;
                Series::variable(self.vars, &name).map_err(|_| ParseError::UnknownVariable(name))
            }
            Some(Tok::Sym('(')) => {
                self.at += 1;
                let inner = self.expr()?;
                if !self.eat(')') {
                    return Err(self.unexpected());
                }
                Ok(inner)
            }
            _ => Err(self.unexpected()),
        }
    }
}

impl Series {
    /// Parses an exact series over `vars`.
    pub fn parse<S: AsRef<str>>(prime: u64, src: &str, vars: &[S]) -> Result<Series, ParseError> {
        let vars: Vec<String> = vars.iter().map(|s| s.as_ref().to_string()).collect();
        let toks = lex(src)?;
        if toks.is_empty() {
            return Err(ParseError::Empty);
        }
        let mut p = Parser {
            toks,
            at: 0,
            prime,
            vars: &vars,
        };
        let out = p.expr()?;
        if p.at != p.toks.len() {
            return Err(p.unexpected());
        }
        Ok(out)
    }

    /// Parses with the variables found in `src`, sorted by name.
    pub fn parse_auto(prime: u64, src: &str) -> Result<Series, ParseError> {
        Self::parse(prime, src, &identifiers(src)?)
    }
}

/// Variable names appearing in `src`, excluding the uniformizer.
pub fn identifiers(src: &str) -> Result<Vec<String>, ParseError> {
    let mut vars: Vec<String> = lex(src)?
        .into_iter()
        .filter_map(|(t, _)| match t {
            Tok::Ident(s) if !is_pi(&s) => Some(s),
            _ => None,
        })
        .collect();
    vars.sort();
    vars.dedup();
    Ok(vars)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    #[test]
    fn parses_and_prints() {
        let s = Series::parse_auto(5, "1 + 5*S - T^3").unwrap();
        assert_eq!(s.vars(), &["S".to_string(), "T".to_string()]);
        assert_eq!(s.to_string(), "5*S - T^3 + 1");
        let t = Series::parse(5, "p^2*T^-1 + T^(2)/3", &["T"]).unwrap();
        assert_eq!(t.coefficient(&[-1]), q(25));
        assert_eq!(t.coefficient(&[2]), Rational::new(1.into(), 3.into()));
        let u = Series::parse(5, "(1 - p*T)^2", &["T"]).unwrap();
        assert_eq!(u, Series::univariate("T", &[q(1), q(-10), q(25)]));
        assert_eq!(
            Series::parse(3, "w^-1", &["T"]).unwrap().constant_term(),
            Rational::new(1.into(), 3.into())
        );
    }

    #[test]
    fn rejects_malformed_input() {
        assert_eq!(Series::parse(5, "", &["T"]), Err(ParseError::Empty));
        assert!(matches!(
            Series::parse(5, "T^", &["T"]),
            Err(ParseError::BadExponent(_))
        ));
        assert!(matches!(
            Series::parse(5, "T^x", &["T"]),
            Err(ParseError::BadExponent(_))
        ));
        assert!(matches!(
            Series::parse(5, "T^1.5", &["T"]),
            Err(ParseError::UnexpectedChar('.', _))
        ));
        assert_eq!(
            Series::parse(5, "X + 1", &["T"]),
            Err(ParseError::UnknownVariable("X".into()))
        );
        assert_eq!(Series::parse(5, "1/T", &["T"]), Err(ParseError::BadDivisor));
        assert!(matches!(
            Series::parse(5, "(T + 1", &["T"]),
            Err(ParseError::UnexpectedEnd)
        ));
        assert!(matches!(
            Series::parse(5, "(T + 1)^-1", &["T"]),
            Err(ParseError::Series(_))
        ));
    }

    #[test]
    fn round_trips_through_display() {
        for src in ["5*S - T^3 + 1", "1/2*T^-1", "-T^2 + 25", "0"] {
            let s = Series::parse_auto(5, src).unwrap();
            let again = Series::parse(5, &s.to_string(), s.vars()).unwrap();
            assert_eq!(s, again);
        }
    }
}
