//! A small expression parser for elements of the fraction field, used by the
//! CLI and by tests to write values like `(eps^2-1)/eps` readably.

use num_bigint::BigInt;

use super::ratfunc::RationalFunction;
use crate::error::{Error, Result};
use crate::scalar::Rational;

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Int(BigInt),
    Eps,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(input: &str) -> Result<Vec<Token>> {
    let mut tokens = Vec::new();
    let mut chars = input.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            ' ' | '\t' | '\n' | '\r' => {
                chars.next();
            }
            '+' => {
                chars.next();
                tokens.push(Token::Plus);
            }
            '-' => {
                chars.next();
                tokens.push(Token::Minus);
            }
            '*' => {
                chars.next();
                tokens.push(Token::Star);
            }
            '/' => {
                chars.next();
                tokens.push(Token::Slash);
            }
            '^' => {
                chars.next();
                tokens.push(Token::Caret);
            }
            '(' => {
                chars.next();
                tokens.push(Token::LParen);
            }
            ')' => {
                chars.next();
                tokens.push(Token::RParen);
            }
            '0'..='9' => {
                let mut digits = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_digit() {
                        digits.push(d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                let n = digits
                    .parse::<BigInt>()
                    .map_err(|_| Error::Parse(format!("bad integer `{digits}`")))?;
                tokens.push(Token::Int(n));
            }
            'e' | 'ε' => {
                if c == 'ε' {
                    chars.next();
                } else {
                    for expected in ['e', 'p', 's'] {
                        if chars.next() != Some(expected) {
                            return Err(Error::Parse("expected `eps`".into()));
                        }
                    }
                }
                tokens.push(Token::Eps);
            }
            other => {
                return Err(Error::Parse(format!("unexpected character `{other}`")));
            }
        }
    }
    Ok(tokens)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, t: &Token) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    // expr := term (('+'|'-') term)*
    fn expr(&mut self) -> Result<RationalFunction> {
        let mut acc = self.term()?;
        loop {
            if self.eat(&Token::Plus) {
                acc = &acc + &self.term()?;
            } else if self.eat(&Token::Minus) {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    // term := unary (('*'|'/') unary)*
    fn term(&mut self) -> Result<RationalFunction> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(&Token::Star) {
                acc = &acc * &self.unary()?;
            } else if self.eat(&Token::Slash) {
                acc = acc.div(&self.unary()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    // unary := '-' unary | power
    fn unary(&mut self) -> Result<RationalFunction> {
        if self.eat(&Token::Minus) {
            Ok(-self.unary()?)
        } else {
            self.power()
        }
    }

    // power := atom ('^' ('-')? uint)?
    fn power(&mut self) -> Result<RationalFunction> {
        let base = self.atom()?;
        if !self.eat(&Token::Caret) {
            return Ok(base);
        }
        let negative = self.eat(&Token::Minus);
        match self.next() {
            Some(Token::Int(n)) => {
                let k: i64 = n
                    .try_into()
                    .map_err(|_| Error::Parse("exponent too large".into()))?;
                base.pow(if negative { -k } else { k })
            }
            _ => Err(Error::Parse("expected integer exponent after `^`".into())),
        }
    }

    // atom := uint | 'eps' | '(' expr ')'
    fn atom(&mut self) -> Result<RationalFunction> {
        match self.next() {
            Some(Token::Int(n)) => Ok(RationalFunction::constant(
                Rational::new(n, BigInt::from(1)).expect("unit denominator"),
            )),
            Some(Token::Eps) => Ok(RationalFunction::eps()),
            Some(Token::LParen) => {
                let inner = self.expr()?;
                if self.eat(&Token::RParen) {
                    Ok(inner)
                } else {
                    Err(Error::Parse("missing `)`".into()))
                }
            }
            t => Err(Error::Parse(format!("unexpected token {t:?}"))),
        }
    }
}

/// Parses an expression in `eps` (integers, `+ - * / ^`, parentheses) into a
/// canonical rational function.
pub fn parse_rational_function(input: &str) -> Result<RationalFunction> {
    let mut parser = Parser {
        tokens: tokenize(input)?,
        pos: 0,
    };
    let value = parser.expr()?;
    if parser.pos != parser.tokens.len() {
        return Err(Error::Parse("trailing input after expression".into()));
    }
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_divergent_difference_forms() {
        let f = parse_rational_function("(eps^2-1)/eps").unwrap();
        assert_eq!(f.valuation().finite(), Some(-1));
        let g = parse_rational_function("eps - 1/eps").unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn precedence_and_unary_minus() {
        let f = parse_rational_function("1 - 2*eps^2").unwrap();
        assert_eq!(f.to_string(), "1 - 2*eps^2");
        let g = parse_rational_function("-eps * -eps").unwrap();
        assert_eq!(g, parse_rational_function("eps^2").unwrap());
        let h = parse_rational_function("eps^-2").unwrap();
        assert_eq!(h, parse_rational_function("1/eps^2").unwrap());
    }

    #[test]
    fn display_round_trips_through_parser() {
        for s in [
            "(eps^2-1)/eps",
            "1/2 + eps",
            "(1+eps)/(1-eps)",
            "0",
            "3/4*eps^2",
        ] {
            let f = parse_rational_function(s).unwrap();
            let again = parse_rational_function(&f.to_string()).unwrap();
            assert_eq!(f, again, "round trip failed for `{s}`");
        }
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_rational_function("eps +").is_err());
        assert!(parse_rational_function("(eps").is_err());
        assert!(parse_rational_function("x + 1").is_err());
        assert!(parse_rational_function("1/0").is_err());
    }
}
