//! Text input for Clifford polynomials.
//!
//! ```text
//! expr  := [sign] term (("+" | "-") term)*
//! term  := coeff | monom | coeff "*" monom
//! coeff := integer | integer "/" integer | decimal
//! monom := "Id" | "e" k ("we" k)*
//! ```
//! Whitespace may separate tokens but not split a monomial or a number.

use thiserror::Error;

use crate::blades::{name_to_blade, Blade, NameError, Signature};
use crate::multivector::{AlgebraError, Multivector, Term};
use crate::scalar::{Coefficient, Literal, LiteralError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("at position {pos}: {source}")]
    Monomial {
        pos: usize,
        #[source]
        source: NameError,
    },
    #[error("at position {pos}: {source}")]
    Coefficient {
        pos: usize,
        #[source]
        source: LiteralError,
    },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

struct Parser<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
    dim: u32,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str, dim: u32) -> Self {
        Self {
            src,
            bytes: src.as_bytes(),
            pos: 0,
            dim,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn syntax(&self, msg: impl Into<String>) -> ParseError {
        ParseError::Syntax {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn digits(&mut self) -> &'a str {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        &self.src[start..self.pos]
    }

    fn literal(&mut self) -> Result<Literal, ParseError> {
        let start = self.pos;
        let whole = self.digits();
        if self.peek() == Some(b'.') {
            self.pos += 1;
            let frac = self.digits();
            if frac.is_empty() {
                return Err(self.syntax("expected digits after decimal point"));
            }
            return Ok(Literal::Decimal(self.src[start..self.pos].to_string()));
        }
        let save = self.pos;
        self.skip_ws();
        if self.peek() == Some(b'/') {
            self.pos += 1;
            self.skip_ws();
            let den = self.digits();
            if den.is_empty() {
                return Err(self.syntax("expected integer denominator"));
            }
            return Ok(Literal::Fraction(whole.to_string(), den.to_string()));
        }
        self.pos = save;
        Ok(Literal::Decimal(whole.to_string()))
    }

    fn monomial(&mut self) -> Result<Blade, ParseError> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_alphanumeric()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.syntax("expected a monomial"));
        }
        name_to_blade(&self.src[start..self.pos], self.dim)
            .map_err(|source| ParseError::Monomial { pos: start, source })
    }

    fn term<C: Coefficient>(&mut self) -> Result<Term<C>, ParseError> {
        self.skip_ws();
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let at = self.pos;
                let lit = self.literal()?;
                let coeff = C::from_literal(&lit)
                    .map_err(|source| ParseError::Coefficient { pos: at, source })?;
                self.skip_ws();
                if self.peek() == Some(b'*') {
                    self.pos += 1;
                    self.skip_ws();
                    let blade = self.monomial()?;
                    Ok(Term::new(coeff, blade))
                } else {
                    Ok(Term::new(coeff, Blade::IDENTITY))
                }
            }
            Some(c) if c.is_ascii_alphabetic() => Ok(Term::new(C::one(), self.monomial()?)),
            Some(_) => Err(self.syntax("expected a coefficient or monomial")),
            None => Err(self.syntax("unexpected end of input")),
        }
    }

    fn expr<C: Coefficient>(&mut self) -> Result<Vec<Term<C>>, ParseError> {
        let mut terms = Vec::new();
        self.skip_ws();
        let mut negative = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                true
            }
            Some(b'+') => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        loop {
            let t = self.term::<C>()?;
            terms.push(if negative {
                Term::new(t.coeff.neg(), t.blade)
            } else {
                t
            });
            self.skip_ws();
            match self.peek() {
                None => return Ok(terms),
                Some(b'+') => negative = false,
                Some(b'-') => negative = true,
                Some(_) => return Err(self.syntax("expected `+`, `-` or end of input")),
            }
            self.pos += 1;
        }
    }
}

/// Parses a Clifford polynomial over the coefficient ring `C`.
///
/// Like terms are combined and zero terms dropped. Monomials must be
/// written in canonical (strictly increasing) order.
pub fn parse<C: Coefficient>(text: &str, sig: Signature) -> Result<Multivector<C>, ParseError> {
    let terms = Parser::new(text, sig.dim()).expr::<C>()?;
    Ok(Multivector::from_terms(sig, terms)?)
}

/// Parses the line format produced by [`Multivector::to_lines`]: one
/// `<coeff> <monomial>` pair per nonblank line.
pub fn parse_lines<C: Coefficient>(
    text: &str,
    sig: Signature,
) -> Result<Multivector<C>, ParseError> {
    let mut terms = Vec::new();
    let mut offset = 0;
    for line in text.split_inclusive('\n') {
        let body = line.trim();
        if !body.is_empty() {
            let mut fields = body.split_whitespace();
            let (coeff, monom) = match (fields.next(), fields.next(), fields.next()) {
                (Some(c), Some(m), None) => (c, m),
                _ => {
                    return Err(ParseError::Syntax {
                        pos: offset,
                        msg: "expected `<coeff> <monomial>`".into(),
                    })
                }
            };
            let mut p = Parser::new(coeff, sig.dim());
            let negative = p.peek() == Some(b'-');
            if negative {
                p.pos += 1;
            }
            let lit = if p.peek().is_some_and(|c| c.is_ascii_digit()) {
                p.literal()?
            } else {
                return Err(ParseError::Syntax {
                    pos: offset,
                    msg: format!("invalid coefficient `{coeff}`"),
                });
            };
            if p.pos != coeff.len() {
                return Err(ParseError::Syntax {
                    pos: offset + p.pos,
                    msg: format!("invalid coefficient `{coeff}`"),
                });
            }
            let c = C::from_literal(&lit)
                .map_err(|source| ParseError::Coefficient { pos: offset, source })?;
            let blade = name_to_blade(monom, sig.dim())
                .map_err(|source| ParseError::Monomial { pos: offset, source })?;
            terms.push(Term::new(if negative { c.neg() } else { c }, blade));
        }
        offset += line.len();
    }
    Ok(Multivector::from_terms(sig, terms)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn sig(p: u32, q: u32) -> Signature {
        Signature::new(p, q).unwrap()
    }

    fn exact(text: &str) -> Result<Multivector<Rational>, ParseError> {
        parse(text, sig(3, 0))
    }

    #[test]
    fn direct_reading() {
        let x = exact("2*e1we2 - 3*Id + e3").unwrap();
        assert_eq!(x.to_string(), "-3*Id + e3 + 2*e1we2");
        assert!(exact("e1 - e1").unwrap().is_zero());
        assert_eq!(exact("1/2*e1 + 1/2*e1").unwrap().to_string(), "e1");
        assert_eq!(exact("-e1we3").unwrap().to_string(), "-e1we3");
        assert_eq!(exact("  +5 ").unwrap().to_string(), "5*Id");
        assert_eq!(exact("0.25*e2 + 3 / 4 * e2").unwrap().to_string(), "e2");
        assert!(exact("0").unwrap().is_zero());
    }

    #[test]
    fn float_coefficients() {
        let x: Multivector<f64> = parse("0.1*e1 + 1/4*e2 - 2", sig(3, 0)).unwrap();
        assert_eq!(x.to_string(), "-2*Id + 0.1*e1 + 0.25*e2");
    }

    #[test]
    fn errors_carry_positions() {
        assert_eq!(
            exact("e1 + * e2"),
            Err(ParseError::Syntax {
                pos: 5,
                msg: "expected a coefficient or monomial".into()
            })
        );
        assert!(matches!(
            exact("e1 + e4"),
            Err(ParseError::Monomial {
                pos: 5,
                source: NameError::OutOfRange { index: 4, dim: 3 }
            })
        ));
        assert!(matches!(
            exact("e2we1"),
            Err(ParseError::Monomial {
                source: NameError::NonCanonical(_),
                ..
            })
        ));
        assert!(matches!(
            exact("3/0*e1"),
            Err(ParseError::Coefficient {
                pos: 0,
                source: LiteralError::ZeroDenominator(_)
            })
        ));
        for bad in ["", "e1 +", "e1 e2", "2**e1", "1.*e1", "e1*2", "2*", "--e1", "e 1", "e1 we2"] {
            assert!(exact(bad).is_err(), "{bad:?} accepted");
        }
    }

    #[test]
    fn line_format() {
        let x = exact("2*e1we2 - 3*Id + 1/3*e3").unwrap();
        assert_eq!(x.to_lines(), "-3 Id\n1/3 e3\n2 e1we2\n");
        assert_eq!(parse_lines::<Rational>(&x.to_lines(), sig(3, 0)).unwrap(), x);
        assert!(parse_lines::<Rational>("", sig(3, 0)).unwrap().is_zero());
        assert!(parse_lines::<Rational>("1 e1 e2\n", sig(3, 0)).is_err());
        assert!(parse_lines::<Rational>("x e1\n", sig(3, 0)).is_err());
        assert!(parse_lines::<Rational>("1 e9\n", sig(3, 0)).is_err());
    }
}
