//! Coefficient rings: exact rationals and finite 64-bit floats.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Arbitrary-precision rational, always in lowest terms with positive denominator.
pub type Rational = BigRational;

/// Which coefficient ring a multivector uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CoeffKind {
    Exact,
    Float,
}

impl CoeffKind {
    pub fn name(self) -> &'static str {
        match self {
            CoeffKind::Exact => "exact",
            CoeffKind::Float => "float",
        }
    }
}

/// A coefficient literal as written in text, before conversion into a ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Literal {
    /// Decimal digits with optional fraction part, e.g. `3` or `0.125`.
    Decimal(String),
    /// `numerator/denominator`, both unsigned digit strings.
    Fraction(String, String),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LiteralError {
    #[error("division by zero in `{0}`")]
    ZeroDenominator(String),
    #[error("coefficient `{0}` is not a finite float")]
    NotFinite(String),
    #[error("invalid number `{0}`")]
    Invalid(String),
}

/// Operations the product engines need from a coefficient ring.
pub trait Coefficient: Clone + Debug + PartialEq + Send + Sync + 'static {
    const KIND: CoeffKind;

    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn is_negative(&self) -> bool;
    fn add_assign_ref(&mut self, rhs: &Self);
    fn sub_assign_ref(&mut self, rhs: &Self);
    fn mul_ref(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn from_i64(v: i64) -> Self;

    /// `num / den`; `den` must be nonzero.
    fn from_ratio(num: i64, den: i64) -> Self;

    /// Converts a parsed literal (unsigned) into the ring.
    fn from_literal(lit: &Literal) -> Result<Self, LiteralError>;

    /// Renders the absolute value so that `from_literal` reproduces it exactly.
    fn render_abs(&self) -> String;

    fn abs_is_one(&self) -> bool;

    fn is_valid(&self) -> bool {
        true
    }
}

impl Coefficient for Rational {
    const KIND: CoeffKind = CoeffKind::Exact;

    fn zero() -> Self {
        Zero::zero()
    }

    fn one() -> Self {
        One::one()
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }

    fn add_assign_ref(&mut self, rhs: &Self) {
        *self += rhs;
    }

    fn sub_assign_ref(&mut self, rhs: &Self) {
        *self -= rhs;
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }

    fn neg(&self) -> Self {
        -self
    }

    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Rational::new(BigInt::from(num), BigInt::from(den))
    }

    fn from_literal(lit: &Literal) -> Result<Self, LiteralError> {
        let int = |s: &str| {
            s.parse::<BigInt>()
                .map_err(|_| LiteralError::Invalid(s.to_string()))
        };
        match lit {
            Literal::Decimal(s) => match s.split_once('.') {
                None => Ok(Rational::from_integer(int(s)?)),
                Some((whole, frac)) => {
                    let digits = format!("{whole}{frac}");
                    let scale = BigInt::from(10u32).pow(frac.len() as u32);
                    Ok(Rational::new(int(&digits)?, scale))
                }
            },
            Literal::Fraction(n, d) => {
                let d = int(d)?;
                if Zero::is_zero(&d) {
                    return Err(LiteralError::ZeroDenominator(format!("{n}/{d}")));
                }
                Ok(Rational::new(int(n)?, d))
            }
        }
    }

    fn render_abs(&self) -> String {
        let a = Signed::abs(self);
        if a.is_integer() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }

    fn abs_is_one(&self) -> bool {
        self.is_integer() && Signed::abs(self.numer()).is_one()
    }
}

impl Coefficient for f64 {
    const KIND: CoeffKind = CoeffKind::Float;

    fn zero() -> Self {
        0.0
    }

    fn one() -> Self {
        1.0
    }

    fn is_zero(&self) -> bool {
        *self == 0.0
    }

    fn is_negative(&self) -> bool {
        *self < 0.0
    }

    fn add_assign_ref(&mut self, rhs: &Self) {
        *self += rhs;
    }

    fn sub_assign_ref(&mut self, rhs: &Self) {
        *self -= rhs;
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }

    fn neg(&self) -> Self {
        -self
    }

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn from_literal(lit: &Literal) -> Result<Self, LiteralError> {
        let value = match lit {
            Literal::Decimal(s) => s
                .parse::<f64>()
                .map_err(|_| LiteralError::Invalid(s.clone()))?,
            Literal::Fraction(n, d) => {
                let num = n
                    .parse::<f64>()
                    .map_err(|_| LiteralError::Invalid(n.clone()))?;
                let den = d
                    .parse::<f64>()
                    .map_err(|_| LiteralError::Invalid(d.clone()))?;
                if den == 0.0 {
                    return Err(LiteralError::ZeroDenominator(format!("{n}/{d}")));
                }
                num / den
            }
        };
        if !value.is_finite() {
            let text = match lit {
                Literal::Decimal(s) => s.clone(),
                Literal::Fraction(n, d) => format!("{n}/{d}"),
            };
            return Err(LiteralError::NotFinite(text));
        }
        Ok(value)
    }

    /// `Display` for `f64` prints the shortest decimal that round-trips, never
    /// in exponent form.
    fn render_abs(&self) -> String {
        format!("{}", self.abs())
    }

    fn abs_is_one(&self) -> bool {
        self.abs() == 1.0
    }

    fn is_valid(&self) -> bool {
        self.is_finite()
    }
}
