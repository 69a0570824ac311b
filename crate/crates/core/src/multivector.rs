//! Sparse Clifford polynomials in canonical form.

use std::collections::HashMap;
use std::fmt;

use num_traits::ToPrimitive;
use thiserror::Error;

use crate::blades::{blade_to_name, Blade, Signature};
use crate::scalar::{Coefficient, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("signature mismatch: {left} vs {right}")]
    SignatureMismatch { left: Signature, right: Signature },
    #[error("blade {blade} is not a basis monomial of {sig}")]
    BladeOutOfRange { blade: String, sig: Signature },
    #[error("coefficient of {0} is not finite")]
    NotFinite(String),
}

/// One `(coefficient, monomial)` pair of a polynomial.
#[derive(Debug, Clone, PartialEq)]
pub struct Term<C> {
    pub coeff: C,
    pub blade: Blade,
}

impl<C> Term<C> {
    pub fn new(coeff: C, blade: Blade) -> Self {
        Self { coeff, blade }
    }
}

/// A Clifford polynomial: a linear combination of basis blades.
///
/// Terms are kept sorted by ascending grade, then ascending bitmask, and no
/// zero coefficient is ever stored, so structural equality is value equality.
#[derive(Debug, Clone, PartialEq)]
pub struct Multivector<C> {
    sig: Signature,
    terms: Vec<Term<C>>,
}

impl<C: Coefficient> Multivector<C> {
    pub fn zero(sig: Signature) -> Self {
        Self {
            sig,
            terms: Vec::new(),
        }
    }

    /// The unit `Id`.
    pub fn one(sig: Signature) -> Self {
        Self::monomial(sig, C::one(), Blade::IDENTITY).expect("Id is always valid")
    }

    pub fn monomial(sig: Signature, coeff: C, blade: Blade) -> Result<Self, AlgebraError> {
        Self::from_terms(sig, [Term::new(coeff, blade)])
    }

    /// Builds a canonical multivector, combining like terms in input order
    /// and dropping zeros.
    pub fn from_terms<I>(sig: Signature, terms: I) -> Result<Self, AlgebraError>
    where
        I: IntoIterator<Item = Term<C>>,
    {
        let mut slots: HashMap<Blade, usize> = HashMap::new();
        let mut acc: Vec<Term<C>> = Vec::new();
        for t in terms {
            if !sig.contains(t.blade) {
                return Err(AlgebraError::BladeOutOfRange {
                    blade: format!("{:#b}", t.blade.0),
                    sig,
                });
            }
            if !t.coeff.is_valid() {
                return Err(AlgebraError::NotFinite(blade_to_name(t.blade)));
            }
            match slots.get(&t.blade) {
                Some(&k) => acc[k].coeff.add_assign_ref(&t.coeff),
                None => {
                    slots.insert(t.blade, acc.len());
                    acc.push(t);
                }
            }
        }
        Ok(Self::from_unsorted(sig, acc))
    }

    /// Canonicalizes terms whose blades are already distinct and valid.
    pub(crate) fn from_unsorted(sig: Signature, mut terms: Vec<Term<C>>) -> Self {
        terms.retain(|t| !t.coeff.is_zero());
        terms.sort_by_key(|t| t.blade.canonical_key());
        Self { sig, terms }
    }

    pub fn signature(&self) -> Signature {
        self.sig
    }

    pub fn terms(&self) -> &[Term<C>] {
        &self.terms
    }

    /// The polynomial as a list of `(coeff, monomial)` pairs in canonical order.
    pub fn term_list(&self) -> Vec<Term<C>> {
        self.terms.clone()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, blade: Blade) -> Option<&C> {
        self.terms
            .binary_search_by_key(&blade.canonical_key(), |t| t.blade.canonical_key())
            .ok()
            .map(|k| &self.terms[k].coeff)
    }

    pub fn check_same_signature(&self, other: &Self) -> Result<(), AlgebraError> {
        if self.sig != other.sig {
            return Err(AlgebraError::SignatureMismatch {
                left: self.sig,
                right: other.sig,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_same_signature(other)?;
        let mut out = Vec::with_capacity(self.len() + other.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            let (a, b) = (&self.terms[i], &other.terms[j]);
            match a.blade.canonical_key().cmp(&b.blade.canonical_key()) {
                std::cmp::Ordering::Less => {
                    out.push(a.clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b.clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let mut c = a.coeff.clone();
                    c.add_assign_ref(&b.coeff);
                    if !c.is_zero() {
                        out.push(Term::new(c, a.blade));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&other.terms[j..]);
        Ok(Self {
            sig: self.sig,
            terms: out,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &C) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| Term::new(t.coeff.mul_ref(c), t.blade))
            .filter(|t| !t.coeff.is_zero())
            .collect();
        Self {
            sig: self.sig,
            terms,
        }
    }

    pub fn neg(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| Term::new(t.coeff.neg(), t.blade))
            .collect();
        Self {
            sig: self.sig,
            terms,
        }
    }

    /// Converts coefficients through `f`, re-canonicalizing.
    pub fn map_coeffs<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> Multivector<D> {
        Multivector::from_unsorted(
            self.sig,
            self.terms
                .iter()
                .map(|t| Term::new(f(&t.coeff), t.blade))
                .collect(),
        )
    }

    /// Renders in the line-oriented exchange format: `<coeff> <monomial>` per term.
    pub fn to_lines(&self) -> String {
        let mut out = String::new();
        for t in &self.terms {
            if t.coeff.is_negative() {
                out.push('-');
            }
            out.push_str(&t.coeff.render_abs());
            out.push(' ');
            out.push_str(&blade_to_name(t.blade));
            out.push('\n');
        }
        out
    }
}

impl Multivector<Rational> {
    pub fn to_float(&self) -> Multivector<f64> {
        self.map_coeffs(|c| c.to_f64().unwrap_or(f64::NAN))
    }
}

impl<C: Coefficient> fmt::Display for Multivector<C> {
    /// Canonical text: `-3*Id + e3 + 2*e1we2`, unit coefficients elided,
    /// zero renders as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, t) in self.terms.iter().enumerate() {
            let negative = t.coeff.is_negative();
            match (k, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if !t.coeff.abs_is_one() {
                write!(f, "{}*", t.coeff.render_abs())?;
            }
            f.write_str(&blade_to_name(t.blade))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig3() -> Signature {
        Signature::new(3, 0).unwrap()
    }

    fn r(n: i64) -> Rational {
        Rational::from_i64(n)
    }

    fn mv(terms: &[(i64, u32)]) -> Multivector<Rational> {
        Multivector::from_terms(sig3(), terms.iter().map(|&(c, b)| Term::new(r(c), Blade(b))))
            .unwrap()
    }

    #[test]
    fn canonical_order_and_rendering() {
        let x = mv(&[(2, 0b011), (-3, 0), (1, 0b100)]);
        let blades: Vec<u32> = x.terms().iter().map(|t| t.blade.0).collect();
        assert_eq!(blades, [0, 0b100, 0b011]);
        assert_eq!(x.to_string(), "-3*Id + e3 + 2*e1we2");
        assert_eq!(Multivector::<Rational>::zero(sig3()).to_string(), "0");
        assert_eq!(mv(&[(1, 1)]).to_string(), "e1");
        assert_eq!(mv(&[(-1, 0)]).to_string(), "-Id");
        assert_eq!(mv(&[(1, 1), (-1, 2)]).to_string(), "e1 - e2");
    }

    #[test]
    fn like_terms_cancel() {
        assert!(mv(&[(1, 1), (-1, 1)]).is_zero());
        assert_eq!(mv(&[(1, 1), (2, 1)]), mv(&[(3, 1)]));
    }

    #[test]
    fn term_list_examples() {
        assert!(Multivector::<Rational>::zero(sig3()).term_list().is_empty());
        assert_eq!(mv(&[(1, 1)]).term_list(), vec![Term::new(r(1), Blade(1))]);
        assert_eq!(
            mv(&[(1, 2), (2, 1)]).term_list(),
            vec![Term::new(r(2), Blade(1)), Term::new(r(1), Blade(2))]
        );
    }

    #[test]
    fn add_and_scale() {
        let x = mv(&[(2, 0b011), (-3, 0), (1, 0b100)]);
        let zero = Multivector::zero(sig3());
        assert_eq!(x.add(&zero).unwrap(), x);
        assert!(x.add(&x.scale(&r(-1))).unwrap().is_zero());
        assert_eq!(mv(&[(3, 1)]).scale(&r(2)), mv(&[(6, 1)]));
        assert!(x.scale(&r(0)).is_zero());
        assert_eq!(x.sub(&x).unwrap(), zero);
    }

    #[test]
    fn signature_mismatch() {
        let x = mv(&[(1, 1)]);
        let y = Multivector::<Rational>::one(Signature::new(2, 1).unwrap());
        assert!(matches!(
            x.add(&y),
            Err(AlgebraError::SignatureMismatch { .. })
        ));
    }

    #[test]
    fn rejects_invalid_terms() {
        assert!(matches!(
            Multivector::from_terms(sig3(), [Term::new(r(1), Blade(0b1000))]),
            Err(AlgebraError::BladeOutOfRange { .. })
        ));
        assert!(matches!(
            Multivector::from_terms(sig3(), [Term::new(f64::NAN, Blade(1))]),
            Err(AlgebraError::NotFinite(_))
        ));
    }

    #[test]
    fn coefficient_lookup_and_lines() {
        let x = mv(&[(2, 0b011), (-3, 0)]);
        assert_eq!(x.coeff(Blade(0b011)), Some(&r(2)));
        assert_eq!(x.coeff(Blade(0b111)), None);
        assert_eq!(x.to_lines(), "-3 Id\n2 e1we2\n");
    }
}
