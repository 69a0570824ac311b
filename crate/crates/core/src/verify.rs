//! Exhaustive sign verification and randomized engine cross-checks.

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::blades::{blade_product, oracle_blade_product, Blade, Sign, Signature};
use crate::engines::{multiply, EngineConfig, EngineKind};
use crate::multivector::Multivector;
use crate::random::random_multivector;
use crate::scalar::Rational;

/// Exhaustive checks are limited to this dimension.
pub const MAX_EXHAUSTIVE_DIM: u32 = 12;

/// Terms per random factor in the engine cross-checks.
pub const CROSS_CHECK_MAX_TERMS: usize = 12;

pub type BladeProductFn = fn(Blade, Blade, Signature) -> (Sign, Blade);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BladeMismatch {
    pub a: Blade,
    pub b: Blade,
    pub sig: Signature,
    pub expected: (Sign, Blade),
    pub got: (Sign, Blade),
}

impl fmt::Display for BladeMismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} * {} in {}: expected {} {}, got {} {}",
            self.a, self.b, self.sig, self.expected.0, self.expected.1, self.got.0, self.got.1
        )
    }
}

/// `sum over p + q <= max_dim of 4^(p+q)`.
pub fn exhaustive_pair_count(max_dim: u32) -> u64 {
    (0..=max_dim).map(|n| u64::from(n + 1) << (2 * n)).sum()
}

/// Compares `product` with the oracle on every blade pair of one signature.
pub fn check_signature(sig: Signature, product: BladeProductFn) -> Result<u64, BladeMismatch> {
    let len = sig.basis_len() as u32;
    for a in 0..len {
        for b in 0..len {
            let (a, b) = (Blade(a), Blade(b));
            let expected = oracle_blade_product(a, b, sig);
            let got = product(a, b, sig);
            if got != expected {
                return Err(BladeMismatch {
                    a,
                    b,
                    sig,
                    expected,
                    got,
                });
            }
        }
    }
    Ok(u64::from(len) * u64::from(len))
}

/// Exhaustive check over every signature with `p + q <= max_dim`.
pub fn check_all_signatures(max_dim: u32, product: BladeProductFn) -> Result<u64, BladeMismatch> {
    Signature::all_up_to(max_dim)
        .into_iter()
        .map(|sig| check_signature(sig, product))
        .sum()
}

#[derive(Debug, Clone, PartialEq)]
pub struct EngineMismatch {
    pub engine: EngineKind,
    pub sig: Signature,
    pub x: Multivector<Rational>,
    pub y: Multivector<Rational>,
    pub expected: Multivector<Rational>,
    pub got: Multivector<Rational>,
}

impl fmt::Display for EngineMismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} in {}: ({}) * ({}) expected {}, got {}",
            self.engine, self.sig, self.x, self.y, self.expected, self.got
        )
    }
}

/// Multiplies `samples` random rational pairs per signature with every
/// engine and compares against the oracle engine. Returns the number of
/// products compared.
pub fn cross_check_engines(
    max_dim: u32,
    samples: usize,
    seed: u64,
    cfg: &EngineConfig,
) -> Result<u64, Box<EngineMismatch>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut compared = 0;
    for sig in Signature::all_up_to(max_dim) {
        for _ in 0..samples {
            let x: Multivector<Rational> = random_multivector(sig, &mut rng, CROSS_CHECK_MAX_TERMS);
            let y: Multivector<Rational> = random_multivector(sig, &mut rng, CROSS_CHECK_MAX_TERMS);
            let expected = multiply(&x, &y, &EngineConfig::new(EngineKind::Oracle))
                .expect("same signature");
            for engine in EngineKind::ALL {
                let mut c = *cfg;
                c.engine = engine;
                let got = multiply(&x, &y, &c).expect("same signature");
                compared += 1;
                if got != expected {
                    return Err(Box::new(EngineMismatch {
                        engine,
                        sig,
                        x,
                        y,
                        expected,
                        got,
                    }));
                }
            }
        }
    }
    Ok(compared)
}

/// [`blade_product`] with the sign of `e1 * e1` flipped; used to check that
/// verification notices a wrong sign.
pub fn faulty_blade_product(a: Blade, b: Blade, sig: Signature) -> (Sign, Blade) {
    let (sign, blade) = blade_product(a, b, sig);
    if a == Blade(1) && b == Blade(1) {
        (-sign, blade)
    } else {
        (sign, blade)
    }
}
