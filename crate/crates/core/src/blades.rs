//! Binary coding of basis monomials and the blade product of `Cl(p,q)`.
//!
//! A basis monomial `e_{i1} w e_{i2} w ... ` with strictly increasing indices
//! is stored as a bitmask: generator `e_i` occupies bit `i - 1`. The product
//! of two monomials is their XOR, and its sign is the Walsh function of the
//! left factor evaluated at the inverse Gray code of the right factor, times
//! a twist factor carrying the repeated-generator grading and the metric.

use std::fmt;
use std::ops::{Mul, Neg};
use std::str::FromStr;

use thiserror::Error;

/// Largest supported `p + q`; every blade fits one `u32`.
pub const MAX_DIM: u32 = 32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SignatureError {
    #[error("dimension p + q = {0} exceeds the maximum of {MAX_DIM}")]
    TooLarge(u32),
    #[error("malformed signature `{0}`, expected `p,q`")]
    Malformed(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NameError {
    #[error("empty monomial name")]
    Empty,
    #[error("malformed monomial `{0}`")]
    Malformed(String),
    #[error("generator index {index} out of range 1..={dim}")]
    OutOfRange { index: u32, dim: u32 },
    #[error("non-canonical order in `{0}`: indices must be strictly increasing")]
    NonCanonical(String),
}

/// Quadratic form signature: generators `1..=p` square to `+1`,
/// generators `p+1..=p+q` square to `-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Signature {
    p: u32,
    q: u32,
    qmask: u32,
}

impl Signature {
    pub fn new(p: u32, q: u32) -> Result<Self, SignatureError> {
        let n = p.checked_add(q).ok_or(SignatureError::TooLarge(u32::MAX))?;
        if n > MAX_DIM {
            return Err(SignatureError::TooLarge(n));
        }
        Ok(Self {
            p,
            q,
            qmask: low_bits(n) & !low_bits(p),
        })
    }

    /// Euclidean signature `Cl(n,0)`.
    pub fn euclidean(n: u32) -> Result<Self, SignatureError> {
        Self::new(n, 0)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn dim(&self) -> u32 {
        self.p + self.q
    }

    /// Bits of the generators squaring to `-1`.
    pub fn qmask(&self) -> u32 {
        self.qmask
    }

    /// Number of basis monomials, `2^n`.
    pub fn basis_len(&self) -> u64 {
        1u64 << self.dim()
    }

    pub fn contains(&self, blade: Blade) -> bool {
        blade.0 & !low_bits(self.dim()) == 0
    }

    /// All basis blades in canonical order (grade, then bitmask).
    pub fn basis(&self) -> Vec<Blade> {
        let mut out: Vec<Blade> = (0..self.basis_len()).map(|b| Blade(b as u32)).collect();
        out.sort_by_key(|b| b.canonical_key());
        out
    }

    /// Every signature with `p + q <= max_dim`, ordered by dimension then `p`.
    pub fn all_up_to(max_dim: u32) -> Vec<Signature> {
        let mut out = Vec::new();
        for n in 0..=max_dim.min(MAX_DIM) {
            for p in (0..=n).rev() {
                out.push(Signature::new(p, n - p).expect("n <= MAX_DIM"));
            }
        }
        out
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cl({},{})", self.p, self.q)
    }
}

impl FromStr for Signature {
    type Err = SignatureError;

    /// Parses `p,q`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let malformed = || SignatureError::Malformed(s.to_string());
        let (p, q) = s.split_once(',').ok_or_else(malformed)?;
        let p = p.trim().parse::<u32>().map_err(|_| malformed())?;
        let q = q.trim().parse::<u32>().map_err(|_| malformed())?;
        Signature::new(p, q)
    }
}

fn low_bits(n: u32) -> u32 {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

/// A basis monomial; bit `i - 1` set means `e_i` is a factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Blade(pub u32);

impl Blade {
    pub const IDENTITY: Blade = Blade(0);

    /// The generator `e_i`, `i >= 1`.
    pub fn generator(i: u32) -> Blade {
        assert!((1..=MAX_DIM).contains(&i), "generator index {i} out of range");
        Blade(1 << (i - 1))
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn grade(self) -> u32 {
        self.0.count_ones()
    }

    /// Sort key for canonical term order: ascending grade, then bitmask.
    pub fn canonical_key(self) -> (u32, u32) {
        (self.grade(), self.0)
    }

    /// Generator indices (1-based) in ascending order.
    pub fn generators(self) -> impl Iterator<Item = u32> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                None
            } else {
                let i = rest.trailing_zeros();
                rest &= rest - 1;
                Some(i + 1)
            }
        })
    }
}

impl fmt::Display for Blade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&blade_to_name(*self))
    }
}

/// Sign of a blade product.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    /// `(-1)^k`.
    pub fn from_parity(k: u32) -> Sign {
        if k & 1 == 0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn is_minus(self) -> bool {
        self == Sign::Minus
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

impl Mul for Sign {
    type Output = Sign;

    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl Neg for Sign {
    type Output = Sign;

    fn neg(self) -> Sign {
        self * Sign::Minus
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+1",
            Sign::Minus => "-1",
        })
    }
}

/// Mod-2 addition of binary tuples: the index of the product monomial.
#[inline]
pub fn oplus(a: Blade, b: Blade) -> Blade {
    Blade(a.0 ^ b.0)
}

/// Gray map `x ^ (x << 1)`, truncated to `n` bits.
#[inline]
pub fn gray(x: Blade, n: u32) -> Blade {
    Blade((x.0 ^ (x.0 << 1)) & low_bits(n))
}

/// Inverse Gray code: prefix XOR from the least significant bit,
/// `c_i = b_0 ^ b_1 ^ ... ^ b_i`, truncated to `n` bits.
#[inline]
pub fn inverse_gray(b: Blade, n: u32) -> Blade {
    let mut c = b.0;
    c ^= c << 1;
    c ^= c << 2;
    c ^= c << 4;
    c ^= c << 8;
    c ^= c << 16;
    Blade(c & low_bits(n))
}

/// Walsh function `w_a(c) = (-1)^{|a & c|}`.
#[inline]
pub fn walsh(a: Blade, c: Blade) -> Sign {
    Sign::from_parity((a.0 & c.0).count_ones())
}

/// Grading correction for repeated generators times the metric factor of
/// repeated generators that square to `-1`.
#[inline]
pub fn twist(a: Blade, b: Blade, sig: Signature) -> Sign {
    let common = a.0 & b.0;
    Sign::from_parity(common.count_ones() + (common & sig.qmask).count_ones())
}

/// Product of two basis monomials: `twist(a,b) * walsh(a, inverse_gray(b)) * e_{a^b}`.
#[inline]
pub fn blade_product(a: Blade, b: Blade, sig: Signature) -> (Sign, Blade) {
    (
        twist(a, b, sig) * walsh(a, inverse_gray(b, sig.dim())),
        oplus(a, b),
    )
}

/// Reference blade product by explicit reordering.
///
/// Concatenates the generator lists of `a` and `b`, counts the adjacent
/// transpositions needed to sort them (the pairs `i in a`, `j in b` with
/// `i > j`), then contracts repeated generators with the metric.
pub fn oracle_blade_product(a: Blade, b: Blade, sig: Signature) -> (Sign, Blade) {
    let left: Vec<u32> = a.generators().collect();
    let right: Vec<u32> = b.generators().collect();
    let mut transpositions = 0u32;
    for &i in &left {
        for &j in &right {
            if i > j {
                transpositions += 1;
            }
        }
    }
    let mut negative_squares = 0u32;
    for &i in &left {
        if right.contains(&i) && i > sig.p() {
            negative_squares += 1;
        }
    }
    let mut merged: Vec<u32> = left.iter().chain(right.iter()).copied().collect();
    merged.sort_unstable();
    let mut bits = 0u32;
    let mut k = 0;
    while k < merged.len() {
        if k + 1 < merged.len() && merged[k] == merged[k + 1] {
            k += 2;
        } else {
            bits |= 1 << (merged[k] - 1);
            k += 1;
        }
    }
    (
        Sign::from_parity(transpositions + negative_squares),
        Blade(bits),
    )
}

/// Renders a blade as `Id` or `e1we3...`.
pub fn blade_to_name(b: Blade) -> String {
    if b.0 == 0 {
        return "Id".to_string();
    }
    let mut out = String::new();
    for (k, i) in b.generators().enumerate() {
        if k > 0 {
            out.push('w');
        }
        out.push('e');
        out.push_str(&i.to_string());
    }
    out
}

/// Parses a canonical monomial name; indices must be strictly increasing
/// and within `1..=dim`.
pub fn name_to_blade(s: &str, dim: u32) -> Result<Blade, NameError> {
    if s.is_empty() {
        return Err(NameError::Empty);
    }
    if s == "Id" {
        return Ok(Blade::IDENTITY);
    }
    let malformed = || NameError::Malformed(s.to_string());
    let mut bits = 0u32;
    let mut last = 0u32;
    for factor in s.split('w') {
        let digits = factor.strip_prefix('e').ok_or_else(malformed)?;
        if digits.is_empty()
            || !digits.bytes().all(|c| c.is_ascii_digit())
            || digits.starts_with('0')
        {
            return Err(malformed());
        }
        let index: u32 = digits.parse().map_err(|_| NameError::OutOfRange {
            index: u32::MAX,
            dim,
        })?;
        if index > dim {
            return Err(NameError::OutOfRange { index, dim });
        }
        if index <= last {
            return Err(NameError::NonCanonical(s.to_string()));
        }
        last = index;
        bits |= 1 << (index - 1);
    }
    Ok(Blade(bits))
}
