//! Random sparse multivectors for property tests and cross-engine checks.

use rand::seq::index::sample;
use rand::Rng;

use crate::blades::{Blade, Signature};
use crate::multivector::{Multivector, Term};
use crate::scalar::Coefficient;

/// A coefficient `±k/d`, `k` in `1..=99`, `d` in `1..=16`.
pub fn random_coeff<C: Coefficient, R: Rng + ?Sized>(rng: &mut R) -> C {
    let k: i64 = rng.gen_range(1..=99);
    let d: i64 = rng.gen_range(1..=16);
    C::from_ratio(if rng.gen() { -k } else { k }, d)
}

/// Between 0 and `max_terms` distinct random blades of `sig`, each with a
/// random nonzero coefficient.
pub fn random_multivector<C: Coefficient, R: Rng + ?Sized>(
    sig: Signature,
    rng: &mut R,
    max_terms: usize,
) -> Multivector<C> {
    let basis = sig.basis_len() as usize;
    let count = rng.gen_range(0..=max_terms.min(basis));
    let blades = sample(rng, basis, count);
    let terms: Vec<Term<C>> = blades
        .into_iter()
        .map(|b| Term::new(random_coeff(rng), Blade(b as u32)))
        .collect();
    Multivector::from_terms(sig, terms).expect("sampled blades are valid")
}
