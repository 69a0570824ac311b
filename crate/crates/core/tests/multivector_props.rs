use cliffmul::random::random_multivector;
use cliffmul::scalar::Coefficient;
use cliffmul::{parse, parse_lines, Multivector, Rational, Signature};
use num_traits::Signed;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn sample<C: Coefficient>(seed: u64, p: u32, q: u32, max_terms: usize) -> Multivector<C> {
    let sig = Signature::new(p, q).unwrap();
    random_multivector(sig, &mut ChaCha8Rng::seed_from_u64(seed), max_terms)
}

fn assert_canonical(x: &Multivector<Rational>) {
    let keys: Vec<_> = x.terms().iter().map(|t| t.blade.canonical_key()).collect();
    assert!(keys.windows(2).all(|w| w[0] < w[1]), "order {keys:?}");
    for t in x.terms() {
        assert!(!t.coeff.is_zero());
        assert!(t.coeff.denom().is_positive());
        assert_eq!(t.coeff.numer().gcd_ref(t.coeff.denom()), 1.into());
    }
}

trait GcdRef {
    fn gcd_ref(&self, other: &Self) -> Self;
}

impl GcdRef for num_bigint::BigInt {
    fn gcd_ref(&self, other: &Self) -> Self {
        num_integer::Integer::gcd(self, other)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn exact_text_round_trip(seed in any::<u64>(), n in 0u32..=9, split in 0u32..=9) {
        let p = split.min(n);
        let x = sample::<Rational>(seed, p, n - p, 40);
        let text = x.to_string();
        prop_assert_eq!(parse::<Rational>(&text, x.signature()).unwrap(), x.clone());
        prop_assert_eq!(parse_lines::<Rational>(&x.to_lines(), x.signature()).unwrap(), x);
    }

    #[test]
    fn float_text_round_trip_is_bit_exact(
        n in 0u32..=9,
        raw in prop::collection::vec((any::<u32>(), any::<f64>()), 0..40),
    ) {
        let sig = Signature::euclidean(n).unwrap();
        let mask = (sig.basis_len() - 1) as u32;
        let terms = raw
            .into_iter()
            .filter(|(_, c)| c.is_finite())
            .map(|(b, c)| cliffmul::Term::new(c, cliffmul::Blade(b & mask)));
        let Ok(x) = Multivector::<f64>::from_terms(sig, terms) else {
            return Ok(());
        };
        let back = parse::<f64>(&x.to_string(), sig).unwrap();
        prop_assert_eq!(back.len(), x.len());
        for (a, b) in back.terms().iter().zip(x.terms()) {
            prop_assert_eq!(a.blade, b.blade);
            prop_assert_eq!(a.coeff.to_bits(), b.coeff.to_bits());
        }
    }

    #[test]
    fn operations_stay_canonical(s1 in any::<u64>(), s2 in any::<u64>(), k in -5i64..=5) {
        let x = sample::<Rational>(s1, 3, 2, 20);
        let y = sample::<Rational>(s2, 3, 2, 20);
        assert_canonical(&x.add(&y).unwrap());
        assert_canonical(&x.sub(&y).unwrap());
        assert_canonical(&x.scale(&Rational::from_i64(k)));
        assert_canonical(&x.scale(&Rational::new(1.into(), 3.into())));
    }

    #[test]
    fn term_list_partitions_the_polynomial(seed in any::<u64>()) {
        let x = sample::<Rational>(seed, 4, 1, 32);
        let sig = x.signature();
        let rebuilt = x.term_list().into_iter().fold(Multivector::zero(sig), |acc, t| {
            let unit = Multivector::monomial(sig, Rational::from_i64(1), t.blade).unwrap();
            acc.add(&unit.scale(&t.coeff)).unwrap()
        });
        prop_assert_eq!(rebuilt, x);
    }

    #[test]
    fn module_laws(s1 in any::<u64>(), s2 in any::<u64>(), s3 in any::<u64>(), a in -9i64..=9, b in 1i64..=9) {
        let x = sample::<Rational>(s1, 2, 2, 16);
        let y = sample::<Rational>(s2, 2, 2, 16);
        let z = sample::<Rational>(s3, 2, 2, 16);
        let c = Rational::new(a.into(), b.into());
        let zero = Multivector::zero(x.signature());
        prop_assert_eq!(x.add(&y).unwrap(), y.add(&x).unwrap());
        prop_assert_eq!(x.add(&y).unwrap().add(&z).unwrap(), x.add(&y.add(&z).unwrap()).unwrap());
        prop_assert_eq!(x.add(&zero).unwrap(), x.clone());
        prop_assert!(x.add(&x.scale(&Rational::from_i64(-1))).unwrap().is_zero());
        prop_assert_eq!(x.add(&y).unwrap().scale(&c), x.scale(&c).add(&y.scale(&c)).unwrap());
    }
}
