use cliffmul::blades::{
    blade_product, gray, inverse_gray, oplus, oracle_blade_product, walsh, Blade, Sign, Signature,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Sign of `e_a e_b` from a literal bubble sort of the concatenated index
/// list, contracting adjacent equal generators with the metric. Shares no
/// code with either library routine.
fn bubble_sign(a: u32, b: u32, sig: Signature) -> (Sign, Blade) {
    let mut word: Vec<u32> = (0..32).filter(|i| a >> i & 1 == 1).collect();
    word.extend((0..32).filter(|i| b >> i & 1 == 1));
    let mut negative = false;
    let mut changed = true;
    while changed {
        changed = false;
        for k in 0..word.len().saturating_sub(1) {
            if word[k] > word[k + 1] {
                word.swap(k, k + 1);
                negative = !negative;
                changed = true;
            }
        }
    }
    let mut bits = 0u32;
    let mut k = 0;
    while k < word.len() {
        if k + 1 < word.len() && word[k] == word[k + 1] {
            if word[k] >= sig.p() {
                negative = !negative;
            }
            k += 2;
        } else {
            bits |= 1 << word[k];
            k += 1;
        }
    }
    (if negative { Sign::Minus } else { Sign::Plus }, Blade(bits))
}

#[test]
fn oracle_matches_bubble_sort_reference() {
    for sig in Signature::all_up_to(5) {
        let len = sig.basis_len() as u32;
        for a in 0..len {
            for b in 0..len {
                assert_eq!(
                    oracle_blade_product(Blade(a), Blade(b), sig),
                    bubble_sign(a, b, sig),
                    "{a:b} {b:b} {sig}"
                );
            }
        }
    }
}

#[test]
fn walsh_product_matches_oracle_exhaustively_up_to_dim_8() {
    let mut pairs = 0u64;
    for sig in Signature::all_up_to(8) {
        let len = sig.basis_len() as u32;
        for a in 0..len {
            for b in 0..len {
                let (a, b) = (Blade(a), Blade(b));
                assert_eq!(
                    blade_product(a, b, sig),
                    oracle_blade_product(a, b, sig),
                    "{a} * {b} in {sig}"
                );
                pairs += 1;
            }
        }
    }
    assert_eq!(pairs, (0..=8u64).map(|n| (n + 1) << (2 * n)).sum::<u64>());
}

#[test]
fn walsh_product_matches_oracle_on_random_pairs_at_dims_10_and_12() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for n in [10u32, 12] {
        for p in [0, n / 2, n] {
            let sig = Signature::new(p, n - p).unwrap();
            for _ in 0..100_000 {
                let a = Blade(rng.gen_range(0..1u32 << n));
                let b = Blade(rng.gen_range(0..1u32 << n));
                assert_eq!(blade_product(a, b, sig), oracle_blade_product(a, b, sig));
            }
        }
    }
}

#[test]
fn blade_index_is_xor_for_every_signature() {
    for sig in Signature::all_up_to(5) {
        for a in 0..sig.basis_len() as u32 {
            for b in 0..sig.basis_len() as u32 {
                assert_eq!(blade_product(Blade(a), Blade(b), sig).1, oplus(Blade(a), Blade(b)));
            }
        }
    }
}

#[test]
fn gray_inversion_is_a_bijection_up_to_16_bits() {
    for n in 0..=16u32 {
        for x in 0..1u32 << n {
            let x = Blade(x);
            assert_eq!(inverse_gray(gray(x, n), n), x);
            assert_eq!(gray(inverse_gray(x, n), n), x);
        }
    }
}

#[test]
fn anticommutation_and_squares() {
    for sig in Signature::all_up_to(8) {
        let n = sig.dim();
        for i in 1..=n {
            for j in 1..=n {
                let (ei, ej) = (Blade::generator(i), Blade::generator(j));
                let (sij, bij) = blade_product(ei, ej, sig);
                let (sji, bji) = blade_product(ej, ei, sig);
                if i == j {
                    assert_eq!(bij, Blade::IDENTITY);
                    let expected = if i <= sig.p() { Sign::Plus } else { Sign::Minus };
                    assert_eq!(sij, expected, "e{i}^2 in {sig}");
                } else {
                    assert_eq!(bij, bji);
                    assert_eq!(sij, -sji);
                }
            }
        }
    }
}

#[test]
fn sign_is_a_two_cocycle_up_to_dim_5() {
    for sig in Signature::all_up_to(5) {
        let len = sig.basis_len() as u32;
        for a in 0..len {
            for b in 0..len {
                for c in 0..len {
                    let (a, b, c) = (Blade(a), Blade(b), Blade(c));
                    let (s_ab, ab) = blade_product(a, b, sig);
                    let (s_ab_c, _) = blade_product(ab, c, sig);
                    let (s_bc, bc) = blade_product(b, c, sig);
                    let (s_a_bc, _) = blade_product(a, bc, sig);
                    assert_eq!(s_ab * s_ab_c, s_bc * s_a_bc, "{a} {b} {c} {sig}");
                }
            }
        }
    }
}

proptest! {
    #[test]
    fn walsh_is_bilinear(a in any::<u32>(), a2 in any::<u32>(), c in any::<u32>()) {
        let (a, a2, c) = (Blade(a), Blade(a2), Blade(c));
        prop_assert_eq!(walsh(oplus(a, a2), c), walsh(a, c) * walsh(a2, c));
    }

    #[test]
    fn full_width_products_match_oracle(p in 0u32..=32, a in any::<u32>(), b in any::<u32>()) {
        let sig = Signature::new(p, 32 - p).unwrap();
        prop_assert_eq!(
            blade_product(Blade(a), Blade(b), sig),
            oracle_blade_product(Blade(a), Blade(b), sig)
        );
    }
}
