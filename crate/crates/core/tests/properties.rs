//! Property tests for the algebraic invariants of the string and sum types.

use num_complex::Complex64;
use proptest::prelude::*;

use descryptor_core::pauli::{Pauli, PauliString, Phase};

fn letter_strategy() -> impl Strategy<Value = Pauli> {
    prop_oneof![Just(Pauli::I), Just(Pauli::X), Just(Pauli::Y), Just(Pauli::Z)]
}

fn string_strategy(n: usize) -> impl Strategy<Value = PauliString> {
    (proptest::collection::vec(letter_strategy(), n), 0i64..4).prop_map(|(letters, k)| {
        PauliString::from_letters(&letters).with_phase(Phase::from_exponent(k))
    })
}

fn pair_strategy() -> impl Strategy<Value = (PauliString, PauliString)> {
    (1usize..=4).prop_flat_map(|n| (string_strategy(n), string_strategy(n)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn product_commutes_with_dense_export((a, b) in pair_strategy()) {
        let prod = a.multiply(&b).unwrap();
        let dense = a.to_dense(6).unwrap().matmul(&b.to_dense(6).unwrap());
        prop_assert_eq!(dense.max_abs_diff(&prod.to_dense(6).unwrap()), 0.0);
    }

    #[test]
    fn squares_are_plus_or_minus_identity(s in (1usize..=5).prop_flat_map(string_strategy)) {
        let sq = s.multiply(&s).unwrap();
        prop_assert!(sq.is_identity_letters());
        prop_assert!(sq.phase() == Phase::ONE || sq.phase() == Phase::MINUS_ONE);
    }

    #[test]
    fn tensor_distributes_over_multiply(
        (a, c) in pair_strategy(),
        (b, d) in pair_strategy(),
    ) {
        // (a ⊗ b)(c ⊗ d) = (ac) ⊗ (bd): slots never interact.
        let left = a.tensor(&b).multiply(&c.tensor(&d)).unwrap();
        let right = a.multiply(&c).unwrap().tensor(&b.multiply(&d).unwrap());
        prop_assert_eq!(left, right);
    }

    #[test]
    fn expectation_zero_matches_dense_corner((a, b) in pair_strategy()) {
        let prod = a.multiply(&b).unwrap();
        let want = prod.to_dense(6).unwrap().get(0, 0);
        prop_assert_eq!(prod.expectation_zero(), want);
    }

    #[test]
    fn grammar_render_parse_round_trip(s in (1usize..=6).prop_flat_map(string_strategy)) {
        let text = s.render();
        let back = PauliString::parse(&text).unwrap();
        prop_assert_eq!(back, s);
    }

    #[test]
    fn restriction_is_idempotent_and_supported(
        s in (2usize..=5).prop_flat_map(string_strategy),
        keep_bits in 1u64..16,
    ) {
        let n = s.n();
        let keep: Vec<usize> = (1..=n).filter(|&a| keep_bits & (1 << (a - 1)) != 0).collect();
        prop_assume!(!keep.is_empty());
        let sum = descryptor_core::pauli::PauliSum::from_string(&s);
        let once = sum.restrict_to(&keep);
        prop_assert!(once.supported_within(&keep));
        prop_assert_eq!(once.restrict_to(&keep), once.clone());
        // Restriction never changes the coefficient magnitude of the
        // surviving term.
        let total: Complex64 = once.terms().map(|(_, c)| c).sum();
        prop_assert!((total.norm() - 1.0).abs() < 1e-12);
    }
}
