mod common;

use auxferm::pauli::{Letter, PauliSum, PauliTerm, Phase};
use common::*;
use proptest::prelude::*;

const N: usize = 4;

proptest! {
    #[test]
    fn product_matches_dense(a in term_strategy(N), b in term_strategy(N)) {
        let dense = term_matrix(&a, N) * term_matrix(&b, N);
        assert_close(&term_matrix(&(&a * &b), N), &dense, 1e-12);
    }

    #[test]
    fn product_is_associative(
        a in term_strategy(N),
        b in term_strategy(N),
        c in term_strategy(N),
    ) {
        let l = &(&a * &b) * &c;
        let r = &a * &(&b * &c);
        prop_assert_eq!(l.phase(), r.phase());
        prop_assert!((l.coeff() - r.coeff()).abs() < 1e-12);
        prop_assert_eq!(l.letters(), r.letters());
    }

    #[test]
    fn commutation_matches_dense(a in term_strategy(N), b in term_strategy(N)) {
        let (ma, mb) = (term_matrix(&a, N), term_matrix(&b, N));
        let comm = max_abs(&(&ma * &mb - &mb * &ma));
        let nontrivial = a.coeff() * b.coeff() > 1e-9;
        if nontrivial {
            prop_assert_eq!(a.commutes(&b), comm < 1e-9);
        }
    }

    #[test]
    fn adjoint_and_hermiticity(a in term_strategy(N)) {
        let m = term_matrix(&a, N);
        assert_close(&term_matrix(&a.adjoint(), N), &m.adjoint(), 1e-12);
        if a.coeff() > 1e-9 {
            prop_assert_eq!(a.is_hermitian(), max_abs(&(&m - m.adjoint())) < 1e-12);
        }
    }

    #[test]
    fn text_round_trip(a in term_strategy(8)) {
        let back: PauliTerm = a.to_string().parse().unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn unit_strings_square_to_identity(a in term_strategy(N)) {
        let u = a.unit_string();
        prop_assert_eq!(&u * &u, PauliTerm::identity());
    }

    #[test]
    fn sum_merging_preserves_the_operator(
        terms in proptest::collection::vec(term_strategy(3), 0..6),
    ) {
        let sum = PauliSum::from_terms(terms.clone());
        let direct = terms.iter().fold(identity(3) * c(0.0, 0.0), |acc, t| acc + term_matrix(t, 3));
        assert_close(&sum_matrix(&sum, 3), &direct, 1e-12);
    }

    #[test]
    fn symbolic_commutator_matches_dense(
        a in proptest::collection::vec(hermitian_term_strategy(3), 1..4),
        b in proptest::collection::vec(hermitian_term_strategy(3), 1..4),
    ) {
        let (sa, sb) = (PauliSum::from_terms(a), PauliSum::from_terms(b));
        let (ma, mb) = (sum_matrix(&sa, 3), sum_matrix(&sb, 3));
        assert_close(&sum_matrix(&sa.commutator(&sb), 3), &(&ma * &mb - &mb * &ma), 1e-12);
    }
}

#[test]
fn single_qubit_products() {
    let x = PauliTerm::single(0, Letter::X);
    let y = PauliTerm::single(0, Letter::Y);
    let z = PauliTerm::single(0, Letter::Z);
    assert_eq!(&x * &y, z.clone().times_phase(Phase::I));
    assert_eq!(&y * &x, z.clone().times_phase(Phase::MINUS_I));
    assert_eq!(&z * &z, PauliTerm::identity());
}

#[test]
fn weights_and_support() {
    let t: PauliTerm = "-0.5 X0 Z3 Y7".parse().unwrap();
    assert_eq!(t.weight(), 3);
    assert_eq!(t.support().collect::<Vec<_>>(), vec![0, 3, 7]);
    assert_eq!(t.max_qubit(), Some(7));
    assert!(PauliTerm::identity().is_identity());
}

#[test]
fn malformed_terms_are_rejected() {
    for bad in ["", "X0", "+1 Q0", "+1 X", "+1 X0 Z0", "+inf X0", "++1 X0"] {
        assert!(bad.parse::<PauliTerm>().is_err(), "{bad:?}");
    }
}

#[test]
fn cancelling_sum_is_empty() {
    let t: PauliTerm = "+1 X0 Y1".parse().unwrap();
    let s = PauliSum::from_terms([t.clone(), t.scaled(-1.0)]);
    assert!(s.is_empty());
}
