//! Independent dense oracles shared by the integration suites.
//!
//! Nothing here goes through the crate's Pauli multiplication or Jordan-Wigner
//! code: Pauli strings are Kronecker products of 2x2 matrices and fermion
//! operators act directly on occupation bit strings.
#![allow(dead_code)]

use auxferm::pauli::{Letter, PauliSum, PauliTerm, Phase};
use auxferm::sim::StateVector;
use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;

pub type Mat = DMatrix<Complex64>;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(n_qubits: usize) -> Mat {
    Mat::identity(1 << n_qubits, 1 << n_qubits)
}

fn letter_matrix(l: Option<Letter>) -> Mat {
    let (o, z, i) = (c(1.0, 0.0), c(0.0, 0.0), c(0.0, 1.0));
    let v = match l {
        None => [o, z, z, o],
        Some(Letter::X) => [z, o, o, z],
        Some(Letter::Y) => [z, -i, i, z],
        Some(Letter::Z) => [o, z, z, -o],
    };
    Mat::from_row_slice(2, 2, &v)
}

fn phase_value(p: Phase) -> Complex64 {
    [c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)][p.exponent() as usize]
}

/// Kronecker product with qubit `n-1` as the most significant factor, so
/// qubit `q` is bit `q` of the row index.
pub fn term_matrix(term: &PauliTerm, n_qubits: usize) -> Mat {
    let mut m = Mat::identity(1, 1);
    for q in (0..n_qubits).rev() {
        m = m.kronecker(&letter_matrix(term.letter(q)));
    }
    m * (phase_value(term.phase()) * term.coeff())
}

pub fn sum_matrix(op: &PauliSum, n_qubits: usize) -> Mat {
    op.terms()
        .iter()
        .fold(Mat::zeros(1 << n_qubits, 1 << n_qubits), |acc, t| {
            acc + term_matrix(t, n_qubits)
        })
}

/// Fock-space annihilator of mode `p` on `n` modes in qubit order.
///
/// Bit 0 is the occupied state. Removing a particle from mode `p` picks up
/// `(-1)` per empty mode below `p`.
pub fn fock_annihilation(n_modes: usize, p: usize) -> Mat {
    let dim = 1usize << n_modes;
    let mut m = Mat::zeros(dim, dim);
    for b in 0..dim {
        if b >> p & 1 == 0 {
            let empties_below = (b & ((1 << p) - 1)).count_ones();
            let sign = if empties_below % 2 == 0 { 1.0 } else { -1.0 };
            m[(b | 1 << p, b)] = c(sign, 0.0);
        }
    }
    m
}

pub fn fock_creation(n_modes: usize, p: usize) -> Mat {
    fock_annihilation(n_modes, p).adjoint()
}

/// `c = a + a^dagger`
pub fn fock_c(n_modes: usize, p: usize) -> Mat {
    fock_annihilation(n_modes, p) + fock_creation(n_modes, p)
}

/// `d = -i (a - a^dagger)`
pub fn fock_d(n_modes: usize, p: usize) -> Mat {
    (fock_annihilation(n_modes, p) - fock_creation(n_modes, p)) * c(0.0, -1.0)
}

pub fn max_abs(m: &Mat) -> f64 {
    m.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

pub fn assert_close(a: &Mat, b: &Mat, tol: f64) {
    let d = max_abs(&(a - b));
    assert!(d < tol, "matrices differ by {d:e}");
}

/// `exp(-i t H)` by scaling and squaring a truncated Taylor series.
pub fn expm_dense(h: &Mat, t: f64) -> Mat {
    let a = h * c(0.0, -t);
    let norm: f64 = a.iter().map(|x| x.norm()).sum::<f64>().max(1e-300);
    let squarings = norm.log2().ceil().max(0.0) as i32 + 1;
    let scaled = &a / c(2f64.powi(squarings), 0.0);
    let dim = h.nrows();
    let mut term = Mat::identity(dim, dim);
    let mut acc = Mat::identity(dim, dim);
    for k in 1..30 {
        term = &term * &scaled / c(k as f64, 0.0);
        acc += &term;
    }
    for _ in 0..squarings {
        acc = &acc * &acc;
    }
    acc
}

pub fn state_from(m: &nalgebra::DVector<Complex64>, n_qubits: usize) -> StateVector {
    StateVector::from_amplitudes(n_qubits, m.iter().copied().collect()).unwrap()
}

pub fn vec_of(s: &StateVector) -> nalgebra::DVector<Complex64> {
    nalgebra::DVector::from_column_slice(s.amplitudes())
}

pub fn letter_strategy() -> impl Strategy<Value = Letter> {
    prop_oneof![Just(Letter::X), Just(Letter::Y), Just(Letter::Z)]
}

/// Random term on qubits `< n_qubits` with any phase and a coefficient in
/// `[-2, 2]`.
pub fn term_strategy(n_qubits: usize) -> impl Strategy<Value = PauliTerm> {
    (
        proptest::collection::btree_map(0..n_qubits, letter_strategy(), 0..=n_qubits),
        0u8..4,
        -2.0f64..2.0,
    )
        .prop_map(|(letters, ph, coeff)| {
            PauliTerm::from_letters(letters)
                .with_coeff(coeff)
                .with_phase(Phase::from_exponent(ph))
        })
}

/// Random Hermitian term: real phase.
pub fn hermitian_term_strategy(n_qubits: usize) -> impl Strategy<Value = PauliTerm> {
    (
        proptest::collection::btree_map(0..n_qubits, letter_strategy(), 0..=n_qubits),
        -2.0f64..2.0,
    )
        .prop_map(|(letters, coeff)| PauliTerm::from_letters(letters).with_coeff(coeff))
}
