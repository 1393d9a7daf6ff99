//! Dense statevector simulation used as the verification oracle.
//!
//! Qubit `q` is bit `q` of the basis index.

mod gates;
mod prep;
mod verify;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::encoder::EncodedHamiltonian;
use crate::error::{Error, Result};
use crate::pauli::{Letter, PauliSum, PauliTerm};

pub use gates::{apply_gate, run_schedule, schedule_unitary};
pub use prep::{
    apply_aux_measured, apply_aux_prep, apply_aux_with_signs, embed_physical, prep_factor,
    prepare_aux_measured, prepare_aux_oracle, prepare_aux_with_signs, stabilizer_expectations,
    MeasuredPrep, SignRecord,
};
pub use verify::{
    aux_reduced_density, aux_sector_log_dim, commutator_lambda, commutator_lambda_encoded,
    encode_with_prepared_signs,
    equivalence_check, fit_loglog_slope, gf2_rank, trace_distance, trotter_error_curve, CheckLine,
    EquivalenceOptions, EquivalenceReport,
};

/// Largest joint system for equivalence checks.
pub const JOINT_CAP: usize = 20;
/// Largest register for preparation, including the measurement ancilla.
pub const PREP_CAP: usize = 24;
/// Largest register for exact exponentials.
pub const EXP_CAP: usize = 14;
/// Largest register for dense commutator norms.
pub const LAMBDA_CAP: usize = 12;
/// Hard ceiling for any statevector.
pub const STATE_CAP: usize = 26;

pub(crate) fn check_cap(qubits: usize, cap: usize) -> Result<()> {
    if qubits > cap {
        Err(Error::CapExceeded { qubits, cap })
    } else {
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

impl StateVector {
    /// The all-zeros basis state.
    pub fn zero(n_qubits: usize) -> Result<Self> {
        Self::basis(n_qubits, 0)
    }

    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        check_cap(n_qubits, STATE_CAP)?;
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(Error::InvalidArgument(format!(
                "basis index {index} on {n_qubits} qubits"
            )));
        }
        let mut amps = vec![ZERO; dim];
        amps[index] = ONE;
        Ok(StateVector { n_qubits, amps })
    }

    pub fn from_amplitudes(n_qubits: usize, amps: Vec<Complex64>) -> Result<Self> {
        check_cap(n_qubits, STATE_CAP)?;
        if amps.len() != 1 << n_qubits {
            return Err(Error::DimensionMismatch {
                expected: 1 << n_qubits,
                actual: amps.len(),
            });
        }
        Ok(StateVector { n_qubits, amps })
    }

    /// Haar-random state from complex Gaussian amplitudes.
    pub fn random<R: Rng + ?Sized>(n_qubits: usize, rng: &mut R) -> Result<Self> {
        check_cap(n_qubits, STATE_CAP)?;
        let amps = (0..1usize << n_qubits)
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        let mut s = StateVector { n_qubits, amps };
        s.normalize()?;
        Ok(s)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt()
    }

    /// Rescales to unit norm; fails below `1e-8`.
    pub fn normalize(&mut self) -> Result<f64> {
        let n = self.norm();
        if n < 1e-8 {
            return Err(Error::DegenerateState(n, "state vanished".into()));
        }
        self.scale(Complex64::new(1.0 / n, 0.0));
        Ok(n)
    }

    pub fn scale(&mut self, factor: Complex64) {
        self.amps.iter_mut().for_each(|a| *a *= factor);
    }

    fn check_same(&self, other: &StateVector) -> Result<()> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.n_qubits,
                actual: other.n_qubits,
            });
        }
        Ok(())
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        self.check_same(other)?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `|<a|b>|^2 / (|a|^2 |b|^2)`; global phase drops out.
    pub fn fidelity(&self, other: &StateVector) -> Result<f64> {
        let ip = self.inner(other)?;
        let n = self.norm() * other.norm();
        if n == 0.0 {
            return Err(Error::DegenerateState(n, "fidelity of a zero vector".into()));
        }
        Ok(ip.norm_sqr() / (n * n))
    }

    /// Euclidean distance `||self - other||`.
    pub fn distance(&self, other: &StateVector) -> Result<f64> {
        self.check_same(other)?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt())
    }

    /// `self += factor * other`.
    pub fn axpy(&mut self, factor: Complex64, other: &StateVector) -> Result<()> {
        self.check_same(other)?;
        for (a, b) in self.amps.iter_mut().zip(&other.amps) {
            *a += factor * b;
        }
        Ok(())
    }

    /// Places qubit `i` of `self` at `positions[i]` of an `n_total`-qubit
    /// register whose other qubits are `|0>`.
    pub fn embed(&self, n_total: usize, positions: &[usize]) -> Result<StateVector> {
        if positions.len() != self.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.n_qubits,
                actual: positions.len(),
            });
        }
        if let Some(&q) = positions.iter().find(|&&q| q >= n_total) {
            return Err(Error::QubitOutOfRange {
                qubit: q,
                n_qubits: n_total,
            });
        }
        let mut out = StateVector::zero(n_total)?;
        out.amps[0] = ZERO;
        for (idx, &a) in self.amps.iter().enumerate() {
            let target = positions
                .iter()
                .enumerate()
                .filter(|(i, _)| idx >> i & 1 == 1)
                .fold(0usize, |acc, (_, &p)| acc | 1 << p);
            out.amps[target] = a;
        }
        Ok(out)
    }

    /// Adds `extra` qubits in `|0>` above the current ones.
    pub fn with_extra_qubits(&self, extra: usize) -> Result<StateVector> {
        let n = self.n_qubits + extra;
        check_cap(n, STATE_CAP)?;
        let mut amps = self.amps.clone();
        amps.resize(1 << n, ZERO);
        Ok(StateVector { n_qubits: n, amps })
    }

    /// Drops the top `count` qubits, which must be in `|0>`.
    pub fn without_top_qubits(&self, count: usize) -> Result<StateVector> {
        let n = self.n_qubits.checked_sub(count).ok_or(Error::DimensionMismatch {
            expected: count,
            actual: self.n_qubits,
        })?;
        let leak: f64 = self.amps[1 << n..].iter().map(Complex64::norm_sqr).sum();
        if leak > 1e-20 {
            return Err(Error::InvalidArgument(format!(
                "discarded qubits carry weight {leak:e}"
            )));
        }
        Ok(StateVector {
            n_qubits: n,
            amps: self.amps[..1 << n].to_vec(),
        })
    }

    fn check_term(&self, term: &PauliTerm) -> Result<(u64, u64)> {
        if let Some(q) = term.max_qubit().filter(|&q| q >= self.n_qubits) {
            return Err(Error::QubitOutOfRange {
                qubit: q,
                n_qubits: self.n_qubits,
            });
        }
        Ok(term.masks().expect("qubits below the state cap"))
    }

    /// `term |self>`.
    pub fn apply_pauli_term(&self, term: &PauliTerm) -> Result<StateVector> {
        let (x, z) = self.check_term(term)?;
        let n_y = term.letters().values().filter(|&&l| l == Letter::Y).count();
        let c = term.complex_coeff() * I.powu(n_y as u32);
        let mut out = vec![ZERO; self.dim()];
        for (b, &a) in self.amps.iter().enumerate() {
            let sign = if (b as u64 & z).count_ones() % 2 == 1 { -c } else { c };
            out[b ^ x as usize] = sign * a;
        }
        Ok(StateVector {
            n_qubits: self.n_qubits,
            amps: out,
        })
    }

    /// `op |self>`, unnormalized.
    pub fn apply_pauli_sum(&self, op: &PauliSum) -> Result<StateVector> {
        let mut out = StateVector {
            n_qubits: self.n_qubits,
            amps: vec![ZERO; self.dim()],
        };
        for t in op.terms() {
            out.axpy(ONE, &self.apply_pauli_term(t)?)?;
        }
        Ok(out)
    }

    /// `<self| term |self>` for a normalized state.
    pub fn expectation_complex(&self, term: &PauliTerm) -> Result<Complex64> {
        self.inner(&self.apply_pauli_term(term)?)
    }

    pub fn expectation(&self, term: &PauliTerm) -> Result<f64> {
        Ok(self.expectation_complex(term)?.re)
    }

    /// `exp(-i theta term)` for a Hermitian term, in place:
    /// `cos(theta c) - i sin(theta c) P` with `c` the signed coefficient.
    pub fn apply_exp_term(&mut self, term: &PauliTerm, theta: f64) -> Result<()> {
        if !term.is_hermitian() {
            return Err(Error::NonHermitian(term.to_string()));
        }
        let (x, z) = self.check_term(term)?;
        let phi = theta * term.complex_coeff().re;
        let (cos, sin) = (phi.cos(), phi.sin());
        if x == 0 {
            // diagonal string: phase per basis state
            let plus = Complex64::new(cos, -sin);
            let minus = Complex64::new(cos, sin);
            for (b, a) in self.amps.iter_mut().enumerate() {
                *a *= if (b as u64 & z).count_ones() % 2 == 1 { minus } else { plus };
            }
            return Ok(());
        }
        let unit = term.unit_string();
        let p = self.apply_pauli_term(&unit)?;
        for (a, pa) in self.amps.iter_mut().zip(&p.amps) {
            *a = *a * cos - I * sin * pa;
        }
        Ok(())
    }

    /// `exp(-i t h)` in place. Commuting sums use one closed-form factor per
    /// term; other sums use a Taylor series.
    pub fn apply_exp_sum(&mut self, h: &PauliSum, t: f64) -> Result<()> {
        if h.is_commuting() {
            for term in h.terms() {
                self.apply_exp_term(term, t)?;
            }
            Ok(())
        } else {
            *self = taylor_evolve(h, t, self)?;
            Ok(())
        }
    }
}

/// `exp(-i t h) psi` by Taylor series over steps with `||h|| dt <= 1`.
fn taylor_evolve(h: &PauliSum, t: f64, psi: &StateVector) -> Result<StateVector> {
    if !h.is_hermitian() {
        return Err(Error::NonHermitian(h.to_string()));
    }
    let steps = (h.norm_bound() * t.abs()).ceil().max(1.0) as usize;
    let dt = t / steps as f64;
    let mut state = psi.clone();
    for _ in 0..steps {
        let mut term = state.clone();
        let mut acc = state.clone();
        for k in 1..=80 {
            term = term.apply_pauli_sum(h)?;
            term.scale(Complex64::new(0.0, -dt / k as f64));
            acc.axpy(ONE, &term)?;
            if term.norm() < 1e-17 * acc.norm().max(1.0) {
                break;
            }
        }
        state = acc;
    }
    Ok(state)
}

/// `exp(-i T h) psi`, accurate to round-off.
pub fn exact_evolve(h: &PauliSum, t: f64, psi: &StateVector) -> Result<StateVector> {
    check_cap(psi.n_qubits(), EXP_CAP)?;
    if let Some(q) = h.max_qubit().filter(|&q| q >= psi.n_qubits()) {
        return Err(Error::QubitOutOfRange {
            qubit: q,
            n_qubits: psi.n_qubits(),
        });
    }
    taylor_evolve(h, t, psi)
}

/// `M` first-order steps: every layer in order, each as the product of its
/// terms' exponentials.
pub fn trotter_evolve(
    encoded: &EncodedHamiltonian,
    tau: f64,
    steps: usize,
    psi: &StateVector,
) -> Result<StateVector> {
    if psi.n_qubits() != encoded.layout.n_qubits() {
        return Err(Error::DimensionMismatch {
            expected: encoded.layout.n_qubits(),
            actual: psi.n_qubits(),
        });
    }
    let layers: Vec<Vec<PauliSum>> = encoded
        .layer_ids()
        .into_iter()
        .map(|l| {
            encoded
                .layer_terms(l)
                .into_iter()
                .map(|t| t.operator.clone())
                .collect()
        })
        .collect();
    let mut state = psi.clone();
    for _ in 0..steps {
        for layer in &layers {
            for op in layer {
                state.apply_exp_sum(op, tau)?;
            }
        }
    }
    Ok(state)
}

/// First-order product of `exp(-i tau h_layer)` over generic layer sums.
pub fn trotter_evolve_layers(
    layers: &[PauliSum],
    tau: f64,
    steps: usize,
    psi: &StateVector,
) -> Result<StateVector> {
    let mut state = psi.clone();
    for _ in 0..steps {
        for layer in layers {
            state.apply_exp_sum(layer, tau)?;
        }
    }
    Ok(state)
}

/// Dense matrix of a Pauli sum on `n_qubits`.
pub fn pauli_sum_matrix(op: &PauliSum, n_qubits: usize) -> Result<DMatrix<Complex64>> {
    check_cap(n_qubits, EXP_CAP)?;
    let dim = 1usize << n_qubits;
    let mut m = DMatrix::from_element(dim, dim, ZERO);
    for b in 0..dim {
        let col = StateVector::basis(n_qubits, b)?.apply_pauli_sum(op)?;
        for (r, a) in col.amps.iter().enumerate() {
            m[(r, b)] = *a;
        }
    }
    Ok(m)
}

/// `exp(-i t H)` for a dense Hermitian matrix via its eigendecomposition.
pub fn dense_expm_hermitian(h: &DMatrix<Complex64>, t: f64) -> DMatrix<Complex64> {
    let eig = h.clone().symmetric_eigen();
    let phases = DMatrix::from_diagonal(
        &eig.eigenvalues
            .map(|l| Complex64::new(0.0, -t * l).exp()),
    );
    &eig.eigenvectors * phases * eig.eigenvectors.adjoint()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn t(s: &str) -> PauliTerm {
        s.parse().unwrap()
    }

    #[test]
    fn bit_flip_and_identity() {
        let s = StateVector::zero(3).unwrap();
        let x = s.apply_pauli_term(&t("+1 X0")).unwrap();
        assert_eq!(x.amplitudes()[1], ONE);
        assert_eq!(s.apply_pauli_term(&PauliTerm::identity()).unwrap(), s);
        assert!(s.apply_pauli_term(&t("+1 X3")).is_err());
    }

    #[test]
    fn y_action() {
        let s = StateVector::zero(1).unwrap();
        let y = s.apply_pauli_term(&t("+1 Y0")).unwrap();
        assert_eq!(y.amplitudes()[1], I);
    }

    #[test]
    fn exp_term_matches_closed_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let psi = StateVector::random(3, &mut rng).unwrap();
        let p = t("-0.7 X0 Y1 Z2");
        let mut a = psi.clone();
        a.apply_exp_term(&p, 0.3).unwrap();
        let b = exact_evolve(&PauliSum::from(p), 0.3, &psi).unwrap();
        assert!(a.distance(&b).unwrap() < 1e-12);
    }

    #[test]
    fn embed_places_qubits() {
        let s = StateVector::basis(2, 0b10).unwrap();
        let e = s.embed(4, &[0, 2]).unwrap();
        assert_eq!(e.amplitudes()[0b0100], ONE);
        let back = e.with_extra_qubits(1).unwrap().without_top_qubits(1).unwrap();
        assert_eq!(back, e);
    }
}
