//! Equivalence checks between encoded and physical evolution.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{
    apply_aux_prep, apply_aux_with_signs, check_cap, embed_physical, exact_evolve,
    stabilizer_expectations, trotter_evolve, StateVector, JOINT_CAP, LAMBDA_CAP,
};
use crate::encoder::{encode_hamiltonian, EncodedHamiltonian, TermKind};
use crate::error::{Error, Result};
use crate::fermion::ModeLayout;
use crate::format::sig12;
use crate::graph::{build_stabilizer, Edge, LayerAssignment, Sign};
use crate::models::FermionModel;
use crate::pauli::{Letter, PauliSum, Phase};

/// One `CHECK <name> <value> <threshold> PASS|FAIL` report line.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckLine {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub pass: bool,
}

impl CheckLine {
    /// Passes when `value >= threshold`.
    pub fn at_least(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        CheckLine {
            name: name.into(),
            value,
            threshold,
            pass: value >= threshold,
        }
    }

    /// Passes when `value <= threshold`.
    pub fn at_most(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        CheckLine {
            name: name.into(),
            value,
            threshold,
            pass: value <= threshold,
        }
    }
}

impl fmt::Display for CheckLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "CHECK {} {} {} {}",
            self.name,
            sig12(self.value),
            sig12(self.threshold),
            if self.pass { "PASS" } else { "FAIL" }
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquivalenceOptions {
    pub tau: f64,
    pub steps: usize,
    /// Flips one stabilizer sign in the Hamiltonian but not in the state.
    pub corrupt_sign: Option<Edge>,
    pub fidelity_tol: f64,
    pub invariance_tol: f64,
}

impl Default for EquivalenceOptions {
    fn default() -> Self {
        EquivalenceOptions {
            tau: 0.1,
            steps: 5,
            corrupt_sign: None,
            fidelity_tol: 1e-10,
            invariance_tol: 1e-8,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquivalenceReport {
    /// `(term index, kind, fidelity)` per model term.
    pub per_term: Vec<(usize, TermKind, f64)>,
    pub full_fidelity: f64,
    /// `None` when the auxiliary register is too large for a dense trace.
    pub aux_trace_distance: Option<f64>,
    pub stabilizer_drift: f64,
    pub n_flipped: usize,
    pub options: EquivalenceOptions,
}

impl EquivalenceReport {
    pub fn min_term_fidelity(&self) -> f64 {
        self.per_term.iter().map(|t| t.2).fold(1.0, f64::min)
    }

    pub fn lines(&self) -> Vec<CheckLine> {
        let o = &self.options;
        let mut v = vec![
            CheckLine::at_least("per_term_fidelity", self.min_term_fidelity(), 1.0 - o.fidelity_tol),
            CheckLine::at_least("full_fidelity", self.full_fidelity, 1.0 - o.fidelity_tol),
        ];
        if let Some(d) = self.aux_trace_distance {
            v.push(CheckLine::at_most("aux_trace_distance", d, o.invariance_tol));
        }
        v.push(CheckLine::at_most("stabilizer_drift", self.stabilizer_drift, o.invariance_tol));
        v
    }

    pub fn passed(&self) -> bool {
        self.lines().iter().all(|l| l.pass)
    }
}

impl fmt::Display for EquivalenceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in self.lines() {
            writeln!(f, "{l}")?;
        }
        Ok(())
    }
}

/// Largest auxiliary register for the dense reduced-state comparison.
const AUX_TRACE_CAP: usize = 10;

/// Compares encoded evolution of the prepared joint state against physical
/// evolution followed by the same preparation, term by term and for the full
/// Trotter product.
pub fn equivalence_check(
    model: &FermionModel,
    layout: &ModeLayout,
    assignment: &LayerAssignment,
    psi_phys: &StateVector,
    options: &EquivalenceOptions,
) -> Result<EquivalenceReport> {
    check_cap(layout.n_qubits(), JOINT_CAP)?;
    if !options.tau.is_finite() {
        return Err(Error::InvalidArgument(format!("tau {}", options.tau)));
    }
    let phys_layout = ModeLayout::new(layout.n_sites, 0);
    let joint0 = embed_physical(psi_phys, layout)?;
    let (prepared, record) = apply_aux_prep(&joint0, layout, assignment)?;
    let signed = record.apply_to(assignment)?;
    let mut hamiltonian_signs = signed.clone();
    if let Some(e) = options.corrupt_sign {
        hamiltonian_signs.set_sign(e, signed.sign(&e).flipped())?;
    }
    let encoded = encode_hamiltonian(model, layout, &hamiltonian_signs)?;
    let encode_state = |psi: &StateVector| -> Result<StateVector> {
        apply_aux_with_signs(&embed_physical(psi, layout)?, layout, assignment, &record.signs)
    };

    let physical_ops: Vec<PauliSum> = model
        .terms
        .iter()
        .map(|t| t.physical_operator(&phys_layout))
        .collect::<Result<_>>()?;

    let mut per_term = Vec::with_capacity(encoded.terms.len());
    for t in &encoded.terms {
        let mut joint = prepared.clone();
        joint.apply_exp_sum(&t.operator, options.tau)?;
        let mut phys = psi_phys.clone();
        phys.apply_exp_sum(&physical_ops[t.index], options.tau)?;
        per_term.push((t.index, t.kind, joint.fidelity(&encode_state(&phys)?)?));
    }

    let joint = trotter_evolve(&encoded, options.tau, options.steps, &prepared)?;
    let mut phys = psi_phys.clone();
    for _ in 0..options.steps {
        for l in encoded.layer_ids() {
            for t in encoded.layer_terms(l) {
                phys.apply_exp_sum(&physical_ops[t.index], options.tau)?;
            }
        }
    }
    let full_fidelity = joint.fidelity(&encode_state(&phys)?)?;

    let aux_trace_distance = if layout.aux_qubits().len() <= AUX_TRACE_CAP {
        let before = aux_reduced_density(&prepared, layout)?;
        let after = aux_reduced_density(&joint, layout)?;
        Some(trace_distance(&before, &after))
    } else {
        None
    };

    let e0 = stabilizer_expectations(&prepared, layout, &signed)?;
    let e1 = stabilizer_expectations(&joint, layout, &signed)?;
    let stabilizer_drift = e0
        .iter()
        .zip(&e1)
        .map(|((_, a), (_, b))| (a - b).abs())
        .fold(0.0, f64::max);

    Ok(EquivalenceReport {
        per_term,
        full_fidelity,
        aux_trace_distance,
        stabilizer_drift,
        n_flipped: record.n_flipped(),
        options: options.clone(),
    })
}

/// Reduced density matrix of the auxiliary modes.
///
/// Modes are reordered fermionically (auxiliary modes first) before the
/// physical modes are traced out. With `|0>` occupied, the empty modes
/// (`1` bits) are the particles of the reordering sign.
pub fn aux_reduced_density(state: &StateVector, layout: &ModeLayout) -> Result<DMatrix<Complex64>> {
    if state.n_qubits() != layout.n_qubits() {
        return Err(Error::DimensionMismatch {
            expected: layout.n_qubits(),
            actual: state.n_qubits(),
        });
    }
    let aux = layout.aux_qubits();
    let phys = layout.physical_qubits();
    check_cap(aux.len(), AUX_TRACE_CAP)?;
    let (da, dp) = (1usize << aux.len(), 1usize << phys.len());
    let phys_mask: usize = phys.iter().map(|q| 1usize << q).sum();
    // psi[p][a] in the reordered basis
    let mut m = DMatrix::from_element(dp, da, Complex64::new(0.0, 0.0));
    for (b, &amp) in state.amplitudes().iter().enumerate() {
        let mut inversions = 0;
        let mut a_idx = 0;
        for (i, &q) in aux.iter().enumerate() {
            if b >> q & 1 == 1 {
                a_idx |= 1 << i;
                inversions += (b & phys_mask & ((1 << q) - 1)).count_ones();
            }
        }
        let p_idx = phys
            .iter()
            .enumerate()
            .filter(|(_, &q)| b >> q & 1 == 1)
            .fold(0, |acc, (i, _)| acc | 1 << i);
        m[(p_idx, a_idx)] = if inversions % 2 == 1 { -amp } else { amp };
    }
    Ok(m.transpose() * m.conjugate())
}

/// `||a - b||_1 / 2` for Hermitian matrices.
pub fn trace_distance(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    0.5 * (a - b).singular_values().sum()
}

/// `sum_{g<h} || [A_g, A_h] ||` with spectral norms of dense matrices.
pub fn commutator_lambda(layers: &[PauliSum], n_qubits: usize) -> Result<f64> {
    check_cap(n_qubits, LAMBDA_CAP)?;
    if let Some(q) = layers.iter().filter_map(PauliSum::max_qubit).max() {
        if q >= n_qubits {
            return Err(Error::QubitOutOfRange { qubit: q, n_qubits });
        }
    }
    let mut total = 0.0;
    for (g, a) in layers.iter().enumerate() {
        for b in &layers[g + 1..] {
            // i[A, B] is Hermitian
            let c = a.commutator(b).times_phase(Phase::I);
            if c.is_empty() {
                continue;
            }
            let m = super::pauli_sum_matrix(&c, n_qubits)?;
            total += m.singular_values().max();
        }
    }
    Ok(total)
}

/// Like [`commutator_lambda`], with each commutator restricted to the image
/// of the encoding map: physical basis states prepared with `signs`.
pub fn commutator_lambda_encoded(
    layers: &[PauliSum],
    layout: &ModeLayout,
    assignment: &LayerAssignment,
    signs: &BTreeMap<Edge, Sign>,
) -> Result<f64> {
    check_cap(layout.n_qubits(), JOINT_CAP)?;
    check_cap(layout.n_sites, LAMBDA_CAP)?;
    let dim = 1usize << layout.n_sites;
    let basis: Vec<StateVector> = (0..dim)
        .map(|b| {
            let phys = StateVector::basis(layout.n_sites, b)?;
            apply_aux_with_signs(&embed_physical(&phys, layout)?, layout, assignment, signs)
        })
        .collect::<Result<_>>()?;
    let mut total = 0.0;
    for (g, a) in layers.iter().enumerate() {
        for b in &layers[g + 1..] {
            let c = a.commutator(b).times_phase(Phase::I);
            if c.is_empty() {
                continue;
            }
            let mut m = DMatrix::from_element(dim, dim, Complex64::new(0.0, 0.0));
            for (j, v) in basis.iter().enumerate() {
                let cv = v.apply_pauli_sum(&c)?;
                for (i, u) in basis.iter().enumerate() {
                    m[(i, j)] = u.inner(&cv)?;
                }
            }
            total += m.singular_values().max();
        }
    }
    Ok(total)
}

/// Rank over GF(2) of bit-vector rows stored as `u64` words.
pub fn gf2_rank(mut rows: Vec<Vec<u64>>) -> usize {
    let mut rank = 0;
    let n_bits = rows.iter().map(|r| r.len() * 64).max().unwrap_or(0);
    for bit in 0..n_bits {
        let (w, m) = (bit / 64, 1u64 << (bit % 64));
        let Some(p) = (rank..rows.len()).find(|&i| rows[i].get(w).is_some_and(|x| x & m != 0))
        else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != rank && row.get(w).is_some_and(|x| x & m != 0) {
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x ^= y;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// `log2` of the dimension of the joint `+1` eigenspace of the stabilizers
/// inside the auxiliary sector: auxiliary modes minus the GF(2) rank.
pub fn aux_sector_log_dim(layout: &ModeLayout, assignment: &LayerAssignment) -> Result<usize> {
    let n = layout.n_qubits();
    let words = (2 * n).div_ceil(64);
    let mut rows = Vec::new();
    for e in assignment.prep_order() {
        let p = build_stabilizer(layout, assignment, e)?;
        let mut row = vec![0u64; words];
        for (&q, &l) in p.letters() {
            if matches!(l, Letter::X | Letter::Y) {
                row[q / 64] |= 1 << (q % 64);
            }
            if matches!(l, Letter::Z | Letter::Y) {
                row[(n + q) / 64] |= 1 << ((n + q) % 64);
            }
        }
        rows.push(row);
    }
    Ok(layout.aux_qubits().len() - gf2_rank(rows))
}

/// `(M, tau, ||exact - trotter||)` for each step count at total time `t`.
pub fn trotter_error_curve(
    layers: &[PauliSum],
    t: f64,
    step_counts: &[usize],
    psi: &StateVector,
) -> Result<Vec<(usize, f64, f64)>> {
    let total = layers.iter().fold(PauliSum::zero(), |acc, l| acc.add(l));
    let exact = exact_evolve(&total, t, psi)?;
    step_counts
        .iter()
        .map(|&m| {
            if m == 0 {
                return Err(Error::InvalidArgument("step count 0".into()));
            }
            let tau = t / m as f64;
            let approx = super::trotter_evolve_layers(layers, tau, m, psi)?;
            Ok((m, tau, approx.distance(&exact)?))
        })
        .collect()
}

/// Least-squares slope of `log y` against `log x`.
pub fn fit_loglog_slope(points: &[(f64, f64)]) -> Result<f64> {
    if points.len() < 2 || points.iter().any(|&(x, y)| !(x > 0.0 && y > 0.0)) {
        return Err(Error::InvalidArgument(
            "log-log fit needs two or more positive points".into(),
        ));
    }
    let n = points.len() as f64;
    let (lx, ly): (Vec<f64>, Vec<f64>) = points.iter().map(|&(x, y)| (x.ln(), y.ln())).unzip();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidArgument("log-log fit needs distinct x values".into()));
    }
    Ok(sxy / sxx)
}

/// Encoded Hamiltonian with the signs produced by preparing `layout`'s
/// reference state.
pub fn encode_with_prepared_signs(
    model: &FermionModel,
    layout: &ModeLayout,
    assignment: &LayerAssignment,
) -> Result<(StateVector, EncodedHamiltonian)> {
    let (state, record) = super::prepare_aux_oracle(layout, assignment)?;
    let encoded = encode_hamiltonian(model, layout, &record.apply_to(assignment)?)?;
    Ok((state, encoded))
}
