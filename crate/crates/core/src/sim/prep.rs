//! Auxiliary-state preparation: direct factor application and the
//! measurement-based circuit.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{check_cap, run_schedule, StateVector, PREP_CAP};
use crate::circuit::{controlled_pauli, ordered_prep_schedule, Gate, GateSchedule};
use crate::error::{Error, Result};
use crate::fermion::{majorana, MajoranaLabel, ModeLayout};
use crate::graph::{build_stabilizer, Edge, LayerAssignment, Sign};
use crate::pauli::{PauliSum, PauliTerm, Phase};

/// Per-stabilizer signs chosen during preparation, plus the raw measurement
/// outcomes when the measured path produced them.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SignRecord {
    pub signs: BTreeMap<Edge, Sign>,
    /// `(edge, outcome)` in preparation order.
    pub outcomes: Vec<(Edge, u8)>,
}

impl SignRecord {
    pub fn sign(&self, e: &Edge) -> Sign {
        self.signs.get(e).copied().unwrap_or_default()
    }

    pub fn n_flipped(&self) -> usize {
        self.signs.values().filter(|&&s| s == Sign::Minus).count()
    }

    /// The assignment with these signs installed.
    pub fn apply_to(&self, assignment: &LayerAssignment) -> Result<LayerAssignment> {
        assignment.with_signs(&self.signs)
    }
}

/// `c_tail` and `d_head` of an edge on its register.
fn edge_majoranas(
    layout: &ModeLayout,
    assignment: &LayerAssignment,
    e: Edge,
) -> Result<(PauliTerm, PauliTerm)> {
    let (tail, head) = assignment.orientation(&e).ok_or(Error::MissingStabilizer(e))?;
    let reg = assignment.register_of(&e).ok_or(Error::MissingStabilizer(e))?;
    if reg > layout.n_aux {
        return Err(Error::TooFewRegisters {
            available: layout.n_aux,
            required: assignment.nu(),
        });
    }
    Ok((
        majorana(layout, MajoranaLabel::c(tail, reg))?,
        majorana(layout, MajoranaLabel::d(head, reg))?,
    ))
}

/// `(c_tail - i s d_head) / sqrt 2`: its image is the `+1` eigenspace of the
/// stabilizer with sign `s`.
pub fn prep_factor(
    layout: &ModeLayout,
    assignment: &LayerAssignment,
    e: Edge,
    sign: Sign,
) -> Result<PauliSum> {
    let (c, d) = edge_majoranas(layout, assignment, e)?;
    let phase = match sign {
        Sign::Plus => Phase::MINUS_I,
        Sign::Minus => Phase::I,
    };
    Ok(PauliSum::from_terms([c, d.times_phase(phase)]).scaled(std::f64::consts::FRAC_1_SQRT_2))
}

fn check_state(state: &StateVector, layout: &ModeLayout) -> Result<()> {
    if state.n_qubits() != layout.n_qubits() {
        return Err(Error::DimensionMismatch {
            expected: layout.n_qubits(),
            actual: state.n_qubits(),
        });
    }
    check_cap(state.n_qubits(), PREP_CAP)
}

fn apply_factor(state: &StateVector, factor: &PauliSum, e: Edge) -> Result<StateVector> {
    let mut out = state.apply_pauli_sum(factor)?;
    let n = out.norm();
    if n < 1e-8 {
        return Err(Error::DegenerateState(n, format!("preparation factor of edge {e}")));
    }
    out.scale(Complex64::new(1.0 / n, 0.0));
    Ok(out)
}

/// Applies every factor in preparation order with fixed signs.
pub fn apply_aux_with_signs(
    state: &StateVector,
    layout: &ModeLayout,
    assignment: &LayerAssignment,
    signs: &BTreeMap<Edge, Sign>,
) -> Result<StateVector> {
    check_state(state, layout)?;
    let mut s = state.clone();
    for e in assignment.prep_order() {
        let sign = signs.get(&e).copied().unwrap_or_default();
        s = apply_factor(&s, &prep_factor(layout, assignment, e, sign)?, e)?;
    }
    Ok(s)
}

/// Applies the factors in preparation order. A factor that would annihilate
/// the state (its stabilizer is already fixed to `+1` by the earlier ones) is
/// replaced by the opposite-sign factor and the flip is recorded.
pub fn apply_aux_prep(
    state: &StateVector,
    layout: &ModeLayout,
    assignment: &LayerAssignment,
) -> Result<(StateVector, SignRecord)> {
    check_state(state, layout)?;
    let mut record = SignRecord::default();
    let mut s = state.clone();
    for e in assignment.prep_order() {
        let plus = s.apply_pauli_sum(&prep_factor(layout, assignment, e, Sign::Plus)?)?;
        let sign = if plus.norm() < 1e-6 { Sign::Minus } else { Sign::Plus };
        s = apply_factor(&s, &prep_factor(layout, assignment, e, sign)?, e)?;
        record.signs.insert(e, sign);
    }
    // flip anything that still reads -1
    let adjusted = record.apply_to(assignment)?;
    for e in assignment.prep_order() {
        if s.expectation(&build_stabilizer(layout, &adjusted, e)?)? < 0.0 {
            let flipped = record.sign(&e).flipped();
            record.signs.insert(e, flipped);
        }
    }
    Ok((s, record))
}

/// Reference state `|0...0>` with every auxiliary stabilizer prepared.
pub fn prepare_aux_oracle(
    layout: &ModeLayout,
    assignment: &LayerAssignment,
) -> Result<(StateVector, SignRecord)> {
    check_cap(layout.n_qubits(), PREP_CAP)?;
    apply_aux_prep(&StateVector::zero(layout.n_qubits())?, layout, assignment)
}

/// Reference state prepared with prescribed signs.
pub fn prepare_aux_with_signs(
    layout: &ModeLayout,
    assignment: &LayerAssignment,
    signs: &BTreeMap<Edge, Sign>,
) -> Result<StateVector> {
    check_cap(layout.n_qubits(), PREP_CAP)?;
    apply_aux_with_signs(&StateVector::zero(layout.n_qubits())?, layout, assignment, signs)
}

/// Measurement-based preparation circuit for one edge on `ancilla`:
/// `H X C(c_tail) X C(-i d_head) H`, then a measurement.
fn edge_block(
    layout: &ModeLayout,
    assignment: &LayerAssignment,
    e: Edge,
    ancilla: usize,
) -> Result<GateSchedule> {
    let (c, d) = edge_majoranas(layout, assignment, e)?;
    let mut s = GateSchedule::new(ancilla + 1);
    s.push(Gate::H(ancilla));
    s.push(Gate::X(ancilla));
    s.extend(&controlled_pauli(ancilla, &c)?);
    s.push(Gate::X(ancilla));
    s.extend(&controlled_pauli(ancilla, &d.times_phase(Phase::MINUS_I))?);
    s.push(Gate::H(ancilla));
    s.push(Gate::Measure(ancilla));
    Ok(s)
}

fn block_rng(seed: u64, block: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block);
    rng
}

/// Runs the measured circuit for every edge in preparation order, reusing
/// one ancilla above the layout. Outcome 0 keeps the stabilizer sign, outcome
/// 1 flips it. Block `b` draws from stream `b` of the seeded generator.
pub fn apply_aux_measured(
    state: &StateVector,
    layout: &ModeLayout,
    assignment: &LayerAssignment,
    seed: u64,
) -> Result<(StateVector, SignRecord)> {
    check_state(state, layout)?;
    let ancilla = layout.n_qubits();
    check_cap(ancilla + 1, PREP_CAP)?;
    let mut s = state.with_extra_qubits(1)?;
    let mut record = SignRecord::default();
    for (b, e) in assignment.prep_order().into_iter().enumerate() {
        let mut rng = block_rng(seed, b as u64);
        let block = edge_block(layout, assignment, e, ancilla)?;
        let outcomes = run_schedule(&mut s, &block, &mut rng)?;
        let bit = outcomes.last().map_or(0, |&(_, o)| o);
        if bit == 1 {
            super::apply_gate(&mut s, &Gate::X(ancilla), &mut rng)?;
        }
        record.outcomes.push((e, bit));
        record
            .signs
            .insert(e, if bit == 0 { Sign::Plus } else { Sign::Minus });
    }
    Ok((s.without_top_qubits(1)?, record))
}

/// Reference state prepared by the measured circuit.
pub fn prepare_aux_measured(
    layout: &ModeLayout,
    assignment: &LayerAssignment,
    seed: u64,
) -> Result<(StateVector, SignRecord)> {
    check_cap(layout.n_qubits() + 1, PREP_CAP)?;
    apply_aux_measured(&StateVector::zero(layout.n_qubits())?, layout, assignment, seed)
}

/// `<P>` of every stabilizer of `assignment` (its signs included), in
/// preparation order.
pub fn stabilizer_expectations(
    state: &StateVector,
    layout: &ModeLayout,
    assignment: &LayerAssignment,
) -> Result<Vec<(Edge, f64)>> {
    assignment
        .prep_order()
        .into_iter()
        .map(|e| Ok((e, state.expectation(&build_stabilizer(layout, assignment, e)?)?)))
        .collect()
}

/// Places an `N`-qubit physical state on the physical qubits of `layout`.
pub fn embed_physical(psi: &StateVector, layout: &ModeLayout) -> Result<StateVector> {
    if psi.n_qubits() != layout.n_sites {
        return Err(Error::DimensionMismatch {
            expected: layout.n_sites,
            actual: psi.n_qubits(),
        });
    }
    psi.embed(layout.n_qubits(), &layout.physical_qubits())
}

/// Result of running one register's ordered preparation circuit.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasuredPrep {
    /// State on the padded layout with ancillas reset and removed.
    pub state: StateVector,
    pub layout: ModeLayout,
    /// Outcome of block `k = 1..=N/2`.
    pub outcomes: Vec<u8>,
}

impl MeasuredPrep {
    /// Runs the ordered preparation of `register` on `state` (which lives on
    /// the padded layout), drawing outcomes from the seeded generator.
    pub fn run(
        state: &StateVector,
        layout: &ModeLayout,
        register: usize,
        seed: u64,
    ) -> Result<MeasuredPrep> {
        let prep = ordered_prep_schedule(layout, register)?;
        let lay = prep.layout(layout.n_aux);
        if state.n_qubits() != lay.n_qubits() {
            return Err(Error::DimensionMismatch {
                expected: lay.n_qubits(),
                actual: state.n_qubits(),
            });
        }
        let n_anc = prep.ancilla_count();
        check_cap(lay.n_qubits() + n_anc, PREP_CAP)?;
        let mut s = state.with_extra_qubits(n_anc)?;
        let mut rng = block_rng(seed, 0);
        let record = run_schedule(&mut s, &prep.schedule, &mut rng)?;
        let mut outcomes = vec![0u8; n_anc];
        for (q, bit) in record {
            let k = prep
                .ancillas
                .iter()
                .position(|&a| a == q)
                .expect("measurements only on ancillas");
            outcomes[k] = bit;
            if bit == 1 {
                super::apply_gate(&mut s, &Gate::X(q), &mut rng)?;
            }
        }
        Ok(MeasuredPrep {
            state: s.without_top_qubits(n_anc)?,
            layout: lay,
            outcomes,
        })
    }
}
