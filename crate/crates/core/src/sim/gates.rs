use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

use super::{check_cap, StateVector, EXP_CAP};
use crate::circuit::{Gate, GateSchedule};
use crate::error::{Error, Result};

type Mat2 = [[Complex64; 2]; 2];

const fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

const H_AMP: f64 = std::f64::consts::FRAC_1_SQRT_2;

fn matrix(gate: &Gate) -> Option<Mat2> {
    let z = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    Some(match *gate {
        Gate::H(_) => [[c(H_AMP, 0.0), c(H_AMP, 0.0)], [c(H_AMP, 0.0), c(-H_AMP, 0.0)]],
        Gate::X(_) | Gate::Cx(..) => [[z, one], [one, z]],
        Gate::Z(_) | Gate::Cz(..) => [[one, z], [z, -one]],
        Gate::Cy(..) => [[z, c(0.0, -1.0)], [c(0.0, 1.0), z]],
        Gate::S(_) => [[one, z], [z, c(0.0, 1.0)]],
        Gate::Sdg(_) => [[one, z], [z, c(0.0, -1.0)]],
        Gate::Rz(_, a) => [
            [Complex64::from_polar(1.0, -a / 2.0), z],
            [z, Complex64::from_polar(1.0, a / 2.0)],
        ],
        Gate::Measure(_) => return None,
    })
}

fn apply_2x2(amps: &mut [Complex64], target: usize, control: Option<usize>, m: &Mat2) {
    let bit = 1usize << target;
    let cmask = control.map_or(0, |q| 1usize << q);
    let diagonal = m[0][1] == c(0.0, 0.0) && m[1][0] == c(0.0, 0.0);
    for block in (0..amps.len()).step_by(2 * bit) {
        for b in block..block + bit {
            if b & cmask != cmask {
                continue;
            }
            if diagonal {
                amps[b] *= m[0][0];
                amps[b | bit] *= m[1][1];
            } else {
                let (a0, a1) = (amps[b], amps[b | bit]);
                amps[b] = m[0][0] * a0 + m[0][1] * a1;
                amps[b | bit] = m[1][0] * a0 + m[1][1] * a1;
            }
        }
    }
}

/// Applies one gate. Measurements sample the Born rule, collapse the state
/// and return the outcome bit.
pub fn apply_gate<R: Rng + ?Sized>(
    state: &mut StateVector,
    gate: &Gate,
    rng: &mut R,
) -> Result<Option<u8>> {
    let n = state.n_qubits();
    let qs = gate.qubits();
    if let Some(&q) = qs.iter().find(|&&q| q >= n) {
        return Err(Error::QubitOutOfRange { qubit: q, n_qubits: n });
    }
    if qs.len() == 2 && qs[0] == qs[1] {
        return Err(Error::InvalidArgument(format!("gate `{gate}` repeats a qubit")));
    }
    let amps = state.amplitudes_mut();
    match (*gate, matrix(gate)) {
        (Gate::Measure(q), _) => {
            let p1: f64 = amps
                .iter()
                .enumerate()
                .filter(|(b, _)| b >> q & 1 == 1)
                .map(|(_, a)| a.norm_sqr())
                .sum();
            let total: f64 = amps.iter().map(Complex64::norm_sqr).sum();
            let outcome = u8::from(rng.random::<f64>() * total < p1);
            for (b, a) in amps.iter_mut().enumerate() {
                if (b >> q & 1) as u8 != outcome {
                    *a = c(0.0, 0.0);
                }
            }
            state.normalize()?;
            Ok(Some(outcome))
        }
        (Gate::Cx(ctl, t) | Gate::Cy(ctl, t) | Gate::Cz(ctl, t), Some(m)) => {
            apply_2x2(amps, t, Some(ctl), &m);
            Ok(None)
        }
        (g, Some(m)) => {
            apply_2x2(amps, g.qubits()[0], None, &m);
            Ok(None)
        }
        (_, None) => unreachable!("only measurements lack a matrix"),
    }
}

/// Runs every gate in layer order, then applies the global phase. Returns the
/// measurement record as `(qubit, outcome)`.
pub fn run_schedule<R: Rng + ?Sized>(
    state: &mut StateVector,
    schedule: &GateSchedule,
    rng: &mut R,
) -> Result<Vec<(usize, u8)>> {
    let mut record = Vec::new();
    for g in schedule.gates() {
        if let Some(bit) = apply_gate(state, g, rng)? {
            record.push((g.qubits()[0], bit));
        }
    }
    if schedule.global_phase != 0.0 {
        state.scale(Complex64::from_polar(1.0, schedule.global_phase));
    }
    Ok(record)
}

/// Dense unitary of a measurement-free schedule on `n_qubits`.
pub fn schedule_unitary(schedule: &GateSchedule, n_qubits: usize) -> Result<DMatrix<Complex64>> {
    check_cap(n_qubits, EXP_CAP)?;
    if schedule.gates().any(|g| matches!(g, Gate::Measure(_))) {
        return Err(Error::InvalidArgument("schedule contains measurements".into()));
    }
    let dim = 1usize << n_qubits;
    let mut u = DMatrix::from_element(dim, dim, c(0.0, 0.0));
    let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(0);
    for col in 0..dim {
        let mut s = StateVector::basis(n_qubits, col)?;
        run_schedule(&mut s, schedule, &mut rng)?;
        for (r, a) in s.amplitudes().iter().enumerate() {
            u[(r, col)] = *a;
        }
    }
    Ok(u)
}
