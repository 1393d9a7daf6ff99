use super::{Gate, GateSchedule};
use crate::error::{Error, Result};
use crate::pauli::{Letter, PauliTerm, Phase};

/// `ceil(log2 n)`, with `tree_depth(0) = tree_depth(1) = 0`.
pub fn tree_depth(n: usize) -> usize {
    if n <= 1 {
        0
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    }
}

/// CX rounds that fold the parity of `qubits` (sorted) into the first one.
///
/// Round `r` pairs position `i` with `i + 2^r` for `i` a multiple of
/// `2^(r+1)`; the child is the control, the parent the target.
fn parity_rounds(qubits: &[usize]) -> Vec<Vec<Gate>> {
    let mut rounds = Vec::new();
    let mut stride = 1;
    while stride < qubits.len() {
        let round = (0..qubits.len())
            .step_by(2 * stride)
            .filter(|i| i + stride < qubits.len())
            .map(|i| Gate::Cx(qubits[i + stride], qubits[i]))
            .collect();
        rounds.push(round);
        stride *= 2;
    }
    rounds
}

/// Circuit for `exp(-i angle term)`.
///
/// Basis change to `Z`, a balanced CX tree onto the lowest qubit, one `Rz`,
/// then the mirror image. A weight-0 term only contributes a global phase.
pub fn pauli_gadget(term: &PauliTerm, angle: f64) -> Result<GateSchedule> {
    if !angle.is_finite() {
        return Err(Error::InvalidArgument(format!("gadget angle {angle}")));
    }
    if !term.is_hermitian() {
        return Err(Error::NonHermitian(term.to_string()));
    }
    let signed = term.complex_coeff().re;
    let theta = angle * signed;
    let qubits: Vec<usize> = term.support().collect();
    let mut s = GateSchedule::new(qubits.last().map_or(0, |q| q + 1));
    if qubits.is_empty() {
        s.global_phase = -theta;
        return Ok(s);
    }
    for (&q, &l) in term.letters() {
        match l {
            Letter::X => s.push(Gate::H(q)),
            Letter::Y => {
                s.push(Gate::Sdg(q));
                s.push(Gate::H(q));
            }
            Letter::Z => {}
        }
    }
    let rounds = parity_rounds(&qubits);
    for g in rounds.iter().flatten() {
        s.push(*g);
    }
    s.push(Gate::Rz(qubits[0], 2.0 * theta));
    for g in rounds.iter().rev().flat_map(|r| r.iter().rev()) {
        s.push(*g);
    }
    for (&q, &l) in term.letters() {
        match l {
            Letter::X => s.push(Gate::H(q)),
            Letter::Y => {
                s.push(Gate::H(q));
                s.push(Gate::S(q));
            }
            Letter::Z => {}
        }
    }
    Ok(s)
}

/// Controlled-Z from `control` onto every target.
///
/// The targets' parity is folded into the lowest target by a CX tree, hit by
/// one CZ and unfolded again: two-qubit depth `2 ceil(log2 n) + 1`.
pub fn cz_fanout(control: usize, targets: &[usize]) -> Result<GateSchedule> {
    let mut t: Vec<usize> = targets.to_vec();
    t.sort_unstable();
    t.dedup();
    if t.len() != targets.len() {
        return Err(Error::InvalidArgument(format!("repeated fanout target in {targets:?}")));
    }
    if t.contains(&control) {
        return Err(Error::InvalidArgument(format!(
            "fanout control {control} is also a target"
        )));
    }
    let mut s = GateSchedule::new(0);
    if t.is_empty() {
        return Ok(s);
    }
    let rounds = parity_rounds(&t);
    for g in rounds.iter().flatten() {
        s.push(*g);
    }
    s.push(Gate::Cz(control, t[0]));
    for g in rounds.iter().rev().flat_map(|r| r.iter().rev()) {
        s.push(*g);
    }
    Ok(s)
}

/// Circuit applying the unit-magnitude Pauli operator `term` when `control`
/// is `|1>`. `Z` letters go through one fanout, `X`/`Y` letters become
/// CX/CY, and the phase becomes a single-qubit gate on the control.
pub fn controlled_pauli(control: usize, term: &PauliTerm) -> Result<GateSchedule> {
    if (term.coeff() - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidArgument(format!(
            "controlled Pauli needs a unit coefficient, got {term}"
        )));
    }
    if term.letter(control).is_some() {
        return Err(Error::InvalidArgument(format!(
            "control {control} lies in the support of {term}"
        )));
    }
    let mut s = GateSchedule::new(control + 1);
    match term.phase() {
        Phase::ONE => {}
        Phase::MINUS_ONE => s.push(Gate::Z(control)),
        Phase::I => s.push(Gate::S(control)),
        _ => s.push(Gate::Sdg(control)),
    }
    let mut zs = Vec::new();
    for (&q, &l) in term.letters() {
        match l {
            Letter::X => s.push(Gate::Cx(control, q)),
            Letter::Y => s.push(Gate::Cy(control, q)),
            Letter::Z => zs.push(q),
        }
    }
    s.extend(&cz_fanout(control, &zs)?);
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tree_depths() {
        assert_eq!(
            [0, 1, 2, 3, 4, 5, 8, 9].map(tree_depth),
            [0, 0, 1, 2, 2, 3, 3, 4]
        );
    }

    #[test]
    fn gadget_depths() {
        let t = |s: &str| s.parse::<PauliTerm>().unwrap();
        let g = pauli_gadget(&t("+1 Z3"), 0.2).unwrap();
        assert_eq!((g.two_qubit_depth(), g.gate_count()), (0, 1));
        let g = pauli_gadget(&t("+1 X0 Y1 Z2 Z5"), 0.2).unwrap();
        assert_eq!(g.two_qubit_depth(), 4);
        let g = pauli_gadget(&t("+1 Z0 Z1 Z2 Z3 Z4 Z5 Z6 Z7"), 0.2).unwrap();
        assert_eq!(g.two_qubit_depth(), 6);
        let g = pauli_gadget(&t("-0.5"), 0.2).unwrap();
        assert!(g.is_empty());
        assert!((g.global_phase - 0.1).abs() < 1e-15);
        assert!(pauli_gadget(&t("+i1 X0"), 0.2).is_err());
    }

    #[test]
    fn fanout_depths() {
        assert_eq!(cz_fanout(0, &[1]).unwrap().two_qubit_depth(), 1);
        assert_eq!(cz_fanout(0, &(1..9).collect::<Vec<_>>()).unwrap().two_qubit_depth(), 7);
        assert!(cz_fanout(0, &[]).unwrap().is_empty());
        assert!(cz_fanout(1, &[1, 2]).is_err());
    }
}
