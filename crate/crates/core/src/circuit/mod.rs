//! Gate schedules, circuit constructions and depth accounting.
//!
//! Depth always means two-qubit depth: the longest chain of multi-qubit gates
//! linked through shared qubits. Single-qubit layers are counted separately.

mod gadgets;
mod prep;
mod report;

use std::fmt;

pub use gadgets::{controlled_pauli, cz_fanout, pauli_gadget, tree_depth};
pub use prep::{
    ordered_prep_schedule, tilde_c, tilde_d, tilde_weight_formula, OrderedPrep,
};
pub use report::{
    full_depth_report, permutation_cost, trotter_step_schedule, DepthCost, DepthParams,
    DepthReport, PermutationMode, ReportRow, RowKind,
};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    H(usize),
    X(usize),
    Z(usize),
    S(usize),
    Sdg(usize),
    /// `exp(-i angle Z / 2)`
    Rz(usize, f64),
    /// `(control, target)`
    Cx(usize, usize),
    Cz(usize, usize),
    Cy(usize, usize),
    /// Computational-basis measurement.
    Measure(usize),
}

impl Gate {
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::H(q)
            | Gate::X(q)
            | Gate::Z(q)
            | Gate::S(q)
            | Gate::Sdg(q)
            | Gate::Rz(q, _)
            | Gate::Measure(q) => vec![q],
            Gate::Cx(c, t) | Gate::Cz(c, t) | Gate::Cy(c, t) => vec![c, t],
        }
    }

    pub fn is_multi_qubit(&self) -> bool {
        matches!(self, Gate::Cx(..) | Gate::Cz(..) | Gate::Cy(..))
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Gate::H(q) => write!(f, "h {q}"),
            Gate::X(q) => write!(f, "x {q}"),
            Gate::Z(q) => write!(f, "z {q}"),
            Gate::S(q) => write!(f, "s {q}"),
            Gate::Sdg(q) => write!(f, "sdg {q}"),
            Gate::Rz(q, a) => write!(f, "rz {q} {}", crate::format::sig12(a)),
            Gate::Cx(c, t) => write!(f, "cx {c} {t}"),
            Gate::Cz(c, t) => write!(f, "cz {c} {t}"),
            Gate::Cy(c, t) => write!(f, "cy {c} {t}"),
            Gate::Measure(q) => write!(f, "measure {q}"),
        }
    }
}

/// Layered circuit built as-soon-as-possible.
///
/// Each gate lands in the earliest layer after every earlier gate on its
/// qubits and after the last barrier, so layer order is a valid execution
/// order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct GateSchedule {
    n_qubits: usize,
    layers: Vec<Vec<Gate>>,
    frontier: Vec<usize>,
    floor: usize,
    barriers: Vec<usize>,
    /// Accumulated global phase angle `phi` of `exp(i phi)`.
    pub global_phase: f64,
}

impl GateSchedule {
    pub fn new(n_qubits: usize) -> Self {
        GateSchedule {
            n_qubits,
            frontier: vec![0; n_qubits],
            ..Default::default()
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    fn grow(&mut self, n: usize) {
        if n > self.n_qubits {
            self.n_qubits = n;
            self.frontier.resize(n, 0);
        }
    }

    pub fn push(&mut self, gate: Gate) {
        let qs = gate.qubits();
        self.grow(qs.iter().max().map_or(0, |m| m + 1));
        let layer = qs
            .iter()
            .map(|&q| self.frontier[q])
            .fold(self.floor, usize::max);
        if layer == self.layers.len() {
            self.layers.push(Vec::new());
        }
        self.layers[layer].push(gate);
        for q in qs {
            self.frontier[q] = layer + 1;
        }
    }

    /// Later gates start after every layer that exists now.
    pub fn barrier(&mut self) {
        self.floor = self.layers.len();
        if self.barriers.last() != Some(&self.floor) {
            self.barriers.push(self.floor);
        }
    }

    /// Appends another schedule gate by gate, merging layers where qubits allow.
    pub fn extend(&mut self, other: &GateSchedule) {
        self.grow(other.n_qubits);
        for g in other.gates() {
            self.push(*g);
        }
        self.global_phase += other.global_phase;
    }

    /// Appends another schedule strictly after this one.
    pub fn then(&mut self, other: &GateSchedule) {
        self.barrier();
        self.extend(other);
    }

    pub fn layers(&self) -> &[Vec<Gate>] {
        &self.layers
    }

    /// Gates in execution order.
    pub fn gates(&self) -> impl Iterator<Item = &Gate> {
        self.layers.iter().flatten()
    }

    pub fn gate_count(&self) -> usize {
        self.layers.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.layers.is_empty()
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    /// Longest chain of multi-qubit gates through shared qubits. A barrier
    /// joins every qubit's chain.
    pub fn two_qubit_depth(&self) -> usize {
        let mut level = vec![0usize; self.n_qubits];
        let mut depth = 0;
        for (i, layer) in self.layers.iter().enumerate() {
            if self.barriers.contains(&i) {
                level.iter_mut().for_each(|l| *l = depth);
            }
            for g in layer.iter().filter(|g| g.is_multi_qubit()) {
                let qs = g.qubits();
                let d = qs.iter().map(|&q| level[q]).max().unwrap_or(0) + 1;
                for q in qs {
                    level[q] = d;
                }
                depth = depth.max(d);
            }
        }
        depth
    }

    /// Layers holding only single-qubit gates.
    pub fn single_qubit_layers(&self) -> usize {
        self.layers
            .iter()
            .filter(|l| !l.iter().any(Gate::is_multi_qubit))
            .count()
    }

    pub fn two_qubit_count(&self) -> usize {
        self.gates().filter(|g| g.is_multi_qubit()).count()
    }

    /// Checks that no layer touches a qubit twice.
    pub fn is_layer_disjoint(&self) -> bool {
        self.layers.iter().all(|layer| {
            let mut seen = vec![false; self.n_qubits];
            layer.iter().flat_map(Gate::qubits).all(|q| !std::mem::replace(&mut seen[q], true))
        })
    }
}

impl fmt::Display for GateSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, layer) in self.layers.iter().enumerate() {
            let gates: Vec<String> = layer.iter().map(Gate::to_string).collect();
            writeln!(f, "{i}: {}", gates.join("; "))?;
        }
        Ok(())
    }
}
