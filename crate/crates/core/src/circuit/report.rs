//! Trotter-step schedules and the resource report.

use std::fmt::{self, Write};

use super::gadgets::pauli_gadget;
use super::prep::ordered_prep_schedule;
use super::GateSchedule;
use crate::encoder::EncodedHamiltonian;
use crate::error::{Error, Result};
use crate::graph::LayerAssignment;

/// Whether a report row comes from a constructed schedule or a cost formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowKind {
    Measured,
    Formula,
}

impl fmt::Display for RowKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RowKind::Measured => "measured",
            RowKind::Formula => "formula",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PermutationMode {
    WithMeasurement,
    WithoutMeasurement,
}

/// Cost-model parameters. Constants scale the formula rows only.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DepthParams {
    pub perm_constant: f64,
}

impl Default for DepthParams {
    fn default() -> Self {
        DepthParams { perm_constant: 1.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DepthCost {
    pub depth: usize,
    pub ancillas: usize,
    pub kind: RowKind,
}

/// Formula cost of a fermion permutation on `n_modes` sites.
///
/// With measurement: depth `c log2 N`, ancillas `(ceil(chi/2) + 1) N`.
/// Without: depth `c log2^2 (chi N)`, no ancillas. Depths are rounded up.
pub fn permutation_cost(
    n_modes: usize,
    chi: usize,
    mode: PermutationMode,
    constant: f64,
) -> Result<DepthCost> {
    if n_modes == 0 || chi == 0 || !(constant.is_finite() && constant > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "permutation cost needs positive arguments, got N={n_modes}, chi={chi}, c={constant}"
        )));
    }
    let (depth, ancillas) = match mode {
        PermutationMode::WithMeasurement => (
            constant * (n_modes as f64).log2(),
            (chi.div_ceil(2) + 1) * n_modes,
        ),
        PermutationMode::WithoutMeasurement => {
            (constant * ((chi * n_modes) as f64).log2().powi(2), 0)
        }
    };
    Ok(DepthCost {
        depth: (depth - 1e-9).ceil().max(0.0) as usize,
        ancillas,
        kind: RowKind::Formula,
    })
}

/// One schedule per layer, each the parallel composition of its terms'
/// gadgets at angle `tau`.
pub fn trotter_layer_schedules(encoded: &EncodedHamiltonian, tau: f64) -> Result<Vec<GateSchedule>> {
    encoded.check_layers()?;
    let n = encoded.layout.n_qubits();
    encoded
        .layer_ids()
        .into_iter()
        .map(|layer| {
            let mut s = GateSchedule::new(n);
            for t in encoded.layer_terms(layer) {
                for p in t.operator.terms() {
                    s.extend(&pauli_gadget(p, tau)?);
                }
            }
            Ok(s)
        })
        .collect()
}

/// One first-order Trotter step: layers in order, separated by barriers.
pub fn trotter_step_schedule(encoded: &EncodedHamiltonian, tau: f64) -> Result<GateSchedule> {
    let mut step = GateSchedule::new(encoded.layout.n_qubits());
    for layer in trotter_layer_schedules(encoded, tau)? {
        step.then(&layer);
    }
    Ok(step)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub operation: &'static str,
    pub depth: usize,
    pub ancillas: usize,
    pub kind: RowKind,
}

/// Two-qubit depths and ancilla counts for preparation plus `M` steps.
#[derive(Debug, Clone, PartialEq)]
pub struct DepthReport {
    pub n_sites: usize,
    /// Site count used by ordered preparation (even).
    pub prep_sites: usize,
    pub padded: bool,
    pub chi: usize,
    pub nu: usize,
    pub steps: usize,
    pub params: DepthParams,
    /// Ordered-preparation depth per register.
    pub ordered_prep_depths: Vec<usize>,
    pub permutation: DepthCost,
    pub permutation_unmeasured: DepthCost,
    pub layer_depths: Vec<usize>,
    pub prep_depth: usize,
    pub per_step_depth: usize,
    pub ancilla_total: usize,
    pub rows: Vec<ReportRow>,
}

impl DepthReport {
    pub fn total_depth(&self, m: usize) -> usize {
        self.prep_depth + m * self.per_step_depth
    }

    /// Aligned text table with one row per resource entry.
    pub fn render_table(&self) -> String {
        let name_w = self.rows.iter().map(|r| r.operation.len()).max().unwrap_or(9).max(9);
        let mut s = String::new();
        writeln!(s, "{:<name_w$}  {:>6}  {:>8}  kind", "operation", "depth", "ancillas")
            .expect("write to String");
        for r in &self.rows {
            writeln!(
                s,
                "{:<name_w$}  {:>6}  {:>8}  {}",
                r.operation, r.depth, r.ancillas, r.kind
            )
            .expect("write to String");
        }
        writeln!(
            s,
            "N={} chi={} nu={} prep_depth={} per_step_depth={} M={} total_depth={} ancillas={}{}",
            self.n_sites,
            self.chi,
            self.nu,
            self.prep_depth,
            self.per_step_depth,
            self.steps,
            self.total_depth(self.steps),
            self.ancilla_total,
            if self.padded { " padded=1" } else { "" }
        )
        .expect("write to String");
        s
    }

    /// `operation,depth,ancillas,kind` rows.
    pub fn render_csv(&self) -> String {
        let mut s = String::from("operation,depth,ancillas,kind\n");
        for r in &self.rows {
            writeln!(s, "{},{},{},{}", r.operation, r.depth, r.ancillas, r.kind)
                .expect("write to String");
        }
        s
    }
}

/// Assembles the report from realized schedules and formula rows.
///
/// Preparation runs every register twice (once per color of the pair), each
/// time as a permutation followed by ordered preparation:
/// `prep = sum_l 2 (D_ord(l) + D_perm)`.
pub fn full_depth_report(
    encoded: &EncodedHamiltonian,
    assignment: &LayerAssignment,
    steps: usize,
    params: DepthParams,
) -> Result<DepthReport> {
    let layout = encoded.layout;
    let n = layout.n_sites.max(1);
    let nu = assignment.nu();
    let chi = assignment.chi();
    let mut ordered_prep_depths = Vec::with_capacity(nu);
    let mut padded = layout.n_sites % 2 == 1;
    let mut prep_sites = layout.n_sites + usize::from(padded);
    for reg in 1..=nu {
        let p = ordered_prep_schedule(&layout, reg)?;
        padded = p.padded;
        prep_sites = p.n_sites;
        ordered_prep_depths.push(p.schedule.two_qubit_depth());
    }
    let permutation = permutation_cost(n, chi.max(1), PermutationMode::WithMeasurement, params.perm_constant)?;
    let permutation_unmeasured = permutation_cost(
        n,
        chi.max(1),
        PermutationMode::WithoutMeasurement,
        params.perm_constant,
    )?;
    let prep_depth = ordered_prep_depths
        .iter()
        .map(|d| 2 * (d + permutation.depth))
        .sum();
    let layer_depths: Vec<usize> = trotter_layer_schedules(encoded, 1.0)?
        .iter()
        .map(GateSchedule::two_qubit_depth)
        .collect();
    let per_step_depth = trotter_step_schedule(encoded, 1.0)?.two_qubit_depth();
    let n_sites = layout.n_sites;
    let prep_ancillas = prep_sites / 2;
    let rows = vec![
        ReportRow {
            operation: "Introducing auxiliary fermions",
            depth: 0,
            ancillas: nu * n_sites,
            kind: RowKind::Measured,
        },
        ReportRow {
            operation: "Ordered state preparation",
            depth: ordered_prep_depths.iter().copied().max().unwrap_or(0),
            ancillas: prep_ancillas,
            kind: RowKind::Measured,
        },
        ReportRow {
            operation: "Fermion permutation (with measurement)",
            depth: permutation.depth,
            ancillas: permutation.ancillas,
            kind: RowKind::Formula,
        },
        ReportRow {
            operation: "Fermion permutation (without measurement)",
            depth: permutation_unmeasured.depth,
            ancillas: permutation_unmeasured.ancillas,
            kind: RowKind::Formula,
        },
        ReportRow {
            operation: "One-color Trotter layer",
            depth: layer_depths.iter().copied().max().unwrap_or(0),
            ancillas: 0,
            kind: RowKind::Measured,
        },
        ReportRow {
            operation: "Full Trotter layer",
            depth: per_step_depth,
            ancillas: 0,
            kind: RowKind::Measured,
        },
    ];
    Ok(DepthReport {
        n_sites,
        prep_sites,
        padded,
        chi,
        nu,
        steps,
        params,
        ordered_prep_depths,
        permutation,
        permutation_unmeasured,
        layer_depths,
        prep_depth,
        per_step_depth,
        ancilla_total: (2 * nu + 1) * n_sites + prep_ancillas,
        rows,
    })
}
