//! Acceptance gate: one `CHECK` line per criterion, non-zero exit on failure.

mod common;

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::Instant;

use auxferm::circuit::{cz_fanout, full_depth_report, pauli_gadget, DepthParams};
use auxferm::encoder::{encode_hamiltonian, encode_model, physical_layer_sums, TermKind};
use auxferm::fermion::ModeLayout;
use auxferm::graph::{assign_layers, edge_color, stabilizer_set, verify_layer_commutation, Sign};
use auxferm::models::{
    complete_graph, cycle_graph, fermi_hubbard_model, four_fermion_terms, hopping_model,
    path_graph, random_regular_graph, sparse_syk_model,
};
use auxferm::sim::{
    commutator_lambda, commutator_lambda_encoded, equivalence_check, fit_loglog_slope,
    prepare_aux_measured, prepare_aux_oracle, schedule_unitary, stabilizer_expectations,
    trotter_error_curve, CheckLine, EquivalenceOptions, StateVector,
};
use auxferm::{Edge, InteractionGraph, PauliTerm};
use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const WEIGHT_INSTANCES: usize = 120;
const PREP_TOL: f64 = 1e-10;
const MEASURED_SEEDS: u64 = 100;
const FIDELITY_TOL: f64 = 1e-10;
const DRIFT_TOL: f64 = 1e-8;
const DRIFT_STEPS: usize = 50;
const LAMBDA_TOL: f64 = 1e-8;
const SLOPE_TARGET: f64 = -1.0;
const SLOPE_TOL: f64 = 0.2;
const GADGET_TOL: f64 = 1e-10;

/// `(d, N, seed, graph)` for every feasible `d in {2,3,4}`, `N <= 12`,
/// cycling until the instance count is reached.
fn regular_instances() -> Vec<(usize, usize, u64, InteractionGraph)> {
    let shapes: Vec<(usize, usize)> = (2..=4)
        .flat_map(|d| (5..=12).map(move |n| (d, n)))
        .filter(|&(d, n)| n * d % 2 == 0)
        .collect();
    (0..WEIGHT_INSTANCES)
        .map(|k| {
            let (d, n) = shapes[k % shapes.len()];
            let seed = 1000 + k as u64;
            (d, n, seed, random_regular_graph(n, d, seed).unwrap())
        })
        .collect()
}

fn weight_formulas() -> CheckLine {
    let mut violations = 0usize;
    let mut checked = 0usize;
    for (_, n, seed, g) in regular_instances() {
        let mut model = fermi_hubbard_model(&g, 1.0, 1.0).unwrap();
        for t in four_fermion_terms(&g, 0.5).into_iter().take(10) {
            model.push(t).unwrap();
        }
        let (_, _, enc) = encode_model(&model).unwrap();
        let syk = sparse_syk_model(2 * n, 2, seed, 1.0).unwrap();
        let (_, _, enc_syk) = encode_model(&syk).unwrap();
        for t in enc.terms.iter().chain(&enc_syk.terms) {
            checked += 1;
            let ok = match t.kind {
                TermKind::Hopping => t.weight == 2 * (t.registers[0] + 1),
                TermKind::DensityDensity => t.weight == 2,
                TermKind::FourFermion | TermKind::MajoranaQuartic => {
                    t.weight <= 4 + 2 * t.registers.iter().sum::<usize>()
                }
                TermKind::GeneralEven => unreachable!(),
            };
            violations += usize::from(!ok);
        }
    }
    assert!(checked > 1000);
    CheckLine::at_most("c01_weight_formula_violations", violations as f64, 0.0)
}

fn stabilizer_algebra() -> CheckLine {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut violations = 0usize;
    let mut graphs: Vec<InteractionGraph> = regular_instances().into_iter().map(|x| x.3).collect();
    graphs.extend((3..=8).map(|n| complete_graph(n).unwrap()));
    for g in graphs {
        let mut a = assign_layers(&edge_color(&g)).unwrap();
        for e in a.prep_order() {
            if rng.random_bool(0.5) {
                a.set_sign(e, Sign::Minus).unwrap();
            }
        }
        let layout = ModeLayout::new(g.n_vertices(), a.nu());
        let stabs = stabilizer_set(&layout, &a).unwrap();
        violations += g.n_edges().abs_diff(stabs.len());
        for (_, _, p) in &stabs {
            violations += usize::from(!p.is_hermitian());
            violations += usize::from(p * p != PauliTerm::identity());
        }
        let pairs: Vec<(Edge, PauliTerm)> = stabs.into_iter().map(|(e, _, p)| (e, p)).collect();
        violations += verify_layer_commutation(&pairs).len();
    }
    CheckLine::at_most("c02_stabilizer_algebra_violations", violations as f64, 0.0)
}

fn coloring_bound() -> CheckLine {
    let mut excess = 0usize;
    for (d, _, _, g) in regular_instances() {
        let chi = edge_color(&g).values().copied().max().unwrap_or(0);
        excess = excess.max(chi.saturating_sub(d + 1));
    }
    CheckLine::at_most("c03_colors_above_d_plus_1", excess as f64, 0.0)
}

fn preparation() -> CheckLine {
    let graphs = [
        cycle_graph(4).unwrap(),
        complete_graph(4).unwrap(),
        cycle_graph(5).unwrap(),
        cycle_graph(6).unwrap(),
        random_regular_graph(6, 3, 1).unwrap(),
    ];
    let mut worst = 0.0f64;
    for g in &graphs {
        let a = assign_layers(&edge_color(g)).unwrap();
        assert!(a.nu() <= 2);
        let layout = ModeLayout::new(g.n_vertices(), a.nu());
        let mut check = |s: &StateVector, signed: &auxferm::LayerAssignment| {
            for (_, v) in stabilizer_expectations(s, &layout, signed).unwrap() {
                worst = worst.max((v - 1.0).abs());
            }
        };
        let (s, record) = prepare_aux_oracle(&layout, &a).unwrap();
        check(&s, &record.apply_to(&a).unwrap());
        for seed in 0..MEASURED_SEEDS {
            let (s, record) = prepare_aux_measured(&layout, &a, seed).unwrap();
            check(&s, &record.apply_to(&a).unwrap());
        }
    }
    CheckLine::at_most("c04_prep_max_stabilizer_deviation", worst, PREP_TOL)
}

fn four_cycle_fh() -> (auxferm::models::FermionModel, ModeLayout, auxferm::LayerAssignment) {
    let model = fermi_hubbard_model(&cycle_graph(4).unwrap(), 1.0, 2.0).unwrap();
    let (layout, a, _) = encode_model(&model).unwrap();
    assert_eq!(layout.n_qubits(), 8);
    (model, layout, a)
}

fn evolution_equivalence() -> CheckLine {
    let (model, layout, a) = four_cycle_fh();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst = 1.0f64;
    for _ in 0..8 {
        let opts = EquivalenceOptions {
            tau: rng.random_range(0.0..1.0),
            steps: rng.random_range(1..=10),
            fidelity_tol: FIDELITY_TOL,
            ..EquivalenceOptions::default()
        };
        let psi = StateVector::random(4, &mut rng).unwrap();
        let r = equivalence_check(&model, &layout, &a, &psi, &opts).unwrap();
        worst = worst.min(r.min_term_fidelity()).min(r.full_fidelity);
    }
    CheckLine::at_least("c05_min_fidelity", worst, 1.0 - FIDELITY_TOL)
}

fn auxiliary_invariance() -> CheckLine {
    let (model, layout, a) = four_cycle_fh();
    let psi = StateVector::random(4, &mut ChaCha8Rng::seed_from_u64(6)).unwrap();
    let opts = EquivalenceOptions {
        steps: DRIFT_STEPS,
        invariance_tol: DRIFT_TOL,
        ..EquivalenceOptions::default()
    };
    let r = equivalence_check(&model, &layout, &a, &psi, &opts).unwrap();
    CheckLine::at_most("c06_stabilizer_drift", r.stabilizer_drift, DRIFT_TOL)
}

/// Every instance compares on the encoded subspace; trees up to ten joint
/// qubits also compare on the full joint space.
fn lambda_invariance() -> CheckLine {
    let star = InteractionGraph::from_edges(4, [(1, 2), (1, 3), (1, 4)]).unwrap();
    let models = [
        (fermi_hubbard_model(&cycle_graph(4).unwrap(), 1.0, 2.0).unwrap(), false),
        (hopping_model(&cycle_graph(4).unwrap(), 0.7).unwrap(), false),
        (hopping_model(&star, 1.0).unwrap(), false),
        (hopping_model(&path_graph(5).unwrap(), 1.0).unwrap(), true),
        (fermi_hubbard_model(&path_graph(4).unwrap(), 1.0, 0.5).unwrap(), true),
        (fermi_hubbard_model(&path_graph(3).unwrap(), -0.6, 1.7).unwrap(), true),
    ];
    let mut worst = 0.0f64;
    for (model, full) in &models {
        let (layout, a, _) = encode_model(model).unwrap();
        assert!(layout.n_qubits() <= 12);
        let (_, record) = prepare_aux_oracle(&layout, &a).unwrap();
        let enc = encode_hamiltonian(model, &layout, &record.apply_to(&a).unwrap()).unwrap();
        let phys =
            physical_layer_sums(&model.terms, &enc, &ModeLayout::new(model.n_sites, 0)).unwrap();
        let l_phys = commutator_lambda(&phys, model.n_sites).unwrap();
        let l_code =
            commutator_lambda_encoded(&enc.layer_sums(), &layout, &a, &record.signs).unwrap();
        worst = worst.max((l_phys - l_code).abs());
        if *full {
            let l_full = commutator_lambda(&enc.layer_sums(), layout.n_qubits()).unwrap();
            worst = worst.max((l_phys - l_full).abs());
        }
    }
    CheckLine::at_most("c07_lambda_difference", worst, LAMBDA_TOL)
}

fn trotter_scaling() -> CheckLine {
    let (model, layout, a) = four_cycle_fh();
    let (_, record) = prepare_aux_oracle(&layout, &a).unwrap();
    let enc = encode_hamiltonian(&model, &layout, &record.apply_to(&a).unwrap()).unwrap();
    let psi = StateVector::random(4, &mut ChaCha8Rng::seed_from_u64(8)).unwrap();
    let joint = auxferm::sim::embed_physical(&psi, &layout).unwrap();
    let (start, _) = auxferm::sim::apply_aux_prep(&joint, &layout, &a).unwrap();
    let steps = [4, 8, 16, 32, 64];
    let curve = trotter_error_curve(&enc.layer_sums(), 1.0, &steps, &start).unwrap();
    let points: Vec<(f64, f64)> = curve.iter().map(|&(m, _, e)| (m as f64, e)).collect();
    let slope = fit_loglog_slope(&points).unwrap();
    CheckLine::at_most("c08_slope_deviation_from_minus_1", (slope - SLOPE_TARGET).abs(), SLOPE_TOL)
}

/// Per-step depth equal for every size, and preparation depth minus its
/// `2 nu log2 N` permutation part equal for every size.
fn depth_constancy() -> CheckLine {
    let mut step = BTreeSet::new();
    let mut prep_offset = BTreeSet::new();
    let mut violations = 0usize;
    for n in [8usize, 16, 32, 64] {
        let g = random_regular_graph(n, 3, 7).unwrap();
        let (_, a, enc) = encode_model(&fermi_hubbard_model(&g, 1.0, 1.0).unwrap()).unwrap();
        let r = full_depth_report(&enc, &a, 10, DepthParams::default()).unwrap();
        let log_n = n.trailing_zeros() as usize;
        violations += usize::from(r.permutation.depth != log_n);
        violations += usize::from(r.total_depth(10) != r.prep_depth + 10 * r.per_step_depth);
        step.insert(r.per_step_depth);
        prep_offset.insert(r.prep_depth - 2 * r.nu * log_n);
    }
    violations += step.len() - 1 + prep_offset.len() - 1;
    CheckLine::at_most("c09_depth_violations", violations as f64, 0.0)
}

fn gadget_fidelity() -> CheckLine {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut worst = 0.0f64;
    let letters = [auxferm::Letter::X, auxferm::Letter::Y, auxferm::Letter::Z];
    for k in 0..60 {
        let n = if k % 20 == 0 { 10 } else { rng.random_range(2..=7) };
        let dim = 1usize << n;
        let support: Vec<usize> = (0..n).filter(|_| rng.random_bool(0.6)).collect();
        let term = PauliTerm::from_letters(
            support.iter().map(|&q| (q, letters[rng.random_range(0..3)])),
        )
        .with_coeff(rng.random_range(-2.0..2.0));
        let angle = rng.random_range(-3.0..3.0);
        let u = schedule_unitary(&pauli_gadget(&term, angle).unwrap(), n).unwrap();
        let a = angle * term.complex_coeff().re;
        let target = identity(n) * c(a.cos(), 0.0)
            + term_matrix(&term.unit_string(), n) * c(0.0, -a.sin());
        worst = worst.max(max_abs(&(&u - &target)));

        let control = rng.random_range(0..n);
        let targets: Vec<usize> = (0..n).filter(|&q| q != control && rng.random_bool(0.5)).collect();
        let u = schedule_unitary(&cz_fanout(control, &targets).unwrap(), n).unwrap();
        let mut target = Mat::zeros(dim, dim);
        for b in 0..dim {
            let parity = targets.iter().filter(|&&t| b >> t & 1 == 1).count() % 2;
            let sign = if b >> control & 1 == 1 && parity == 1 { -1.0 } else { 1.0 };
            target[(b, b)] = c(sign, 0.0);
        }
        worst = worst.max(max_abs(&(&u - &target)));
    }
    CheckLine::at_most("c10_gadget_operator_deviation", worst, GADGET_TOL)
}

fn main() -> ExitCode {
    let criteria: [fn() -> CheckLine; 10] = [
        weight_formulas,
        stabilizer_algebra,
        coloring_bound,
        preparation,
        evolution_equivalence,
        auxiliary_invariance,
        lambda_invariance,
        trotter_scaling,
        depth_constancy,
        gadget_fidelity,
    ];
    let mut all = true;
    for f in criteria {
        let start = Instant::now();
        let line = f();
        all &= line.pass;
        println!("{line}");
        eprintln!("  {:.1}s", start.elapsed().as_secs_f64());
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
