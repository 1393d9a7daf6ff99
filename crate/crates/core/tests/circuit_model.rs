mod common;

use auxferm::circuit::{
    controlled_pauli, cz_fanout, full_depth_report, ordered_prep_schedule, pauli_gadget,
    tilde_c, tilde_d, trotter_step_schedule, tree_depth, DepthParams, Gate, GateSchedule, RowKind,
};
use auxferm::encoder::encode_model;
use auxferm::fermion::{majorana, MajoranaLabel, ModeLayout};
use auxferm::models::{cycle_graph, fermi_hubbard_model, random_regular_graph};
use auxferm::sim::{schedule_unitary, MeasuredPrep, StateVector};
use auxferm::{PauliTerm, Phase};
use common::*;
use proptest::prelude::*;

const N: usize = 6;

fn fanout_oracle(n: usize, control: usize, targets: &[usize]) -> Mat {
    let dim = 1usize << n;
    let mut m = Mat::zeros(dim, dim);
    for b in 0..dim {
        let parity = targets.iter().filter(|&&t| b >> t & 1 == 1).count() % 2;
        let flip = b >> control & 1 == 1 && parity == 1;
        m[(b, b)] = c(if flip { -1.0 } else { 1.0 }, 0.0);
    }
    m
}

fn controlled_oracle(n: usize, control: usize, p: &PauliTerm) -> Mat {
    let dim = 1usize << n;
    let pm = term_matrix(p, n);
    let mut m = Mat::zeros(dim, dim);
    for col in 0..dim {
        for row in 0..dim {
            m[(row, col)] = if col >> control & 1 == 1 {
                pm[(row, col)]
            } else if row == col {
                c(1.0, 0.0)
            } else {
                c(0.0, 0.0)
            };
        }
    }
    m
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn gadget_matches_exponential(t in hermitian_term_strategy(N), angle in -3.0f64..3.0) {
        let s = pauli_gadget(&t, angle).unwrap();
        let u = schedule_unitary(&s, N).unwrap();
        let target = expm_dense(&term_matrix(&t, N), angle);
        prop_assert!(max_abs(&(&u - &target)) < 1e-10);
        prop_assert_eq!(s.two_qubit_depth(), 2 * tree_depth(t.weight()));
    }

    #[test]
    fn fanout_matches_controlled_z(
        control in 0usize..N,
        mask in 0u32..(1 << N),
    ) {
        let targets: Vec<usize> = (0..N).filter(|&q| q != control && mask >> q & 1 == 1).collect();
        let s = cz_fanout(control, &targets).unwrap();
        let u = schedule_unitary(&s, N).unwrap();
        prop_assert!(max_abs(&(&u - fanout_oracle(N, control, &targets))) < 1e-10);
        let expect = if targets.is_empty() { 0 } else { 2 * tree_depth(targets.len()) + 1 };
        prop_assert_eq!(s.two_qubit_depth(), expect);
    }

    #[test]
    fn controlled_pauli_matches_projector_form(
        letters in proptest::collection::btree_map(1usize..N, letter_strategy(), 0..N),
        ph in 0u8..4,
    ) {
        let p = PauliTerm::from_letters(letters).with_phase(Phase::from_exponent(ph));
        let s = controlled_pauli(0, &p).unwrap();
        let u = schedule_unitary(&s, N).unwrap();
        prop_assert!(max_abs(&(&u - controlled_oracle(N, 0, &p))) < 1e-10);
    }
}

#[test]
fn gadget_on_ten_qubits() {
    let t: PauliTerm = "-0.8 X0 Y2 Z3 X5 Y7 Z8 X9".parse().unwrap();
    let u = schedule_unitary(&pauli_gadget(&t, 0.29).unwrap(), 10).unwrap();
    // exp(-i a P) = cos a - i sin a P for a unit string P
    let a: f64 = 0.29 * -0.8;
    let p = term_matrix(&t.unit_string(), 10);
    let target = identity(10) * c(a.cos(), 0.0) + p * c(0.0, -a.sin());
    assert!(max_abs(&(&u - &target)) < 1e-10);
}

#[test]
fn fanout_on_ten_qubits() {
    let targets = [0, 1, 3, 4, 6, 7, 8, 9];
    let s = cz_fanout(5, &targets).unwrap();
    assert_eq!(s.two_qubit_depth(), 7);
    let u = schedule_unitary(&s, 10).unwrap();
    assert!(max_abs(&(&u - fanout_oracle(10, 5, &targets))) < 1e-10);
}

#[test]
fn invalid_constructions_are_rejected() {
    assert!(cz_fanout(1, &[1, 2]).is_err());
    assert!(cz_fanout(0, &[2, 2]).is_err());
    let nonherm = PauliTerm::single(0, auxferm::Letter::X).times_phase(Phase::I);
    assert!(pauli_gadget(&nonherm, 0.1).is_err());
    assert!(pauli_gadget(&PauliTerm::single(0, auxferm::Letter::X), f64::NAN).is_err());
    assert!(controlled_pauli(0, &PauliTerm::single(0, auxferm::Letter::Z)).is_err());
}

#[test]
fn schedule_layers_are_disjoint() {
    let mut s = GateSchedule::new(4);
    s.push(Gate::Cx(0, 1));
    s.push(Gate::Cx(2, 3));
    s.push(Gate::H(0));
    s.push(Gate::Cz(1, 2));
    assert!(s.is_layer_disjoint());
    assert_eq!(s.two_qubit_depth(), 2);
    assert_eq!(s.two_qubit_count(), 3);
}

#[test]
fn four_cycle_depth_report() {
    let model = fermi_hubbard_model(&cycle_graph(4).unwrap(), 1.0, 2.0).unwrap();
    let (_, a, enc) = encode_model(&model).unwrap();
    let r = full_depth_report(&enc, &a, 7, DepthParams::default()).unwrap();
    assert_eq!((r.chi, r.nu, r.prep_sites, r.padded), (2, 1, 4, false));
    assert_eq!(r.total_depth(7), r.prep_depth + 7 * r.per_step_depth);
    assert_eq!(r.per_step_depth, trotter_step_schedule(&enc, 0.3).unwrap().two_qubit_depth());
    assert_eq!(r.layer_depths.len(), 2);
    assert!(r.rows.iter().any(|row| row.kind == RowKind::Formula));
    let table = r.render_table();
    assert!(table.contains("Ordered state preparation"));
    assert!(table.contains("Full Trotter layer"));
    assert_eq!(r.render_csv().lines().count(), r.rows.len() + 1);
}

#[test]
fn per_step_depth_is_size_independent() {
    let mut step = Vec::new();
    for n in [8, 16, 32] {
        let g = random_regular_graph(n, 3, 7).unwrap();
        let (_, a, enc) = encode_model(&fermi_hubbard_model(&g, 1.0, 1.0).unwrap()).unwrap();
        let r = full_depth_report(&enc, &a, 1, DepthParams::default()).unwrap();
        step.push(r.per_step_depth);
    }
    assert!(step.windows(2).all(|w| w[0] == w[1]), "{step:?}");
}

#[test]
fn tilde_operators_are_local_to_their_block() {
    let layout = ModeLayout::new(6, 2);
    for reg in 1..=2 {
        for k in 1..=3 {
            let sites = [2 * k - 1, 2 * k];
            for op in [tilde_c(&layout, reg, k).unwrap(), tilde_d(&layout, reg, k).unwrap()] {
                assert!((&op * &op).unit_string().is_identity());
                for q in op.support() {
                    assert!(sites.contains(&layout.mode_of_qubit(q).unwrap().0));
                }
            }
        }
    }
    assert!(tilde_c(&ModeLayout::new(5, 1), 1, 1).is_err());
    assert!(tilde_c(&layout, 3, 1).is_err());
}

#[test]
fn ordered_prep_blocks_run_in_parallel() {
    for n in [4, 6, 8] {
        let layout = ModeLayout::new(n, 2);
        let p = ordered_prep_schedule(&layout, 1).unwrap();
        assert_eq!(p.ancilla_count(), n / 2);
        let max_block = p.block_depths.iter().copied().max().unwrap();
        assert_eq!(p.schedule.two_qubit_depth(), max_block);
    }
    let odd = ordered_prep_schedule(&ModeLayout::new(5, 1), 1).unwrap();
    assert!(odd.padded);
    assert_eq!(odd.n_sites, 6);
}

/// Each measured block leaves the state in the `(-1)^outcome` eigenspace of
/// `i c_{2k-1} d_{2k}` on its register.
#[test]
fn ordered_prep_fixes_block_stabilizers() {
    for n in [4, 6] {
        for nu in 1..=2 {
            let layout = ModeLayout::new(n, nu);
            for reg in 1..=nu {
                for seed in 0..12 {
                    let start = StateVector::zero(layout.n_qubits()).unwrap();
                    let run = MeasuredPrep::run(&start, &layout, reg, seed).unwrap();
                    for k in 1..=n / 2 {
                        let cm = majorana(&layout, MajoranaLabel::c(2 * k - 1, reg)).unwrap();
                        let dm = majorana(&layout, MajoranaLabel::d(2 * k, reg)).unwrap();
                        let p = (&cm * &dm).times_phase(Phase::I);
                        let expect = if run.outcomes[k - 1] == 0 { 1.0 } else { -1.0 };
                        let got = run.state.expectation(&p).unwrap();
                        assert!((got - expect).abs() < 1e-10, "N={n} nu={nu} reg={reg} k={k}: {got}");
                    }
                }
            }
        }
    }
}
