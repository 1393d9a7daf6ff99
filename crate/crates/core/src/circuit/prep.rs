//! Ordered auxiliary-state preparation with local string operators.
//!
//! For a register whose stabilizers pair sites `(2k-1, 2k)`, the product of
//! `(c_{2k-1} - i d_{2k})` factors can be rewritten with operators whose
//! strings stay on the two sites of their block. Each block is realized as a
//! controlled circuit on its own ancilla, so all blocks run in parallel.

use super::gadgets::controlled_pauli;
use super::{Gate, GateSchedule};
use crate::error::{Error, Result};
use crate::fermion::ModeLayout;
use crate::pauli::{Letter, PauliTerm, Phase};

fn site_z(layout: &ModeLayout, site: usize, regs: std::ops::Range<usize>) -> PauliTerm {
    let base = (site - 1) * layout.stride();
    PauliTerm::z_string(regs.map(|r| base + r))
}

fn check_block(layout: &ModeLayout, register: usize, k: usize) -> Result<()> {
    if register == 0 || register > layout.n_aux {
        return Err(Error::RegisterOutOfRange {
            register,
            n_aux: layout.n_aux,
        });
    }
    if layout.n_sites % 2 != 0 {
        return Err(Error::InvalidArgument(format!(
            "ordered preparation needs an even site count, got {}",
            layout.n_sites
        )));
    }
    if k == 0 || 2 * k > layout.n_sites {
        return Err(Error::SiteOutOfRange {
            site: 2 * k,
            n_sites: layout.n_sites,
        });
    }
    Ok(())
}

/// Local form of `c_{2k-1}` on `register`:
/// `X Z_{<l} (Z_{all})^(N/2 + 1 - k)` on site `2k - 1`.
pub fn tilde_c(layout: &ModeLayout, register: usize, k: usize) -> Result<PauliTerm> {
    check_block(layout, register, k)?;
    let a = 2 * k - 1;
    let mut op = &PauliTerm::single(layout.qubit_index(a, register)?, Letter::X)
        * &site_z(layout, a, 0..register);
    if (layout.n_sites / 2 + 1 - k) % 2 == 1 {
        op = &op * &site_z(layout, a, 0..layout.stride());
    }
    Ok(op)
}

/// Local form of `d_{2k}` on `register`:
/// `-Y Z_{2k-1, all} Z_{2k, <l} (Z_{2k, all})^(N/2 - k)`.
pub fn tilde_d(layout: &ModeLayout, register: usize, k: usize) -> Result<PauliTerm> {
    check_block(layout, register, k)?;
    let (a, b) = (2 * k - 1, 2 * k);
    let mut op = PauliTerm::single(layout.qubit_index(b, register)?, Letter::Y)
        .times_phase(Phase::MINUS_ONE);
    op = &op * &site_z(layout, a, 0..layout.stride());
    op = &op * &site_z(layout, b, 0..register);
    if (layout.n_sites / 2 - k) % 2 == 1 {
        op = &op * &site_z(layout, b, 0..layout.stride());
    }
    Ok(op)
}

/// The `(min(l, nu - l), min(l + nu, 2 nu - l))` weights quoted for the
/// local operators, for comparison with the constructed ones.
pub fn tilde_weight_formula(register: usize, nu: usize) -> (usize, usize) {
    (
        register.min(nu.saturating_sub(register)),
        (register + nu).min((2 * nu).saturating_sub(register)),
    )
}

/// Ordered preparation circuit for one register.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderedPrep {
    pub schedule: GateSchedule,
    pub register: usize,
    /// Site count after padding to an even number.
    pub n_sites: usize,
    pub padded: bool,
    /// Ancilla qubit of each block, `k = 1..=N/2`.
    pub ancillas: Vec<usize>,
    /// Two-qubit depth of each block on its own.
    pub block_depths: Vec<usize>,
}

impl OrderedPrep {
    pub fn ancilla_count(&self) -> usize {
        self.ancillas.len()
    }

    /// Layout the schedule acts on, including any padding site.
    pub fn layout(&self, n_aux: usize) -> ModeLayout {
        ModeLayout::new(self.n_sites, n_aux)
    }
}

/// Blocks `H X C(c~) X C(-i d~) H measure` on ancilla `k`, in parallel.
///
/// Odd site counts get one inert padding site. Ancillas follow the padded
/// layout's qubits.
pub fn ordered_prep_schedule(layout: &ModeLayout, register: usize) -> Result<OrderedPrep> {
    let padded = layout.n_sites % 2 == 1;
    let lay = ModeLayout::new(layout.n_sites + usize::from(padded), layout.n_aux);
    if register == 0 || register > lay.n_aux {
        return Err(Error::RegisterOutOfRange {
            register,
            n_aux: lay.n_aux,
        });
    }
    let n_blocks = lay.n_sites / 2;
    let mut schedule = GateSchedule::new(lay.n_qubits() + n_blocks);
    let mut ancillas = Vec::with_capacity(n_blocks);
    let mut block_depths = Vec::with_capacity(n_blocks);
    for k in 1..=n_blocks {
        let anc = lay.n_qubits() + k - 1;
        let c = tilde_c(&lay, register, k)?;
        let d = tilde_d(&lay, register, k)?.times_phase(Phase::MINUS_I);
        let mut block = GateSchedule::new(anc + 1);
        block.push(Gate::H(anc));
        block.push(Gate::X(anc));
        block.extend(&controlled_pauli(anc, &c)?);
        block.push(Gate::X(anc));
        block.extend(&controlled_pauli(anc, &d)?);
        block.push(Gate::H(anc));
        block.push(Gate::Measure(anc));
        block_depths.push(block.two_qubit_depth());
        schedule.extend(&block);
        ancillas.push(anc);
    }
    Ok(OrderedPrep {
        schedule,
        register,
        n_sites: lay.n_sites,
        padded,
        ancillas,
        block_depths,
    })
}
