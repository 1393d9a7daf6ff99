//! Jordan-Wigner images of physical and auxiliary fermionic modes.
//!
//! Modes are ordered site-major: all `nu + 1` registers of site 1, then all
//! registers of site 2, and so on. Register 0 is the physical mode, registers
//! `1..=nu` are auxiliary.
//!
//! With annihilation `a_p = Z_{<p} (X - iY)/2` the Majorana pair of mode `p`
//! is `c_p = a_p + a_p^† = Z_{<p} X_p` and `d_p = -i (a_p - a_p^†) = -Z_{<p} Y_p`.

use std::fmt;

use crate::error::{Error, Result};
use crate::pauli::{Letter, PauliSum, PauliTerm, Phase};

/// Site-major mode layout with `n_aux` auxiliary registers per site.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ModeLayout {
    pub n_sites: usize,
    pub n_aux: usize,
}

impl ModeLayout {
    pub fn new(n_sites: usize, n_aux: usize) -> Self {
        ModeLayout { n_sites, n_aux }
    }

    /// Registers per site, `nu + 1`.
    pub fn stride(&self) -> usize {
        self.n_aux + 1
    }

    pub fn n_qubits(&self) -> usize {
        self.stride() * self.n_sites
    }

    pub fn check_site(&self, site: usize) -> Result<()> {
        if site == 0 || site > self.n_sites {
            Err(Error::SiteOutOfRange {
                site,
                n_sites: self.n_sites,
            })
        } else {
            Ok(())
        }
    }

    pub fn check_register(&self, register: usize) -> Result<()> {
        if register > self.n_aux {
            Err(Error::RegisterOutOfRange {
                register,
                n_aux: self.n_aux,
            })
        } else {
            Ok(())
        }
    }

    /// `(site - 1)(nu + 1) + register`.
    pub fn qubit_index(&self, site: usize, register: usize) -> Result<usize> {
        self.check_site(site)?;
        self.check_register(register)?;
        Ok((site - 1) * self.stride() + register)
    }

    /// Inverse of [`qubit_index`](Self::qubit_index).
    pub fn mode_of_qubit(&self, qubit: usize) -> Option<(usize, usize)> {
        (qubit < self.n_qubits()).then(|| (qubit / self.stride() + 1, qubit % self.stride()))
    }

    pub fn physical_qubits(&self) -> Vec<usize> {
        (0..self.n_sites).map(|s| s * self.stride()).collect()
    }

    pub fn aux_qubits(&self) -> Vec<usize> {
        (0..self.n_qubits())
            .filter(|q| q % self.stride() != 0)
            .collect()
    }

    /// All qubits belonging to `site`.
    pub fn site_qubits(&self, site: usize) -> std::ops::Range<usize> {
        let base = (site - 1) * self.stride();
        base..base + self.stride()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MajoranaKind {
    C,
    D,
}

impl fmt::Display for MajoranaKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MajoranaKind::C => "c",
            MajoranaKind::D => "d",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MajoranaLabel {
    pub kind: MajoranaKind,
    pub site: usize,
    pub register: usize,
}

impl MajoranaLabel {
    pub fn c(site: usize, register: usize) -> Self {
        MajoranaLabel {
            kind: MajoranaKind::C,
            site,
            register,
        }
    }

    pub fn d(site: usize, register: usize) -> Self {
        MajoranaLabel {
            kind: MajoranaKind::D,
            site,
            register,
        }
    }

    /// Physical Majorana with 1-based index `m`: site `ceil(m/2)`, kind `c`
    /// for odd `m` and `d` for even `m`.
    pub fn from_physical_index(m: usize) -> Self {
        let site = m.div_ceil(2);
        if m % 2 == 1 {
            MajoranaLabel::c(site, 0)
        } else {
            MajoranaLabel::d(site, 0)
        }
    }
}

impl fmt::Display for MajoranaLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}^({})", self.kind, self.site, self.register)
    }
}

/// `Z` on every qubit strictly before linear position `p`.
fn z_before(p: usize) -> PauliTerm {
    PauliTerm::z_string(0..p)
}

/// The string `S_site`: `Z` on every mode of every preceding site.
pub fn jw_string(layout: &ModeLayout, site: usize) -> Result<PauliTerm> {
    layout.check_site(site)?;
    Ok(z_before((site - 1) * layout.stride()))
}

/// Jordan-Wigner image of a Majorana operator.
pub fn majorana(layout: &ModeLayout, label: MajoranaLabel) -> Result<PauliTerm> {
    let p = layout.qubit_index(label.site, label.register)?;
    Ok(match label.kind {
        MajoranaKind::C => &z_before(p) * &PauliTerm::single(p, Letter::X),
        MajoranaKind::D => {
            (&z_before(p) * &PauliTerm::single(p, Letter::Y)).times_phase(Phase::MINUS_ONE)
        }
    })
}

/// `a = (c + i d)/2`.
pub fn annihilation(layout: &ModeLayout, site: usize, register: usize) -> Result<PauliSum> {
    let c = majorana(layout, MajoranaLabel::c(site, register))?;
    let d = majorana(layout, MajoranaLabel::d(site, register))?;
    Ok(PauliSum::from_terms([
        c.scaled(0.5),
        d.scaled(0.5).times_phase(Phase::I),
    ]))
}

/// `a^† = (c - i d)/2`.
pub fn creation(layout: &ModeLayout, site: usize, register: usize) -> Result<PauliSum> {
    Ok(annihilation(layout, site, register)?.adjoint())
}

/// `n = a^† a = (1 + Z)/2` on the physical qubit of `site`.
pub fn number_op(layout: &ModeLayout, site: usize) -> Result<PauliSum> {
    let q = layout.qubit_index(site, 0)?;
    Ok(PauliSum::from_terms([
        PauliTerm::identity().scaled(0.5),
        PauliTerm::single(q, Letter::Z).scaled(0.5),
    ]))
}

/// `a_i^† a_j + a_j^† a_i` between physical modes, `i < j`.
///
/// Exact expansion gives `-1/2 (X_i X_j + Y_i Y_j)` times `Z` on every mode
/// strictly between the two physical qubits.
pub fn jw_hopping(layout: &ModeLayout, i: usize, j: usize) -> Result<PauliSum> {
    layout.check_site(i)?;
    layout.check_site(j)?;
    if i >= j {
        return Err(Error::InvalidEdge(i, j));
    }
    let ai = annihilation(layout, i, 0)?;
    let aj = annihilation(layout, j, 0)?;
    let forward = ai.adjoint().mul(&aj);
    Ok(forward.add(&forward.adjoint()))
}

/// Single-mode ladder or Majorana operator on a physical site.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModeOp {
    Create,
    Annihilate,
    MajoranaC,
    MajoranaD,
}

impl ModeOp {
    pub fn image(self, layout: &ModeLayout, site: usize, register: usize) -> Result<PauliSum> {
        match self {
            ModeOp::Create => creation(layout, site, register),
            ModeOp::Annihilate => annihilation(layout, site, register),
            ModeOp::MajoranaC => Ok(majorana(layout, MajoranaLabel::c(site, register))?.into()),
            ModeOp::MajoranaD => Ok(majorana(layout, MajoranaLabel::d(site, register))?.into()),
        }
    }
}

/// Ordered product of physical single-mode operators, leftmost first.
pub fn monomial(layout: &ModeLayout, ops: &[(usize, ModeOp)]) -> Result<PauliSum> {
    let mut acc = PauliSum::from(PauliTerm::identity());
    for &(site, op) in ops {
        acc = acc.mul(&op.image(layout, site, 0)?);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> PauliTerm {
        s.parse().unwrap()
    }

    #[test]
    fn qubit_index_is_site_major() {
        let l = ModeLayout::new(3, 2);
        assert_eq!(l.qubit_index(1, 0).unwrap(), 0);
        assert_eq!(l.qubit_index(2, 1).unwrap(), 4);
        assert_eq!(l.qubit_index(3, 2).unwrap(), 8);
        assert_eq!(l.mode_of_qubit(4), Some((2, 1)));
        assert!(l.qubit_index(4, 0).is_err());
        assert!(l.qubit_index(1, 3).is_err());
    }

    #[test]
    fn jw_string_examples() {
        assert_eq!(jw_string(&ModeLayout::new(4, 1), 1).unwrap(), PauliTerm::identity());
        assert_eq!(jw_string(&ModeLayout::new(4, 1), 2).unwrap(), t("+1 Z0 Z1"));
        assert_eq!(
            jw_string(&ModeLayout::new(4, 2), 3).unwrap(),
            t("+1 Z0 Z1 Z2 Z3 Z4 Z5")
        );
        assert!(jw_string(&ModeLayout::new(4, 2), 5).is_err());
    }

    #[test]
    fn majorana_examples() {
        let m = |n, nu, l| majorana(&ModeLayout::new(n, nu), l).unwrap();
        assert_eq!(m(1, 0, MajoranaLabel::c(1, 0)), t("+1 X0"));
        assert_eq!(m(2, 1, MajoranaLabel::c(2, 1)), t("+1 Z0 Z1 Z2 X3"));
        assert_eq!(m(2, 0, MajoranaLabel::d(1, 0)), t("-1 Y0"));
    }

    #[test]
    fn number_and_hopping() {
        let l = ModeLayout::new(2, 1);
        assert_eq!(
            number_op(&l, 2).unwrap(),
            PauliSum::from_terms([t("+0.5"), t("+0.5 Z2")])
        );
        let h = jw_hopping(&ModeLayout::new(2, 0), 1, 2).unwrap();
        assert_eq!(h, PauliSum::from_terms([t("-0.5 X0 X1"), t("-0.5 Y0 Y1")]));
        let h = jw_hopping(&ModeLayout::new(16, 1), 1, 16).unwrap();
        // Z on the 29 qubits strictly between physical qubits 0 and 30
        assert_eq!(h.max_weight(), 31);
        assert!(jw_hopping(&l, 2, 1).is_err());
    }

    #[test]
    fn physical_majorana_index_mapping() {
        assert_eq!(MajoranaLabel::from_physical_index(1), MajoranaLabel::c(1, 0));
        assert_eq!(MajoranaLabel::from_physical_index(2), MajoranaLabel::d(1, 0));
        assert_eq!(MajoranaLabel::from_physical_index(7), MajoranaLabel::c(4, 0));
    }
}
