//! Stabilizer-multiplied Hamiltonian terms and their color layers.
//!
//! A physical term `h` whose Jordan-Wigner image carries long strings is
//! replaced by `h * P_1 * ... * P_n`, where each `P` is the stabilizer of an
//! edge between two of the term's sites. On the joint `+1` eigenspace of the
//! stabilizers both operators act identically, while the product is supported
//! on the term's own sites only.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write};

use crate::error::{Error, Result};
use crate::fermion::{
    jw_hopping, majorana, monomial, number_op, MajoranaLabel, ModeLayout, ModeOp,
};
use crate::format::sig12;
use crate::graph::{assign_layers, build_stabilizer, edge_color, Edge, LayerAssignment};
use crate::models::FermionModel;
use crate::pauli::{PauliSum, PauliTerm};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TermKind {
    Hopping,
    DensityDensity,
    FourFermion,
    MajoranaQuartic,
    GeneralEven,
}

impl TermKind {
    /// Short tag used in summaries, e.g. `max_w_hop`.
    pub fn tag(self) -> &'static str {
        match self {
            TermKind::Hopping => "hop",
            TermKind::DensityDensity => "nn",
            TermKind::FourFermion => "4f",
            TermKind::MajoranaQuartic => "syk",
            TermKind::GeneralEven => "gen",
        }
    }

    /// Kinds whose terms are multiplied by stabilizers.
    pub fn is_transformed(self) -> bool {
        !matches!(self, TermKind::DensityDensity)
    }
}

impl fmt::Display for TermKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// A physical Hamiltonian term. Sites are 1-based; Majorana indices run over
/// `1..=2N` with `m -> site ceil(m/2)`.
///
/// Coefficients of non-Hermitian monomials multiply `M + M^†`.
#[derive(Debug, Clone, PartialEq)]
pub enum FermionTerm {
    /// `t (a_i^† a_j + a_j^† a_i)`
    Hopping { i: usize, j: usize, t: f64 },
    /// `v n_i n_j`
    DensityDensity { i: usize, j: usize, v: f64 },
    /// `u (a_i^† a_j^† a_k a_l + a_l^† a_k^† a_j a_i)`, stabilized on `(i,k)` and `(j,l)`
    FourFermion {
        i: usize,
        j: usize,
        k: usize,
        l: usize,
        u: f64,
    },
    /// `coupling * g_a g_b g_c g_d` over sorted Majorana indices
    MajoranaQuartic { m: [usize; 4], coupling: f64 },
    /// `coeff (M + M^†)` for a monomial `M`, stabilized on the given site pairs
    GeneralEven {
        ops: Vec<(usize, ModeOp)>,
        pairs: Vec<(usize, usize)>,
        coeff: f64,
    },
}

impl FermionTerm {
    pub fn kind(&self) -> TermKind {
        match self {
            FermionTerm::Hopping { .. } => TermKind::Hopping,
            FermionTerm::DensityDensity { .. } => TermKind::DensityDensity,
            FermionTerm::FourFermion { .. } => TermKind::FourFermion,
            FermionTerm::MajoranaQuartic { .. } => TermKind::MajoranaQuartic,
            FermionTerm::GeneralEven { .. } => TermKind::GeneralEven,
        }
    }

    pub fn coefficient(&self) -> f64 {
        match *self {
            FermionTerm::Hopping { t, .. } => t,
            FermionTerm::DensityDensity { v, .. } => v,
            FermionTerm::FourFermion { u, .. } => u,
            FermionTerm::MajoranaQuartic { coupling, .. } => coupling,
            FermionTerm::GeneralEven { coeff, .. } => coeff,
        }
    }

    /// Sites the term acts on, sorted.
    pub fn sites(&self) -> Vec<usize> {
        let mut s: Vec<usize> = match self {
            FermionTerm::Hopping { i, j, .. } | FermionTerm::DensityDensity { i, j, .. } => {
                vec![*i, *j]
            }
            FermionTerm::FourFermion { i, j, k, l, .. } => vec![*i, *j, *k, *l],
            FermionTerm::MajoranaQuartic { m, .. } => m.iter().map(|x| x.div_ceil(2)).collect(),
            FermionTerm::GeneralEven { ops, .. } => ops.iter().map(|(s, _)| *s).collect(),
        };
        s.sort_unstable();
        s.dedup();
        s
    }

    /// The edge whose color layer the term joins, for two-site kinds.
    pub fn primary_edge(&self) -> Option<Edge> {
        match *self {
            FermionTerm::Hopping { i, j, .. } | FermionTerm::DensityDensity { i, j, .. } => {
                Edge::new(i, j).ok()
            }
            _ => None,
        }
    }

    /// Stabilizer edges the transformation multiplies in.
    pub fn required_edges(&self) -> Result<Vec<Edge>> {
        match self {
            FermionTerm::Hopping { i, j, .. } => Ok(vec![Edge::new(*i, *j)?]),
            FermionTerm::DensityDensity { i, j, .. } => {
                Edge::new(*i, *j)?;
                Ok(Vec::new())
            }
            FermionTerm::FourFermion { i, j, k, l, .. } => {
                check_distinct(&[*i, *j, *k, *l])?;
                Ok(vec![Edge::new(*i, *k)?, Edge::new(*j, *l)?])
            }
            FermionTerm::MajoranaQuartic { m, .. } => syk_pairs(*m).map(|(_, edges)| edges),
            FermionTerm::GeneralEven { ops, pairs, .. } => {
                check_pairing(ops, pairs)?;
                pairs.iter().map(|&(a, b)| Edge::new(a, b)).collect()
            }
        }
    }

    /// Jordan-Wigner image of the untransformed term on `layout`.
    pub fn physical_operator(&self, layout: &ModeLayout) -> Result<PauliSum> {
        match *self {
            FermionTerm::Hopping { i, j, t } => Ok(jw_hopping(layout, i.min(j), i.max(j))?.scaled(t)),
            FermionTerm::DensityDensity { i, j, v } => {
                if i == j {
                    return Err(Error::InvalidEdge(i, j));
                }
                Ok(number_op(layout, i)?.mul(&number_op(layout, j)?).scaled(v))
            }
            FermionTerm::FourFermion { i, j, k, l, u } => {
                check_distinct(&[i, j, k, l])?;
                let m = monomial(
                    layout,
                    &[
                        (i, ModeOp::Create),
                        (j, ModeOp::Create),
                        (k, ModeOp::Annihilate),
                        (l, ModeOp::Annihilate),
                    ],
                )?;
                Ok(m.add(&m.adjoint()).scaled(u))
            }
            FermionTerm::MajoranaQuartic { m, coupling } => {
                let mut sorted = m;
                sorted.sort_unstable();
                check_distinct(&sorted)?;
                let mut acc = PauliTerm::identity();
                for idx in sorted {
                    if idx == 0 || idx > 2 * layout.n_sites {
                        return Err(Error::InvalidHyperedge(m));
                    }
                    acc = &acc * &majorana(layout, MajoranaLabel::from_physical_index(idx))?;
                }
                Ok(PauliSum::from(acc.scaled(coupling)))
            }
            FermionTerm::GeneralEven {
                ref ops, coeff, ..
            } => {
                let m = monomial(layout, ops)?;
                Ok(m.add(&m.adjoint()).scaled(coeff))
            }
        }
    }
}

fn check_distinct(idx: &[usize]) -> Result<()> {
    let set: BTreeSet<usize> = idx.iter().copied().collect();
    if set.len() != idx.len() {
        return Err(Error::InvalidArgument(format!(
            "indices {idx:?} must be distinct"
        )));
    }
    Ok(())
}

/// Majorana pairs of a quartic term and the site edges that need stabilizers.
fn syk_pairs(m: [usize; 4]) -> Result<([(usize, usize); 2], Vec<Edge>)> {
    let pairs = crate::graph::split_hyperedge(m)?;
    let edges = pairs
        .iter()
        .filter_map(|&(a, b)| Edge::new(a.div_ceil(2), b.div_ceil(2)).ok())
        .collect();
    Ok((pairs, edges))
}

fn check_pairing(ops: &[(usize, ModeOp)], pairs: &[(usize, usize)]) -> Result<()> {
    if ops.is_empty() || ops.len() % 2 != 0 {
        return Err(Error::InvalidArgument(
            "general term needs an even, non-zero number of modes".into(),
        ));
    }
    let sites: Vec<usize> = ops.iter().map(|(s, _)| *s).collect();
    check_distinct(&sites)?;
    let covered: Vec<usize> = pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
    check_distinct(&covered)?;
    let a: BTreeSet<usize> = sites.into_iter().collect();
    let b: BTreeSet<usize> = covered.into_iter().collect();
    if a != b {
        return Err(Error::InvalidArgument(format!(
            "pairing {pairs:?} does not cover the term's sites {a:?}"
        )));
    }
    Ok(())
}

fn stabilizer_product(
    layout: &ModeLayout,
    assignment: &LayerAssignment,
    edges: &[Edge],
) -> Result<PauliTerm> {
    edges.iter().try_fold(PauliTerm::identity(), |acc, &e| {
        Ok(&acc * &build_stabilizer(layout, assignment, e)?)
    })
}

fn register(assignment: &LayerAssignment, e: &Edge) -> Result<usize> {
    assignment.register_of(e).ok_or(Error::MissingStabilizer(*e))
}

/// `t (a_i^† a_j + h.c.) P_ij`, weight `2(l + 1)` on register `l`.
pub fn transform_hopping(
    layout: &ModeLayout,
    assignment: &LayerAssignment,
    i: usize,
    j: usize,
    t: f64,
) -> Result<PauliSum> {
    let term = FermionTerm::Hopping { i, j, t };
    transform_term(layout, assignment, &term)
}

/// `(v/4)(1 + Z_i)(1 + Z_j)`; already local, no stabilizer involved.
pub fn transform_density_density(layout: &ModeLayout, i: usize, j: usize, v: f64) -> Result<PauliSum> {
    FermionTerm::DensityDensity { i, j, v }.physical_operator(layout)
}

/// `u h_ijkl P_ik P_jl`.
pub fn transform_four_fermion(
    layout: &ModeLayout,
    assignment: &LayerAssignment,
    ijkl: [usize; 4],
    u: f64,
) -> Result<PauliSum> {
    let [i, j, k, l] = ijkl;
    transform_term(layout, assignment, &FermionTerm::FourFermion { i, j, k, l, u })
}

/// `J g_a g_b g_c g_d P_ab P_cd` over sorted Majorana indices; same-site
/// pairs need no stabilizer.
pub fn transform_syk_quartic(
    layout: &ModeLayout,
    assignment: &LayerAssignment,
    m: [usize; 4],
    coupling: f64,
) -> Result<PauliSum> {
    transform_term(layout, assignment, &FermionTerm::MajoranaQuartic { m, coupling })
}

/// `coeff (M + M^†) P_1 ... P_n` for a monomial on `2n` distinct sites.
pub fn transform_general_even(
    layout: &ModeLayout,
    assignment: &LayerAssignment,
    ops: &[(usize, ModeOp)],
    pairs: &[(usize, usize)],
    coeff: f64,
) -> Result<PauliSum> {
    let term = FermionTerm::GeneralEven {
        ops: ops.to_vec(),
        pairs: pairs.to_vec(),
        coeff,
    };
    transform_term(layout, assignment, &term)
}

/// Physical image times the required stabilizers, with a support check.
pub fn transform_term(
    layout: &ModeLayout,
    assignment: &LayerAssignment,
    term: &FermionTerm,
) -> Result<PauliSum> {
    let edges = term.required_edges()?;
    for e in &edges {
        if !assignment.contains(e) {
            return Err(Error::MissingStabilizer(*e));
        }
    }
    let physical = term.physical_operator(layout)?;
    let product = stabilizer_product(layout, assignment, &edges)?;
    let out = physical.mul_term(&product);
    let sites = term.sites();
    if let Some(q) = out
        .support()
        .into_iter()
        .find(|&q| !sites.contains(&layout.mode_of_qubit(q).map_or(0, |m| m.0)))
    {
        return Err(Error::InvalidArgument(format!(
            "transformed {} term leaks onto qubit {q}",
            term.kind()
        )));
    }
    if !out.is_hermitian() {
        return Err(Error::NonHermitian(out.to_string()));
    }
    Ok(out)
}

/// Weight predicted for a transformed term from its stabilizer registers.
///
/// Exact for hopping, an upper bound otherwise. Same-site SYK pairs count as
/// register 0.
pub fn formula_weight(term: &FermionTerm, assignment: &LayerAssignment) -> Result<usize> {
    let regs = |edges: &[Edge]| -> Result<Vec<usize>> {
        edges.iter().map(|e| register(assignment, e)).collect()
    };
    Ok(match term {
        FermionTerm::Hopping { .. } => {
            let l = regs(&term.required_edges()?)?[0];
            2 * (l + 1)
        }
        FermionTerm::DensityDensity { .. } => 2,
        FermionTerm::FourFermion { .. } => {
            let r = regs(&term.required_edges()?)?;
            4 + 2 * r[0] + 2 * r[1]
        }
        FermionTerm::MajoranaQuartic { m, .. } => {
            let (pairs, _) = syk_pairs(*m)?;
            let mut w = 4;
            for (a, b) in pairs {
                if let Ok(e) = Edge::new(a.div_ceil(2), b.div_ceil(2)) {
                    w += 2 * register(assignment, &e)?;
                }
            }
            w
        }
        FermionTerm::GeneralEven { pairs, .. } => {
            let r = regs(&term.required_edges()?)?;
            2 * pairs.len() + 2 * r.iter().sum::<usize>()
        }
    })
}

/// The `2n + sum(l)` count quoted for general even terms, reported next to
/// the `2n + 2 sum(l)` bound that actual weights satisfy.
pub fn single_count_weight(term: &FermionTerm, assignment: &LayerAssignment) -> Result<usize> {
    let edges = term.required_edges()?;
    let sum: usize = edges
        .iter()
        .map(|e| register(assignment, e))
        .sum::<Result<usize>>()?;
    Ok(2 * term.sites().len().div_ceil(2).max(edges.len()) + sum)
}

/// One transformed term with its audit data.
#[derive(Debug, Clone, PartialEq)]
pub struct EncodedTerm {
    pub index: usize,
    pub kind: TermKind,
    pub layer: usize,
    pub stabilizers: Vec<Edge>,
    pub registers: Vec<usize>,
    pub operator: PauliSum,
    pub weight: usize,
    pub formula_weight: usize,
}

/// Transformed Hamiltonian grouped into sequential layers.
#[derive(Debug, Clone, PartialEq)]
pub struct EncodedHamiltonian {
    pub layout: ModeLayout,
    pub terms: Vec<EncodedTerm>,
    layers: BTreeMap<usize, Vec<usize>>,
}

impl EncodedHamiltonian {
    /// Layer ids in application order.
    pub fn layer_ids(&self) -> Vec<usize> {
        self.layers.keys().copied().collect()
    }

    pub fn n_layers(&self) -> usize {
        self.layers.len()
    }

    /// Terms of one layer.
    pub fn layer_terms(&self, layer: usize) -> Vec<&EncodedTerm> {
        self.layers
            .get(&layer)
            .map(|idx| idx.iter().map(|&i| &self.terms[i]).collect())
            .unwrap_or_default()
    }

    pub fn layer_sum(&self, layer: usize) -> PauliSum {
        PauliSum::from_terms(
            self.layer_terms(layer)
                .into_iter()
                .flat_map(|t| t.operator.terms().iter().cloned()),
        )
    }

    /// Per-layer sums in application order.
    pub fn layer_sums(&self) -> Vec<PauliSum> {
        self.layer_ids().into_iter().map(|l| self.layer_sum(l)).collect()
    }

    pub fn total(&self) -> PauliSum {
        PauliSum::from_terms(
            self.terms
                .iter()
                .flat_map(|t| t.operator.terms().iter().cloned()),
        )
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest Pauli weight per term kind.
    pub fn max_weight_by_kind(&self) -> BTreeMap<TermKind, usize> {
        let mut out = BTreeMap::new();
        for t in &self.terms {
            let w = out.entry(t.kind).or_insert(0);
            *w = (*w).max(t.weight);
        }
        out
    }

    /// Dump text: `layer <l> weight <w> <pauli-term>` per Pauli term.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        for (layer, idx) in &self.layers {
            for &i in idx {
                for p in self.terms[i].operator.terms() {
                    writeln!(
                        s,
                        "layer {layer} weight {} {}",
                        p.weight(),
                        p.render_with(sig12)
                    )
                    .expect("write to String");
                }
            }
        }
        s
    }

    /// Audit table: one row per term with actual and predicted weights.
    pub fn audit_table(&self) -> String {
        let mut s = String::from("term  kind  layer  registers  weight  formula\n");
        for t in &self.terms {
            let regs: Vec<String> = t.registers.iter().map(|r| r.to_string()).collect();
            writeln!(
                s,
                "{:<5} {:<5} {:<6} {:<10} {:<7} {}",
                t.index,
                t.kind.tag(),
                t.layer,
                if regs.is_empty() { "-".to_string() } else { regs.join(",") },
                t.weight,
                t.formula_weight
            )
            .expect("write to String");
        }
        s
    }

    /// Checks that terms sharing a layer are support-disjoint, except terms
    /// on the same edge, which must commute.
    pub fn check_layers(&self) -> Result<()> {
        for (&layer, idx) in &self.layers {
            for (a, &i) in idx.iter().enumerate() {
                for &j in &idx[a + 1..] {
                    let (ti, tj) = (&self.terms[i], &self.terms[j]);
                    let si: BTreeSet<usize> = ti.operator.support().into_iter().collect();
                    if tj.operator.support().iter().all(|q| !si.contains(q)) {
                        continue;
                    }
                    let same_edge = !ti.stabilizers.is_empty() || !tj.stabilizers.is_empty();
                    let shared = edge_key(ti, &self.layout) == edge_key(tj, &self.layout);
                    let commute = ti.operator.commutator(&tj.operator).is_empty();
                    if !(same_edge && shared && commute) {
                        return Err(Error::LayerOverlap {
                            layer,
                            first: ti.index,
                            second: tj.index,
                        });
                    }
                }
            }
        }
        Ok(())
    }
}

/// Sites touched by a term, as a grouping key for same-edge terms.
fn edge_key(t: &EncodedTerm, layout: &ModeLayout) -> Vec<usize> {
    let mut sites: Vec<usize> = t
        .operator
        .support()
        .into_iter()
        .filter_map(|q| layout.mode_of_qubit(q).map(|m| m.0))
        .collect();
    sites.dedup();
    sites
}

/// Transforms every term and groups them into layers.
///
/// Hopping and density terms join the layer of their edge's color. Other
/// terms go to the first layer whose existing terms they do not touch,
/// opening new layers after the last color when needed.
pub fn encode_hamiltonian(
    model: &FermionModel,
    layout: &ModeLayout,
    assignment: &LayerAssignment,
) -> Result<EncodedHamiltonian> {
    encode_terms(&model.terms, layout, assignment)
}

pub fn encode_terms(
    terms: &[FermionTerm],
    layout: &ModeLayout,
    assignment: &LayerAssignment,
) -> Result<EncodedHamiltonian> {
    let mut encoded = Vec::with_capacity(terms.len());
    for (index, term) in terms.iter().enumerate() {
        let operator = transform_term(layout, assignment, term)?;
        let stabilizers = term.required_edges()?;
        let registers = stabilizers
            .iter()
            .map(|e| register(assignment, e))
            .collect::<Result<Vec<_>>>()?;
        encoded.push(EncodedTerm {
            index,
            kind: term.kind(),
            layer: 0,
            weight: operator.max_weight(),
            formula_weight: formula_weight(term, assignment)?,
            stabilizers,
            registers,
            operator,
        });
    }
    let mut layers: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    let mut supports: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
    let mut deferred = Vec::new();
    for (i, (term, enc)) in terms.iter().zip(&mut encoded).enumerate() {
        match term.primary_edge().and_then(|e| assignment.color_of(&e)) {
            Some(color) => {
                enc.layer = color;
                layers.entry(color).or_default().push(i);
                supports
                    .entry(color)
                    .or_default()
                    .extend(enc.operator.support());
            }
            None => deferred.push(i),
        }
    }
    for i in deferred {
        let support = encoded[i].operator.support();
        let mut layer = 1;
        while supports
            .get(&layer)
            .is_some_and(|s| support.iter().any(|q| s.contains(q)))
        {
            layer += 1;
        }
        encoded[i].layer = layer;
        layers.entry(layer).or_default().push(i);
        supports.entry(layer).or_default().extend(support);
    }
    for idx in layers.values_mut() {
        idx.sort_unstable();
    }
    let enc = EncodedHamiltonian {
        layout: *layout,
        terms: encoded,
        layers,
    };
    enc.check_layers()?;
    Ok(enc)
}

/// Colors the model's site graph, assigns registers and encodes every term.
pub fn encode_model(model: &FermionModel) -> Result<(ModeLayout, LayerAssignment, EncodedHamiltonian)> {
    let graph = model.graph();
    let assignment = assign_layers(&edge_color(&graph))?;
    let layout = ModeLayout::new(model.n_sites, assignment.nu());
    let encoded = encode_hamiltonian(model, &layout, &assignment)?;
    Ok((layout, assignment, encoded))
}

/// Physical (untransformed) layer sums on `layout`, grouped like `encoded`.
pub fn physical_layer_sums(
    terms: &[FermionTerm],
    encoded: &EncodedHamiltonian,
    layout: &ModeLayout,
) -> Result<Vec<PauliSum>> {
    encoded
        .layer_ids()
        .into_iter()
        .map(|l| {
            let mut acc = PauliSum::zero();
            for t in encoded.layer_terms(l) {
                acc = acc.add(&terms[t.index].physical_operator(layout)?);
            }
            Ok(acc)
        })
        .collect()
}
