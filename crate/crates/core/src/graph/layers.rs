//! Orientation, register packing and stabilizer construction.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::{color_classes, Coloring, Edge};
use crate::error::{Error, Result};
use crate::fermion::{majorana, MajoranaLabel, ModeLayout};
use crate::pauli::{PauliTerm, Phase};

/// Stabilizer sign: `P` or `-P`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Sign {
    #[default]
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn flipped(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn from_value(v: f64) -> Sign {
        if v < 0.0 {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+1",
            Sign::Minus => "-1",
        })
    }
}

/// Coloring, per-register orientation and stabilizer signs.
///
/// Colors `2l - 1` and `2l` share auxiliary register `l`. Inside a register
/// every vertex has at most one outgoing and one incoming oriented edge.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LayerAssignment {
    chi: usize,
    nu: usize,
    color_of: BTreeMap<Edge, usize>,
    oriented: BTreeMap<Edge, (usize, usize)>,
    signs: BTreeMap<Edge, Sign>,
}

impl LayerAssignment {
    /// Builds an assignment from explicit parts and checks its invariants.
    pub fn from_parts(
        color_of: BTreeMap<Edge, usize>,
        oriented: BTreeMap<Edge, (usize, usize)>,
    ) -> Result<Self> {
        let chi = color_of.values().copied().max().unwrap_or(0);
        let a = LayerAssignment {
            chi,
            nu: chi.div_ceil(2),
            signs: color_of.keys().map(|&e| (e, Sign::Plus)).collect(),
            color_of,
            oriented,
        };
        a.validate()?;
        Ok(a)
    }

    /// Checks proper coloring, orientation coverage and the in/out property.
    pub fn validate(&self) -> Result<()> {
        let mut at_vertex = BTreeSet::new();
        for (&e, &c) in &self.color_of {
            if c == 0 || c > self.chi {
                return Err(Error::InvalidArgument(format!("color {c} on edge {e}")));
            }
            for v in [e.lo(), e.hi()] {
                if !at_vertex.insert((v, c)) {
                    return Err(Error::NotAMatching(v));
                }
            }
        }
        let mut tails = BTreeSet::new();
        let mut heads = BTreeSet::new();
        for &e in self.color_of.keys() {
            let (t, h) = self
                .oriented
                .get(&e)
                .copied()
                .ok_or(Error::MissingStabilizer(e))?;
            if Edge::new(t, h)? != e {
                return Err(Error::InvalidEdge(t, h));
            }
            let reg = self.register_of_color(self.color_of[&e]);
            if !tails.insert((reg, t)) || !heads.insert((reg, h)) {
                return Err(Error::InvalidArgument(format!(
                    "register {reg} has two edges leaving or entering a vertex at {e}"
                )));
            }
        }
        Ok(())
    }

    pub fn chi(&self) -> usize {
        self.chi
    }

    pub fn nu(&self) -> usize {
        self.nu
    }

    pub fn n_edges(&self) -> usize {
        self.color_of.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.color_of.keys().copied()
    }

    pub fn contains(&self, e: &Edge) -> bool {
        self.color_of.contains_key(e)
    }

    pub fn color_of(&self, e: &Edge) -> Option<usize> {
        self.color_of.get(e).copied()
    }

    pub fn coloring(&self) -> &Coloring {
        &self.color_of
    }

    pub fn register_of_color(&self, color: usize) -> usize {
        color.div_ceil(2)
    }

    pub fn register_of(&self, e: &Edge) -> Option<usize> {
        self.color_of(e).map(|c| self.register_of_color(c))
    }

    /// `(tail, head)` of an edge.
    pub fn orientation(&self, e: &Edge) -> Option<(usize, usize)> {
        self.oriented.get(e).copied()
    }

    pub fn sign(&self, e: &Edge) -> Sign {
        self.signs.get(e).copied().unwrap_or_default()
    }

    pub fn signs(&self) -> &BTreeMap<Edge, Sign> {
        &self.signs
    }

    pub fn set_sign(&mut self, e: Edge, s: Sign) -> Result<()> {
        if !self.contains(&e) {
            return Err(Error::MissingStabilizer(e));
        }
        self.signs.insert(e, s);
        Ok(())
    }

    /// Copy with every sign replaced from `record`; edges absent from the
    /// record keep their current sign.
    pub fn with_signs(&self, record: &BTreeMap<Edge, Sign>) -> Result<Self> {
        let mut out = self.clone();
        for (&e, &s) in record {
            out.set_sign(e, s)?;
        }
        Ok(out)
    }

    /// Edges of one color sorted by tail vertex.
    pub fn edges_of_color(&self, color: usize) -> Vec<Edge> {
        let mut es: Vec<Edge> = self
            .color_of
            .iter()
            .filter(|(_, &c)| c == color)
            .map(|(&e, _)| e)
            .collect();
        es.sort_by_key(|e| (self.oriented[e].0, *e));
        es
    }

    /// Edges in ascending `(color, tail)` order.
    pub fn prep_order(&self) -> Vec<Edge> {
        (1..=self.chi).flat_map(|c| self.edges_of_color(c)).collect()
    }
}

fn check_matching(edges: &[Edge]) -> Result<()> {
    let mut seen = BTreeSet::new();
    for e in edges {
        for v in [e.lo(), e.hi()] {
            if !seen.insert(v) {
                return Err(Error::NotAMatching(v));
            }
        }
    }
    Ok(())
}

/// Head-to-tail orientation of the union of two matchings.
///
/// Paths start at their lowest-index endpoint; cycles start at their lowest
/// vertex and move towards its lower-index neighbour.
pub fn orient_layer_pair(e_a: &[Edge], e_b: &[Edge]) -> Result<BTreeMap<Edge, (usize, usize)>> {
    check_matching(e_a)?;
    check_matching(e_b)?;
    let a_set: BTreeSet<Edge> = e_a.iter().copied().collect();
    if let Some(e) = e_b.iter().find(|e| a_set.contains(e)) {
        return Err(Error::InvalidEdge(e.lo(), e.hi()));
    }
    let mut adj: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for e in e_a.iter().chain(e_b) {
        adj.entry(e.lo()).or_default().push(e.hi());
        adj.entry(e.hi()).or_default().push(e.lo());
    }
    for n in adj.values_mut() {
        n.sort_unstable();
    }
    let mut out = BTreeMap::new();
    let mut visited = BTreeSet::new();
    let starts: Vec<usize> = adj
        .iter()
        .filter(|(_, n)| n.len() == 1)
        .map(|(&v, _)| v)
        .chain(adj.keys().copied())
        .collect();
    // endpoints (ascending) come first, so every path is entered at its lower end
    for start in starts {
        if visited.contains(&start) {
            continue;
        }
        visited.insert(start);
        let mut prev = start;
        let mut cur = adj[&start][0];
        loop {
            out.insert(Edge::new(prev, cur)?, (prev, cur));
            if !visited.insert(cur) {
                break;
            }
            match adj[&cur].iter().copied().find(|&w| w != prev) {
                Some(next) => {
                    prev = cur;
                    cur = next;
                }
                None => break,
            }
        }
    }
    Ok(out)
}

/// Packs color pairs into registers and orients each register.
pub fn assign_layers(coloring: &Coloring) -> Result<LayerAssignment> {
    let classes = color_classes(coloring);
    let chi = classes.keys().copied().max().unwrap_or(0);
    let nu = chi.div_ceil(2);
    let mut oriented = BTreeMap::new();
    let empty = Vec::new();
    for reg in 1..=nu {
        let a = classes.get(&(2 * reg - 1)).unwrap_or(&empty);
        let b = classes.get(&(2 * reg)).unwrap_or(&empty);
        oriented.extend(orient_layer_pair(a, b)?);
    }
    LayerAssignment::from_parts(coloring.clone(), oriented)
}

/// `sign * i * c_tail d_head` on the edge's register.
pub fn build_stabilizer(
    layout: &ModeLayout,
    assignment: &LayerAssignment,
    edge: Edge,
) -> Result<PauliTerm> {
    let (tail, head) = assignment
        .orientation(&edge)
        .ok_or(Error::MissingStabilizer(edge))?;
    if layout.n_aux < assignment.nu() {
        return Err(Error::TooFewRegisters {
            available: layout.n_aux,
            required: assignment.nu(),
        });
    }
    let reg = assignment
        .register_of(&edge)
        .ok_or(Error::MissingStabilizer(edge))?;
    let c = majorana(layout, MajoranaLabel::c(tail, reg))?;
    let d = majorana(layout, MajoranaLabel::d(head, reg))?;
    Ok((&c * &d)
        .times_phase(Phase::I)
        .scaled(assignment.sign(&edge).value()))
}

/// Every stabilizer of an assignment with its edge and register.
pub fn stabilizer_set(
    layout: &ModeLayout,
    assignment: &LayerAssignment,
) -> Result<Vec<(Edge, usize, PauliTerm)>> {
    assignment
        .prep_order()
        .into_iter()
        .map(|e| {
            let reg = assignment.register_of(&e).expect("edge is assigned");
            Ok((e, reg, build_stabilizer(layout, assignment, e)?))
        })
        .collect()
}

/// Pairs of stabilizers that fail to commute.
pub fn verify_layer_commutation(stabilizers: &[(Edge, PauliTerm)]) -> Vec<(Edge, Edge)> {
    let mut bad = Vec::new();
    for (i, (ea, pa)) in stabilizers.iter().enumerate() {
        for (eb, pb) in &stabilizers[i + 1..] {
            if !pa.commutes(pb) {
                bad.push((*ea, *eb));
            }
        }
    }
    bad
}
