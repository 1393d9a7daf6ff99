//! Model generators and the model file format.
//!
//! ```text
//! # Fermi-Hubbard on a triangle
//! model fermi_hubbard
//! modes 3
//! hop 1 2 1.0
//! nn 1 2 2.0
//! ```
//!
//! `hop i j t`, `nn i j V` and `ff i j k l U` take 1-based sites;
//! `syk a b c d J` takes 1-based Majorana indices in `1..=2N`.

use std::collections::BTreeSet;
use std::fmt::{self, Write};
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::encoder::FermionTerm;
use crate::error::{Error, Result};
use crate::format::sig12;
use crate::graph::io::{content_lines, parse_err, parse_usize};
use crate::graph::{Edge, InteractionGraph, InteractionHypergraph};

/// Attempts per sampler before giving up.
pub const MAX_ATTEMPTS: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelKind {
    Hopping,
    FermiHubbard,
    SparseSyk,
}

impl ModelKind {
    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Hopping => "hopping",
            ModelKind::FermiHubbard => "fermi_hubbard",
            ModelKind::SparseSyk => "sparse_syk",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hopping" | "hop" => Ok(ModelKind::Hopping),
            "fermi_hubbard" | "fh" => Ok(ModelKind::FermiHubbard),
            "sparse_syk" | "syk" => Ok(ModelKind::SparseSyk),
            other => Err(Error::InvalidArgument(format!("unknown model kind {other:?}"))),
        }
    }
}

/// A fermionic Hamiltonian on `n_sites` modes.
#[derive(Debug, Clone, PartialEq)]
pub struct FermionModel {
    pub kind: ModelKind,
    pub n_sites: usize,
    pub terms: Vec<FermionTerm>,
    /// Majorana hypergraph for SYK models.
    pub hypergraph: Option<InteractionHypergraph>,
}

impl FermionModel {
    pub fn new(kind: ModelKind, n_sites: usize) -> Self {
        FermionModel {
            kind,
            n_sites,
            terms: Vec::new(),
            hypergraph: None,
        }
    }

    /// Adds a term after range and finiteness checks.
    pub fn push(&mut self, term: FermionTerm) -> Result<()> {
        if !term.coefficient().is_finite() {
            return Err(Error::InvalidArgument(format!(
                "non-finite coupling in {term:?}"
            )));
        }
        if let FermionTerm::MajoranaQuartic { m, .. } = term {
            if m.iter().any(|&x| x == 0 || x > 2 * self.n_sites) {
                return Err(Error::InvalidHyperedge(m));
            }
        }
        for s in term.sites() {
            if s == 0 || s > self.n_sites {
                return Err(Error::SiteOutOfRange {
                    site: s,
                    n_sites: self.n_sites,
                });
            }
        }
        term.required_edges()?;
        self.terms.push(term);
        Ok(())
    }

    /// Site graph: stabilizer edges of every term plus the edges of two-site
    /// terms.
    pub fn graph(&self) -> InteractionGraph {
        let mut g = InteractionGraph::new(self.n_sites);
        for t in &self.terms {
            let edges = t.required_edges().unwrap_or_default();
            for e in edges.into_iter().chain(t.primary_edge()) {
                g.add_edge(e.lo(), e.hi()).expect("term sites checked on insert");
            }
        }
        g
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Simple `d`-regular graph on `n` vertices from the pairing model.
///
/// Each attempt shuffles `n d` stubs with its own ChaCha stream and pairs
/// them up; attempts with loops or repeated edges are rejected.
pub fn random_regular_graph(n: usize, d: usize, seed: u64) -> Result<InteractionGraph> {
    if (n * d) % 2 != 0 || (d >= n && d > 0) {
        return Err(Error::Infeasible(format!(
            "no simple {d}-regular graph on {n} vertices"
        )));
    }
    let mut stubs: Vec<usize> = (1..=n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
    for attempt in 0..MAX_ATTEMPTS {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(attempt as u64);
        stubs.shuffle(&mut rng);
        let mut g = InteractionGraph::new(n);
        let ok = stubs
            .chunks_exact(2)
            .all(|p| p[0] != p[1] && g.add_edge(p[0], p[1]).unwrap_or(false));
        if ok {
            return Ok(g);
        }
    }
    Err(Error::RejectionBudget(MAX_ATTEMPTS))
}

pub fn cycle_graph(n: usize) -> Result<InteractionGraph> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!("cycle needs 3 vertices, got {n}")));
    }
    InteractionGraph::from_edges(n, (1..=n).map(|v| (v, v % n + 1)))
}

pub fn path_graph(n: usize) -> Result<InteractionGraph> {
    InteractionGraph::from_edges(n, (1..n).map(|v| (v, v + 1)))
}

pub fn complete_graph(n: usize) -> Result<InteractionGraph> {
    InteractionGraph::from_edges(n, (1..=n).flat_map(|a| (a + 1..=n).map(move |b| (a, b))))
}

/// The eight-site example graph with a degree-4 pair of vertices.
pub fn example_graph_8() -> InteractionGraph {
    const EDGES: [(usize, usize); 13] = [
        (1, 2),
        (1, 6),
        (1, 8),
        (2, 3),
        (2, 8),
        (3, 4),
        (3, 8),
        (4, 5),
        (4, 7),
        (5, 6),
        (5, 7),
        (6, 7),
        (7, 8),
    ];
    InteractionGraph::from_edges(8, EDGES).expect("static edge list")
}

/// One hopping term per edge.
pub fn hopping_model(graph: &InteractionGraph, t: f64) -> Result<FermionModel> {
    let mut m = FermionModel::new(ModelKind::Hopping, graph.n_vertices());
    for e in graph.edges() {
        m.push(FermionTerm::Hopping {
            i: e.lo(),
            j: e.hi(),
            t,
        })?;
    }
    Ok(m)
}

/// One hopping and one density-density term per edge; `v = 0` omits the
/// interaction.
pub fn fermi_hubbard_model(graph: &InteractionGraph, t: f64, v: f64) -> Result<FermionModel> {
    let mut m = hopping_model(graph, t)?;
    m.kind = ModelKind::FermiHubbard;
    if v != 0.0 {
        for e in graph.edges() {
            m.push(FermionTerm::DensityDensity {
                i: e.lo(),
                j: e.hi(),
                v,
            })?;
        }
    }
    Ok(m)
}

/// `d`-regular 4-uniform hypergraph on `n_majorana` vertices from the
/// configuration model.
pub fn random_regular_hypergraph(n_majorana: usize, d: usize, seed: u64) -> Result<InteractionHypergraph> {
    if n_majorana % 2 != 0 || (n_majorana * d) % 4 != 0 || (d > 0 && n_majorana < 4) {
        return Err(Error::Infeasible(format!(
            "no {d}-regular 4-uniform hypergraph on {n_majorana} Majoranas"
        )));
    }
    let mut stubs: Vec<usize> = (1..=n_majorana)
        .flat_map(|v| std::iter::repeat_n(v, d))
        .collect();
    'attempt: for attempt in 0..MAX_ATTEMPTS {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(attempt as u64);
        stubs.shuffle(&mut rng);
        let mut h = InteractionHypergraph::new(n_majorana);
        for chunk in stubs.chunks_exact(4) {
            let e = [chunk[0], chunk[1], chunk[2], chunk[3]];
            if !matches!(h.add_hyperedge(e), Ok(true)) {
                continue 'attempt;
            }
        }
        return Ok(h);
    }
    Err(Error::RejectionBudget(MAX_ATTEMPTS))
}

/// Sparse SYK model: one quartic term per hyperedge with coupling uniform on
/// `[-scale, scale]`.
pub fn sparse_syk_model(n_majorana: usize, d: usize, seed: u64, scale: f64) -> Result<FermionModel> {
    if !scale.is_finite() || scale < 0.0 {
        return Err(Error::InvalidArgument(format!("coupling scale {scale}")));
    }
    let h = random_regular_hypergraph(n_majorana, d, seed)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(u64::MAX);
    let mut m = FermionModel::new(ModelKind::SparseSyk, n_majorana / 2);
    for &e in h.hyperedges() {
        let coupling = rng.random_range(-scale..=scale);
        m.push(FermionTerm::MajoranaQuartic { m: e, coupling })?;
    }
    m.hypergraph = Some(h);
    Ok(m)
}

/// Four-fermion terms `a_i^† a_j^† a_k a_l + h.c.` for every pair of
/// disjoint edges `(i, k)`, `(j, l)` of the graph.
pub fn four_fermion_terms(graph: &InteractionGraph, u: f64) -> Vec<FermionTerm> {
    let edges: Vec<Edge> = graph.edges().collect();
    let mut out = Vec::new();
    for (a, ea) in edges.iter().enumerate() {
        for eb in &edges[a + 1..] {
            if !ea.shares_vertex(eb) {
                out.push(FermionTerm::FourFermion {
                    i: ea.lo(),
                    j: eb.lo(),
                    k: ea.hi(),
                    l: eb.hi(),
                    u,
                });
            }
        }
    }
    out
}

/// Parsed `KIND:N=..,d=..,seed=..` generator description.
///
/// Kinds are `hop`, `fh` and `syk`; for `syk`, `N` counts Majoranas. Optional
/// keys `t`, `V` and `J` default to 1.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorSpec {
    pub kind: ModelKind,
    pub n: usize,
    pub d: usize,
    pub seed: u64,
    pub t: f64,
    pub v: f64,
    pub j: f64,
}

impl GeneratorSpec {
    pub fn generate(&self) -> Result<FermionModel> {
        match self.kind {
            ModelKind::Hopping => hopping_model(&random_regular_graph(self.n, self.d, self.seed)?, self.t),
            ModelKind::FermiHubbard => fermi_hubbard_model(
                &random_regular_graph(self.n, self.d, self.seed)?,
                self.t,
                self.v,
            ),
            ModelKind::SparseSyk => sparse_syk_model(self.n, self.d, self.seed, self.j),
        }
    }

    /// Same spec at a different size.
    pub fn with_n(&self, n: usize) -> Self {
        GeneratorSpec { n, ..self.clone() }
    }
}

impl FromStr for GeneratorSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |m: String| Error::InvalidArgument(format!("generator spec {s:?}: {m}"));
        let (kind, rest) = s.split_once(':').ok_or_else(|| bad("missing `:`".into()))?;
        let kind = match kind {
            "hop" => ModelKind::Hopping,
            "fh" => ModelKind::FermiHubbard,
            "syk" => ModelKind::SparseSyk,
            other => return Err(bad(format!("unknown kind {other:?}"))),
        };
        let mut spec = GeneratorSpec {
            kind,
            n: 0,
            d: 0,
            seed: 0,
            t: 1.0,
            v: 1.0,
            j: 1.0,
        };
        let mut seen = BTreeSet::new();
        for kv in rest.split(',').filter(|p| !p.is_empty()) {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| bad(format!("expected key=value, got {kv:?}")))?;
            if !seen.insert(k) {
                return Err(bad(format!("duplicate key {k:?}")));
            }
            let int = || v.parse::<usize>().map_err(|_| bad(format!("{k}={v:?}")));
            let real = || {
                v.parse::<f64>()
                    .ok()
                    .filter(|x| x.is_finite())
                    .ok_or_else(|| bad(format!("{k}={v:?}")))
            };
            match k {
                "N" => spec.n = int()?,
                "d" => spec.d = int()?,
                "seed" => spec.seed = v.parse().map_err(|_| bad(format!("seed={v:?}")))?,
                "t" => spec.t = real()?,
                "V" => spec.v = real()?,
                "J" => spec.j = real()?,
                other => return Err(bad(format!("unknown key {other:?}"))),
            }
        }
        if !seen.contains("N") || !seen.contains("d") {
            return Err(bad("N and d are required".into()));
        }
        Ok(spec)
    }
}

fn parse_real(line: usize, tok: &str) -> Result<f64> {
    tok.parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| parse_err(line, format!("expected a finite number, got {tok:?}")))
}

/// Parses a model file. A file with no content lines is an empty model.
pub fn parse_model(text: &str) -> Result<FermionModel> {
    let mut lines = content_lines(text);
    let Some((line, tokens)) = lines.next() else {
        return Ok(FermionModel::new(ModelKind::Hopping, 0));
    };
    if tokens.len() != 2 || tokens[0] != "model" {
        return Err(parse_err(line, "expected `model <kind>`"));
    }
    let kind: ModelKind = tokens[1]
        .parse()
        .map_err(|e: Error| parse_err(line, e.to_string()))?;
    let (line, tokens) = lines
        .next()
        .ok_or_else(|| parse_err(line + 1, "missing `modes <N>`"))?;
    if tokens.len() != 2 || tokens[0] != "modes" {
        return Err(parse_err(line, "expected `modes <N>`"));
    }
    let mut model = FermionModel::new(kind, parse_usize(line, tokens[1])?);
    let mut hyper = InteractionHypergraph::new(2 * model.n_sites);
    for (line, tokens) in lines {
        let arity = match tokens[0] {
            "hop" | "nn" => 3,
            "ff" | "syk" => 5,
            other => return Err(parse_err(line, format!("unknown term {other:?}"))),
        };
        if tokens.len() != arity + 1 {
            return Err(parse_err(
                line,
                format!("`{}` takes {arity} arguments", tokens[0]),
            ));
        }
        let idx = tokens[1..arity]
            .iter()
            .map(|t| parse_usize(line, t))
            .collect::<Result<Vec<_>>>()?;
        let c = parse_real(line, tokens[arity])?;
        let term = match tokens[0] {
            "hop" => FermionTerm::Hopping { i: idx[0], j: idx[1], t: c },
            "nn" => FermionTerm::DensityDensity { i: idx[0], j: idx[1], v: c },
            "ff" => FermionTerm::FourFermion {
                i: idx[0],
                j: idx[1],
                k: idx[2],
                l: idx[3],
                u: c,
            },
            _ => {
                let m = [idx[0], idx[1], idx[2], idx[3]];
                hyper
                    .add_hyperedge(m)
                    .map_err(|e| parse_err(line, e.to_string()))?;
                let mut sorted = m;
                sorted.sort_unstable();
                FermionTerm::MajoranaQuartic { m: sorted, coupling: c }
            }
        };
        model.push(term).map_err(|e| parse_err(line, e.to_string()))?;
    }
    if !hyper.hyperedges().is_empty() {
        model.hypergraph = Some(hyper);
    }
    Ok(model)
}

/// Renders a model in the file format. General even terms have no line
/// syntax and are rejected.
pub fn render_model(model: &FermionModel) -> Result<String> {
    let mut s = format!("model {}\nmodes {}\n", model.kind, model.n_sites);
    for t in &model.terms {
        match *t {
            FermionTerm::Hopping { i, j, t } => writeln!(s, "hop {i} {j} {}", sig12(t)),
            FermionTerm::DensityDensity { i, j, v } => writeln!(s, "nn {i} {j} {}", sig12(v)),
            FermionTerm::FourFermion { i, j, k, l, u } => {
                writeln!(s, "ff {i} {j} {k} {l} {}", sig12(u))
            }
            FermionTerm::MajoranaQuartic { m, coupling } => writeln!(
                s,
                "syk {} {} {} {} {}",
                m[0],
                m[1],
                m[2],
                m[3],
                sig12(coupling)
            ),
            FermionTerm::GeneralEven { .. } => {
                return Err(Error::InvalidArgument(
                    "general even terms have no model-file syntax".into(),
                ))
            }
        }
        .expect("write to String");
    }
    Ok(s)
}
