//! Proper edge coloring.
//!
//! [`edge_color`] first tries to fit the graph into `Δ` colors with greedy
//! Kempe-chain repair over a few deterministic edge orders; this always
//! succeeds on bipartite graphs. If every attempt gets stuck it falls back to
//! Misra-Gries fan rotation, which never needs more than `Δ + 1` colors.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{Edge, InteractionGraph};

/// Edge to color, colors numbered from 1.
pub type Coloring = BTreeMap<Edge, usize>;

const KEMPE_ATTEMPTS: u64 = 64;

/// Per-vertex color occupancy: `at[v][c] = Some(w)` when edge `(v, w)` has color `c`.
struct Palette {
    at: Vec<Vec<Option<usize>>>,
    color: BTreeMap<Edge, usize>,
}

impl Palette {
    fn new(n_vertices: usize, n_colors: usize) -> Self {
        Palette {
            at: vec![vec![None; n_colors + 1]; n_vertices + 1],
            color: BTreeMap::new(),
        }
    }

    fn n_colors(&self) -> usize {
        self.at[0].len() - 1
    }

    fn is_free(&self, v: usize, c: usize) -> bool {
        self.at[v][c].is_none()
    }

    fn free_colors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        (1..=self.n_colors()).filter(move |&c| self.is_free(v, c))
    }

    fn color_of(&self, a: usize, b: usize) -> Option<usize> {
        self.color.get(&Edge::new(a, b).ok()?).copied()
    }

    fn set(&mut self, a: usize, b: usize, c: usize) {
        debug_assert!(self.is_free(a, c) && self.is_free(b, c));
        self.at[a][c] = Some(b);
        self.at[b][c] = Some(a);
        self.color.insert(Edge::new(a, b).expect("distinct endpoints"), c);
    }

    fn clear(&mut self, a: usize, b: usize) {
        if let Some(c) = self.color.remove(&Edge::new(a, b).expect("distinct endpoints")) {
            self.at[a][c] = None;
            self.at[b][c] = None;
        }
    }

    /// Maximal path from `start` alternating colors `first`, `second`, ...
    fn alternating_path(&self, start: usize, first: usize, second: usize) -> Vec<usize> {
        let mut path = vec![start];
        let mut cur = start;
        let mut c = first;
        while let Some(next) = self.at[cur][c] {
            path.push(next);
            cur = next;
            c = if c == first { second } else { first };
            if path.len() > self.color.len() + 1 {
                break;
            }
        }
        path
    }

    /// Swaps colors `a` and `b` along a path of vertices.
    fn swap_path(&mut self, path: &[usize], a: usize, b: usize) {
        let recolored: Vec<(usize, usize, usize)> = path
            .windows(2)
            .map(|w| {
                let c = self.color_of(w[0], w[1]).expect("path edge is colored");
                (w[0], w[1], if c == a { b } else { a })
            })
            .collect();
        for &(x, y, _) in &recolored {
            self.clear(x, y);
        }
        for (x, y, c) in recolored {
            self.set(x, y, c);
        }
    }
}

/// Greedy Kempe-chain coloring within `n_colors`, or `None` if stuck.
fn kempe_coloring(g: &InteractionGraph, order: &[Edge], n_colors: usize) -> Option<Coloring> {
    let mut p = Palette::new(g.n_vertices(), n_colors);
    for e in order {
        let (u, v) = (e.lo(), e.hi());
        let common = p.free_colors(u).find(|&c| p.is_free(v, c));
        if let Some(c) = common {
            p.set(u, v, c);
            continue;
        }
        let fu: Vec<usize> = p.free_colors(u).collect();
        let fv: Vec<usize> = p.free_colors(v).collect();
        let mut placed = false;
        'pairs: for &a in &fu {
            for &b in &fv {
                // a is used at v, b is used at u; flip the a/b chain out of v
                let path = p.alternating_path(v, a, b);
                if path.last() == Some(&u) {
                    continue;
                }
                p.swap_path(&path, a, b);
                p.set(u, v, a);
                placed = true;
                break 'pairs;
            }
        }
        if !placed {
            return None;
        }
    }
    Some(p.color)
}

/// Misra-Gries edge coloring with at most `Δ + 1` colors.
pub fn misra_gries(g: &InteractionGraph) -> Coloring {
    let n_colors = g.max_degree() + 1;
    let mut p = Palette::new(g.n_vertices(), n_colors);
    let adj = g.adjacency();
    for e in g.edges() {
        let (u, v) = (e.lo(), e.hi());
        // maximal fan of u starting at v
        let mut fan = vec![v];
        loop {
            let last = *fan.last().expect("fan is non-empty");
            let next = adj[u].iter().copied().find(|&w| {
                !fan.contains(&w)
                    && p.color_of(u, w)
                        .is_some_and(|c| p.is_free(last, c))
            });
            match next {
                Some(w) => fan.push(w),
                None => break,
            }
        }
        let c = p.free_colors(u).next().expect("u has a free color");
        let d = p
            .free_colors(*fan.last().expect("fan is non-empty"))
            .next()
            .expect("fan end has a free color");
        if c != d {
            let path = p.alternating_path(u, d, c);
            p.swap_path(&path, c, d);
        }
        // first fan prefix that is still a fan and ends on a vertex missing d
        let mut chosen = None;
        for k in 0..fan.len() {
            if k > 0 {
                let ck = p.color_of(u, fan[k]);
                if !ck.is_some_and(|ck| p.is_free(fan[k - 1], ck)) {
                    break;
                }
            }
            if p.is_free(fan[k], d) {
                chosen = Some(k);
                break;
            }
        }
        let k = chosen.expect("Misra-Gries fan always admits a rotation");
        let shifted: Vec<usize> = (0..k)
            .map(|j| p.color_of(u, fan[j + 1]).expect("fan edge is colored"))
            .collect();
        for &w in &fan[..=k] {
            p.clear(u, w);
        }
        for (j, c) in shifted.into_iter().enumerate() {
            p.set(u, fan[j], c);
        }
        p.set(u, fan[k], d);
    }
    p.color
}

/// Relabels colors to `1..=k` in order of first appearance over sorted edges.
fn compact(coloring: Coloring) -> Coloring {
    let mut relabel: BTreeMap<usize, usize> = BTreeMap::new();
    coloring
        .into_iter()
        .map(|(e, c)| {
            let next = relabel.len() + 1;
            (e, *relabel.entry(c).or_insert(next))
        })
        .collect()
}

/// Proper edge coloring with at most `Δ + 1` colors.
pub fn edge_color(g: &InteractionGraph) -> Coloring {
    if g.n_edges() == 0 {
        return Coloring::new();
    }
    let delta = g.max_degree();
    let mut order: Vec<Edge> = g.edges().collect();
    for attempt in 0..=KEMPE_ATTEMPTS {
        if attempt > 0 {
            let mut rng = ChaCha8Rng::seed_from_u64(attempt);
            order = g.edges().collect();
            order.shuffle(&mut rng);
        }
        if let Some(c) = kempe_coloring(g, &order, delta) {
            return compact(c);
        }
    }
    compact(misra_gries(g))
}

/// True iff every edge is colored and no two edges at a vertex share a color.
pub fn is_proper_coloring(g: &InteractionGraph, coloring: &Coloring) -> bool {
    if coloring.len() != g.n_edges() || g.edges().any(|e| !coloring.contains_key(&e)) {
        return false;
    }
    let mut seen = std::collections::HashSet::new();
    coloring
        .iter()
        .all(|(e, &c)| seen.insert((e.lo(), c)) && seen.insert((e.hi(), c)))
}
