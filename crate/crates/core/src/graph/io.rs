//! Line-oriented graph and hypergraph files.
//!
//! ```text
//! graph 4
//! edge 1 2
//! edge 2 3
//! ```
//!
//! ```text
//! hypergraph 8
//! hedge 1 3 6 8
//! ```
//!
//! Indices are 1-based. Blank lines and `#` comments are ignored.

use std::fmt::Write;

use super::{InteractionGraph, InteractionHypergraph};
use crate::error::{Error, Result};

/// Non-empty, comment-stripped lines with their 1-based line numbers.
pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let body = line.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = body.split_whitespace().collect();
        (!tokens.is_empty()).then_some((i + 1, tokens))
    })
}

pub(crate) fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

pub(crate) fn parse_usize(line: usize, tok: &str) -> Result<usize> {
    tok.parse()
        .map_err(|_| parse_err(line, format!("expected a non-negative integer, got {tok:?}")))
}

fn header(text: &str, keyword: &str) -> Result<(usize, usize)> {
    let (line, tokens) = content_lines(text)
        .next()
        .ok_or_else(|| parse_err(1, format!("missing `{keyword} <n>` header")))?;
    if tokens.len() != 2 || tokens[0] != keyword {
        return Err(parse_err(line, format!("expected `{keyword} <n>`")));
    }
    Ok((line, parse_usize(line, tokens[1])?))
}

pub fn parse_graph(text: &str) -> Result<InteractionGraph> {
    let (first, n) = header(text, "graph")?;
    let mut g = InteractionGraph::new(n);
    for (line, tokens) in content_lines(text).filter(|(l, _)| *l != first) {
        if tokens.len() != 3 || tokens[0] != "edge" {
            return Err(parse_err(line, "expected `edge <i> <j>`"));
        }
        let a = parse_usize(line, tokens[1])?;
        let b = parse_usize(line, tokens[2])?;
        g.add_edge(a, b)
            .map_err(|e| parse_err(line, e.to_string()))?;
    }
    Ok(g)
}

pub fn render_graph(g: &InteractionGraph) -> String {
    let mut s = format!("graph {}\n", g.n_vertices());
    for e in g.edges() {
        writeln!(s, "edge {} {}", e.lo(), e.hi()).expect("write to String");
    }
    s
}

pub fn parse_hypergraph(text: &str) -> Result<InteractionHypergraph> {
    let (first, n) = header(text, "hypergraph")?;
    let mut h = InteractionHypergraph::new(n);
    for (line, tokens) in content_lines(text).filter(|(l, _)| *l != first) {
        if tokens.len() != 5 || tokens[0] != "hedge" {
            return Err(parse_err(line, "expected `hedge <i> <j> <k> <l>`"));
        }
        let mut idx = [0usize; 4];
        for (slot, tok) in idx.iter_mut().zip(&tokens[1..]) {
            *slot = parse_usize(line, tok)?;
        }
        h.add_hyperedge(idx)
            .map_err(|e| parse_err(line, e.to_string()))?;
    }
    Ok(h)
}

pub fn render_hypergraph(h: &InteractionHypergraph) -> String {
    let mut s = format!("hypergraph {}\n", h.n_majorana());
    for e in h.hyperedges() {
        writeln!(s, "hedge {} {} {} {}", e[0], e[1], e[2], e[3]).expect("write to String");
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graph_round_trip() {
        let text = "graph 4\nedge 1 2\nedge 2 3\nedge 3 4\nedge 1 4\n";
        let g = parse_graph(text).unwrap();
        assert_eq!(g.n_edges(), 4);
        assert_eq!(render_graph(&g), "graph 4\nedge 1 2\nedge 1 4\nedge 2 3\nedge 3 4\n");
    }

    #[test]
    fn graph_errors_carry_line_numbers() {
        let err = parse_graph("graph 3\n# note\nedge 1 2\nedge 1 x\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 4, .. }));
        let err = parse_graph("graph 3\nedge 1 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        assert!(parse_graph("").is_err());
        assert!(parse_graph("hypergraph 3\n").is_err());
    }

    #[test]
    fn hypergraph_round_trip() {
        let text = "hypergraph 8\nhedge 8 6 3 1\nhedge 2 4 5 7\n";
        let h = parse_hypergraph(text).unwrap();
        assert_eq!(render_hypergraph(&h), "hypergraph 8\nhedge 1 3 6 8\nhedge 2 4 5 7\n");
        assert!(parse_hypergraph("hypergraph 8\nhedge 1 1 2 3\n").is_err());
    }
}
