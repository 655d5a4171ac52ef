use std::collections::{BTreeMap, HashMap};

use super::chain::MarkovChain;
use super::poly::Polynomial;
use super::rational::RationalFunction;
use crate::error::{Error, Result};

/// Directed graph with polynomial edge weights, at most one edge per ordered
/// vertex pair.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FlowGraph {
    vertices: Vec<String>,
    edges: BTreeMap<(usize, usize), Polynomial>,
}

impl FlowGraph {
    pub fn new<S: Into<String>>(vertices: Vec<S>) -> Result<Self> {
        let vertices: Vec<String> = vertices.into_iter().map(Into::into).collect();
        for (i, v) in vertices.iter().enumerate() {
            if vertices[..i].contains(v) {
                return Err(Error::InvalidParameter(format!("duplicate vertex `{v}`")));
            }
        }
        Ok(Self {
            vertices,
            edges: BTreeMap::new(),
        })
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.vertices
            .iter()
            .position(|v| v == label)
            .ok_or_else(|| Error::UnknownLabel(label.into()))
    }

    pub fn add_edge(&mut self, src: &str, dst: &str, weight: Polynomial) -> Result<()> {
        let (i, j) = (self.index_of(src)?, self.index_of(dst)?);
        if self.edges.contains_key(&(i, j)) {
            return Err(Error::InvalidParameter(format!(
                "edge `{src}` -> `{dst}` already present"
            )));
        }
        self.edges.insert((i, j), weight);
        Ok(())
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn weight(&self, src: &str, dst: &str) -> Option<&Polynomial> {
        let (i, j) = (self.index_of(src).ok()?, self.index_of(dst).ok()?);
        self.edges.get(&(i, j))
    }

    /// `(src, dst, weight)` triples in index order.
    pub fn edges(&self) -> impl Iterator<Item = (&str, &str, &Polynomial)> {
        self.edges
            .iter()
            .map(|(&(i, j), w)| (self.vertices[i].as_str(), self.vertices[j].as_str(), w))
    }

    fn out_edges(&self) -> Vec<Vec<(usize, &Polynomial)>> {
        let mut out = vec![Vec::new(); self.vertices.len()];
        for (&(i, j), w) in &self.edges {
            out[i].push((j, w));
        }
        out
    }
}

/// Label of the outgoing copy of a split recurrent state.
pub fn source_label(state: &str) -> String {
    format!("{state}'")
}

/// Label of the absorbing copy of a split recurrent state.
pub fn sink_label(state: &str) -> String {
    format!("{state}''")
}

/// Builds the flow graph whose source-to-sink transfer function is the PGF of
/// the recurrence time of `recurrent`.
///
/// The recurrent state is split into a source carrying its outgoing edges and
/// an absorbing sink collecting its incoming ones; every positive one-step
/// probability `q` becomes an edge of weight `q x`. Vertex order is source,
/// remaining states in chain order, sink.
pub fn chain_to_flowgraph(chain: &MarkovChain, recurrent: &str) -> Result<FlowGraph> {
    let r = chain
        .index_of(recurrent)
        .ok_or_else(|| Error::UnknownLabel(recurrent.into()))?;
    let (src, sink) = (source_label(recurrent), sink_label(recurrent));
    let mut labels = vec![src.clone()];
    labels.extend(
        chain
            .states()
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != r)
            .map(|(_, s)| s.clone()),
    );
    labels.push(sink.clone());
    let mut graph = FlowGraph::new(labels)?;

    for (i, from) in chain.states().iter().enumerate() {
        let from = if i == r { &src } else { from };
        for (j, to) in chain.states().iter().enumerate() {
            let q = chain.row(i)[j];
            if q > 0.0 {
                let to = if j == r { &sink } else { to };
                graph.add_edge(from, to, Polynomial::monomial(q, 1))?;
            }
        }
    }
    Ok(graph)
}

struct Loop {
    mask: u64,
    gain: Polynomial,
}

/// Mason's gain formula: `T = sum_k P_k Delta_k / Delta`.
///
/// Forward paths and simple loops are enumerated exhaustively. The graph
/// determinant `Delta` (sum over sets of pairwise non-touching loops of
/// `(-1)^k` times their gain product) is evaluated by expanding on the lowest
/// vertex of the allowed set: that vertex is either outside every chosen
/// loop, or lies on exactly one loop containing it as its lowest vertex. The
/// cofactors `Delta_k` are the same quantity restricted to the vertices off
/// path `k`.
pub fn mason_transfer(graph: &FlowGraph, src: &str, sink: &str) -> Result<RationalFunction> {
    let (s, t) = (graph.index_of(src)?, graph.index_of(sink)?);
    let v = graph.vertices.len();
    if v > 64 {
        return Err(Error::InvalidParameter(
            "graphs beyond 64 vertices are not supported".into(),
        ));
    }
    if s == t {
        return Err(Error::InvalidParameter("source and sink coincide".into()));
    }
    if graph.edges.keys().any(|&(i, _)| i == t) {
        return Err(Error::InvalidParameter(format!(
            "sink `{sink}` has outgoing edges"
        )));
    }
    let out = graph.out_edges();

    let mut paths = Vec::new();
    forward_paths(&out, s, t, 1 << s, Polynomial::one(), &mut paths);
    if paths.is_empty() {
        return Err(Error::NoPath {
            src: src.into(),
            sink: sink.into(),
        });
    }

    let loops_by_min: Vec<Vec<Loop>> = (0..v)
        .map(|start| {
            let mut found = Vec::new();
            cycles_from(&out, start, start, 1 << start, Polynomial::one(), &mut found);
            found
        })
        .collect();

    let all: u64 = if v == 64 { u64::MAX } else { (1u64 << v) - 1 };
    let mut memo = HashMap::new();
    let delta = determinant(all, &loops_by_min, &mut memo);
    let mut num = Polynomial::zero();
    for (mask, gain) in &paths {
        let cofactor = determinant(all & !mask, &loops_by_min, &mut memo);
        num = &num + &(gain * &cofactor);
    }
    RationalFunction::new(num, delta)
}

fn forward_paths(
    out: &[Vec<(usize, &Polynomial)>],
    at: usize,
    sink: usize,
    visited: u64,
    gain: Polynomial,
    found: &mut Vec<(u64, Polynomial)>,
) {
    for &(next, w) in &out[at] {
        if visited & (1 << next) != 0 {
            continue;
        }
        let g = &gain * w;
        if next == sink {
            found.push((visited | (1 << next), g));
        } else {
            forward_paths(out, next, sink, visited | (1 << next), g, found);
        }
    }
}

/// Simple cycles through `start` whose other vertices all have larger index.
fn cycles_from(
    out: &[Vec<(usize, &Polynomial)>],
    start: usize,
    at: usize,
    visited: u64,
    gain: Polynomial,
    found: &mut Vec<Loop>,
) {
    for &(next, w) in &out[at] {
        if next == start {
            found.push(Loop {
                mask: visited,
                gain: &gain * w,
            });
        } else if next > start && visited & (1 << next) == 0 {
            cycles_from(out, start, next, visited | (1 << next), &gain * w, found);
        }
    }
}

fn determinant(mask: u64, loops_by_min: &[Vec<Loop>], memo: &mut HashMap<u64, Polynomial>) -> Polynomial {
    if mask == 0 {
        return Polynomial::one();
    }
    if let Some(p) = memo.get(&mask) {
        return p.clone();
    }
    let low = mask.trailing_zeros() as usize;
    let mut total = determinant(mask & !(1 << low), loops_by_min, memo);
    for l in &loops_by_min[low] {
        if l.mask & !mask == 0 {
            let rest = determinant(mask & !l.mask, loops_by_min, memo);
            total = &total - &(&l.gain * &rest);
        }
    }
    memo.insert(mask, total.clone());
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(c: f64) -> Polynomial {
        Polynomial::monomial(c, 1)
    }

    #[test]
    fn single_edge() {
        let mut g = FlowGraph::new(vec!["s", "t"]).unwrap();
        g.add_edge("s", "t", x(0.3)).unwrap();
        let t = mason_transfer(&g, "s", "t").unwrap();
        assert_eq!(t.num().coeffs(), &[0.0, 0.3]);
        assert_eq!(t.den().coeffs(), &[1.0]);
    }

    #[test]
    fn geometric_self_loop() {
        let (a, b, c) = (0.5, 0.3, 0.7);
        let mut g = FlowGraph::new(vec!["s", "A", "t"]).unwrap();
        g.add_edge("s", "A", x(a)).unwrap();
        g.add_edge("A", "A", x(b)).unwrap();
        g.add_edge("A", "t", x(c)).unwrap();
        let t = mason_transfer(&g, "s", "t").unwrap();
        assert_eq!(t.num().degree(), Some(2));
        assert!((t.num().coeff(2) - a * c).abs() < 1e-15);
        assert!((t.den().coeff(1) + b).abs() < 1e-15);
        assert_eq!(t.den().degree(), Some(1));
    }

    #[test]
    fn rejects_bad_queries() {
        let mut g = FlowGraph::new(vec!["s", "a", "t"]).unwrap();
        g.add_edge("s", "a", x(1.0)).unwrap();
        g.add_edge("a", "a", x(1.0)).unwrap();
        assert!(matches!(mason_transfer(&g, "s", "t"), Err(Error::NoPath { .. })));
        assert!(matches!(mason_transfer(&g, "s", "q"), Err(Error::UnknownLabel(_))));
        assert!(g.add_edge("s", "a", x(0.5)).is_err());
        g.add_edge("t", "a", x(0.5)).unwrap();
        assert!(mason_transfer(&g, "s", "t").is_err());
    }

    #[test]
    fn one_state_chain() {
        let c = MarkovChain::new(vec!["R"], vec![vec![1.0]]).unwrap();
        let g = chain_to_flowgraph(&c, "R").unwrap();
        assert_eq!(g.vertices(), &["R'".to_string(), "R''".to_string()]);
        assert_eq!(g.edge_count(), 1);
        let t = mason_transfer(&g, "R'", "R''").unwrap();
        assert_eq!(t.num().coeffs(), &[0.0, 1.0]);
        assert_eq!(t.den().coeffs(), &[1.0]);
    }

    #[test]
    fn zero_probabilities_produce_no_edges() {
        let c = MarkovChain::new(
            vec!["R", "A"],
            vec![vec![0.0, 1.0], vec![0.5, 0.5]],
        )
        .unwrap();
        let g = chain_to_flowgraph(&c, "R").unwrap();
        assert!(g.weight("R'", "R''").is_none());
        assert_eq!(g.edge_count(), 3);
    }

    #[test]
    fn overlapping_loops() {
        // s -> a -> b -> t with loops a<->b and b self-loop, which touch.
        let mut g = FlowGraph::new(vec!["s", "a", "b", "t"]).unwrap();
        g.add_edge("s", "a", Polynomial::constant(1.0)).unwrap();
        g.add_edge("a", "b", Polynomial::constant(0.5)).unwrap();
        g.add_edge("b", "a", Polynomial::constant(0.2)).unwrap();
        g.add_edge("b", "b", Polynomial::constant(0.3)).unwrap();
        g.add_edge("b", "t", Polynomial::constant(0.4)).unwrap();
        let t = mason_transfer(&g, "s", "t").unwrap();
        // a = 1 + 0.2 b, b = 0.5 a + 0.3 b  =>  b = 0.5 / 0.6, t = 0.4 b
        assert!((t.eval(0.0) - 0.4 * 0.5 / 0.6).abs() < 1e-14);
    }
}
