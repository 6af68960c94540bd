//! Tubular graphs of groups: every vertex group is `Z^2` with a fixed basis,
//! every edge group is `Z`, and each edge records where its generator lands in
//! the two endpoint vertex groups.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::lattice::{Int, IntMatrix, LatticeVec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Src,
    Dst,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Src => "src",
            Side::Dst => "dst",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    pub src: usize,
    pub dst: usize,
    pub inc_src: LatticeVec,
    pub inc_dst: LatticeVec,
}

impl Edge {
    pub fn is_self_loop(&self) -> bool {
        self.src == self.dst
    }

    pub fn vertex(&self, side: Side) -> usize {
        match side {
            Side::Src => self.src,
            Side::Dst => self.dst,
        }
    }

    pub fn inclusion(&self, side: Side) -> &LatticeVec {
        match side {
            Side::Src => &self.inc_src,
            Side::Dst => &self.inc_dst,
        }
    }

    pub fn other_end(&self, v: usize) -> usize {
        if self.src == v {
            self.dst
        } else {
            self.src
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    NoVertices,
    DuplicateVertex { name: String },
    DuplicateEdge { id: String },
    DanglingEndpoint { edge: usize, side: Side },
    ZeroInclusion { edge: usize, side: Side },
    Disconnected,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoVertices => write!(f, "graph has no vertices"),
            Violation::DuplicateVertex { name } => write!(f, "vertex {name} declared twice"),
            Violation::DuplicateEdge { id } => write!(f, "edge {id} declared twice"),
            Violation::DanglingEndpoint { edge, side } => {
                write!(f, "edge #{edge} has a dangling {side} endpoint")
            }
            Violation::ZeroInclusion { edge, side } => {
                write!(f, "edge #{edge} has a zero {side} inclusion")
            }
            Violation::Disconnected => write!(f, "graph is disconnected"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("invalid graph: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error("graph is disconnected")]
    Disconnected,
}

/// A finite graph of groups with `Z^2` vertex groups and `Z` edge groups.
///
/// Declaration order of vertices and edges fixes every deterministic choice
/// downstream (spanning tree, generator order, cover labels).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TubularGraph {
    pub vertices: Vec<String>,
    pub edges: Vec<Edge>,
}

impl TubularGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, name: impl Into<String>) -> usize {
        self.vertices.push(name.into());
        self.vertices.len() - 1
    }

    pub fn add_edge(
        &mut self,
        id: impl Into<String>,
        src: usize,
        dst: usize,
        inc_src: LatticeVec,
        inc_dst: LatticeVec,
    ) -> usize {
        self.edges.push(Edge { id: id.into(), src, dst, inc_src, inc_dst });
        self.edges.len() - 1
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == name)
    }

    pub fn edge_index(&self, id: &str) -> Option<usize> {
        self.edges.iter().position(|e| e.id == id)
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Edge ends sitting at `v`, in declaration order (a self loop contributes
    /// both of its ends).
    pub fn incident_ends(&self, v: usize) -> Vec<(usize, Side)> {
        let mut out = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            if e.src == v {
                out.push((i, Side::Src));
            }
            if e.dst == v {
                out.push((i, Side::Dst));
            }
        }
        out
    }

    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.vertices.is_empty() {
            out.push(Violation::NoVertices);
        }
        let mut seen = HashSet::new();
        for name in &self.vertices {
            if !seen.insert(name.as_str()) {
                out.push(Violation::DuplicateVertex { name: name.clone() });
            }
        }
        let mut seen = HashSet::new();
        for e in &self.edges {
            if !seen.insert(e.id.as_str()) {
                out.push(Violation::DuplicateEdge { id: e.id.clone() });
            }
        }
        let n = self.vertices.len();
        let mut dangling = false;
        for (i, e) in self.edges.iter().enumerate() {
            for side in [Side::Src, Side::Dst] {
                if e.vertex(side) >= n {
                    out.push(Violation::DanglingEndpoint { edge: i, side });
                    dangling = true;
                }
                if e.inclusion(side).is_zero() {
                    out.push(Violation::ZeroInclusion { edge: i, side });
                }
            }
        }
        if !dangling && n > 0 && !self.is_connected() {
            out.push(Violation::Disconnected);
        }
        out
    }

    pub fn ensure_valid(&self) -> Result<(), GraphError> {
        let v = self.validate();
        if v.is_empty() {
            Ok(())
        } else {
            Err(GraphError::Invalid(v))
        }
    }

    /// Vertices reachable from `start` using only the edges in `allowed`.
    pub fn reachable(&self, start: usize, allowed: &BTreeSet<usize>) -> BTreeSet<usize> {
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); self.vertices.len()];
        for &i in allowed {
            let e = &self.edges[i];
            adj[e.src].push(e.dst);
            adj[e.dst].push(e.src);
        }
        let mut seen = BTreeSet::from([start]);
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for &w in &adj[u] {
                if seen.insert(w) {
                    queue.push_back(w);
                }
            }
        }
        seen
    }

    pub fn is_connected(&self) -> bool {
        if self.vertices.is_empty() {
            return true;
        }
        let all: BTreeSet<usize> = (0..self.edges.len()).collect();
        self.reachable(0, &all).len() == self.vertices.len()
    }

    /// Spanning tree grown from the first vertex: edges are swept in
    /// declaration order and an edge is taken whenever exactly one of its
    /// endpoints is already in the tree; sweeps repeat until nothing changes.
    ///
    /// Returns `(edge, parent, child)` in the order the edges were taken.
    pub fn spanning_tree_ordered(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        if self.vertices.is_empty() {
            return out;
        }
        let mut in_tree = vec![false; self.vertices.len()];
        in_tree[0] = true;
        loop {
            let mut changed = false;
            for (i, e) in self.edges.iter().enumerate() {
                match (in_tree[e.src], in_tree[e.dst]) {
                    (true, false) => {
                        in_tree[e.dst] = true;
                        out.push((i, e.src, e.dst));
                        changed = true;
                    }
                    (false, true) => {
                        in_tree[e.src] = true;
                        out.push((i, e.dst, e.src));
                        changed = true;
                    }
                    _ => {}
                }
            }
            if !changed {
                break;
            }
        }
        out
    }

    /// Spanning tree edge indices, ascending.
    pub fn spanning_tree(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.spanning_tree_ordered().into_iter().map(|(e, _, _)| e).collect();
        t.sort_unstable();
        t
    }

    /// Edges outside the spanning tree, in declaration order. These carry the
    /// stable letters.
    pub fn non_tree_edges(&self) -> Vec<usize> {
        let tree: BTreeSet<usize> = self.spanning_tree().into_iter().collect();
        (0..self.edges.len()).filter(|i| !tree.contains(i)).collect()
    }

    /// First Betti number of the underlying graph.
    pub fn betti(&self) -> Result<usize, GraphError> {
        if !self.is_connected() || self.vertices.is_empty() {
            return Err(GraphError::Disconnected);
        }
        Ok(self.edges.len() + 1 - self.vertices.len())
    }

    pub fn is_tree(&self) -> bool {
        self.betti() == Ok(0)
    }

    pub fn has_self_loop(&self) -> bool {
        self.edges.iter().any(Edge::is_self_loop)
    }

    /// The standard deficiency-one presentation read off from the spanning tree.
    pub fn presentation(&self) -> Result<Presentation, GraphError> {
        self.ensure_valid()?;
        let nv = self.vertices.len();
        let ordered = self.spanning_tree_ordered();
        let mut tree_edges: Vec<usize> = ordered.iter().map(|&(e, _, _)| e).collect();
        tree_edges.sort_unstable();
        let stable_edges = self.non_tree_edges();

        let mut generators = Vec::new();
        let mut names = Vec::new();
        for (v, name) in self.vertices.iter().enumerate() {
            generators.push(Generator::X(v));
            names.push(format!("x_{name}"));
            generators.push(Generator::Y(v));
            names.push(format!("y_{name}"));
        }
        for &e in &stable_edges {
            generators.push(Generator::Stable(e));
            names.push(format!("t_{}", self.edges[e].id));
        }

        let mut relators = Vec::new();
        for v in 0..nv {
            let (x, y) = (2 * v, 2 * v + 1);
            relators.push(Word::from_letters([(x, 1), (y, 1), (x, -1), (y, -1)]));
        }
        for &e in &tree_edges {
            let edge = &self.edges[e];
            let mut w = vertex_word(edge.src, &edge.inc_src);
            w.extend(&vertex_word(edge.dst, &edge.inc_dst).inverse());
            relators.push(w);
        }
        for (i, &e) in stable_edges.iter().enumerate() {
            let edge = &self.edges[e];
            let t = 2 * nv + i;
            let mut w = Word::letter(t, 1);
            w.extend(&vertex_word(edge.src, &edge.inc_src));
            w.extend(&Word::letter(t, -1));
            w.extend(&vertex_word(edge.dst, &edge.inc_dst).inverse());
            relators.push(w);
        }
        Ok(Presentation { generators, names, relators, tree_edges, stable_edges })
    }

    /// Text form accepted by the parser.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for v in &self.vertices {
            s.push_str(&format!("vertex {v}\n"));
        }
        for e in &self.edges {
            s.push_str(&format!(
                "edge {}: {}({},{}) -> {}({},{})\n",
                e.id,
                self.vertices[e.src],
                e.inc_src.p,
                e.inc_src.q,
                self.vertices[e.dst],
                e.inc_dst.p,
                e.inc_dst.q
            ));
        }
        s
    }
}

/// `x_v^p y_v^q` in the presentation's generator numbering.
pub fn vertex_word(v: usize, vec: &LatticeVec) -> Word {
    let mut w = Word::empty();
    if !vec.p.is_zero() {
        w.push(2 * v, vec.p.clone());
    }
    if !vec.q.is_zero() {
        w.push(2 * v + 1, vec.q.clone());
    }
    w
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Letter {
    pub gen: usize,
    pub exp: Int,
}

/// A word in a free group, as a sequence of syllables `gen^exp`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letter(gen: usize, exp: impl Into<Int>) -> Self {
        let mut w = Word::empty();
        w.push(gen, exp.into());
        w
    }

    pub fn from_letters<I: IntoIterator<Item = (usize, i64)>>(letters: I) -> Self {
        Word(letters.into_iter().map(|(gen, e)| Letter { gen, exp: Int::from(e) }).collect())
    }

    pub fn push(&mut self, gen: usize, exp: Int) {
        self.0.push(Letter { gen, exp });
    }

    pub fn extend(&mut self, other: &Word) {
        self.0.extend(other.0.iter().cloned());
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut w = self.clone();
        w.extend(other);
        w
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| Letter { gen: l.gen, exp: -&l.exp }).collect())
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of syllables.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_reduced(&self) -> bool {
        self.0.iter().all(|l| !l.exp.is_zero()) && self.0.windows(2).all(|w| w[0].gen != w[1].gen)
    }

    /// Free reduction.
    pub fn reduce(&self) -> Word {
        reduce_word(self)
    }

    /// Image in `Z^ngens`.
    pub fn abelianize(&self, ngens: usize) -> Vec<Int> {
        let mut out = vec![Int::zero(); ngens];
        for l in &self.0 {
            out[l.gen] += &l.exp;
        }
        out
    }

    /// Replace every letter by a word; the result is not reduced.
    pub fn substitute(&self, images: &[Word]) -> Word {
        let mut out = Word::empty();
        for l in &self.0 {
            let img = &images[l.gen];
            let piece = if l.exp.is_negative() { img.inverse() } else { img.clone() };
            let mut k = l.exp.abs();
            while k.is_positive() {
                out.extend(&piece);
                k -= 1;
            }
        }
        out
    }

    pub fn display_with(&self, names: &[String]) -> String {
        if self.0.is_empty() {
            return "1".to_string();
        }
        self.0
            .iter()
            .map(|l| {
                let name = names.get(l.gen).cloned().unwrap_or_else(|| format!("g{}", l.gen));
                if l.exp == Int::from(1) {
                    name
                } else {
                    format!("{name}^{}", l.exp)
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

pub fn reduce_word(w: &Word) -> Word {
    let mut out: Vec<Letter> = Vec::with_capacity(w.0.len());
    for l in &w.0 {
        if l.exp.is_zero() {
            continue;
        }
        match out.last_mut() {
            Some(last) if last.gen == l.gen => {
                last.exp += &l.exp;
                if last.exp.is_zero() {
                    out.pop();
                }
            }
            _ => out.push(l.clone()),
        }
    }
    Word(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Generator {
    X(usize),
    Y(usize),
    /// Stable letter of the given (non-tree) edge.
    Stable(usize),
}

/// Generators are `x_v, y_v` for each vertex in order, then one stable letter
/// per non-tree edge. Relators are the vertex commutators, then one
/// amalgamation relator per tree edge, then one HNN relator per non-tree edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub generators: Vec<Generator>,
    pub names: Vec<String>,
    pub relators: Vec<Word>,
    pub tree_edges: Vec<usize>,
    pub stable_edges: Vec<usize>,
}

impl Presentation {
    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn deficiency(&self) -> isize {
        self.generators.len() as isize - self.relators.len() as isize
    }

    pub fn stable_generator(&self, edge: usize) -> Option<usize> {
        self.generators.iter().position(|g| *g == Generator::Stable(edge))
    }

    /// The abelianized relation matrix (rows = relators, columns = generators).
    pub fn relation_matrix(&self) -> IntMatrix {
        let n = self.generators.len();
        let rows: Vec<Vec<Int>> = self.relators.iter().map(|r| r.abelianize(n)).collect();
        IntMatrix::from_rows(n, &rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::int;
    use proptest::prelude::*;

    fn v(p: i64, q: i64) -> LatticeVec {
        LatticeVec::new(p, q)
    }

    fn bouquet(loops: &[((i64, i64), (i64, i64))]) -> TubularGraph {
        let mut g = TubularGraph::new();
        g.add_vertex("v0");
        for (i, &(a, b)) in loops.iter().enumerate() {
            g.add_edge(format!("e{}", i + 1), 0, 0, v(a.0, a.1), v(b.0, b.1));
        }
        g
    }

    #[test]
    fn validate_examples() {
        let gersten = bouquet(&[((1, 0), (-1, 2)), ((1, 0), (0, 1))]);
        assert!(gersten.validate().is_empty());

        let zero = bouquet(&[((0, 0), (1, 0))]);
        assert_eq!(zero.validate(), vec![Violation::ZeroInclusion { edge: 0, side: Side::Src }]);

        let mut two = TubularGraph::new();
        two.add_vertex("a");
        two.add_vertex("b");
        assert_eq!(two.validate(), vec![Violation::Disconnected]);

        let mut dangling = TubularGraph::new();
        dangling.add_vertex("a");
        dangling.add_edge("e", 0, 3, v(1, 0), v(1, 0));
        assert_eq!(dangling.validate(), vec![Violation::DanglingEndpoint { edge: 0, side: Side::Dst }]);
    }

    #[test]
    fn spanning_tree_examples() {
        let gersten = bouquet(&[((1, 0), (-1, 2)), ((1, 0), (0, 1))]);
        assert!(gersten.spanning_tree().is_empty());

        let mut path = TubularGraph::new();
        for n in ["a", "b", "c"] {
            path.add_vertex(n);
        }
        path.add_edge("e0", 0, 1, v(1, 0), v(1, 0));
        path.add_edge("e1", 1, 2, v(0, 1), v(1, 0));
        assert_eq!(path.spanning_tree(), vec![0, 1]);

        let mut tri = path.clone();
        tri.add_edge("e2", 2, 0, v(1, 1), v(1, 0));
        assert_eq!(tri.spanning_tree(), vec![0, 1]);
        assert_eq!(tri.non_tree_edges(), vec![2]);
    }

    #[test]
    fn betti_examples() {
        assert_eq!(bouquet(&[((1, 0), (0, 1))]).betti(), Ok(1));
        assert_eq!(bouquet(&[((1, 0), (-1, 2)), ((1, 0), (0, 1))]).betti(), Ok(2));
        let mut t = TubularGraph::new();
        t.add_vertex("a");
        t.add_vertex("b");
        assert_eq!(t.betti(), Err(GraphError::Disconnected));
        t.add_edge("e", 0, 1, v(1, 0), v(0, 1));
        assert_eq!(t.betti(), Ok(0));
    }

    #[test]
    fn burns_presentation() {
        let p = bouquet(&[((1, 0), (0, 1))]).presentation().unwrap();
        assert_eq!(p.names, vec!["x_v0", "y_v0", "t_e1"]);
        assert_eq!(p.relators.len(), 2);
        assert_eq!(p.relators[0], Word::from_letters([(0, 1), (1, 1), (0, -1), (1, -1)]));
        assert_eq!(p.relators[1], Word::from_letters([(2, 1), (0, 1), (2, -1), (1, -1)]));
        assert_eq!(p.deficiency(), 1);
    }

    #[test]
    fn presentation_counts() {
        let gersten = bouquet(&[((1, 0), (-1, 2)), ((1, 0), (0, 1))]).presentation().unwrap();
        assert_eq!((gersten.generators.len(), gersten.relators.len()), (4, 3));

        let mut t = TubularGraph::new();
        t.add_vertex("a");
        t.add_vertex("b");
        t.add_edge("e", 0, 1, v(2, 1), v(0, 3));
        let p = t.presentation().unwrap();
        assert_eq!((p.generators.len(), p.relators.len()), (4, 3));
        // amalgamation relator abelianizes to inc_src - inc_dst
        assert_eq!(p.relators[2].abelianize(4), vec![int(2), int(1), int(0), int(-3)]);

        let z2 = bouquet(&[]).presentation().unwrap();
        assert_eq!((z2.generators.len(), z2.relators.len()), (2, 1));
    }

    #[test]
    fn reduce_examples() {
        let w = Word::from_letters([(0, 1), (1, 1), (1, -1), (0, -1)]);
        assert!(reduce_word(&w).is_empty());
        let w = Word::from_letters([(0, 2), (0, 3)]);
        assert_eq!(reduce_word(&w), Word::from_letters([(0, 5)]));
        let w = Word::from_letters([(0, 1), (1, 1), (0, -1)]);
        assert_eq!(reduce_word(&w), w);
    }

    fn arb_word() -> impl Strategy<Value = Word> {
        proptest::collection::vec((0usize..3, -3i64..4), 0..12).prop_map(Word::from_letters)
    }

    proptest! {
        #[test]
        fn reduce_idempotent_and_shrinking(w in arb_word()) {
            let r = reduce_word(&w);
            prop_assert!(r.is_reduced());
            prop_assert!(r.len() <= w.len());
            prop_assert_eq!(reduce_word(&r), r.clone());
            prop_assert!(reduce_word(&w.concat(&w.inverse())).is_empty());
        }
    }
}
