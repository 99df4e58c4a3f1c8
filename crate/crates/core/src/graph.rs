//! Graphs with an orientation involution, edge paths, turns and languages.
//!
//! Every geometric edge carries two oriented edges. An [`Edge`] packs the
//! geometric index and the orientation into one integer: `2i` is the positive
//! orientation of edge `i` and `2i + 1` its inverse, so `inv` is a bit flip.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Vertex(pub u32);

impl Vertex {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge(pub u32);

impl Edge {
    pub fn positive(i: usize) -> Edge {
        Edge(2 * i as u32)
    }

    pub fn negative(i: usize) -> Edge {
        Edge(2 * i as u32 + 1)
    }

    pub fn inv(self) -> Edge {
        Edge(self.0 ^ 1)
    }

    /// Index of the underlying geometric edge.
    pub fn index(self) -> usize {
        (self.0 >> 1) as usize
    }

    pub fn is_positive(self) -> bool {
        self.0 & 1 == 0
    }

    /// The positive orientation of the same geometric edge.
    pub fn unsigned(self) -> Edge {
        Edge(self.0 & !1)
    }
}

impl fmt::Debug for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_positive() {
            write!(f, "e{}", self.index())
        } else {
            write!(f, "~e{}", self.index())
        }
    }
}

pub type Path = Vec<Edge>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("graph has no edges")]
    Empty,
    #[error("graph is not connected")]
    Disconnected,
    #[error("vertex {0} has valence {1}, at least 2 is required")]
    LowValence(String, usize),
    #[error("edge references unknown vertex index {0}")]
    UnknownVertex(usize),
    #[error("duplicate name {0}")]
    DuplicateName(String),
    #[error("edges {0:?} and {1:?} are not adjacent")]
    NotAdjacent(Edge, Edge),
    #[error("edge {0:?} is not in the graph")]
    UnknownEdge(Edge),
}

/// A finite connected graph in which every vertex has valence at least two.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    vertex_names: Vec<String>,
    edge_names: Vec<String>,
    /// `(initial, terminal)` of the positive orientation of each edge.
    ends: Vec<(Vertex, Vertex)>,
}

impl Graph {
    pub fn new(
        vertex_names: Vec<String>,
        edges: Vec<(String, usize, usize)>,
    ) -> Result<Graph, GraphError> {
        let mut seen = BTreeSet::new();
        for n in vertex_names.iter() {
            if !seen.insert(n.clone()) {
                return Err(GraphError::DuplicateName(n.clone()));
            }
        }
        let mut seen = BTreeSet::new();
        let mut ends = Vec::with_capacity(edges.len());
        let mut edge_names = Vec::with_capacity(edges.len());
        for (name, a, b) in edges {
            if !seen.insert(name.clone()) {
                return Err(GraphError::DuplicateName(name));
            }
            for v in [a, b] {
                if v >= vertex_names.len() {
                    return Err(GraphError::UnknownVertex(v));
                }
            }
            ends.push((Vertex(a as u32), Vertex(b as u32)));
            edge_names.push(name);
        }
        let g = Graph {
            vertex_names,
            edge_names,
            ends,
        };
        g.validate()?;
        Ok(g)
    }

    /// Graph with anonymous names `v0..` and `e0..`.
    pub fn from_ends(vertex_count: usize, ends: &[(usize, usize)]) -> Result<Graph, GraphError> {
        Graph::new(
            (0..vertex_count).map(|i| format!("v{i}")).collect(),
            ends.iter()
                .enumerate()
                .map(|(i, &(a, b))| (format!("e{i}"), a, b))
                .collect(),
        )
    }

    /// The rose with one vertex and the given petals.
    pub fn rose(names: &[&str]) -> Graph {
        Graph::new(
            vec!["v".to_string()],
            names.iter().map(|n| (n.to_string(), 0, 0)).collect(),
        )
        .expect("a rose with at least one petal is valid")
    }

    fn validate(&self) -> Result<(), GraphError> {
        if self.ends.is_empty() {
            return Err(GraphError::Empty);
        }
        for v in self.vertices() {
            let d = self.valence(v);
            if d < 2 {
                return Err(GraphError::LowValence(self.vertex_name(v).to_string(), d));
            }
        }
        let mut seen = vec![false; self.vertex_count()];
        let mut queue = VecDeque::from([Vertex(0)]);
        seen[0] = true;
        let star = self.stars();
        while let Some(v) = queue.pop_front() {
            for &e in &star[v.index()] {
                let w = self.terminal(e);
                if !seen[w.index()] {
                    seen[w.index()] = true;
                    queue.push_back(w);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(GraphError::Disconnected);
        }
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.ends.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> {
        (0..self.vertex_count() as u32).map(Vertex)
    }

    /// The positive section `Edges⁺`, in index order.
    pub fn positive_edges(&self) -> impl Iterator<Item = Edge> {
        (0..self.edge_count()).map(Edge::positive)
    }

    /// All oriented edges, `e0, ~e0, e1, ~e1, ...`.
    pub fn oriented_edges(&self) -> impl Iterator<Item = Edge> {
        (0..2 * self.edge_count() as u32).map(Edge)
    }

    pub fn contains(&self, e: Edge) -> bool {
        e.index() < self.edge_count()
    }

    pub fn terminal(&self, e: Edge) -> Vertex {
        let (a, b) = self.ends[e.index()];
        if e.is_positive() {
            b
        } else {
            a
        }
    }

    pub fn initial(&self, e: Edge) -> Vertex {
        self.terminal(e.inv())
    }

    /// Oriented edges starting at `v`, i.e. the directions at `v`.
    pub fn star(&self, v: Vertex) -> Vec<Edge> {
        self.oriented_edges()
            .filter(|&e| self.initial(e) == v)
            .collect()
    }

    pub fn stars(&self) -> Vec<Vec<Edge>> {
        let mut s = vec![Vec::new(); self.vertex_count()];
        for e in self.oriented_edges() {
            s[self.initial(e).index()].push(e);
        }
        s
    }

    pub fn valence(&self, v: Vertex) -> usize {
        self.oriented_edges()
            .filter(|&e| self.initial(e) == v)
            .count()
    }

    pub fn vertex_name(&self, v: Vertex) -> &str {
        &self.vertex_names[v.index()]
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertex_names
    }

    pub fn edge_name(&self, i: usize) -> &str {
        &self.edge_names[i]
    }

    pub fn edge_names(&self) -> &[String] {
        &self.edge_names
    }

    pub fn ends(&self, i: usize) -> (Vertex, Vertex) {
        self.ends[i]
    }

    pub fn edge_by_name(&self, name: &str) -> Option<Edge> {
        self.edge_names
            .iter()
            .position(|n| n == name)
            .map(Edge::positive)
    }

    pub fn vertex_by_name(&self, name: &str) -> Option<Vertex> {
        self.vertex_names
            .iter()
            .position(|n| n == name)
            .map(|i| Vertex(i as u32))
    }

    /// Token for an oriented edge: its name, with `~` marking the inverse.
    pub fn edge_token(&self, e: Edge) -> String {
        if e.is_positive() {
            self.edge_names[e.index()].clone()
        } else {
            format!("~{}", self.edge_names[e.index()])
        }
    }

    pub fn path_string(&self, p: &[Edge]) -> String {
        p.iter()
            .map(|&e| self.edge_token(e))
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Parses a whitespace separated path such as `a ~b a`.
    pub fn parse_path(&self, s: &str) -> Option<Path> {
        s.split_whitespace()
            .map(|t| match t.strip_prefix('~') {
                Some(n) if !n.starts_with('~') => self.edge_by_name(n).map(Edge::inv),
                Some(_) => None,
                None => self.edge_by_name(t),
            })
            .collect()
    }

    /// Checks that consecutive edges are adjacent and all edges exist.
    pub fn check_path(&self, p: &[Edge]) -> Result<(), GraphError> {
        for &e in p {
            if !self.contains(e) {
                return Err(GraphError::UnknownEdge(e));
            }
        }
        for w in p.windows(2) {
            if self.terminal(w[0]) != self.initial(w[1]) {
                return Err(GraphError::NotAdjacent(w[0], w[1]));
            }
        }
        Ok(())
    }

    pub fn is_path(&self, p: &[Edge]) -> bool {
        self.check_path(p).is_ok()
    }

    /// All reduced edge paths of exactly the given length.
    pub fn reduced_paths(&self, len: usize) -> Vec<Path> {
        let mut out = Vec::new();
        if len == 0 {
            return out;
        }
        let star = self.stars();
        let mut stack: Vec<Path> = self.oriented_edges().map(|e| vec![e]).collect();
        stack.reverse();
        while let Some(p) = stack.pop() {
            if p.len() == len {
                out.push(p);
                continue;
            }
            let last = *p.last().unwrap();
            let mut next: Vec<Path> = star[self.terminal(last).index()]
                .iter()
                .filter(|&&e| e != last.inv())
                .map(|&e| {
                    let mut q = p.clone();
                    q.push(e);
                    q
                })
                .collect();
            next.reverse();
            stack.extend(next);
        }
        out
    }

    /// All reduced edge paths of length `1..=max_len`, by length then edge order.
    pub fn reduced_paths_up_to(&self, max_len: usize) -> Vec<Path> {
        (1..=max_len).flat_map(|l| self.reduced_paths(l)).collect()
    }
}

pub fn reverse(p: &[Edge]) -> Path {
    p.iter().rev().map(|e| e.inv()).collect()
}

pub fn is_reduced(p: &[Edge]) -> bool {
    p.windows(2).all(|w| w[1] != w[0].inv())
}

/// Free reduction: cancels adjacent `e ē` pairs until none remain.
pub fn reduce(p: &[Edge]) -> Path {
    let mut out: Path = Vec::with_capacity(p.len());
    for &e in p {
        if out.last() == Some(&e.inv()) {
            out.pop();
        } else {
            out.push(e);
        }
    }
    out
}

/// Whether `needle` occurs as a contiguous subpath of `hay`.
pub fn is_subpath(needle: &[Edge], hay: &[Edge]) -> bool {
    needle.is_empty() || hay.windows(needle.len()).any(|w| w == needle)
}

/// Number of occurrences of `needle` in `hay`, overlaps included.
pub fn occurrences(needle: &[Edge], hay: &[Edge]) -> usize {
    if needle.is_empty() || needle.len() > hay.len() {
        return 0;
    }
    hay.windows(needle.len()).filter(|w| *w == needle).count()
}

/// An unordered pair of directions with a common initial vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Turn(Edge, Edge);

impl Turn {
    pub fn new(a: Edge, b: Edge) -> Turn {
        if a <= b {
            Turn(a, b)
        } else {
            Turn(b, a)
        }
    }

    /// The turn crossed by the two-edge path `e1 e2`, namely `{ē1, e2}`.
    pub fn crossed(e1: Edge, e2: Edge) -> Turn {
        Turn::new(e1.inv(), e2)
    }

    pub fn first(self) -> Edge {
        self.0
    }

    pub fn second(self) -> Edge {
        self.1
    }

    pub fn is_degenerate(self) -> bool {
        self.0 == self.1
    }

    pub fn contains(self, d: Edge) -> bool {
        self.0 == d || self.1 == d
    }

    pub fn map(self, f: impl Fn(Edge) -> Edge) -> Turn {
        Turn::new(f(self.0), f(self.1))
    }
}

/// Turns crossed at the interior vertices of a path.
pub fn turns_of(p: &[Edge]) -> impl Iterator<Item = Turn> + '_ {
    p.windows(2).map(|w| Turn::crossed(w[0], w[1]))
}

/// A set of reduced edge paths of bounded length.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Language {
    pub max_len: usize,
    pub paths: BTreeSet<Path>,
}

impl Language {
    pub fn new(max_len: usize) -> Self {
        Language {
            max_len,
            paths: BTreeSet::new(),
        }
    }

    pub fn contains(&self, p: &[Edge]) -> bool {
        self.paths.contains(p)
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    pub fn insert(&mut self, p: Path) {
        debug_assert!(p.len() <= self.max_len);
        self.paths.insert(p);
    }

    /// Closed under subpaths and reversal, the truncated form of laminarity.
    pub fn is_laminary(&self) -> bool {
        self.paths.iter().all(|p| {
            self.paths.contains(&reverse(p))
                && (1..p.len()).all(|l| p.windows(l).all(|w| self.paths.contains(w)))
        })
    }

    pub fn add_reversals(&mut self) {
        let rev: Vec<Path> = self.paths.iter().map(|p| reverse(p)).collect();
        self.paths.extend(rev);
    }

    pub fn is_subset(&self, other: &Language) -> bool {
        self.paths.iter().all(|p| other.paths.contains(p))
    }

    pub fn of_length(&self, l: usize) -> impl Iterator<Item = &Path> {
        self.paths.iter().filter(move |p| p.len() == l)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn theta() -> Graph {
        Graph::from_ends(2, &[(0, 1), (0, 1), (0, 1)]).unwrap()
    }

    #[test]
    fn involution_and_ends() {
        let g = theta();
        for e in g.oriented_edges() {
            assert_ne!(e, e.inv());
            assert_eq!(e.inv().inv(), e);
            assert_eq!(g.initial(e), g.terminal(e.inv()));
        }
        assert_eq!(g.valence(Vertex(0)), 3);
    }

    #[test]
    fn rejects_bad_graphs() {
        assert_eq!(
            Graph::from_ends(2, &[(0, 1)]),
            Err(GraphError::LowValence("v0".into(), 1))
        );
        assert_eq!(
            Graph::from_ends(2, &[(0, 0), (1, 1)]),
            Err(GraphError::Disconnected)
        );
        assert_eq!(Graph::from_ends(1, &[]), Err(GraphError::Empty));
    }

    #[test]
    fn path_checks() {
        let g = theta();
        let a = Edge::positive(0);
        let b = Edge::positive(1);
        assert!(g.is_path(&[a, b.inv()]));
        assert!(!g.is_path(&[a, b]));
        assert!(!is_reduced(&[a, a.inv()]));
        assert_eq!(reduce(&[a, b.inv(), b, a.inv()]), vec![]);
    }

    #[test]
    fn rose_path_counts() {
        let g = Graph::rose(&["a", "b"]);
        assert_eq!(g.reduced_paths(1).len(), 4);
        assert_eq!(g.reduced_paths(3).len(), 36);
        assert_eq!(g.parse_path("a ~b"), Some(vec![Edge(0), Edge(3)]));
        assert_eq!(g.parse_path("~~a"), None);
        assert_eq!(g.path_string(&[Edge(1), Edge(2)]), "~a b");
    }

    #[test]
    fn turn_normalization() {
        let a = Edge::positive(0);
        let b = Edge::positive(1);
        assert_eq!(Turn::crossed(a, b), Turn::new(b, a.inv()));
        assert!(Turn::crossed(a, a.inv()).is_degenerate());
    }

    #[test]
    fn laminary_closure() {
        let g = Graph::rose(&["a", "b"]);
        let mut l = Language::new(2);
        for p in g.reduced_paths_up_to(2) {
            l.insert(p);
        }
        assert!(l.is_laminary());
        l.paths.remove(&vec![Edge(0)]);
        assert!(!l.is_laminary());
    }

    fn any_word() -> impl Strategy<Value = Path> {
        proptest::collection::vec((0u32..6).prop_map(Edge), 0..12)
    }

    proptest! {
        #[test]
        fn reverse_is_an_involution(p in any_word()) {
            prop_assert_eq!(reverse(&reverse(&p)), p);
        }

        #[test]
        fn reduce_is_idempotent_and_reduced(p in any_word()) {
            let r = reduce(&p);
            prop_assert!(is_reduced(&r));
            prop_assert_eq!(reduce(&r), r.clone());
            prop_assert_eq!(reduce(&reverse(&p)), reverse(&r));
        }
    }
}
