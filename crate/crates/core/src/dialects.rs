//! Three presentations of the same topological graph or graph map.
//!
//! * long edges: valence-two vertices erased;
//! * short edges: the domain subdivided at preimages of vertices, so every
//!   edge maps to a single edge;
//! * blow-up: every vertex replaced by a complete graph of local vertices,
//!   one per direction, joined by local edges.
//!
//! Conversions come with path dictionaries so that a path can be carried
//! through any cycle of dialect changes and back unchanged.

use std::collections::HashMap;

use thiserror::Error;

use crate::graph::{is_reduced, reverse, Edge, Graph, GraphError, Path, Turn, Vertex};
use crate::map::{GraphMap, MapError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DialectError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error("every vertex has valence 2: the graph is a circle")]
    Circle,
    #[error("path is not reduced")]
    Unreduced,
    #[error("path starts or ends inside a subdivided edge")]
    PartialEdge,
    #[error("path does not follow the subdivision")]
    NotAligned,
    #[error("path starts or ends with a local edge")]
    LocalEnd,
    #[error("path has two consecutive local edges")]
    DoubleLocal,
    #[error("not a blown-up graph: {0}")]
    NotBlowUp(String),
}

/// A vertex and edge bijection between two graphs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphIso {
    pub vertex_map: Vec<Vertex>,
    /// Image of the positive orientation of each edge.
    pub edge_map: Vec<Edge>,
}

impl GraphIso {
    pub fn edge(&self, e: Edge) -> Edge {
        let x = self.edge_map[e.index()];
        if e.is_positive() {
            x
        } else {
            x.inv()
        }
    }

    pub fn identity(g: &Graph) -> GraphIso {
        GraphIso {
            vertex_map: g.vertices().collect(),
            edge_map: g.positive_edges().collect(),
        }
    }

    /// Checks bijectivity and compatibility with ends and orientation.
    pub fn verify(&self, g1: &Graph, g2: &Graph) -> bool {
        if g1.vertex_count() != g2.vertex_count() || g1.edge_count() != g2.edge_count() {
            return false;
        }
        let mut vs: Vec<Vertex> = self.vertex_map.clone();
        vs.sort();
        vs.dedup();
        let mut es: Vec<usize> = self.edge_map.iter().map(|e| e.index()).collect();
        es.sort();
        es.dedup();
        if vs.len() != g1.vertex_count() || es.len() != g1.edge_count() {
            return false;
        }
        g1.oriented_edges().all(|e| {
            let x = self.edge(e);
            g2.contains(x) && g2.initial(x) == self.vertex_map[g1.initial(e).index()]
        })
    }

    /// Checks that `f2 ∘ iso = f1` for two maps into the same codomain.
    pub fn verify_maps(&self, f1: &GraphMap, f2: &GraphMap) -> bool {
        f1.codomain() == f2.codomain()
            && self.verify(f1.domain(), f2.domain())
            && f1
                .domain()
                .positive_edges()
                .all(|e| f2.image(self.edge(e)) == f1.image(e))
    }
}

/// Backtracking search for an isomorphism; when maps are given, edges may
/// only be matched to edges with the same image.
fn search_iso(g1: &Graph, g2: &Graph, images: Option<(&GraphMap, &GraphMap)>) -> Option<GraphIso> {
    if g1.vertex_count() != g2.vertex_count() || g1.edge_count() != g2.edge_count() {
        return None;
    }
    let n = g1.edge_count();
    let mut vmap: Vec<Option<Vertex>> = vec![None; g1.vertex_count()];
    let mut vused = vec![false; g2.vertex_count()];
    let mut emap: Vec<Edge> = Vec::with_capacity(n);
    let mut eused = vec![false; n];

    #[allow(clippy::too_many_arguments)]
    fn go(
        i: usize,
        g1: &Graph,
        g2: &Graph,
        images: Option<(&GraphMap, &GraphMap)>,
        vmap: &mut Vec<Option<Vertex>>,
        vused: &mut Vec<bool>,
        emap: &mut Vec<Edge>,
        eused: &mut Vec<bool>,
    ) -> bool {
        if i == g1.edge_count() {
            return true;
        }
        let e = Edge::positive(i);
        let (a, b) = g1.ends(i);
        for c in g2.oriented_edges() {
            if eused[c.index()] {
                continue;
            }
            if let Some((f1, f2)) = images {
                if f2.image(c) != f1.image(e) {
                    continue;
                }
            }
            if g1.valence(a) != g2.valence(g2.initial(c))
                || g1.valence(b) != g2.valence(g2.terminal(c))
            {
                continue;
            }
            let mut assigned = Vec::new();
            let mut ok = true;
            for (v, w) in [(a, g2.initial(c)), (b, g2.terminal(c))] {
                match vmap[v.index()] {
                    Some(x) if x != w => ok = false,
                    Some(_) => {}
                    None => {
                        if vused[w.index()] {
                            ok = false;
                        } else {
                            vmap[v.index()] = Some(w);
                            vused[w.index()] = true;
                            assigned.push(v);
                        }
                    }
                }
                if !ok {
                    break;
                }
            }
            if ok {
                eused[c.index()] = true;
                emap.push(c);
                if go(i + 1, g1, g2, images, vmap, vused, emap, eused) {
                    return true;
                }
                emap.pop();
                eused[c.index()] = false;
            }
            for v in assigned {
                vused[vmap[v.index()].unwrap().index()] = false;
                vmap[v.index()] = None;
            }
        }
        false
    }

    if go(
        0, g1, g2, images, &mut vmap, &mut vused, &mut emap, &mut eused,
    ) {
        let iso = GraphIso {
            vertex_map: vmap
                .into_iter()
                .map(|v| v.expect("connected graph"))
                .collect(),
            edge_map: emap,
        };
        debug_assert!(iso.verify(g1, g2));
        Some(iso)
    } else {
        None
    }
}

pub fn find_graph_iso(g1: &Graph, g2: &Graph) -> Option<GraphIso> {
    search_iso(g1, g2, None)
}

/// An isomorphism `iso` of domains with `f2 ∘ iso = f1`.
pub fn find_map_iso(f1: &GraphMap, f2: &GraphMap) -> Option<GraphIso> {
    if f1.codomain() != f2.codomain() {
        return None;
    }
    search_iso(f1.domain(), f2.domain(), Some((f1, f2)))
}

// ---------------------------------------------------------------------------
// Long edges

/// `Long(Γ)`: the graph with valence-two vertices erased.
#[derive(Clone, Debug)]
pub struct LongForm {
    pub graph: Graph,
    /// Original edges making up each long edge, in its positive direction.
    pub chains: Vec<Path>,
    /// For each original positive edge: long oriented edge and position.
    position: Vec<(Edge, usize)>,
    /// Long vertex of each original vertex of valence other than two.
    pub vertex_of: Vec<Option<Vertex>>,
}

/// A path in the long-edge dialect that may begin and end inside long edges:
/// the concatenated chains with `start_skip` original edges removed at the
/// front and `end_skip` at the back.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LongPath {
    pub edges: Vec<Edge>,
    pub start_skip: usize,
    pub end_skip: usize,
}

pub fn to_long(g: &Graph) -> Result<LongForm, DialectError> {
    let intrinsic: Vec<bool> = g.vertices().map(|v| g.valence(v) != 2).collect();
    if !intrinsic.iter().any(|&x| x) {
        return Err(DialectError::Circle);
    }
    let mut vertex_of = vec![None; g.vertex_count()];
    let mut names = Vec::new();
    for v in g.vertices() {
        if intrinsic[v.index()] {
            vertex_of[v.index()] = Some(Vertex(names.len() as u32));
            names.push(g.vertex_name(v).to_string());
        }
    }
    let star = g.stars();
    let mut used = vec![false; 2 * g.edge_count()];
    let mut chains: Vec<Path> = Vec::new();
    let mut ends = Vec::new();
    for v in g.vertices().filter(|v| intrinsic[v.index()]) {
        for &d in &star[v.index()] {
            if used[d.0 as usize] {
                continue;
            }
            let mut chain = vec![d];
            loop {
                let last = *chain.last().unwrap();
                let w = g.terminal(last);
                if intrinsic[w.index()] {
                    break;
                }
                let next = star[w.index()]
                    .iter()
                    .copied()
                    .find(|&x| x != last.inv())
                    .expect("valence two");
                chain.push(next);
            }
            used[d.0 as usize] = true;
            used[chain.last().unwrap().inv().0 as usize] = true;
            let end = g.terminal(*chain.last().unwrap());
            let name = chain
                .iter()
                .map(|&e| g.edge_token(e).replace('~', "i"))
                .collect::<Vec<_>>()
                .join("_");
            ends.push((
                name,
                vertex_of[v.index()].unwrap().index(),
                vertex_of[end.index()].unwrap().index(),
            ));
            chains.push(chain);
        }
    }
    let mut position = vec![(Edge(0), 0); g.edge_count()];
    for (i, chain) in chains.iter().enumerate() {
        for (j, &e) in chain.iter().enumerate() {
            position[e.index()] = if e.is_positive() {
                (Edge::positive(i), j)
            } else {
                (Edge::negative(i), chain.len() - 1 - j)
            };
        }
    }
    let graph = Graph::new(names, ends)?;
    Ok(LongForm {
        graph,
        chains,
        position,
        vertex_of,
    })
}

impl LongForm {
    /// Original edges along a long oriented edge.
    pub fn chain(&self, e: Edge) -> Path {
        let c = &self.chains[e.index()];
        if e.is_positive() {
            c.clone()
        } else {
            reverse(c)
        }
    }

    /// Long oriented edge containing an original oriented edge, and the
    /// position of that edge along it.
    pub fn locate(&self, e: Edge) -> (Edge, usize) {
        let (l, j) = self.position[e.index()];
        if e.is_positive() {
            (l, j)
        } else {
            (l.inv(), self.chains[l.index()].len() - 1 - j)
        }
    }

    pub fn to_long_path(&self, p: &[Edge]) -> Result<LongPath, DialectError> {
        if !is_reduced(p) {
            return Err(DialectError::Unreduced);
        }
        let Some(&first) = p.first() else {
            return Ok(LongPath {
                edges: vec![],
                start_skip: 0,
                end_skip: 0,
            });
        };
        let (l0, j0) = self.locate(first);
        let mut edges = vec![l0];
        let mut at = j0;
        for &e in &p[1..] {
            let (l, j) = self.locate(e);
            let cur = *edges.last().unwrap();
            if l == cur && j == at + 1 {
                at = j;
            } else if j == 0 && at + 1 == self.chains[cur.index()].len() {
                edges.push(l);
                at = 0;
            } else {
                return Err(DialectError::NotAligned);
            }
        }
        let last = *edges.last().unwrap();
        Ok(LongPath {
            edges,
            start_skip: j0,
            end_skip: self.chains[last.index()].len() - 1 - at,
        })
    }

    pub fn from_long_path(&self, lp: &LongPath) -> Path {
        let full: Path = lp.edges.iter().flat_map(|&e| self.chain(e)).collect();
        full[lp.start_skip..full.len() - lp.end_skip].to_vec()
    }

    /// `Long(f)`: the map on the long-edge domain with the same codomain.
    pub fn long_map(&self, f: &GraphMap) -> Result<GraphMap, DialectError> {
        let images = (0..self.chains.len())
            .map(|i| f.image_of_path(&self.chains[i]))
            .collect();
        let vimg = f
            .domain()
            .vertices()
            .filter(|v| self.vertex_of[v.index()].is_some())
            .map(|v| f.vertex_image(v))
            .collect();
        Ok(GraphMap::new(
            self.graph.clone(),
            f.codomain().clone(),
            vimg,
            images,
        )?)
    }
}

/// `Long(f)` together with the long form of its domain.
pub fn long_of_map(f: &GraphMap) -> Result<(LongForm, GraphMap), DialectError> {
    let lf = to_long(f.domain())?;
    let m = lf.long_map(f)?;
    Ok((lf, m))
}

// ---------------------------------------------------------------------------
// Short edges

/// `Short(f)`: the domain subdivided so that every edge maps to one edge.
#[derive(Clone, Debug)]
pub struct ShortForm {
    pub map: GraphMap,
    /// Parent edge and position of each short positive edge.
    pub parent: Vec<(usize, usize)>,
    /// Index of the first short edge of each original edge.
    first: Vec<usize>,
    lens: Vec<usize>,
}

pub fn to_short(f: &GraphMap) -> Result<ShortForm, DialectError> {
    let g = f.domain();
    let mut vnames: Vec<String> = g.vertex_names().to_vec();
    let mut ends = Vec::new();
    let mut parent = Vec::new();
    let mut first = Vec::new();
    let mut lens = Vec::new();
    let mut images = Vec::new();
    let mut vimg: Vec<Vertex> = g.vertices().map(|v| f.vertex_image(v)).collect();
    for i in 0..g.edge_count() {
        let img = f.image(Edge::positive(i));
        if img.is_empty() {
            return Err(MapError::Contracted(g.edge_name(i).to_string()).into());
        }
        let (a, b) = g.ends(i);
        first.push(parent.len());
        lens.push(img.len());
        let mut prev = a.index();
        for (j, &x) in img.iter().enumerate() {
            let next = if j + 1 == img.len() {
                b.index()
            } else {
                vnames.push(format!("{}.{}", g.edge_name(i), j + 1));
                vimg.push(f.codomain().terminal(x));
                vnames.len() - 1
            };
            ends.push((format!("{}.{}", g.edge_name(i), j), prev, next));
            parent.push((i, j));
            images.push(vec![x]);
            prev = next;
        }
    }
    let sg = Graph::new(vnames, ends)?;
    let map = GraphMap::new(sg, f.codomain().clone(), vimg, images)?;
    Ok(ShortForm {
        map,
        parent,
        first,
        lens,
    })
}

impl ShortForm {
    /// Short oriented edges along an original oriented edge.
    pub fn refine_edge(&self, e: Edge) -> Path {
        let s = self.first[e.index()];
        let p: Path = (s..s + self.lens[e.index()]).map(Edge::positive).collect();
        if e.is_positive() {
            p
        } else {
            reverse(&p)
        }
    }

    pub fn refine(&self, p: &[Edge]) -> Path {
        p.iter().flat_map(|&e| self.refine_edge(e)).collect()
    }

    /// Inverse of [`ShortForm::refine`]; fails on paths that begin or end in
    /// the interior of an original edge.
    pub fn coarsen(&self, p: &[Edge]) -> Result<Path, DialectError> {
        let mut out = Vec::new();
        let mut k = 0;
        while k < p.len() {
            let (i, j) = self.parent[p[k].index()];
            let orig = if (p[k].is_positive() && j == 0)
                || (!p[k].is_positive() && j + 1 == self.lens[i])
            {
                if p[k].is_positive() {
                    Edge::positive(i)
                } else {
                    Edge::negative(i)
                }
            } else {
                return Err(DialectError::PartialEdge);
            };
            let run = self.refine_edge(orig);
            if p.len() < k + run.len() {
                return Err(DialectError::PartialEdge);
            }
            if p[k..k + run.len()] != run[..] {
                return Err(DialectError::NotAligned);
            }
            out.push(orig);
            k += run.len();
        }
        Ok(out)
    }
}

// ---------------------------------------------------------------------------
// Blow-up

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlowEdge {
    /// The edge standing for a base edge.
    NonLocal(usize),
    /// A local edge inside the class of a base vertex.
    Local(usize),
}

/// A blown-up graph: a graph whose vertices are partitioned into classes,
/// each spanning a complete graph of local edges, with every vertex the
/// endpoint of exactly one non-local edge.
#[derive(Clone, Debug)]
pub struct BlowUp {
    pub graph: Graph,
    pub class: Vec<usize>,
    pub kinds: Vec<BlowEdge>,
    class_names: Vec<String>,
}

impl BlowUp {
    /// Validates a graph as a blow-up; `is_local[i]` flags local edges.
    pub fn from_parts(
        graph: Graph,
        class: Vec<usize>,
        is_local: Vec<bool>,
        class_names: Vec<String>,
    ) -> Result<BlowUp, DialectError> {
        let bad = |s: &str| Err(DialectError::NotBlowUp(s.to_string()));
        if class.len() != graph.vertex_count() || is_local.len() != graph.edge_count() {
            return bad("table sizes");
        }
        let classes = class.iter().max().map_or(0, |m| m + 1);
        if class_names.len() != classes || (0..classes).any(|c| !class.contains(&c)) {
            return bad("class labels");
        }
        let mut nonlocal_at = vec![0usize; graph.vertex_count()];
        let mut pairs = std::collections::BTreeSet::new();
        let mut kinds = Vec::new();
        let mut nl = 0;
        for (i, &local) in is_local.iter().enumerate() {
            let (a, b) = graph.ends(i);
            if local {
                if a == b || class[a.index()] != class[b.index()] {
                    return bad("local edge leaves its class or is a loop");
                }
                if !pairs.insert((a.min(b), a.max(b))) {
                    return bad("parallel local edges");
                }
                kinds.push(BlowEdge::Local(class[a.index()]));
            } else {
                if a == b {
                    return bad("non-local loop");
                }
                nonlocal_at[a.index()] += 1;
                nonlocal_at[b.index()] += 1;
                kinds.push(BlowEdge::NonLocal(nl));
                nl += 1;
            }
        }
        if nonlocal_at.iter().any(|&k| k != 1) {
            return bad("vertex not on exactly one non-local edge");
        }
        for c in 0..classes {
            let members: Vec<usize> = (0..class.len()).filter(|&v| class[v] == c).collect();
            let want = members.len() * (members.len() - 1) / 2;
            let have = pairs.iter().filter(|(a, _)| class[a.index()] == c).count();
            if want != have {
                return bad("class is not a complete graph");
            }
        }
        Ok(BlowUp {
            graph,
            class,
            kinds,
            class_names,
        })
    }

    pub fn is_local(&self, e: Edge) -> bool {
        matches!(self.kinds[e.index()], BlowEdge::Local(_))
    }

    /// `Contr`: collapse each class to a vertex; non-local edges become the
    /// edges of the contracted graph, in order.
    pub fn contract(&self) -> Result<Graph, DialectError> {
        let mut ends = Vec::new();
        for (i, k) in self.kinds.iter().enumerate() {
            if let BlowEdge::NonLocal(_) = k {
                let (a, b) = self.graph.ends(i);
                ends.push((
                    self.graph.edge_name(i).to_string(),
                    self.class[a.index()],
                    self.class[b.index()],
                ));
            }
        }
        Ok(Graph::new(self.class_names.clone(), ends)?)
    }

    /// Edge of the contracted graph for a non-local edge.
    pub fn base_edge(&self, e: Edge) -> Option<Edge> {
        match self.kinds[e.index()] {
            BlowEdge::NonLocal(k) => Some(if e.is_positive() {
                Edge::positive(k)
            } else {
                Edge::negative(k)
            }),
            BlowEdge::Local(_) => None,
        }
    }

    /// Drops local edges. The path must not begin or end with a local edge
    /// nor contain two consecutive ones.
    pub fn project(&self, p: &[Edge]) -> Result<Path, DialectError> {
        if p.first().is_some_and(|&e| self.is_local(e))
            || p.last().is_some_and(|&e| self.is_local(e))
        {
            return Err(DialectError::LocalEnd);
        }
        if p.windows(2)
            .any(|w| self.is_local(w[0]) && self.is_local(w[1]))
        {
            return Err(DialectError::DoubleLocal);
        }
        Ok(p.iter().filter_map(|&e| self.base_edge(e)).collect())
    }
}

/// `Blow-up(Γ)` with the bookkeeping to move between the two.
#[derive(Clone, Debug)]
pub struct BlownGraph {
    pub base: Graph,
    pub blow: BlowUp,
    /// Local vertex of each base direction.
    vertex_of_dir: Vec<Vertex>,
    /// Local oriented edge from `v_{t.first}` to `v_{t.second}`.
    local_of_turn: HashMap<Turn, Edge>,
}

pub fn blow_up(g: &Graph) -> BlownGraph {
    let mut vnames = Vec::new();
    let mut class = Vec::new();
    let mut vertex_of_dir = vec![Vertex(0); 2 * g.edge_count()];
    for v in g.vertices() {
        for d in g.star(v) {
            vertex_of_dir[d.0 as usize] = Vertex(vnames.len() as u32);
            vnames.push(format!(
                "{}.{}",
                g.vertex_name(v),
                g.edge_token(d).replace('~', "i")
            ));
            class.push(v.index());
        }
    }
    let mut ends = Vec::new();
    let mut is_local = Vec::new();
    for e in g.positive_edges() {
        ends.push((
            g.edge_name(e.index()).to_string(),
            vertex_of_dir[e.0 as usize].index(),
            vertex_of_dir[e.inv().0 as usize].index(),
        ));
        is_local.push(false);
    }
    let mut local_of_turn = HashMap::new();
    for v in g.vertices() {
        let dirs = g.star(v);
        for (i, &a) in dirs.iter().enumerate() {
            for &b in &dirs[i + 1..] {
                let t = Turn::new(a, b);
                local_of_turn.insert(t, Edge::positive(ends.len()));
                ends.push((
                    format!("t{}", ends.len() - g.edge_count()),
                    vertex_of_dir[t.first().0 as usize].index(),
                    vertex_of_dir[t.second().0 as usize].index(),
                ));
                is_local.push(true);
            }
        }
    }
    let graph = Graph::new(vnames, ends).expect("blow-up of a valid graph is valid");
    let blow = BlowUp::from_parts(graph, class, is_local, g.vertex_names().to_vec())
        .expect("blow-up satisfies its own axioms");
    BlownGraph {
        base: g.clone(),
        blow,
        vertex_of_dir,
        local_of_turn,
    }
}

impl BlownGraph {
    pub fn graph(&self) -> &Graph {
        &self.blow.graph
    }

    pub fn vertex_of_dir(&self, d: Edge) -> Vertex {
        self.vertex_of_dir[d.0 as usize]
    }

    /// Local oriented edge from `v_a` to `v_b`, for distinct directions at a vertex.
    pub fn local_edge(&self, a: Edge, b: Edge) -> Edge {
        let t = Turn::new(a, b);
        let e = self.local_of_turn[&t];
        if t.first() == a {
            e
        } else {
            e.inv()
        }
    }

    pub fn nonlocal(&self, e: Edge) -> Edge {
        e
    }

    /// Inserts the local edge for every turn crossed by a reduced path.
    pub fn lift(&self, p: &[Edge]) -> Result<Path, DialectError> {
        if !is_reduced(p) {
            return Err(DialectError::Unreduced);
        }
        let mut out = Vec::with_capacity(2 * p.len());
        for (k, &e) in p.iter().enumerate() {
            if k > 0 {
                out.push(self.local_edge(p[k - 1].inv(), e));
            }
            out.push(self.nonlocal(e));
        }
        Ok(out)
    }

    pub fn project(&self, p: &[Edge]) -> Result<Path, DialectError> {
        self.blow.project(p)
    }
}

/// The explicit isomorphism `Blow-up(Contr(ĝ)) -> ĝ` read off from the
/// unique non-local edge at each vertex.
pub fn blow_up_of_contraction(b: &BlowUp) -> Result<(BlownGraph, GraphIso), DialectError> {
    let base = b.contract()?;
    let again = blow_up(&base);
    let g = &b.graph;
    // Direction of the contracted graph at each vertex of ĝ.
    let mut dir_at = vec![Edge(0); g.vertex_count()];
    for e in g.positive_edges() {
        if let Some(x) = b.base_edge(e) {
            dir_at[g.initial(e).index()] = x;
            dir_at[g.terminal(e).index()] = x.inv();
        }
    }
    let mut vertex_map = vec![Vertex(0); again.graph().vertex_count()];
    for u in g.vertices() {
        vertex_map[again.vertex_of_dir(dir_at[u.index()]).index()] = u;
    }
    let mut edge_map = vec![Edge(0); again.graph().edge_count()];
    for e in g.positive_edges() {
        let img = match b.base_edge(e) {
            Some(x) => x,
            None => again.local_edge(dir_at[g.initial(e).index()], dir_at[g.terminal(e).index()]),
        };
        let slot = if img.is_positive() { e } else { e.inv() };
        edge_map[img.index()] = slot;
    }
    let iso = GraphIso {
        vertex_map,
        edge_map,
    };
    if !iso.verify(again.graph(), g) {
        return Err(DialectError::NotBlowUp(
            "contraction does not blow up to the same graph".into(),
        ));
    }
    Ok((again, iso))
}

/// `Blow-up(f)` between blown-up domain and codomain.
#[derive(Clone, Debug)]
pub struct BlownMap {
    pub domain: BlownGraph,
    pub codomain: BlownGraph,
    pub map: GraphMap,
    /// Local edges of the domain contracted to a point.
    pub illegal: Vec<bool>,
}

pub fn blow_up_map(f: &GraphMap) -> Result<BlownMap, DialectError> {
    f.require_reduced()?;
    let dom = blow_up(f.domain());
    let cod = blow_up(f.codomain());
    let g = f.domain();
    let df = |d: Edge| f.direction(d).expect("non-trivial image");
    let vimg: Vec<Vertex> = dom
        .graph()
        .vertices()
        .map(|u| {
            let d = g
                .oriented_edges()
                .find(|&d| dom.vertex_of_dir(d) == u)
                .unwrap();
            cod.vertex_of_dir(df(d))
        })
        .collect();
    let mut images = Vec::new();
    let mut illegal = Vec::new();
    for e in dom.graph().positive_edges() {
        match dom.blow.kinds[e.index()] {
            BlowEdge::NonLocal(k) => {
                images.push(cod.lift(&f.image(Edge::positive(k)))?);
                illegal.push(false);
            }
            BlowEdge::Local(_) => {
                let (a, b) = dom.graph().ends(e.index());
                let da = g
                    .oriented_edges()
                    .find(|&d| dom.vertex_of_dir(d) == a)
                    .unwrap();
                let db = g
                    .oriented_edges()
                    .find(|&d| dom.vertex_of_dir(d) == b)
                    .unwrap();
                let (x, y) = (df(da), df(db));
                if x == y {
                    images.push(vec![]);
                    illegal.push(true);
                } else {
                    images.push(vec![cod.local_edge(x, y)]);
                    illegal.push(false);
                }
            }
        }
    }
    let map = GraphMap::new(dom.graph().clone(), cod.graph().clone(), vimg, images)?;
    Ok(BlownMap {
        domain: dom,
        codomain: cod,
        map,
        illegal,
    })
}

impl BlownMap {
    /// `Contr(f̂)`: drop local edges from the images of non-local edges.
    pub fn contract(&self) -> Result<GraphMap, DialectError> {
        let dom = self.domain.blow.contract()?;
        let cod = self.codomain.blow.contract()?;
        let images: Vec<Path> = self
            .domain
            .graph()
            .positive_edges()
            .filter(|&e| !self.domain.blow.is_local(e))
            .map(|e| {
                self.map
                    .image(e)
                    .into_iter()
                    .filter_map(|x| self.codomain.blow.base_edge(x))
                    .collect()
            })
            .collect();
        let vimg: Vec<Vertex> = dom
            .vertices()
            .map(|v| {
                let u = (0..self.domain.blow.class.len())
                    .find(|&u| self.domain.blow.class[u] == v.index())
                    .unwrap();
                let w = self.map.vertex_image(Vertex(u as u32));
                Vertex(self.codomain.blow.class[w.index()] as u32)
            })
            .collect();
        Ok(GraphMap::new(dom, cod, vimg, images)?)
    }
}
