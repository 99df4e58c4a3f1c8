use std::collections::{HashMap, VecDeque};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::graph::{Edge, Graph, Path};

use super::{GraphMap, MapError};

/// A letter of the free group on the non-tree edges: generator and sign.
type Letter = (usize, bool);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomotopyReport {
    pub is_equivalence: bool,
    pub rank: usize,
    /// Determinant of the induced map on the abelianization.
    pub abelian_det: BigInt,
    /// Images of the generators as reduced words.
    pub generator_images: Vec<Vec<Letter>>,
}

struct SpanningTree {
    /// Tree path from the base vertex to each vertex.
    path_to: Vec<Path>,
    /// Generator index of each geometric edge outside the tree.
    generator: Vec<Option<usize>>,
    rank: usize,
}

impl SpanningTree {
    fn new(g: &Graph) -> SpanningTree {
        let mut path_to: Vec<Option<Path>> = vec![None; g.vertex_count()];
        path_to[0] = Some(Vec::new());
        let mut in_tree = vec![false; g.edge_count()];
        let star = g.stars();
        let mut queue = VecDeque::from([0usize]);
        while let Some(v) = queue.pop_front() {
            for &e in &star[v] {
                let w = g.terminal(e).index();
                if path_to[w].is_none() {
                    let mut p = path_to[v].clone().unwrap();
                    p.push(e);
                    path_to[w] = Some(p);
                    in_tree[e.index()] = true;
                    queue.push_back(w);
                }
            }
        }
        let mut generator = vec![None; g.edge_count()];
        let mut rank = 0;
        for (i, t) in in_tree.iter().enumerate() {
            if !t {
                generator[i] = Some(rank);
                rank += 1;
            }
        }
        SpanningTree {
            path_to: path_to.into_iter().map(Option::unwrap).collect(),
            generator,
            rank,
        }
    }

    fn loop_of(&self, g: &Graph, i: usize) -> Path {
        let (a, b) = g.ends(i);
        let mut p = self.path_to[a.index()].clone();
        p.push(Edge::positive(i));
        p.extend(crate::graph::reverse(&self.path_to[b.index()]));
        p
    }

    fn word(&self, p: &[Edge]) -> Vec<Letter> {
        let mut w: Vec<Letter> = Vec::new();
        for e in p {
            if let Some(k) = self.generator[e.index()] {
                let l = (k, e.is_positive());
                if w.last() == Some(&(k, !l.1)) {
                    w.pop();
                } else {
                    w.push(l);
                }
            }
        }
        w
    }
}

/// Stallings folding of a bouquet of words.
struct Folding {
    parent: Vec<usize>,
    adj: Vec<HashMap<Letter, usize>>,
    pending: VecDeque<(usize, usize)>,
}

impl Folding {
    fn new() -> Folding {
        Folding {
            parent: vec![0],
            adj: vec![HashMap::new()],
            pending: VecDeque::new(),
        }
    }

    fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] != v {
            self.parent[v] = self.parent[self.parent[v]];
            v = self.parent[v];
        }
        v
    }

    fn fresh(&mut self) -> usize {
        self.parent.push(self.parent.len());
        self.adj.push(HashMap::new());
        self.parent.len() - 1
    }

    fn attach(&mut self, u: usize, x: Letter, v: usize) {
        let u = self.find(u);
        let v = self.find(v);
        match self.adj[u].get(&x).copied() {
            Some(w) => self.pending.push_back((v, w)),
            None => {
                self.adj[u].insert(x, v);
            }
        }
        let y = (x.0, !x.1);
        match self.adj[v].get(&y).copied() {
            Some(w) => self.pending.push_back((u, w)),
            None => {
                self.adj[v].insert(y, u);
            }
        }
        self.drain();
    }

    fn drain(&mut self) {
        while let Some((a, b)) = self.pending.pop_front() {
            let a = self.find(a);
            let b = self.find(b);
            if a == b {
                continue;
            }
            let (keep, gone) = if a < b { (a, b) } else { (b, a) };
            self.parent[gone] = keep;
            let moved: Vec<(Letter, usize)> = self.adj[gone].drain().collect();
            for (x, t) in moved {
                match self.adj[keep].get(&x).copied() {
                    Some(w) => self.pending.push_back((t, w)),
                    None => {
                        self.adj[keep].insert(x, t);
                    }
                }
            }
        }
    }

    fn add_word(&mut self, w: &[Letter]) {
        if w.is_empty() {
            return;
        }
        let mut cur = 0;
        for (i, &x) in w.iter().enumerate() {
            let next = if i + 1 == w.len() { 0 } else { self.fresh() };
            self.attach(cur, x, next);
            cur = next;
        }
    }

    /// True when the folded graph is the rose on all `rank` generators.
    fn is_full_rose(&mut self, rank: usize) -> bool {
        let roots: std::collections::BTreeSet<usize> =
            (0..self.parent.len()).map(|v| self.find(v)).collect();
        if roots.len() != 1 {
            return false;
        }
        let base = self.find(0);
        let targets: Vec<Option<usize>> = (0..rank)
            .flat_map(|k| [(k, true), (k, false)])
            .map(|x| self.adj[base].get(&x).copied())
            .collect();
        targets
            .into_iter()
            .all(|t| t.is_some_and(|t| self.find(t) == base))
    }
}

fn bareiss_det(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Decides whether `f` induces an isomorphism of fundamental groups.
///
/// The image of a free basis is folded; the induced map is onto exactly when
/// the folded graph is the full rose, and an onto endomorphism of a finitely
/// generated free group is an automorphism.
pub fn homotopy_equivalence(f: &GraphMap) -> Result<HomotopyReport, MapError> {
    let src = SpanningTree::new(f.domain());
    let dst = SpanningTree::new(f.codomain());
    let images: Vec<Vec<Letter>> = (0..f.domain().edge_count())
        .filter(|&i| src.generator[i].is_some())
        .map(|i| dst.word(&f.image_of_path(&src.loop_of(f.domain(), i))))
        .collect();

    let mut det_m = vec![vec![BigInt::zero(); src.rank]; dst.rank];
    for (j, w) in images.iter().enumerate() {
        for &(k, s) in w {
            det_m[k][j] += if s { 1 } else { -1 };
        }
    }
    let abelian_det = if src.rank == dst.rank {
        bareiss_det(det_m)
    } else {
        BigInt::zero()
    };

    let is_equivalence = src.rank == dst.rank && {
        let mut fold = Folding::new();
        for w in &images {
            fold.add_word(w);
        }
        fold.is_full_rose(dst.rank)
    };
    debug_assert!(!is_equivalence || abelian_det.abs().is_one());
    Ok(HomotopyReport {
        is_equivalence,
        rank: src.rank,
        abelian_det,
        generator_images: images,
    })
}
