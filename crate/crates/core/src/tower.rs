//! The stationary graph tower of an expanding train track map, and the vector
//! and weight towers carried by it.
//!
//! Levels are virtual. Every level graph is the domain `Γ` itself, the level
//! map `f_{m,n}` is `f^{n-m}`, and a short edge at level `n` is addressed by
//! a positive edge `e` together with a position in `f^n(e)`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use thiserror::Error;

use crate::dialects::{to_short, DialectError, ShortForm};
use crate::graph::{turns_of, Edge, Graph, Path, Turn};
use crate::interval::Interval;
use crate::map::{infinitely_legal_language, is_legal_path, GraphMap, MapError, TurnTable};
use crate::matrix::IntMatrix;
use crate::spectra::{residual, Eigenpair};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TowerError {
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Dialect(#[from] DialectError),
    #[error("eigenvalue is not certified to exceed 1")]
    SmallEigenvalue,
    #[error("vector has {0} entries, graph has {1} edges")]
    Dimension(usize, usize),
    #[error("vector entry {0} is certified negative")]
    Negative(usize),
    #[error("eigen-identity residual excludes zero at edge {0}")]
    NotEigenvector(usize),
    #[error("level {level} has minimal edge length {have}, need {need}")]
    LevelTooLow { level: u32, have: u128, need: usize },
}

/// Position `pos` inside `f^n(edge)` for a positive `edge`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ShortEdge {
    pub edge: Edge,
    pub pos: usize,
}

/// A short edge with an orientation.
pub type OrientedShort = (ShortEdge, bool);

#[derive(Debug)]
pub struct StationaryTower {
    f: GraphMap,
    table: TurnTable,
    matrix: IntMatrix,
    /// `iterates[n][e]` is `f^n(e)` for every oriented edge `e`.
    iterates: RwLock<Vec<Arc<Vec<Path>>>>,
}

impl StationaryTower {
    pub fn new(f: &GraphMap) -> Result<StationaryTower, TowerError> {
        f.require_train_track()?;
        let g = f.domain();
        if g.vertices().any(|v| g.valence(v) == 2) {
            return Err(MapError::HasValenceTwo.into());
        }
        let id: Vec<Path> = g.oriented_edges().map(|e| vec![e]).collect();
        Ok(StationaryTower {
            f: f.clone(),
            table: TurnTable::new(f)?,
            matrix: f.transition_matrix(),
            iterates: RwLock::new(vec![Arc::new(id)]),
        })
    }

    pub fn map(&self) -> &GraphMap {
        &self.f
    }

    pub fn graph(&self) -> &Graph {
        self.f.domain()
    }

    pub fn turn_table(&self) -> &TurnTable {
        &self.table
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    /// `f^n(e)` for every oriented edge, indexed by `Edge.0`.
    pub fn images(&self, n: u32) -> Arc<Vec<Path>> {
        let n = n as usize;
        if let Some(x) = self.iterates.read().unwrap().get(n) {
            return x.clone();
        }
        let mut cache = self.iterates.write().unwrap();
        while cache.len() <= n {
            let prev = cache.last().unwrap().clone();
            let next: Vec<Path> = self
                .graph()
                .oriented_edges()
                .map(|e| {
                    self.f
                        .image(e)
                        .iter()
                        .flat_map(|x| prev[x.0 as usize].iter().copied())
                        .collect()
                })
                .collect();
            cache.push(Arc::new(next));
        }
        cache[n].clone()
    }

    pub fn image(&self, n: u32, e: Edge) -> Path {
        self.images(n)[e.0 as usize].clone()
    }

    /// Lengths `|f^n(e)|` of positive edges, without building the images.
    pub fn lengths(&self, n: u32) -> Vec<u128> {
        let g = self.graph();
        let mut len = vec![1u128; g.edge_count()];
        for _ in 0..n {
            len = g
                .positive_edges()
                .map(|e| {
                    self.f
                        .image(e)
                        .iter()
                        .fold(0u128, |acc, x| acc.saturating_add(len[x.index()]))
                })
                .collect();
        }
        len
    }

    /// Minimal length of `f^n(e)` over all edges.
    pub fn minlength(&self, n: u32) -> u128 {
        self.lengths(n).into_iter().min().unwrap()
    }

    /// Least `n` with `minlength(n) >= len`.
    pub fn level_for_length(&self, len: usize) -> u32 {
        let g = self.graph();
        let mut lens = vec![1u128; g.edge_count()];
        let mut n = 0;
        while *lens.iter().min().unwrap() < len as u128 {
            lens = g
                .positive_edges()
                .map(|e| {
                    self.f
                        .image(e)
                        .iter()
                        .fold(0u128, |acc, x| acc.saturating_add(lens[x.index()]))
                })
                .collect();
            n += 1;
        }
        n
    }

    pub fn require_level(&self, n: u32, need: usize) -> Result<(), TowerError> {
        let have = self.minlength(n);
        if have < need as u128 {
            return Err(TowerError::LevelTooLow {
                level: n,
                have,
                need,
            });
        }
        Ok(())
    }

    /// The level map `f_{m,n} = f^{n-m}`.
    pub fn level_map(&self, m: u32, n: u32) -> Result<GraphMap, TowerError> {
        assert!(m <= n, "level maps go down the tower");
        Ok(self.f.power(n - m)?)
    }

    /// Level `n` in the short-edge dialect with respect to `f^n`.
    pub fn level_graph(&self, n: u32) -> Result<ShortForm, TowerError> {
        Ok(to_short(&self.f.power(n)?)?)
    }

    /// Number of short edges of `e` at level `n`.
    pub fn short_count(&self, n: u32, e: Edge) -> usize {
        self.images(n)[e.unsigned().0 as usize].len()
    }

    /// The level-`n` short edge at position `pos` of the oriented `e`'s image.
    pub fn oriented_short(&self, n: u32, e: Edge, pos: usize) -> OrientedShort {
        if e.is_positive() {
            (ShortEdge { edge: e, pos }, true)
        } else {
            let len = self.short_count(n, e);
            (
                ShortEdge {
                    edge: e.inv(),
                    pos: len - 1 - pos,
                },
                false,
            )
        }
    }

    /// Image of a level-`n` short edge under `f_{m,n}`, as a level-`m`
    /// short edge with orientation relative to the source.
    pub fn project(&self, m: u32, n: u32, s: ShortEdge) -> OrientedShort {
        assert!(m <= n);
        let top = self.image(n - m, s.edge);
        let lower = self.images(m);
        let mut pos = s.pos;
        for x in top {
            let len = lower[x.0 as usize].len();
            if pos < len {
                return self.oriented_short(m, x, pos);
            }
            pos -= len;
        }
        panic!("short edge position out of range");
    }

    /// Level-`n` short edge windows of `len` short edges, with their parent
    /// paths drawn from `parents`.
    pub fn windows(&self, n: u32, len: usize, parents: &[Path]) -> Vec<Window> {
        windows_of(&self.images(n), len, parents)
    }

    /// Candidate parent paths of level-`n` windows of length `len`.
    pub fn window_parents(
        &self,
        len: usize,
        mode: RepetitionMode,
    ) -> Result<Vec<Path>, TowerError> {
        Ok(match mode {
            RepetitionMode::InfinitelyLegal => infinitely_legal_language(&self.f, len)?
                .paths
                .into_iter()
                .collect(),
            RepetitionMode::Legal => self
                .graph()
                .reduced_paths_up_to(len)
                .into_iter()
                .filter(|p| is_legal_path(&self.table, p))
                .collect(),
        })
    }
}

/// A run of short edges: the parent path whose image contains it, the
/// offset into the image of the first parent edge, and its image word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Window {
    pub parent: Path,
    pub offset: usize,
    pub image: Path,
    /// The middle short edge, as oriented parent edge and position.
    pub middle: (Edge, usize),
}

/// Windows of `len` consecutive short edges of the subdivision induced by
/// `images` (indexed by `Edge.0`), for every parent path that contributes
/// to the window with its first and last edge.
pub fn windows_of(images: &[Path], len: usize, parents: &[Path]) -> Vec<Window> {
    let mut out = Vec::new();
    if len == 0 {
        return out;
    }
    for c in parents {
        let lens: Vec<usize> = c.iter().map(|e| images[e.0 as usize].len()).collect();
        let total: usize = lens.iter().sum();
        let first = lens[0];
        let before_last = total - lens[lens.len() - 1];
        let word: Path = c
            .iter()
            .flat_map(|e| images[e.0 as usize].iter().copied())
            .collect();
        for k in 0..first {
            let end = k + len;
            if end > total || end <= before_last {
                continue;
            }
            let mid = k + len / 2;
            let mut acc = 0;
            let mut middle = (c[0], 0);
            for (i, &l) in lens.iter().enumerate() {
                if mid < acc + l {
                    middle = (c[i], mid - acc);
                    break;
                }
                acc += l;
            }
            out.push(Window {
                parent: c.clone(),
                offset: k,
                image: word[k..end].to_vec(),
                middle,
            });
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RepetitionMode {
    /// Windows inside infinitely legal paths.
    InfinitelyLegal,
    /// The stricter form over all legal paths.
    Legal,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RepetitionOutcome {
    Found(usize),
    /// Two windows of radius `cap` with equal images and different middle
    /// short edges.
    NotFoundWithinCap {
        cap: usize,
        witness: (Window, Window),
    },
}

impl RepetitionOutcome {
    pub fn found(&self) -> Option<usize> {
        match self {
            RepetitionOutcome::Found(r) => Some(*r),
            _ => None,
        }
    }
}

/// Two windows with the same image and different middle short edges, if any.
///
/// Middle short edges are compared as oriented short edges: `(x, j)` for a
/// negative `x` is the reverse of position `|image(x)| - 1 - j` of `x̄`.
pub fn repeated_pair(images: &[Path], windows: &[Window]) -> Option<(Window, Window)> {
    let canon = |(x, j): (Edge, usize)| {
        if x.is_positive() {
            (x, j, true)
        } else {
            (x.inv(), images[x.0 as usize].len() - 1 - j, false)
        }
    };
    let mut seen: HashMap<&Path, &Window> = HashMap::new();
    for w in windows {
        match seen.get(&w.image) {
            Some(other) if canon(other.middle) != canon(w.middle) => {
                return Some(((*other).clone(), w.clone()));
            }
            Some(_) => {}
            None => {
                seen.insert(&w.image, w);
            }
        }
    }
    None
}

/// Least radius `ρ <= cap` such that windows of `2ρ+1` short edges with the
/// same image share their middle short edge. `parents(len)` lists the
/// admissible parent paths up to length `len`.
pub fn repetition_search(
    images: &[Path],
    cap: usize,
    mut parents: impl FnMut(usize) -> Vec<Path>,
) -> RepetitionOutcome {
    let mut last = None;
    for rho in 0..=cap {
        let len = 2 * rho + 1;
        let ws = windows_of(images, len, &parents(len));
        match repeated_pair(images, &ws) {
            None => return RepetitionOutcome::Found(rho),
            Some(w) => last = Some(w),
        }
    }
    RepetitionOutcome::NotFoundWithinCap {
        cap,
        witness: last.expect("cap loop runs at least once"),
    }
}

/// Repetition bound of level `n` of the tower.
pub fn repetition_bound(
    tower: &StationaryTower,
    n: u32,
    cap: usize,
    mode: RepetitionMode,
) -> Result<RepetitionOutcome, TowerError> {
    let images = tower.images(n);
    let max = 2 * cap + 1;
    let all = tower.window_parents(max, mode)?;
    Ok(repetition_search(&images, cap, |len| {
        all.iter().filter(|p| p.len() <= len).cloned().collect()
    }))
}

/// Repetition bound of a single graph map over all reduced domain paths.
pub fn map_repetition_bound(f: &GraphMap, cap: usize) -> RepetitionOutcome {
    let images: Vec<Path> = f.domain().oriented_edges().map(|e| f.image(e)).collect();
    let g = f.domain();
    repetition_search(&images, cap, |len| g.reduced_paths_up_to(len))
}

/// Level vectors `v / λ^n` with `M v = λ v`.
#[derive(Clone, Debug)]
pub struct VectorTower {
    pub lambda: Interval,
    pub v: Vec<Interval>,
    pub bits: u32,
}

impl VectorTower {
    pub fn new(lambda: Interval, v: Vec<Interval>, bits: u32) -> VectorTower {
        VectorTower { lambda, v, bits }
    }

    pub fn from_eigenpair(ep: &Eigenpair) -> VectorTower {
        let bits = ep.precision.bits;
        VectorTower {
            lambda: ep.lambda.refined(ep.precision),
            v: ep.vector.clone(),
            bits,
        }
    }

    /// Rescales so that coordinate `i` is one.
    pub fn normalized_at(&self, i: usize) -> Option<VectorTower> {
        let inv = self.v[i].recip()?;
        Some(self.scaled(&inv))
    }

    pub fn scaled(&self, c: &Interval) -> VectorTower {
        VectorTower {
            lambda: self.lambda.clone(),
            v: self
                .v
                .iter()
                .map(|x| (x * c).rounded(self.bits + 16))
                .collect(),
            bits: self.bits,
        }
    }

    pub fn level(&self, n: u32) -> Vec<Interval> {
        let inv = self.lambda.recip().expect("λ > 1").pow(n);
        self.v
            .iter()
            .map(|x| (x * &inv).rounded(self.bits + 16))
            .collect()
    }

    /// `M(f_{m,n}) v_n - v_m`, which contains zero coordinatewise.
    pub fn compatibility_defect(&self, m_f: &IntMatrix, m: u32, n: u32) -> Vec<Interval> {
        let mv = mat_vec(&m_f.pow(n - m), &self.level(n), self.bits + 16);
        mv.iter().zip(self.level(m)).map(|(a, b)| a - &b).collect()
    }

    pub fn sum(&self) -> Interval {
        self.v.iter().cloned().sum()
    }
}

pub fn mat_vec(m: &IntMatrix, v: &[Interval], bits: u32) -> Vec<Interval> {
    (0..m.rows())
        .map(|i| {
            let s: Interval = (0..m.cols())
                .map(|j| v[j].scale(&BigRational::from_integer(BigInt::from(m.get(i, j)))))
                .sum();
            s.rounded(bits)
        })
        .collect()
}

/// Edge weights `v(e)` and turn weights `ω(τ)` at level zero; level `n`
/// values are divided by `λ^n`.
#[derive(Clone, Debug)]
pub struct WeightTower {
    pub lambda: Interval,
    pub lambda_inv: Interval,
    pub edge: Vec<Interval>,
    /// Weights of legal non-degenerate turns; every other turn weighs zero.
    pub turn: BTreeMap<Turn, Interval>,
    pub bits: u32,
}

/// Turn weights from the series
/// `ω(τ) = Σ_k λ^{-(k+1)} Σ_e #{junction turns τ'' of f(e) with Df^k(τ'') = τ} v(e)`.
///
/// A junction turn first shows up at level one inside `f(e)` with weight
/// `v(e)/λ`, and every later level pushes it forward by `Df` and divides by
/// `λ`. Orbits are eventually periodic, so each junction contributes
/// finitely many direct terms and one geometric tail per periodic turn.
pub fn weight_tower_from_vector(
    tower: &StationaryTower,
    vt: &VectorTower,
) -> Result<WeightTower, TowerError> {
    let g = tower.graph();
    if vt.v.len() != g.edge_count() {
        return Err(TowerError::Dimension(vt.v.len(), g.edge_count()));
    }
    if !vt.lambda.is_positive() || vt.lambda.lo() <= &BigRational::one() {
        return Err(TowerError::SmallEigenvalue);
    }
    if let Some(i) = vt.v.iter().position(|x| x.is_negative()) {
        return Err(TowerError::Negative(i));
    }
    let res = residual(tower.matrix(), &vt.lambda, &vt.v);
    if let Some(i) = res.iter().position(|r| !r.contains_zero()) {
        return Err(TowerError::NotEigenvector(i));
    }
    let bits = vt.bits + 16;
    let inv = vt.lambda.recip().expect("λ > 1").rounded(bits);
    let mut inv_pows = vec![Interval::one()];
    let push_pow = |p: &mut Vec<Interval>, k: usize| {
        while p.len() <= k {
            let x = (p.last().unwrap() * &inv).rounded(bits);
            p.push(x);
        }
    };

    let mut turn: BTreeMap<Turn, Interval> = BTreeMap::new();
    let table = tower.turn_table();
    for e in g.positive_edges() {
        let w = &vt.v[e.index()];
        if w.is_zero() {
            continue;
        }
        for t in turns_of(&tower.map().image(e)) {
            let orbit = table.orbit(t);
            let (pre, q) = (orbit.preperiod, orbit.period);
            push_pow(&mut inv_pows, pre + q + 1);
            let tail = (Interval::one() - inv_pows[q].clone())
                .recip()
                .expect("λ^q > 1");
            for (k, &tk) in orbit.turns.iter().enumerate() {
                debug_assert!(!tk.is_degenerate());
                let mut c = inv_pows[k + 1].clone();
                if k >= pre {
                    c = &c * &tail;
                }
                let add = (&c * w).rounded(bits);
                let slot = turn.entry(tk).or_insert_with(Interval::zero);
                *slot = (&*slot + &add).rounded(bits);
            }
        }
    }
    // Remaining legal turns carry zero weight explicitly.
    for v in g.vertices() {
        let star = g.star(v);
        for (i, &a) in star.iter().enumerate() {
            for &b in &star[i + 1..] {
                let t = Turn::new(a, b);
                if table.is_legal(t) {
                    turn.entry(t).or_insert_with(Interval::zero);
                }
            }
        }
    }
    Ok(WeightTower {
        lambda: vt.lambda.clone(),
        lambda_inv: inv,
        edge: vt.v.clone(),
        turn,
        bits,
    })
}

impl WeightTower {
    pub fn edge_weight(&self, e: Edge) -> &Interval {
        &self.edge[e.index()]
    }

    /// Weight of a turn; illegal and degenerate turns weigh exactly zero.
    pub fn turn_weight(&self, t: Turn) -> Interval {
        self.turn.get(&t).cloned().unwrap_or_else(Interval::zero)
    }

    pub fn level_scale(&self, n: u32) -> Interval {
        self.lambda_inv.pow(n).rounded(self.bits)
    }

    /// `v(d) - Σ_{τ ∋ d} ω(τ)` for every direction `d`.
    pub fn switch_defects(&self, g: &Graph) -> Vec<(Edge, Interval)> {
        g.oriented_edges()
            .map(|d| {
                let s: Interval = g
                    .star(g.initial(d))
                    .into_iter()
                    .filter(|&x| x != d)
                    .map(|x| self.turn_weight(Turn::new(d, x)))
                    .sum();
                (d, self.edge_weight(d) - &s)
            })
            .collect()
    }

    pub fn switch_holds(&self, g: &Graph) -> bool {
        self.switch_defects(g)
            .iter()
            .all(|(_, x)| x.contains_zero())
    }

    /// Turns whose weight is certified positive.
    pub fn positive_turns(&self) -> BTreeSet<Turn> {
        self.turn
            .iter()
            .filter(|(_, w)| w.is_positive())
            .map(|(t, _)| *t)
            .collect()
    }
}

/// A tower morphism that applies the same map at every level.
#[derive(Clone, Debug)]
pub struct TowerMorphism {
    level_map: GraphMap,
}

impl TowerMorphism {
    /// `g_n = f` on every level of the stationary tower of `f`.
    pub fn self_morphism(tower: &StationaryTower) -> TowerMorphism {
        TowerMorphism {
            level_map: tower.map().clone(),
        }
    }

    pub fn identity(tower: &StationaryTower) -> TowerMorphism {
        TowerMorphism {
            level_map: GraphMap::identity(tower.graph()),
        }
    }

    pub fn level(&self, _n: u32) -> &GraphMap {
        &self.level_map
    }

    /// `v'_n = M(g_n) v_n`.
    pub fn image_vector_tower(&self, vt: &VectorTower) -> VectorTower {
        let v = mat_vec(&self.level_map.transition_matrix(), &vt.v, vt.bits + 16);
        VectorTower {
            lambda: vt.lambda.clone(),
            v,
            bits: vt.bits,
        }
    }

    /// `M(g_k) M(f_{k,k+1}) = M(f_{k,k+1}) M(g_{k+1})`.
    pub fn commutes(&self, tower: &StationaryTower, k: u32) -> bool {
        let g = self.level(k).transition_matrix();
        let g1 = self.level(k + 1).transition_matrix();
        let f = tower.matrix();
        g.mul(f) == f.mul(&g1)
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::interval::{rat, Precision};
    use crate::map::fixtures::*;
    use crate::spectra::pf_eigenpair;

    pub fn fib_vectors() -> (StationaryTower, VectorTower) {
        let f = fibonacci();
        let t = StationaryTower::new(&f).unwrap();
        let ep = pf_eigenpair(t.matrix(), Precision::default()).unwrap();
        let vt = VectorTower::from_eigenpair(&ep).normalized_at(1).unwrap();
        (t, vt)
    }

    fn close(x: &Interval, y: f64) -> bool {
        (x.to_f64() - y).abs() < 1e-15 && x.width() < rat(1, 1_000_000_000_000_000)
    }

    const PHI: f64 = 1.618_033_988_749_895;

    #[test]
    fn fibonacci_minlength() {
        let t = StationaryTower::new(&fibonacci()).unwrap();
        let m: Vec<u128> = (0..7).map(|n| t.minlength(n)).collect();
        assert_eq!(m, vec![1, 1, 2, 3, 5, 8, 13]);
        assert_eq!(t.level_for_length(1), 0);
        assert_eq!(t.level_for_length(2), 2);
        assert_eq!(t.level_for_length(9), 6);
        let tm = StationaryTower::new(&thue_morse()).unwrap();
        assert!((0..8).all(|n| tm.minlength(n) == 1 << n));
    }

    #[test]
    fn level_graphs() {
        let t = StationaryTower::new(&fibonacci()).unwrap();
        let s = t.level_graph(2).unwrap();
        assert_eq!(s.refine_edge(Edge(0)).len(), 3);
        assert_eq!(s.refine_edge(Edge(2)).len(), 2);
        assert_eq!(t.level_map(0, 0).unwrap(), GraphMap::identity(t.graph()));
        let f = t.map();
        assert_eq!(t.level_map(0, 2).unwrap(), f.compose(f).unwrap());
    }

    #[test]
    fn projections_compose() {
        let t = StationaryTower::new(&fibonacci()).unwrap();
        for e in t.graph().positive_edges() {
            for pos in 0..t.short_count(5, e) {
                let s = ShortEdge { edge: e, pos };
                let (mid, o1) = t.project(2, 5, s);
                let (low, o2) = t.project(0, 2, mid);
                assert_eq!(t.project(0, 5, s), (low, o1 == o2));
                assert_eq!(low.pos, 0);
            }
        }
    }

    #[test]
    fn fibonacci_turn_weights() {
        let (t, vt) = fib_vectors();
        let w = weight_tower_from_vector(&t, &vt).unwrap();
        let g = t.graph();
        let tw = |s: &str| {
            let p = g.parse_path(s).unwrap();
            w.turn_weight(Turn::new(p[0], p[1]))
        };
        assert!(close(&tw("~a b"), 1.0));
        assert!(close(&tw("~b a"), 1.0));
        assert!(close(&tw("~a a"), PHI - 1.0));
        assert!(tw("~a ~b").is_zero());
        assert!(tw("a b").is_zero());
        assert!(w.switch_holds(g));
    }

    #[test]
    fn thue_morse_switch_conditions() {
        let f = thue_morse();
        let t = StationaryTower::new(&f).unwrap();
        let ep = pf_eigenpair(t.matrix(), Precision::default()).unwrap();
        let vt = VectorTower::from_eigenpair(&ep).normalized_at(0).unwrap();
        let w = weight_tower_from_vector(&t, &vt).unwrap();
        for (_, d) in w.switch_defects(t.graph()) {
            assert!(d.contains_zero());
            assert!(d.width() < rat(1, 1_000_000_000_000_000_000));
        }
    }

    #[test]
    fn wrong_vectors_are_rejected() {
        let (t, vt) = fib_vectors();
        let bad = VectorTower::new(
            vt.lambda.clone(),
            vec![Interval::one(), Interval::one()],
            128,
        );
        assert_eq!(
            weight_tower_from_vector(&t, &bad).unwrap_err(),
            TowerError::NotEigenvector(0)
        );
        let small = VectorTower::new(Interval::one(), vt.v.clone(), 128);
        assert_eq!(
            weight_tower_from_vector(&t, &small).unwrap_err(),
            TowerError::SmallEigenvalue
        );
    }

    #[test]
    fn repetition_bounds() {
        let t = StationaryTower::new(&fibonacci()).unwrap();
        let r = repetition_bound(&t, 1, 4, RepetitionMode::InfinitelyLegal).unwrap();
        assert_eq!(r.found(), Some(1));

        let dom = Graph::rose(&["a", "b"]);
        let cod = Graph::rose(&["c"]);
        let c = Edge::positive(0);
        let f = GraphMap::new(
            dom,
            cod,
            vec![crate::graph::Vertex(0)],
            vec![vec![c], vec![c]],
        )
        .unwrap();
        match map_repetition_bound(&f, 2) {
            RepetitionOutcome::NotFoundWithinCap { cap, witness } => {
                assert_eq!(cap, 2);
                assert_eq!(witness.0.image, witness.1.image);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn self_morphism_scales_by_lambda() {
        let (t, vt) = fib_vectors();
        let m = TowerMorphism::self_morphism(&t);
        let img = m.image_vector_tower(&vt);
        assert!(close(&img.v[0], PHI * PHI));
        assert!(close(&img.v[1], PHI));
        for (a, b) in img.v.iter().zip(&vt.v) {
            assert!((a - &(b * &vt.lambda)).contains_zero());
        }
        assert!(m.commutes(&t, 0));
        let id = TowerMorphism::identity(&t).image_vector_tower(&vt);
        assert!(id.v.iter().zip(&vt.v).all(|(a, b)| (a - b).contains_zero()));
    }

    #[test]
    fn vector_tower_compatibility() {
        let (t, vt) = fib_vectors();
        for (m, n) in [(0, 1), (1, 4), (2, 2)] {
            assert!(vt
                .compatibility_defect(t.matrix(), m, n)
                .iter()
                .all(|d| d.contains_zero()));
        }
        let tiny = vt.level(60);
        assert!(tiny[0].to_f64() < 1e-12);
    }
}
