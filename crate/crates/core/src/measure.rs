//! Kolmogorov functions: non-negative, flip-symmetric path functions obeying
//! the Kirchhoff rules.
//!
//! The main source is a weight tower on a stationary tower: the value of a
//! path is read off at the first level whose edges are at least as long as
//! the path, where every occurrence either sits inside the image of one edge
//! or straddles exactly one vertex through a legal turn.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use thiserror::Error;

use crate::graph::{is_reduced, occurrences, reverse, Edge, Graph, Path, Turn};
use crate::interval::Interval;
use crate::map::{infinitely_legal_language, minimal_covers, GraphMap, MapError};
use crate::tower::{
    repeated_pair, weight_tower_from_vector, RepetitionMode, ShortEdge, StationaryTower,
    TowerError, VectorTower, WeightTower,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MeasureError {
    #[error(transparent)]
    Tower(#[from] TowerError),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error("the trivial path has no cylinder value")]
    Trivial,
    #[error("path is not reduced")]
    Unreduced,
    #[error("not a path in the graph")]
    NotAPath,
    #[error("table is complete only up to length {have}, need {need}")]
    Incomplete { have: usize, need: usize },
    #[error("windows {0} and {1} share an image but not their middle edge")]
    Repeating(String, String),
}

/// Anything that assigns certified values to reduced paths of a graph.
pub trait Measure {
    fn graph(&self) -> &Graph;
    fn value(&self, p: &[Edge]) -> Result<Interval, MeasureError>;
}

/// A finite table of path values, with absent entries read as zero up to
/// `complete_to`. Longer entries may be present but are not relied upon.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasureTable {
    pub graph: Graph,
    pub complete_to: usize,
    pub entries: BTreeMap<Path, Interval>,
    pub external: bool,
}

impl MeasureTable {
    pub fn new(graph: Graph, complete_to: usize, external: bool) -> MeasureTable {
        MeasureTable {
            graph,
            complete_to,
            entries: BTreeMap::new(),
            external,
        }
    }

    /// Inserts a value together with its reversal.
    pub fn insert(&mut self, p: Path, v: Interval) {
        self.entries.insert(reverse(&p), v.clone());
        self.entries.insert(p, v);
    }

    /// Divides every value so that single-edge values sum to one over
    /// positive edges.
    pub fn normalized(&self) -> Option<MeasureTable> {
        let total: Interval = self
            .graph
            .positive_edges()
            .map(|e| {
                self.entries
                    .get(&vec![e])
                    .cloned()
                    .unwrap_or_else(Interval::zero)
            })
            .sum();
        let inv = total.recip()?;
        let mut t = self.clone();
        for v in t.entries.values_mut() {
            *v = &*v * &inv;
        }
        Some(t)
    }

    /// Pairs `(γ, δ)` with `δ` a subpath of `γ` and `μ(γ) > μ(δ)` certified.
    /// Kolmogorov functions are monotone under passing to subpaths.
    pub fn monotonicity_violations(&self) -> Vec<(Path, Path)> {
        let mut out = Vec::new();
        for (p, v) in &self.entries {
            for l in 1..p.len() {
                for w in p.windows(l) {
                    if let Some(u) = self.entries.get(w) {
                        if (v - u).is_positive() {
                            out.push((p.clone(), w.to_vec()));
                        }
                    }
                }
            }
        }
        out.sort();
        out.dedup();
        out
    }

    /// The table restricted to paths of length at most `len`.
    pub fn truncated(&self, len: usize) -> MeasureTable {
        MeasureTable {
            graph: self.graph.clone(),
            complete_to: self.complete_to.min(len),
            entries: self
                .entries
                .iter()
                .filter(|(p, _)| p.len() <= len)
                .map(|(p, v)| (p.clone(), v.clone()))
                .collect(),
            external: self.external,
        }
    }
}

impl Measure for MeasureTable {
    fn graph(&self) -> &Graph {
        &self.graph
    }

    fn value(&self, p: &[Edge]) -> Result<Interval, MeasureError> {
        check_path(&self.graph, p)?;
        if let Some(v) = self.entries.get(p) {
            return Ok(v.clone());
        }
        if p.len() > self.complete_to {
            return Err(MeasureError::Incomplete {
                have: self.complete_to,
                need: p.len(),
            });
        }
        Ok(Interval::zero())
    }
}

fn check_path(g: &Graph, p: &[Edge]) -> Result<(), MeasureError> {
    if p.is_empty() {
        return Err(MeasureError::Trivial);
    }
    if !g.is_path(p) {
        return Err(MeasureError::NotAPath);
    }
    if !is_reduced(p) {
        return Err(MeasureError::Unreduced);
    }
    Ok(())
}

/// The Kolmogorov function of a weight tower on a stationary tower.
#[derive(Debug)]
pub struct KolmogorovFunction {
    tower: Arc<StationaryTower>,
    weights: WeightTower,
    memo: Mutex<HashMap<Path, Interval>>,
}

impl KolmogorovFunction {
    pub fn new(tower: Arc<StationaryTower>, weights: WeightTower) -> KolmogorovFunction {
        KolmogorovFunction {
            tower,
            weights,
            memo: Mutex::new(HashMap::new()),
        }
    }

    pub fn from_vector(
        tower: Arc<StationaryTower>,
        vt: &VectorTower,
    ) -> Result<KolmogorovFunction, MeasureError> {
        let w = weight_tower_from_vector(&tower, vt)?;
        Ok(KolmogorovFunction::new(tower, w))
    }

    pub fn tower(&self) -> &StationaryTower {
        &self.tower
    }

    pub fn weights(&self) -> &WeightTower {
        &self.weights
    }

    pub fn lambda(&self) -> &Interval {
        &self.weights.lambda
    }

    pub fn eval(&self, gamma: &[Edge]) -> Result<Interval, MeasureError> {
        check_path(self.tower.graph(), gamma)?;
        if let Some(v) = self.memo.lock().unwrap().get(gamma) {
            return Ok(v.clone());
        }
        let n = self.tower.level_for_length(gamma.len());
        let v = self.eval_at(gamma, n)?;
        self.memo.lock().unwrap().insert(gamma.to_vec(), v.clone());
        Ok(v)
    }

    /// Value read off at level `n`; any level with edges at least as long
    /// as `gamma` gives the same value.
    pub fn eval_at(&self, gamma: &[Edge], n: u32) -> Result<Interval, MeasureError> {
        let g = self.tower.graph();
        check_path(g, gamma)?;
        let len = gamma.len();
        self.tower.require_level(n, len)?;
        let images = self.tower.images(n);

        let mut edge_hits: BTreeMap<usize, u64> = BTreeMap::new();
        for e in g.oriented_edges() {
            let k = occurrences(gamma, &images[e.0 as usize]) as u64;
            if k > 0 {
                *edge_hits.entry(e.index()).or_default() += k;
            }
        }
        let mut turn_hits: BTreeMap<Turn, u64> = BTreeMap::new();
        let star = g.stars();
        for e1 in g.oriented_edges() {
            let a = &images[e1.0 as usize];
            for k in 1..len {
                if !a.ends_with(&gamma[..k]) {
                    continue;
                }
                for &e2 in &star[g.terminal(e1).index()] {
                    if e2 != e1.inv() && images[e2.0 as usize].starts_with(&gamma[k..]) {
                        *turn_hits.entry(Turn::new(e1.inv(), e2)).or_default() += 1;
                    }
                }
            }
        }

        let w = &self.weights;
        let count = |k: u64| BigRational::from_integer(BigInt::from(k));
        let mut total = Interval::zero();
        for (i, k) in edge_hits {
            total = &total + &w.edge[i].scale(&count(k));
        }
        for (t, k) in turn_hits {
            total = &total + &w.turn_weight(t).scale(&count(k));
        }
        Ok((&total * &w.level_scale(n)).rounded(w.bits))
    }

    /// Values of every infinitely legal path up to length `len`; all other
    /// reduced paths have value zero.
    pub fn table(&self, len: usize) -> Result<MeasureTable, MeasureError> {
        let lang = infinitely_legal_language(self.tower.map(), len)?;
        let mut t = MeasureTable::new(self.tower.graph().clone(), len, false);
        for p in lang.paths {
            let v = self.eval(&p)?;
            t.entries.insert(p, v);
        }
        Ok(t)
    }
}

impl Measure for KolmogorovFunction {
    fn graph(&self) -> &Graph {
        self.tower.graph()
    }

    fn value(&self, p: &[Edge]) -> Result<Interval, MeasureError> {
        self.eval(p)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Identity {
    /// `μ(γ̄) = μ(γ)`.
    Flip,
    /// `μ(γ) = Σ μ(e γ)`.
    Left,
    /// `μ(γ) = Σ μ(γ e)`.
    Right,
    /// `(f_*μ)(γ) = λ μ(γ)`.
    Eigen,
}

#[derive(Clone, Debug)]
pub struct Defect {
    pub path: Path,
    pub identity: Identity,
    pub defect: Interval,
}

#[derive(Clone, Debug, Default)]
pub struct CheckReport {
    pub checked: usize,
    /// Upper bound on `|defect|` over all identities checked.
    pub max_defect: BigRational,
    pub failures: Vec<Defect>,
    pub inconclusive: Vec<Defect>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.inconclusive.is_empty()
    }

    fn record(&mut self, d: Defect, tol: &BigRational) {
        self.checked += 1;
        let m = d.defect.mag();
        if m > self.max_defect {
            self.max_defect = m;
        }
        match d.defect.within(tol) {
            Some(true) => {}
            Some(false) => self.failures.push(d),
            None => self.inconclusive.push(d),
        }
    }

    pub fn max_defect_f64(&self) -> f64 {
        Interval::exact(self.max_defect.clone()).to_f64()
    }
}

/// Checks flip symmetry and both Kirchhoff rules for every reduced path of
/// length at most `max_len`.
pub fn verify_kolmogorov(
    m: &dyn Measure,
    max_len: usize,
    tol: &BigRational,
) -> Result<CheckReport, MeasureError> {
    let g = m.graph();
    let star = g.stars();
    let mut report = CheckReport::default();
    for p in g.reduced_paths_up_to(max_len) {
        let v = m.value(&p)?;
        report.record(
            Defect {
                path: p.clone(),
                identity: Identity::Flip,
                defect: &m.value(&reverse(&p))? - &v,
            },
            tol,
        );
        let first = p[0];
        let mut left = Interval::zero();
        for &e in &star[g.initial(first).index()] {
            let e0 = e.inv();
            if e0 != first.inv() {
                let mut q = vec![e0];
                q.extend_from_slice(&p);
                left = &left + &m.value(&q)?;
            }
        }
        report.record(
            Defect {
                path: p.clone(),
                identity: Identity::Left,
                defect: &v - &left,
            },
            tol,
        );
        let last = *p.last().unwrap();
        let mut right = Interval::zero();
        for &e in &star[g.terminal(last).index()] {
            if e != last.inv() {
                let mut q = p.clone();
                q.push(e);
                right = &right + &m.value(&q)?;
            }
        }
        report.record(
            Defect {
                path: p,
                identity: Identity::Right,
                defect: &v - &right,
            },
            tol,
        );
    }
    Ok(report)
}

/// `(f_*μ)(γ) = Σ μ(c)` over the minimal covers `c` of `γ` in the domain.
pub fn image_measure(
    f: &GraphMap,
    m: &dyn Measure,
    gamma: &[Edge],
) -> Result<Interval, MeasureError> {
    check_path(f.codomain(), gamma)?;
    let mut total = Interval::zero();
    for (c, _) in minimal_covers(f, gamma) {
        total = &total + &m.value(&c)?;
    }
    Ok(total)
}

#[derive(Clone, Debug, Default)]
pub struct EigenReport {
    pub checked: CheckReport,
    /// Paths with certified positive value outside the infinitely legal
    /// language of the map.
    pub outside_support: Vec<Path>,
}

impl EigenReport {
    pub fn passed(&self) -> bool {
        self.checked.passed() && self.outside_support.is_empty()
    }
}

/// Checks `f_*μ = λ μ` on every reduced path up to `max_len`, and that the
/// support lies in the infinitely legal language.
pub fn verify_eigen_measure(
    f: &GraphMap,
    m: &dyn Measure,
    lambda: &Interval,
    max_len: usize,
    tol: &BigRational,
) -> Result<EigenReport, MeasureError> {
    let lang = infinitely_legal_language(f, max_len)?;
    let mut r = EigenReport::default();
    for p in f.codomain().reduced_paths_up_to(max_len) {
        let v = m.value(&p)?;
        let img = image_measure(f, m, &p)?;
        r.checked.record(
            Defect {
                path: p.clone(),
                identity: Identity::Eigen,
                defect: &img - &(lambda * &v),
            },
            tol,
        );
        if v.is_positive() && !lang.contains(&p) {
            r.outside_support.push(p);
        }
    }
    Ok(r)
}

/// Level-`m` weights recovered from path values.
#[derive(Clone, Debug)]
pub struct RecoveredWeights {
    pub level: u32,
    pub short: BTreeMap<ShortEdge, Interval>,
}

impl RecoveredWeights {
    /// The weight of each positive edge, read at its first short edge.
    pub fn edge_vector(&self, g: &Graph) -> Vec<Interval> {
        g.positive_edges()
            .map(|e| self.short[&ShortEdge { edge: e, pos: 0 }].clone())
            .collect()
    }
}

/// Sums `μ(w)` over the distinct images `w` of infinitely legal windows of `2ρ+1`
/// short edges centred on each short edge of level `m`. A window image can
/// arise from several windows with the same middle edge; it is counted once.
pub fn recover_weights(
    m: &dyn Measure,
    tower: &StationaryTower,
    level: u32,
    rho: usize,
) -> Result<RecoveredWeights, MeasureError> {
    let len = 2 * rho + 1;
    let parents = tower.window_parents(len, RepetitionMode::InfinitelyLegal)?;
    let images = tower.images(level);
    let windows = tower.windows(level, len, &parents);

    let mut values: HashMap<Path, Interval> = HashMap::new();
    for w in &windows {
        if !values.contains_key(&w.image) {
            values.insert(w.image.clone(), m.value(&w.image)?);
        }
    }
    let charged: Vec<_> = windows
        .iter()
        .filter(|w| !values[&w.image].is_zero())
        .cloned()
        .collect();
    if let Some((a, b)) = repeated_pair(&images, &charged) {
        let g = tower.graph();
        return Err(MeasureError::Repeating(
            g.path_string(&a.parent),
            g.path_string(&b.parent),
        ));
    }

    let mut seen: HashSet<(ShortEdge, Path)> = HashSet::new();
    let mut short: BTreeMap<ShortEdge, Interval> = BTreeMap::new();
    for e in tower.graph().positive_edges() {
        for pos in 0..images[e.0 as usize].len() {
            short.insert(ShortEdge { edge: e, pos }, Interval::zero());
        }
    }
    for w in &windows {
        let (x, j) = w.middle;
        if !x.is_positive() {
            continue;
        }
        let s = ShortEdge { edge: x, pos: j };
        if seen.insert((s, w.image.clone())) {
            let slot = short.get_mut(&s).unwrap();
            *slot = &*slot + &values[&w.image];
        }
    }
    Ok(RecoveredWeights { level, short })
}

#[derive(Clone, Debug)]
pub struct OracleEstimate {
    pub level: u32,
    /// `λ^{-t} Σ_e occ±(γ, f^t(e)) v(e)`.
    pub value: Interval,
    /// The true value lies in `[value, value + tail]`.
    pub tail: Interval,
    /// Occurrences of `γ` or `γ̄` in `f^t(e)`, per positive edge.
    pub counts: Vec<u128>,
}

/// The visible part of a long word: the whole word while short, otherwise
/// its two ends with a gap that no pattern can match across.
#[derive(Clone, Debug)]
enum Piece {
    Full(Vec<Edge>),
    Cut(Vec<Edge>, Vec<Edge>),
}

impl Piece {
    fn visible(&self, out: &mut Vec<Option<Edge>>) {
        match self {
            Piece::Full(w) => out.extend(w.iter().map(|&e| Some(e))),
            Piece::Cut(a, b) => {
                out.extend(a.iter().map(|&e| Some(e)));
                out.push(None);
                out.extend(b.iter().map(|&e| Some(e)));
            }
        }
    }
}

fn count_in(seq: &[Option<Edge>], pat: &[Edge]) -> u128 {
    if pat.len() > seq.len() {
        return 0;
    }
    seq.windows(pat.len())
        .filter(|w| w.iter().zip(pat).all(|(a, b)| *a == Some(*b)))
        .count() as u128
}

/// Frequency estimate of `γ` from occurrence counts in `f^t(e)`, computed by
/// the recursion `occ(f^{t+1}(e)) = Σ_{x ∈ f(e)} occ(f^t(x)) + straddles`,
/// with the words themselves never built.
///
/// The tail bound assumes every `f^t(e)` has length at least `|γ|`: then the
/// only missed occurrences straddle a single vertex, at most `|γ| - 1` per
/// ordered turn, and the turn weights sum to `Σ v`.
pub fn frequency_oracle(
    f: &GraphMap,
    v: &[Interval],
    lambda: &Interval,
    gamma: &[Edge],
    t: u32,
) -> Result<OracleEstimate, MeasureError> {
    let g = f.domain();
    check_path(g, gamma)?;
    let len = gamma.len();
    let pats = [gamma.to_vec(), reverse(gamma)];
    let keep = len.max(1);
    let n_or = 2 * g.edge_count();
    let mut piece: Vec<Piece> = g.oriented_edges().map(|e| Piece::Full(vec![e])).collect();
    let mut size: Vec<u128> = vec![1; n_or];
    let mut occ: Vec<[u128; 2]> = g
        .oriented_edges()
        .map(|e| [(pats[0] == [e]) as u128, (pats[1] == [e]) as u128])
        .collect();
    for _ in 0..t {
        let mut np = Vec::with_capacity(n_or);
        let mut ns = Vec::with_capacity(n_or);
        let mut no = Vec::with_capacity(n_or);
        for e in g.oriented_edges() {
            let parts = f.image(e);
            let mut seq = Vec::new();
            let mut inside = [0u128; 2];
            let mut total_size = 0u128;
            let mut o = [0u128; 2];
            for x in &parts {
                let i = x.0 as usize;
                let mut own = Vec::new();
                piece[i].visible(&mut own);
                for k in 0..2 {
                    inside[k] += count_in(&own, &pats[k]);
                    o[k] += occ[i][k];
                }
                seq.extend(own);
                total_size = total_size.saturating_add(size[i]);
            }
            for k in 0..2 {
                o[k] += count_in(&seq, &pats[k]) - inside[k];
            }
            let all_full = !seq.contains(&None);
            let p = if all_full && seq.len() < 2 * keep + 2 {
                Piece::Full(seq.into_iter().map(Option::unwrap).collect())
            } else {
                let head: Vec<Edge> = seq.iter().take(keep).map(|x| x.unwrap()).collect();
                let tail: Vec<Edge> = seq[seq.len() - keep..].iter().map(|x| x.unwrap()).collect();
                Piece::Cut(head, tail)
            };
            np.push(p);
            ns.push(total_size);
            no.push(o);
        }
        piece = np;
        size = ns;
        occ = no;
    }
    if size.iter().any(|&s| s < len as u128) {
        return Err(TowerError::LevelTooLow {
            level: t,
            have: *size.iter().min().unwrap(),
            need: len,
        }
        .into());
    }
    let counts: Vec<u128> = g
        .positive_edges()
        .map(|e| occ[e.0 as usize][0] + occ[e.0 as usize][1])
        .collect();
    let scale = lambda.recip().expect("λ > 0").pow(t);
    let big = |k: u128| BigRational::from_integer(BigInt::from(k));
    let sum: Interval = counts.iter().zip(v).map(|(&k, x)| x.scale(&big(k))).sum();
    let mass: Interval = v.iter().cloned().sum();
    let tail = mass.scale(&big(2 * (len as u128 - 1))) * scale.clone();
    Ok(OracleEstimate {
        level: t,
        value: &sum * &scale,
        tail,
        counts,
    })
}

impl OracleEstimate {
    /// Whether `x` is compatible with `[value, value + tail]`.
    pub fn admits(&self, x: &Interval) -> bool {
        let hi = &self.value + &self.tail;
        x.hi() >= self.value.lo() && x.lo() <= hi.hi()
    }
}

/// `|x - y|` as an upper bound.
pub fn distance(x: &Interval, y: &Interval) -> BigRational {
    (x - y).mag().abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::{rat, Precision};
    use crate::map::fixtures::*;
    use crate::spectra::pf_eigenpair;
    use num_traits::Zero;

    const PHI: f64 = 1.618_033_988_749_895;

    fn kf(f: &GraphMap, at: usize) -> KolmogorovFunction {
        let t = Arc::new(StationaryTower::new(f).unwrap());
        let ep = pf_eigenpair(t.matrix(), Precision::default()).unwrap();
        let vt = VectorTower::from_eigenpair(&ep).normalized_at(at).unwrap();
        KolmogorovFunction::from_vector(t, &vt).unwrap()
    }

    fn val(k: &KolmogorovFunction, s: &str) -> f64 {
        k.eval(&k.graph().parse_path(s).unwrap()).unwrap().to_f64()
    }

    #[test]
    fn fibonacci_values() {
        let k = kf(&fibonacci(), 1);
        for (s, want) in [
            ("a", PHI),
            ("b", 1.0),
            ("a b", 1.0),
            ("b a", 1.0),
            ("a a", PHI - 1.0),
            ("b b", 0.0),
            ("~a", PHI),
            ("~b ~a", 1.0),
            ("a ~b", 0.0),
        ] {
            assert!((val(&k, s) - want).abs() < 1e-15, "{s}");
        }
    }

    #[test]
    fn thue_morse_values() {
        let k = kf(&thue_morse(), 0);
        for (s, want) in [
            ("a", 1.0),
            ("b", 1.0),
            ("a a", 1.0 / 3.0),
            ("a b", 2.0 / 3.0),
            ("b b", 1.0 / 3.0),
        ] {
            assert!((val(&k, s) - want).abs() < 1e-15, "{s}");
        }
    }

    #[test]
    fn level_independence() {
        let k = kf(&fibonacci(), 1);
        let g = k.graph().clone();
        for p in g.reduced_paths_up_to(4) {
            let n = k.tower().level_for_length(p.len());
            let a = k.eval_at(&p, n).unwrap();
            let b = k.eval_at(&p, n + 2).unwrap();
            assert!(a.overlaps(&b), "{}", g.path_string(&p));
        }
    }

    #[test]
    fn integer_table_kirchhoff() {
        let g = Graph::rose(&["a", "b"]);
        let mut t = MeasureTable::new(g.clone(), 3, true);
        for (s, v) in [
            ("a", 9),
            ("b", 18),
            ("a b", 9),
            ("b a", 9),
            ("b b", 9),
            ("a a", 0),
        ] {
            t.insert(g.parse_path(s).unwrap(), Interval::from_int(v));
        }
        for (s, v) in [
            ("a b a", 3),
            ("a b b", 6),
            ("b a b", 9),
            ("b b a", 6),
            ("b b b", 3),
        ] {
            t.insert(g.parse_path(s).unwrap(), Interval::from_int(v));
        }
        let r = verify_kolmogorov(&t, 2, &BigRational::zero()).unwrap();
        assert!(r.passed());
        assert!(r.max_defect.is_zero());

        let mut bad = t.clone();
        bad.insert(g.parse_path("a b").unwrap(), Interval::from_int(10));
        let r = verify_kolmogorov(&bad, 2, &BigRational::zero()).unwrap();
        let mut hit: Vec<(String, Identity)> = r
            .failures
            .iter()
            .map(|d| (g.path_string(&d.path), d.identity))
            .collect();
        hit.sort_by(|a, b| a.0.cmp(&b.0));
        // Identities touching a b or its reversal, and nothing else.
        let want = [
            ("a", Identity::Right),
            ("a b", Identity::Left),
            ("a b", Identity::Right),
            ("b", Identity::Left),
            ("~a", Identity::Left),
            ("~b", Identity::Right),
            ("~b ~a", Identity::Left),
            ("~b ~a", Identity::Right),
        ];
        assert_eq!(hit, want.map(|(s, i)| (s.to_string(), i)).to_vec());
        assert!(matches!(
            verify_kolmogorov(&t, 3, &BigRational::zero()),
            Err(MeasureError::Incomplete { have: 3, need: 4 })
        ));
    }

    #[test]
    fn oracle_agrees() {
        let k = kf(&fibonacci(), 1);
        let v = k.weights().edge.clone();
        for s in ["a", "a a", "a b a", "b a a b"] {
            let p = k.graph().parse_path(s).unwrap();
            let o = frequency_oracle(k.tower().map(), &v, k.lambda(), &p, 20).unwrap();
            assert!(o.admits(&k.eval(&p).unwrap()), "{s}");
        }
        let p = k.graph().parse_path("a ~b").unwrap();
        let o = frequency_oracle(k.tower().map(), &v, k.lambda(), &p, 20).unwrap();
        assert!(o.value.is_zero());
    }

    #[test]
    fn oracle_counts_match_words() {
        let f = thue_morse();
        let g = f.domain();
        let ft = f.power(9).unwrap();
        let v = vec![Interval::one(), Interval::one()];
        for s in ["a b b a", "b a", "a", "a a b"] {
            let p = g.parse_path(s).unwrap();
            let o = frequency_oracle(&f, &v, &Interval::from_int(2), &p, 9).unwrap();
            for e in g.positive_edges() {
                let w = ft.image(e);
                let brute = occurrences(&p, &w) + occurrences(&reverse(&p), &w);
                assert_eq!(o.counts[e.index()], brute as u128, "{s}");
            }
        }
    }

    #[test]
    fn eigen_measure_and_recovery() {
        let f = fibonacci();
        let k = kf(&f, 1);
        let tol = rat(1, 1_000_000_000_000_000);
        let r = verify_eigen_measure(&f, &k, k.lambda(), 4, &tol).unwrap();
        assert!(r.passed());
        let wrong = verify_eigen_measure(&f, &k, &Interval::from_int(2), 2, &tol).unwrap();
        assert!(!wrong.passed());

        let table = k.table(5).unwrap();
        let rw = recover_weights(&table, k.tower(), 1, 1).unwrap();
        let vec1 = rw.edge_vector(k.graph());
        assert!((vec1[0].to_f64() - 1.0).abs() < 1e-15);
        assert!((vec1[1].to_f64() - (PHI - 1.0)).abs() < 1e-15);
        assert!(rw.short.values().all(|x| x.to_f64() > 0.0));
    }

    #[test]
    fn monotonicity_flags() {
        let g = Graph::rose(&["a", "b"]);
        let mut t = MeasureTable::new(g.clone(), 2, true);
        t.insert(g.parse_path("a a").unwrap(), Interval::zero());
        t.insert(g.parse_path("b b b a a").unwrap(), Interval::from_int(3));
        let v = t.monotonicity_violations();
        assert!(v
            .iter()
            .any(|(p, q)| g.path_string(p) == "b b b a a" && g.path_string(q) == "a a"));
    }
}
