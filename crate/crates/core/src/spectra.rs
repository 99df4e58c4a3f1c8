//! Block Perron–Frobenius theory for non-negative integer matrices with
//! certified eigenvalues and eigenvectors.
//!
//! Indices of a matrix `M` form a digraph with an arrow `y -> x` whenever
//! `M[x][y] > 0`; for a transition matrix this reads "x occurs in the image of
//! y". Blocks are its strongly connected components, listed so that every
//! block comes after the blocks it reaches, which makes the permuted matrix
//! upper block-triangular.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use crate::interval::{Interval, Precision};
use crate::matrix::{charpoly, IntMatrix};
use crate::poly::{Poly, RealRoot};
use crate::scc::{is_cyclic, tarjan};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpectraError {
    #[error("matrix is not square")]
    NotSquare,
    #[error("matrix is not primitive")]
    NotPrimitive,
    #[error("no diagonal block has spectral radius {0}")]
    NoSuchEigenvalue(String),
    #[error("precision exhausted at {0} bits")]
    Precision(u32),
    #[error("no power with primitive diagonal blocks up to {0}")]
    PowerSearch(u32),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlockKind {
    Primitive,
    /// A single index with no self-loop.
    Zero,
    Imprimitive {
        period: usize,
    },
}

#[derive(Clone, Debug)]
pub struct Block {
    pub indices: Vec<usize>,
    pub kind: BlockKind,
    /// Spectral radius of the diagonal block; `None` for zero blocks.
    pub radius: Option<RealRoot>,
}

impl Block {
    pub fn radius_f64(&self) -> f64 {
        self.radius.as_ref().map_or(0.0, |r| r.to_f64())
    }
}

#[derive(Clone, Debug)]
pub struct BlockForm {
    pub size: usize,
    pub blocks: Vec<Block>,
    /// `reaches[i][j]` when block `j` is reachable from block `i` (reflexive).
    pub reaches: Vec<Vec<bool>>,
    /// Least power of `M` whose diagonal blocks are all primitive or zero and
    /// whose off-diagonal blocks are each zero or positive.
    pub power_used: u32,
    /// Components of `M^power_used`, in the same ordering convention.
    pub power_blocks: Vec<Vec<usize>>,
}

impl BlockForm {
    /// Block indices concatenated: position `p` of the permuted matrix holds
    /// original index `permutation()[p]`.
    pub fn permutation(&self) -> Vec<usize> {
        self.blocks.iter().flat_map(|b| b.indices.clone()).collect()
    }

    pub fn block_of(&self, index: usize) -> usize {
        self.blocks
            .iter()
            .position(|b| b.indices.contains(&index))
            .expect("index belongs to a block")
    }
}

fn digraph(m: &IntMatrix) -> Vec<Vec<usize>> {
    let n = m.rows();
    (0..n)
        .map(|y| (0..n).filter(|&x| m.get(x, y) > 0).collect())
        .collect()
}

/// Period of an irreducible component via breadth-first levels.
fn period(adj: &[Vec<usize>], comp: &[usize]) -> usize {
    let mut level = vec![usize::MAX; adj.len()];
    let inside = |v: usize| comp.binary_search(&v).is_ok();
    level[comp[0]] = 0;
    let mut queue = std::collections::VecDeque::from([comp[0]]);
    let mut g = 0usize;
    while let Some(u) = queue.pop_front() {
        for &v in adj[u].iter().filter(|&&v| inside(v)) {
            if level[v] == usize::MAX {
                level[v] = level[u] + 1;
                queue.push_back(v);
            } else {
                let d = (level[u] + 1).abs_diff(level[v]);
                g = g.gcd(&d);
            }
        }
    }
    g
}

/// Primitivity by positivity of a power up to the Wielandt bound.
pub fn is_primitive(a: &IntMatrix) -> bool {
    if !a.is_square() || a.rows() == 0 {
        return false;
    }
    let n = a.rows();
    let p = a.pattern();
    let mut acc = p.clone();
    let bound = (n - 1) * (n - 1) + 1;
    for _ in 1..bound {
        if acc.is_positive() {
            return true;
        }
        acc = acc.bool_mul(&p);
    }
    acc.is_positive()
}

fn components(m: &IntMatrix) -> (Vec<Vec<usize>>, Vec<Vec<usize>>) {
    let adj = digraph(m);
    (tarjan(&adj), adj)
}

fn reach_matrix(comps: &[Vec<usize>], adj: &[Vec<usize>]) -> Vec<Vec<bool>> {
    let n = adj.len();
    let mut comp_of = vec![0; n];
    for (c, comp) in comps.iter().enumerate() {
        for &v in comp {
            comp_of[v] = c;
        }
    }
    let k = comps.len();
    let mut reach = vec![vec![false; k]; k];
    // Components are emitted after everything they reach.
    for c in 0..k {
        reach[c][c] = true;
        for &v in &comps[c] {
            for &w in &adj[v] {
                let d = comp_of[w];
                if d != c {
                    let row = reach[d].clone();
                    for (x, r) in row.into_iter().enumerate() {
                        if r {
                            reach[c][x] = true;
                        }
                    }
                }
            }
        }
    }
    reach
}

/// Whether every component of `p` is primitive or a zero singleton and every
/// off-diagonal block is zero or entrywise positive.
fn is_clean(p: &IntMatrix) -> (bool, Vec<Vec<usize>>) {
    let (comps, adj) = components(p);
    for c in &comps {
        if is_cyclic(&adj, c) && !is_primitive(&p.submatrix(c, c)) {
            return (false, comps);
        }
    }
    for r in &comps {
        for c in &comps {
            if r == c {
                continue;
            }
            let sub = p.submatrix(r, c);
            if !sub.is_zero() && !sub.is_positive() {
                return (false, comps);
            }
        }
    }
    (true, comps)
}

pub fn block_form(m: &IntMatrix) -> Result<BlockForm, SpectraError> {
    if !m.is_square() {
        return Err(SpectraError::NotSquare);
    }
    let n = m.rows();
    let (comps, adj) = components(m);
    let reaches = reach_matrix(&comps, &adj);
    let mut blocks = Vec::with_capacity(comps.len());
    let mut lcm = 1usize;
    for c in &comps {
        let (kind, radius) = if !is_cyclic(&adj, c) {
            (BlockKind::Zero, None)
        } else {
            let sub = m.submatrix(c, c);
            let kind = if is_primitive(&sub) {
                BlockKind::Primitive
            } else {
                let p = period(&adj, c);
                lcm = lcm.lcm(&p);
                BlockKind::Imprimitive { period: p }
            };
            let radius = RealRoot::largest(&Poly::new(charpoly(&sub)));
            (kind, radius)
        };
        blocks.push(Block {
            indices: c.clone(),
            kind,
            radius,
        });
    }
    let pat = m.pattern();
    let step = pat_pow(&pat, lcm);
    let cap = (n * n + 1) as u32;
    let mut acc = step.clone();
    for j in 1..=cap {
        let (ok, comps) = is_clean(&acc);
        if ok {
            return Ok(BlockForm {
                size: n,
                blocks,
                reaches,
                power_used: j * lcm as u32,
                power_blocks: comps,
            });
        }
        acc = acc.bool_mul(&step);
    }
    Err(SpectraError::PowerSearch(cap * lcm as u32))
}

fn pat_pow(p: &IntMatrix, k: usize) -> IntMatrix {
    let mut acc = IntMatrix::identity(p.rows());
    for _ in 0..k {
        acc = acc.bool_mul(p);
    }
    acc
}

/// A certified eigenpair: `M v = λ v` holds coordinatewise up to the interval
/// enclosures, and `v` is normalized to coordinate sum one.
#[derive(Clone, Debug)]
pub struct Eigenpair {
    pub lambda: RealRoot,
    pub lambda_enclosure: Interval,
    pub vector: Vec<Interval>,
    /// Block of the block form the eigenpair is attached to.
    pub block: usize,
    pub precision: Precision,
}

impl Eigenpair {
    pub fn vector_f64(&self) -> Vec<f64> {
        self.vector.iter().map(|x| x.to_f64()).collect()
    }

    /// `M v - λ v`, which contains zero coordinatewise for a valid pair.
    pub fn residual(&self, m: &IntMatrix) -> Vec<Interval> {
        residual(m, &self.lambda_enclosure, &self.vector)
    }

    /// Support: indices whose coordinate is not certified zero.
    pub fn support(&self) -> Vec<usize> {
        (0..self.vector.len())
            .filter(|&i| !self.vector[i].is_zero())
            .collect()
    }
}

pub fn residual(m: &IntMatrix, lambda: &Interval, v: &[Interval]) -> Vec<Interval> {
    (0..m.rows())
        .map(|i| {
            let mv: Interval = (0..m.cols())
                .map(|j| v[j].scale(&BigRational::from_integer(BigInt::from(m.get(i, j)))))
                .sum();
            &mv - &(lambda * &v[i])
        })
        .collect()
}

/// Interval Gaussian elimination with partial pivoting; `None` when a pivot
/// cannot be certified nonzero.
#[allow(clippy::needless_range_loop)]
fn solve(mut a: Vec<Vec<Interval>>, mut b: Vec<Interval>, bits: u32) -> Option<Vec<Interval>> {
    let n = b.len();
    for k in 0..n {
        let pivot = (k..n)
            .filter(|&r| !a[r][k].contains_zero())
            .max_by(|&r, &s| a[r][k].mag().cmp(&a[s][k].mag()))?;
        a.swap(k, pivot);
        b.swap(k, pivot);
        let inv = a[k][k].recip()?;
        for r in k + 1..n {
            if a[r][k].is_zero() {
                continue;
            }
            let factor = (&a[r][k] * &inv).rounded(bits);
            for c in k..n {
                let t = &a[r][c] - &(&factor * &a[k][c]);
                a[r][c] = t.rounded(bits);
            }
            let t = &b[r] - &(&factor * &b[k]);
            b[r] = t.rounded(bits);
        }
    }
    let mut x = vec![Interval::zero(); n];
    for k in (0..n).rev() {
        let mut s = b[k].clone();
        for c in k + 1..n {
            s = &s - &(&a[k][c] * &x[c]);
        }
        x[k] = s.checked_div(&a[k][k])?.rounded(bits);
    }
    Some(x)
}

fn int(x: u64) -> Interval {
    Interval::from_bigint(BigInt::from(x))
}

/// Non-negative eigenvector of `M` for the spectral radius of the irreducible
/// block `i`, supported on the blocks reachable from `i`.
fn block_eigenvector(
    m: &IntMatrix,
    form: &BlockForm,
    i: usize,
    lambda: &Interval,
    bits: u32,
) -> Option<Vec<Interval>> {
    let n = m.rows();
    let mut v = vec![Interval::zero(); n];
    let top = &form.blocks[i].indices;
    // Pin the first coordinate and drop the first equation; every cofactor of
    // an irreducible block at its Perron root is nonzero.
    v[top[0]] = Interval::one();
    if top.len() > 1 {
        let rest = &top[1..];
        let a: Vec<Vec<Interval>> = rest
            .iter()
            .map(|&r| {
                rest.iter()
                    .map(|&c| {
                        let x = int(m.get(r, c));
                        if r == c {
                            &x - lambda
                        } else {
                            x
                        }
                    })
                    .collect()
            })
            .collect();
        let b: Vec<Interval> = rest.iter().map(|&r| -int(m.get(r, top[0]))).collect();
        let x = solve(a, b, bits)?;
        for (k, &r) in rest.iter().enumerate() {
            v[r] = x[k].clamp_nonneg();
        }
    }
    // Blocks reached from i, those reaching them first.
    for j in (0..i).rev() {
        if !form.reaches[i][j] {
            continue;
        }
        let idx = &form.blocks[j].indices;
        let rhs: Vec<Interval> = idx
            .iter()
            .map(|&r| {
                (0..n)
                    .filter(|c| !idx.contains(c))
                    .map(|c| v[c].scale(&BigRational::from_integer(BigInt::from(m.get(r, c)))))
                    .sum()
            })
            .collect();
        let a: Vec<Vec<Interval>> = idx
            .iter()
            .map(|&r| {
                idx.iter()
                    .map(|&c| {
                        let x = -int(m.get(r, c));
                        if r == c {
                            &x + lambda
                        } else {
                            x
                        }
                    })
                    .collect()
            })
            .collect();
        let x = solve(a, rhs, bits)?;
        for (k, &r) in idx.iter().enumerate() {
            v[r] = x[k].clamp_nonneg();
        }
    }
    let total: Interval = v.iter().cloned().sum();
    let inv = total.recip()?;
    Some(
        v.iter()
            .map(|x| {
                if x.is_zero() {
                    x.clone()
                } else {
                    (x * &inv).rounded(bits)
                }
            })
            .collect(),
    )
}

fn eigenpair_for_block(
    m: &IntMatrix,
    form: &BlockForm,
    i: usize,
    prec: Precision,
) -> Result<Eigenpair, SpectraError> {
    let root = form.blocks[i].radius.clone().expect("irreducible block");
    let mut p = prec;
    for _ in 0..6 {
        let lam = root.refined(p);
        if let Some(v) = block_eigenvector(m, form, i, &lam, p.bits + 32) {
            if residual(m, &lam, &v).iter().all(|r| r.contains_zero()) {
                return Ok(Eigenpair {
                    lambda: root,
                    lambda_enclosure: lam,
                    vector: v,
                    block: i,
                    precision: p,
                });
            }
        }
        p = p.doubled();
    }
    Err(SpectraError::Precision(p.bits))
}

/// Perron–Frobenius eigenpair of a primitive matrix.
pub fn pf_eigenpair(a: &IntMatrix, prec: Precision) -> Result<Eigenpair, SpectraError> {
    if !a.is_square() {
        return Err(SpectraError::NotSquare);
    }
    if !is_primitive(a) {
        return Err(SpectraError::NotPrimitive);
    }
    let form = block_form(a)?;
    eigenpair_for_block(a, &form, 0, prec)
}

/// Whether block `i` is distinguished: nonzero spectral radius strictly
/// larger than that of every other block it reaches.
pub fn is_distinguished(form: &BlockForm, i: usize) -> bool {
    let Some(ri) = &form.blocks[i].radius else {
        return false;
    };
    if ri.cmp_rational(&BigRational::zero()) != Ordering::Greater {
        return false;
    }
    (0..form.blocks.len())
        .filter(|&j| j != i && form.reaches[i][j])
        .all(|j| match &form.blocks[j].radius {
            None => true,
            Some(rj) => ri.cmp_root(rj) == Ordering::Greater,
        })
}

/// One normalized non-negative eigenvector per distinguished block.
pub fn distinguished_eigenvectors(
    m: &IntMatrix,
    prec: Precision,
) -> Result<Vec<Eigenpair>, SpectraError> {
    let form = block_form(m)?;
    (0..form.blocks.len())
        .filter(|&i| is_distinguished(&form, i))
        .map(|i| eigenpair_for_block(m, &form, i, prec))
        .collect()
}

/// Distinguished eigenpairs whose eigenvalue is the real number isolated by
/// `lambda`; an error when no diagonal block has that spectral radius.
pub fn nonneg_eigenvectors_for(
    m: &IntMatrix,
    lambda: &Interval,
    prec: Precision,
) -> Result<Vec<Eigenpair>, SpectraError> {
    let form = block_form(m)?;
    let matches = |r: &RealRoot| {
        let mut p = Precision::new(32);
        loop {
            let e = r.refined(p);
            if !e.overlaps(lambda) {
                return false;
            }
            if lambda.lo() <= e.lo() && e.hi() <= lambda.hi() {
                return true;
            }
            if p.bits > 4096 {
                return false;
            }
            p = p.doubled();
        }
    };
    let hits: Vec<usize> = (0..form.blocks.len())
        .filter(|&i| form.blocks[i].radius.as_ref().is_some_and(matches))
        .collect();
    if hits.is_empty() {
        return Err(SpectraError::NoSuchEigenvalue(format!("{lambda:?}")));
    }
    hits.into_iter()
        .filter(|&i| is_distinguished(&form, i))
        .map(|i| eigenpair_for_block(m, &form, i, prec))
        .collect()
}

/// Maps an eigenvector of `M^k` for `λ^k` to one of `M` for `λ` by averaging
/// `M^j v / λ^j` over `j < k`, renormalized to coordinate sum one.
pub fn average_down(
    m: &IntMatrix,
    k: u32,
    lambda: &Interval,
    v: &[Interval],
    bits: u32,
) -> Option<Vec<Interval>> {
    let mut acc: Vec<Interval> = v.to_vec();
    let mut cur: Vec<Interval> = v.to_vec();
    let inv = lambda.recip()?;
    for _ in 1..k {
        cur = (0..m.rows())
            .map(|i| {
                let s: Interval = (0..m.cols())
                    .map(|j| cur[j].scale(&BigRational::from_integer(BigInt::from(m.get(i, j)))))
                    .sum();
                (&s * &inv).rounded(bits)
            })
            .collect();
        for (a, c) in acc.iter_mut().zip(&cur) {
            *a = &*a + c;
        }
    }
    let total: Interval = acc.iter().cloned().sum();
    let tinv = total.recip()?;
    Some(acc.iter().map(|x| (x * &tinv).rounded(bits)).collect())
}

/// Distinguished eigenvectors computed through the power `M^power_used`,
/// whose blocks are primitive, and mapped back by averaging. Serves as an
/// independent route to the same set.
pub fn distinguished_via_power(
    m: &IntMatrix,
    prec: Precision,
) -> Result<Vec<Eigenpair>, SpectraError> {
    let form = block_form(m)?;
    let k = form.power_used;
    let mk = m.pow(k);
    let pform = block_form(&mk)?;
    let mut out: Vec<Eigenpair> = Vec::new();
    for i in 0..pform.blocks.len() {
        if !is_distinguished(&pform, i) {
            continue;
        }
        let pk = eigenpair_for_block(&mk, &pform, i, prec)?;
        let base = form.block_of(pform.blocks[i].indices[0]);
        let root = form.blocks[base].radius.clone().expect("irreducible");
        let lam = root.refined(prec);
        let v = average_down(m, k, &lam, &pk.vector, prec.bits + 32)
            .ok_or(SpectraError::Precision(prec.bits))?;
        let dup = out
            .iter()
            .any(|e| e.vector.iter().zip(&v).all(|(a, b)| a.overlaps(b)));
        if !dup {
            out.push(Eigenpair {
                lambda: root,
                lambda_enclosure: lam,
                vector: v,
                block: base,
                precision: prec,
            });
        }
    }
    Ok(out)
}

/// Plain floating-point power iteration, used only as a cross-check.
pub fn power_iteration(m: &IntMatrix, iters: usize) -> (f64, Vec<f64>) {
    let n = m.rows();
    let mut v = vec![1.0 / n as f64; n];
    let mut lam = 0.0;
    for _ in 0..iters {
        let w: Vec<f64> = (0..n)
            .map(|i| (0..n).map(|j| m.get(i, j) as f64 * v[j]).sum())
            .collect();
        let s: f64 = w.iter().sum();
        lam = s / v.iter().sum::<f64>();
        v = w.iter().map(|x| x / s).collect();
    }
    (lam, v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::rat;

    fn mat(r: &[&[u64]]) -> IntMatrix {
        IntMatrix::from_rows(&r.iter().map(|x| x.to_vec()).collect::<Vec<_>>())
    }

    #[test]
    fn fibonacci_pf() {
        let m = mat(&[&[1, 1], &[1, 0]]);
        let e = pf_eigenpair(&m, Precision::default()).unwrap();
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((e.lambda_enclosure.to_f64() - phi).abs() < 1e-15);
        assert!(e.lambda_enclosure.width() < rat(1, 1_000_000_000_000));
        let v = e.vector_f64();
        assert!((v[0] - 0.618_033_988_749_894_8).abs() < 1e-15);
        assert!((v[1] - 0.381_966_011_250_105_1).abs() < 1e-15);
        assert!(e.residual(&m).iter().all(|r| r.contains_zero()));
        let (pl, pv) = power_iteration(&m, 200);
        assert!((pl - phi).abs() < 1e-12 && (pv[0] - v[0]).abs() < 1e-12);
    }

    #[test]
    fn three_letter_blocks() {
        let m = mat(&[&[1, 1, 1], &[1, 1, 1], &[0, 0, 3]]);
        let f = block_form(&m).unwrap();
        assert_eq!(f.blocks.len(), 2);
        assert_eq!(f.blocks[0].indices, vec![0, 1]);
        assert_eq!(f.blocks[1].indices, vec![2]);
        assert!(f.reaches[1][0] && !f.reaches[0][1]);
        assert_eq!(f.power_used, 1);
        let d = distinguished_eigenvectors(&m, Precision::default()).unwrap();
        assert_eq!(d.len(), 2);
        let half = Interval::exact(rat(1, 2));
        let third = Interval::exact(rat(1, 3));
        assert_eq!(d[0].vector, vec![half.clone(), half, Interval::zero()]);
        assert_eq!(d[1].vector, vec![third.clone(), third.clone(), third]);
    }

    #[test]
    fn weak_top_block_is_not_distinguished() {
        // sigma(c) = c a b on top of Thue–Morse
        let m = mat(&[&[1, 1, 1], &[1, 1, 1], &[0, 0, 1]]);
        let d = distinguished_eigenvectors(&m, Precision::default()).unwrap();
        assert_eq!(d.len(), 1);
        assert!(
            nonneg_eigenvectors_for(&m, &Interval::one(), Precision::default())
                .unwrap()
                .is_empty()
        );
        assert!(matches!(
            nonneg_eigenvectors_for(&m, &Interval::from_int(5), Precision::default()),
            Err(SpectraError::NoSuchEigenvalue(_))
        ));
    }

    #[test]
    fn imprimitive_splits_after_squaring() {
        let m = mat(&[&[0, 1], &[1, 0]]);
        let f = block_form(&m).unwrap();
        assert_eq!(f.blocks[0].kind, BlockKind::Imprimitive { period: 2 });
        assert_eq!(f.power_used, 2);
        assert_eq!(f.power_blocks.len(), 2);
        assert!(matches!(
            pf_eigenpair(&m, Precision::default()),
            Err(SpectraError::NotPrimitive)
        ));
        let d = distinguished_eigenvectors(&m, Precision::default()).unwrap();
        let p = distinguished_via_power(&m, Precision::default()).unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(p.len(), 1);
        assert!(d[0]
            .vector
            .iter()
            .zip(&p[0].vector)
            .all(|(a, b)| a.overlaps(b)));
    }

    #[test]
    fn transient_indices_are_zero_blocks() {
        let m = mat(&[&[2, 1], &[0, 0]]);
        let f = block_form(&m).unwrap();
        assert_eq!(f.blocks[1].kind, BlockKind::Zero);
        let d = distinguished_eigenvectors(&m, Precision::default()).unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].vector, vec![Interval::one(), Interval::zero()]);
    }

    #[test]
    fn wielandt_extremal_matrix() {
        // The Wielandt matrix needs exactly (n-1)^2 + 1 steps.
        let n = 4;
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n - 1 {
            m.set(i, i + 1, 1);
        }
        m.set(n - 1, 0, 1);
        m.set(n - 1, 1, 1);
        assert!(is_primitive(&m));
        assert!(!m.pattern().pow(9).is_positive());
        assert!(m.pattern().pow(10).is_positive());
    }
}
