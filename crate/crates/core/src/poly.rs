//! Dense univariate polynomials over the rationals, Sturm sequences and
//! isolated real roots.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::interval::{Interval, Precision};

/// Coefficients from the constant term upward; no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    coeffs: Vec<BigRational>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Poly::new(
            c.iter()
                .map(|&x| BigRational::from_integer(BigInt::from(x)))
                .collect(),
        )
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial reported as `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> BigRational {
        self.coeffs
            .last()
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_interval(&self, x: &Interval) -> Interval {
        let mut acc = Interval::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + &Interval::exact(c.clone());
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn neg(&self) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.lead();
        Poly::new(self.coeffs.iter().map(|c| c / &l).collect())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::new(vec![]);
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    /// Euclidean division `self = q * d + r`.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let dd = d.coeffs.len() - 1;
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Poly::new(vec![]), self.clone());
        }
        let mut q = vec![BigRational::zero(); r.len() - dd];
        let lead = d.lead();
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] / &lead;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    r[k + j] -= &c * dc;
                }
            }
            q[k] = c;
        }
        r.truncate(dd);
        (Poly::new(q), Poly::new(r))
    }

    pub fn gcd(&self, o: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// The product of the distinct irreducible factors, made monic.
    pub fn squarefree(&self) -> Poly {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    pub fn sturm_sequence(&self) -> Vec<Poly> {
        let mut seq = vec![self.clone(), self.derivative()];
        loop {
            let n = seq.len();
            if seq[n - 1].is_zero() {
                seq.pop();
                break;
            }
            let (_, r) = seq[n - 2].div_rem(&seq[n - 1]);
            if r.is_zero() {
                break;
            }
            seq.push(r.neg());
        }
        seq
    }

    /// Cauchy bound: every real root lies in `(-B, B)`.
    pub fn root_bound(&self) -> BigRational {
        let l = self.lead().abs();
        let m = self
            .coeffs
            .iter()
            .map(|c| c.abs() / &l)
            .max()
            .unwrap_or_else(BigRational::zero);
        m + BigRational::one()
    }
}

/// The rational with the smallest denominator in `[a, b]`.
pub fn simplest_between(a: &BigRational, b: &BigRational) -> BigRational {
    let fl = a.floor();
    if &fl == a {
        return fl;
    }
    let one = BigRational::one();
    if &(&fl + &one) <= b {
        return fl + one;
    }
    let inner = simplest_between(&(b - &fl).recip(), &(a - &fl).recip());
    fl + inner.recip()
}

fn sign_changes(seq: &[Poly], x: &BigRational) -> usize {
    let mut last = 0i8;
    let mut n = 0;
    for p in seq {
        let v = p.eval(x);
        let s = if v.is_positive() {
            1
        } else if v.is_negative() {
            -1
        } else {
            0
        };
        if s != 0 {
            if last != 0 && s != last {
                n += 1;
            }
            last = s;
        }
    }
    n
}

/// Number of distinct real roots in `(a, b]`.
pub fn count_roots(sturm: &[Poly], a: &BigRational, b: &BigRational) -> usize {
    sign_changes(sturm, a).saturating_sub(sign_changes(sturm, b))
}

/// A real algebraic number: the unique root of a squarefree polynomial in a
/// half-open interval `(lo, hi]`, or an exact rational root when `lo == hi`.
#[derive(Clone, Debug)]
pub struct RealRoot {
    poly: Poly,
    lo: BigRational,
    hi: BigRational,
}

impl RealRoot {
    pub fn rational(q: BigRational) -> Self {
        RealRoot {
            poly: Poly::new(vec![-q.clone(), BigRational::one()]),
            lo: q.clone(),
            hi: q,
        }
    }

    /// The largest real root of `p`, if any.
    pub fn largest(p: &Poly) -> Option<Self> {
        let q = p.squarefree();
        if q.degree().unwrap_or(0) == 0 {
            return None;
        }
        let sturm = q.sturm_sequence();
        let b = q.root_bound();
        let mut lo = -b.clone();
        let mut hi = b;
        if count_roots(&sturm, &lo, &hi) == 0 {
            return None;
        }
        let two = BigRational::from_integer(BigInt::from(2));
        while count_roots(&sturm, &lo, &hi) > 1 {
            let mid = (&lo + &hi) / &two;
            if count_roots(&sturm, &mid, &hi) >= 1 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let mut r = RealRoot { poly: q, lo, hi };
        r.settle();
        r.detect_rational();
        Some(r)
    }

    /// A rational root `a/b` of an integer polynomial has `b` dividing the
    /// leading coefficient `L`; once the interval is narrower than `1/L²` it
    /// holds at most one fraction of denominator at most `L`, and that
    /// fraction is the simplest one in the interval.
    fn detect_rational(&mut self) {
        if self.is_rational() {
            return;
        }
        let den_lcm = self.poly.coeffs.iter().fold(BigInt::one(), |acc, c| {
            num_integer::Integer::lcm(&acc, c.denom())
        });
        let lead = (self.poly.lead() * BigRational::from_integer(den_lcm)).abs();
        let target = (lead.clone() * lead).recip() / BigRational::from_integer(BigInt::from(2));
        let two = BigRational::from_integer(BigInt::from(2));
        while !self.is_rational() && &self.hi - &self.lo > target {
            self.bisect(&two);
        }
        if self.is_rational() {
            return;
        }
        let c = simplest_between(&self.lo, &self.hi);
        if c > self.lo && self.poly.eval(&c).is_zero() {
            self.lo = c.clone();
            self.hi = c;
        }
    }

    fn bisect(&mut self, two: &BigRational) {
        let mid = (&self.lo + &self.hi) / two;
        let v = self.poly.eval(&mid);
        if v.is_zero() {
            self.lo = mid.clone();
            self.hi = mid;
            return;
        }
        let sh = self.poly.eval(&self.hi);
        if v.is_positive() == sh.is_positive() {
            self.hi = mid;
        } else {
            self.lo = mid;
        }
    }

    fn settle(&mut self) {
        if self.poly.eval(&self.hi).is_zero() {
            self.lo = self.hi.clone();
        }
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn is_rational(&self) -> bool {
        self.lo == self.hi
    }

    /// Bisects until the enclosing interval is narrower than `2^-bits`
    /// relative to its magnitude (absolute below one).
    pub fn refine(&mut self, prec: Precision) {
        let two = BigRational::from_integer(BigInt::from(2));
        let scale = self.hi.abs().max(BigRational::one());
        let target = scale / BigRational::from_integer(BigInt::one() << prec.bits);
        while self.lo != self.hi && &self.hi - &self.lo > target {
            self.bisect(&two);
        }
    }

    pub fn enclosure(&self) -> Interval {
        Interval::new(self.lo.clone(), self.hi.clone())
    }

    pub fn refined(&self, prec: Precision) -> Interval {
        let mut r = self.clone();
        r.refine(prec);
        r.enclosure()
    }

    pub fn to_f64(&self) -> f64 {
        self.refined(Precision::new(60)).to_f64()
    }

    /// Exact comparison with a rational number.
    pub fn cmp_rational(&self, q: &BigRational) -> Ordering {
        if self.is_rational() {
            return self.lo.cmp(q);
        }
        if q <= &self.lo {
            return Ordering::Greater;
        }
        if q > &self.hi {
            return Ordering::Less;
        }
        if self.poly.eval(q).is_zero() {
            return Ordering::Equal;
        }
        let sturm = self.poly.sturm_sequence();
        if count_roots(&sturm, &self.lo, q) == 1 {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }

    /// Exact comparison of two real algebraic numbers.
    pub fn cmp_root(&self, other: &RealRoot) -> Ordering {
        if self.is_rational() {
            return other.cmp_rational(&self.lo).reverse();
        }
        if other.is_rational() {
            return self.cmp_rational(&other.lo);
        }
        let g = self.poly.gcd(&other.poly);
        let mut a = self.clone();
        let mut b = other.clone();
        let mut prec = Precision::new(32);
        loop {
            if a.hi <= b.lo {
                return Ordering::Less;
            }
            if b.hi <= a.lo {
                return Ordering::Greater;
            }
            if g.degree().unwrap_or(0) > 0 {
                let lo = a.lo.clone().max(b.lo.clone());
                let hi = a.hi.clone().min(b.hi.clone());
                if lo < hi && count_roots(&g.sturm_sequence(), &lo, &hi) > 0 {
                    return Ordering::Equal;
                }
            }
            prec = prec.doubled();
            a.refine(prec);
            b.refine(prec);
            if a.is_rational() || b.is_rational() {
                return a.cmp_root(&b);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::rat;

    #[test]
    fn golden_ratio_is_isolated() {
        let p = Poly::from_ints(&[-1, -1, 1]);
        let r = RealRoot::largest(&p).unwrap();
        let e = r.refined(Precision::new(100));
        assert!((e.to_f64() - 1.618_033_988_749_895).abs() < 1e-15);
        assert!(e.width() < rat(1, 1 << 40));
    }

    #[test]
    fn rational_roots_become_exact() {
        let p = Poly::from_ints(&[0, -2, 1]);
        let r = RealRoot::largest(&p).unwrap();
        let e = r.refined(Precision::default());
        assert!(e.is_exact());
        assert_eq!(e.lo(), &rat(2, 1));
    }

    #[test]
    fn repeated_roots_are_squarefree() {
        let p = Poly::from_ints(&[4, -4, 1]).mul(&Poly::from_ints(&[-1, 1]));
        let r = RealRoot::largest(&p).unwrap();
        assert_eq!(r.cmp_rational(&rat(2, 1)), Ordering::Equal);
    }

    #[test]
    fn compares_roots_exactly() {
        let phi = RealRoot::largest(&Poly::from_ints(&[-1, -1, 1])).unwrap();
        let phi_sq = RealRoot::largest(&Poly::from_ints(&[1, -3, 1])).unwrap();
        let phi_again =
            RealRoot::largest(&Poly::from_ints(&[-1, -1, 1]).mul(&Poly::from_ints(&[-1, 1])))
                .unwrap();
        assert_eq!(phi.cmp_root(&phi_sq), Ordering::Less);
        assert_eq!(phi.cmp_root(&phi_again), Ordering::Equal);
        assert_eq!(phi_sq.cmp_rational(&rat(5, 2)), Ordering::Greater);
    }

    #[test]
    fn no_real_root() {
        assert!(RealRoot::largest(&Poly::from_ints(&[1, 0, 1])).is_none());
    }

    #[test]
    fn sturm_counts() {
        let p = Poly::from_ints(&[0, -1, 0, 1]);
        let s = p.sturm_sequence();
        assert_eq!(count_roots(&s, &rat(-2, 1), &rat(2, 1)), 3);
        assert_eq!(count_roots(&s, &rat(0, 1), &rat(2, 1)), 1);
        assert_eq!(count_roots(&s, &rat(-1, 1), &rat(0, 1)), 1);
    }
}
