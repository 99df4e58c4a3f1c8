//! Closed intervals with exact rational endpoints.
//!
//! Arithmetic is exact; callers bound growth of the endpoints with
//! [`Interval::rounded`], which widens outward to a dyadic grid.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Default working precision in bits.
pub const DEFAULT_BITS: u32 = 128;

/// Working precision, overridable through `TTM_PRECISION_BITS`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Precision {
    pub bits: u32,
}

impl Default for Precision {
    fn default() -> Self {
        Precision { bits: DEFAULT_BITS }
    }
}

impl Precision {
    pub fn new(bits: u32) -> Self {
        Precision { bits: bits.max(16) }
    }

    /// Reads `TTM_PRECISION_BITS`, falling back to the default.
    pub fn from_env() -> Self {
        std::env::var("TTM_PRECISION_BITS")
            .ok()
            .and_then(|s| s.trim().parse::<u32>().ok())
            .map(Precision::new)
            .unwrap_or_default()
    }

    pub fn doubled(self) -> Self {
        Precision::new(self.bits.saturating_mul(2))
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Interval {
    lo: BigRational,
    hi: BigRational,
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `p/q`, an integer, or a finite decimal literal (optionally with an
/// `e` exponent) exactly.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((m, e)) = s.split_once(['e', 'E']) {
        let m = parse_rational(m)?;
        let e: i32 = e.parse().ok()?;
        let ten = BigRational::from_integer(BigInt::from(10));
        return Some(m * num_traits::pow(ten, e.unsigned_abs() as usize).pow(e.signum()));
    }
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(BigRational::new(p, q));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.chars().all(|c| c.is_ascii_digit()) || !frac.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{}{}", if int.is_empty() { "0" } else { int }, frac);
    let num: BigInt = digits.parse().ok()?;
    let den = num_traits::pow(BigInt::from(10), frac.len());
    let q = BigRational::new(num, den);
    Some(if neg { -q } else { q })
}

fn bit_len(x: &BigInt) -> i64 {
    x.bits() as i64
}

fn pow2(k: u64) -> BigInt {
    BigInt::one() << k
}

/// Rounds `x` toward minus infinity (`up == false`) or plus infinity onto a
/// dyadic grid carrying roughly `bits` significant bits.
fn round_dyadic(x: &BigRational, bits: u32, up: bool) -> BigRational {
    if x.is_zero() {
        return x.clone();
    }
    let mag = bit_len(x.numer()) - bit_len(x.denom());
    let shift = bits as i64 - mag;
    let (num, den) = if shift >= 0 {
        (x.numer() * pow2(shift as u64), x.denom().clone())
    } else {
        (x.numer().clone(), x.denom() * pow2((-shift) as u64))
    };
    let (q, r) = num.div_mod_floor(&den);
    let q = if up && !r.is_zero() { q + 1 } else { q };
    if shift >= 0 {
        BigRational::new(q, pow2(shift as u64))
    } else {
        BigRational::from_integer(q * pow2((-shift) as u64))
    }
}

impl Interval {
    pub fn new(lo: BigRational, hi: BigRational) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        Interval { lo, hi }
    }

    pub fn exact(q: BigRational) -> Self {
        Interval {
            lo: q.clone(),
            hi: q,
        }
    }

    pub fn from_int(n: i64) -> Self {
        Interval::exact(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Interval::exact(BigRational::from_integer(n))
    }

    pub fn zero() -> Self {
        Interval::from_int(0)
    }

    pub fn one() -> Self {
        Interval::from_int(1)
    }

    pub fn lo(&self) -> &BigRational {
        &self.lo
    }

    pub fn hi(&self) -> &BigRational {
        &self.hi
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn is_zero(&self) -> bool {
        self.lo.is_zero() && self.hi.is_zero()
    }

    pub fn contains(&self, q: &BigRational) -> bool {
        &self.lo <= q && q <= &self.hi
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.hi.is_negative()
    }

    pub fn overlaps(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn mid(&self) -> BigRational {
        (&self.lo + &self.hi) / BigRational::from_integer(BigInt::from(2))
    }

    pub fn to_f64(&self) -> f64 {
        self.mid().to_f64().unwrap_or(f64::NAN)
    }

    /// Upper bound of `|x|` over the interval.
    pub fn mag(&self) -> BigRational {
        let a = self.lo.abs();
        let b = self.hi.abs();
        if a > b {
            a
        } else {
            b
        }
    }

    /// `|self|` as an interval.
    pub fn abs(&self) -> Interval {
        if self.lo.is_negative() && self.hi.is_positive() {
            Interval::new(BigRational::zero(), self.mag())
        } else if self.hi.is_negative() || (self.hi.is_zero() && self.lo.is_negative()) {
            -self
        } else {
            self.clone()
        }
    }

    /// Smallest interval containing both.
    pub fn hull(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
        }
    }

    /// Intersection with `[0, +inf)`, for quantities known to be non-negative.
    pub fn clamp_nonneg(&self) -> Interval {
        let zero = BigRational::zero();
        Interval {
            lo: self.lo.clone().max(zero.clone()),
            hi: self.hi.clone().max(zero),
        }
    }

    /// Outward rounding onto a dyadic grid with about `bits` significant bits.
    pub fn rounded(&self, bits: u32) -> Interval {
        if self.is_exact() && self.lo.denom().bits() <= bits as u64 {
            return self.clone();
        }
        Interval {
            lo: round_dyadic(&self.lo, bits, false),
            hi: round_dyadic(&self.hi, bits, true),
        }
    }

    /// `1 / self`, or `None` when the interval contains zero.
    pub fn recip(&self) -> Option<Interval> {
        if self.contains_zero() {
            return None;
        }
        Some(Interval {
            lo: self.hi.recip(),
            hi: self.lo.recip(),
        })
    }

    pub fn checked_div(&self, other: &Interval) -> Option<Interval> {
        other.recip().map(|r| self * &r)
    }

    pub fn pow(&self, n: u32) -> Interval {
        let mut acc = Interval::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    pub fn scale(&self, q: &BigRational) -> Interval {
        if q.is_negative() {
            Interval {
                lo: &self.hi * q,
                hi: &self.lo * q,
            }
        } else {
            Interval {
                lo: &self.lo * q,
                hi: &self.hi * q,
            }
        }
    }

    /// Certified three-way comparison against a rational, `None` if undecided.
    pub fn cmp_rational(&self, q: &BigRational) -> Option<Ordering> {
        if &self.hi < q {
            Some(Ordering::Less)
        } else if &self.lo > q {
            Some(Ordering::Greater)
        } else if self.is_exact() {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    /// Certified tolerance test: `Some(true)` if every point lies within
    /// `tol` of zero, `Some(false)` if none does, `None` otherwise.
    pub fn within(&self, tol: &BigRational) -> Option<bool> {
        let m = self.mag();
        if &m <= tol {
            return Some(true);
        }
        let nearest = if self.contains_zero() {
            BigRational::zero()
        } else if self.lo.is_positive() {
            self.lo.clone()
        } else {
            -self.hi.clone()
        };
        if &nearest > tol {
            Some(false)
        } else {
            None
        }
    }

    /// Decimal rendering: exact values that terminate are printed in full,
    /// everything else is truncated to the digits shared by both endpoints,
    /// or rounded from the midpoint when the radius is below half a unit in
    /// the last printed place. Wider intervals get a `±` radius.
    pub fn to_decimal(&self, digits: usize) -> String {
        if self.is_exact() {
            if let Some(s) = terminating_decimal(&self.lo, digits) {
                return s;
            }
        }
        let scale = BigRational::from_integer(num_traits::pow(BigInt::from(10), digits));
        let lo = (&self.lo * &scale).trunc();
        let hi = (&self.hi * &scale).trunc();
        let same_sign = !(self.lo.is_negative() && self.hi.is_positive());
        if lo == hi && same_sign {
            return fixed_point(lo.numer(), digits);
        }
        let mid = (self.mid() * &scale).round();
        let rad = self.width() / BigRational::from_integer(BigInt::from(2));
        if &rad * &scale * BigRational::from_integer(BigInt::from(2)) <= BigRational::one() {
            return fixed_point(mid.numer(), digits);
        }
        format!(
            "{}±{:.1e}",
            fixed_point(mid.numer(), digits),
            rad.to_f64().unwrap_or(f64::INFINITY)
        )
    }
}

fn terminating_decimal(q: &BigRational, max_digits: usize) -> Option<String> {
    let mut den = q.denom().clone();
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    let mut twos = 0usize;
    let mut fives = 0usize;
    while den.is_even() {
        den /= &two;
        twos += 1;
    }
    while (&den % &five).is_zero() {
        den /= &five;
        fives += 1;
    }
    if !den.is_one() {
        return None;
    }
    let k = twos.max(fives);
    if k > max_digits {
        return None;
    }
    let scaled = q * BigRational::from_integer(num_traits::pow(BigInt::from(10), k));
    Some(fixed_point(scaled.numer(), k))
}

fn fixed_point(n: &BigInt, digits: usize) -> String {
    let neg = n.is_negative();
    let s = n.abs().to_string();
    let body = if digits == 0 {
        s
    } else if s.len() > digits {
        format!("{}.{}", &s[..s.len() - digits], &s[s.len() - digits..])
    } else {
        format!("0.{}{}", "0".repeat(digits - s.len()), s)
    };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_exact() {
            write!(f, "[{}]", self.lo)
        } else {
            write!(
                f,
                "[{:.17e}, {:.17e}]",
                self.lo.to_f64().unwrap_or(f64::NAN),
                self.hi.to_f64().unwrap_or(f64::NAN)
            )
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal(15))
    }
}

impl From<BigRational> for Interval {
    fn from(q: BigRational) -> Self {
        Interval::exact(q)
    }
}

impl<'a> Add<&'a Interval> for &'a Interval {
    type Output = Interval;
    fn add(self, o: &Interval) -> Interval {
        Interval {
            lo: &self.lo + &o.lo,
            hi: &self.hi + &o.hi,
        }
    }
}

impl<'a> Sub<&'a Interval> for &'a Interval {
    type Output = Interval;
    fn sub(self, o: &Interval) -> Interval {
        Interval {
            lo: &self.lo - &o.hi,
            hi: &self.hi - &o.lo,
        }
    }
}

impl<'a> Mul<&'a Interval> for &'a Interval {
    type Output = Interval;
    fn mul(self, o: &Interval) -> Interval {
        if self.is_exact() {
            return o.scale(&self.lo);
        }
        if o.is_exact() {
            return self.scale(&o.lo);
        }
        let c = [
            &self.lo * &o.lo,
            &self.lo * &o.hi,
            &self.hi * &o.lo,
            &self.hi * &o.hi,
        ];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        Interval { lo, hi }
    }
}

impl Neg for &Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval {
            lo: -self.hi.clone(),
            hi: -self.lo.clone(),
        }
    }
}

impl Add for Interval {
    type Output = Interval;
    fn add(self, o: Interval) -> Interval {
        &self + &o
    }
}

impl Sub for Interval {
    type Output = Interval;
    fn sub(self, o: Interval) -> Interval {
        &self - &o
    }
}

impl Mul for Interval {
    type Output = Interval;
    fn mul(self, o: Interval) -> Interval {
        &self * &o
    }
}

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        -&self
    }
}

impl std::iter::Sum for Interval {
    fn sum<I: Iterator<Item = Interval>>(iter: I) -> Interval {
        iter.fold(Interval::zero(), |a, b| &a + &b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn iv(a: i64, b: i64, d: i64) -> Interval {
        Interval::new(rat(a, d), rat(b, d))
    }

    #[test]
    fn parses_decimals_and_fractions() {
        assert_eq!(parse_rational("1/3"), Some(rat(1, 3)));
        assert_eq!(parse_rational("-0.25"), Some(rat(-1, 4)));
        assert_eq!(parse_rational("9"), Some(rat(9, 1)));
        assert_eq!(parse_rational(".5"), Some(rat(1, 2)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
        assert_eq!(parse_rational("1e-3"), Some(rat(1, 1000)));
        assert_eq!(parse_rational("2.5E2"), Some(rat(250, 1)));
        assert_eq!(parse_rational("1e"), None);
    }

    #[test]
    fn decimal_printing() {
        assert_eq!(Interval::from_int(9).to_decimal(12), "9");
        assert_eq!(Interval::exact(rat(1, 4)).to_decimal(12), "0.25");
        assert_eq!(Interval::exact(rat(1, 3)).to_decimal(6), "0.333333");
        assert_eq!(Interval::exact(rat(-1, 3)).to_decimal(3), "-0.333");
        let wide = iv(1, 2, 1);
        assert!(wide.to_decimal(4).contains('±'));
        let near_one = Interval::new(rat(1, 1) - rat(1, 1 << 40), rat(1, 1) + rat(1, 1 << 40));
        assert_eq!(near_one.to_decimal(6), "1.000000");
    }

    #[test]
    fn recip_rejects_zero() {
        assert!(iv(-1, 1, 2).recip().is_none());
        assert_eq!(iv(2, 4, 1).recip().unwrap(), iv(1, 2, 4));
    }

    #[test]
    fn within_is_three_valued() {
        let tol = rat(1, 10);
        assert_eq!(iv(-1, 1, 20).within(&tol), Some(true));
        assert_eq!(iv(3, 4, 10).within(&tol), Some(false));
        assert_eq!(iv(0, 3, 10).within(&tol), None);
    }

    proptest! {
        #[test]
        fn rounding_encloses(n in -10_000i64..10_000, d in 1i64..10_000, bits in 8u32..80) {
            let x = Interval::exact(rat(n, d));
            let r = x.rounded(bits);
            prop_assert!(r.contains(&rat(n, d)));
        }

        #[test]
        fn products_enclose_pointwise(a in -50i64..50, b in 0i64..50, c in -50i64..50, e in 0i64..50, t in 0i64..=8, s in 0i64..=8) {
            let x = Interval::new(rat(a, 1), rat(a + b, 1));
            let y = Interval::new(rat(c, 1), rat(c + e, 1));
            let px = rat(a, 1) + rat(b * t, 8);
            let py = rat(c, 1) + rat(e * s, 8);
            prop_assert!((&x * &y).contains(&(&px * &py)));
            prop_assert!((&x + &y).contains(&(&px + &py)));
            prop_assert!((&x - &y).contains(&(&px - &py)));
        }
    }
}
