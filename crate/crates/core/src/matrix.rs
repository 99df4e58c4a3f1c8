//! Small dense non-negative integer matrices.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<u64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged matrix");
        IntMatrix {
            rows: r,
            cols: c,
            data: rows.concat(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn add_to(&mut self, r: usize, c: usize, v: u64) {
        let x = &mut self.data[r * self.cols + c];
        *x = x.checked_add(v).expect("matrix entry overflow");
    }

    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        self.data
            .chunks(self.cols.max(1))
            .map(|c| c.to_vec())
            .collect()
    }

    pub fn mul(&self, o: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, o.rows, "dimension mismatch");
        let mut out = IntMatrix::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..o.cols {
                    let p = a.checked_mul(o.get(k, j)).expect("matrix entry overflow");
                    out.add_to(i, j, p);
                }
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> IntMatrix {
        let mut acc = IntMatrix::identity(self.rows);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Zero/nonzero pattern; products of patterns never overflow.
    pub fn pattern(&self) -> IntMatrix {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| u64::from(x > 0)).collect(),
        }
    }

    pub fn bool_mul(&self, o: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, o.rows, "dimension mismatch");
        let mut out = IntMatrix::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self.get(i, k) == 0 {
                    continue;
                }
                for j in 0..o.cols {
                    if o.get(k, j) > 0 {
                        out.set(i, j, 1);
                    }
                }
            }
        }
        out
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> IntMatrix {
        let mut out = IntMatrix::zeros(rows.len(), cols.len());
        for (a, &r) in rows.iter().enumerate() {
            for (b, &c) in cols.iter().enumerate() {
                out.set(a, b, self.get(r, c));
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn is_positive(&self) -> bool {
        self.data.iter().all(|&x| x > 0)
    }

    pub fn to_rational(&self) -> Vec<Vec<BigRational>> {
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| BigRational::from_integer(BigInt::from(self.get(i, j))))
                    .collect()
            })
            .collect()
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.to_rows())
    }
}

/// Characteristic polynomial `det(xI - A)` by Faddeev–LeVerrier, returned
/// with coefficients from the constant term upward.
pub fn charpoly(a: &IntMatrix) -> Vec<BigRational> {
    assert!(a.is_square());
    let n = a.rows();
    let am = a.to_rational();
    let mut c = vec![BigRational::zero(); n + 1];
    c[n] = BigRational::from_integer(BigInt::from(1));
    let mut m = vec![vec![BigRational::zero(); n]; n];
    for k in 1..=n {
        for (i, row) in m.iter_mut().enumerate() {
            row[i] += &c[n + 1 - k];
        }
        let am_m: Vec<Vec<BigRational>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).map(|l| &am[i][l] * &m[l][j]).sum())
                    .collect()
            })
            .collect();
        let tr: BigRational = (0..n).map(|i| am_m[i][i].clone()).sum();
        c[n - k] = -tr / BigRational::from_integer(BigInt::from(k as i64));
        m = am_m;
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::rat;

    #[test]
    fn fibonacci_square() {
        let m = IntMatrix::from_rows(&[vec![1, 1], vec![1, 0]]);
        assert_eq!(m.pow(2), IntMatrix::from_rows(&[vec![2, 1], vec![1, 1]]));
    }

    #[test]
    fn charpoly_small() {
        let m = IntMatrix::from_rows(&[vec![1, 1], vec![1, 0]]);
        assert_eq!(charpoly(&m), vec![rat(-1, 1), rat(-1, 1), rat(1, 1)]);
        let m = IntMatrix::from_rows(&[vec![1, 1, 1], vec![1, 1, 1], vec![0, 0, 3]]);
        // x(x-2)(x-3) = x^3 - 5x^2 + 6x
        assert_eq!(
            charpoly(&m),
            vec![rat(0, 1), rat(6, 1), rat(-5, 1), rat(1, 1)]
        );
    }
}
