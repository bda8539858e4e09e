//! Dense linear algebra: exact rational matrices (elimination, inverse,
//! Moore–Penrose) and a Padé scaling-and-squaring matrix exponential.

use std::ops::{Index, IndexMut};

use nalgebra::{ComplexField, DMatrix};
use num_complex::Complex64;
use num_traits::{One, Signed, Zero};

use crate::coeff::{q_to_f64, Q};

/// Row-major dense matrix over the rationals.
#[derive(Clone, Debug, PartialEq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

impl Index<(usize, usize)> for QMatrix {
    type Output = Q;
    fn index(&self, (r, c): (usize, usize)) -> &Q {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for QMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Q {
        &mut self.data[r * self.cols + c]
    }
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix {
            rows,
            cols,
            data: vec![Q::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Q::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Q) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        QMatrix { rows, cols, data }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    pub fn mul(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn sub(&self, other: &QMatrix) -> QMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn to_f64(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.rows, self.cols, |r, c| q_to_f64(&self[(r, c)]))
    }

    /// Reduced row echelon form in place; returns pivot columns.
    fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| !self[(r, col)].is_zero()) else {
                continue;
            };
            self.swap_rows(row, p);
            let inv = self[(row, col)].recip();
            for c in col..self.cols {
                let v = &self[(row, c)] * &inv;
                self[(row, c)] = v;
            }
            for r in 0..self.rows {
                if r == row || self[(r, col)].is_zero() {
                    continue;
                }
                let f = self[(r, col)].clone();
                for c in col..self.cols {
                    if self[(row, c)].is_zero() {
                        continue;
                    }
                    let v = &self[(row, c)] * &f;
                    self[(r, c)] -= v;
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Indices of a maximal set of linearly independent columns (greedy, left to right).
    pub fn independent_columns(&self) -> Vec<usize> {
        self.clone().rref()
    }

    /// Unique solution of `self · x = rhs` for square invertible `self`.
    pub fn solve(&self, rhs: &[Q]) -> Option<Vec<Q>> {
        assert_eq!(self.rows, self.cols);
        assert_eq!(rhs.len(), self.rows);
        let n = self.rows;
        let mut aug = Self::zeros(n, n + 1);
        for r in 0..n {
            for c in 0..n {
                aug[(r, c)] = self[(r, c)].clone();
            }
            aug[(r, n)] = rhs[r].clone();
        }
        let pivots = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some((0..n).map(|r| aug[(r, n)].clone()).collect())
    }

    pub fn inverse(&self) -> Option<QMatrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug[(r, c)] = self[(r, c)].clone();
            }
            aug[(r, n + r)] = Q::one();
        }
        let pivots = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(Self::from_fn(n, n, |r, c| aug[(r, n + c)].clone()))
    }

    /// Exact Moore–Penrose inverse via the full-rank factorization
    /// G = F·C (F the independent columns): G⁺ = Cᵀ(CCᵀ)⁻¹(FᵀF)⁻¹Fᵀ.
    pub fn pseudo_inverse(&self) -> QMatrix {
        let cols = self.independent_columns();
        if cols.is_empty() {
            return Self::zeros(self.cols, self.rows);
        }
        let f = Self::from_fn(self.rows, cols.len(), |r, c| self[(r, cols[c])].clone());
        let ft = f.transpose();
        let ftf_inv = ft.mul(&f).inverse().expect("independent columns");
        let c = ftf_inv.mul(&ft).mul(self);
        let ct = c.transpose();
        let cct_inv = c.mul(&ct).inverse().expect("full row rank");
        ct.mul(&cct_inv).mul(&ftf_inv).mul(&ft)
    }

    pub fn max_abs(&self) -> Q {
        self.data.iter().map(|x| x.abs()).fold(Q::zero(), |a, b| if b > a { b } else { a })
    }
}

// Padé-13 coefficients (Higham 2005).
const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];
const THETA13: f64 = 5.371920351148152;

/// Matrix exponential by scaling and squaring with a degree-13 Padé
/// approximant. Works for real and complex entries.
pub fn expm<T>(a: &DMatrix<T>) -> DMatrix<T>
where
    T: ComplexField<RealField = f64> + Copy,
{
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "expm needs a square matrix");
    if n == 0 {
        return a.clone();
    }
    let norm1 = (0..n)
        .map(|c| a.column(c).iter().map(|x| x.modulus()).sum::<f64>())
        .fold(0.0, f64::max);
    let s = if norm1 > THETA13 {
        (norm1 / THETA13).log2().ceil().max(0.0) as i32
    } else {
        0
    };
    let scale = T::from_real(2f64.powi(-s));
    let a = a * scale;
    let c = |k: usize| T::from_real(PADE13[k]);
    let id = DMatrix::<T>::identity(n, n);
    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let inner_u = &a6 * c(13) + &a4 * c(11) + &a2 * c(9);
    let u = &a * (&a6 * inner_u + &a6 * c(7) + &a4 * c(5) + &a2 * c(3) + &id * c(1));
    let inner_v = &a6 * c(12) + &a4 * c(10) + &a2 * c(8);
    let v = &a6 * inner_v + &a6 * c(6) + &a4 * c(4) + &a2 * c(2) + &id * c(0);
    let p = &v + &u;
    let q = &v - &u;
    let mut r = q.lu().solve(&p).expect("Padé denominator is singular");
    for _ in 0..s {
        r = &r * &r;
    }
    r
}

pub fn expm_real(a: &DMatrix<f64>) -> DMatrix<f64> {
    expm(a)
}

pub fn expm_complex(a: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    expm(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{q, qi};

    #[test]
    fn exact_inverse_and_solve() {
        let m = QMatrix::from_fn(3, 3, |r, c| qi(((r + 1) * (c + 2) + (r == c) as usize * 5) as i64));
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), QMatrix::identity(3));
        let x = m.solve(&[qi(1), qi(0), q(1, 2)]).unwrap();
        let back: Vec<Q> = (0..3).map(|r| (0..3).map(|c| &m[(r, c)] * &x[c]).sum()).collect();
        assert_eq!(back, vec![qi(1), qi(0), q(1, 2)]);
        let singular = QMatrix::from_fn(2, 2, |_, _| qi(1));
        assert!(singular.inverse().is_none());
        assert_eq!(singular.rank(), 1);
    }

    #[test]
    fn pseudo_inverse_contract() {
        // Gram matrix of pairings at z = 1: all ones, rank 1
        let g = QMatrix::from_fn(3, 3, |_, _| qi(1));
        let p = g.pseudo_inverse();
        assert_eq!(g.mul(&p).mul(&g), g);
        assert_eq!(p.mul(&g).mul(&p), p);
        assert_eq!(p, p.transpose());
        assert_eq!(p[(0, 0)], q(1, 9));
        let h = QMatrix::from_fn(3, 3, |r, c| if r == c { qi(4) } else { qi(2) });
        let hp = h.pseudo_inverse();
        assert_eq!(hp, h.inverse().unwrap());
    }

    #[test]
    fn expm_matches_closed_forms() {
        let rot = DMatrix::from_row_slice(2, 2, &[0.0, -3.0, 3.0, 0.0]);
        let e = expm_real(&rot);
        assert!((e[(0, 0)] - 3f64.cos()).abs() < 1e-13);
        assert!((e[(1, 0)] - 3f64.sin()).abs() < 1e-13);
        let diag = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![-40.0, 0.5, 12.0]));
        let e = expm_real(&diag);
        assert!((e[(0, 0)] / (-40f64).exp() - 1.0).abs() < 1e-12);
        assert!((e[(2, 2)] / 12f64.exp() - 1.0).abs() < 1e-12);
        let nil = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        let e = expm_real(&nil);
        assert_eq!(e, DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 0.0, 1.0]));
        let z = DMatrix::from_row_slice(1, 1, &[Complex64::new(0.0, std::f64::consts::PI)]);
        assert!((expm_complex(&z)[(0, 0)] + Complex64::one()).norm() < 1e-14);
    }
}
