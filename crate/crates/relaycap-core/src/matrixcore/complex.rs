use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::{Error, Result};

/// Row-major dense complex matrix, sized for Monte Carlo work (dims ≤ 64).
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_real_diag(d: &[f64]) -> Self {
        Self::from_fn(d.len(), d.len(), |i, j| {
            Complex64::new(if i == j { d[i] } else { 0.0 }, 0.0)
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * rhs[(k, j)];
                }
            }
        }
        out
    }

    /// `self† · rhs` without forming the adjoint.
    pub fn adjoint_mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.rows, rhs.rows, "dimension mismatch");
        let mut out = Self::zeros(self.cols, rhs.cols);
        for k in 0..self.rows {
            for i in 0..self.cols {
                let a = self[(k, i)].conj();
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * rhs[(k, j)];
                }
            }
        }
        out
    }

    /// `self · self†`, Hermitian by construction.
    pub fn gram_outer(&self) -> Self {
        let n = self.rows;
        let mut out = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..=i {
                let mut s = Complex64::new(0.0, 0.0);
                for k in 0..self.cols {
                    s += self[(i, k)] * self[(j, k)].conj();
                }
                out[(i, j)] = s;
                out[(j, i)] = s.conj();
            }
            out[(i, i)].im = 0.0;
        }
        out
    }

    /// `self† · self`, Hermitian by construction.
    pub fn gram_inner(&self) -> Self {
        let n = self.cols;
        let mut out = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..=i {
                let mut s = Complex64::new(0.0, 0.0);
                for k in 0..self.rows {
                    s += self[(k, i)].conj() * self[(k, j)];
                }
                out[(i, j)] = s;
                out[(j, i)] = s.conj();
            }
            out[(i, i)].im = 0.0;
        }
        out
    }

    pub fn scale(&mut self, c: f64) {
        self.data.iter_mut().for_each(|z| *z *= c);
    }

    /// `self + c I` for square `self`.
    pub fn add_identity(&mut self, c: f64) {
        assert_eq!(self.rows, self.cols);
        for i in 0..self.rows {
            self[(i, i)] += c;
        }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        libm::sqrt(self.data.iter().map(|z| z.norm_sqr()).sum())
    }

    /// Largest deviation `|m_ij - conj(m_ji)|`.
    pub fn hermitian_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in 0..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Lower Cholesky factor `L` with `self = L L†`.
    pub fn cholesky(&self) -> Result<Self> {
        assert_eq!(self.rows, self.cols, "square matrix required");
        let n = self.rows;
        let mut l = Self::zeros(n, n);
        for j in 0..n {
            let mut d = self[(j, j)].re;
            for k in 0..j {
                d -= l[(j, k)].norm_sqr();
            }
            if !(d > 0.0) {
                return Err(Error::Factorization);
            }
            let d = libm::sqrt(d);
            l[(j, j)] = Complex64::new(d, 0.0);
            for i in j + 1..n {
                let mut s = self[(i, j)];
                for k in 0..j {
                    s -= l[(i, k)] * l[(j, k)].conj();
                }
                l[(i, j)] = s / d;
            }
        }
        Ok(l)
    }

    /// `ln det` of a Hermitian positive definite matrix.
    pub fn ln_det_hpd(&self) -> Result<f64> {
        let l = self.cholesky()?;
        Ok(2.0 * (0..l.rows).map(|i| libm::log(l[(i, i)].re)).sum::<f64>())
    }

    /// Solves `L X = B` for lower-triangular `self`.
    pub fn solve_lower(&self, b: &Self) -> Self {
        assert_eq!(self.rows, b.rows);
        let n = self.rows;
        let mut x = b.clone();
        for c in 0..b.cols {
            for i in 0..n {
                let mut s = x[(i, c)];
                for k in 0..i {
                    s -= self[(i, k)] * x[(k, c)];
                }
                x[(i, c)] = s / self[(i, i)];
            }
        }
        x
    }
}

impl core::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl core::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> ComplexMatrix {
        ComplexMatrix::from_fn(3, 2, |i, j| {
            Complex64::new(i as f64 + 0.5, j as f64 - 0.25 * i as f64)
        })
    }

    #[test]
    fn gram_forms_match_products() {
        let a = sample();
        let outer = a.mul(&a.adjoint());
        let inner = a.adjoint().mul(&a);
        for (x, y) in outer.as_slice().iter().zip(a.gram_outer().as_slice()) {
            assert!((x - y).norm() < 1e-14);
        }
        for (x, y) in inner.as_slice().iter().zip(a.gram_inner().as_slice()) {
            assert!((x - y).norm() < 1e-14);
        }
        let b = ComplexMatrix::from_fn(3, 4, |i, j| Complex64::new(j as f64, i as f64 * 0.3));
        let want = a.adjoint().mul(&b);
        for (x, y) in want.as_slice().iter().zip(a.adjoint_mul(&b).as_slice()) {
            assert!((x - y).norm() < 1e-14);
        }
    }

    #[test]
    fn cholesky_round_trip_and_logdet() {
        let a = sample();
        let mut m = a.gram_inner();
        m.add_identity(1.0);
        let l = m.cholesky().unwrap();
        let back = l.mul(&l.adjoint());
        for (x, y) in back.as_slice().iter().zip(m.as_slice()) {
            assert!((x - y).norm() < 1e-13);
        }
        // 2x2 determinant by hand
        let det = (m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]).re;
        assert!((m.ln_det_hpd().unwrap() - libm::log(det)).abs() < 1e-13);
        let x = l.solve_lower(&m);
        let lx = l.mul(&x);
        for (u, v) in lx.as_slice().iter().zip(m.as_slice()) {
            assert!((u - v).norm() < 1e-13);
        }
    }

    #[test]
    fn cholesky_rejects_indefinite() {
        let m = ComplexMatrix::from_real_diag(&[1.0, -1.0]);
        assert_eq!(m.cholesky(), Err(Error::Factorization));
    }
}
