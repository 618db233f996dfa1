use alloc::vec;
use alloc::vec::Vec;

use crate::specfun::LogScaledReal;

/// Row-major dense real matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct RealMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl RealMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Panics if the rows are ragged.
    pub fn from_rows(rows: &[&[f64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Self::from_fn(rows.len(), cols, |i, j| rows[i][j])
    }

    pub fn diag(d: &[f64]) -> Self {
        Self::from_fn(d.len(), d.len(), |i, j| if i == j { d[i] } else { 0.0 })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        Self::from_fn(self.rows, rhs.cols, |i, j| {
            (0..self.cols).map(|k| self[(i, k)] * rhs[(k, j)]).sum()
        })
    }

    pub fn to_scaled(&self) -> ScaledMatrix {
        assert_eq!(self.rows, self.cols, "square matrix required");
        ScaledMatrix {
            n: self.rows,
            data: self
                .data
                .iter()
                .map(|&x| LogScaledReal::from_f64(x))
                .collect(),
        }
    }
}

impl core::ops::Index<(usize, usize)> for RealMatrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl core::ops::IndexMut<(usize, usize)> for RealMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Square matrix whose entries are individually log-scaled.
///
/// The structured matrices of the closed forms have entries like
/// `a^{m+n} Γ(p+m+n)`, spanning far more than the `f64` exponent range.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaledMatrix {
    n: usize,
    data: Vec<LogScaledReal>,
}

impl ScaledMatrix {
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> LogScaledReal) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> LogScaledReal {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: LogScaledReal) {
        self.data[i * self.n + j] = v;
    }

    /// Matrix with row `l` and column `k` (0-based) removed.
    pub fn minor(&self, l: usize, k: usize) -> Self {
        let n = self.n;
        let mut data = Vec::with_capacity((n - 1) * (n - 1));
        for i in (0..n).filter(|&i| i != l) {
            for j in (0..n).filter(|&j| j != k) {
                data.push(self.get(i, j));
            }
        }
        Self { n: n - 1, data }
    }

    /// Determinant via partial-pivot LU after removing the largest
    /// log-magnitude from every row and then every column.
    pub fn det(&self) -> LogScaledReal {
        let n = self.n;
        if n == 0 {
            return LogScaledReal::ONE;
        }
        let mut shift = 0.0;
        let mut ln = self
            .data
            .iter()
            .map(|e| e.log_magnitude)
            .collect::<Vec<_>>();
        for i in 0..n {
            let m = ln[i * n..(i + 1) * n]
                .iter()
                .copied()
                .fold(f64::NEG_INFINITY, f64::max);
            if m == f64::NEG_INFINITY {
                return LogScaledReal::ZERO;
            }
            ln[i * n..(i + 1) * n].iter_mut().for_each(|v| *v -= m);
            shift += m;
        }
        for j in 0..n {
            let m = (0..n)
                .map(|i| ln[i * n + j])
                .fold(f64::NEG_INFINITY, f64::max);
            if m == f64::NEG_INFINITY {
                return LogScaledReal::ZERO;
            }
            for i in 0..n {
                ln[i * n + j] -= m;
            }
            shift += m;
        }
        let mut a: Vec<f64> = self
            .data
            .iter()
            .zip(&ln)
            .map(|(e, &l)| f64::from(e.sign) * libm::exp(l))
            .collect();
        let mut sign = 1i8;
        let mut log_abs = shift;
        for c in 0..n {
            let piv = (c..n)
                .max_by(|&x, &y| a[x * n + c].abs().total_cmp(&a[y * n + c].abs()))
                .expect("nonempty range");
            let pv = a[piv * n + c];
            if pv.abs() < 1e-300 {
                return LogScaledReal::ZERO;
            }
            if piv != c {
                for j in 0..n {
                    a.swap(piv * n + j, c * n + j);
                }
                sign = -sign;
            }
            if pv < 0.0 {
                sign = -sign;
            }
            log_abs += libm::log(pv.abs());
            for r in c + 1..n {
                let f = a[r * n + c] / pv;
                if f != 0.0 {
                    for j in c + 1..n {
                        a[r * n + j] -= f * a[c * n + j];
                    }
                }
            }
        }
        LogScaledReal {
            log_magnitude: log_abs,
            sign,
        }
    }

    /// `(-1)^{l+k} det(minor(l, k))`, indices 1-based.
    pub fn cofactor(&self, l: usize, k: usize) -> LogScaledReal {
        assert!(
            l >= 1 && k >= 1 && l <= self.n && k <= self.n,
            "cofactor index"
        );
        let d = self.minor(l - 1, k - 1).det();
        if (l + k) % 2 == 0 {
            d
        } else {
            -d
        }
    }
}

/// Determinant as sign and log-magnitude. Panics on non-square input.
pub fn det_scaled(m: &RealMatrix) -> LogScaledReal {
    m.to_scaled().det()
}

/// `(-1)^{l+k} det(minor)`, with 1-based `l`, `k`.
pub fn cofactor_scaled(m: &RealMatrix, l: usize, k: usize) -> LogScaledReal {
    m.to_scaled().cofactor(l, k)
}

/// `Π_{i<j} (β_j - β_i)`; the empty product is 1.
pub fn vandermonde_product(betas: &[f64]) -> LogScaledReal {
    let mut acc = LogScaledReal::ONE;
    for j in 0..betas.len() {
        for i in 0..j {
            acc = acc * LogScaledReal::from_f64(betas[j] - betas[i]);
        }
    }
    acc
}
