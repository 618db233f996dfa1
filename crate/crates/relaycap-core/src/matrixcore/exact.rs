use alloc::vec::Vec;

use num_rational::BigRational;
use num_traits::{One, Zero};

/// Small dense matrix over exact rationals.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalMatrix {
    n: usize,
    data: Vec<BigRational>,
}

impl RationalMatrix {
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> BigRational) -> Self {
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

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigRational) {
        self.data[i * self.n + j] = v;
    }

    pub fn minor(&self, l: usize, k: usize) -> Self {
        let n = self.n;
        let mut data = Vec::with_capacity((n - 1) * (n - 1));
        for i in (0..n).filter(|&i| i != l) {
            for j in (0..n).filter(|&j| j != k) {
                data.push(self.get(i, j).clone());
            }
        }
        Self { n: n - 1, data }
    }

    /// Exact determinant by Gaussian elimination.
    pub fn det(&self) -> BigRational {
        let n = self.n;
        let mut a = self.data.clone();
        let mut det = BigRational::one();
        for c in 0..n {
            let Some(piv) = (c..n).find(|&r| !a[r * n + c].is_zero()) else {
                return BigRational::zero();
            };
            if piv != c {
                for j in 0..n {
                    a.swap(piv * n + j, c * n + j);
                }
                det = -det;
            }
            let pv = a[c * n + c].clone();
            det *= &pv;
            for r in c + 1..n {
                if a[r * n + c].is_zero() {
                    continue;
                }
                let f = &a[r * n + c] / &pv;
                for j in c + 1..n {
                    let t = &f * &a[c * n + j];
                    a[r * n + j] -= t;
                }
            }
        }
        det
    }

    /// `(-1)^{l+k} det(minor)`, 1-based indices.
    pub fn cofactor(&self, l: usize, k: usize) -> BigRational {
        if self.n == 1 {
            return BigRational::one();
        }
        let d = self.minor(l - 1, k - 1).det();
        if (l + k) % 2 == 0 {
            d
        } else {
            -d
        }
    }

    /// All cofactors, `out[(l-1)·n + (k-1)] = cofactor(l, k)`.
    ///
    /// Uses `cof = det · (G⁻¹)ᵀ` from one Gauss-Jordan sweep when the matrix
    /// is nonsingular.
    pub fn cofactors(&self) -> Vec<BigRational> {
        let n = self.n;
        let det = self.det();
        if det.is_zero() {
            let mut out = Vec::with_capacity(n * n);
            for l in 1..=n {
                for k in 1..=n {
                    out.push(self.cofactor(l, k));
                }
            }
            return out;
        }
        let w = 2 * n;
        let mut a: Vec<BigRational> = Vec::with_capacity(n * w);
        for i in 0..n {
            for j in 0..n {
                a.push(self.get(i, j).clone());
            }
            for j in 0..n {
                a.push(if i == j {
                    BigRational::one()
                } else {
                    BigRational::zero()
                });
            }
        }
        for c in 0..n {
            let piv = (c..n)
                .find(|&r| !a[r * w + c].is_zero())
                .expect("nonsingular");
            if piv != c {
                for j in 0..w {
                    a.swap(piv * w + j, c * w + j);
                }
            }
            let pv = a[c * w + c].clone();
            for j in 0..w {
                a[c * w + j] /= &pv;
            }
            for r in 0..n {
                if r == c || a[r * w + c].is_zero() {
                    continue;
                }
                let f = a[r * w + c].clone();
                for j in 0..w {
                    let t = &f * &a[c * w + j];
                    a[r * w + j] -= t;
                }
            }
        }
        // inverse sits in columns n..2n; cofactor(l,k) = det · inv[k][l]
        let mut out = Vec::with_capacity(n * n);
        for l in 0..n {
            for k in 0..n {
                out.push(&det * &a[k * w + n + l]);
            }
        }
        out
    }
}
