//! Cyclic Jacobi eigensolver for small Hermitian matrices.

use alloc::vec::Vec;

use num_complex::Complex64;

use super::complex::ComplexMatrix;
use crate::{Error, Result};

const MAX_SWEEPS: usize = 60;

/// Ascending eigenvalues of a Hermitian matrix.
///
/// The input is symmetrized as `(M + M†)/2` first.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    jacobi(m, false).map(|(w, _)| w)
}

/// Ascending eigenvalues with eigenvectors as the columns of the second
/// component.
pub fn hermitian_eigen(m: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    jacobi(m, true).map(|(w, v)| (w, v.expect("vectors requested")))
}

fn jacobi(m: &ComplexMatrix, want_vectors: bool) -> Result<(Vec<f64>, Option<ComplexMatrix>)> {
    let n = m.rows();
    if n != m.cols() {
        return Err(Error::Domain("eigenvalues need a square matrix"));
    }
    let mut a = ComplexMatrix::from_fn(n, n, |i, j| 0.5 * (m[(i, j)] + m[(j, i)].conj()));
    let mut v = want_vectors.then(|| ComplexMatrix::identity(n));
    let scale = a.frobenius_norm();
    if scale == 0.0 {
        let mut w = alloc::vec![0.0; n];
        w.sort_by(f64::total_cmp);
        return Ok((w, v));
    }

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                off += a[(i, j)].norm_sqr();
            }
        }
        if libm::sqrt(off) <= 1e-15 * scale {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, v.as_mut(), p, q);
            }
        }
    }
    if !converged {
        return Err(Error::NoConvergence("Jacobi eigensolver"));
    }

    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&x, &y| a[(x, x)].re.total_cmp(&a[(y, y)].re));
    let w = idx.iter().map(|&i| a[(i, i)].re).collect();
    let v = v.map(|v| ComplexMatrix::from_fn(n, n, |r, c| v[(r, idx[c])]));
    Ok((w, v))
}

// Annihilate a[p][q] with U = diag-phase · real plane rotation.
fn rotate(a: &mut ComplexMatrix, v: Option<&mut ComplexMatrix>, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let n = a.rows();
    let phase = apq / r; // e^{iφ}
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let theta = (aqq - app) / (2.0 * r);
    let t = if theta >= 0.0 {
        1.0 / (theta + libm::sqrt(theta * theta + 1.0))
    } else {
        -1.0 / (-theta + libm::sqrt(theta * theta + 1.0))
    };
    let c = 1.0 / libm::sqrt(t * t + 1.0);
    let s = t * c;
    // U[:,p] = c e_p - s e^{-iφ} e_q,  U[:,q] = s e_p + c e^{-iφ} e_q
    let ph = phase.conj();
    let upq = Complex64::new(s, 0.0);
    let uqp = -ph * s;
    let uqq = ph * c;
    // A <- A U
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * c + akq * uqp;
        a[(k, q)] = akp * upq + akq * uqq;
    }
    // A <- U† A
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = apk * c + aqk * uqp.conj();
        a[(q, k)] = apk * upq + aqk * uqq.conj();
    }
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)].im = 0.0;
    a[(q, q)].im = 0.0;
    if let Some(v) = v {
        for k in 0..n {
            let vkp = v[(k, p)];
            let vkq = v[(k, q)];
            v[(k, p)] = vkp * c + vkq * uqp;
            v[(k, q)] = vkp * upq + vkq * uqq;
        }
    }
}
