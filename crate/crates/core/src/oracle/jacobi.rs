//! Cyclic-by-row Jacobi diagonalization of real symmetric matrices.

use crate::error::{Error, Result};

/// Largest accepted dimension (a 12-qubit density matrix).
pub const MAX_DIM: usize = 4096;
/// Sweep budget before reporting non-convergence.
pub const MAX_SWEEPS: usize = 50;
/// Inputs whose `|m[i,j] - m[j,i]|` exceeds this are rejected.
pub const SYMMETRY_TOL: f64 = 1e-10;
/// Converged once the off-diagonal norm drops below this fraction of the Frobenius norm.
pub const RELATIVE_OFF_TOL: f64 = 1e-12;

/// Eigenvalues (ascending) and the matching orthonormal eigenvectors.
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    pub values: Vec<f64>,
    /// Row-major `dim x dim`; column `c` is the eigenvector of `values[c]`.
    pub vectors: Vec<f64>,
}

impl SymmetricEigen {
    pub fn vector(&self, c: usize) -> Vec<f64> {
        let dim = self.values.len();
        (0..dim).map(|r| self.vectors[r * dim + c]).collect()
    }
}

fn check_input(dim: usize, m: &[f64]) -> Result<()> {
    if dim > MAX_DIM || m.len() != dim * dim {
        return Err(Error::BadMatrixShape { len: m.len() });
    }
    for r in 0..dim {
        for c in r + 1..dim {
            let deviation = (m[r * dim + c] - m[c * dim + r]).abs();
            if !(deviation <= SYMMETRY_TOL) {
                return Err(Error::NotSymmetric {
                    row: r,
                    col: c,
                    deviation,
                });
            }
        }
    }
    Ok(())
}

fn off_norm(dim: usize, a: &[f64]) -> f64 {
    let mut s = 0.0;
    for r in 0..dim {
        for c in 0..dim {
            if r != c {
                s += a[r * dim + c] * a[r * dim + c];
            }
        }
    }
    s.sqrt()
}

fn diagonalize(dim: usize, m: &[f64], want_vectors: bool) -> Result<(Vec<f64>, Option<Vec<f64>>)> {
    check_input(dim, m)?;
    let mut a = m.to_vec();
    // Symmetrize so both triangles carry identical values.
    for r in 0..dim {
        for c in r + 1..dim {
            let v = 0.5 * (a[r * dim + c] + a[c * dim + r]);
            a[r * dim + c] = v;
            a[c * dim + r] = v;
        }
    }
    let mut v = want_vectors.then(|| {
        let mut id = vec![0.0; dim * dim];
        for i in 0..dim {
            id[i * dim + i] = 1.0;
        }
        id
    });
    let frob = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let threshold = RELATIVE_OFF_TOL * frob;

    let mut sweep = 0;
    loop {
        let off = off_norm(dim, &a);
        if off <= threshold {
            break;
        }
        if sweep == MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps: sweep, off });
        }
        sweep += 1;
        for p in 0..dim {
            for q in p + 1..dim {
                let apq = a[p * dim + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * dim + p];
                let aqq = a[q * dim + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + theta.hypot(1.0));
                let c = 1.0 / t.hypot(1.0);
                let s = t * c;
                for k in 0..dim {
                    if k == p || k == q {
                        continue;
                    }
                    let akp = a[k * dim + p];
                    let akq = a[k * dim + q];
                    let new_kp = c * akp - s * akq;
                    let new_kq = s * akp + c * akq;
                    a[k * dim + p] = new_kp;
                    a[p * dim + k] = new_kp;
                    a[k * dim + q] = new_kq;
                    a[q * dim + k] = new_kq;
                }
                a[p * dim + p] = app - t * apq;
                a[q * dim + q] = aqq + t * apq;
                a[p * dim + q] = 0.0;
                a[q * dim + p] = 0.0;
                if let Some(v) = v.as_mut() {
                    for k in 0..dim {
                        let vkp = v[k * dim + p];
                        let vkq = v[k * dim + q];
                        v[k * dim + p] = c * vkp - s * vkq;
                        v[k * dim + q] = s * vkp + c * vkq;
                    }
                }
            }
        }
    }
    Ok(((0..dim).map(|i| a[i * dim + i]).collect(), v))
}

/// Full spectrum of a real symmetric `dim x dim` matrix (row-major), ascending.
pub fn symmetric_eigenvalues(dim: usize, m: &[f64]) -> Result<Vec<f64>> {
    let (mut values, _) = diagonalize(dim, m, false)?;
    values.sort_by(f64::total_cmp);
    Ok(values)
}

/// Eigenvalues with eigenvectors, sorted by ascending eigenvalue.
pub fn symmetric_eigen(dim: usize, m: &[f64]) -> Result<SymmetricEigen> {
    let (values, vectors) = diagonalize(dim, m, true)?;
    let vectors = vectors.expect("requested");
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&x, &y| values[x].total_cmp(&values[y]));
    let mut sorted_vectors = vec![0.0; dim * dim];
    for (new_c, &old_c) in order.iter().enumerate() {
        for r in 0..dim {
            sorted_vectors[r * dim + new_c] = vectors[r * dim + old_c];
        }
    }
    Ok(SymmetricEigen {
        values: order.iter().map(|&i| values[i]).collect(),
        vectors: sorted_vectors,
    })
}
