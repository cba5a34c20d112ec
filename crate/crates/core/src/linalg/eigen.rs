//! Cyclic Jacobi eigensolver for real symmetric matrices.
//!
//! Complex Hermitian input is handled by the caller through the real embedding
//! `[[Re, -Im], [Im, Re]]`, whose spectrum is the Hermitian spectrum with every
//! eigenvalue doubled.

use crate::{Error, Result};

pub const DEFAULT_MAX_SWEEPS: usize = 100;

/// Off-diagonal Frobenius norm, relative to the full norm, at which a sweep loop stops.
const RELATIVE_OFF_TOLERANCE: f64 = 1e-15;

/// Diagonalizes the row-major symmetric `n x n` matrix in place.
///
/// On return the diagonal of `a` holds the eigenvalues (in no particular order);
/// if `vectors` is given it is overwritten with the accumulated rotations, columns
/// being eigenvectors.
pub(crate) fn jacobi_in_place(
    a: &mut [f64],
    n: usize,
    mut vectors: Option<&mut [f64]>,
    max_sweeps: usize,
) -> Result<()> {
    debug_assert_eq!(a.len(), n * n);
    if let Some(v) = vectors.as_deref_mut() {
        v.iter_mut().for_each(|x| *x = 0.0);
        for i in 0..n {
            v[i * n + i] = 1.0;
        }
    }
    if n < 2 {
        return Ok(());
    }

    let frob = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    if frob == 0.0 {
        return Ok(());
    }
    let target = RELATIVE_OFF_TOLERANCE * frob;
    // Rotations on elements this small cannot move the off-norm above target.
    let skip = target / n as f64 * 1e-2;

    for _sweep in 0..max_sweeps {
        let off = off_diagonal_norm(a, n);
        if off <= target {
            return Ok(());
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq.abs() <= skip {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let tau = s / (1.0 + c);

                a[p * n + p] = app - t * apq;
                a[q * n + q] = aqq + t * apq;
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                for r in 0..n {
                    if r == p || r == q {
                        continue;
                    }
                    let g = a[p * n + r];
                    let h = a[q * n + r];
                    let gp = g - s * (h + g * tau);
                    let hq = h + s * (g - h * tau);
                    a[p * n + r] = gp;
                    a[r * n + p] = gp;
                    a[q * n + r] = hq;
                    a[r * n + q] = hq;
                }
                if let Some(v) = vectors.as_deref_mut() {
                    for r in 0..n {
                        let g = v[r * n + p];
                        let h = v[r * n + q];
                        v[r * n + p] = g - s * (h + g * tau);
                        v[r * n + q] = h + s * (g - h * tau);
                    }
                }
            }
        }
    }
    let off = off_diagonal_norm(a, n);
    if off <= target {
        Ok(())
    } else {
        Err(Error::NoConvergence {
            sweeps: max_sweeps,
            off_norm: off,
        })
    }
}

fn off_diagonal_norm(a: &[f64], n: usize) -> f64 {
    let mut sum = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            let x = a[i * n + j];
            sum += x * x;
        }
    }
    (2.0 * sum).sqrt()
}

/// Indices of `values` sorted by descending value; equal values keep input order.
pub(crate) fn descending_order(values: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&i, &j| values[j].total_cmp(&values[i]));
    idx
}
