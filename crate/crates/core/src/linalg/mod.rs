//! Small dense Hermitian matrices: density matrices, eigenvalues, partial
//! transpose, partial trace, von Neumann entropy and negativity.
//!
//! Storage is real whenever every imaginary part is exactly zero, which is the case
//! for every state the spin and oscillator models produce; the complex path exists
//! for general input.

mod eigen;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub use eigen::DEFAULT_MAX_SWEEPS as MAX_JACOBI_SWEEPS;

/// Asymmetry beyond which input is rejected as non-Hermitian.
pub const HERMITIAN_REJECT_TOLERANCE: f64 = 1e-8;
/// Trace deviation tolerated by the entropy and negativity functionals.
pub const TRACE_TOLERANCE: f64 = 1e-8;
/// Eigenvalues below this are a sign of a non-physical state.
pub const NEGATIVE_EIGENVALUE_TOLERANCE: f64 = 1e-8;
/// Eigenvalues at or below this contribute nothing to entropy sums.
pub const DEFAULT_CLAMP_TOLERANCE: f64 = 1e-12;

/// One of the two parties of a bipartite system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Party {
    A,
    B,
}

#[derive(Debug, Clone, PartialEq)]
enum Storage {
    Real(Vec<f64>),
    Complex(Vec<Complex64>),
}

/// A square Hermitian matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dim: usize,
    storage: Storage,
    trace_normalized: bool,
}

impl DensityMatrix {
    /// Builds a real symmetric matrix. Asymmetry up to [`HERMITIAN_REJECT_TOLERANCE`]
    /// (relative to the largest element) is averaged away.
    pub fn from_real(dim: usize, mut data: Vec<f64>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                actual: data.len(),
            });
        }
        let scale = data.iter().fold(1.0_f64, |m, x| m.max(x.abs()));
        let mut worst = 0.0_f64;
        for i in 0..dim {
            for j in i + 1..dim {
                let (x, y) = (data[i * dim + j], data[j * dim + i]);
                worst = worst.max((x - y).abs());
                let mean = 0.5 * (x + y);
                data[i * dim + j] = mean;
                data[j * dim + i] = mean;
            }
        }
        if worst > HERMITIAN_REJECT_TOLERANCE * scale {
            return Err(Error::NonHermitianInput { asymmetry: worst });
        }
        Ok(Self::with_storage(dim, Storage::Real(data)))
    }

    /// Builds a Hermitian matrix; falls back to real storage when every imaginary
    /// part is zero.
    pub fn from_complex(dim: usize, mut data: Vec<Complex64>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                actual: data.len(),
            });
        }
        if data.iter().all(|z| z.im == 0.0) {
            return Self::from_real(dim, data.into_iter().map(|z| z.re).collect());
        }
        let scale = data.iter().fold(1.0_f64, |m, z| m.max(z.norm()));
        let mut worst = 0.0_f64;
        for i in 0..dim {
            worst = worst.max(data[i * dim + i].im.abs());
            data[i * dim + i].im = 0.0;
            for j in i + 1..dim {
                let (x, y) = (data[i * dim + j], data[j * dim + i].conj());
                worst = worst.max((x - y).norm());
                let mean = 0.5 * (x + y);
                data[i * dim + j] = mean;
                data[j * dim + i] = mean.conj();
            }
        }
        if worst > HERMITIAN_REJECT_TOLERANCE * scale {
            return Err(Error::NonHermitianInput { asymmetry: worst });
        }
        Ok(Self::with_storage(dim, Storage::Complex(data)))
    }

    /// `|psi><psi|` for a real state vector (not renormalized).
    pub fn from_pure_real(psi: &[f64]) -> Self {
        let n = psi.len();
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                data[i * n + j] = psi[i] * psi[j];
            }
        }
        Self::with_storage(n, Storage::Real(data))
    }

    /// `|psi><psi|` for a complex state vector (not renormalized).
    pub fn from_pure(psi: &[Complex64]) -> Self {
        if psi.iter().all(|z| z.im == 0.0) {
            let re: Vec<f64> = psi.iter().map(|z| z.re).collect();
            return Self::from_pure_real(&re);
        }
        let n = psi.len();
        let mut data = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for j in 0..n {
                data[i * n + j] = psi[i] * psi[j].conj();
            }
        }
        Self::with_storage(n, Storage::Complex(data))
    }

    /// The identity divided by `dim`.
    pub fn maximally_mixed(dim: usize) -> Self {
        let mut data = vec![0.0; dim * dim];
        for i in 0..dim {
            data[i * dim + i] = 1.0 / dim as f64;
        }
        Self::with_storage(dim, Storage::Real(data))
    }

    /// Diagonal matrix with the given entries.
    pub fn diagonal(entries: &[f64]) -> Self {
        let n = entries.len();
        let mut data = vec![0.0; n * n];
        for (i, &x) in entries.iter().enumerate() {
            data[i * n + i] = x;
        }
        Self::with_storage(n, Storage::Real(data))
    }

    fn with_storage(dim: usize, storage: Storage) -> Self {
        let mut m = Self {
            dim,
            storage,
            trace_normalized: false,
        };
        m.trace_normalized = (m.trace() - 1.0).abs() <= 1e-10;
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// True when the trace was 1 (within 1e-10) at construction or after [`Self::normalized`].
    pub fn is_trace_normalized(&self) -> bool {
        self.trace_normalized
    }

    pub fn is_real(&self) -> bool {
        matches!(self.storage, Storage::Real(_))
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        match &self.storage {
            Storage::Real(d) => Complex64::new(d[i * self.dim + j], 0.0),
            Storage::Complex(d) => d[i * self.dim + j],
        }
    }

    /// Row-major real elements, if the matrix is stored as real.
    pub fn real_elements(&self) -> Option<&[f64]> {
        match &self.storage {
            Storage::Real(d) => Some(d),
            Storage::Complex(_) => None,
        }
    }

    pub fn to_complex_elements(&self) -> Vec<Complex64> {
        match &self.storage {
            Storage::Real(d) => d.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
            Storage::Complex(d) => d.clone(),
        }
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i).re).sum()
    }

    /// Largest element modulus.
    pub fn max_abs(&self) -> f64 {
        match &self.storage {
            Storage::Real(d) => d.iter().fold(0.0, |m, x| m.max(x.abs())),
            Storage::Complex(d) => d.iter().fold(0.0, |m, z| m.max(z.norm())),
        }
    }

    /// Squared Frobenius norm.
    pub fn frobenius_norm_sq(&self) -> f64 {
        match &self.storage {
            Storage::Real(d) => d.iter().map(|x| x * x).sum(),
            Storage::Complex(d) => d.iter().map(|z| z.norm_sqr()).sum(),
        }
    }

    /// Divides by the trace.
    pub fn normalized(&self) -> Result<Self> {
        let tr = self.trace();
        if !(tr > 0.0) || !tr.is_finite() {
            return Err(Error::NotNormalized { trace: tr });
        }
        let mut out = self.scaled(1.0 / tr);
        out.trace_normalized = true;
        Ok(out)
    }

    pub fn scaled(&self, factor: f64) -> Self {
        let storage = match &self.storage {
            Storage::Real(d) => Storage::Real(d.iter().map(|x| x * factor).collect()),
            Storage::Complex(d) => Storage::Complex(d.iter().map(|z| z * factor).collect()),
        };
        Self::with_storage(self.dim, storage)
    }

    /// `p * self + (1 - p) * other`.
    pub fn convex_mix(&self, p: f64, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                actual: other.dim,
            });
        }
        let storage = match (&self.storage, &other.storage) {
            (Storage::Real(x), Storage::Real(y)) => Storage::Real(
                x.iter()
                    .zip(y)
                    .map(|(a, b)| p * a + (1.0 - p) * b)
                    .collect(),
            ),
            _ => Storage::Complex(
                self.to_complex_elements()
                    .iter()
                    .zip(other.to_complex_elements())
                    .map(|(a, b)| a * p + b * (1.0 - p))
                    .collect(),
            ),
        };
        Ok(Self::with_storage(self.dim, storage))
    }

    /// Tensor product `self ⊗ other`, with `self` as the slow index.
    pub fn kron(&self, other: &Self) -> Self {
        let (n, m) = (self.dim, other.dim);
        let dim = n * m;
        let idx = |i: usize, k: usize| i * m + k;
        match (&self.storage, &other.storage) {
            (Storage::Real(x), Storage::Real(y)) => {
                let mut d = vec![0.0; dim * dim];
                for i in 0..n {
                    for j in 0..n {
                        let xij = x[i * n + j];
                        for k in 0..m {
                            for l in 0..m {
                                d[idx(i, k) * dim + idx(j, l)] = xij * y[k * m + l];
                            }
                        }
                    }
                }
                Self::with_storage(dim, Storage::Real(d))
            }
            _ => {
                let mut d = vec![Complex64::new(0.0, 0.0); dim * dim];
                for i in 0..n {
                    for j in 0..n {
                        let xij = self.get(i, j);
                        for k in 0..m {
                            for l in 0..m {
                                d[idx(i, k) * dim + idx(j, l)] = xij * other.get(k, l);
                            }
                        }
                    }
                }
                Self::with_storage(dim, Storage::Complex(d))
            }
        }
    }
}

/// Eigenvalues in descending order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub clamp_tolerance: f64,
}

impl Spectrum {
    pub fn new(mut eigenvalues: Vec<f64>) -> Self {
        let order = eigen::descending_order(&eigenvalues);
        eigenvalues = order.into_iter().map(|i| eigenvalues[i]).collect();
        Self {
            eigenvalues,
            clamp_tolerance: DEFAULT_CLAMP_TOLERANCE,
        }
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn sum(&self) -> f64 {
        self.eigenvalues.iter().sum()
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }

    /// `-Σ λ log₂ λ` over eigenvalues above the clamp tolerance.
    pub fn entropy_bits(&self) -> f64 {
        let s: f64 = self
            .eigenvalues
            .iter()
            .filter(|&&l| l > self.clamp_tolerance)
            .map(|&l| -l * l.log2())
            .sum();
        s.max(0.0)
    }

    /// Sum of the magnitudes of the negative eigenvalues.
    pub fn negative_mass(&self) -> f64 {
        self.eigenvalues
            .iter()
            .filter(|&&l| l < 0.0)
            .fold(0.0, |acc, l| acc - l)
    }
}

/// Spectrum plus orthonormal eigenvectors (same order as the eigenvalues).
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub spectrum: Spectrum,
    pub vectors: Vec<Vec<Complex64>>,
}

impl EigenDecomposition {
    /// `Σ λ_k v_k v_k†`, row-major.
    pub fn reconstruct(&self) -> Vec<Complex64> {
        let n = self.vectors.len();
        let mut out = vec![Complex64::new(0.0, 0.0); n * n];
        for (l, v) in self.spectrum.eigenvalues.iter().zip(&self.vectors) {
            for i in 0..n {
                for j in 0..n {
                    out[i * n + j] += v[i] * v[j].conj() * *l;
                }
            }
        }
        out
    }
}

/// Real symmetric matrix handed to the Jacobi solver: either the matrix itself or
/// the `2n x 2n` embedding of a complex Hermitian matrix.
fn jacobi_input(m: &DensityMatrix) -> (Vec<f64>, usize, bool) {
    match &m.storage {
        Storage::Real(d) => (d.clone(), m.dim, false),
        Storage::Complex(d) => {
            let n = m.dim;
            let nn = 2 * n;
            let mut e = vec![0.0; nn * nn];
            for i in 0..n {
                for j in 0..n {
                    let z = d[i * n + j];
                    e[i * nn + j] = z.re;
                    e[(i + n) * nn + (j + n)] = z.re;
                    e[i * nn + (j + n)] = -z.im;
                    e[(i + n) * nn + j] = z.im;
                }
            }
            (e, nn, true)
        }
    }
}

/// All eigenvalues of a Hermitian matrix, descending.
pub fn eigen_symmetric(m: &DensityMatrix) -> Result<Spectrum> {
    let (mut a, n, embedded) = jacobi_input(m);
    eigen::jacobi_in_place(&mut a, n, None, eigen::DEFAULT_MAX_SWEEPS)?;
    let diag: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
    if !embedded {
        return Ok(Spectrum::new(diag));
    }
    // every eigenvalue of the embedding appears twice
    let sorted = Spectrum::new(diag);
    let halved = sorted
        .eigenvalues
        .chunks(2)
        .map(|p| 0.5 * (p[0] + p[1]))
        .collect();
    Ok(Spectrum::new(halved))
}

/// Eigenvalues together with orthonormal eigenvectors.
pub fn eigh(m: &DensityMatrix) -> Result<EigenDecomposition> {
    let (mut a, n, embedded) = jacobi_input(m);
    let mut v = vec![0.0; n * n];
    eigen::jacobi_in_place(&mut a, n, Some(&mut v), eigen::DEFAULT_MAX_SWEEPS)?;
    let diag: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
    let order = eigen::descending_order(&diag);
    if !embedded {
        let vectors = order
            .iter()
            .map(|&k| (0..n).map(|r| Complex64::new(v[r * n + k], 0.0)).collect())
            .collect();
        let eigenvalues = order.iter().map(|&k| diag[k]).collect();
        return Ok(EigenDecomposition {
            spectrum: Spectrum {
                eigenvalues,
                clamp_tolerance: DEFAULT_CLAMP_TOLERANCE,
            },
            vectors,
        });
    }
    // Embedded vectors (u; w) map to u + i w; each complex eigenvector appears twice
    // (as z and i z), so keep those that survive Gram-Schmidt against earlier picks.
    let dim = m.dim;
    let mut eigenvalues = Vec::with_capacity(dim);
    let mut vectors: Vec<Vec<Complex64>> = Vec::with_capacity(dim);
    for &k in &order {
        if vectors.len() == dim {
            break;
        }
        let mut z: Vec<Complex64> = (0..dim)
            .map(|r| Complex64::new(v[r * n + k], v[(r + dim) * n + k]))
            .collect();
        for q in &vectors {
            let overlap: Complex64 = q.iter().zip(&z).map(|(a, b)| a.conj() * b).sum();
            for (zi, qi) in z.iter_mut().zip(q) {
                *zi -= overlap * qi;
            }
        }
        let norm = z.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if norm > 0.5 {
            z.iter_mut().for_each(|c| *c /= norm);
            vectors.push(z);
            eigenvalues.push(diag[k]);
        }
    }
    Ok(EigenDecomposition {
        spectrum: Spectrum {
            eigenvalues,
            clamp_tolerance: DEFAULT_CLAMP_TOLERANCE,
        },
        vectors,
    })
}

fn check_normalized(m: &DensityMatrix) -> Result<()> {
    let tr = m.trace();
    if (tr - 1.0).abs() > TRACE_TOLERANCE {
        return Err(Error::NotNormalized { trace: tr });
    }
    Ok(())
}

/// Von Neumann entropy in bits.
pub fn von_neumann_entropy(m: &DensityMatrix) -> Result<f64> {
    check_normalized(m)?;
    let spectrum = eigen_symmetric(m)?;
    entropy_of_physical_spectrum(&spectrum, m.dim)
}

/// Entropy of an already-computed spectrum of a trace-one matrix, with the
/// positivity check applied.
pub fn entropy_of_physical_spectrum(spectrum: &Spectrum, dim: usize) -> Result<f64> {
    let min = spectrum.min();
    if min < -NEGATIVE_EIGENVALUE_TOLERANCE {
        return Err(Error::NegativeEigenvalue { value: min });
    }
    Ok(spectrum.entropy_bits().min((dim.max(1) as f64).log2()))
}

/// `h(ε) = -ε log₂ ε - (1-ε) log₂(1-ε)`.
pub fn binary_entropy(eps: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&eps) {
        return Err(Error::DomainError {
            what: "epsilon",
            value: eps,
            domain: "[0, 1]",
        });
    }
    let term = |x: f64| if x > 0.0 { -x * x.log2() } else { 0.0 };
    Ok(term(eps) + term(1.0 - eps))
}

fn check_dims(m: &DensityMatrix, dims: (usize, usize)) -> Result<()> {
    if dims.0 * dims.1 != m.dim {
        return Err(Error::DimensionMismatch {
            expected: m.dim,
            actual: dims.0 * dims.1,
        });
    }
    Ok(())
}

/// Transposes party B's indices, with row index `iA * dB + iB`.
pub fn partial_transpose(m: &DensityMatrix, dims: (usize, usize)) -> Result<DensityMatrix> {
    check_dims(m, dims)?;
    let (da, db) = dims;
    let n = m.dim;
    let src = |ia: usize, ib: usize, ja: usize, jb: usize| (ia * db + jb) * n + (ja * db + ib);
    let storage = match &m.storage {
        Storage::Real(d) => {
            let mut out = vec![0.0; n * n];
            for ia in 0..da {
                for ib in 0..db {
                    for ja in 0..da {
                        for jb in 0..db {
                            out[(ia * db + ib) * n + ja * db + jb] = d[src(ia, ib, ja, jb)];
                        }
                    }
                }
            }
            Storage::Real(out)
        }
        Storage::Complex(d) => {
            let mut out = vec![Complex64::new(0.0, 0.0); n * n];
            for ia in 0..da {
                for ib in 0..db {
                    for ja in 0..da {
                        for jb in 0..db {
                            out[(ia * db + ib) * n + ja * db + jb] = d[src(ia, ib, ja, jb)];
                        }
                    }
                }
            }
            Storage::Complex(out)
        }
    };
    Ok(DensityMatrix {
        dim: n,
        storage,
        trace_normalized: m.trace_normalized,
    })
}

/// Sum of the magnitudes of the negative eigenvalues of the partial transpose.
pub fn negativity(m: &DensityMatrix, dims: (usize, usize)) -> Result<f64> {
    check_normalized(m)?;
    let pt = partial_transpose(m, dims)?;
    Ok(eigen_symmetric(&pt)?.negative_mass())
}

/// Partial trace over the party that is not kept.
pub fn reduce_to_party(
    m: &DensityMatrix,
    dims: (usize, usize),
    keep: Party,
) -> Result<DensityMatrix> {
    check_dims(m, dims)?;
    let (da, db) = dims;
    let (kept, traced) = match keep {
        Party::A => (da, db),
        Party::B => (db, da),
    };
    let index = |k: usize, t: usize| match keep {
        Party::A => k * db + t,
        Party::B => t * db + k,
    };
    let mut out = vec![Complex64::new(0.0, 0.0); kept * kept];
    for i in 0..kept {
        for j in 0..kept {
            let mut acc = Complex64::new(0.0, 0.0);
            for t in 0..traced {
                acc += m.get(index(i, t), index(j, t));
            }
            out[i * kept + j] = acc;
        }
    }
    let mut reduced = DensityMatrix::from_complex(kept, out)?;
    reduced.trace_normalized = m.trace_normalized || reduced.trace_normalized;
    Ok(reduced)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn bell() -> DensityMatrix {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        DensityMatrix::from_pure_real(&[h, 0.0, 0.0, h])
    }

    #[test]
    fn identity_quarter_spectrum() {
        let s = eigen_symmetric(&DensityMatrix::maximally_mixed(4)).unwrap();
        for l in s.eigenvalues {
            assert_abs_diff_eq!(l, 0.25, epsilon = 1e-15);
        }
    }

    #[test]
    fn diagonal_and_projector_spectra() {
        let s = eigen_symmetric(&DensityMatrix::diagonal(&[0.3, 0.7])).unwrap();
        assert_eq!(s.eigenvalues, vec![0.7, 0.3]);
        let p = DensityMatrix::from_real(2, vec![0.5, 0.5, 0.5, 0.5]).unwrap();
        let s = eigen_symmetric(&p).unwrap();
        assert_abs_diff_eq!(s.eigenvalues[0], 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(s.eigenvalues[1], 0.0, epsilon = 1e-15);
    }

    #[test]
    fn rejects_asymmetric_input() {
        let err = DensityMatrix::from_real(2, vec![0.5, 0.5, 0.4, 0.5]).unwrap_err();
        assert!(matches!(err, Error::NonHermitianInput { .. }));
        let z = |re, im| Complex64::new(re, im);
        let err = DensityMatrix::from_complex(
            2,
            vec![z(0.5, 0.0), z(0.0, 0.1), z(0.0, 0.1), z(0.5, 0.0)],
        )
        .unwrap_err();
        assert!(matches!(err, Error::NonHermitianInput { .. }));
    }

    #[test]
    fn complex_hermitian_spectrum() {
        // [[1, -i], [i, 1]] / 2 is the projector onto (1, i)/√2
        let z = |re, im| Complex64::new(re, im);
        let m = DensityMatrix::from_complex(
            2,
            vec![z(0.5, 0.0), z(0.0, -0.5), z(0.0, 0.5), z(0.5, 0.0)],
        )
        .unwrap();
        assert!(!m.is_real());
        let s = eigen_symmetric(&m).unwrap();
        assert_eq!(s.len(), 2);
        assert_abs_diff_eq!(s.eigenvalues[0], 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(s.eigenvalues[1], 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(von_neumann_entropy(&m).unwrap(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn entropy_examples() {
        assert_abs_diff_eq!(von_neumann_entropy(&bell()).unwrap(), 0.0, epsilon = 1e-12);
        let half = DensityMatrix::maximally_mixed(2);
        assert_abs_diff_eq!(von_neumann_entropy(&half).unwrap(), 1.0, epsilon = 1e-14);
        // -0.9 log2 0.9 - 0.1 log2 0.1
        let d = DensityMatrix::diagonal(&[0.9, 0.1]);
        assert_abs_diff_eq!(
            von_neumann_entropy(&d).unwrap(),
            0.468995593589281,
            epsilon = 1e-12
        );
    }

    #[test]
    fn entropy_error_paths() {
        let unnormalized = DensityMatrix::diagonal(&[0.9, 0.2]);
        assert!(matches!(
            von_neumann_entropy(&unnormalized),
            Err(Error::NotNormalized { .. })
        ));
        let negative = DensityMatrix::diagonal(&[1.1, -0.1]);
        assert!(matches!(
            von_neumann_entropy(&negative),
            Err(Error::NegativeEigenvalue { .. })
        ));
    }

    #[test]
    fn binary_entropy_values() {
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        assert_abs_diff_eq!(binary_entropy(0.5).unwrap(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(
            binary_entropy(0.3).unwrap(),
            binary_entropy(0.7).unwrap(),
            epsilon = 1e-15
        );
        // evaluated directly at ε = 1/900
        assert_abs_diff_eq!(
            binary_entropy(1.0 / 900.0).unwrap(),
            0.012506304930939,
            epsilon = 1e-12
        );
        assert!(matches!(
            binary_entropy(1.5),
            Err(Error::DomainError { .. })
        ));
        assert!(matches!(
            binary_entropy(-1e-3),
            Err(Error::DomainError { .. })
        ));
    }

    #[test]
    fn bell_partial_transpose_spectrum() {
        let pt = partial_transpose(&bell(), (2, 2)).unwrap();
        let s = eigen_symmetric(&pt).unwrap();
        let expected = [0.5, 0.5, 0.5, -0.5];
        for (l, e) in s.eigenvalues.iter().zip(expected) {
            assert_abs_diff_eq!(*l, e, epsilon = 1e-14);
        }
        assert_abs_diff_eq!(negativity(&bell(), (2, 2)).unwrap(), 0.5, epsilon = 1e-14);
    }

    #[test]
    fn partial_transpose_is_an_involution() {
        let m = bell().kron(&DensityMatrix::diagonal(&[0.6, 0.4]));
        let twice = partial_transpose(&partial_transpose(&m, (2, 4)).unwrap(), (2, 4)).unwrap();
        assert_eq!(twice, m);
        assert!(matches!(
            partial_transpose(&m, (3, 3)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn two_bell_pairs_negativity() {
        // Bell(A1,B1) ⊗ Bell(A2,B2) written in (A1, A2, B1, B2) order
        let h = 0.5;
        let mut psi = vec![0.0; 16];
        for x in 0..2 {
            for y in 0..2 {
                psi[8 * x + 4 * y + 2 * x + y] = h;
            }
        }
        let rho = DensityMatrix::from_pure_real(&psi);
        assert_abs_diff_eq!(negativity(&rho, (4, 4)).unwrap(), 1.5, epsilon = 1e-13);
    }

    #[test]
    fn product_state_negativity_vanishes() {
        let ra = DensityMatrix::diagonal(&[0.7, 0.3]);
        let z = |re, im| Complex64::new(re, im);
        let rb = DensityMatrix::from_complex(
            2,
            vec![z(0.5, 0.0), z(0.2, 0.3), z(0.2, -0.3), z(0.5, 0.0)],
        )
        .unwrap();
        let prod = ra.kron(&rb);
        assert_abs_diff_eq!(negativity(&prod, (2, 2)).unwrap(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn reductions() {
        let ra = DensityMatrix::diagonal(&[0.7, 0.3]);
        let rb = DensityMatrix::from_real(2, vec![0.5, 0.25, 0.25, 0.5]).unwrap();
        let prod = ra.kron(&rb);
        let back_a = reduce_to_party(&prod, (2, 2), Party::A).unwrap();
        let back_b = reduce_to_party(&prod, (2, 2), Party::B).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert_abs_diff_eq!(back_a.get(i, j).re, ra.get(i, j).re, epsilon = 1e-15);
                assert_abs_diff_eq!(back_b.get(i, j).re, rb.get(i, j).re, epsilon = 1e-15);
            }
        }
        let marginal = reduce_to_party(&bell(), (2, 2), Party::A).unwrap();
        let mixed = DensityMatrix::maximally_mixed(2);
        for i in 0..2 {
            for j in 0..2 {
                assert_abs_diff_eq!(marginal.get(i, j).re, mixed.get(i, j).re, epsilon = 1e-15);
            }
        }
        assert!(matches!(
            reduce_to_party(&bell(), (2, 3), Party::A),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn eigh_reconstructs_complex_input() {
        let z = |re, im| Complex64::new(re, im);
        let m = DensityMatrix::from_complex(
            3,
            vec![
                z(0.5, 0.0),
                z(0.1, 0.2),
                z(0.0, -0.1),
                z(0.1, -0.2),
                z(0.3, 0.0),
                z(0.05, 0.0),
                z(0.0, 0.1),
                z(0.05, 0.0),
                z(0.2, 0.0),
            ],
        )
        .unwrap();
        let dec = eigh(&m).unwrap();
        assert_eq!(dec.vectors.len(), 3);
        let back = dec.reconstruct();
        let worst = back
            .iter()
            .zip(m.to_complex_elements())
            .fold(0.0_f64, |w, (a, b)| w.max((a - b).norm()));
        assert!(worst < 1e-12, "residual {worst}");
    }
}
