//! Region-restricted measurements on the two-oscillator ground state.
//!
//! A party asks whether its particle lies in an interval. Keeping only the
//! successful runs gives the discarding ensemble, whose entanglement is the
//! entropy of Alice's renormalized restricted reduced state. The reduced
//! kernels are discretized either pointwise on a uniform grid or by projection
//! onto a sine/cosine basis local to each interval.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::correlate;
use crate::distribution::{AxisSpec, CellFlag, Distribution2D, DistributionKind};
use crate::linalg::{self, DensityMatrix, Spectrum};
use crate::oscillator::{self, GroundStateConstants, OscillatorModel};
use crate::quadrature::{self, DEFAULT_REL_TOL};
use crate::{Error, Result};

/// Region probability below which conditioning on the region is refused.
pub const EMPTY_MASS: f64 = 1e-14;
/// Half-width of the truncated domain in units of the single-particle width.
pub const TRUNCATION_SIGMAS: f64 = 8.0;
/// Tolerance on the change of the basis matrix when the quadrature order doubles.
pub const BASIS_QUADRATURE_TOL: f64 = 1e-8;
/// Grid points per axis of the precise-measurement ensemble.
pub const PRECISE_MAX_POINTS: usize = 24;
pub const DEFAULT_ONE_RESTRICTED_BINS: usize = 200;
pub const DEFAULT_BOTH_RESTRICTED_BINS: usize = 100;

/// The interval `[center - half_width, center + half_width]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Region {
    pub center: f64,
    pub half_width: f64,
}

impl Region {
    pub fn new(center: f64, half_width: f64) -> Result<Self> {
        if !(half_width > 0.0 && half_width.is_finite() && center.is_finite()) {
            return Err(Error::DomainError {
                what: "half_width",
                value: half_width,
                domain: "(0, inf)",
            });
        }
        Ok(Self { center, half_width })
    }

    pub fn from_bounds(lo: f64, hi: f64) -> Result<Self> {
        Self::new(0.5 * (lo + hi), 0.5 * (hi - lo))
    }

    pub fn lo(&self) -> f64 {
        self.center - self.half_width
    }

    pub fn hi(&self) -> f64 {
        self.center + self.half_width
    }

    pub fn width(&self) -> f64 {
        2.0 * self.half_width
    }

    fn bounds(&self) -> (f64, f64) {
        (self.lo(), self.hi())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TailHandling {
    /// Probability outside the outermost segments is ignored.
    Truncate,
    /// The outermost segments extend to the truncated domain edge.
    Merge,
}

/// Contiguous, ordered segments of one party's axis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Partition {
    segments: Vec<Region>,
    pub tail: TailHandling,
}

impl Partition {
    pub fn new(segments: Vec<Region>, tail: TailHandling) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::InvalidParameter("partition has no segments".into()));
        }
        for pair in segments.windows(2) {
            let gap = pair[1].lo() - pair[0].hi();
            if gap.abs() > 1e-12 * (1.0 + pair[0].hi().abs()) {
                return Err(Error::InvalidParameter(format!(
                    "segments [{}, {}] and [{}, {}] are not contiguous",
                    pair[0].lo(),
                    pair[0].hi(),
                    pair[1].lo(),
                    pair[1].hi()
                )));
            }
        }
        Ok(Self { segments, tail })
    }

    /// `count` equal segments of `[lo, hi]`.
    pub fn uniform(lo: f64, hi: f64, count: usize, tail: TailHandling) -> Result<Self> {
        if count == 0 || !(hi > lo) {
            return Err(Error::InvalidParameter(format!(
                "cannot split [{lo}, {hi}] into {count} segments"
            )));
        }
        let h = (hi - lo) / count as f64;
        let segments = (0..count)
            .map(|k| {
                let a = lo + k as f64 * h;
                let b = if k + 1 == count { hi } else { a + h };
                Region::from_bounds(a, b)
            })
            .collect::<Result<_>>()?;
        Self::new(segments, tail)
    }

    pub fn segments(&self) -> &[Region] {
        &self.segments
    }

    /// Segments as used for integration, with tails merged if requested.
    fn effective(&self, edge: f64) -> Result<Vec<Region>> {
        let mut out = self.segments.clone();
        if self.tail == TailHandling::Merge {
            let last = out.len() - 1;
            let lo = out[0].lo().min(-edge);
            out[0] = Region::from_bounds(lo, out[0].hi())?;
            let hi = out[last].hi().max(edge);
            out[last] = Region::from_bounds(out[last].lo(), hi)?;
        }
        Ok(out)
    }
}

/// How restricted kernels are turned into matrices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "method")]
pub enum DiscretizationSpec {
    /// `n_bins + 1` equally spaced points per interval.
    Grid { n_bins: usize },
    /// `n_basis` sine/cosine functions per interval; the projection integrals use
    /// `quadrature_order` 16-point Gauss-Legendre panels per interval.
    Basis {
        n_basis: usize,
        quadrature_order: usize,
    },
}

impl DiscretizationSpec {
    pub fn grid(n_bins: usize) -> Result<Self> {
        let s = Self::Grid { n_bins };
        s.validate()?;
        Ok(s)
    }

    pub fn basis(n_basis: usize, quadrature_order: usize) -> Result<Self> {
        let s = Self::Basis {
            n_basis,
            quadrature_order,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::Grid { n_bins } if n_bins < 2 => Err(Error::InvalidParameter(format!(
                "n_bins = {n_bins}, need at least 2"
            ))),
            Self::Basis { n_basis, .. } if n_basis < 1 => {
                Err(Error::InvalidParameter("n_basis must be at least 1".into()))
            }
            Self::Basis {
                quadrature_order, ..
            } if quadrature_order < 1 => Err(Error::InvalidParameter(
                "quadrature_order must be at least 1".into(),
            )),
            _ => Ok(()),
        }
    }
}

/// Outcome of one discarding-ensemble evaluation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleResult {
    pub entanglement: f64,
    pub survival_probability: f64,
    pub spectrum: Spectrum,
    pub spec: DiscretizationSpec,
}

/// Half-width of the domain standing in for the whole real line.
pub fn truncation_half_width(model: &OscillatorModel) -> f64 {
    TRUNCATION_SIGMAS * oscillator::ground_state_constants(model).sigma
}

fn reduced_log_kernel(k: &GroundStateConstants, x: f64, y: f64) -> f64 {
    -k.c1 * (x * x + y * y) + 2.0 * k.c2 * x * y
}

/// Quadrature-style sampling of a union of intervals.
struct Nodes {
    x: Vec<f64>,
    w: Vec<f64>,
}

fn grid_nodes(segments: &[(f64, f64)], n_bins: usize) -> Nodes {
    let total: f64 = segments.iter().map(|(a, b)| b - a).sum();
    let h = total / n_bins as f64;
    let mut x = Vec::new();
    let mut w = Vec::new();
    for &(a, b) in segments {
        let bins = if segments.len() == 1 {
            n_bins
        } else {
            (((b - a) / h).round() as usize).max(2)
        };
        let step = (b - a) / bins as f64;
        for i in 0..=bins {
            x.push(if i == bins { b } else { a + i as f64 * step });
            w.push(step);
        }
    }
    Nodes { x, w }
}

/// Orthonormal family on `[c - a, c + a]`: odd `n` cosines, even `n` sines.
fn basis_function(n: usize, center: f64, half: f64, x: f64) -> f64 {
    let arg = n as f64 * std::f64::consts::PI * (x - center) / (2.0 * half);
    let v = if n % 2 == 1 { arg.cos() } else { arg.sin() };
    v / half.sqrt()
}

/// Basis values at quadrature nodes: row-major `nodes x functions`, each
/// function supported on its own interval.
struct BasisSampling {
    nodes: Nodes,
    phi: Vec<f64>,
    functions: usize,
}

fn basis_sampling(segments: &[(f64, f64)], n_basis: usize, panels: usize) -> BasisSampling {
    let functions = n_basis * segments.len();
    let mut x = Vec::new();
    let mut w = Vec::new();
    let mut owner = Vec::new();
    for (s, &(a, b)) in segments.iter().enumerate() {
        let (xs, ws) = quadrature::composite_rule(a, b, panels);
        owner.extend(std::iter::repeat_n(s, xs.len()));
        x.extend(xs);
        w.extend(ws);
    }
    let mut phi = vec![0.0; x.len() * functions];
    for (i, &xi) in x.iter().enumerate() {
        let s = owner[i];
        let (a, b) = segments[s];
        let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
        for n in 1..=n_basis {
            phi[i * functions + s * n_basis + n - 1] = basis_function(n, c, h, xi);
        }
    }
    BasisSampling {
        nodes: Nodes { x, w },
        phi,
        functions,
    }
}

/// `B^T K B` for a symmetric `q x q` kernel `K` and a `q x n` matrix `B`.
fn congruence(kernel: &[f64], b: &[f64], q: usize, n: usize) -> Vec<f64> {
    let mut kb = vec![0.0; q * n];
    for i in 0..q {
        let row = &kernel[i * q..(i + 1) * q];
        let out = &mut kb[i * n..(i + 1) * n];
        for (j, &kij) in row.iter().enumerate() {
            if kij == 0.0 {
                continue;
            }
            for (o, bj) in out.iter_mut().zip(&b[j * n..(j + 1) * n]) {
                *o += kij * bj;
            }
        }
    }
    let mut out = vec![0.0; n * n];
    for i in 0..q {
        let bi = &b[i * n..(i + 1) * n];
        let ki = &kb[i * n..(i + 1) * n];
        for (m, &bim) in bi.iter().enumerate() {
            if bim == 0.0 {
                continue;
            }
            for (o, k) in out[m * n..(m + 1) * n].iter_mut().zip(ki) {
                *o += bim * k;
            }
        }
    }
    symmetrize(&mut out, n);
    out
}

fn symmetrize(a: &mut [f64], n: usize) {
    for i in 0..n {
        for j in i + 1..n {
            let m = 0.5 * (a[i * n + j] + a[j * n + i]);
            a[i * n + j] = m;
            a[j * n + i] = m;
        }
    }
}

fn sampled_reduced_kernel(k: &GroundStateConstants, x: &[f64]) -> Vec<f64> {
    let q = x.len();
    let shift = x
        .iter()
        .map(|&xi| reduced_log_kernel(k, xi, xi))
        .fold(f64::NEG_INFINITY, f64::max);
    let mut kernel = vec![0.0; q * q];
    for i in 0..q {
        for j in i..q {
            let v = (reduced_log_kernel(k, x[i], x[j]) - shift).exp();
            kernel[i * q + j] = v;
            kernel[j * q + i] = v;
        }
    }
    kernel
}

fn grid_reduced_matrix(
    k: &GroundStateConstants,
    segments: &[(f64, f64)],
    n_bins: usize,
) -> (Vec<f64>, usize) {
    let nodes = grid_nodes(segments, n_bins);
    let q = nodes.x.len();
    let mut m = sampled_reduced_kernel(k, &nodes.x);
    let sw: Vec<f64> = nodes.w.iter().map(|w| w.sqrt()).collect();
    for i in 0..q {
        for j in 0..q {
            m[i * q + j] *= sw[i] * sw[j];
        }
    }
    (m, q)
}

fn basis_reduced_matrix_at(
    k: &GroundStateConstants,
    segments: &[(f64, f64)],
    n_basis: usize,
    panels: usize,
) -> (Vec<f64>, usize) {
    let bs = basis_sampling(segments, n_basis, panels);
    let q = bs.nodes.x.len();
    let n = bs.functions;
    let kernel = sampled_reduced_kernel(k, &bs.nodes.x);
    let mut b = bs.phi;
    for i in 0..q {
        for v in &mut b[i * n..(i + 1) * n] {
            *v *= bs.nodes.w[i];
        }
    }
    (congruence(&kernel, &b, q, n), n)
}

/// Runs `build` at `order` and `2 order` and insists the results agree.
fn converged_in_order<F>(order: usize, build: F) -> Result<(Vec<f64>, usize)>
where
    F: Fn(usize) -> (Vec<f64>, usize),
{
    // the exponent shift depends on the nodes, so compare shapes, not scales
    let max_abs = |m: &[f64]| m.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    let (coarse, n) = build(order);
    let (fine, _) = build(2 * order);
    let (sc, sf) = (max_abs(&coarse), max_abs(&fine));
    if sc > 0.0 && sf > 0.0 {
        let change = coarse
            .iter()
            .zip(&fine)
            .fold(0.0f64, |m, (a, b)| m.max((a / sc - b / sf).abs()));
        if change > BASIS_QUADRATURE_TOL {
            return Err(Error::QuadratureNotConverged {
                detail: format!(
                    "basis matrix changed by {change:e} (relative) when the order doubled from {order}"
                ),
            });
        }
    }
    Ok((fine, n))
}

fn reduced_matrix(
    k: &GroundStateConstants,
    segments: &[(f64, f64)],
    spec: DiscretizationSpec,
) -> Result<(Vec<f64>, usize)> {
    spec.validate()?;
    match spec {
        DiscretizationSpec::Grid { n_bins } => Ok(grid_reduced_matrix(k, segments, n_bins)),
        DiscretizationSpec::Basis {
            n_basis,
            quadrature_order,
        } => converged_in_order(quadrature_order, |p| {
            basis_reduced_matrix_at(k, segments, n_basis, p)
        }),
    }
}

fn normalized_matrix(m: Vec<f64>, n: usize) -> Result<DensityMatrix> {
    DensityMatrix::from_real(n, m)?.normalized()
}

fn entropy_with_spectrum(rho: &DensityMatrix) -> Result<(f64, Spectrum)> {
    let spectrum = linalg::eigen_symmetric(rho)?;
    let s = linalg::entropy_of_physical_spectrum(&spectrum, rho.dim())?;
    Ok((s, spectrum))
}

/// Probability that Alice's particle lies in the union of `segments`.
fn alice_probability(model: &OscillatorModel, segments: &[(f64, f64)]) -> Result<f64> {
    let k = oscillator::ground_state_constants(model);
    segments
        .iter()
        .map(|&(a, b)| {
            quadrature::integrate(
                |q| oscillator::reduced_density_with(&k, q, q),
                a,
                b,
                DEFAULT_REL_TOL,
            )
        })
        .sum()
}

/// Alice's normalized reduced state after she finds her particle in the union
/// of `segments`, with the probability of that outcome.
pub fn restricted_density(
    model: &OscillatorModel,
    segments: &[(f64, f64)],
    spec: DiscretizationSpec,
) -> Result<(DensityMatrix, f64)> {
    let p = alice_probability(model, segments)?;
    if p < EMPTY_MASS {
        return Err(Error::EmptyRegionMass { probability: p });
    }
    let k = oscillator::ground_state_constants(model);
    let (m, n) = reduced_matrix(&k, segments, spec)?;
    Ok((normalized_matrix(m, n)?, p))
}

fn ensemble_on(
    model: &OscillatorModel,
    segments: &[(f64, f64)],
    spec: DiscretizationSpec,
) -> Result<EnsembleResult> {
    let (rho, p) = restricted_density(model, segments, spec)?;
    let (entanglement, spectrum) = entropy_with_spectrum(&rho)?;
    Ok(EnsembleResult {
        entanglement,
        survival_probability: p,
        spectrum,
        spec,
    })
}

/// Discarding ensemble when only Alice measures.
pub fn one_restricted_entropy(
    model: &OscillatorModel,
    region: Region,
    spec: DiscretizationSpec,
) -> Result<EnsembleResult> {
    ensemble_on(model, &[region.bounds()], spec)
}

/// The basis-expansion method for Alice's restriction.
pub fn basis_expansion_entropy(
    model: &OscillatorModel,
    region: Region,
    n_basis: usize,
    quadrature_order: usize,
) -> Result<EnsembleResult> {
    one_restricted_entropy(
        model,
        region,
        DiscretizationSpec::basis(n_basis, quadrature_order)?,
    )
}

/// Amplitude matrix `c[i][j]` of the restricted two-particle state, so that
/// Alice's unnormalized reduced matrix is `c c^T`.
fn restricted_amplitudes(
    k: &GroundStateConstants,
    ra: (f64, f64),
    rb: (f64, f64),
    spec: DiscretizationSpec,
) -> Result<(Vec<f64>, usize, usize)> {
    spec.validate()?;
    let sample = |xa: &[f64], xb: &[f64]| -> Vec<f64> {
        let mut e = vec![0.0; xa.len() * xb.len()];
        for (i, &x) in xa.iter().enumerate() {
            for (j, &y) in xb.iter().enumerate() {
                e[i * xb.len() + j] = oscillator::log_wavefunction(&k.l, x, y);
            }
        }
        let shift = e.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        e.iter_mut().for_each(|v| *v = (*v - shift).exp());
        e
    };
    match spec {
        DiscretizationSpec::Grid { n_bins } => {
            let na = grid_nodes(&[ra], n_bins);
            let nb = grid_nodes(&[rb], n_bins);
            let mut psi = sample(&na.x, &nb.x);
            let (p, q) = (na.x.len(), nb.x.len());
            for i in 0..p {
                for j in 0..q {
                    psi[i * q + j] *= (na.w[i] * nb.w[j]).sqrt();
                }
            }
            Ok((psi, p, q))
        }
        DiscretizationSpec::Basis {
            n_basis,
            quadrature_order,
        } => {
            let build = |panels: usize| {
                let ba = basis_sampling(&[ra], n_basis, panels);
                let bb = basis_sampling(&[rb], n_basis, panels);
                let psi = sample(&ba.nodes.x, &bb.nodes.x);
                let (qa, qb) = (ba.nodes.x.len(), bb.nodes.x.len());
                let mut c = vec![0.0; n_basis * n_basis];
                // c = (W_A Phi_A)^T Psi (W_B Phi_B)
                let mut t = vec![0.0; qa * n_basis];
                for i in 0..qa {
                    for j in 0..qb {
                        let v = psi[i * qb + j] * bb.nodes.w[j];
                        for n in 0..n_basis {
                            t[i * n_basis + n] += v * bb.phi[j * n_basis + n];
                        }
                    }
                }
                for i in 0..qa {
                    for m in 0..n_basis {
                        let f = ba.nodes.w[i] * ba.phi[i * n_basis + m];
                        for n in 0..n_basis {
                            c[m * n_basis + n] += f * t[i * n_basis + n];
                        }
                    }
                }
                (c, n_basis)
            };
            let (c, n) = converged_in_order(quadrature_order, build)?;
            Ok((c, n, n))
        }
    }
}

/// Discarding ensemble when both parties measure.
pub fn both_restricted_entropy(
    model: &OscillatorModel,
    region_a: Region,
    region_b: Region,
    spec: DiscretizationSpec,
) -> Result<EnsembleResult> {
    let p = correlate::joint_probability(model, region_a, region_b)?;
    if p < EMPTY_MASS {
        return Err(Error::EmptyRegionMass { probability: p });
    }
    let k = oscillator::ground_state_constants(model);
    let (c, rows, cols) = restricted_amplitudes(&k, region_a.bounds(), region_b.bounds(), spec)?;
    let mut r = vec![0.0; rows * rows];
    for i in 0..rows {
        for j in i..rows {
            let v: f64 = c[i * cols..(i + 1) * cols]
                .iter()
                .zip(&c[j * cols..(j + 1) * cols])
                .map(|(x, y)| x * y)
                .sum();
            r[i * rows + j] = v;
            r[j * rows + i] = v;
        }
    }
    let rho = normalized_matrix(r, rows)?;
    let (entanglement, spectrum) = entropy_with_spectrum(&rho)?;
    Ok(EnsembleResult {
        entanglement,
        survival_probability: p,
        spectrum,
        spec,
    })
}

/// Points per axis used by [`precise_measurement_entanglement`].
fn precise_points(spec: DiscretizationSpec) -> Result<usize> {
    spec.validate()?;
    Ok(match spec {
        DiscretizationSpec::Grid { n_bins } => (n_bins + 1).min(PRECISE_MAX_POINTS),
        DiscretizationSpec::Basis { n_basis, .. } => n_basis.clamp(2, PRECISE_MAX_POINTS),
    })
}

/// The joint state after Alice measures her position exactly inside `region`:
/// block-diagonal in Alice's grid index, each block Bob's conditional pure state
/// on the truncated domain. Rows are ordered `iA * nB + iB`.
pub fn precise_measurement_state(
    model: &OscillatorModel,
    region: Region,
    spec: DiscretizationSpec,
) -> Result<(DensityMatrix, (usize, usize))> {
    let m = precise_points(spec)?;
    let k = oscillator::ground_state_constants(model);
    let edge = truncation_half_width(model);
    let xa = grid_nodes(&[region.bounds()], m - 1);
    let xb = grid_nodes(&[(-edge, edge)], m - 1);
    let (na, nb) = (xa.x.len(), xb.x.len());
    let mut logs = vec![0.0; na * nb];
    for i in 0..na {
        for j in 0..nb {
            logs[i * nb + j] = oscillator::log_wavefunction(&k.l, xa.x[i], xb.x[j]);
        }
    }
    let shift = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let amp: Vec<f64> = logs.iter().map(|v| (v - shift).exp()).collect();
    let n = na * nb;
    let mut data = vec![0.0; n * n];
    for i in 0..na {
        for j in 0..nb {
            for jp in 0..nb {
                data[(i * nb + j) * n + i * nb + jp] = xa.w[i] * amp[i * nb + j] * amp[i * nb + jp];
            }
        }
    }
    Ok((normalized_matrix(data, n)?, (na, nb)))
}

/// Negativity of the precise-measurement ensemble.
pub fn precise_measurement_entanglement(
    model: &OscillatorModel,
    region: Region,
    spec: DiscretizationSpec,
) -> Result<f64> {
    let (rho, dims) = precise_measurement_state(model, region, spec)?;
    linalg::negativity(&rho, dims)
}

/// Both outcomes of Alice's region measurement, kept with their labels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NonDiscardingResult {
    /// `p E_D(inside) + (1 - p) E_D(outside)`.
    pub entanglement: f64,
    /// `p E_D(inside)`, the part usable without Alice's outside results.
    pub local_only: f64,
    pub p_inside: f64,
    pub entropy_inside: f64,
    pub entropy_outside: f64,
}

/// `[-L, L]` minus the region, as a list of intervals.
pub fn complement_segments(region: Region, edge: f64) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    if region.lo() > -edge {
        out.push((-edge, region.lo().min(edge)));
    }
    if region.hi() < edge {
        out.push((region.hi().max(-edge), edge));
    }
    out
}

/// Non-discarding ensemble for Alice's measurement of `region`. The outside
/// outcome is the rest of the truncated domain; an outside outcome with no
/// probability contributes nothing.
pub fn non_discarding_entanglement(
    model: &OscillatorModel,
    region: Region,
    spec: DiscretizationSpec,
) -> Result<NonDiscardingResult> {
    let inside = one_restricted_entropy(model, region, spec)?;
    let outside = complement_segments(region, truncation_half_width(model));
    let (p_out, entropy_outside) = if outside.is_empty() {
        (0.0, 0.0)
    } else {
        match ensemble_on(model, &outside, spec) {
            Ok(r) => (r.survival_probability, r.entanglement),
            Err(Error::EmptyRegionMass { probability }) => (probability, 0.0),
            Err(e) => return Err(e),
        }
    };
    let p = inside.survival_probability;
    let total = p + p_out;
    let p_inside = p / total;
    Ok(NonDiscardingResult {
        entanglement: p_inside * inside.entanglement + (1.0 - p_inside) * entropy_outside,
        local_only: p_inside * inside.entanglement,
        p_inside,
        entropy_inside: inside.entanglement,
        entropy_outside,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PartitionCell {
    pub region_a: Region,
    pub region_b: Region,
    pub probability: f64,
    pub entanglement: f64,
    pub flag: CellFlag,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    /// `sum p_AB E_D(AB)` over all cells.
    pub average: f64,
    /// Total probability covered by the cells.
    pub coverage: f64,
    pub full: f64,
    /// `full - average`, non-negative when the inequality holds.
    pub slack: f64,
    pub cells: Vec<PartitionCell>,
}

/// Average discarding-ensemble entanglement over a product of partitions,
/// compared with the unrestricted entanglement.
pub fn partition_inequality_check(
    model: &OscillatorModel,
    partition_a: &Partition,
    partition_b: &Partition,
    spec: DiscretizationSpec,
) -> Result<InequalityReport> {
    let edge = truncation_half_width(model);
    let sa = partition_a.effective(edge)?;
    let sb = partition_b.effective(edge)?;
    let pairs: Vec<(Region, Region)> = sa
        .iter()
        .flat_map(|&a| sb.iter().map(move |&b| (a, b)))
        .collect();
    let cells = pairs
        .par_iter()
        .map(
            |&(ra, rb)| match both_restricted_entropy(model, ra, rb, spec) {
                Ok(r) => Ok(PartitionCell {
                    region_a: ra,
                    region_b: rb,
                    probability: r.survival_probability,
                    entanglement: r.entanglement,
                    flag: CellFlag::Ok,
                }),
                Err(Error::EmptyRegionMass { probability }) => Ok(PartitionCell {
                    region_a: ra,
                    region_b: rb,
                    probability,
                    entanglement: 0.0,
                    flag: CellFlag::EmptyMass,
                }),
                Err(e) => Err(e),
            },
        )
        .collect::<Result<Vec<_>>>()?;
    let average = cells.iter().map(|c| c.probability * c.entanglement).sum();
    let coverage = cells.iter().map(|c| c.probability).sum();
    let full = oscillator::gaussian_eof(model);
    Ok(InequalityReport {
        average,
        coverage,
        full,
        slack: full - average,
        cells,
    })
}

fn map_cell(result: Result<EnsembleResult>) -> (f64, f64, CellFlag) {
    match result {
        Ok(r) => (r.entanglement, r.survival_probability, CellFlag::Ok),
        Err(Error::EmptyRegionMass { probability }) => (0.0, probability, CellFlag::EmptyMass),
        Err(_) => (f64::NAN, f64::NAN, CellFlag::Masked),
    }
}

/// Alice-only entanglement over region width `2a` (slow axis) and centre.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OneRestrictedMap {
    pub map: Distribution2D,
    /// Each width's profile scaled to share the peak value of the widest one.
    pub rescaled: Distribution2D,
}

pub fn one_restricted_map(
    model: &OscillatorModel,
    widths: &[f64],
    centers: AxisSpec,
    spec: DiscretizationSpec,
) -> Result<OneRestrictedMap> {
    spec.validate()?;
    for &w in widths {
        Region::new(0.0, 0.5 * w)?;
    }
    let map = Distribution2D::tabulate(
        ["width", "q_bar"],
        widths.to_vec(),
        centers.points(),
        DistributionKind::Entanglement,
        |w, c| {
            map_cell(one_restricted_entropy(
                model,
                Region {
                    center: c,
                    half_width: 0.5 * w,
                },
                spec,
            ))
        },
    );
    let (nw, nc) = map.shape();
    let peaks: Vec<f64> = (0..nw)
        .map(|i| {
            (0..nc)
                .filter(|&j| map.flag(i, j) == CellFlag::Ok)
                .map(|j| map.value(i, j))
                .fold(0.0, f64::max)
        })
        .collect();
    let common = peaks.iter().copied().fold(0.0, f64::max);
    let mut rescaled = map.clone();
    for i in 0..nw {
        for j in 0..nc {
            let k = rescaled.index(i, j);
            rescaled.values[k] = if peaks[i] > 0.0 {
                map.values[k] * common / peaks[i]
            } else {
                0.0
            };
        }
    }
    Ok(OneRestrictedMap { map, rescaled })
}

/// Both-restricted entanglement over region centres, widths fixed.
pub fn both_restricted_map(
    model: &OscillatorModel,
    centers_a: AxisSpec,
    centers_b: AxisSpec,
    half_width_a: f64,
    half_width_b: f64,
    spec: DiscretizationSpec,
) -> Result<Distribution2D> {
    spec.validate()?;
    Region::new(0.0, half_width_a)?;
    Region::new(0.0, half_width_b)?;
    Ok(Distribution2D::tabulate(
        ["q_bar_A", "q_bar_B"],
        centers_a.points(),
        centers_b.points(),
        DistributionKind::Entanglement,
        |ca, cb| {
            map_cell(both_restricted_entropy(
                model,
                Region {
                    center: ca,
                    half_width: half_width_a,
                },
                Region {
                    center: cb,
                    half_width: half_width_b,
                },
                spec,
            ))
        },
    ))
}

/// The three measurement scenarios compared along the region centre.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseComparison {
    /// Both parties, identical regions.
    pub same_centre: Distribution2D,
    /// Both parties, Bob's region fixed at the origin.
    pub bob_fixed: Distribution2D,
    /// Alice only.
    pub alice_only: Distribution2D,
}

pub fn case_comparison(
    model: &OscillatorModel,
    widths: &[f64],
    centers: AxisSpec,
    spec: DiscretizationSpec,
) -> Result<CaseComparison> {
    spec.validate()?;
    for &w in widths {
        Region::new(0.0, 0.5 * w)?;
    }
    let table = |f: &(dyn Fn(f64, f64) -> Result<EnsembleResult> + Sync)| {
        Distribution2D::tabulate(
            ["width", "q_bar"],
            widths.to_vec(),
            centers.points(),
            DistributionKind::Entanglement,
            |w, c| map_cell(f(w, c)),
        )
    };
    let region = |c: f64, w: f64| Region {
        center: c,
        half_width: 0.5 * w,
    };
    Ok(CaseComparison {
        same_centre: table(&|w, c| {
            both_restricted_entropy(model, region(c, w), region(c, w), spec)
        }),
        bob_fixed: table(&|w, c| {
            both_restricted_entropy(model, region(c, w), region(0.0, w), spec)
        }),
        alice_only: table(&|w, c| one_restricted_entropy(model, region(c, w), spec)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn model(alpha: f64) -> OscillatorModel {
        OscillatorModel::new(alpha).unwrap()
    }

    #[test]
    fn basis_is_orthonormal() {
        let bs = basis_sampling(&[(-0.7, 1.9)], 12, 8);
        let (q, n) = (bs.nodes.x.len(), bs.functions);
        for m in 0..n {
            for l in 0..n {
                let g: f64 = (0..q)
                    .map(|i| bs.nodes.w[i] * bs.phi[i * n + m] * bs.phi[i * n + l])
                    .sum();
                let expected = if m == l { 1.0 } else { 0.0 };
                assert_abs_diff_eq!(g, expected, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn region_and_spec_validation() {
        assert!(Region::new(0.0, 0.0).is_err());
        assert!(DiscretizationSpec::grid(1).is_err());
        assert!(DiscretizationSpec::basis(0, 4).is_err());
        assert!(DiscretizationSpec::basis(4, 0).is_err());
        let p = Partition::uniform(-4.0, 4.0, 4, TailHandling::Truncate).unwrap();
        assert_eq!(p.segments().len(), 4);
        assert_abs_diff_eq!(p.segments()[1].hi(), 0.0, epsilon = 1e-15);
        let gap = vec![
            Region::from_bounds(0.0, 1.0).unwrap(),
            Region::from_bounds(1.5, 2.0).unwrap(),
        ];
        assert!(Partition::new(gap, TailHandling::Truncate).is_err());
    }

    #[test]
    fn single_function_basis_is_pure() {
        let r = basis_expansion_entropy(&model(6.0), Region::new(0.0, 1.0).unwrap(), 1, 4).unwrap();
        assert_abs_diff_eq!(r.entanglement, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn uncoupled_oscillators_stay_unentangled() {
        let spec = DiscretizationSpec::grid(60).unwrap();
        let r = one_restricted_entropy(&model(0.0), Region::new(0.4, 1.0).unwrap(), spec).unwrap();
        assert!(r.entanglement <= 1e-8);
    }

    #[test]
    fn far_tail_region_is_empty() {
        let spec = DiscretizationSpec::grid(20).unwrap();
        let err =
            one_restricted_entropy(&model(6.0), Region::new(40.0, 0.5).unwrap(), spec).unwrap_err();
        assert!(matches!(err, Error::EmptyRegionMass { .. }));
    }

    #[test]
    fn complement_of_interior_region() {
        let r = Region::new(0.5, 1.0).unwrap();
        assert_eq!(complement_segments(r, 4.0), vec![(-4.0, -0.5), (1.5, 4.0)]);
        let all = Region::new(0.0, 5.0).unwrap();
        assert!(complement_segments(all, 4.0).is_empty());
    }

    #[test]
    fn survival_probability_of_centred_region() {
        // P(|q| <= sigma) for a Gaussian
        let m = model(6.0);
        let sigma = oscillator::ground_state_constants(&m).sigma;
        let spec = DiscretizationSpec::grid(20).unwrap();
        let r = one_restricted_entropy(&m, Region::new(0.0, sigma).unwrap(), spec).unwrap();
        assert_abs_diff_eq!(r.survival_probability, 0.682689492137086, epsilon = 1e-10);
    }

    #[test]
    fn precise_state_is_block_diagonal() {
        let spec = DiscretizationSpec::grid(9).unwrap();
        let (rho, (na, nb)) =
            precise_measurement_state(&model(6.0), Region::new(0.2, 0.5).unwrap(), spec).unwrap();
        assert_eq!((na, nb), (10, 10));
        for i in 0..na {
            for ip in 0..na {
                if i == ip {
                    continue;
                }
                for j in 0..nb {
                    for jp in 0..nb {
                        assert_eq!(rho.get(i * nb + j, ip * nb + jp).re, 0.0);
                    }
                }
            }
        }
    }
}
