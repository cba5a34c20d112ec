//! Four spins shared as two entangled pairs.
//!
//! Alice holds spins A1, A2 and Bob holds B1, B2. Pair 1 is (A1, B1) in
//! `cos θ1 |↑↑⟩ + sin θ1 |↓↓⟩`, pair 2 is (A2, B2) in the same form with θ2.
//! Basis vectors are ordered (A1, A2, B1, B2) with ↑ = 0, ↓ = 1, so the row
//! index is `8 a1 + 4 a2 + 2 b1 + b2` and the first 4-dim factor is Alice's.
//! A component of the pairwise product with pair values (x, y) lands on index
//! `10 x + 5 y`.
//!
//! The restriction asks each party whether its two spins have total z-component
//! zero (`M_s = 0`).

use serde::{Deserialize, Serialize};

use crate::distribution::{AxisSpec, CellFlag, Distribution2D, DistributionKind};
use crate::linalg::{self, DensityMatrix, Party};
use crate::{Error, Result};

pub const DIM: usize = 16;
pub const PARTY_DIMS: (usize, usize) = (4, 4);
/// Surviving norm below which the restricted pure state is undefined.
pub const SINGULAR_NORM: f64 = 1e-12;
pub const MIN_FIDELITY: f64 = 1.0 / 16.0;

/// Index of the product term with pair values `(x, y)`.
fn pair_index(x: usize, y: usize) -> usize {
    10 * x + 5 * y
}

fn pair_amplitudes(theta: f64) -> [f64; 2] {
    [theta.cos(), theta.sin()]
}

/// `(cos θ1|↑↑⟩ + sin θ1|↓↓⟩) ⊗ (cos θ2|↑↑⟩ + sin θ2|↓↓⟩)` in the (A1,A2,B1,B2) order.
pub fn build_pure_state(theta1: f64, theta2: f64) -> [f64; DIM] {
    let c1 = pair_amplitudes(theta1);
    let c2 = pair_amplitudes(theta2);
    let mut psi = [0.0; DIM];
    for x in 0..2 {
        for y in 0..2 {
            psi[pair_index(x, y)] = c1[x] * c2[y];
        }
    }
    psi
}

/// `(16F - 1)/15 |ψ⟩⟨ψ| + (1 - F)/15 · 1`.
pub fn build_mixed_state(theta1: f64, theta2: f64, fidelity: f64) -> Result<DensityMatrix> {
    if !(MIN_FIDELITY..=1.0).contains(&fidelity) {
        return Err(Error::DomainError {
            what: "F",
            value: fidelity,
            domain: "[1/16, 1]",
        });
    }
    let psi = build_pure_state(theta1, theta2);
    let pure_weight = (16.0 * fidelity - 1.0) / 15.0;
    let noise = (1.0 - fidelity) / 15.0;
    let mut data = vec![0.0; DIM * DIM];
    for i in 0..DIM {
        for j in 0..DIM {
            data[i * DIM + j] = pure_weight * psi[i] * psi[j];
        }
        data[i * DIM + i] += noise;
    }
    DensityMatrix::from_real(DIM, data)
}

/// Which spins a projector tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Restriction {
    Party(Party),
    Both,
}

/// Diagonal projector onto `M_s = 0` for one or both parties, or its complement.
#[derive(Debug, Clone, PartialEq)]
pub struct MsProjector {
    pub restriction: Restriction,
    pub complement: bool,
    mask: [bool; DIM],
}

impl MsProjector {
    pub fn new(restriction: Restriction) -> Self {
        let mut mask = [false; DIM];
        for (k, m) in mask.iter_mut().enumerate() {
            let (a1, a2, b1, b2) = ((k >> 3) & 1, (k >> 2) & 1, (k >> 1) & 1, k & 1);
            let alice = a1 != a2;
            let bob = b1 != b2;
            *m = match restriction {
                Restriction::Party(Party::A) => alice,
                Restriction::Party(Party::B) => bob,
                Restriction::Both => alice && bob,
            };
        }
        Self {
            restriction,
            complement: false,
            mask,
        }
    }

    /// `1 - P`.
    pub fn complement(&self) -> Self {
        let mut mask = self.mask;
        mask.iter_mut().for_each(|m| *m = !*m);
        Self {
            restriction: self.restriction,
            complement: !self.complement,
            mask,
        }
    }

    pub fn rank(&self) -> usize {
        self.mask.iter().filter(|&&m| m).count()
    }

    pub fn contains(&self, index: usize) -> bool {
        self.mask[index]
    }

    /// Dense row-major matrix.
    pub fn matrix(&self) -> Vec<f64> {
        let mut p = vec![0.0; DIM * DIM];
        for (k, &m) in self.mask.iter().enumerate() {
            if m {
                p[k * DIM + k] = 1.0;
            }
        }
        p
    }

    pub fn apply_vector(&self, psi: &[f64; DIM]) -> [f64; DIM] {
        let mut out = *psi;
        for (o, &m) in out.iter_mut().zip(&self.mask) {
            if !m {
                *o = 0.0;
            }
        }
        out
    }

    /// `P ρ P`, unnormalized.
    pub fn apply_density(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        let mut data = vec![0.0; DIM * DIM];
        for i in 0..DIM {
            for j in 0..DIM {
                if self.mask[i] && self.mask[j] {
                    data[i * DIM + j] = rho.get(i, j).re;
                }
            }
        }
        DensityMatrix::from_real(DIM, data)
    }
}

/// The restricted pure state (normalized) with its survival probability.
#[derive(Debug, Clone, PartialEq)]
pub struct RestrictedPure {
    pub state: [f64; DIM],
    pub probability: f64,
}

fn project_pure(psi: &[f64; DIM], projector: &MsProjector) -> Result<RestrictedPure> {
    let mut state = projector.apply_vector(psi);
    let p: f64 = state.iter().map(|x| x * x).sum();
    if p < SINGULAR_NORM {
        return Err(Error::ZeroNormSubspace { norm: p });
    }
    let norm = p.sqrt();
    state.iter_mut().for_each(|x| *x /= norm);
    Ok(RestrictedPure {
        state,
        probability: p,
    })
}

/// Both parties find `M_s = 0`. For this state Alice's outcome already fixes Bob's.
pub fn restrict_ms0_pure(theta1: f64, theta2: f64) -> Result<RestrictedPure> {
    project_pure(
        &build_pure_state(theta1, theta2),
        &MsProjector::new(Restriction::Both),
    )
}

/// `(1 - cos 2θ1 cos 2θ2) / 2`.
pub fn survival_probability(theta1: f64, theta2: f64) -> f64 {
    0.5 * (1.0 - (2.0 * theta1).cos() * (2.0 * theta2).cos())
}

/// Closed form of the restricted pure state.
pub fn restricted_pure_analytic(theta1: f64, theta2: f64) -> Result<[f64; DIM]> {
    let d = 1.0 - (2.0 * theta1).cos() * (2.0 * theta2).cos();
    if d < SINGULAR_NORM {
        return Err(Error::ZeroNormSubspace { norm: 0.5 * d });
    }
    let k = (2.0 / d).sqrt();
    let mut out = [0.0; DIM];
    out[pair_index(0, 1)] = k * theta1.cos() * theta2.sin();
    out[pair_index(1, 0)] = k * theta1.sin() * theta2.cos();
    Ok(out)
}

/// Restricted, renormalized mixed state and its survival probability.
pub fn restrict_ms0_mixed(rho: &DensityMatrix) -> Result<(DensityMatrix, f64)> {
    let projected = MsProjector::new(Restriction::Both).apply_density(rho)?;
    let p = projected.trace();
    if p < SINGULAR_NORM {
        return Err(Error::ZeroNormSubspace { norm: p });
    }
    Ok((projected.normalized()?, p))
}

fn alice_entropy(state: &[f64; DIM]) -> Result<f64> {
    let rho = DensityMatrix::from_pure_real(state);
    let reduced = linalg::reduce_to_party(&rho, PARTY_DIMS, Party::A)?;
    linalg::von_neumann_entropy(&reduced)
}

/// Von Neumann entropy of Alice's reduced state, optionally after the
/// `M_s = 0` restriction.
pub fn spin_entropy(theta1: f64, theta2: f64, restricted: bool) -> Result<f64> {
    if restricted {
        alice_entropy(&restrict_ms0_pure(theta1, theta2)?.state)
    } else {
        alice_entropy(&build_pure_state(theta1, theta2))
    }
}

/// Negativity across the A|B cut of the mixed state, optionally restricted.
pub fn spin_negativity(theta1: f64, theta2: f64, fidelity: f64, restricted: bool) -> Result<f64> {
    let rho = build_mixed_state(theta1, theta2, fidelity)?;
    let rho = if restricted {
        restrict_ms0_mixed(&rho)?.0
    } else {
        rho
    };
    linalg::negativity(&rho, PARTY_DIMS)
}

/// Both outcomes of Alice's `M_s` measurement on the pure state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OutcomeSplit {
    /// Probability of `M_s = 0`.
    pub p: f64,
    pub entropy_ms0: f64,
    pub entropy_complement: f64,
    pub unrestricted: f64,
}

impl OutcomeSplit {
    /// `p S_D + (1 - p) S_D'`, the non-discarding average.
    pub fn average(&self) -> f64 {
        self.p * self.entropy_ms0 + (1.0 - self.p) * self.entropy_complement
    }
}

/// Conditional entropies for both outcomes; an outcome of zero probability
/// contributes nothing.
pub fn outcome_split(theta1: f64, theta2: f64) -> Result<OutcomeSplit> {
    let psi = build_pure_state(theta1, theta2);
    let projector = MsProjector::new(Restriction::Party(Party::A));
    let branch = |proj: &MsProjector| -> Result<(f64, f64)> {
        match project_pure(&psi, proj) {
            Ok(r) => Ok((r.probability, alice_entropy(&r.state)?)),
            Err(Error::ZeroNormSubspace { norm }) => Ok((norm, 0.0)),
            Err(e) => Err(e),
        }
    };
    let (p, entropy_ms0) = branch(&projector)?;
    let (_, entropy_complement) = branch(&projector.complement())?;
    Ok(OutcomeSplit {
        p,
        entropy_ms0,
        entropy_complement,
        unrestricted: alice_entropy(&psi)?,
    })
}

/// Smallest F at which the negativity exceeds `threshold`, by bisection on
/// `[1/16, 1]`.
pub fn negativity_vanish_point(
    theta1: f64,
    theta2: f64,
    restricted: bool,
    threshold: f64,
    tolerance: f64,
) -> Result<f64> {
    let entangled = |f: f64| -> Result<bool> {
        Ok(spin_negativity(theta1, theta2, f, restricted)? > threshold)
    };
    let (mut lo, mut hi) = (MIN_FIDELITY, 1.0);
    if entangled(lo)? {
        return Ok(lo);
    }
    if !entangled(hi)? {
        return Err(Error::InvalidParameter(format!(
            "negativity never exceeds {threshold} at theta = ({theta1}, {theta2})"
        )));
    }
    while hi - lo > tolerance {
        let mid = 0.5 * (lo + hi);
        if entangled(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "measure")]
pub enum SpinMeasure {
    Entropy,
    Negativity { fidelity: f64 },
}

/// Unrestricted and restricted surfaces with their difference.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpinScan {
    pub unrestricted: Distribution2D,
    pub restricted: Distribution2D,
    /// Restricted minus unrestricted.
    pub difference: Distribution2D,
}

/// Tabulates a measure over (θ1, θ2); singular restricted cells become NaN
/// with a `Masked` flag.
pub fn spin_scan(theta1: AxisSpec, theta2: AxisSpec, measure: SpinMeasure) -> Result<SpinScan> {
    if theta1.steps < 2 || theta2.steps < 2 {
        return Err(Error::InvalidParameter(
            "spin scans need at least 2 steps per axis".into(),
        ));
    }
    if let SpinMeasure::Negativity { fidelity } = measure {
        build_mixed_state(0.0, 0.0, fidelity)?;
    }
    let kind = match measure {
        SpinMeasure::Entropy => DistributionKind::Entanglement,
        SpinMeasure::Negativity { .. } => DistributionKind::Negativity,
    };
    let eval = |t1: f64, t2: f64, restricted: bool| {
        let value = match measure {
            SpinMeasure::Entropy => spin_entropy(t1, t2, restricted),
            SpinMeasure::Negativity { fidelity } => spin_negativity(t1, t2, fidelity, restricted),
        };
        let prob = if restricted {
            survival_probability(t1, t2)
        } else {
            1.0
        };
        match value {
            Ok(v) => (v, prob, CellFlag::Ok),
            Err(_) => (f64::NAN, prob, CellFlag::Masked),
        }
    };
    let names = ["theta1", "theta2"];
    let (a, b) = (theta1.points(), theta2.points());
    let unrestricted =
        Distribution2D::tabulate(names, a.clone(), b.clone(), kind, |x, y| eval(x, y, false));
    let restricted = Distribution2D::tabulate(names, a, b, kind, |x, y| eval(x, y, true));
    let difference = restricted.difference(&unrestricted)?;
    Ok(SpinScan {
        unrestricted,
        restricted,
        difference,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_PI_4;

    #[test]
    fn pure_state_examples() {
        let psi = build_pure_state(0.0, 0.0);
        assert_eq!(psi[0], 1.0);
        assert_eq!(psi.iter().map(|x| x * x).sum::<f64>(), 1.0);
        let psi = build_pure_state(FRAC_PI_4, FRAC_PI_4);
        for k in [0, 5, 10, 15] {
            assert_abs_diff_eq!(psi[k], 0.5, epsilon = 1e-15);
        }
    }

    #[test]
    fn projector_ranks_and_idempotence() {
        let pa = MsProjector::new(Restriction::Party(Party::A));
        let pb = MsProjector::new(Restriction::Party(Party::B));
        let both = MsProjector::new(Restriction::Both);
        assert_eq!(pa.rank(), 8);
        assert_eq!(pb.rank(), 8);
        assert_eq!(both.rank(), 4);
        assert_eq!(pa.complement().rank(), 8);
        let m = pa.matrix();
        for i in 0..DIM {
            for j in 0..DIM {
                let sq: f64 = (0..DIM).map(|k| m[i * DIM + k] * m[k * DIM + j]).sum();
                assert_eq!(sq, m[i * DIM + j]);
            }
        }
    }

    #[test]
    fn restriction_at_equal_angles() {
        let r = restrict_ms0_pure(FRAC_PI_4, FRAC_PI_4).unwrap();
        assert_abs_diff_eq!(r.probability, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(r.state[5], std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-15);
        assert_abs_diff_eq!(
            r.state[10],
            std::f64::consts::FRAC_1_SQRT_2,
            epsilon = 1e-15
        );
        assert!(matches!(
            restrict_ms0_pure(0.0, 0.0),
            Err(Error::ZeroNormSubspace { .. })
        ));
        assert_abs_diff_eq!(
            spin_entropy(FRAC_PI_4, 0.0, true).unwrap(),
            0.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn entropy_landmarks() {
        assert_abs_diff_eq!(
            spin_entropy(FRAC_PI_4, FRAC_PI_4, false).unwrap(),
            2.0,
            epsilon = 1e-9
        );
        assert_abs_diff_eq!(
            spin_entropy(FRAC_PI_4, 0.0, false).unwrap(),
            1.0,
            epsilon = 1e-9
        );
        assert_abs_diff_eq!(
            spin_entropy(FRAC_PI_4, FRAC_PI_4, true).unwrap(),
            1.0,
            epsilon = 1e-9
        );
    }

    #[test]
    fn alice_marginal_is_maximally_mixed_at_equal_angles() {
        let rho = DensityMatrix::from_pure_real(&build_pure_state(FRAC_PI_4, FRAC_PI_4));
        let reduced = linalg::reduce_to_party(&rho, PARTY_DIMS, Party::A).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let expected = if i == j { 0.25 } else { 0.0 };
                assert_abs_diff_eq!(reduced.get(i, j).re, expected, epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn mixed_state_limits() {
        let pure = build_mixed_state(0.3, 1.1, 1.0).unwrap();
        let proj = DensityMatrix::from_pure_real(&build_pure_state(0.3, 1.1));
        for i in 0..DIM {
            for j in 0..DIM {
                assert_abs_diff_eq!(pure.get(i, j).re, proj.get(i, j).re, epsilon = 1e-15);
            }
        }
        let mixed = build_mixed_state(0.3, 1.1, MIN_FIDELITY).unwrap();
        assert_abs_diff_eq!(mixed.get(3, 3).re, 1.0 / 16.0, epsilon = 1e-15);
        assert_abs_diff_eq!(mixed.get(0, 5).re, 0.0, epsilon = 1e-15);
        assert!(build_mixed_state(0.0, 0.0, 0.05).is_err());
        assert!(build_mixed_state(0.0, 0.0, 1.01).is_err());
    }

    #[test]
    fn negativity_landmarks() {
        let n = |f, r| spin_negativity(FRAC_PI_4, FRAC_PI_4, f, r).unwrap();
        assert_abs_diff_eq!(n(1.0, false), 1.5, epsilon = 1e-10);
        assert_abs_diff_eq!(n(1.0, true), 0.5, epsilon = 1e-10);
        assert!(n(0.25, false) < 1e-6);
        assert!(n(0.25, true) < 1e-6);
        assert_eq!(n(MIN_FIDELITY, false), 0.0);
    }

    #[test]
    fn vanish_point_by_bisection() {
        for restricted in [false, true] {
            let f = negativity_vanish_point(FRAC_PI_4, FRAC_PI_4, restricted, 1e-9, 1e-8).unwrap();
            assert!((f - 0.25).abs() < 1e-6, "{restricted}: {f}");
        }
    }

    #[test]
    fn scan_marks_singular_points() {
        let axis = AxisSpec::new(0.0, std::f64::consts::PI, 13).unwrap();
        let scan = spin_scan(axis, axis, SpinMeasure::Entropy).unwrap();
        assert_eq!(scan.restricted.flag(0, 0), CellFlag::Masked);
        assert!(scan.restricted.value(0, 0).is_nan());
        assert_eq!(scan.unrestricted.flag(0, 0), CellFlag::Ok);
        assert!(scan.difference.max_value().unwrap() > 0.0);
        assert!(spin_scan(
            AxisSpec::new(0.0, 1.0, 1).unwrap(),
            axis,
            SpinMeasure::Entropy
        )
        .is_err());
    }
}
