//! Closed forms for the ground state of two harmonically coupled oscillators.
//!
//! Each particle sits in a trap of frequency `omega`; a spring of constant `K`
//! joins them, and everything depends on `alpha = 2K / (m omega^2)` through
//! `s = sqrt(1 + 4 alpha)`. Units default to `m = omega = hbar = 1`, in which the
//! single-particle width at `alpha = 0` is the unit of length.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OscillatorModel {
    pub alpha: f64,
    pub mass: f64,
    pub omega: f64,
}

impl OscillatorModel {
    /// Unit mass and frequency.
    pub fn new(alpha: f64) -> Result<Self> {
        Self::with_units(alpha, 1.0, 1.0)
    }

    pub fn with_units(alpha: f64, mass: f64, omega: f64) -> Result<Self> {
        if !(alpha >= 0.0 && alpha.is_finite()) {
            return Err(Error::DomainError {
                what: "alpha",
                value: alpha,
                domain: "[0, inf)",
            });
        }
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(Error::DomainError {
                what: "mass",
                value: mass,
                domain: "(0, inf)",
            });
        }
        if !(omega > 0.0 && omega.is_finite()) {
            return Err(Error::DomainError {
                what: "omega",
                value: omega,
                domain: "(0, inf)",
            });
        }
        Ok(Self { alpha, mass, omega })
    }

    /// `m omega`, the inverse squared length scale.
    pub fn m_omega(&self) -> f64 {
        self.mass * self.omega
    }

    /// `sqrt(1 + 4 alpha)`.
    pub fn s(&self) -> f64 {
        (1.0 + 4.0 * self.alpha).sqrt()
    }

    /// `s - 1` without cancellation for small alpha.
    fn s_minus_one(&self) -> f64 {
        4.0 * self.alpha / (self.s() + 1.0)
    }

    /// `1 + 2 alpha - s`, again without cancellation.
    fn one_plus_two_alpha_minus_s(&self) -> f64 {
        let d = self.s_minus_one();
        0.5 * d * d
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GroundStateConstants {
    /// `psi(q) = exp(-q^T L q)`.
    pub l: [[f64; 2]; 2],
    pub c1: f64,
    pub c2: f64,
    /// Width of the single-particle position distribution.
    pub sigma: f64,
    pub w: f64,
    /// Entanglement of formation in ebits.
    pub eof: f64,
}

pub fn ground_state_constants(model: &OscillatorModel) -> GroundStateConstants {
    let mw = model.m_omega();
    let a = model.alpha;
    let s = model.s();
    let diag = mw / 8.0 * (1.0 + s);
    let off = -mw / 8.0 * model.s_minus_one();
    let c1 = (1.0 + 2.0 * a + 3.0 * s) / (8.0 + 8.0 * s) * mw;
    let c2 = a * model.s_minus_one() / (8.0 * (1.0 + 2.0 * a + s)) * mw;
    let sigma = (2.0 * mw * s / (1.0 + s)).powf(-0.5);
    let w = eof_parameter(model);
    GroundStateConstants {
        l: [[diag, off], [off, diag]],
        c1,
        c2,
        sigma,
        w,
        eof: eof_from_w(w),
    }
}

/// `w = ((r - 1)/(r + 1))^2` with `r = (1 + 4 alpha)^(1/4)`, written so that no
/// difference of nearly equal terms appears.
pub fn eof_parameter(model: &OscillatorModel) -> f64 {
    let s = model.s();
    let r = s.sqrt();
    let x = 4.0 * model.alpha / ((s + 1.0) * (r + 1.0) * (r + 1.0));
    x * x
}

fn eof_from_w(w: f64) -> f64 {
    if w <= 0.0 {
        return 0.0;
    }
    -(-w).ln_1p() / std::f64::consts::LN_2 - w * w.log2() / (1.0 - w)
}

/// Exact ground-state entanglement (ebits).
pub fn gaussian_eof(model: &OscillatorModel) -> f64 {
    eof_from_w(eof_parameter(model))
}

/// `rho_A(q, q')`, Alice's reduced density matrix in position representation.
pub fn reduced_density_value(model: &OscillatorModel, q: f64, qp: f64) -> f64 {
    let k = ground_state_constants(model);
    reduced_density_with(&k, q, qp)
}

pub(crate) fn reduced_density_with(k: &GroundStateConstants, q: f64, qp: f64) -> f64 {
    (2.0 * (k.c1 - k.c2) / std::f64::consts::PI).sqrt()
        * (-k.c1 * (q * q + qp * qp) + 2.0 * k.c2 * q * qp).exp()
}

/// Log of the unnormalized two-particle wavefunction, `-q^T L q`.
pub(crate) fn log_wavefunction(l: &[[f64; 2]; 2], qa: f64, qb: f64) -> f64 {
    -(l[0][0] * qa * qa + 2.0 * l[0][1] * qa * qb + l[1][1] * qb * qb)
}

/// Unnormalized `psi(qA, qB) = exp(-q^T L q)`, equal to 1 at the origin.
pub fn two_particle_wavefunction(model: &OscillatorModel, qa: f64, qb: f64) -> f64 {
    let k = ground_state_constants(model);
    log_wavefunction(&k.l, qa, qb).exp()
}

/// Normalization of `|psi|^2`: `m omega sqrt(s) / (2 pi)`.
pub fn joint_density_norm(model: &OscillatorModel) -> f64 {
    model.m_omega() * model.s().sqrt() / (2.0 * std::f64::consts::PI)
}

/// Normalized position probability density `rho(qA, qB; qA, qB)`.
pub fn joint_density(model: &OscillatorModel, qa: f64, qb: f64) -> f64 {
    let k = ground_state_constants(model);
    joint_density_norm(model) * (2.0 * log_wavefunction(&k.l, qa, qb)).exp()
}

/// Schmidt weight left after restricting Alice to a region of half-width `a`
/// (small-`a` limit, independent of the region centre).
pub fn small_a_epsilon_one(model: &OscillatorModel, a: f64) -> f64 {
    let al = model.alpha;
    a * a * model.m_omega() * al * model.s_minus_one() / (12.0 * (1.0 + 2.0 * al + model.s()))
}

/// Schmidt weight left after restricting both parties (half-widths `a`, `b`).
pub fn small_a_epsilon_both(model: &OscillatorModel, a: f64, b: f64) -> f64 {
    let mw = model.m_omega();
    a * a * b * b * mw * mw / 72.0 * model.one_plus_two_alpha_minus_s()
}

/// `(sqrt(2) m omega / 6) sqrt(1 + 2 alpha - s)`.
///
/// With both parties restricted, the concurrence `2 sqrt(eps)` of the surviving
/// state tends to `concurrence_density * a * b`.
pub fn concurrence_density(model: &OscillatorModel) -> f64 {
    std::f64::consts::SQRT_2 * model.m_omega() / 6.0 * model.one_plus_two_alpha_minus_s().sqrt()
}

/// Small-region widths of the classical joint and conditional distributions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassicalWidths {
    pub sigma_plus_c: f64,
    pub sigma_minus_c: f64,
    pub sigma_1: f64,
    pub sigma_2: f64,
    pub sigma_12: f64,
}

pub fn classical_widths(model: &OscillatorModel) -> Result<ClassicalWidths> {
    let al = model.alpha;
    if al <= 0.0 {
        return Err(Error::DivergentWidth {
            which: "sigma_1, sigma_12",
            alpha: al,
        });
    }
    let unit = model.m_omega().powf(-0.5);
    let s = model.s();
    Ok(ClassicalWidths {
        sigma_plus_c: std::f64::consts::SQRT_2 * unit,
        sigma_minus_c: (2.0 / s).sqrt() * unit,
        sigma_1: ((1.0 + s) * (1.0 + 2.0 * al + s) / (4.0 * al * al)).sqrt() * unit,
        sigma_2: (2.0 / (1.0 + s)).sqrt() * unit,
        sigma_12: (1.0 / model.s_minus_one()).sqrt() * unit,
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
    fn constants_at_alpha_six() {
        let k = ground_state_constants(&model(6.0));
        assert_abs_diff_eq!(k.c1, 28.0 / 48.0, epsilon = 1e-14);
        assert_abs_diff_eq!(k.c2, 24.0 / 144.0, epsilon = 1e-14);
        assert_abs_diff_eq!(k.sigma, (3.0f64 / 5.0).sqrt(), epsilon = 1e-14);
        assert_abs_diff_eq!(
            4.0 * (k.c1 - k.c2),
            1.0 / (k.sigma * k.sigma),
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(k.l[0][0], 0.75, epsilon = 1e-15);
        assert_abs_diff_eq!(k.l[0][1], -0.5, epsilon = 1e-15);
    }

    #[test]
    fn uncoupled_limit() {
        let k = ground_state_constants(&model(0.0));
        assert_eq!(k.c2, 0.0);
        assert_abs_diff_eq!(k.sigma, 1.0, epsilon = 1e-15);
        assert_eq!(k.eof, 0.0);
        assert!(classical_widths(&model(0.0)).is_err());
    }

    #[test]
    fn eof_parameter_matches_printed_form() {
        for al in [0.5f64, 1.0, 2.0, 6.0, 10.0, 40.0] {
            let s: f64 = (1.0 + 4.0 * al).sqrt();
            let r = s.sqrt();
            let printed = (1.0 + 3.0 * s + 2.0 * (al - r - r * r * r)) / (1.0 + 2.0 * al - s);
            assert_abs_diff_eq!(eof_parameter(&model(al)), printed, epsilon = 1e-13);
        }
    }

    #[test]
    #[allow(clippy::excessive_precision)]
    fn eof_against_extended_precision() {
        // 50-digit evaluations of the printed formula
        let cases = [
            (6.0, 0.14589803375031546, 0.7018824866054366),
            (0.06, 0.00072266579372400986, 0.0085889887438376282),
            (0.01, 2.4034995188677897e-5, 0.00040348952836874561),
            (1e-4, 2.4990003623700468e-9, 7.5016734324682225e-8),
        ];
        for (al, w, eof) in cases {
            let m = model(al);
            assert!((eof_parameter(&m) - w).abs() <= 1e-13 * w);
            assert!((gaussian_eof(&m) - eof).abs() <= 1e-12 * eof);
        }
    }

    #[test]
    fn reduced_density_examples() {
        let m = model(6.0);
        assert_abs_diff_eq!(
            reduced_density_value(&m, 0.0, 0.0),
            (2.0 * (5.0 / 12.0) / std::f64::consts::PI).sqrt(),
            epsilon = 1e-14
        );
        assert_eq!(
            reduced_density_value(&m, 1.3, -0.2),
            reduced_density_value(&m, -0.2, 1.3)
        );
        let sigma = ground_state_constants(&m).sigma;
        for &q in &[0.0, 0.4, 1.1, -2.0] {
            let gauss = (-q * q / (2.0 * sigma * sigma)).exp()
                / (sigma * (2.0 * std::f64::consts::PI).sqrt());
            assert_abs_diff_eq!(reduced_density_value(&m, q, q), gauss, epsilon = 1e-14);
        }
    }

    #[test]
    fn wavefunction_along_normal_modes() {
        for &al in &[0.0, 0.3, 6.0] {
            let m = model(al);
            let s = m.s();
            for &q in &[0.2, 1.0, 1.7] {
                assert_abs_diff_eq!(
                    two_particle_wavefunction(&m, q, q),
                    (-0.5 * q * q).exp(),
                    epsilon = 1e-14
                );
                assert_abs_diff_eq!(
                    two_particle_wavefunction(&m, q, -q),
                    (-0.5 * s * q * q).exp(),
                    epsilon = 1e-14
                );
            }
            assert_eq!(two_particle_wavefunction(&m, 0.0, 0.0), 1.0);
        }
    }

    #[test]
    fn small_region_constants() {
        let m = model(6.0);
        assert_abs_diff_eq!(small_a_epsilon_one(&m, 0.1), 1.0 / 900.0, epsilon = 1e-16);
        assert_abs_diff_eq!(
            small_a_epsilon_one(&m, 0.2),
            4.0 * small_a_epsilon_one(&m, 0.1),
            epsilon = 1e-16
        );
        assert_abs_diff_eq!(
            small_a_epsilon_both(&m, 0.1, 0.1),
            1e-4 / 9.0,
            epsilon = 1e-18
        );
        assert_abs_diff_eq!(
            small_a_epsilon_both(&m, 0.1, 0.3),
            small_a_epsilon_both(&m, 0.3, 0.1),
            epsilon = 1e-18
        );
        assert_abs_diff_eq!(concurrence_density(&m), 2.0 / 3.0, epsilon = 1e-15);
        let m0 = model(0.0);
        assert_eq!(small_a_epsilon_one(&m0, 0.1), 0.0);
        assert_eq!(small_a_epsilon_both(&m0, 0.1, 0.1), 0.0);
        assert_eq!(concurrence_density(&m0), 0.0);
    }

    #[test]
    fn concurrence_density_relation() {
        for &al in &[0.06, 1.0, 6.0] {
            let m = model(al);
            let (a, b) = (0.07, 0.04);
            let eps = small_a_epsilon_both(&m, a, b);
            assert_abs_diff_eq!(
                2.0 * eps.sqrt(),
                concurrence_density(&m) * a * b,
                epsilon = 1e-15
            );
        }
    }

    #[test]
    #[allow(clippy::approx_constant)]
    fn table_one_classical_row() {
        let c = classical_widths(&model(6.0)).unwrap();
        assert_abs_diff_eq!(c.sigma_plus_c, 1.41421, epsilon = 5e-6);
        assert_abs_diff_eq!(c.sigma_minus_c, 0.63246, epsilon = 5e-6);
        assert_abs_diff_eq!(c.sigma_1, 0.86603, epsilon = 5e-6);
        assert_abs_diff_eq!(c.sigma_2, 0.57735, epsilon = 5e-6);
        assert_abs_diff_eq!(c.sigma_12, 0.5, epsilon = 5e-6);
        let weak = classical_widths(&model(0.06)).unwrap();
        assert_eq!(weak.sigma_plus_c, c.sigma_plus_c);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(OscillatorModel::new(-0.1).is_err());
        assert!(OscillatorModel::with_units(1.0, 0.0, 1.0).is_err());
        assert!(OscillatorModel::with_units(1.0, 1.0, f64::NAN).is_err());
    }
}
