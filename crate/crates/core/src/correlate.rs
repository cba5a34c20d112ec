//! Classical position correlations of the two oscillators and Gaussian-surface
//! fits of sampled distributions.

use serde::{Deserialize, Serialize};

use crate::distribution::{AxisSpec, CellFlag, Distribution2D, DistributionKind};
use crate::oscillator::{self, OscillatorModel};
use crate::quadrature::{self, DEFAULT_REL_TOL};
use crate::restrict::{self, DiscretizationSpec, Region};
use crate::{Error, Result};

/// Conditioning events below this probability are refused.
pub const NULL_EVENT: f64 = 1e-14;
pub const MIN_FIT_SAMPLES: usize = 12;
pub const DEFAULT_FIT_THRESHOLD: f64 = 1e-3;

/// `P(qA in A and qB in B)`.
pub fn joint_probability(
    model: &OscillatorModel,
    region_a: Region,
    region_b: Region,
) -> Result<f64> {
    let k = oscillator::ground_state_constants(model);
    let norm = oscillator::joint_density_norm(model);
    let v = quadrature::integrate_2d(
        |x, y| (2.0 * oscillator::log_wavefunction(&k.l, x, y)).exp(),
        (region_a.lo(), region_a.hi()),
        (region_b.lo(), region_b.hi()),
        DEFAULT_REL_TOL,
    )?;
    Ok((norm * v).clamp(0.0, 1.0))
}

/// `P(q in region)` for either particle.
pub fn marginal_probability(model: &OscillatorModel, region: Region) -> Result<f64> {
    let k = oscillator::ground_state_constants(model);
    let v = quadrature::integrate(
        |q| oscillator::reduced_density_with(&k, q, q),
        region.lo(),
        region.hi(),
        DEFAULT_REL_TOL,
    )?;
    Ok(v.clamp(0.0, 1.0))
}

/// `P(qB in B | qA in A)`.
pub fn conditional_probability(
    model: &OscillatorModel,
    region_b: Region,
    region_a: Region,
) -> Result<f64> {
    let pa = marginal_probability(model, region_a)?;
    if pa < NULL_EVENT {
        return Err(Error::ConditioningOnNullEvent { probability: pa });
    }
    Ok((joint_probability(model, region_a, region_b)? / pa).clamp(0.0, 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProbabilityKind {
    Joint,
    /// Bob's region conditioned on Alice's.
    Conditional,
}

/// Joint or conditional probabilities over region centres; null conditioning
/// events are masked.
pub fn probability_map(
    model: &OscillatorModel,
    centers_a: AxisSpec,
    centers_b: AxisSpec,
    half_width_a: f64,
    half_width_b: f64,
    kind: ProbabilityKind,
) -> Result<Distribution2D> {
    Region::new(0.0, half_width_a)?;
    Region::new(0.0, half_width_b)?;
    let dkind = match kind {
        ProbabilityKind::Joint => DistributionKind::JointProbability,
        ProbabilityKind::Conditional => DistributionKind::ConditionalProbability,
    };
    Ok(Distribution2D::tabulate(
        ["q_bar_A", "q_bar_B"],
        centers_a.points(),
        centers_b.points(),
        dkind,
        |ca, cb| {
            let ra = Region {
                center: ca,
                half_width: half_width_a,
            };
            let rb = Region {
                center: cb,
                half_width: half_width_b,
            };
            let joint = joint_probability(model, ra, rb);
            let value = match kind {
                ProbabilityKind::Joint => joint.clone(),
                ProbabilityKind::Conditional => conditional_probability(model, rb, ra),
            };
            match (value, joint) {
                (Ok(v), Ok(j)) => (v, j, CellFlag::Ok),
                (_, j) => (f64::NAN, j.unwrap_or(f64::NAN), CellFlag::Masked),
            }
        },
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FitForm {
    /// `exp(-(x+y)^2 / 2 s+^2 - (x-y)^2 / 2 s-^2)`.
    SymmetricPm,
    /// `exp(-x^2 / 2 s1^2 + x y / 2 s12^2 - y^2 / 2 s2^2)`.
    Conditional,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "form")]
pub enum FitWidths {
    SymmetricPm {
        sigma_plus: f64,
        sigma_minus: f64,
    },
    Conditional {
        sigma_1: f64,
        sigma_2: f64,
        sigma_12: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitParams {
    pub amplitude: f64,
    pub widths: FitWidths,
    /// Root-mean-square log-space residual over the fitted samples.
    pub residual: f64,
    pub samples: usize,
}

impl FitParams {
    pub fn form(&self) -> FitForm {
        match self.widths {
            FitWidths::SymmetricPm { .. } => FitForm::SymmetricPm,
            FitWidths::Conditional { .. } => FitForm::Conditional,
        }
    }

    /// The fitted surface at `(x, y)`.
    pub fn evaluate(&self, x: f64, y: f64) -> f64 {
        let e = match self.widths {
            FitWidths::SymmetricPm {
                sigma_plus,
                sigma_minus,
            } => {
                -(x + y).powi(2) / (2.0 * sigma_plus * sigma_plus)
                    - (x - y).powi(2) / (2.0 * sigma_minus * sigma_minus)
            }
            FitWidths::Conditional {
                sigma_1,
                sigma_2,
                sigma_12,
            } => {
                -x * x / (2.0 * sigma_1 * sigma_1) + x * y / (2.0 * sigma_12 * sigma_12)
                    - y * y / (2.0 * sigma_2 * sigma_2)
            }
        };
        self.amplitude * e.exp()
    }
}

fn features(form: FitForm, x: f64, y: f64) -> Vec<f64> {
    match form {
        FitForm::SymmetricPm => vec![1.0, -(x + y).powi(2), -(x - y).powi(2)],
        FitForm::Conditional => vec![1.0, -x * x, x * y, -y * y],
    }
}

/// Solves the small dense system `a x = b` by Gaussian elimination with
/// partial pivoting.
fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Result<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap_or(col);
        if a[piv][col].abs() < 1e-300 {
            return Err(Error::InvalidParameter(
                "fit design matrix is singular".into(),
            ));
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    Ok(x)
}

fn width_from_curvature(name: &'static str, c: f64) -> Result<f64> {
    if !(c > 0.0) || !c.is_finite() {
        return Err(Error::NonPositiveCurvature { name, value: c });
    }
    Ok((2.0 * c).powf(-0.5))
}

/// Weighted log-space least squares of a Gaussian surface. Only unflagged
/// samples with value at least `threshold` times the maximum enter, each
/// weighted by its value relative to the maximum.
pub fn fit_surface(dist: &Distribution2D, form: FitForm, threshold: f64) -> Result<FitParams> {
    let max = dist.max_value().unwrap_or(0.0);
    let samples: Vec<(f64, f64, f64)> = dist
        .cells()
        .filter(|c| c.3 == CellFlag::Ok && c.2.is_finite() && c.2 > 0.0 && c.2 >= threshold * max)
        .map(|c| (c.0, c.1, c.2))
        .collect();
    if samples.len() < MIN_FIT_SAMPLES || max <= 0.0 {
        return Err(Error::InsufficientSupport {
            required: MIN_FIT_SAMPLES,
            found: samples.len(),
        });
    }
    let p = features(form, 0.0, 0.0).len();
    let mut ata = vec![vec![0.0; p]; p];
    let mut atb = vec![0.0; p];
    for &(x, y, v) in &samples {
        let f = features(form, x, y);
        let w = v / max;
        let t = v.ln();
        for i in 0..p {
            atb[i] += w * f[i] * t;
            for j in 0..p {
                ata[i][j] += w * f[i] * f[j];
            }
        }
    }
    let c = solve(ata, atb)?;
    let residual = (samples
        .iter()
        .map(|&(x, y, v)| {
            let f = features(form, x, y);
            let model: f64 = f.iter().zip(&c).map(|(a, b)| a * b).sum();
            (v.ln() - model).powi(2)
        })
        .sum::<f64>()
        / samples.len() as f64)
        .sqrt();
    let widths = match form {
        FitForm::SymmetricPm => FitWidths::SymmetricPm {
            sigma_plus: width_from_curvature("c_plus", c[1])?,
            sigma_minus: width_from_curvature("c_minus", c[2])?,
        },
        FitForm::Conditional => FitWidths::Conditional {
            sigma_1: width_from_curvature("c_1", c[1])?,
            sigma_12: width_from_curvature("c_12", c[2])?,
            sigma_2: width_from_curvature("c_2", c[3])?,
        },
    };
    Ok(FitParams {
        amplitude: c[0].exp(),
        widths,
        residual,
        samples: samples.len(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WidthSource {
    /// Fits of the both-restricted entanglement map.
    Quantum,
    /// Fits of the joint and conditional probability maps.
    Classical,
    /// Closed-form small-region widths.
    SmallAAnalytic,
}

/// One row of a width-versus-coupling scan; widths not produced by the chosen
/// source are `None`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SigmaRow {
    pub alpha: f64,
    pub sigma_plus: Option<f64>,
    pub sigma_minus: Option<f64>,
    pub sigma_1: Option<f64>,
    pub sigma_2: Option<f64>,
    pub sigma_12: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SigmaScanSettings {
    /// Region width `2a` (both parties).
    pub width: f64,
    /// Centres scanned on each axis.
    pub window: AxisSpec,
    pub spec: DiscretizationSpec,
    pub threshold: f64,
}

pub fn sigma_vs_alpha_scan(
    alphas: &[f64],
    source: WidthSource,
    settings: SigmaScanSettings,
) -> Result<Vec<SigmaRow>> {
    alphas
        .iter()
        .map(|&alpha| {
            if !(alpha > 0.0) {
                return Err(Error::DomainError {
                    what: "alpha",
                    value: alpha,
                    domain: "(0, inf)",
                });
            }
            let model = OscillatorModel::new(alpha)?;
            let half = 0.5 * settings.width;
            let mut row = SigmaRow {
                alpha,
                sigma_plus: None,
                sigma_minus: None,
                sigma_1: None,
                sigma_2: None,
                sigma_12: None,
            };
            let set_pm = |row: &mut SigmaRow, f: FitParams| {
                if let FitWidths::SymmetricPm {
                    sigma_plus,
                    sigma_minus,
                } = f.widths
                {
                    row.sigma_plus = Some(sigma_plus);
                    row.sigma_minus = Some(sigma_minus);
                }
            };
            match source {
                WidthSource::Quantum => {
                    let map = restrict::both_restricted_map(
                        &model,
                        settings.window,
                        settings.window,
                        half,
                        half,
                        settings.spec,
                    )?;
                    set_pm(
                        &mut row,
                        fit_surface(&map, FitForm::SymmetricPm, settings.threshold)?,
                    );
                }
                WidthSource::Classical => {
                    let joint = probability_map(
                        &model,
                        settings.window,
                        settings.window,
                        half,
                        half,
                        ProbabilityKind::Joint,
                    )?;
                    set_pm(
                        &mut row,
                        fit_surface(&joint, FitForm::SymmetricPm, settings.threshold)?,
                    );
                    let cond = probability_map(
                        &model,
                        settings.window,
                        settings.window,
                        half,
                        half,
                        ProbabilityKind::Conditional,
                    )?;
                    if let FitWidths::Conditional {
                        sigma_1,
                        sigma_2,
                        sigma_12,
                    } = fit_surface(&cond, FitForm::Conditional, settings.threshold)?.widths
                    {
                        row.sigma_1 = Some(sigma_1);
                        row.sigma_2 = Some(sigma_2);
                        row.sigma_12 = Some(sigma_12);
                    }
                }
                WidthSource::SmallAAnalytic => {
                    let w = oscillator::classical_widths(&model)?;
                    row.sigma_plus = Some(w.sigma_plus_c);
                    row.sigma_minus = Some(w.sigma_minus_c);
                    row.sigma_1 = Some(w.sigma_1);
                    row.sigma_2 = Some(w.sigma_2);
                    row.sigma_12 = Some(w.sigma_12);
                }
            }
            Ok(row)
        })
        .collect()
}
