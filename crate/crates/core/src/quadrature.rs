//! Gauss-Legendre quadrature: fixed rules, composite rules and an adaptive
//! integrator built from 16-point panels.

use std::sync::OnceLock;

use crate::{Error, Result};

/// Points per panel for the composite and adaptive rules.
pub const PANEL_POINTS: usize = 16;
/// Default relative tolerance for adaptive integration.
pub const DEFAULT_REL_TOL: f64 = 1e-10;
const MAX_DEPTH: usize = 40;
const INITIAL_PANELS: usize = 4;

/// Nodes and weights of an `n`-point rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Roots of the Legendre polynomial by Newton iteration from the Chebyshev guess.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "rule needs at least one point");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            dp = if d != 0.0 { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Fixed-order estimate of `∫_a^b f`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F, a: f64, b: f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * f(mid + half * x))
            .sum::<f64>()
            * half
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

fn panel_rule() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(PANEL_POINTS))
}

/// Nodes and weights of `panels` equal 16-point panels covering `[a, b]`.
pub fn composite_rule(a: f64, b: f64, panels: usize) -> (Vec<f64>, Vec<f64>) {
    let rule = panel_rule();
    let h = (b - a) / panels as f64;
    let mut xs = Vec::with_capacity(panels * PANEL_POINTS);
    let mut ws = Vec::with_capacity(panels * PANEL_POINTS);
    for p in 0..panels {
        let lo = a + p as f64 * h;
        let mid = lo + 0.5 * h;
        for (x, w) in rule.nodes.iter().zip(&rule.weights) {
            xs.push(mid + 0.5 * h * x);
            ws.push(0.5 * h * w);
        }
    }
    (xs, ws)
}

fn panel<F: FnMut(f64) -> Result<f64>>(f: &mut F, a: f64, b: f64) -> Result<f64> {
    let rule = panel_rule();
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut acc = 0.0;
    for (x, w) in rule.nodes.iter().zip(&rule.weights) {
        acc += w * f(mid + half * x)?;
    }
    Ok(acc * half)
}

fn refine<F: FnMut(f64) -> Result<f64>>(
    f: &mut F,
    a: f64,
    b: f64,
    whole: f64,
    scale: f64,
    rel_tol: f64,
    depth: usize,
) -> Result<f64> {
    let mid = 0.5 * (a + b);
    let left = panel(f, a, mid)?;
    let right = panel(f, mid, b)?;
    let halves = left + right;
    let diff = (halves - whole).abs();
    if diff <= rel_tol * halves.abs().max(scale) || diff == 0.0 {
        return Ok(halves);
    }
    if depth >= MAX_DEPTH {
        return Err(Error::QuadratureNotConverged {
            detail: format!("adaptive bisection exceeded depth {MAX_DEPTH} on [{a}, {b}]"),
        });
    }
    Ok(refine(f, a, mid, left, scale, rel_tol, depth + 1)?
        + refine(f, mid, b, right, scale, rel_tol, depth + 1)?)
}

/// Adaptive `∫_a^b f` for a fallible integrand: panels are halved until the
/// two-half estimate agrees with the whole-panel estimate to `rel_tol`.
pub fn try_integrate<F: FnMut(f64) -> Result<f64>>(
    mut f: F,
    a: f64,
    b: f64,
    rel_tol: f64,
) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let h = (b - a) / INITIAL_PANELS as f64;
    let mut wholes = [0.0; INITIAL_PANELS];
    for (k, w) in wholes.iter_mut().enumerate() {
        *w = panel(&mut f, a + k as f64 * h, a + (k + 1) as f64 * h)?;
    }
    let scale = wholes.iter().sum::<f64>().abs() / INITIAL_PANELS as f64;
    let mut total = 0.0;
    for (k, w) in wholes.iter().enumerate() {
        let lo = a + k as f64 * h;
        total += refine(&mut f, lo, lo + h, *w, scale * 1e-3, rel_tol, 0)?;
    }
    Ok(total)
}

/// Adaptive `∫_a^b f`.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, rel_tol: f64) -> Result<f64> {
    try_integrate(|x| Ok(f(x)), a, b, rel_tol)
}

/// Adaptive iterated integral `∫_{x0}^{x1} ∫_{y0}^{y1} f(x, y) dy dx`.
pub fn integrate_2d<F: Fn(f64, f64) -> f64>(
    f: F,
    (x0, x1): (f64, f64),
    (y0, y1): (f64, f64),
    rel_tol: f64,
) -> Result<f64> {
    try_integrate(|x| integrate(|y| f(x, y), y0, y1, rel_tol), x0, x1, rel_tol)
}
