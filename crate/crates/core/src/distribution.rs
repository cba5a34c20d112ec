//! Tabulated surfaces over two scan axes.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// What a surface's values measure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DistributionKind {
    Entanglement,
    Negativity,
    JointProbability,
    ConditionalProbability,
    /// Restricted minus unrestricted entanglement.
    Difference,
}

/// Per-cell status.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CellFlag {
    Ok,
    /// No value could be computed (singular projection, null conditioning event).
    Masked,
    /// The region carried too little probability; the value is reported as 0.
    EmptyMass,
}

impl CellFlag {
    pub fn as_str(self) -> &'static str {
        match self {
            CellFlag::Ok => "ok",
            CellFlag::Masked => "masked",
            CellFlag::EmptyMass => "empty_mass",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "ok" => Some(CellFlag::Ok),
            "masked" => Some(CellFlag::Masked),
            "empty_mass" => Some(CellFlag::EmptyMass),
            _ => None,
        }
    }
}

/// Inclusive, evenly spaced scan axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisSpec {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl AxisSpec {
    pub fn new(min: f64, max: f64, steps: usize) -> Result<Self> {
        if steps == 0 || !(min.is_finite() && max.is_finite()) || (steps > 1 && max < min) {
            return Err(Error::InvalidParameter(format!(
                "axis [{min}, {max}] with {steps} steps"
            )));
        }
        Ok(Self { min, max, steps })
    }

    pub fn points(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.min];
        }
        let h = (self.max - self.min) / (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| {
                if i + 1 == self.steps {
                    self.max
                } else {
                    self.min + i as f64 * h
                }
            })
            .collect()
    }
}

/// Values over the product of two axes, row-major with `axis_a` as the slow index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Distribution2D {
    pub axis_names: [String; 2],
    pub axis_a: Vec<f64>,
    pub axis_b: Vec<f64>,
    pub values: Vec<f64>,
    /// Auxiliary probability column (survival or joint probability); NaN if unused.
    pub prob: Vec<f64>,
    pub flags: Vec<CellFlag>,
    pub kind: DistributionKind,
}

impl Distribution2D {
    /// Fills a surface cell by cell; `cell` returns `(value, prob, flag)`.
    pub fn tabulate<F>(
        names: [&str; 2],
        axis_a: Vec<f64>,
        axis_b: Vec<f64>,
        kind: DistributionKind,
        cell: F,
    ) -> Self
    where
        F: Fn(f64, f64) -> (f64, f64, CellFlag) + Sync,
    {
        use rayon::prelude::*;
        let nb = axis_b.len();
        let cells: Vec<(f64, f64, CellFlag)> = (0..axis_a.len() * nb)
            .into_par_iter()
            .map(|k| cell(axis_a[k / nb], axis_b[k % nb]))
            .collect();
        let mut values = Vec::with_capacity(cells.len());
        let mut prob = Vec::with_capacity(cells.len());
        let mut flags = Vec::with_capacity(cells.len());
        for (v, p, f) in cells {
            values.push(v);
            prob.push(p);
            flags.push(f);
        }
        Self {
            axis_names: [names[0].to_string(), names[1].to_string()],
            axis_a,
            axis_b,
            values,
            prob,
            flags,
            kind,
        }
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.axis_a.len(), self.axis_b.len())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn index(&self, ia: usize, ib: usize) -> usize {
        ia * self.axis_b.len() + ib
    }

    pub fn value(&self, ia: usize, ib: usize) -> f64 {
        self.values[self.index(ia, ib)]
    }

    pub fn flag(&self, ia: usize, ib: usize) -> CellFlag {
        self.flags[self.index(ia, ib)]
    }

    /// Iterates `(a, b, value, flag)` in row-major order.
    pub fn cells(&self) -> impl Iterator<Item = (f64, f64, f64, CellFlag)> + '_ {
        let nb = self.axis_b.len();
        self.values
            .iter()
            .zip(&self.flags)
            .enumerate()
            .map(move |(k, (&v, &f))| (self.axis_a[k / nb], self.axis_b[k % nb], v, f))
    }

    /// Largest finite value among unflagged cells.
    pub fn max_value(&self) -> Option<f64> {
        self.cells()
            .filter(|c| c.3 == CellFlag::Ok && c.2.is_finite())
            .map(|c| c.2)
            .reduce(f64::max)
    }

    /// Cellwise `self - other` on identical axes; flags combine to the worse of the two.
    pub fn difference(&self, other: &Self) -> Result<Self> {
        if self.axis_a != other.axis_a || self.axis_b != other.axis_b {
            return Err(Error::InvalidParameter(
                "difference of surfaces on different axes".into(),
            ));
        }
        let flags: Vec<CellFlag> = self
            .flags
            .iter()
            .zip(&other.flags)
            .map(|(a, b)| match (a, b) {
                (CellFlag::Ok, CellFlag::Ok) => CellFlag::Ok,
                (CellFlag::Masked, _) | (_, CellFlag::Masked) => CellFlag::Masked,
                _ => CellFlag::EmptyMass,
            })
            .collect();
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .zip(&flags)
            .map(|((a, b), f)| {
                if *f == CellFlag::Masked {
                    f64::NAN
                } else {
                    a - b
                }
            })
            .collect();
        Ok(Self {
            axis_names: self.axis_names.clone(),
            axis_a: self.axis_a.clone(),
            axis_b: self.axis_b.clone(),
            values,
            prob: vec![f64::NAN; self.len()],
            flags,
            kind: DistributionKind::Difference,
        })
    }
}
