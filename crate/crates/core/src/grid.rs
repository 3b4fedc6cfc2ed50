//! Cell-centred grids on `(0, inf)` and piecewise-constant functions on them.

use crate::error::{Error, Result};
use crate::quad::GaussRule;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    LogUniform,
    Uniform,
}

impl std::str::FromStr for Spacing {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "log" | "log-uniform" => Ok(Self::LogUniform),
            "uniform" | "linear" => Ok(Self::Uniform),
            other => Err(Error::InvalidParam(format!("unknown spacing '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RadialGrid {
    edges: Vec<f64>,
    centers: Vec<f64>,
    spacing: Spacing,
}

impl RadialGrid {
    pub fn new(x_min: f64, x_max: f64, cells: usize, spacing: Spacing) -> Result<Self> {
        if cells == 0 {
            return Err(Error::InvalidParam("grid needs at least one cell".into()));
        }
        let lower_ok = match spacing {
            Spacing::LogUniform => x_min > 0.0,
            Spacing::Uniform => x_min >= 0.0,
        };
        if !(lower_ok && x_max > x_min && x_max.is_finite()) {
            return Err(Error::InvalidParam(format!(
                "bad grid bounds ({x_min}, {x_max}) for {spacing:?} spacing"
            )));
        }
        let n = cells as f64;
        let edges: Vec<f64> = match spacing {
            Spacing::LogUniform => {
                let ratio = (x_max / x_min).ln();
                (0..=cells).map(|i| x_min * (ratio * i as f64 / n).exp()).collect()
            }
            Spacing::Uniform => (0..=cells).map(|i| x_min + (x_max - x_min) * i as f64 / n).collect(),
        };
        let centers = edges
            .windows(2)
            .map(|e| match spacing {
                Spacing::LogUniform => (e[0] * e[1]).sqrt(),
                Spacing::Uniform => 0.5 * (e[0] + e[1]),
            })
            .collect();
        Ok(Self { edges, centers, spacing })
    }

    pub fn edges(&self) -> &[f64] {
        &self.edges
    }

    pub fn centers(&self) -> &[f64] {
        &self.centers
    }

    pub fn spacing(&self) -> Spacing {
        self.spacing
    }

    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    pub fn x_min(&self) -> f64 {
        self.edges[0]
    }

    pub fn x_max(&self) -> f64 {
        self.edges[self.edges.len() - 1]
    }

    pub fn width(&self, i: usize) -> f64 {
        self.edges[i + 1] - self.edges[i]
    }

    /// Index of the cell containing `x`, if any.
    pub fn locate(&self, x: f64) -> Option<usize> {
        if x < self.x_min() || x > self.x_max() {
            return None;
        }
        let i = self.edges.partition_point(|&e| e <= x);
        Some(i.saturating_sub(1).min(self.len() - 1))
    }
}

/// Cell values on a [`RadialGrid`] (density units: number per unit size).
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    pub grid: RadialGrid,
    pub values: Vec<f64>,
}

impl GridFunction {
    pub fn new(grid: RadialGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidParam(format!(
                "{} values for {} cells",
                values.len(),
                grid.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParam("grid function values must be finite".into()));
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: RadialGrid) -> Self {
        let n = grid.len();
        Self { grid, values: vec![0.0; n] }
    }

    /// Point samples at the cell centres.
    pub fn sample<F: FnMut(f64) -> Result<f64>>(grid: RadialGrid, mut f: F) -> Result<Self> {
        let values = grid.centers().iter().map(|&x| f(x)).collect::<Result<Vec<_>>>()?;
        Self::new(grid, values)
    }

    /// Cell averages by Gauss-Legendre quadrature; `breaks` are points where `f`
    /// may jump and are used to split the cells containing them.
    pub fn cell_averages<F: FnMut(f64) -> Result<f64>>(
        grid: RadialGrid,
        breaks: &[f64],
        mut f: F,
    ) -> Result<Self> {
        let rule = GaussRule::new(8);
        let mut values = Vec::with_capacity(grid.len());
        for i in 0..grid.len() {
            let (a, b) = (grid.edges()[i], grid.edges()[i + 1]);
            let mut cuts = vec![a];
            cuts.extend(breaks.iter().copied().filter(|&x| x > a && x < b));
            cuts.push(b);
            let mut acc = 0.0;
            for w in cuts.windows(2) {
                for (x, wt) in rule.mapped(w[0], w[1]) {
                    acc += wt * f(x)?;
                }
            }
            values.push(acc / (b - a));
        }
        Self::new(grid, values)
    }

    /// `int x^p f(x) dx` treating `f` as piecewise constant.
    pub fn power_moment(&self, p: f64) -> f64 {
        let e = self.grid.edges();
        self.values
            .iter()
            .enumerate()
            .map(|(i, &v)| v * power_integral(e[i], e[i + 1], p))
            .sum()
    }

    /// Weighted L1 norm `sum |f_i| dx_i`.
    pub fn l1_norm(&self) -> f64 {
        self.values
            .iter()
            .enumerate()
            .map(|(i, v)| v.abs() * self.grid.width(i))
            .sum()
    }

    /// L1 distance to another function on the same grid.
    pub fn l1_distance(&self, other: &GridFunction) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .enumerate()
            .map(|(i, (a, b))| (a - b).abs() * self.grid.width(i))
            .sum()
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// `int_a^b x^p dx`.
pub fn power_integral(a: f64, b: f64, p: f64) -> f64 {
    if (p + 1.0).abs() < 1e-14 {
        (b / a).ln()
    } else {
        (b.powf(p + 1.0) - a.powf(p + 1.0)) / (p + 1.0)
    }
}
