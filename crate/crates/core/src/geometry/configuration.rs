use std::sync::OnceLock;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::units::PhysicalConstants;

use super::{distance, ManifoldModel, Point};

/// Relative slack allowed when checking the minimum-distance constraint.
pub const SEPARATION_SLACK: f64 = 1e-9;

/// One interaction center: location and the bound-state scale `mu` of the
/// isolated center (its bound state sits at `E = -mu^2`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Center {
    pub point: Point,
    pub mu: f64,
}

impl Center {
    pub fn new(point: Point, mu: f64) -> Self {
        Self { point, mu }
    }
}

/// Interaction centers with a verified minimum separation.
#[derive(Debug, Clone)]
pub struct Configuration {
    model: ManifoldModel,
    constants: PhysicalConstants,
    d_min: f64,
    centers: Vec<Center>,
    distances: OnceLock<DMatrix<f64>>,
}

impl PartialEq for Configuration {
    fn eq(&self, other: &Self) -> bool {
        self.model == other.model
            && self.constants == other.constants
            && self.d_min == other.d_min
            && self.centers == other.centers
    }
}

impl Configuration {
    /// Builds a configuration, checking every invariant: at least one
    /// center, positive `mu`, admissible points, and all pairwise distances
    /// at least `d_min` (up to a relative `1e-9`).
    pub fn new(model: ManifoldModel, constants: PhysicalConstants, d_min: f64, centers: Vec<Center>) -> Result<Self> {
        model.validate()?;
        if let ManifoldModel::GenericBounds(_) = model {
            return Err(model.unsupported("configuration"));
        }
        PhysicalConstants::new(constants.hbar, constants.mass)?;
        if !(d_min > 0.0 && d_min.is_finite()) {
            return Err(Error::InvalidConfiguration(format!("d_min must be positive, got {d_min}")));
        }
        if centers.is_empty() {
            return Err(Error::InvalidConfiguration("at least one center is required".into()));
        }
        for (i, c) in centers.iter().enumerate() {
            if !(c.mu > 0.0 && c.mu.is_finite()) {
                return Err(Error::InvalidConfiguration(format!("center {i}: mu must be positive, got {}", c.mu)));
            }
            c.point.validate_for(&model).map_err(|e| match e {
                Error::Domain(msg) => Error::Domain(format!("center {i}: {msg}")),
                other => other,
            })?;
        }
        let config = Self { model, constants, d_min, centers, distances: OnceLock::new() };
        let dist = config.distance_matrix();
        let n = config.len();
        for i in 0..n {
            for j in i + 1..n {
                if dist[(i, j)] < d_min * (1.0 - SEPARATION_SLACK) {
                    return Err(Error::InvalidConfiguration(format!(
                        "centers {i} and {j} are {} apart, below d_min = {d_min}",
                        dist[(i, j)]
                    )));
                }
            }
        }
        Ok(config)
    }

    /// Same centers with a uniform `mu`.
    pub fn uniform(
        model: ManifoldModel,
        constants: PhysicalConstants,
        d_min: f64,
        points: &[Point],
        mu: f64,
    ) -> Result<Self> {
        Self::new(model, constants, d_min, points.iter().map(|&p| Center::new(p, mu)).collect())
    }

    pub fn model(&self) -> &ManifoldModel {
        &self.model
    }

    pub fn constants(&self) -> &PhysicalConstants {
        &self.constants
    }

    pub fn d_min(&self) -> f64 {
        self.d_min
    }

    pub fn centers(&self) -> &[Center] {
        &self.centers
    }

    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    /// `sup_i mu_i`.
    pub fn mu_star(&self) -> f64 {
        self.centers.iter().map(|c| c.mu).fold(0.0, f64::max)
    }

    /// Pairwise geodesic distances, computed once and cached.
    pub fn distance_matrix(&self) -> &DMatrix<f64> {
        self.distances.get_or_init(|| {
            let n = self.centers.len();
            let mut m = DMatrix::zeros(n, n);
            for i in 0..n {
                for j in i + 1..n {
                    let d = distance(&self.model, &self.centers[i].point, &self.centers[j].point)
                        .expect("points validated at construction");
                    m[(i, j)] = d;
                    m[(j, i)] = d;
                }
            }
            m
        })
    }

    /// Exact minimum pairwise distance; needs at least two centers.
    pub fn min_pairwise_distance(&self) -> Result<f64> {
        if self.len() < 2 {
            return Err(Error::NoPairs);
        }
        let d = self.distance_matrix();
        let n = self.len();
        let mut best = f64::INFINITY;
        for i in 0..n {
            for j in i + 1..n {
                best = best.min(d[(i, j)]);
            }
        }
        Ok(best)
    }

    /// Configuration restricted to the given center indices, in that order.
    pub fn select(&self, indices: &[usize]) -> Result<Self> {
        let centers = indices
            .iter()
            .map(|&i| {
                self.centers
                    .get(i)
                    .copied()
                    .ok_or_else(|| Error::InvalidConfiguration(format!("index {i} out of range")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(self.model, self.constants, self.d_min, centers)
    }

    /// Copy with every `mu` replaced.
    pub fn with_uniform_mu(&self, mu: f64) -> Result<Self> {
        let centers = self.centers.iter().map(|c| Center::new(c.point, mu)).collect();
        Self::new(self.model, self.constants, self.d_min, centers)
    }
}
