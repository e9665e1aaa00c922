use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::ManifoldModel;

/// Largest admissible squared radius for Poincare-disk points.
pub const DISK_LIMIT: f64 = 1.0 - 1e-12;

/// A point given by two coordinates.
///
/// Cartesian `(x, y)` on the flat backend; Poincare-disk coordinates with
/// `x^2 + y^2 < 1` on the hyperbolic backend.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.x * self.x + self.y * self.y
    }

    /// Point at geodesic distance `r` from the origin in direction `theta`.
    pub fn from_geodesic_polar(model: &ManifoldModel, r: f64, theta: f64) -> Result<Self> {
        let radial = match model {
            ManifoldModel::Flat => r,
            ManifoldModel::Hyperbolic { kappa } => (0.5 * kappa.sqrt() * r).tanh(),
            ManifoldModel::GenericBounds(_) => return Err(model.unsupported("from_geodesic_polar")),
        };
        let p = Point::new(radial * theta.cos(), radial * theta.sin());
        p.validate_for(model)?;
        Ok(p)
    }

    pub fn validate_for(&self, model: &ManifoldModel) -> Result<()> {
        if !(self.x.is_finite() && self.y.is_finite()) {
            return Err(Error::domain(format!("non-finite point ({}, {})", self.x, self.y)));
        }
        match model {
            ManifoldModel::Hyperbolic { .. } if self.norm_sqr() >= DISK_LIMIT => {
                Err(Error::domain(format!("point ({}, {}) lies outside the Poincare disk", self.x, self.y)))
            }
            ManifoldModel::GenericBounds(_) => Err(model.unsupported("point")),
            _ => Ok(()),
        }
    }

    /// Disk isometry sending the origin to `self`: `z -> (z + p) / (1 + conj(p) z)`.
    pub(crate) fn mobius_translate(&self, z: Point) -> Point {
        let (px, py) = (self.x, self.y);
        let num = (z.x + px, z.y + py);
        // 1 + conj(p) z
        let den = (1.0 + px * z.x + py * z.y, px * z.y - py * z.x);
        let d2 = den.0 * den.0 + den.1 * den.1;
        Point::new((num.0 * den.0 + num.1 * den.1) / d2, (num.1 * den.0 - num.0 * den.1) / d2)
    }
}

/// Geodesic distance between two points of a flat or hyperbolic backend.
///
/// The hyperbolic branch evaluates
/// `(1/sqrt(kappa)) arccosh(1 + 2|p-q|^2 / ((1-|p|^2)(1-|q|^2)))` in the
/// equivalent form `(2/sqrt(kappa)) asinh(sqrt(...))`, which keeps precision
/// for nearby points.
pub fn distance(model: &ManifoldModel, p: &Point, q: &Point) -> Result<f64> {
    match model {
        ManifoldModel::Flat => {
            p.validate_for(model)?;
            q.validate_for(model)?;
            Ok((p.x - q.x).hypot(p.y - q.y))
        }
        ManifoldModel::Hyperbolic { kappa } => {
            model.validate()?;
            p.validate_for(model)?;
            q.validate_for(model)?;
            let dx = p.x - q.x;
            let dy = p.y - q.y;
            let chord2 = dx * dx + dy * dy;
            let s = chord2 / ((1.0 - p.norm_sqr()) * (1.0 - q.norm_sqr()));
            Ok(2.0 * s.sqrt().asinh() / kappa.sqrt())
        }
        ManifoldModel::GenericBounds(_) => Err(model.unsupported("distance")),
    }
}

/// Exact minimum over all pairs of `points`.
pub fn min_pairwise_distance_of(model: &ManifoldModel, points: &[Point]) -> Result<f64> {
    if points.len() < 2 {
        return Err(Error::NoPairs);
    }
    let mut best = f64::INFINITY;
    for (i, p) in points.iter().enumerate() {
        for q in &points[i + 1..] {
            best = best.min(distance(model, p, q)?);
        }
    }
    Ok(best)
}
