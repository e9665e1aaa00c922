//! Deterministic minimum-distance configurations.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::units::PhysicalConstants;

use super::{comparison_angle, Center, Configuration, ManifoldModel, Point};

// Axial directions of the triangular lattice, counter-clockwise.
const HEX_DIRECTIONS: [(i64, i64); 6] = [(1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1)];

/// Axial coordinates of ring `l` (hex distance exactly `l`), `6l` entries.
pub fn hex_ring(l: u32) -> Vec<(i64, i64)> {
    if l == 0 {
        return vec![(0, 0)];
    }
    let l = l as i64;
    let mut ring = Vec::with_capacity(6 * l as usize);
    // start at l * direction[4], walk l steps along each direction
    let (mut q, mut r) = (HEX_DIRECTIONS[4].0 * l, HEX_DIRECTIONS[4].1 * l);
    for &(dq, dr) in &HEX_DIRECTIONS {
        for _ in 0..l {
            ring.push((q, r));
            q += dq;
            r += dr;
        }
    }
    ring
}

/// Triangular (hexagonal-packing) lattice with spacing `d_min`, all points
/// within `levels` rings of the origin, ordered ring by ring.
///
/// Ring `l` holds `6l` points, the whole lattice `1 + 3 levels (levels + 1)`;
/// configurations for increasing `levels` are nested.
pub fn hex_lattice(d_min: f64, levels: u32, mu: f64, constants: PhysicalConstants) -> Result<Configuration> {
    if !(d_min > 0.0 && d_min.is_finite()) {
        return Err(Error::domain(format!("d_min must be positive, got {d_min}")));
    }
    let h = 0.5 * 3f64.sqrt();
    let centers = (0..=levels)
        .flat_map(hex_ring)
        .map(|(q, r)| {
            let (q, r) = (q as f64, r as f64);
            Center::new(Point::new(d_min * (q + 0.5 * r), d_min * h * r), mu)
        })
        .collect();
    Configuration::new(ManifoldModel::Flat, constants, d_min, centers)
}

/// Number of equally spaced points that fit on the geodesic circle of
/// radius `l d_min` with neighbours at least `d_min` apart.
pub fn level_capacity(kappa: f64, d_min: f64, l: u32) -> Result<usize> {
    if l == 0 {
        return Ok(1);
    }
    let radius = l as f64 * d_min;
    let alpha = comparison_angle(kappa, radius, radius, d_min)?;
    let count = ((2.0 * PI / alpha) * (1.0 + 1e-12)).floor();
    if !(count <= 9.007_199_254_740_992e15) {
        return Err(Error::domain(format!("level {l} holds more than 2^53 points")));
    }
    Ok(count as usize)
}

/// Level construction on the hyperbolic plane: a center at the origin and,
/// on each geodesic circle of radius `l d_min` (`l = 1..=levels`), the
/// largest equally spaced set with chordal separation `>= d_min`.
///
/// Circles are `d_min` apart radially, so points on different levels are
/// automatically separated by at least `d_min`.
pub fn hyperbolic_level_packing(
    kappa: f64,
    d_min: f64,
    levels: u32,
    mu: f64,
    constants: PhysicalConstants,
) -> Result<Configuration> {
    let model = ManifoldModel::hyperbolic(kappa)?;
    if !(d_min > 0.0 && d_min.is_finite()) {
        return Err(Error::domain(format!("d_min must be positive, got {d_min}")));
    }
    let mut centers = vec![Center::new(Point::ORIGIN, mu)];
    for l in 1..=levels {
        let count = level_capacity(kappa, d_min, l)?;
        let radius = l as f64 * d_min;
        for k in 0..count {
            let theta = 2.0 * PI * k as f64 / count as f64;
            centers.push(Center::new(Point::from_geodesic_polar(&model, radius, theta)?, mu));
        }
    }
    Configuration::new(model, constants, d_min, centers)
}
