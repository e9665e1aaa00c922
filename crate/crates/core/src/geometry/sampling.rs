//! Seeded Poisson-disk sampling inside a geodesic ball.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::units::PhysicalConstants;

use super::{distance, Center, Configuration, ManifoldModel, Point};

/// Candidates tried around each active point before it is retired.
const ATTEMPTS: usize = 30;

/// Bridson-style dart throwing in the geodesic ball of radius
/// `region_radius` around the origin.
///
/// The origin is always placed first. Candidates are drawn at geodesic
/// distance in `[d_min, 2 d_min)` from an active point (through a disk
/// isometry on the hyperbolic backend) and kept when they are inside the
/// ball and at least `d_min` from every accepted point. The stream comes
/// from ChaCha8 keyed by `seed`, so equal seeds give identical output.
pub fn poisson_disk_sample(
    model: &ManifoldModel,
    region_radius: f64,
    d_min: f64,
    seed: u64,
    mu: f64,
    constants: PhysicalConstants,
) -> Result<Configuration> {
    model.validate()?;
    if let ManifoldModel::GenericBounds(_) = model {
        return Err(model.unsupported("poisson_disk_sample"));
    }
    if !(d_min > 0.0 && d_min.is_finite()) {
        return Err(Error::domain(format!("d_min must be positive, got {d_min}")));
    }
    if !(region_radius >= d_min && region_radius.is_finite()) {
        return Err(Error::domain(format!("region radius {region_radius} must be at least d_min = {d_min}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut accepted = vec![Point::ORIGIN];
    let mut active = vec![0usize];

    while !active.is_empty() {
        let slot = rng.gen_range(0..active.len());
        let base = accepted[active[slot]];
        let mut placed = false;
        for _ in 0..ATTEMPTS {
            let r = d_min * (1.0 + rng.gen::<f64>());
            let theta = 2.0 * PI * rng.gen::<f64>();
            let candidate = match model {
                ManifoldModel::Flat => Point::new(base.x + r * theta.cos(), base.y + r * theta.sin()),
                _ => {
                    let local = Point::from_geodesic_polar(model, r, theta)?;
                    base.mobius_translate(local)
                }
            };
            if candidate.validate_for(model).is_err() {
                continue;
            }
            if distance(model, &Point::ORIGIN, &candidate)? > region_radius {
                continue;
            }
            let mut clear = true;
            for q in &accepted {
                if distance(model, q, &candidate)? < d_min {
                    clear = false;
                    break;
                }
            }
            if clear {
                accepted.push(candidate);
                active.push(accepted.len() - 1);
                placed = true;
                break;
            }
        }
        if !placed {
            active.swap_remove(slot);
        }
    }
    let centers = accepted.into_iter().map(|p| Center::new(p, mu)).collect();
    Configuration::new(*model, constants, d_min, centers)
}
