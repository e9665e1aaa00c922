//! Random impurity configurations from seeded Poisson-disk sampling; every
//! sample's ground state must stay above the certified bound.

use point_interactions::certificates::certificate_ch;
use point_interactions::geometry::poisson_disk_sample;
use point_interactions::spectral::{ground_state_auto, DEFAULT_TOL};
use point_interactions::{ManifoldModel, PhysicalConstants, Result};

fn main() -> Result<()> {
    let units = PhysicalConstants::NATURAL;
    let (d_min, mu, radius) = (1.0, 1.0, 4.0);
    for model in [ManifoldModel::Flat, ManifoldModel::Hyperbolic { kappa: 0.5 }] {
        let cert = certificate_ch(model.kappa(), d_min, mu, 2.0, 5.0, &units)?;
        println!("{} backend, E_gr > {:.6}", model.backend_name(), cert.energy_lower_bound);
        for seed in 0..5 {
            let config = poisson_disk_sample(&model, radius, d_min, seed, mu, units)?;
            let gs = ground_state_auto(&config, DEFAULT_TOL)?;
            println!(
                "  seed {seed}: N = {:>3}, d_min actual = {:.4}, E_gr = {:.8}",
                config.len(),
                config.min_pairwise_distance()?,
                gs.energy
            );
        }
    }
    Ok(())
}
