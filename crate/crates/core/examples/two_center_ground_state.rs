//! Ground state of two identical centers on the flat plane as their
//! separation varies, with the eigenvalue flow of Phi(nu) at d = 1.

use point_interactions::spectral::{count_bound_states_below, eigenflow, ground_state_auto, DEFAULT_TOL};
use point_interactions::{Configuration, ManifoldModel, PhysicalConstants, Point, Result};

fn pair(d: f64) -> Result<Configuration> {
    let points = [Point::new(0.0, 0.0), Point::new(d, 0.0)];
    Configuration::uniform(ManifoldModel::Flat, PhysicalConstants::NATURAL, d, &points, 1.0)
}

fn main() -> Result<()> {
    println!("{:>8} {:>14} {:>16}", "d", "nu_gr", "E_gr");
    for d in [0.01, 0.1, 0.5, 1.0, 2.0, 5.0, 50.0] {
        let gs = ground_state_auto(&pair(d)?, DEFAULT_TOL)?;
        println!("{d:>8} {:>14.10} {:>16.10}", gs.nu_gr, gs.energy);
    }

    let config = pair(1.0)?;
    let grid: Vec<f64> = (1..=8).map(|k| 0.25 * k as f64).collect();
    let flow = eigenflow(&config, &grid)?;
    println!("\nflow at d = 1 (monotone: {})", flow.monotone);
    for (nu, (lam, neg)) in grid.iter().zip(flow.lambda_min.iter().zip(&flow.neg_counts)) {
        println!("  nu = {nu:4.2}  lambda_min = {lam:+.6}  bound states below -nu^2: {neg}");
    }
    println!("bound states below E = -1: {}", count_bound_states_below(&config, 1.0)?);
    Ok(())
}
