//! Full resolvent kernel of a three-center configuration: free part plus the
//! finite-rank correction through Phi(nu)^{-1}.

use point_interactions::geometry::distance;
use point_interactions::kernels::{free_resolvent_kernel, ResolventQuery};
use point_interactions::spectral::{ground_state_auto, resolvent_correction, DEFAULT_TOL};
use point_interactions::{Configuration, ManifoldModel, PhysicalConstants, Point, Result};

fn main() -> Result<()> {
    let units = PhysicalConstants::NATURAL;
    let points = [Point::new(0.0, 0.0), Point::new(1.5, 0.0), Point::new(0.75, 1.3)];
    let config = Configuration::uniform(ManifoldModel::Flat, units, 1.5, &points, 1.0)?;
    let gs = ground_state_auto(&config, DEFAULT_TOL)?;
    println!("ground state at nu_gr = {:.10}", gs.nu_gr);

    let x = Point::new(0.7, 0.4);
    let y = Point::new(-0.5, 0.8);
    let free =
        free_resolvent_kernel(&ResolventQuery::new(2.0, distance(config.model(), &x, &y)?, *config.model(), units)?)?;
    println!("nu = 2: free {free:.10e}");
    for nu in [gs.nu_gr * 1.5, gs.nu_gr * 1.1, gs.nu_gr * 1.01, gs.nu_gr * 1.001] {
        let corr = resolvent_correction(&config, nu, &x, &y)?;
        println!("  nu = {nu:.6}: correction {corr:+.6e} (grows like a pole as nu -> nu_gr)");
    }
    match resolvent_correction(&config, gs.nu_gr, &x, &y) {
        Err(e) => println!("at nu_gr: {e}"),
        Ok(v) => println!("at nu_gr (numerically regular): {v:e}"),
    }
    Ok(())
}
