//! Level packings on the hyperbolic plane: packing counts against their
//! upper bounds, and the curvature-dependent certificate.

use point_interactions::certificates::{certificate_ch, verify_certificate};
use point_interactions::geometry::{
    hyperbolic_level_packing, level_capacity, packing_count_bound_exact, packing_count_bound_relaxed,
};
use point_interactions::{PhysicalConstants, Result};

fn main() -> Result<()> {
    let units = PhysicalConstants::NATURAL;
    let (kappa, d_min, mu, a, b) = (1.0, 2.0, 1.0, 2.0, 5.0);

    println!("{:>3} {:>10} {:>14} {:>14}", "l", "placed", "angle bound", "relaxed bound");
    for l in 1..=4 {
        println!(
            "{l:>3} {:>10} {:>14.2} {:>14.2}",
            level_capacity(kappa, d_min, l)?,
            packing_count_bound_exact(kappa, d_min, l)?,
            packing_count_bound_relaxed(kappa, d_min, l)?
        );
    }

    let cert = certificate_ch(kappa, d_min, mu, a, b, &units)?;
    println!("\nnu_* = {:.10} (regime {})", cert.nu_star, cert.regime.name());
    for levels in 0..=3 {
        let config = hyperbolic_level_packing(kappa, d_min, levels, mu, units)?;
        let report = verify_certificate(&config, &cert)?;
        println!(
            "levels 0..={levels}: N = {:>4}, E_gr = {:.10}, margin = {:.6}, gate = {:.3e}",
            report.centers, report.energy, report.margin, report.neumann_gate
        );
    }
    Ok(())
}
