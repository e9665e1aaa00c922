//! Certificates for a noncompact surface known only through heat-kernel
//! bound constants and a maximal first-level petal count n_star.

use point_interactions::certificates::{certificate_generic, generic_validity_nu, offdiag_norm_bound_generic};
use point_interactions::{GenericBounds, PhysicalConstants, Result};

fn main() -> Result<()> {
    let units = PhysicalConstants::NATURAL;
    let base = GenericBounds {
        kappa: 1.0,
        const_c: 1.0,
        const_d: 1.0,
        rho: 1.0,
        lambda_gap: 0.0,
        n_star: 6,
        const_a: 2.0,
        const_b: 5.0,
    };
    let d_min = 1.0;
    println!("validity requires nu >= {:.6}", generic_validity_nu(&base, d_min, &units));
    for nu in [2.0, 4.0, 8.0, 16.0] {
        let b = offdiag_norm_bound_generic(&base, d_min, nu, &units)?;
        println!("  nu = {nu:>5}: closed form {:.6e}, 20-level series {:.6e}", b.closed_form, b.series);
    }
    println!("\n{:>7} {:>14} {:>14}", "n_star", "nu_*", "margin");
    for n_star in [2, 4, 6, 8, 12] {
        let cert = certificate_generic(&GenericBounds { n_star, ..base }, d_min, 1.0, &units)?;
        println!("{n_star:>7} {:>14.8} {:>14.3e}", cert.nu_star, cert.margin()?);
    }
    Ok(())
}
