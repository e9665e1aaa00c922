//! Heat kernels of the flat and hyperbolic planes next to the Gaussian and
//! generic upper bounds, and the hyperbolic resolvent against the flat one.

use point_interactions::kernels::{
    flat_heat_kernel, free_resolvent_kernel, heat_kernel_upper_gaussian, heat_kernel_upper_generic,
    hyperbolic_heat_kernel, KernelQuery, ResolventQuery,
};
use point_interactions::{GenericBounds, ManifoldModel, PhysicalConstants, Result};

fn main() -> Result<()> {
    let units = PhysicalConstants::NATURAL;
    let hyp = ManifoldModel::Hyperbolic { kappa: 1.0 };
    let generic = ManifoldModel::generic(GenericBounds {
        kappa: 1.0,
        const_c: 1.0,
        const_d: 1.0,
        rho: 1.0,
        lambda_gap: 0.0,
        n_star: 6,
        const_a: 2.0,
        const_b: 5.0,
    })?;

    println!("{:>6} {:>5} {:>13} {:>13} {:>13} {:>13}", "t", "d", "flat", "hyperbolic", "gaussian", "generic");
    for t in [0.1, 1.0, 10.0] {
        for d in [0.0, 1.0, 3.0] {
            let flat = flat_heat_kernel(&KernelQuery::new(t, d, ManifoldModel::Flat, units)?)?;
            let q = KernelQuery::new(t, d, hyp, units)?;
            let exact = hyperbolic_heat_kernel(&q)?;
            let gauss = heat_kernel_upper_gaussian(&q, 2.0, 5.0)?;
            let gen = heat_kernel_upper_generic(&KernelQuery::new(t, d, generic, units)?)?;
            println!("{t:>6} {d:>5} {flat:>13.6e} {exact:>13.6e} {gauss:>13.6e} {gen:>13.6e}");
        }
    }

    println!("\nresolvent kernel at nu = 1");
    for d in [0.1, 1.0, 3.0] {
        let f = free_resolvent_kernel(&ResolventQuery::new(1.0, d, ManifoldModel::Flat, units)?)?;
        let h = free_resolvent_kernel(&ResolventQuery::new(1.0, d, hyp, units)?)?;
        println!("  d = {d:>4}: flat {f:.10e}, hyperbolic {h:.10e}");
    }
    Ok(())
}
