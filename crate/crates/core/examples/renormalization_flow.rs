//! Coupling renormalization: the bare coupling lambda(eps) that keeps the
//! isolated bound state at -mu^2 vanishes as the cutoff is removed, while the
//! regularized diagonal of Phi converges.

use point_interactions::principal::{phi_diagonal, regularized_coupling, regularized_phi_diagonal};
use point_interactions::{ManifoldModel, PhysicalConstants, Result};

fn main() -> Result<()> {
    let units = PhysicalConstants::NATURAL;
    let (mu, nu) = (1.0, 2.0);
    for model in [ManifoldModel::Flat, ManifoldModel::Hyperbolic { kappa: 1.0 }] {
        let exact = phi_diagonal(&model, nu, mu, &units)?;
        println!("{} backend, Phi_ii(nu = {nu}) = {exact:.12}", model.backend_name());
        println!("{:>8} {:>14} {:>18} {:>14}", "eps", "lambda", "lambda ln(1/eps)", "gap");
        for eps in [1e-1, 1e-2, 1e-3, 1e-4, 1e-5] {
            let lambda = regularized_coupling(&model, eps, mu, &units)?;
            let reg = regularized_phi_diagonal(&model, eps, nu, mu, &units)?;
            println!("{eps:>8.0e} {lambda:>14.8} {:>18.8} {:>14.3e}", lambda * (1.0 / eps).ln(), exact - reg);
        }
        println!();
    }
    println!("flat limit of lambda ln(1/eps): 2 pi hbar^2 / m = {:.8}", 4.0 * std::f64::consts::PI);
    Ok(())
}
