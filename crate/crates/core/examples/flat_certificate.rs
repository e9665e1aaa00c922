//! Certified lower bound on the ground-state energy of flat hexagonal
//! lattices, checked against the exact ground state of growing truncations.

use point_interactions::certificates::{certificate_ch, neumann_gate, verify_certificate};
use point_interactions::geometry::hex_lattice;
use point_interactions::principal::{assemble, split};
use point_interactions::spectral::{is_nonincreasing, truncation_study, DEFAULT_TOL};
use point_interactions::{PhysicalConstants, Result};

fn main() -> Result<()> {
    let units = PhysicalConstants::NATURAL;
    let (d_min, mu, a, b) = (2.0, 1.0, 2.0, 5.0);
    let cert = certificate_ch(0.0, d_min, mu, a, b, &units)?;
    println!("nu_* = {:.10}, E_gr > {:.10}", cert.nu_star, cert.energy_lower_bound);

    let levels = [0usize, 1, 2, 3, 4, 7];
    let rows = truncation_study(|l| hex_lattice(d_min, l as u32, mu, units), &levels, Some(cert.nu_star), DEFAULT_TOL)?;
    println!("{:>6} {:>8} {:>16} {:>10}", "level", "N", "E_gr", "gate");
    for row in &rows {
        let config = hex_lattice(d_min, row.index as u32, mu, units)?;
        let gate = neumann_gate(&split(&assemble(&config, cert.nu_star)?));
        println!("{:>6} {:>8} {:>16.10} {:>10.6}", row.index, row.centers, row.energy, gate);
    }
    println!("E_gr nonincreasing in N: {}", is_nonincreasing(&rows));

    let report = verify_certificate(&hex_lattice(d_min, 4, mu, units)?, &cert)?;
    println!("N = {}: {:?}, margin E_gr + nu_*^2 = {:.6}", report.centers, report.verdict, report.margin);
    Ok(())
}
