//! The renormalized principal operator `Phi(nu)` and its regularized
//! precursor.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{Configuration, ManifoldModel};
use crate::kernels::{free_resolvent_kernel, heat_kernel, hyperbolic_exponent, KernelQuery, ResolventQuery};
use crate::special::{frullani_sinh_integral, integrate, AccuracyBudget};
use crate::units::PhysicalConstants;

/// `Phi(nu)` for a configuration, rows and columns ordered as its centers.
#[derive(Debug, Clone)]
pub struct PrincipalMatrix<'a> {
    nu: f64,
    entries: DMatrix<f64>,
    config: &'a Configuration,
}

impl<'a> PrincipalMatrix<'a> {
    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn config(&self) -> &'a Configuration {
        self.config
    }

    pub fn into_entries(self) -> DMatrix<f64> {
        self.entries
    }
}

/// `Phi = D + O` with `D` diagonal and `O` zero on the diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixSplit {
    pub diag: DVector<f64>,
    pub offdiag: DMatrix<f64>,
}

impl MatrixSplit {
    pub fn reassemble(&self) -> DMatrix<f64> {
        let mut m = self.offdiag.clone();
        for i in 0..self.diag.len() {
            m[(i, i)] = self.diag[i];
        }
        m
    }
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} must be positive, got {v}")))
    }
}

/// Diagonal entry `Phi_ii(nu)` of a center with bound-state scale `mu`.
///
/// Flat: `(m/2 pi hbar^2) ln(nu^2/mu^2)`. Hyperbolic:
/// `(m/pi hbar^2) int_0^inf (exp(-a xi) - exp(-b xi))/sinh xi d xi` with
/// `a`, `b` the hyperbolic exponents of `mu` and `nu`.
pub fn phi_diagonal(model: &ManifoldModel, nu: f64, mu: f64, constants: &PhysicalConstants) -> Result<f64> {
    check_positive("nu", nu)?;
    check_positive("mu", mu)?;
    match *model {
        ManifoldModel::Flat => Ok(constants.resolvent_prefactor() * (nu / mu).ln()),
        ManifoldModel::Hyperbolic { kappa } => {
            let a = hyperbolic_exponent(mu, kappa, constants);
            let b = hyperbolic_exponent(nu, kappa, constants);
            let f = if b > a {
                frullani_sinh_integral(a, b)?
            } else if b < a {
                -frullani_sinh_integral(b, a)?
            } else {
                0.0
            };
            Ok(constants.resolvent_prefactor() * f)
        }
        ManifoldModel::GenericBounds(_) => Err(model.unsupported("phi_diagonal")),
    }
}

/// Off-diagonal entry `Phi_ij(nu) = -G_nu(p_i, p_j)`.
pub fn phi_offdiagonal(model: &ManifoldModel, nu: f64, dist: f64, constants: &PhysicalConstants) -> Result<f64> {
    let g = free_resolvent_kernel(&ResolventQuery::new(nu, dist, *model, *constants)?)?;
    Ok(-g)
}

/// Assembles `Phi(nu)`; rows are filled in parallel.
pub fn assemble(config: &Configuration, nu: f64) -> Result<PrincipalMatrix<'_>> {
    check_positive("nu", nu)?;
    let n = config.len();
    let model = config.model();
    let constants = config.constants();
    let dist = config.distance_matrix();
    let rows: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| -> Result<Vec<f64>> {
            let mut row = Vec::with_capacity(n - i);
            row.push(phi_diagonal(model, nu, config.centers()[i].mu, constants)?);
            for j in i + 1..n {
                row.push(phi_offdiagonal(model, nu, dist[(i, j)], constants)?);
            }
            Ok(row)
        })
        .collect::<Result<_>>()?;
    let mut entries = DMatrix::zeros(n, n);
    for (i, row) in rows.into_iter().enumerate() {
        for (k, v) in row.into_iter().enumerate() {
            let j = i + k;
            entries[(i, j)] = v;
            entries[(j, i)] = v;
        }
    }
    Ok(PrincipalMatrix { nu, entries, config })
}

pub fn split(pm: &PrincipalMatrix<'_>) -> MatrixSplit {
    split_matrix(pm.entries())
}

/// Splits any square matrix into diagonal and off-diagonal parts.
pub fn split_matrix(m: &DMatrix<f64>) -> MatrixSplit {
    let diag = m.diagonal();
    let mut offdiag = m.clone();
    offdiag.fill_diagonal(0.0);
    MatrixSplit { diag, offdiag }
}

/// `t K_t(p, p)` on the diagonal.
fn scaled_diagonal_kernel(model: &ManifoldModel, t: f64, constants: &PhysicalConstants) -> Result<f64> {
    match model {
        ManifoldModel::Flat => Ok(1.0 / (4.0 * std::f64::consts::PI * constants.diffusion())),
        ManifoldModel::Hyperbolic { .. } => Ok(t * heat_kernel(&KernelQuery::new(t, 0.0, *model, *constants)?)?),
        ManifoldModel::GenericBounds(_) => Err(model.unsupported("regularized_coupling")),
    }
}

/// `int_eps^inf (dt/hbar) w((t - eps)/hbar) K_t(p, p)` with `t = eps e^s`;
/// `w` must decay at least like `exp(-rate u)`.
fn diagonal_time_integral<W: Fn(f64) -> f64 + Sync>(
    model: &ManifoldModel,
    epsilon: f64,
    rate: f64,
    weight: W,
    constants: &PhysicalConstants,
) -> Result<f64> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::domain(format!("epsilon must be positive, got {epsilon}")));
    }
    if let ManifoldModel::GenericBounds(_) = model {
        return Err(model.unsupported("regularized_coupling"));
    }
    let hbar = constants.hbar;
    let s_max = (1.0 + 750.0 * hbar / (rate * epsilon)).ln();
    let failure = std::sync::Mutex::new(None);
    let integrand = |s: f64| {
        let t = epsilon * s.exp();
        let w = weight((t - epsilon) / hbar);
        if w == 0.0 {
            return 0.0;
        }
        match scaled_diagonal_kernel(model, t, constants) {
            Ok(k) => w * k / hbar,
            Err(e) => {
                *failure.lock().unwrap() = Some(e);
                0.0
            }
        }
    };
    let value = integrate(integrand, 0.0, s_max, AccuracyBudget::relative(1e-10))?.value;
    if let Some(e) = failure.into_inner().unwrap() {
        return Err(e);
    }
    Ok(value)
}

/// Bare coupling `lambda(eps)` that places the isolated bound state at
/// `-mu^2`: `1/lambda = int_eps^inf (dt/hbar) exp(-mu^2 (t - eps)/hbar) K_t(p, p)`.
pub fn regularized_coupling(
    model: &ManifoldModel,
    epsilon: f64,
    mu: f64,
    constants: &PhysicalConstants,
) -> Result<f64> {
    check_positive("mu", mu)?;
    let mu2 = mu * mu;
    let inverse = diagonal_time_integral(model, epsilon, mu2, |u| (-mu2 * u).exp(), constants)?;
    Ok(1.0 / inverse)
}

/// Diagonal entry before the `eps -> 0` limit:
/// `int_eps^inf (dt/hbar) (exp(-mu^2 (t-eps)/hbar) - exp(-nu^2 (t-eps)/hbar)) K_t(p, p)`.
pub fn regularized_phi_diagonal(
    model: &ManifoldModel,
    epsilon: f64,
    nu: f64,
    mu: f64,
    constants: &PhysicalConstants,
) -> Result<f64> {
    check_positive("nu", nu)?;
    check_positive("mu", mu)?;
    if nu == mu {
        if !(epsilon > 0.0) {
            return Err(Error::domain(format!("epsilon must be positive, got {epsilon}")));
        }
        return Ok(0.0);
    }
    let (lo, hi, sign) = if nu > mu { (mu * mu, nu * nu, 1.0) } else { (nu * nu, mu * mu, -1.0) };
    let gap = hi - lo;
    let weight = move |u: f64| -(-lo * u).exp() * (-gap * u).exp_m1();
    Ok(sign * diagonal_time_integral(model, epsilon, lo, weight, constants)?)
}
