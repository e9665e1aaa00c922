//! Heat kernels, free resolvent kernels and the kernel upper bounds.
//!
//! Conventions: the heat equation is `-(hbar^2/2m) Lap K = -hbar dK/dt`, so
//! the diffusion constant is `c = hbar/2m`; the free resolvent at
//! `E = -nu^2` is `int_0^inf (dt/hbar) exp(-nu^2 t/hbar) K_t`.
//!
//! On the hyperbolic plane of curvature `-kappa` everything is reduced to
//! the unit-curvature kernel with `rho = sqrt(kappa) d` and
//! `tau = kappa c t`. The endpoint singularity `1/sqrt(cosh xi - cosh rho)`
//! is removed by `xi = rho + s^2`, and `cosh xi - cosh rho` is formed as
//! `2 sinh(rho + s^2/2) sinh(s^2/2)`.

use std::f64::consts::{PI, SQRT_2};

use crate::error::{Error, Result};
use crate::geometry::{GenericBounds, ManifoldModel};
use crate::special::{bessel_k0, integrate, AccuracyBudget};
use crate::units::PhysicalConstants;

/// Heat-kernel evaluation point: time `t > 0`, geodesic distance `dist >= 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelQuery {
    pub t: f64,
    pub dist: f64,
    pub model: ManifoldModel,
    pub constants: PhysicalConstants,
}

impl KernelQuery {
    pub fn new(t: f64, dist: f64, model: ManifoldModel, constants: PhysicalConstants) -> Result<Self> {
        let q = Self { t, dist, model, constants };
        q.validate()?;
        Ok(q)
    }

    fn validate(&self) -> Result<()> {
        if !(self.t > 0.0 && self.t.is_finite()) {
            return Err(Error::domain(format!("heat-kernel time must be positive, got {}", self.t)));
        }
        if !(self.dist >= 0.0 && self.dist.is_finite()) {
            return Err(Error::domain(format!("distance must be >= 0, got {}", self.dist)));
        }
        Ok(())
    }
}

/// Resolvent evaluation point at energy `E = -nu^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResolventQuery {
    pub nu: f64,
    pub dist: f64,
    pub model: ManifoldModel,
    pub constants: PhysicalConstants,
}

impl ResolventQuery {
    pub fn new(nu: f64, dist: f64, model: ManifoldModel, constants: PhysicalConstants) -> Result<Self> {
        Ok(Self { nu, dist, model, constants })
    }
}

const KERNEL_BUDGET: f64 = 1e-11;

/// Gaussian kernel of the flat plane.
pub fn flat_heat_kernel(q: &KernelQuery) -> Result<f64> {
    q.validate()?;
    if q.model != ManifoldModel::Flat {
        return Err(q.model.unsupported("flat_heat_kernel"));
    }
    let c = q.constants.diffusion();
    Ok((-q.dist * q.dist / (4.0 * c * q.t)).exp() / (4.0 * PI * c * q.t))
}

/// `int_rho^inf xi exp(-xi^2/4tau) / sqrt(cosh xi - cosh rho) d xi`, returned
/// as `(log_prefactor, integral)` with the factor
/// `exp(-rho^2/4tau - rho/2)` kept in log form.
fn unit_hyperbolic_integral(tau: f64, rho: f64) -> Result<(f64, f64)> {
    let integrand = |s: f64| {
        if s <= 0.0 {
            return 0.0;
        }
        let s2 = s * s;
        let xi = rho + s2;
        let expo = -(2.0 * rho * s2 + s2 * s2) / (4.0 * tau) - 0.25 * s2;
        let denom = (-(-(2.0 * rho + s2)).exp_m1() * (0.5 * s2).sinh()).sqrt();
        if denom == 0.0 || !denom.is_finite() {
            return 0.0;
        }
        2.0 * s * xi * expo.exp() / denom
    };
    let mut s_max2: f64 = 130.0f64.min((240.0 * tau).sqrt());
    if rho > 0.0 {
        s_max2 = s_max2.min(120.0 * tau / rho);
    }
    let s_max = s_max2.sqrt();
    let budget = AccuracyBudget::relative(KERNEL_BUDGET);
    // resolve the small-s structure separately from the tail
    let split = (0.25 * s_max).min((4.0 * tau).sqrt().sqrt().max(rho.sqrt()));
    let head = integrate(integrand, 0.0, split, budget)?.value;
    let tail = integrate(integrand, split, s_max, budget)?.value;
    Ok((-rho * rho / (4.0 * tau) - 0.5 * rho, head + tail))
}

/// Heat kernel of the hyperbolic plane with curvature `-kappa`.
///
/// `K_t = sqrt(2) kappa exp(-tau/4) / (4 pi tau)^{3/2}
///        int_{rho}^inf xi exp(-xi^2/4tau) / sqrt(cosh xi - cosh rho) d xi`
/// with `tau = (hbar kappa/2m) t` and `rho = sqrt(kappa) dist`, evaluated
/// by adaptive quadrature.
pub fn hyperbolic_heat_kernel(q: &KernelQuery) -> Result<f64> {
    q.validate()?;
    let kappa = match q.model {
        ManifoldModel::Hyperbolic { kappa } => kappa,
        other => return Err(other.unsupported("hyperbolic_heat_kernel")),
    };
    if !(kappa > 0.0) {
        return Err(Error::domain(format!("kappa must be positive, got {kappa}")));
    }
    let tau = kappa * q.constants.diffusion() * q.t;
    let rho = kappa.sqrt() * q.dist;
    let (log_pref, integral) = unit_hyperbolic_integral(tau, rho)?;
    let log_front = -0.25 * tau - 1.5 * (4.0 * PI * tau).ln() + log_pref;
    Ok(SQRT_2 * kappa * log_front.exp() * integral)
}

/// Exact heat kernel of a flat or hyperbolic backend.
pub fn heat_kernel(q: &KernelQuery) -> Result<f64> {
    match q.model {
        ManifoldModel::Flat => flat_heat_kernel(q),
        ManifoldModel::Hyperbolic { .. } => hyperbolic_heat_kernel(q),
        ManifoldModel::GenericBounds(_) => Err(q.model.unsupported("heat_kernel")),
    }
}

/// Gaussian upper bound `A / (4 pi (hbar/2m) t) exp(-2m d^2 / (B hbar t))`
/// valid on Cartan-Hadamard surfaces for `B > 4`.
pub fn heat_kernel_upper_gaussian(q: &KernelQuery, const_a: f64, const_b: f64) -> Result<f64> {
    q.validate()?;
    if let ManifoldModel::GenericBounds(_) = q.model {
        return Err(q.model.unsupported("heat_kernel_upper_gaussian"));
    }
    if !(const_a > 0.0 && const_a.is_finite()) {
        return Err(Error::domain(format!("A must be positive, got {const_a}")));
    }
    if !(const_b > 4.0 && const_b.is_finite()) {
        return Err(Error::domain(format!("B must be strictly larger than 4, got {const_b}")));
    }
    let c = q.constants.diffusion();
    Ok(const_a / (4.0 * PI * c * q.t) * (-q.dist * q.dist / (const_b * c * q.t)).exp())
}

/// Off-diagonal upper bound on a generic noncompact surface:
/// `const / (4 pi min(hbar t/2m, rho^2)) (1 + 2m d^2/(hbar t))^2
///  exp(-lambda t/hbar - 2m d^2/(4 hbar t))`,
/// with `const = C` while `hbar t/2m <= rho^2` and `const = D` beyond.
pub fn heat_kernel_upper_generic(q: &KernelQuery) -> Result<f64> {
    q.validate()?;
    let params: GenericBounds = match q.model {
        ManifoldModel::GenericBounds(p) => p,
        other => return Err(other.unsupported("heat_kernel_upper_generic")),
    };
    params.validate()?;
    let c = q.constants.diffusion();
    let ct = c * q.t;
    let rho2 = params.rho * params.rho;
    let (constant, scale) = if ct <= rho2 { (params.const_c, ct) } else { (params.const_d, rho2) };
    let r = q.dist * q.dist / ct;
    let poly = (1.0 + r) * (1.0 + r);
    Ok(constant / (4.0 * PI * scale) * poly * (-params.lambda_gap * q.t / q.constants.hbar - 0.25 * r).exp())
}

/// `sqrt(1 + 8 m nu^2 / (hbar^2 kappa))`, the exponent that appears in the
/// hyperbolic resolvent and diagonal formulas.
pub fn hyperbolic_exponent(nu: f64, kappa: f64, constants: &PhysicalConstants) -> f64 {
    (1.0 + 4.0 * nu * nu * constants.two_m_over_hbar2() / kappa).sqrt()
}

/// Free resolvent kernel `<x|(H0 + nu^2)^{-1}|x'>` at distance `dist > 0`.
///
/// Flat: `(m/(pi hbar^2)) K0(sqrt(2m) nu dist / hbar)`.
/// Hyperbolic: the t-integral of the heat kernel is done in closed form
/// under the xi-integral, leaving
/// `(2m/hbar^2) (sqrt(2)/(4 pi)) int_rho^inf exp(-b xi/2) / sqrt(cosh xi - cosh rho) d xi`
/// with `b = sqrt(1 + 8 m nu^2/(hbar^2 kappa))`, evaluated by quadrature.
pub fn free_resolvent_kernel(q: &ResolventQuery) -> Result<f64> {
    if !(q.nu > 0.0 && q.nu.is_finite()) {
        return Err(Error::domain(format!("nu must be positive, got {}", q.nu)));
    }
    if q.dist == 0.0 {
        return Err(Error::Divergence);
    }
    if !(q.dist > 0.0 && q.dist.is_finite()) {
        return Err(Error::domain(format!("distance must be positive, got {}", q.dist)));
    }
    match q.model {
        ManifoldModel::Flat => {
            let arg = q.constants.two_m_over_hbar2().sqrt() * q.nu * q.dist;
            Ok(q.constants.resolvent_prefactor() * bessel_k0(arg)?)
        }
        ManifoldModel::Hyperbolic { kappa } => {
            let b = hyperbolic_exponent(q.nu, kappa, &q.constants);
            let rho = kappa.sqrt() * q.dist;
            let integral = unit_hyperbolic_resolvent(b, rho)?;
            Ok(q.constants.two_m_over_hbar2() * SQRT_2 / (4.0 * PI) * integral)
        }
        ManifoldModel::GenericBounds(_) => Err(q.model.unsupported("free_resolvent_kernel")),
    }
}

/// `int_rho^inf exp(-b xi/2) / sqrt(cosh xi - cosh rho) d xi` for `rho > 0`.
fn unit_hyperbolic_resolvent(b: f64, rho: f64) -> Result<f64> {
    let log_front = -0.5 * (b + 1.0) * rho;
    if log_front < -745.0 {
        return Ok(0.0);
    }
    let integrand = |s: f64| {
        if s <= 0.0 {
            return 2.0 * SQRT_2 / (-(-2.0 * rho).exp_m1()).sqrt();
        }
        let s2 = s * s;
        let denom = (-(-(2.0 * rho + s2)).exp_m1() * (0.5 * s2).sinh()).sqrt();
        if !denom.is_finite() {
            return 0.0;
        }
        2.0 * s * (-(0.5 * b + 0.25) * s2).exp() / denom
    };
    let s_max = (140.0 / (b + 1.0)).sqrt();
    let budget = AccuracyBudget::relative(KERNEL_BUDGET);
    let split = (4.0 * (2.0 * rho).sqrt()).min(0.5 * s_max);
    let head = integrate(integrand, 0.0, split, budget)?.value;
    let tail = integrate(integrand, split, s_max, budget)?.value;
    Ok(log_front.exp() * (head + tail))
}
