use crate::error::{Error, Result};

use super::quadrature::{integrate_to_infinity, AccuracyBudget};

/// `int_0^inf (exp(-a xi) - exp(-b xi)) / sinh(xi) d xi` for `b > a > 0`.
///
/// Evaluated by adaptive quadrature at relative tolerance 1e-10. The
/// numerator is formed as `-exp(-a xi) expm1(-(b - a) xi)`, so the integrand
/// keeps full precision when `b` is close to `a` and near `xi = 0`.
pub fn frullani_sinh_integral(a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::domain(format!("frullani integral requires a > 0, got {a}")));
    }
    if !(b > a && b.is_finite()) {
        return Err(Error::domain(format!("frullani integral requires b > a, got a = {a}, b = {b}")));
    }
    let gap = b - a;
    let integrand = |xi: f64| {
        if xi <= 0.0 {
            return gap;
        }
        let head = (-a * xi).exp();
        if head == 0.0 {
            return 0.0;
        }
        let numer = -head * (-gap * xi).exp_m1();
        let denom = if xi > 40.0 { 0.5 * xi.exp() } else { xi.sinh() };
        numer / denom
    };
    let value = integrate_to_infinity(integrand, 0.0, 1.0 / (a + 1.0), AccuracyBudget::relative(1e-10))?.value;
    Ok(value)
}
