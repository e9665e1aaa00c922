//! Elementary inequalities used to relax exact kernels into closed forms.

use std::f64::consts::PI;

/// Hermite-Hadamard upper bound `(xi / 2)(1 + cosh xi) >= sinh xi` for `xi >= 0`.
pub fn sinh_hermite_hadamard(xi: f64) -> f64 {
    0.5 * xi * (1.0 + xi.cosh())
}

/// Further relaxation `xi e^xi >= xi cosh^2(xi / 2)`.
pub fn sinh_exponential_relaxation(xi: f64) -> f64 {
    xi * xi.exp()
}

/// `K0(x) <= (2 / x) exp(-x / 2)`.
pub fn k0_upper_half_exponent(x: f64) -> f64 {
    2.0 / x * (-0.5 * x).exp()
}

/// `K0(x) <= K_{1/2}(x) = sqrt(pi / 2x) exp(-x)`.
pub fn k0_upper_half_order(x: f64) -> f64 {
    (PI / (2.0 * x)).sqrt() * (-x).exp()
}

/// `K1(x) <= (1 + 1/x) exp(-x)`.
pub fn k1_upper(x: f64) -> f64 {
    (1.0 + 1.0 / x) * (-x).exp()
}
