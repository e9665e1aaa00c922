//! Special functions and the numerical toolkit behind the kernels.

pub mod bessel;
pub mod bounds;
pub mod digamma;
pub mod frullani;
pub mod quadrature;

pub use bessel::{
    bessel_k0, bessel_k0_checked, bessel_k0_scaled, bessel_k1, bessel_k1_checked, bessel_k1_scaled, BesselValue,
};
pub use digamma::digamma;
pub use frullani::frullani_sinh_integral;
pub use quadrature::{integrate, integrate_to_infinity, AccuracyBudget, Integral};

/// Euler-Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
