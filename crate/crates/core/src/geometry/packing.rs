//! Comparison angles and upper bounds on the number of centers per level.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// `ln(sinh(x))` for `x > 0` without overflow.
fn ln_sinh(x: f64) -> f64 {
    if x < 20.0 {
        x.sinh().ln()
    } else {
        x + (-(-2.0 * x).exp()).ln_1p() - std::f64::consts::LN_2
    }
}

/// Angle opposite `side_c` in the constant-curvature model triangle with
/// sides `side_a`, `side_b`, `side_c`.
///
/// `kappa > 0` uses the hyperbolic plane of curvature `-kappa`, `kappa = 0`
/// the Euclidean plane. Evaluated through the half-angle form
/// `sin^2(alpha/2) = sinh((c+a-b)/2) sinh((c-a+b)/2) / (sinh a sinh b)`
/// (lengths scaled by `sqrt(kappa)`), which stays accurate as `kappa -> 0`.
pub fn comparison_angle(kappa: f64, side_a: f64, side_b: f64, side_c: f64) -> Result<f64> {
    if !(kappa >= 0.0 && kappa.is_finite()) {
        return Err(Error::domain(format!("kappa must be >= 0, got {kappa}")));
    }
    for (name, s) in [("a", side_a), ("b", side_b), ("c", side_c)] {
        if !(s > 0.0 && s.is_finite()) {
            return Err(Error::domain(format!("side {name} must be positive, got {s}")));
        }
    }
    let slack = 1e-12 * (side_a + side_b + side_c);
    if side_a > side_b + side_c + slack || side_b > side_a + side_c + slack || side_c > side_a + side_b + slack {
        return Err(Error::domain(format!("sides ({side_a}, {side_b}, {side_c}) violate the triangle inequality")));
    }
    let p = (0.5 * (side_c + side_a - side_b)).max(0.0);
    let q = (0.5 * (side_c - side_a + side_b)).max(0.0);
    let sin2 = if kappa == 0.0 {
        p * q / (side_a * side_b)
    } else {
        let k = kappa.sqrt();
        if p == 0.0 || q == 0.0 {
            0.0
        } else {
            (ln_sinh(k * p) + ln_sinh(k * q) - ln_sinh(k * side_a) - ln_sinh(k * side_b)).exp()
        }
    };
    Ok(2.0 * sin2.clamp(0.0, 1.0).sqrt().asin())
}

fn check_level(l: u32) -> Result<()> {
    if l == 0 {
        Err(Error::domain("level must be >= 1"))
    } else {
        Ok(())
    }
}

fn check_separation(kappa: f64, d_min: f64) -> Result<()> {
    if !(kappa >= 0.0 && kappa.is_finite()) {
        return Err(Error::domain(format!("kappa must be >= 0, got {kappa}")));
    }
    if !(d_min > 0.0 && d_min.is_finite()) {
        return Err(Error::domain(format!("d_min must be positive, got {d_min}")));
    }
    Ok(())
}

/// `pi / arcsin( sinh(sqrt(kappa) d_min / 2) / sinh(sqrt(kappa) d_min l) )`,
/// the angle-comparison bound on the level-`l` count. `kappa = 0` is the
/// flat limit with ratio `1 / (2l)`. Rounded up by a few ulps so that
/// `floor` of the bound never undercounts (flat `l = 1` gives 6).
pub fn packing_count_bound_exact(kappa: f64, d_min: f64, l: u32) -> Result<f64> {
    packing_count_bound_unrounded(kappa, d_min, l).map(|v| v * (1.0 + 4.0 * f64::EPSILON))
}

fn packing_count_bound_unrounded(kappa: f64, d_min: f64, l: u32) -> Result<f64> {
    check_level(l)?;
    check_separation(kappa, d_min)?;
    if kappa == 0.0 {
        return Ok(PI / (0.5 / l as f64).asin());
    }
    let log_ratio = {
        let x = kappa.sqrt() * d_min;
        ln_sinh(0.5 * x) - ln_sinh(x * l as f64)
    };
    if log_ratio < -20.0 {
        // asin(r) = r to double precision; pi / r is the (upper) value
        return Ok(PI * (-log_ratio).exp());
    }
    Ok(PI / log_ratio.exp().min(1.0).asin())
}

/// `2 pi l sech(sqrt(kappa) d_min / 4) exp(sqrt(kappa) d_min l)`.
pub fn packing_count_bound_relaxed(kappa: f64, d_min: f64, l: u32) -> Result<f64> {
    check_level(l)?;
    check_separation(kappa, d_min)?;
    let x = kappa.sqrt() * d_min;
    let lf = l as f64;
    Ok(2.0 * PI * lf * (x * lf).exp() / (0.25 * x).cosh())
}

/// Replica-counting bound `n_star^l`.
pub fn packing_count_bound_generic(n_star: u32, l: u32) -> Result<f64> {
    check_level(l)?;
    if n_star < 2 {
        return Err(Error::domain(format!("n_star must be >= 2, got {n_star}")));
    }
    Ok((n_star as f64).powi(l as i32))
}
