//! Modified Bessel functions of the second kind, orders 0 and 1.
//!
//! Power series with the logarithmic term for `x <= 2`, Steed's continued
//! fraction (Temme's CF2 form) above. Both branches deliver roughly machine
//! precision; the switch point keeps the series cancellation below one digit.

use std::f64::consts::PI;

use crate::error::{Error, Result};

use super::EULER_GAMMA;

const SERIES_LIMIT: f64 = 2.0;
const MAX_TERMS: usize = 500;

/// A Bessel value together with an underflow marker.
///
/// `underflow` is set when the true value is below the smallest normal
/// `f64`; `value` is then reported as zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselValue {
    pub value: f64,
    pub underflow: bool,
}

fn check_argument(x: f64) -> Result<()> {
    if x > 0.0 && !x.is_nan() {
        Ok(())
    } else {
        Err(Error::domain(format!("Bessel K requires x > 0, got {x}")))
    }
}

/// Series for small arguments, returns (K0, K1).
fn series(x: f64) -> (f64, f64) {
    let t = 0.25 * x * x;
    let log_term = (0.5 * x).ln() + EULER_GAMMA;

    // term0 = t^k / (k!)^2, term1 = t^k / (k! (k+1)!)
    let mut term0 = 1.0;
    let mut term1 = 1.0;
    let mut harmonic = 0.0; // H_k
    let mut i0 = 0.0;
    let mut k0_tail = 0.0;
    let mut k1_sum = 0.0;
    for k in 0..MAX_TERMS {
        let kf = k as f64;
        let harmonic_next = harmonic + 1.0 / (kf + 1.0);
        i0 += term0;
        k0_tail += harmonic * term0;
        k1_sum += term1 * (log_term - 0.5 * (harmonic + harmonic_next));
        if term0 < 1e-18 * i0.abs() && term1 < 1e-18 {
            break;
        }
        term0 *= t / ((kf + 1.0) * (kf + 1.0));
        term1 *= t / ((kf + 1.0) * (kf + 2.0));
        harmonic = harmonic_next;
    }
    let k0 = -log_term * i0 + k0_tail;
    let k1 = 1.0 / x + 0.5 * x * k1_sum;
    (k0, k1)
}

/// Continued fraction for `x > 2`, returns `exp(x) * (K0, K1)`.
fn continued_fraction_scaled(x: f64) -> (f64, f64) {
    let a1 = 0.25;
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut delh = d;
    let mut h = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    for i in 2..MAX_TERMS {
        let fi = i as f64;
        a -= 2.0 * (fi - 1.0);
        c = -a * c / fi;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh *= b * d - 1.0;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < 1e-17 {
            break;
        }
    }
    h *= a1;
    let k0 = (PI / (2.0 * x)).sqrt() / s;
    let k1 = k0 * (x + 0.5 - h) / x;
    (k0, k1)
}

fn pair(x: f64) -> (BesselValue, BesselValue) {
    if x <= SERIES_LIMIT {
        let (k0, k1) = series(x);
        (BesselValue { value: k0, underflow: false }, BesselValue { value: k1, underflow: false })
    } else {
        let (k0e, k1e) = continued_fraction_scaled(x);
        let decay = (-x).exp();
        let wrap = |scaled: f64| {
            let v = scaled * decay;
            if v < f64::MIN_POSITIVE {
                BesselValue { value: 0.0, underflow: true }
            } else {
                BesselValue { value: v, underflow: false }
            }
        };
        (wrap(k0e), wrap(k1e))
    }
}

/// `K0(x)` with underflow reporting.
pub fn bessel_k0_checked(x: f64) -> Result<BesselValue> {
    check_argument(x)?;
    Ok(pair(x).0)
}

/// `K1(x)` with underflow reporting.
pub fn bessel_k1_checked(x: f64) -> Result<BesselValue> {
    check_argument(x)?;
    Ok(pair(x).1)
}

/// Modified Bessel function `K0(x)` for `x > 0`.
pub fn bessel_k0(x: f64) -> Result<f64> {
    bessel_k0_checked(x).map(|v| v.value)
}

/// Modified Bessel function `K1(x)` for `x > 0`.
pub fn bessel_k1(x: f64) -> Result<f64> {
    bessel_k1_checked(x).map(|v| v.value)
}

/// Exponentially scaled `exp(x) K0(x)`; never underflows.
pub fn bessel_k0_scaled(x: f64) -> Result<f64> {
    check_argument(x)?;
    Ok(if x <= SERIES_LIMIT { series(x).0 * x.exp() } else { continued_fraction_scaled(x).0 })
}

/// Exponentially scaled `exp(x) K1(x)`; never underflows.
pub fn bessel_k1_scaled(x: f64) -> Result<f64> {
    check_argument(x)?;
    Ok(if x <= SERIES_LIMIT { series(x).1 * x.exp() } else { continued_fraction_scaled(x).1 })
}
