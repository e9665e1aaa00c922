use crate::error::{Error, Result};

const ASYMPTOTIC_FROM: f64 = 10.0;

/// Digamma function `psi(x)` for `x > 0`.
///
/// Upward recurrence to `x >= 10`, then the Stirling-type asymptotic series.
pub fn digamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || x.is_infinite() {
        return Err(Error::domain(format!("digamma requires finite x > 0, got {x}")));
    }
    let mut shift = 0.0;
    let mut y = x;
    while y < ASYMPTOTIC_FROM {
        shift -= 1.0 / y;
        y += 1.0;
    }
    let inv2 = 1.0 / (y * y);
    // Bernoulli tail: sum B_2k / (2k y^2k), k = 1..7
    let tail = inv2
        * (1.0 / 12.0
            - inv2
                * (1.0 / 120.0
                    - inv2
                        * (1.0 / 252.0
                            - inv2 * (1.0 / 240.0 - inv2 * (1.0 / 132.0 - inv2 * (691.0 / 32760.0 - inv2 / 12.0))))));
    Ok(shift + y.ln() - 0.5 / y - tail)
}
