//! Adaptive Gauss-Kronrod integration.
//!
//! Global subdivision: the interval with the largest error estimate is
//! bisected until the summed estimate meets the requested budget. Ranges of
//! the form `[a, inf)` are mapped onto `(0, 1]` with `x = a - scale * ln(u)`,
//! which turns an integrand decaying like `exp(-x / scale)` into a bounded one.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

/// Relative and absolute tolerances for one quadrature call.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AccuracyBudget {
    pub rel_tol: f64,
    pub abs_tol: f64,
}

impl Default for AccuracyBudget {
    fn default() -> Self {
        Self { rel_tol: 1e-12, abs_tol: 1e-300 }
    }
}

impl AccuracyBudget {
    pub fn new(rel_tol: f64, abs_tol: f64) -> Result<Self> {
        if !(rel_tol > 0.0 && rel_tol <= 1e-6) {
            return Err(Error::domain(format!("rel_tol must lie in (0, 1e-6], got {rel_tol}")));
        }
        if !(abs_tol >= 0.0) {
            return Err(Error::domain(format!("abs_tol must be >= 0, got {abs_tol}")));
        }
        Ok(Self { rel_tol, abs_tol })
    }

    /// Budget with the given relative tolerance and the default absolute floor.
    pub fn relative(rel_tol: f64) -> Self {
        Self::new(rel_tol, 1e-300).expect("relative tolerance out of range")
    }

    fn target(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

/// Result of an adaptive quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

const MAX_SUBDIVISIONS: usize = 4000;

// 21-point Kronrod abscissae on [-1, 1] (non-negative half, descending) and
// weights; odd entries are the embedded 10-point Gauss nodes.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.000000000000000000000000000000000,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077715041016467,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
];

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut res_k = fc * WGK[10];
    let mut res_g = 0.0;
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = res_k * half;
    res_abs *= half.abs();
    res_asc *= half.abs();
    let mut error = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (1.0f64).min((200.0 * error / res_asc).powf(1.5));
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * res_abs);
    }
    Segment { a, b, value, error }
}

/// Integrates `f` over the finite interval `[a, b]`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, budget: AccuracyBudget) -> Result<Integral> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::domain("integration limits must be finite"));
    }
    if a == b {
        return Ok(Integral { value: 0.0, error: 0.0, evaluations: 0 });
    }
    let first = kronrod21(&f, a, b);
    let mut evaluations = 21;
    let mut total = first.value;
    let mut total_err = first.error;
    let mut heap = BinaryHeap::new();
    heap.push(first);

    let mut subdivisions = 0;
    while total_err > budget.target(total) {
        if subdivisions >= MAX_SUBDIVISIONS {
            return Err(Error::Quadrature { value: total, error: total_err });
        }
        let worst = heap.pop().expect("heap never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a.min(worst.b) || mid >= worst.a.max(worst.b) {
            // Interval exhausted at machine resolution.
            heap.push(worst);
            return Err(Error::Quadrature { value: total, error: total_err });
        }
        let left = kronrod21(&f, worst.a, mid);
        let right = kronrod21(&f, mid, worst.b);
        evaluations += 42;
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        subdivisions += 1;
        // Re-sum periodically to avoid drift from incremental updates.
        if subdivisions % 64 == 0 {
            total = heap.iter().map(|s| s.value).sum();
            total_err = heap.iter().map(|s| s.error).sum();
        }
    }
    let value: f64 = heap.iter().map(|s| s.value).sum();
    if !value.is_finite() {
        return Err(Error::Quadrature { value, error: total_err });
    }
    Ok(Integral { value, error: total_err, evaluations })
}

/// Integrates `f` over `[a, inf)` using the map `x = a - scale * ln(u)`.
///
/// `scale` should match the decay length of the integrand.
pub fn integrate_to_infinity<F: Fn(f64) -> f64>(f: F, a: f64, scale: f64, budget: AccuracyBudget) -> Result<Integral> {
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(Error::domain(format!("decay scale must be positive, got {scale}")));
    }
    let mapped = |u: f64| {
        let x = a - scale * u.ln();
        let fx = f(x);
        if fx == 0.0 {
            0.0
        } else {
            fx * scale / u
        }
    };
    integrate(mapped, 0.0, 1.0, budget)
}
