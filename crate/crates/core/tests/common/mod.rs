//! Independent numerical oracles for the integration tests. Nothing here
//! calls the library's quadrature.

#![allow(dead_code)]

#[allow(clippy::too_many_arguments)]
fn simpson_rec<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    let roundoff = 1e-15 * (left.abs() + right.abs());
    if depth == 0 || delta.abs() <= 15.0 * tol || delta.abs() <= roundoff {
        return left + right + delta / 15.0;
    }
    simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// Adaptive Simpson with Richardson correction on `[a, b]` to relative
/// tolerance `rel` (against a coarse first pass), after a uniform pre-split
/// into `pieces` panels.
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel: f64, pieces: usize) -> f64 {
    let h = (b - a) / pieces as f64;
    let coarse: f64 = (0..pieces)
        .map(|k| {
            let lo = a + h * k as f64;
            h / 6.0 * (f(lo).abs() + 4.0 * f(lo + 0.5 * h).abs() + f(lo + h).abs())
        })
        .sum();
    let tol = rel * coarse.max(f64::MIN_POSITIVE);
    (0..pieces)
        .map(|k| {
            let lo = a + h * k as f64;
            let hi = lo + h;
            let (fa, fm, fb) = (f(lo), f(0.5 * (lo + hi)), f(hi));
            let whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
            simpson_rec(&f, lo, hi, fa, fm, fb, whole, tol / pieces as f64, 40)
        })
        .sum()
}

/// `e^x K0(x) = int_0^inf exp(-2 x sinh^2(t/2)) dt`.
pub fn k0_scaled_oracle(x: f64) -> f64 {
    let upper = (1.0 + 800.0 / x).acosh();
    simpson(|t: f64| (-2.0 * x * (0.5 * t).sinh().powi(2)).exp(), 0.0, upper, 1e-14, 64)
}

/// `e^x K1(x) = int_0^inf exp(-2 x sinh^2(t/2)) cosh t dt`.
pub fn k1_scaled_oracle(x: f64) -> f64 {
    let upper = (1.0 + 800.0 / x).acosh();
    simpson(|t: f64| (-2.0 * x * (0.5 * t).sinh().powi(2)).exp() * t.cosh(), 0.0, upper, 1e-14, 64)
}

/// Binet's formula `psi(x) = ln x - 1/2x - 2 int_0^inf t dt / ((t^2 + x^2)(e^{2 pi t} - 1))`.
pub fn digamma_oracle(x: f64) -> f64 {
    let f = |t: f64| {
        if t == 0.0 {
            return 0.0;
        }
        t / ((t * t + x * x) * (2.0 * std::f64::consts::PI * t).exp_m1())
    };
    x.ln() - 0.5 / x - 2.0 * simpson(f, 0.0, 20.0, 1e-14, 64)
}

/// `int_0^inf g(t) dt` for `g` living on many scales: `t = e^u`, `u` in
/// `[lo, hi]`, relative tolerance `tol`.
pub fn log_time_integral<F: Fn(f64) -> f64>(g: F, lo: f64, hi: f64, tol: f64) -> f64 {
    simpson(
        |u: f64| {
            let t = u.exp();
            t * g(t)
        },
        lo,
        hi,
        tol,
        256,
    )
}

/// Determinant by Gaussian elimination with partial pivoting.
pub fn determinant(mut a: Vec<Vec<f64>>) -> f64 {
    let n = a.len();
    let mut det = 1.0;
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs())).unwrap();
        if a[pivot][col] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        det *= a[col][col];
        for row in col + 1..n {
            let factor = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= factor * a[col][k];
            }
        }
    }
    det
}

/// Smallest root of `det(A - lambda I)` by scanning from the Gershgorin
/// lower edge and bisecting the first sign change.
pub fn smallest_eigenvalue_by_charpoly(a: &[Vec<f64>]) -> f64 {
    let n = a.len();
    let char_poly = |lam: f64| {
        let mut m = a.to_vec();
        for (i, row) in m.iter_mut().enumerate() {
            row[i] -= lam;
        }
        determinant(m)
    };
    let lower = (0..n)
        .map(|i| a[i][i] - (0..n).filter(|&j| j != i).map(|j| a[i][j].abs()).sum::<f64>())
        .fold(f64::INFINITY, f64::min)
        - 1e-9;
    let upper = (0..n)
        .map(|i| a[i][i] + (0..n).filter(|&j| j != i).map(|j| a[i][j].abs()).sum::<f64>())
        .fold(f64::NEG_INFINITY, f64::max);
    let steps = 20000;
    let h = (upper - lower) / steps as f64;
    let mut lo = lower;
    let mut f_lo = char_poly(lo);
    for k in 1..=steps {
        let hi = lower + h * k as f64;
        let f_hi = char_poly(hi);
        if f_lo == 0.0 {
            return lo;
        }
        if f_lo.signum() != f_hi.signum() {
            let (mut a_, mut b_) = (lo, hi);
            for _ in 0..200 {
                let mid = 0.5 * (a_ + b_);
                let fm = char_poly(mid);
                if fm.signum() == f_lo.signum() {
                    a_ = mid;
                } else {
                    b_ = mid;
                }
            }
            return 0.5 * (a_ + b_);
        }
        lo = hi;
        f_lo = f_hi;
    }
    panic!("no eigenvalue found");
}

pub fn rng(seed: u64) -> rand_chacha::ChaCha8Rng {
    use rand::SeedableRng;
    rand_chacha::ChaCha8Rng::seed_from_u64(seed)
}

/// Log-uniform sample in `[lo, hi)`.
pub fn log_uniform<R: rand::Rng>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    rng.gen_range(lo.ln()..hi.ln()).exp()
}
