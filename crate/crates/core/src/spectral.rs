//! Eigenvalue analysis of `Phi(nu)`: ground state, bound-state counting,
//! eigenvalue flows and the resolvent correction.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};
use crate::geometry::{distance, Configuration, Point};
use crate::kernels::{free_resolvent_kernel, ResolventQuery};
use crate::principal::assemble;

/// Default relative tolerance on `nu` for root finding.
pub const DEFAULT_TOL: f64 = 1e-10;

const SYMMETRY_TOL: f64 = 1e-12;
const MAX_DOUBLINGS: usize = 60;

/// Signature of a symmetric matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Inertia {
    pub negative: usize,
    pub zero: usize,
    pub positive: usize,
}

fn check_symmetric(m: &DMatrix<f64>) -> Result<()> {
    if !m.is_square() {
        return Err(Error::domain(format!("matrix is {}x{}, expected square", m.nrows(), m.ncols())));
    }
    let n = m.nrows();
    for i in 0..n {
        for j in i + 1..n {
            let gap = (m[(i, j)] - m[(j, i)]).abs();
            let scale = 1.0f64.max(m[(i, j)].abs());
            if gap > SYMMETRY_TOL * scale || gap.is_nan() {
                return Err(Error::NotSymmetric { i, j, gap });
            }
        }
    }
    Ok(())
}

/// All eigenvalues of a symmetric matrix, ascending.
pub fn symmetric_eigenvalues(m: &DMatrix<f64>) -> Result<Vec<f64>> {
    check_symmetric(m)?;
    if m.nrows() == 0 {
        return Ok(Vec::new());
    }
    let mut values: Vec<f64> = SymmetricEigen::new(m.clone()).eigenvalues.iter().copied().collect();
    values.sort_by(f64::total_cmp);
    Ok(values)
}

pub fn smallest_eigenvalue(m: &DMatrix<f64>) -> Result<f64> {
    if m.nrows() == 1 && m.ncols() == 1 {
        return Ok(m[(0, 0)]);
    }
    symmetric_eigenvalues(m)?.first().copied().ok_or_else(|| Error::domain("empty matrix has no eigenvalues"))
}

/// Inertia with eigenvalues below `1e-14 * max|lambda|` counted as zero.
pub fn inertia(m: &DMatrix<f64>) -> Result<Inertia> {
    let values = symmetric_eigenvalues(m)?;
    let scale = values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let cut = 1e-14 * scale;
    let mut out = Inertia { negative: 0, zero: 0, positive: 0 };
    for v in values {
        if v.abs() <= cut {
            out.zero += 1;
        } else if v < 0.0 {
            out.negative += 1;
        } else {
            out.positive += 1;
        }
    }
    Ok(out)
}

/// Ground state located as the zero of `nu -> lambda_min(Phi(nu))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroundStateResult {
    pub nu_gr: f64,
    pub energy: f64,
    pub iterations: usize,
    pub bracket: (f64, f64),
    pub residual: f64,
}

fn lambda_min(config: &Configuration, nu: f64) -> Result<f64> {
    smallest_eigenvalue(assemble(config, nu)?.entries())
}

/// Brent's method on a bracket with `f(lo) < 0 < f(hi)`. Stops when the
/// bracket is narrower than `tol * |x|`. Returns the root estimate, the final
/// bracket, its residual and the number of evaluations.
fn brent<F: FnMut(f64) -> Result<f64>>(
    mut f: F,
    lo: f64,
    hi: f64,
    f_lo: f64,
    f_hi: f64,
    tol: f64,
) -> Result<(f64, (f64, f64), f64, usize)> {
    let (mut a, mut b, mut fa, mut fb) = (lo, hi, f_lo, f_hi);
    let (mut c, mut fc) = (b, fb);
    let mut d = b - a;
    let mut e = d;
    let mut evals = 0;
    loop {
        if (fb > 0.0 && fc > 0.0) || (fb < 0.0 && fc < 0.0) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * tol * b.abs();
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 || evals >= 400 {
            let bracket = if fb == 0.0 {
                (b, b)
            } else if fb < 0.0 {
                (b, c)
            } else {
                (c, b)
            };
            return Ok((b, bracket, fb.abs(), evals));
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qq = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(xm) };
        fb = f(b)?;
        evals += 1;
    }
}

/// Ground state from a bracket `[nu_lo, nu_hi]`. The lower end is halved and
/// the upper end doubled (at most 60 times each) until the bracket holds.
pub fn ground_state(config: &Configuration, nu_lo: f64, nu_hi: f64, tol: f64) -> Result<GroundStateResult> {
    if !(nu_lo > 0.0 && nu_hi > nu_lo) {
        return Err(Error::domain(format!("need 0 < nu_lo < nu_hi, got [{nu_lo}, {nu_hi}]")));
    }
    if !(tol > 0.0 && tol < 1.0) {
        return Err(Error::domain(format!("tolerance must be in (0, 1), got {tol}")));
    }
    let mut iterations = 0;
    let mut lo = nu_lo;
    let mut f_lo = lambda_min(config, lo)?;
    let mut tries = 0;
    while f_lo >= 0.0 {
        if f_lo == 0.0 {
            return Ok(GroundStateResult { nu_gr: lo, energy: -lo * lo, iterations, bracket: (lo, lo), residual: 0.0 });
        }
        tries += 1;
        if tries > MAX_DOUBLINGS {
            return Err(Error::domain(format!("lambda_min stays positive down to nu = {lo}")));
        }
        lo *= 0.5;
        f_lo = lambda_min(config, lo)?;
        iterations += 1;
    }
    let mut hi = nu_hi.max(lo);
    let mut f_hi = lambda_min(config, hi)?;
    let mut tries = 0;
    while f_hi <= 0.0 {
        if f_hi == 0.0 {
            return Ok(GroundStateResult { nu_gr: hi, energy: -hi * hi, iterations, bracket: (hi, hi), residual: 0.0 });
        }
        tries += 1;
        if tries > MAX_DOUBLINGS {
            return Err(Error::NoCrossing { nu_hi: hi });
        }
        lo = hi;
        f_lo = f_hi;
        hi *= 2.0;
        f_hi = lambda_min(config, hi)?;
        iterations += 1;
    }
    let (nu, bracket, residual, evals) = brent(|x| lambda_min(config, x), lo, hi, f_lo, f_hi, tol)?;
    Ok(GroundStateResult { nu_gr: nu, energy: -nu * nu, iterations: iterations + evals, bracket, residual })
}

/// Ground state with the default bracket: lower end `mu_star / 2`, upper end
/// `max(mu_star, 1/d_min)`, expanded by doubling.
pub fn ground_state_auto(config: &Configuration, tol: f64) -> Result<GroundStateResult> {
    let mu = config.mu_star();
    let hi = mu.max(1.0 / config.d_min());
    ground_state(config, 0.5 * mu, if hi > 0.5 * mu { hi } else { mu }, tol)
}

/// Number of bound states with energy strictly below `-nu^2`.
pub fn count_bound_states_below(config: &Configuration, nu: f64) -> Result<usize> {
    Ok(inertia(assemble(config, nu)?.entries())?.negative)
}

/// `lambda_min` and inertia along a grid of `nu`.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenFlow {
    pub nu_grid: Vec<f64>,
    pub lambda_min: Vec<f64>,
    pub neg_counts: Vec<usize>,
    /// `lambda_min` is nondecreasing along the grid.
    pub monotone: bool,
}

pub fn eigenflow(config: &Configuration, nu_grid: &[f64]) -> Result<EigenFlow> {
    if nu_grid.iter().any(|&v| !(v > 0.0)) || nu_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::domain("nu grid must be positive and strictly increasing"));
    }
    let mut lambda = Vec::with_capacity(nu_grid.len());
    let mut neg = Vec::with_capacity(nu_grid.len());
    for &nu in nu_grid {
        let pm = assemble(config, nu)?;
        let values = symmetric_eigenvalues(pm.entries())?;
        lambda.push(values[0]);
        neg.push(values.iter().filter(|&&v| v < 0.0).count());
    }
    let monotone = lambda.windows(2).all(|w| w[1] >= w[0]);
    Ok(EigenFlow { nu_grid: nu_grid.to_vec(), lambda_min: lambda, neg_counts: neg, monotone })
}

/// One row of a truncation study.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationRow {
    pub index: usize,
    pub centers: usize,
    pub nu_gr: f64,
    pub energy: f64,
    /// `E_gr > -nu_ref^2`, when a reference scale was given.
    pub above_reference: Option<bool>,
}

/// Ground states of a nested family of configurations.
pub fn truncation_study<F>(family: F, indices: &[usize], nu_ref: Option<f64>, tol: f64) -> Result<Vec<TruncationRow>>
where
    F: Fn(usize) -> Result<Configuration>,
{
    indices
        .iter()
        .map(|&index| {
            let config = family(index)?;
            let gs = ground_state_auto(&config, tol)?;
            Ok(TruncationRow {
                index,
                centers: config.len(),
                nu_gr: gs.nu_gr,
                energy: gs.energy,
                above_reference: nu_ref.map(|nu| gs.energy > -nu * nu),
            })
        })
        .collect()
}

/// `true` when every energy is at most the previous one.
pub fn is_nonincreasing(rows: &[TruncationRow]) -> bool {
    rows.windows(2).all(|w| w[1].energy <= w[0].energy)
}

fn resolvent_column(config: &Configuration, nu: f64, x: &Point) -> Result<DVector<f64>> {
    let model = config.model();
    let mut g = DVector::zeros(config.len());
    for (i, c) in config.centers().iter().enumerate() {
        let d = distance(model, x, &c.point)?;
        g[i] = free_resolvent_kernel(&ResolventQuery::new(nu, d, *model, *config.constants())?)?;
    }
    Ok(g)
}

/// Point-interaction part of the full resolvent kernel at `E = -nu^2`:
/// `sum_ij G(x, p_i) [Phi^{-1}]_ij G(p_j, y)`.
pub fn resolvent_correction(config: &Configuration, nu: f64, x: &Point, y: &Point) -> Result<f64> {
    let pm = assemble(config, nu)?;
    let values = symmetric_eigenvalues(pm.entries())?;
    let scale = values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    if values.iter().any(|v| v.abs() <= 1e-12 * scale.max(1e-300)) {
        return Err(Error::AtBoundState { nu, energy: -nu * nu });
    }
    let gx = resolvent_column(config, nu, x)?;
    let gy = resolvent_column(config, nu, y)?;
    let w = pm.entries().clone().lu().solve(&gy).ok_or(Error::AtBoundState { nu, energy: -nu * nu })?;
    Ok(gx.dot(&w))
}
