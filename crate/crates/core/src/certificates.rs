//! Norm bounds on the off-diagonal part of `Phi`, the Neumann invertibility
//! gate and the `nu_*` certificates with `E_gr > -nu_*^2`.

use std::f64::consts::{PI, SQRT_2};

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::geometry::{Configuration, GenericBounds, ManifoldModel, SEPARATION_SLACK};
use crate::kernels::hyperbolic_exponent;
use crate::principal::{assemble, split, MatrixSplit};
use crate::special::bounds::{k0_upper_half_order, k1_upper};
use crate::special::{bessel_k0, bessel_k0_scaled, bessel_k1};
use crate::spectral::{ground_state_auto, DEFAULT_TOL};
use crate::units::PhysicalConstants;

/// Relative width at which certificate searches stop.
pub const CERTIFICATE_TOL: f64 = 1e-10;

/// `sqrt(sup_i sum_j |O_ij| * sup_j sum_i |O_ij|)`, diagonal ignored.
pub fn holmgren_norm(offdiag: &DMatrix<f64>) -> f64 {
    let n = offdiag.nrows();
    let mut rows = vec![0.0f64; n];
    let mut cols = vec![0.0f64; offdiag.ncols()];
    for i in 0..n {
        for j in 0..offdiag.ncols() {
            if i != j {
                let v = offdiag[(i, j)].abs();
                rows[i] += v;
                cols[j] += v;
            }
        }
    }
    let r = rows.into_iter().fold(0.0, f64::max);
    let c = cols.into_iter().fold(0.0, f64::max);
    if r == c {
        r
    } else {
        (r * c).sqrt()
    }
}

/// `max_i (1/D_ii) * holmgren(O)`. A value below one proves `Phi` is
/// positive definite. Returns `+inf` when some `D_ii <= 0`.
pub fn neumann_gate(split: &MatrixSplit) -> f64 {
    if split.diag.iter().any(|&d| !(d > 0.0)) {
        return f64::INFINITY;
    }
    let inv = split.diag.iter().map(|d| 1.0 / d).fold(0.0, f64::max);
    inv * holmgren_norm(&split.offdiag)
}

/// Uniform lower bound on `Phi_ii`:
/// `(m/pi hbar^2) ln((1+b)/(1+a))` for `kappa > 0`, `(m/pi hbar^2) ln(nu/mu)` at `kappa = 0`.
pub fn diagonal_lower_bound(kappa: f64, nu: f64, mu: f64, constants: &PhysicalConstants) -> Result<f64> {
    Ok(constants.resolvent_prefactor() * log_ratio(kappa, nu, mu, constants)?)
}

fn log_ratio(kappa: f64, nu: f64, mu: f64, constants: &PhysicalConstants) -> Result<f64> {
    if !(kappa >= 0.0 && kappa.is_finite()) {
        return Err(Error::domain(format!("kappa must be >= 0, got {kappa}")));
    }
    if !(nu > 0.0 && mu > 0.0) {
        return Err(Error::domain(format!("nu and mu must be positive, got {nu}, {mu}")));
    }
    if kappa == 0.0 {
        return Ok((nu / mu).ln());
    }
    let a = hyperbolic_exponent(mu, kappa, constants);
    let b = hyperbolic_exponent(nu, kappa, constants);
    Ok(((1.0 + b) / (1.0 + a)).ln())
}

fn check_ab(const_a: f64, const_b: f64) -> Result<()> {
    if !(const_a > 0.0 && const_a.is_finite()) {
        return Err(Error::domain(format!("A must be positive, got {const_a}")));
    }
    if !(const_b > 4.0 && const_b.is_finite()) {
        return Err(Error::domain(format!("B must be strictly larger than 4, got {const_b}")));
    }
    Ok(())
}

fn check_scale(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} must be positive, got {v}")))
    }
}

/// `sqrt(B hbar^2 kappa / 2m)`, below which the row-sum series diverges.
pub fn critical_nu(kappa: f64, const_b: f64, constants: &PhysicalConstants) -> f64 {
    (const_b * kappa / constants.two_m_over_hbar2()).sqrt()
}

/// Row-sum bound: the series and its closed-form majorant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RowSumBound {
    pub series: f64,
    pub closed_form: f64,
}

/// Bound on `sup_i sum_{j != i} |O_ij|` from the Gaussian heat-kernel bound
/// and the relaxed packing counts.
pub fn offdiag_rowsum_bound_ch(
    kappa: f64,
    d_min: f64,
    nu: f64,
    const_a: f64,
    const_b: f64,
    constants: &PhysicalConstants,
) -> Result<RowSumBound> {
    check_ab(const_a, const_b)?;
    check_scale("d_min", d_min)?;
    check_scale("nu", nu)?;
    let nu_c = critical_nu(kappa, const_b, constants);
    if !(nu > nu_c) {
        return Err(Error::Threshold { nu, critical_nu: nu_c });
    }
    let k = constants.two_m_over_hbar2();
    let sech = 1.0 / (0.25 * kappa.sqrt() * d_min).cosh();
    let closed_form = const_a * const_b / (d_min * d_min) * sech / (nu * (nu - nu_c));

    let s = 2.0 * (k * d_min * d_min / const_b).sqrt();
    let rate = 0.5 * s * (nu - nu_c);
    let tail_pref = 4.0 * const_a * constants.mass / (constants.hbar * constants.hbar * s * nu) * sech;
    let pref = const_a * constants.resolvent_prefactor();
    let mut series = 0.0;
    let growth = kappa.sqrt() * d_min;
    for l in 1..=1_000_000u32 {
        // relaxed count 2 pi l sech e^{growth l} times K0, exponents combined
        let lf = l as f64;
        let x = s * lf * nu;
        let term = pref * 2.0 * PI * lf * sech * (growth * lf - x).exp() * bessel_k0_scaled(x)?;
        series += term;
        let tail = tail_pref * (-(l as f64 + 1.0) * rate).exp() / -(-rate).exp_m1();
        if tail < 1e-12 * series.max(f64::MIN_POSITIVE) {
            break;
        }
    }
    Ok(RowSumBound { series, closed_form })
}

/// Which family of bounds a certificate came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    CartanHadamard,
    FlatLimit,
    Generic,
}

impl Regime {
    pub fn name(&self) -> &'static str {
        match self {
            Regime::CartanHadamard => "cartan_hadamard",
            Regime::FlatLimit => "flat_limit",
            Regime::Generic => "generic",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CertificateInputs {
    CartanHadamard { kappa: f64, d_min: f64, mu_star: f64, const_a: f64, const_b: f64 },
    Generic { params: GenericBounds, d_min: f64, mu_star: f64 },
}

impl CertificateInputs {
    pub fn d_min(&self) -> f64 {
        match *self {
            CertificateInputs::CartanHadamard { d_min, .. } | CertificateInputs::Generic { d_min, .. } => d_min,
        }
    }

    pub fn mu_star(&self) -> f64 {
        match *self {
            CertificateInputs::CartanHadamard { mu_star, .. } | CertificateInputs::Generic { mu_star, .. } => mu_star,
        }
    }

    pub fn kappa(&self) -> f64 {
        match *self {
            CertificateInputs::CartanHadamard { kappa, .. } => kappa,
            CertificateInputs::Generic { params, .. } => params.kappa,
        }
    }
}

/// Certified scale: every configuration compatible with the inputs has
/// `E_gr > -nu_star^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Certificate {
    pub nu_star: f64,
    pub energy_lower_bound: f64,
    pub regime: Regime,
    pub inputs: CertificateInputs,
    pub constants: PhysicalConstants,
    /// Generic regime only: the packing validity condition holds at `nu_star`.
    pub validity: Option<bool>,
}

impl Certificate {
    /// `RHS - LHS` of the defining inequality at `nu`.
    pub fn margin_at(&self, nu: f64) -> Result<f64> {
        match self.inputs {
            CertificateInputs::CartanHadamard { kappa, d_min, mu_star, const_a, const_b } => {
                ch_gap(kappa, d_min, mu_star, const_a, const_b, &self.constants, nu)
            }
            CertificateInputs::Generic { params, d_min, mu_star } => {
                generic_gap(&params, d_min, mu_star, &self.constants, nu)
            }
        }
    }

    /// Recomputed margin at `nu_star`; strictly positive for a valid certificate.
    pub fn margin(&self) -> Result<f64> {
        self.margin_at(self.nu_star)
    }
}

fn ch_gap(
    kappa: f64,
    d_min: f64,
    mu_star: f64,
    const_a: f64,
    const_b: f64,
    constants: &PhysicalConstants,
    nu: f64,
) -> Result<f64> {
    let nu_c = critical_nu(kappa, const_b, constants);
    if nu <= nu_c {
        return Ok(f64::NEG_INFINITY);
    }
    let sech = 1.0 / (0.25 * kappa.sqrt() * d_min).cosh();
    let lhs = 2.0 * PI * const_a * const_b / (constants.two_m_over_hbar2() * d_min * d_min) * sech / (nu * (nu - nu_c));
    Ok(log_ratio(kappa, nu, mu_star, constants)? - lhs)
}

/// Smallest `nu >= start` with `gap(nu) > 0` for an increasing `gap`; the
/// returned point always satisfies the inequality.
fn first_positive<G: Fn(f64) -> Result<f64>>(gap: G, start: f64) -> Result<f64> {
    if gap(start)? > 0.0 {
        return Ok(start);
    }
    let mut lo = start;
    let mut hi = if start > 0.0 { 2.0 * start } else { 1.0 };
    let mut doublings = 0;
    while !(gap(hi)? > 0.0) {
        lo = hi;
        hi *= 2.0;
        doublings += 1;
        if doublings > 1100 {
            return Err(Error::domain("certificate search did not find a satisfying nu"));
        }
    }
    while hi - lo > CERTIFICATE_TOL * hi {
        let mid = 0.5 * (lo + hi);
        if gap(mid)? > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Certificate from the Gaussian heat-kernel bound with constants `A`, `B`
/// on a Cartan-Hadamard surface with curvature bounded below by `-kappa`.
/// `kappa = 0` is the flat limit.
pub fn certificate_ch(
    kappa: f64,
    d_min: f64,
    mu_star: f64,
    const_a: f64,
    const_b: f64,
    constants: &PhysicalConstants,
) -> Result<Certificate> {
    check_ab(const_a, const_b)?;
    check_scale("d_min", d_min)?;
    check_scale("mu_star", mu_star)?;
    if !(kappa >= 0.0 && kappa.is_finite()) {
        return Err(Error::domain(format!("kappa must be >= 0, got {kappa}")));
    }
    let start = mu_star.max(critical_nu(kappa, const_b, constants));
    let nu_star = first_positive(|nu| ch_gap(kappa, d_min, mu_star, const_a, const_b, constants, nu), start)?;
    Ok(Certificate {
        nu_star,
        energy_lower_bound: -nu_star * nu_star,
        regime: if kappa == 0.0 { Regime::FlatLimit } else { Regime::CartanHadamard },
        inputs: CertificateInputs::CartanHadamard { kappa, d_min, mu_star, const_a, const_b },
        constants: *constants,
        validity: None,
    })
}

/// Level-`l` term of the off-diagonal bound on a generic surface (exact
/// `t`-integrals of the generic heat-kernel bound, `lambda_gap` set to zero).
pub fn offdiag_term_generic(
    l: u32,
    params: &GenericBounds,
    d_min: f64,
    nu: f64,
    constants: &PhysicalConstants,
) -> Result<f64> {
    let (x, w, c_pref, d_pref) = generic_term_parts(l, params, d_min, nu, constants)?;
    if params.const_c == 0.0 && params.const_d == 0.0 {
        return Ok(0.0);
    }
    let k0 = bessel_k0(x)?;
    let k1 = bessel_k1(x)?;
    Ok(c_pref * ((1.0 + w) * k0 + 12.0 * x * k1) + d_pref * (x * (1.0 + w) * k1 + w * k0))
}

/// Same term with `K0 <= sqrt(pi/2x) e^-x` and `K1 <= (1 + 1/x) e^-x`.
pub fn offdiag_term_generic_relaxed(
    l: u32,
    params: &GenericBounds,
    d_min: f64,
    nu: f64,
    constants: &PhysicalConstants,
) -> Result<f64> {
    let (x, w, c_pref, d_pref) = generic_term_parts(l, params, d_min, nu, constants)?;
    let k0 = k0_upper_half_order(x);
    let k1 = k1_upper(x);
    Ok(c_pref * ((1.0 + w) * k0 + 12.0 * x * k1) + d_pref * (x * (1.0 + w) * k1 + w * k0))
}

fn generic_term_parts(
    l: u32,
    params: &GenericBounds,
    d_min: f64,
    nu: f64,
    constants: &PhysicalConstants,
) -> Result<(f64, f64, f64, f64)> {
    params.validate()?;
    check_scale("d_min", d_min)?;
    check_scale("nu", nu)?;
    if l == 0 {
        return Err(Error::domain("level must be >= 1"));
    }
    let x = (constants.two_m_over_hbar2() * d_min * d_min * nu * nu).sqrt() * l as f64;
    let w = 4.0 * x * x;
    let c_pref = params.const_c * constants.resolvent_prefactor();
    let d_pref = params.const_d / (4.0 * PI * params.rho * params.rho * nu * nu);
    Ok((x, w, c_pref, d_pref))
}

/// Norm bound on `O` for a generic surface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenericNormBound {
    /// Four-term closed form (sum over levels replaced by an integral).
    pub closed_form: f64,
    /// `sum_{l=1}^{20} n_star^l` times the Bessel-relaxed level terms.
    pub series: f64,
}

/// Smallest `nu` with `2m d^2 nu^2 / hbar^2 >= ln^2 n_star`.
pub fn generic_validity_nu(params: &GenericBounds, d_min: f64, constants: &PhysicalConstants) -> f64 {
    (params.n_star as f64).ln() / (constants.two_m_over_hbar2().sqrt() * d_min)
}

/// Closed-form bound divided by `m / hbar^2`, `+inf` at the validity edge.
fn generic_closed_form_scaled(params: &GenericBounds, d_min: f64, nu: f64, constants: &PhysicalConstants) -> f64 {
    let (c, d) = (params.const_c, params.const_d);
    if c == 0.0 && d == 0.0 {
        return 0.0;
    }
    let k = constants.two_m_over_hbar2();
    let xbar = (k * d_min * d_min * nu * nu).sqrt();
    let ln_n = (params.n_star as f64).ln();
    let gap = xbar - ln_n;
    if gap <= 0.0 {
        return f64::INFINITY;
    }
    let r = 1.0 / (k * params.rho * params.rho * nu * nu);
    let t1 = c / SQRT_2 * xbar.powf(-0.5) / gap.sqrt();
    let t2 = (12.0 * c + d / (2.0 * PI) * r) * (2.0 * xbar - ln_n) / (gap * gap);
    let t3 = 3.0 / SQRT_2 * xbar.powf(1.5) * (c + 0.5 * d * r) / gap.powf(2.5);
    let t4 = 4.0 * d / PI * (k * d_min * d_min) / (k * params.rho * params.rho) * (4.0 * xbar - ln_n) / gap.powi(4);
    t1 + t2 + t3 + t4
}

pub fn offdiag_norm_bound_generic(
    params: &GenericBounds,
    d_min: f64,
    nu: f64,
    constants: &PhysicalConstants,
) -> Result<GenericNormBound> {
    params.validate()?;
    check_scale("d_min", d_min)?;
    check_scale("nu", nu)?;
    let required = generic_validity_nu(params, d_min, constants);
    if nu < required {
        return Err(Error::Validity { nu, required_nu: required });
    }
    let m_over_h2 = constants.mass / (constants.hbar * constants.hbar);
    let closed_form = m_over_h2 * generic_closed_form_scaled(params, d_min, nu, constants);
    let mut series = 0.0;
    for l in 1..=20u32 {
        series +=
            (params.n_star as f64).powi(l as i32) * offdiag_term_generic_relaxed(l, params, d_min, nu, constants)?;
    }
    Ok(GenericNormBound { closed_form, series })
}

fn generic_gap(
    params: &GenericBounds,
    d_min: f64,
    mu_star: f64,
    constants: &PhysicalConstants,
    nu: f64,
) -> Result<f64> {
    if nu < generic_validity_nu(params, d_min, constants) {
        return Ok(f64::NEG_INFINITY);
    }
    let lhs = generic_closed_form_scaled(params, d_min, nu, constants);
    Ok(log_ratio(params.kappa, nu, mu_star, constants)? / PI - lhs)
}

/// Certificate from the generic heat-kernel bound and the replica count
/// `n(l) <= n_star^l`.
pub fn certificate_generic(
    params: &GenericBounds,
    d_min: f64,
    mu_star: f64,
    constants: &PhysicalConstants,
) -> Result<Certificate> {
    params.validate()?;
    check_scale("d_min", d_min)?;
    check_scale("mu_star", mu_star)?;
    let start = mu_star.max(generic_validity_nu(params, d_min, constants));
    let gap = |nu: f64| generic_gap(params, d_min, mu_star, constants, nu);
    // at nu = mu_star the right-hand side vanishes, so the answer lies strictly above
    let nu_star = if gap(start)? > 0.0 { start } else { first_positive(gap, start)? };
    let validity = nu_star >= generic_validity_nu(params, d_min, constants);
    Ok(Certificate {
        nu_star,
        energy_lower_bound: -nu_star * nu_star,
        regime: Regime::Generic,
        inputs: CertificateInputs::Generic { params: *params, d_min, mu_star },
        constants: *constants,
        validity: Some(validity),
    })
}

/// Outcome of checking a certificate against a concrete configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// `E_gr > -nu_*^2` and the certificate inequality holds.
    Pass,
    /// `E_gr > -nu_*^2` but the certificate inequality fails at `nu_*`.
    Inconclusive,
    /// `E_gr <= -nu_*^2`.
    Fail,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerificationReport {
    pub verdict: Verdict,
    pub nu_star: f64,
    pub energy: f64,
    pub nu_gr: f64,
    /// `E_gr + nu_*^2`.
    pub margin: f64,
    /// Recomputed `RHS - LHS` of the certificate inequality.
    pub inequality_margin: f64,
    pub neumann_gate: f64,
    pub centers: usize,
}

fn check_compatible(config: &Configuration, cert: &Certificate) -> Result<()> {
    let incompatible = |msg: String| Err(Error::IncompatibleCertificate(msg));
    if let CertificateInputs::Generic { .. } = cert.inputs {
        return incompatible("generic-bound certificates carry no exact backend to verify against".into());
    }
    match *config.model() {
        ManifoldModel::Flat => {}
        ManifoldModel::Hyperbolic { kappa } => {
            if cert.inputs.kappa() < kappa {
                return incompatible(format!(
                    "certificate curvature scale {} is below the configuration's {kappa}",
                    cert.inputs.kappa()
                ));
            }
        }
        ManifoldModel::GenericBounds(_) => return incompatible("generic backend has no exact spectrum".into()),
    }
    if cert.constants != *config.constants() {
        return incompatible(format!(
            "units differ: certificate {} vs configuration {}",
            cert.constants.describe(),
            config.constants().describe()
        ));
    }
    if config.len() >= 2 {
        let actual = config.min_pairwise_distance()?;
        if cert.inputs.d_min() > actual * (1.0 + SEPARATION_SLACK) {
            return incompatible(format!(
                "certificate d_min {} exceeds the configuration's minimum distance {actual}",
                cert.inputs.d_min()
            ));
        }
    }
    if cert.inputs.mu_star() < config.mu_star() * (1.0 - 1e-15) {
        return incompatible(format!(
            "certificate mu_star {} is below the configuration's largest mu {}",
            cert.inputs.mu_star(),
            config.mu_star()
        ));
    }
    Ok(())
}

/// Computes `E_gr` for the configuration and checks `E_gr > -nu_*^2`.
pub fn verify_certificate(config: &Configuration, cert: &Certificate) -> Result<VerificationReport> {
    check_compatible(config, cert)?;
    let gs = ground_state_auto(config, DEFAULT_TOL)?;
    let gate = neumann_gate(&split(&assemble(config, cert.nu_star)?));
    let inequality_margin = cert.margin()?;
    let margin = gs.energy + cert.nu_star * cert.nu_star;
    let verdict = if margin <= 0.0 {
        Verdict::Fail
    } else if inequality_margin > 0.0 {
        Verdict::Pass
    } else {
        Verdict::Inconclusive
    };
    Ok(VerificationReport {
        verdict,
        nu_star: cert.nu_star,
        energy: gs.energy,
        nu_gr: gs.nu_gr,
        margin,
        inequality_margin,
        neumann_gate: gate,
        centers: config.len(),
    })
}
