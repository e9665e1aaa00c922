mod common;

use std::f64::consts::PI;

use approx::assert_relative_eq;
use common::{digamma_oracle, k0_scaled_oracle, log_time_integral, log_uniform, rng, simpson};
use point_interactions::certificates::diagonal_lower_bound;
use point_interactions::geometry::{hex_lattice, Center};
use point_interactions::kernels::{heat_kernel, KernelQuery};
use point_interactions::principal::*;
use point_interactions::{Configuration, Error, ManifoldModel, PhysicalConstants, Point};

const NAT: PhysicalConstants = PhysicalConstants::NATURAL;

fn kernel_diag(model: ManifoldModel, t: f64, c: PhysicalConstants) -> f64 {
    heat_kernel(&KernelQuery::new(t, 0.0, model, c).unwrap()).unwrap()
}

fn kernel_at(model: ManifoldModel, t: f64, d: f64, c: PhysicalConstants) -> f64 {
    heat_kernel(&KernelQuery::new(t, d, model, c).unwrap()).unwrap()
}

/// `int_0^inf (dt/hbar)(exp(-mu^2 t/hbar) - exp(-nu^2 t/hbar)) K_t(p, p)`.
fn diagonal_oracle(model: ManifoldModel, nu: f64, mu: f64, c: PhysicalConstants) -> f64 {
    let slow = nu.min(mu).powi(2);
    let top = (90.0 * c.hbar / slow).ln();
    log_time_integral(
        |t| {
            let w = (-mu * mu * t / c.hbar).exp() - (-nu * nu * t / c.hbar).exp();
            w * kernel_diag(model, t, c) / c.hbar
        },
        -30.0,
        top,
        1e-11,
    )
}

/// `E_1(x) = int_0^inf exp(-x e^u) du`.
fn exp_integral_e1(x: f64) -> f64 {
    simpson(|u: f64| (-x * u.exp()).exp(), 0.0, (800.0 / x).ln().max(1.0), 1e-13, 256)
}

#[test]
fn flat_entries_match_time_integrals() {
    let mut r = rng(31);
    let c = PhysicalConstants::new(1.3, 0.8).unwrap();
    for k in 0..50 {
        let consts = if k % 2 == 0 { NAT } else { c };
        let nu = log_uniform(&mut r, 0.3, 4.0);
        let mu = log_uniform(&mut r, 0.3, 4.0);
        let d = log_uniform(&mut r, 0.1, 3.0);
        let diag = phi_diagonal(&ManifoldModel::Flat, nu, mu, &consts).unwrap();
        let expected = consts.mass / (2.0 * PI * consts.hbar * consts.hbar) * (nu * nu / (mu * mu)).ln();
        assert_relative_eq!(diag, expected, max_relative = 1e-13, epsilon = 1e-15);
        assert_relative_eq!(
            diag,
            diagonal_oracle(ManifoldModel::Flat, nu, mu, consts),
            max_relative = 1e-8,
            epsilon = 1e-12
        );

        let off = phi_offdiagonal(&ManifoldModel::Flat, nu, d, &consts).unwrap();
        let oracle = -log_time_integral(
            |t| (-nu * nu * t / consts.hbar).exp() * kernel_at(ManifoldModel::Flat, t, d, consts) / consts.hbar,
            -30.0,
            (90.0 * consts.hbar / (nu * nu)).ln(),
            1e-11,
        );
        assert_relative_eq!(off, oracle, max_relative = 1e-8);
    }
}

#[test]
fn hyperbolic_diagonal_matches_digamma_and_time_integral() {
    // kappa = 4, mu = 1, nu = sqrt(3): a = sqrt 2, b = 2
    let model = ManifoldModel::hyperbolic(4.0).unwrap();
    let v = phi_diagonal(&model, 3f64.sqrt(), 1.0, &NAT).unwrap();
    let psi = (digamma_oracle(1.5) - digamma_oracle(0.5 * (1.0 + 2f64.sqrt()))) / (2.0 * PI);
    assert_relative_eq!(v, psi, max_relative = 1e-10);
    for (kappa, nu, mu) in [(1.0, 2.0, 1.0), (0.5, 0.7, 1.2), (4.0, 3.0, 0.5)] {
        let model = ManifoldModel::hyperbolic(kappa).unwrap();
        let v = phi_diagonal(&model, nu, mu, &NAT).unwrap();
        assert_relative_eq!(v, diagonal_oracle(model, nu, mu, NAT), max_relative = 1e-8);
    }
}

#[test]
fn hyperbolic_diagonal_dominates_log_bound() {
    let mut r = rng(32);
    for _ in 0..300 {
        let kappa = log_uniform(&mut r, 0.01, 10.0);
        let mu = log_uniform(&mut r, 0.1, 5.0);
        let nu = mu * log_uniform(&mut r, 1.0001, 20.0);
        let model = ManifoldModel::hyperbolic(kappa).unwrap();
        let exact = phi_diagonal(&model, nu, mu, &NAT).unwrap();
        let bound = diagonal_lower_bound(kappa, nu, mu, &NAT).unwrap();
        assert!(exact >= bound * (1.0 - 1e-12), "kappa {kappa} nu {nu} mu {mu}");
    }
}

#[test]
fn hyperbolic_diagonal_has_flat_limit() {
    let model = ManifoldModel::hyperbolic(1e-8).unwrap();
    for (nu, mu) in [(2.0, 1.0), (0.5, 1.0), (3.0, 0.7)] {
        let h = phi_diagonal(&model, nu, mu, &NAT).unwrap();
        let f = phi_diagonal(&ManifoldModel::Flat, nu, mu, &NAT).unwrap();
        assert_relative_eq!(h, f, max_relative = 1e-5);
    }
}

#[test]
fn entries_are_monotone_in_nu() {
    for model in [ManifoldModel::Flat, ManifoldModel::hyperbolic(1.0).unwrap()] {
        let mut prev_diag = f64::NEG_INFINITY;
        let mut prev_off = f64::INFINITY;
        for k in 1..60 {
            let nu = 0.1 * k as f64;
            let d = phi_diagonal(&model, nu, 1.0, &NAT).unwrap();
            let o = phi_offdiagonal(&model, nu, 1.0, &NAT).unwrap();
            assert!(d > prev_diag);
            assert!(o < 0.0 && o.abs() < prev_off);
            prev_diag = d;
            prev_off = o.abs();
        }
    }
    let h = phi_offdiagonal(&ManifoldModel::hyperbolic(1.0).unwrap(), 1.0, 1.0, &NAT).unwrap();
    let f = phi_offdiagonal(&ManifoldModel::Flat, 1.0, 1.0, &NAT).unwrap();
    assert!(h.abs() < f.abs());
    assert_relative_eq!(f, -k0_scaled_oracle(1.0) * (-1.0f64).exp() / (2.0 * PI), max_relative = 1e-12);
    assert_eq!(phi_offdiagonal(&ManifoldModel::Flat, 1.0, 0.0, &NAT), Err(Error::Divergence));
}

#[test]
fn assembly_examples() {
    let single = Configuration::uniform(ManifoldModel::Flat, NAT, 1.0, &[Point::ORIGIN], 1.5).unwrap();
    let pm = assemble(&single, 1.5).unwrap();
    assert_eq!(pm.entries().nrows(), 1);
    assert_eq!(pm.entries()[(0, 0)], 0.0);
    let s = split(&pm);
    assert_eq!(s.offdiag[(0, 0)], 0.0);

    let pair =
        Configuration::uniform(ManifoldModel::Flat, NAT, 1.0, &[Point::ORIGIN, Point::new(1.0, 0.0)], 1.0).unwrap();
    let pm = assemble(&pair, 2.0).unwrap();
    let m = pm.entries();
    let diag = 2f64.ln() / (2.0 * PI);
    let off = -k0_scaled_oracle(2.0) * (-2.0f64).exp() / (2.0 * PI);
    assert_relative_eq!(m[(0, 0)], diag, max_relative = 1e-14);
    assert_relative_eq!(m[(1, 1)], diag, max_relative = 1e-14);
    assert_relative_eq!(m[(0, 1)], off, max_relative = 1e-12);
    assert_eq!(m[(0, 1)], m[(1, 0)]);
    let s = split(&pm);
    assert_eq!(s.diag.as_slice(), &[m[(0, 0)], m[(1, 1)]]);
    assert_eq!(&s.reassemble(), m);
}

#[test]
fn assembly_is_symmetric_and_permutation_covariant() {
    for model in [ManifoldModel::Flat, ManifoldModel::hyperbolic(0.7).unwrap()] {
        let base = hex_lattice(0.8, 2, 1.0, NAT).unwrap();
        let mut centers: Vec<Center> = base.centers().to_vec();
        if let ManifoldModel::Hyperbolic { kappa } = model {
            for c in &mut centers {
                let r = c.point.x.hypot(c.point.y);
                let scale = if r == 0.0 { 0.0 } else { (0.5 * kappa.sqrt() * r).tanh() / r };
                c.point = Point::new(c.point.x * scale, c.point.y * scale);
            }
        }
        for (i, c) in centers.iter_mut().enumerate() {
            c.mu = 0.5 + 0.1 * i as f64;
        }
        let config = Configuration::new(model, NAT, 0.5, centers.clone()).unwrap();
        let pm = assemble(&config, 1.7).unwrap();
        let m = pm.entries();
        let n = m.nrows();
        for i in 0..n {
            for j in 0..n {
                assert!((m[(i, j)] - m[(j, i)]).abs() <= 1e-14);
                if i != j {
                    assert!(m[(i, j)] < 0.0);
                }
            }
        }
        let perm: Vec<usize> = (0..n).map(|k| (7 * k + 3) % n).collect();
        let permuted = config.select(&perm).unwrap();
        let pp = assemble(&permuted, 1.7).unwrap();
        for a in 0..n {
            for b in 0..n {
                assert!(
                    (pp.entries()[(a, b)] - m[(perm[a], perm[b])]).abs()
                        <= 1e-14 * m[(perm[a], perm[b])].abs().max(1.0)
                );
            }
        }
    }
}

#[test]
fn generic_backend_cannot_be_assembled() {
    let g = point_interactions::GenericBounds {
        kappa: 0.0,
        const_c: 1.0,
        const_d: 1.0,
        rho: 1.0,
        lambda_gap: 0.0,
        n_star: 6,
        const_a: 2.0,
        const_b: 5.0,
    };
    let model = ManifoldModel::GenericBounds(g);
    assert!(matches!(phi_diagonal(&model, 1.0, 1.0, &NAT), Err(Error::UnsupportedBackend { .. })));
    assert!(phi_offdiagonal(&model, 1.0, 1.0, &NAT).is_err());
    assert!(regularized_coupling(&model, 0.01, 1.0, &NAT).is_err());
}

#[test]
fn flat_coupling_matches_exponential_integral() {
    for (eps, mu) in [(1e-1, 1.0), (1e-3, 1.0), (1e-2, 2.0), (1.0, 1.0)] {
        let x: f64 = mu * mu * eps;
        let oracle = 4.0 * PI / (x.exp() * exp_integral_e1(x));
        let lam = regularized_coupling(&ManifoldModel::Flat, eps, mu, &NAT).unwrap();
        assert_relative_eq!(lam, oracle, max_relative = 1e-9);
    }
    assert!(regularized_coupling(&ManifoldModel::Flat, 0.0, 1.0, &NAT).is_err());
    assert!(regularized_coupling(&ManifoldModel::Flat, -1.0, 1.0, &NAT).is_err());
}

#[test]
fn coupling_vanishes_logarithmically() {
    let mut prev = f64::INFINITY;
    let mut prev_scaled_gap = f64::INFINITY;
    for k in 1..=8 {
        let eps = 10f64.powi(-k);
        let lam = regularized_coupling(&ManifoldModel::Flat, eps, 1.0, &NAT).unwrap();
        assert!(lam > 0.0 && lam < prev);
        prev = lam;
        // lambda ln(1/eps) -> 4 pi (hbar^2 / m units: 2 pi hbar^2/m)
        let gap = (lam * (1.0 / eps).ln() - 4.0 * PI).abs();
        assert!(gap < prev_scaled_gap);
        prev_scaled_gap = gap;
    }
    assert!(prev_scaled_gap < 0.6);
    let model = ManifoldModel::hyperbolic(1.0).unwrap();
    let a = regularized_coupling(&model, 1e-2, 1.0, &NAT).unwrap();
    let b = regularized_coupling(&model, 1e-3, 1.0, &NAT).unwrap();
    assert!(b < a && b > 0.0);
}

#[test]
fn regularized_diagonal_converges() {
    for model in [ManifoldModel::Flat, ManifoldModel::hyperbolic(1.0).unwrap()] {
        let exact = phi_diagonal(&model, 2.0, 1.0, &NAT).unwrap();
        let mut prev = f64::INFINITY;
        for eps in [1e-2, 1e-3, 1e-4] {
            let reg = regularized_phi_diagonal(&model, eps, 2.0, 1.0, &NAT).unwrap();
            let gap = (reg - exact).abs();
            assert!(gap < prev, "eps {eps}: {gap} vs {prev}");
            prev = gap;
        }
        assert_eq!(regularized_phi_diagonal(&model, 1e-3, 1.0, 1.0, &NAT).unwrap(), 0.0);
        let up = regularized_phi_diagonal(&model, 1e-3, 2.0, 1.0, &NAT).unwrap();
        let down = regularized_phi_diagonal(&model, 1e-3, 1.0, 2.0, &NAT).unwrap();
        assert_relative_eq!(up, -down, max_relative = 1e-12);
    }
}

#[test]
fn regularized_diagonal_extrapolates_to_the_limit() {
    // fit R(eps) = L + a eps ln eps + b eps + c eps^2 ln eps through four points
    let model = ManifoldModel::Flat;
    let eps = [1e-2, 1e-3, 1e-4, 1e-5];
    let mut rows = Vec::new();
    for &e in &eps {
        let r = regularized_phi_diagonal(&model, e, 2.0, 1.0, &NAT).unwrap();
        rows.push(vec![1.0, e * e.ln(), e, e * e * e.ln(), r]);
    }
    // Gaussian elimination on the 4x5 augmented system
    for col in 0..4 {
        let piv = (col..4).max_by(|&a, &b| rows[a][col].abs().total_cmp(&rows[b][col].abs())).unwrap();
        rows.swap(col, piv);
        for r in 0..4 {
            if r != col {
                let f = rows[r][col] / rows[col][col];
                for k in col..5 {
                    rows[r][k] -= f * rows[col][k];
                }
            }
        }
    }
    let limit = rows[0][4] / rows[0][0];
    let exact = phi_diagonal(&model, 2.0, 1.0, &NAT).unwrap();
    assert!((limit - exact).abs() < 1e-6, "{limit} vs {exact}");
}
