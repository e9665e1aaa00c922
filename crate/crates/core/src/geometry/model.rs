use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Constants of the generic-manifold heat-kernel bounds.
///
/// `const_c` and `const_d` weight the short-time (`t <= 2 m rho^2 / hbar`)
/// and long-time regimes of the off-diagonal Gaussian bound, `rho` is the
/// injectivity-type radius, `lambda_gap` the bottom of the Laplacian
/// spectrum and `n_star` the largest first-level petal count. `const_a` and
/// `const_b` carry the Cartan-Hadamard Gaussian bound for the same manifold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GenericBounds {
    pub kappa: f64,
    pub const_c: f64,
    pub const_d: f64,
    pub rho: f64,
    pub lambda_gap: f64,
    pub n_star: u32,
    pub const_a: f64,
    pub const_b: f64,
}

impl GenericBounds {
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::domain(msg));
        if !(self.kappa >= 0.0 && self.kappa.is_finite()) {
            return fail(format!("kappa must be >= 0, got {}", self.kappa));
        }
        // C = D = 0 is allowed as the degenerate no-coupling limit.
        if !(self.const_c >= 0.0 && self.const_c.is_finite()) {
            return fail(format!("C must be >= 0, got {}", self.const_c));
        }
        if !(self.const_d >= 0.0 && self.const_d.is_finite()) {
            return fail(format!("D must be >= 0, got {}", self.const_d));
        }
        if !(self.rho > 0.0) {
            return fail(format!("rho must be > 0, got {}", self.rho));
        }
        if !(self.lambda_gap >= 0.0 && self.lambda_gap.is_finite()) {
            return fail(format!("lambda_gap must be >= 0, got {}", self.lambda_gap));
        }
        if self.n_star < 2 {
            return fail(format!("n_star must be >= 2, got {}", self.n_star));
        }
        if !(self.const_a > 0.0 && self.const_a.is_finite()) {
            return fail(format!("A must be > 0, got {}", self.const_a));
        }
        if !(self.const_b > 4.0 && self.const_b.is_finite()) {
            return fail(format!("B must be strictly larger than 4, got {}", self.const_b));
        }
        Ok(())
    }
}

/// Geometric backend.
///
/// `Hyperbolic { kappa }` is the plane of constant sectional curvature
/// `-kappa` in Poincare-disk coordinates. `GenericBounds` carries only the
/// constants of the heat-kernel estimates and supports bound/certificate
/// operations, never exact kernels or matrix assembly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ManifoldModel {
    Flat,
    Hyperbolic { kappa: f64 },
    GenericBounds(GenericBounds),
}

impl ManifoldModel {
    pub fn hyperbolic(kappa: f64) -> Result<Self> {
        let model = ManifoldModel::Hyperbolic { kappa };
        model.validate()?;
        Ok(model)
    }

    pub fn generic(bounds: GenericBounds) -> Result<Self> {
        bounds.validate()?;
        Ok(ManifoldModel::GenericBounds(bounds))
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ManifoldModel::Flat => Ok(()),
            ManifoldModel::Hyperbolic { kappa } => {
                if *kappa > 0.0 && kappa.is_finite() {
                    Ok(())
                } else {
                    Err(Error::domain(format!("hyperbolic model requires kappa > 0, got {kappa}")))
                }
            }
            ManifoldModel::GenericBounds(b) => b.validate(),
        }
    }

    pub fn backend_name(&self) -> &'static str {
        match self {
            ManifoldModel::Flat => "flat",
            ManifoldModel::Hyperbolic { .. } => "hyperbolic",
            ManifoldModel::GenericBounds(_) => "generic",
        }
    }

    /// Curvature scale `kappa` (zero for the flat plane).
    pub fn kappa(&self) -> f64 {
        match self {
            ManifoldModel::Flat => 0.0,
            ManifoldModel::Hyperbolic { kappa } => *kappa,
            ManifoldModel::GenericBounds(b) => b.kappa,
        }
    }

    pub(crate) fn unsupported(&self, op: &'static str) -> Error {
        Error::UnsupportedBackend { op, backend: self.backend_name() }
    }
}
