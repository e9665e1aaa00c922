use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Planck constant and particle mass carried through every formula.
///
/// The default is the natural-unit convention `hbar = 1`, `mass = 1/2`, in
/// which `hbar^2 / 2m = 1` and energies are plain inverse squared lengths.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhysicalConstants {
    pub hbar: f64,
    pub mass: f64,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::NATURAL
    }
}

impl PhysicalConstants {
    pub const NATURAL: PhysicalConstants = PhysicalConstants { hbar: 1.0, mass: 0.5 };

    pub fn new(hbar: f64, mass: f64) -> Result<Self> {
        if !(hbar > 0.0 && hbar.is_finite()) {
            return Err(Error::domain(format!("hbar must be positive, got {hbar}")));
        }
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(Error::domain(format!("mass must be positive, got {mass}")));
        }
        Ok(Self { hbar, mass })
    }

    /// Diffusion coefficient `hbar / 2m` of the heat equation.
    pub fn diffusion(&self) -> f64 {
        self.hbar / (2.0 * self.mass)
    }

    /// `2m / hbar^2`, converts energies to inverse squared lengths.
    pub fn two_m_over_hbar2(&self) -> f64 {
        2.0 * self.mass / (self.hbar * self.hbar)
    }

    /// `m / (pi hbar^2)`, the prefactor of every resolvent entry in two dimensions.
    pub fn resolvent_prefactor(&self) -> f64 {
        self.mass / (std::f64::consts::PI * self.hbar * self.hbar)
    }

    /// Human-readable tag echoed into every output header.
    pub fn describe(&self) -> String {
        format!("hbar={} mass={}", self.hbar, self.mass)
    }
}
