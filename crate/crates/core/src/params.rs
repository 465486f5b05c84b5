//! Physical constants of the model.

use crate::error::{GlsfError, Result};

/// Heat supply. The reduced problem assumes it vanishes; it is kept only as a
/// named constant so that no code path silently depends on a nonzero value.
pub const HEAT_SUPPLY_R: f64 = 0.0;

/// Model constants with the derived couplings
/// `beta = kappa * gamma - 1 / kappa` and `eta = 2 k0 / (k0 + 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams {
    pub gamma: f64,
    pub kappa: f64,
    pub mu: f64,
    pub c0: f64,
    pub k0: f64,
    pub beta: f64,
    pub eta: f64,
}

pub fn derive_params(gamma: f64, kappa: f64, mu: f64, c0: f64, k0: f64) -> Result<PhysicalParams> {
    for (field, value) in [
        ("gamma", gamma),
        ("kappa", kappa),
        ("mu", mu),
        ("c0", c0),
        ("k0", k0),
    ] {
        if !(value.is_finite() && value > 0.0) {
            return Err(GlsfError::Param { field, value });
        }
    }
    Ok(PhysicalParams {
        gamma,
        kappa,
        mu,
        c0,
        k0,
        beta: kappa * gamma - 1.0 / kappa,
        eta: 2.0 * k0 / (k0 + 1.0),
    })
}

impl PhysicalParams {
    /// `gamma = kappa = mu = c0 = k0 = 1`.
    pub fn unit() -> Self {
        derive_params(1.0, 1.0, 1.0, 1.0, 1.0).expect("unit parameters are valid")
    }

    /// Weight inside the second auxiliary functional.
    pub fn epsilon(&self) -> f64 {
        let c = self.c0;
        let third = ((1.0 + c * c).sqrt() - 1.0) / (2.0 * c);
        0.5 * (self.gamma / 4.0).min(1.0 / 3.0).min(third)
    }
}
