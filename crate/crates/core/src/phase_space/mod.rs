//! Phase-space primitives: source parameters, Wigner functions, the
//! beam-splitter symplectic map and Laguerre utilities.
//!
//! Quadratures are in shot-noise units (vacuum variance 1) and phase-space
//! integrals carry the measure `dx dp / (4π)` per mode.

mod laguerre;
pub mod quadrature;
mod wigner;

pub use laguerre::{laguerre, scaled_laguerre};
pub use wigner::{wigner_fock, wigner_pstmsc, wigner_tmsc};

use nalgebra::Matrix4;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Subtraction orders above this are rejected unless a larger cap is given.
pub const DEFAULT_MAX_SUBTRACTION: u32 = 16;

/// Parameters of the photon-subtracted two-mode squeezed coherent source.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SqueezedSourceParams {
    /// Two-mode squeezing magnitude.
    pub r: f64,
    /// Displacement along x applied to both modes before squeezing.
    pub d: f64,
    /// Transmittance of the subtraction beam splitter.
    pub tau: f64,
    /// Number of photons heralded on the tapped port.
    pub k: u32,
}

impl SqueezedSourceParams {
    pub fn new(r: f64, d: f64, tau: f64, k: u32) -> Result<Self> {
        Self::with_cap(r, d, tau, k, DEFAULT_MAX_SUBTRACTION)
    }

    /// Like [`SqueezedSourceParams::new`] with an explicit subtraction-order cap.
    pub fn with_cap(r: f64, d: f64, tau: f64, k: u32, max_k: u32) -> Result<Self> {
        if !(r.is_finite() && r >= 0.0) {
            return Err(Error::domain(format!("squeezing r must be finite and >= 0, got {r}")));
        }
        if !(d.is_finite() && d >= 0.0) {
            return Err(Error::domain(format!("displacement d must be finite and >= 0, got {d}")));
        }
        if !(0.0..=1.0).contains(&tau) {
            return Err(Error::domain(format!("transmittance tau must lie in [0, 1], got {tau}")));
        }
        if k > max_k {
            return Err(Error::domain(format!("subtraction order {k} exceeds cap {max_k}")));
        }
        Ok(Self { r, d, tau, k })
    }

    /// Source specified by its quadrature variance `V_A = cosh 2r`.
    pub fn from_variance(v_a: f64, d: f64, tau: f64, k: u32) -> Result<Self> {
        if !(v_a.is_finite() && v_a >= 1.0) {
            return Err(Error::domain(format!("variance V_A must be >= 1, got {v_a}")));
        }
        Self::new(v_a.acosh() / 2.0, d, tau, k)
    }

    pub fn mu(&self) -> f64 {
        self.r.cosh()
    }

    pub fn nu(&self) -> f64 {
        self.r.sinh()
    }

    /// `cosh 2r`.
    pub fn variance(&self) -> f64 {
        (2.0 * self.r).cosh()
    }

    /// `μ² - τν²`, bounded below by 1.
    pub fn denominator(&self) -> f64 {
        let (mu, nu) = (self.mu(), self.nu());
        mu * mu - self.tau * nu * nu
    }

    /// `A = ν²(1-τ)/(μ²-τν²)`, the per-photon heralding weight.
    pub fn subtraction_weight(&self) -> f64 {
        let nu = self.nu();
        nu * nu * (1.0 - self.tau) / self.denominator()
    }
}

/// A point `(x1, p1, x2, p2)` of two-mode phase space.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PhasePoint {
    pub x1: f64,
    pub p1: f64,
    pub x2: f64,
    pub p2: f64,
}

impl PhasePoint {
    pub fn new(x1: f64, p1: f64, x2: f64, p2: f64) -> Self {
        Self { x1, p1, x2, p2 }
    }

    pub fn origin() -> Self {
        Self::default()
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.x1, self.p1, self.x2, self.p2]
    }

    pub fn from_array(v: [f64; 4]) -> Self {
        Self::new(v[0], v[1], v[2], v[3])
    }
}

/// Symplectic map of a beam splitter acting on `(x2, p2, x3, p3)`.
///
/// The reflected port picks up the minus sign:
/// `x3' = -√(1-τ) x2 + √τ x3`.
pub fn bs_symplectic(tau: f64) -> Result<Matrix4<f64>> {
    if !(0.0..=1.0).contains(&tau) {
        return Err(Error::domain(format!("transmittance tau must lie in [0, 1], got {tau}")));
    }
    let t = tau.sqrt();
    let s = (1.0 - tau).sqrt();
    #[rustfmt::skip]
    let m = Matrix4::new(
        t,   0.0, s,   0.0,
        0.0, t,   0.0, s,
        -s,  0.0, t,   0.0,
        0.0, -s,  0.0, t,
    );
    Ok(m)
}

/// Two-mode symplectic form in `(x1, p1, x2, p2)` ordering.
pub fn symplectic_form() -> Matrix4<f64> {
    #[rustfmt::skip]
    let omega = Matrix4::new(
        0.0,  1.0, 0.0,  0.0,
        -1.0, 0.0, 0.0,  0.0,
        0.0,  0.0, 0.0,  1.0,
        0.0,  0.0, -1.0, 0.0,
    );
    omega
}
