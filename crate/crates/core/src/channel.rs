//! Equivalent one-way channel for the MDI geometry.
//!
//! Charlie's Bell measurement and Bob's displacement are folded into a
//! single channel from Alice to Bob with transmittance `T` and input-referred
//! noise `chi_tot`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Placement of the relay between Alice and Bob.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Geometry {
    /// Relay midway, `L_BC = L_AC`.
    Symmetric,
    /// Relay co-located with Bob, `L_BC = 0`.
    Asymmetric,
}

impl Geometry {
    pub fn l_bc_for(self, l_ac: f64) -> f64 {
        match self {
            Geometry::Symmetric => l_ac,
            Geometry::Asymmetric => 0.0,
        }
    }

    /// End-to-end distance between Alice and Bob for a given `L_AC`.
    pub fn total_length(self, l_ac: f64) -> f64 {
        l_ac + self.l_bc_for(l_ac)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelParams {
    pub geometry: Geometry,
    /// Alice to Charlie, km.
    pub l_ac: f64,
    /// Bob to Charlie, km.
    pub l_bc: f64,
    pub loss_db_per_km: f64,
    pub eps_a: f64,
    pub eps_b: f64,
    /// Homodyne efficiency.
    pub eta: f64,
    /// Electronic noise of each homodyne detector.
    pub v_el: f64,
    /// Source quadrature variance `V_A`.
    pub v_a: f64,
    /// Reconciliation efficiency.
    pub beta: f64,
    /// Replaces the noise-minimizing gain when set.
    pub gain_override: Option<f64>,
}

/// Intermediate quantities of the channel model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseBreakdown {
    pub t_a: f64,
    pub t_b: f64,
    pub g: f64,
    pub t: f64,
    pub eps_th: f64,
    pub chi_line: f64,
    pub chi_homo: f64,
    pub chi_tot: f64,
}

impl ChannelParams {
    pub const DEFAULT_LOSS_DB_PER_KM: f64 = 0.2;

    /// Ideal detectors, `eps = 0.002` on both links and `beta = 0.96`.
    pub fn paper_defaults(geometry: Geometry, l_ac: f64, v_a: f64) -> Self {
        Self {
            geometry,
            l_ac,
            l_bc: geometry.l_bc_for(l_ac),
            loss_db_per_km: Self::DEFAULT_LOSS_DB_PER_KM,
            eps_a: 0.002,
            eps_b: 0.002,
            eta: 1.0,
            v_el: 0.0,
            v_a,
            beta: 0.96,
            gain_override: None,
        }
    }

    /// Copy with `L_AC` replaced and `L_BC` kept consistent with the geometry.
    pub fn with_l_ac(&self, l_ac: f64) -> Self {
        Self { l_ac, l_bc: self.geometry.l_bc_for(l_ac), ..*self }
    }

    pub fn validate(&self) -> Result<()> {
        let finite_nonneg = |name: &str, v: f64| {
            if v.is_finite() && v >= 0.0 {
                Ok(())
            } else {
                Err(Error::domain(format!("{name} must be finite and >= 0, got {v}")))
            }
        };
        finite_nonneg("L_AC", self.l_ac)?;
        finite_nonneg("L_BC", self.l_bc)?;
        finite_nonneg("loss_db_per_km", self.loss_db_per_km)?;
        finite_nonneg("eps_A", self.eps_a)?;
        finite_nonneg("eps_B", self.eps_b)?;
        finite_nonneg("v_el", self.v_el)?;
        let want_bc = self.geometry.l_bc_for(self.l_ac);
        if (self.l_bc - want_bc).abs() > 1e-12 * want_bc.max(1.0) {
            return Err(Error::domain(format!(
                "{:?} geometry requires L_BC = {want_bc}, got {}",
                self.geometry, self.l_bc
            )));
        }
        if !(self.eta > 0.0 && self.eta <= 1.0) {
            return Err(Error::domain(format!("detector efficiency eta must lie in (0, 1], got {}", self.eta)));
        }
        if !(self.beta > 0.0 && self.beta <= 1.0) {
            return Err(Error::domain(format!("reconciliation efficiency beta must lie in (0, 1], got {}", self.beta)));
        }
        if !(self.v_a.is_finite() && self.v_a > 1.0) {
            return Err(Error::domain(format!("source variance V_A must exceed 1, got {}", self.v_a)));
        }
        if let Some(g) = self.gain_override {
            if !(g.is_finite() && g > 0.0) {
                return Err(Error::domain(format!("gain override must be positive, got {g}")));
            }
        }
        Ok(())
    }

    pub fn t_a(&self) -> Result<f64> {
        transmittance(self.l_ac, self.loss_db_per_km)
    }

    pub fn t_b(&self) -> Result<f64> {
        transmittance(self.l_bc, self.loss_db_per_km)
    }
}

/// Fiber transmittance `10^(-loss·L/10)`.
pub fn transmittance(length_km: f64, loss_db_per_km: f64) -> Result<f64> {
    if !(length_km.is_finite() && length_km >= 0.0) {
        return Err(Error::domain(format!("length must be finite and >= 0, got {length_km}")));
    }
    Ok(10f64.powf(-loss_db_per_km * length_km / 10.0))
}

/// Bob's displacement gain that minimizes the equivalent thermal noise.
pub fn gain(v_a: f64, t_b: f64) -> Result<f64> {
    if !(v_a.is_finite() && v_a >= 1.0) {
        return Err(Error::domain(format!("source variance V_A must be >= 1, got {v_a}")));
    }
    if !(t_b > 0.0 && t_b <= 1.0) {
        return Err(Error::domain(format!("transmittance T_B must lie in (0, 1], got {t_b}")));
    }
    Ok((2.0 * (v_a - 1.0) / (t_b * (v_a + 1.0))).sqrt())
}

/// Thermal excess noise of the equivalent one-way channel.
pub fn thermal_excess(params: &ChannelParams) -> Result<f64> {
    let t_a = params.t_a()?;
    let t_b = params.t_b()?;
    if t_a <= 0.0 {
        return Err(Error::domain("transmittance T_A underflowed to zero"));
    }
    Ok((t_b / t_a) * (params.eps_b - 2.0) + params.eps_a + 2.0 / t_a)
}

pub fn noise_breakdown(params: &ChannelParams) -> Result<NoiseBreakdown> {
    params.validate()?;
    let t_a = params.t_a()?;
    let t_b = params.t_b()?;
    let g = match params.gain_override {
        Some(g) => g,
        None => gain(params.v_a, t_b)?,
    };
    let t = t_a * g * g / 2.0;
    if t.is_nan() || t <= 0.0 {
        return Err(Error::domain(format!("normalized transmittance T must be positive, got {t}")));
    }
    let eps_th = thermal_excess(params)?;
    let chi_line = (1.0 - t) / t + eps_th;
    let chi_homo = (params.v_el + 1.0 - params.eta) / params.eta;
    let chi_tot = chi_line + 2.0 * chi_homo / t_a;
    Ok(NoiseBreakdown { t_a, t_b, g, t, eps_th, chi_line, chi_homo, chi_tot })
}
