//! Closed-form heralding probability and first/second moments of the
//! k-photon-subtracted two-mode squeezed coherent state.
//!
//! Every Laguerre ratio in the moments has the argument
//! `-d²(μ+ν)²/(4ν²(μ²-τν²))`. It is carried here in homogenized form,
//! `ν^{2n} L_n^α(-c/ν²)` with `c = d²(μ+ν)²/(4(μ²-τν²))`, so that zero
//! squeezing with nonzero displacement stays finite.

use nalgebra::Matrix4;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::keyrate::symplectic_eigenvalues;
use crate::phase_space::{scaled_laguerre, SqueezedSourceParams};

/// Covariance matrix with the sparsity pattern
///
/// ```text
/// | vax  0    vcx  0   |
/// | 0    vap  0    vcp |
/// | vcx  0    vbx  0   |
/// | 0    vcp  0    vbp |
/// ```
///
/// in `(x1, p1, x2, p2)` ordering, plus the two x-means (p-means vanish).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoModeCM {
    pub vax: f64,
    pub vap: f64,
    pub vbx: f64,
    pub vbp: f64,
    pub vcx: f64,
    pub vcp: f64,
    pub mean_x1: f64,
    pub mean_x2: f64,
}

impl TwoModeCM {
    /// Centered CM with no displacement.
    pub fn centered(vax: f64, vap: f64, vbx: f64, vbp: f64, vcx: f64, vcp: f64) -> Self {
        Self { vax, vap, vbx, vbp, vcx, vcp, mean_x1: 0.0, mean_x2: 0.0 }
    }

    /// Two-mode squeezed vacuum with quadrature variance `v`.
    pub fn tmsv(v: f64) -> Self {
        let c = (v * v - 1.0).max(0.0).sqrt();
        Self::centered(v, v, v, v, c, -c)
    }

    pub fn matrix(&self) -> Matrix4<f64> {
        #[rustfmt::skip]
        let m = Matrix4::new(
            self.vax, 0.0,      self.vcx, 0.0,
            0.0,      self.vap, 0.0,      self.vcp,
            self.vcx, 0.0,      self.vbx, 0.0,
            0.0,      self.vcp, 0.0,      self.vbp,
        );
        m
    }

    /// Both symplectic eigenvalues are at least `1 - tol`.
    pub fn is_physical(&self, tol: f64) -> bool {
        match symplectic_eigenvalues(self) {
            Ok((_, l2)) => l2 >= 1.0 - tol,
            Err(_) => false,
        }
    }
}

/// Probability of heralding exactly `k` photons on the tapped port.
///
/// Total on valid parameters. At `r = 0, d = 0` the value is the limit:
/// 1 for `k = 0` and 0 otherwise.
pub fn subtraction_probability(params: &SqueezedSourceParams) -> f64 {
    let (mu, nu, d, tau) = (params.mu(), params.nu(), params.d, params.tau);
    let den = params.denominator();
    let mpn = mu + nu;
    let c = d * d * mpn * mpn / (4.0 * den);
    let k = params.k as i32;
    let prefactor = ((1.0 - tau) / den).powi(k) / den;
    let damping = (-(1.0 - tau) * c).exp();
    let p = prefactor * damping * scaled_laguerre(k, 0, c, nu * nu);
    p.clamp(0.0, 1.0)
}

/// Laguerre-ratio ingredients shared by the moment formulas.
struct Moments {
    mu: f64,
    nu: f64,
    d: f64,
    tau: f64,
    den: f64,
    /// `L^1_{k-1}/L_k` divided by `ν²`
    rho1: f64,
    /// `L^2_{k-2}/L_k` divided by `ν⁴`
    rho2: f64,
}

impl Moments {
    fn new(params: &SqueezedSourceParams) -> Result<Self> {
        if subtraction_probability(params) <= 0.0 {
            return Err(Error::ZeroProbability(format!(
                "k = {} subtraction with tau = {}, r = {}, d = {}",
                params.k, params.tau, params.r, params.d
            )));
        }
        let (mu, nu, d, tau) = (params.mu(), params.nu(), params.d, params.tau);
        let den = params.denominator();
        let c = d * d * (mu + nu) * (mu + nu) / (4.0 * den);
        let w = nu * nu;
        let k = params.k as i32;
        let lk = scaled_laguerre(k, 0, c, w);
        if lk <= 0.0 || !lk.is_finite() {
            return Err(Error::NumericalDegeneracy(format!("Laguerre normalizer {lk} at k = {k}")));
        }
        let rho1 = scaled_laguerre(k - 1, 1, c, w) / lk;
        let rho2 = scaled_laguerre(k - 2, 2, c, w) / lk;
        Ok(Self { mu, nu, d, tau, den, rho1, rho2 })
    }

    fn base(&self) -> f64 {
        (self.mu * self.mu + self.tau * self.nu * self.nu) / self.den
    }

    fn spread(&self) -> f64 {
        self.rho2 - self.rho1 * self.rho1
    }

    fn covariance(&self) -> TwoModeCM {
        let Self { mu, nu, d, tau, den, rho1, .. } = *self;
        let nu2 = nu * nu;
        let mpn2 = (mu + nu) * (mu + nu);
        let st = tau.sqrt();
        let base = self.base();
        let spread = self.spread();

        let vap = base + 2.0 * mu * mu * nu2 * rho1 / den;
        let vax = vap + d * d * mu * mu * nu2 * mpn2 / (den * den) * spread;
        let vbp = base + 2.0 * tau * nu2 * nu2 * rho1 / den;
        let vbx = vbp + tau * d * d * nu2 * nu2 * mpn2 / (den * den) * spread;
        let corr = 2.0 * mu * nu * st / den * (1.0 + nu2 * rho1);
        let vcx = corr + st * d * d * mu * nu * nu2 * mpn2 / (den * den) * spread;
        let vcp = -corr;

        let mean_x1 = d * (mu + tau * nu) / den + d * mu * nu * (mu + nu) * rho1 / den;
        let mean_x2 = st * d * (mu + nu) / den * (1.0 + nu2 * rho1);

        TwoModeCM { vax, vap, vbx, vbp, vcx, vcp, mean_x1, mean_x2 }
    }
}

/// Covariance matrix and means of the normalized k-PSTMSC state.
pub fn pstmsc_covariance(params: &SqueezedSourceParams) -> Result<TwoModeCM> {
    Ok(Moments::new(params)?.covariance())
}

/// Symmetric-ordered moment `⟨x1^i p1^j x2^m p2^n⟩` for total order ≤ 2.
pub fn low_order_moment(params: &SqueezedSourceParams, i: u32, j: u32, m: u32, n: u32) -> Result<f64> {
    let order = i + j + m + n;
    if order > 2 {
        return Err(Error::UnsupportedOrder { order });
    }
    let cm = pstmsc_covariance(params)?;
    let value = match (i, j, m, n) {
        (0, 0, 0, 0) => 1.0,
        (1, 0, 0, 0) => cm.mean_x1,
        (0, 0, 1, 0) => cm.mean_x2,
        (2, 0, 0, 0) => cm.vax + cm.mean_x1 * cm.mean_x1,
        (0, 2, 0, 0) => cm.vap,
        (0, 0, 2, 0) => cm.vbx + cm.mean_x2 * cm.mean_x2,
        (0, 0, 0, 2) => cm.vbp,
        (1, 0, 1, 0) => cm.vcx + cm.mean_x1 * cm.mean_x2,
        (0, 1, 0, 1) => cm.vcp,
        // odd in some p, or an x-p cross term: vanishes by the CM sparsity
        _ => 0.0,
    };
    Ok(value)
}
