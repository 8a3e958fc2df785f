use super::{laguerre, scaled_laguerre, PhasePoint, SqueezedSourceParams};
use crate::error::{Error, Result};
use crate::nongaussian::subtraction_probability;

/// Wigner function of the two-mode squeezed coherent state.
///
/// Normalized to one under `dx1 dp1/(4π) · dx2 dp2/(4π)`. The subtraction
/// fields `tau` and `k` of `params` are ignored.
pub fn wigner_tmsc(pt: &PhasePoint, params: &SqueezedSourceParams) -> f64 {
    let (mu, nu, d) = (params.mu(), params.nu(), params.d);
    let PhasePoint { x1, p1, x2, p2 } = *pt;
    let exponent = -d * d - 0.5 * (mu * mu + nu * nu) * (x1 * x1 + p1 * p1 + x2 * x2 + p2 * p2)
        + 2.0 * mu * nu * (x1 * x2 - p1 * p2)
        + d * (mu - nu) * (x1 + x2);
    4.0 * exponent.exp()
}

/// Single-mode Wigner function of the Fock state `|n⟩`.
pub fn wigner_fock(x: f64, p: f64, n: u32) -> f64 {
    let rho2 = x * x + p * p;
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    2.0 * sign * (-0.5 * rho2).exp() * laguerre(n as i32, 0, rho2)
}

/// Normalized Wigner function of the k-photon-subtracted TMSC state.
pub fn wigner_pstmsc(pt: &PhasePoint, params: &SqueezedSourceParams) -> Result<f64> {
    let prob = subtraction_probability(params);
    if prob <= 0.0 {
        return Err(Error::ZeroProbability(format!(
            "k = {} subtraction with tau = {}, r = {}, d = {}",
            params.k, params.tau, params.r, params.d
        )));
    }
    Ok(unnormalized_pstmsc(pt, params) / prob)
}

/// Heralded (unnormalized) Wigner function; integrates to the subtraction
/// probability.
pub(crate) fn unnormalized_pstmsc(pt: &PhasePoint, params: &SqueezedSourceParams) -> f64 {
    let (mu, nu, d, tau) = (params.mu(), params.nu(), params.d, params.tau);
    let den = params.denominator();
    let st = tau.sqrt();
    let PhasePoint { x1, p1, x2, p2 } = *pt;

    // ξ12 = ν²√τ (x2 + i p2) - μν (x1 - i p1) - d(μ-ν)/2
    let xi_re = nu * nu * st * x2 - mu * nu * x1 - 0.5 * d * (mu - nu);
    let xi_im = nu * nu * st * p2 + mu * nu * p1;
    let xi2 = xi_re * xi_re + xi_im * xi_im;

    let exponent = -d * d
        - 0.5 * (mu * mu + nu * nu) * (x1 * x1 + p1 * p1)
        - 0.5 * (mu * mu - (1.0 - 2.0 * tau) * nu * nu) * (x2 * x2 + p2 * p2)
        + 2.0 * mu * nu * st * (x1 * x2 - p1 * p2)
        + d * (mu - nu) * (x1 + st * x2)
        + (1.0 - tau) / den * xi2;
    let envelope = 4.0 / den * exponent.exp();

    // (-A)^k L_k(|ξ|²/(ν² D)) = (-(1-τ)/D)^k · ν^{2k} L_k(|ξ|²/(ν² D))
    let k = params.k as i32;
    let weight = (-(1.0 - tau) / den).powi(k);
    envelope * weight * scaled_laguerre(k, 0, -xi2 / den, nu * nu)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tmsc_peaks() {
        let vac = SqueezedSourceParams::new(0.0, 0.0, 1.0, 0).unwrap();
        assert!((wigner_tmsc(&PhasePoint::origin(), &vac) - 4.0).abs() < 1e-15);
        let coh = SqueezedSourceParams::new(0.0, 1.0, 1.0, 0).unwrap();
        let at_mean = PhasePoint::new(1.0, 0.0, 1.0, 0.0);
        assert!((wigner_tmsc(&at_mean, &coh) - 4.0).abs() < 1e-14);
    }

    #[test]
    fn fock_values_at_origin() {
        assert!((wigner_fock(0.0, 0.0, 0) - 2.0).abs() < 1e-15);
        assert!((wigner_fock(0.0, 0.0, 1) + 2.0).abs() < 1e-15);
        assert!((wigner_fock(0.0, 0.0, 4) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn pstmsc_collapses_to_tmsc() {
        let p = SqueezedSourceParams::new(0.8, 1.3, 1.0, 0).unwrap();
        for &(x1, p1, x2, p2) in &[(0.0, 0.0, 0.0, 0.0), (1.1, -0.4, 0.9, 0.3), (-2.0, 1.0, 0.5, -0.7)] {
            let pt = PhasePoint::new(x1, p1, x2, p2);
            let a = wigner_pstmsc(&pt, &p).unwrap();
            let b = wigner_tmsc(&pt, &p);
            assert!((a - b).abs() < 1e-12 * b.abs().max(1.0));
        }
    }

    #[test]
    fn zero_probability_is_an_error() {
        let p = SqueezedSourceParams::new(0.5, 1.0, 1.0, 1).unwrap();
        assert!(matches!(wigner_pstmsc(&PhasePoint::origin(), &p), Err(Error::ZeroProbability(_))));
        let p = SqueezedSourceParams::new(0.0, 0.0, 0.5, 2).unwrap();
        assert!(wigner_pstmsc(&PhasePoint::origin(), &p).is_err());
    }

    #[test]
    fn zero_squeezing_displaced_source_is_finite() {
        // r = 0, d > 0: a coherent state tapped by the splitter still heralds photons.
        let p = SqueezedSourceParams::new(0.0, 1.5, 0.6, 1).unwrap();
        let w = wigner_pstmsc(&PhasePoint::new(1.5, 0.0, 0.9, 0.0), &p).unwrap();
        assert!(w.is_finite() && w > 0.0);
    }
}
