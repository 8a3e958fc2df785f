//! Reverse-reconciliation key rate under one-mode collective attacks.

use nalgebra::Matrix2;
use serde::{Deserialize, Serialize};

use crate::channel::{noise_breakdown, ChannelParams, NoiseBreakdown};
use crate::error::{Error, Result};
use crate::nongaussian::{pstmsc_covariance, subtraction_probability, TwoModeCM};
use crate::phase_space::SqueezedSourceParams;

/// Symplectic eigenvalues within this distance of 1 are treated as pure.
pub const PURITY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KeyRateResult {
    pub p_ps: f64,
    pub i_ab: f64,
    pub chi_be: f64,
    pub key_rate: f64,
    pub lambda1: f64,
    pub lambda2: f64,
    pub lambda3: f64,
    pub noise: NoiseBreakdown,
}

/// Alice–Bob CM after the equivalent channel: Bob's mode is attenuated by
/// `T` and picks up `chi_tot`, the correlations scale by `√T`.
pub fn effective_cm(source: &TwoModeCM, noise: &NoiseBreakdown) -> TwoModeCM {
    let t = noise.t;
    let st = t.sqrt();
    TwoModeCM {
        vax: source.vax,
        vap: source.vap,
        vbx: t * (source.vbx + noise.chi_tot),
        vbp: t * (source.vbp + noise.chi_tot),
        vcx: st * source.vcx,
        vcp: st * source.vcp,
        mean_x1: source.mean_x1,
        mean_x2: st * source.mean_x2,
    }
}

fn conditional(va: f64, vb: f64, vc: f64) -> Result<f64> {
    let v = va - vc * vc / (vb + 1.0);
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(Error::UnphysicalCm(format!("conditional variance {v} is not positive")))
    }
}

/// Alice's CM conditioned on Bob's heterodyne outcome.
pub fn conditional_cm_after_heterodyne(cm: &TwoModeCM) -> Result<Matrix2<f64>> {
    let vx = conditional(cm.vax, cm.vbx, cm.vcx)?;
    let vp = conditional(cm.vap, cm.vbp, cm.vcp)?;
    Ok(Matrix2::new(vx, 0.0, 0.0, vp))
}

/// Mutual information between Alice's and Bob's heterodyne records, in bits.
pub fn mutual_information(cm: &TwoModeCM) -> Result<f64> {
    let cond = conditional_cm_after_heterodyne(cm)?;
    let ix = 0.5 * ((cm.vax + 1.0) / (cond[(0, 0)] + 1.0)).log2();
    let ip = 0.5 * ((cm.vap + 1.0) / (cond[(1, 1)] + 1.0)).log2();
    Ok(ix + ip)
}

/// The two symplectic eigenvalues `(λ1, λ2)`, `λ1 >= λ2`.
///
/// `λ²` are the eigenvalues of `X·P`, the product of the x and p blocks, so
/// `Δ = tr(XP)` and `det Σ = det X · det P`. The discriminant is formed as
/// `(m11 - m22)² + 4 m12 m21`, which equals `Δ² - 4 det Σ` without the
/// cancellation that ruins nearly pure states.
pub fn symplectic_eigenvalues(cm: &TwoModeCM) -> Result<(f64, f64)> {
    let m11 = cm.vax * cm.vap + cm.vcx * cm.vcp;
    let m22 = cm.vcx * cm.vcp + cm.vbx * cm.vbp;
    let m12 = cm.vax * cm.vcp + cm.vcx * cm.vbp;
    let m21 = cm.vcx * cm.vap + cm.vbx * cm.vcp;
    let det = (cm.vax * cm.vbx - cm.vcx * cm.vcx) * (cm.vap * cm.vbp - cm.vcp * cm.vcp);
    let delta = m11 + m22;
    if !(delta.is_finite() && det.is_finite()) {
        return Err(Error::NumericalDegeneracy("non-finite covariance invariants".into()));
    }
    let mut disc = (m11 - m22) * (m11 - m22) + 4.0 * m12 * m21;
    if disc < 0.0 {
        if disc < -1e-9 * delta.abs().max(1.0).powi(2) {
            return Err(Error::NumericalDegeneracy(format!("negative discriminant {disc:e}")));
        }
        disc = 0.0;
    }
    let l1_sq = 0.5 * (delta + disc.sqrt());
    if l1_sq <= 0.0 {
        return Err(Error::NumericalDegeneracy(format!("Δ = {delta} is not positive")));
    }
    // λ1²λ2² = det Σ; dividing avoids the cancellation in Δ - √disc.
    let l2_sq = (det / l1_sq).max(0.0);
    Ok((l1_sq.sqrt(), l2_sq.sqrt()))
}

/// Von Neumann entropy of a thermal state with mean photon number `x`.
pub fn entropy_g(x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    (x + 1.0) * (x + 1.0).log2() - x * x.log2()
}

fn entropy_of(lambda: f64) -> f64 {
    if lambda < 1.0 + PURITY_TOLERANCE {
        0.0
    } else {
        entropy_g((lambda - 1.0) / 2.0)
    }
}

/// Holevo bound with all three eigenvalues, `(χ_BE, λ1, λ2, λ3)`.
fn holevo_parts(cm: &TwoModeCM) -> Result<(f64, f64, f64, f64)> {
    let (l1, l2) = symplectic_eigenvalues(cm)?;
    let cond = conditional_cm_after_heterodyne(cm)?;
    let l3 = (cond[(0, 0)] * cond[(1, 1)]).sqrt();
    let chi = entropy_of(l1) + entropy_of(l2) - entropy_of(l3);
    Ok((chi.max(0.0), l1, l2, l3))
}

/// Eve's accessible information on Bob's outcomes, in bits.
pub fn holevo_bound(cm: &TwoModeCM) -> Result<f64> {
    holevo_parts(cm).map(|(chi, ..)| chi)
}

/// Full pipeline from source and channel to the heralded key rate.
///
/// The channel's `v_a` must match the source variance `cosh 2r`.
pub fn secret_key_rate(source: &SqueezedSourceParams, channel: &ChannelParams) -> Result<KeyRateResult> {
    let v = source.variance();
    if (v - channel.v_a).abs() > 1e-9 * channel.v_a.abs().max(1.0) {
        return Err(Error::domain(format!(
            "source variance cosh 2r = {v} disagrees with channel V_A = {}",
            channel.v_a
        )));
    }
    let p_ps = subtraction_probability(source);
    let cm = pstmsc_covariance(source)?;
    let noise = noise_breakdown(channel)?;
    let eff = effective_cm(&cm, &noise);
    let i_ab = mutual_information(&eff)?;
    let (chi_be, lambda1, lambda2, lambda3) = holevo_parts(&eff)?;
    let key_rate = p_ps * (channel.beta * i_ab - chi_be);
    Ok(KeyRateResult { p_ps, i_ab, chi_be, key_rate, lambda1, lambda2, lambda3, noise })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::Geometry;

    fn ideal_noise(t: f64, chi_tot: f64) -> NoiseBreakdown {
        NoiseBreakdown {
            t_a: 1.0,
            t_b: 1.0,
            g: (2.0f64).sqrt(),
            t,
            eps_th: 0.0,
            chi_line: chi_tot,
            chi_homo: 0.0,
            chi_tot,
        }
    }

    #[test]
    fn identity_channel_is_noop() {
        let cm = TwoModeCM::tmsv(3.0);
        assert_eq!(effective_cm(&cm, &ideal_noise(1.0, 0.0)), cm);
    }

    #[test]
    fn lossy_channel_substitution() {
        let cm = TwoModeCM::tmsv(1.2f64.cosh());
        let eff = effective_cm(&cm, &ideal_noise(0.5, 1.0));
        assert!((eff.vbx - 0.5 * (1.2f64.cosh() + 1.0)).abs() < 1e-15);
        assert!((eff.vcx - 0.5f64.sqrt() * 1.2f64.sinh()).abs() < 1e-15);
        assert_eq!(eff.vax, cm.vax);
    }

    #[test]
    fn mutual_information_cases() {
        let uncorrelated = TwoModeCM::centered(3.0, 3.0, 2.0, 2.0, 0.0, 0.0);
        assert_eq!(mutual_information(&uncorrelated).unwrap(), 0.0);

        let v = 1.2f64.cosh();
        let s = 1.2f64.sinh();
        let i = mutual_information(&TwoModeCM::tmsv(v)).unwrap();
        let cond = v - s * s / (v + 1.0);
        let want = ((v + 1.0) / (cond + 1.0)).log2();
        assert!((i - want).abs() < 1e-14);

        let cm = TwoModeCM::centered(2.5, 2.5, 1.7, 1.7, 1.1, -1.1);
        let c = conditional_cm_after_heterodyne(&cm).unwrap();
        assert!((c[(0, 0)] - c[(1, 1)]).abs() < 1e-15);

        let bad = TwoModeCM::centered(1.0, 1.0, 1.0, 1.0, 3.0, -3.0);
        assert!(matches!(mutual_information(&bad), Err(Error::UnphysicalCm(_))));
    }

    #[test]
    fn eigenvalue_cases() {
        let (l1, l2) = symplectic_eigenvalues(&TwoModeCM::centered(3.0, 3.0, 3.0, 3.0, 0.0, 0.0)).unwrap();
        assert!((l1 - 3.0).abs() < 1e-12 && (l2 - 3.0).abs() < 1e-12);
        for (v, tol) in [(1.0, 1e-12), (1.5, 1e-12), (50.0, 1e-10), (1e4, 1e-7)] {
            let (l1, l2) = symplectic_eigenvalues(&TwoModeCM::tmsv(v)).unwrap();
            assert!((l1 - 1.0).abs() < tol && (l2 - 1.0).abs() < tol, "V = {v}: {l1} {l2}");
        }
    }

    #[test]
    fn entropy_values() {
        assert_eq!(entropy_g(0.0), 0.0);
        assert_eq!(entropy_g(-1e-13), 0.0);
        assert!((entropy_g(1.0) - 2.0).abs() < 1e-15);
        assert!((entropy_g(0.5) - 1.377_443_751_081_734).abs() < 1e-12);
    }

    #[test]
    fn pure_state_leaks_nothing() {
        let cm = TwoModeCM::tmsv(1.2f64.cosh());
        assert_eq!(holevo_bound(&cm).unwrap(), 0.0);
        let c = conditional_cm_after_heterodyne(&cm).unwrap();
        assert!((c[(0, 0)] * c[(1, 1)]).sqrt() >= 1.0);
    }

    #[test]
    fn holevo_grows_with_excess_noise() {
        let cm = TwoModeCM::tmsv(50.0);
        let mut prev = -1.0;
        for i in 0..8 {
            let eps = 0.01 * i as f64;
            let eff = effective_cm(&cm, &ideal_noise(0.5, 1.0 + eps));
            let chi = holevo_bound(&eff).unwrap();
            assert!(chi > prev);
            prev = chi;
        }
    }

    #[test]
    fn zero_distance_tmsv_rate() {
        let source = SqueezedSourceParams::from_variance(50.0, 0.0, 1.0, 0).unwrap();
        let mut channel = ChannelParams::paper_defaults(Geometry::Asymmetric, 0.0, 50.0);
        channel.eps_a = 0.0;
        channel.eps_b = 0.0;
        let r = secret_key_rate(&source, &channel).unwrap();

        // T = g²/2 = 49/51 and χ_tot = 2/49 at zero length with no excess noise.
        let t: f64 = 49.0 / 51.0;
        let chi = (1.0 - t) / t;
        let s = (50.0f64 * 50.0 - 1.0).sqrt();
        let (va, vb, vc) = (50.0, t * (50.0 + chi), t.sqrt() * s);
        let cond = va - vc * vc / (vb + 1.0);
        let i_ab = ((va + 1.0) / (cond + 1.0)).log2();
        assert!((r.i_ab - i_ab).abs() < 1e-12);
        assert!(r.key_rate > 0.0);
        assert!((r.key_rate - (0.96 * r.i_ab - r.chi_be)).abs() < 1e-12);
    }

    #[test]
    fn variance_mismatch_is_rejected() {
        let source = SqueezedSourceParams::from_variance(40.0, 0.0, 1.0, 0).unwrap();
        let channel = ChannelParams::paper_defaults(Geometry::Asymmetric, 0.0, 50.0);
        assert!(matches!(secret_key_rate(&source, &channel), Err(Error::Domain(_))));
    }
}
