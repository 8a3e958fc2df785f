//! Gauss–Hermite product quadrature over two-mode phase space.
//!
//! The integration variable is whitened against a reference Gaussian
//! (mean, covariance). Every Wigner function in this crate is a Gaussian
//! times a polynomial, so once the reference matches the envelope the rule
//! is exact at finite order; the node count is doubled until successive
//! estimates agree.

use nalgebra::{Matrix4, Vector4};

use crate::error::{Error, Result};

/// Nodes and weights for `∫ e^{-x²} f(x) dx`.
pub fn gauss_hermite(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let pim4 = std::f64::consts::PI.powf(-0.25);
    let nf = n as f64;
    let mut z = 0.0_f64;
    for i in 0..n.div_ceil(2) {
        z = match i {
            0 => (2.0 * nf + 1.0).sqrt() - 1.85575 * (2.0 * nf + 1.0).powf(-1.0 / 6.0),
            1 => z - 1.14 * nf.powf(0.426) / z,
            2 => 1.86 * z - 0.86 * x[0],
            3 => 1.91 * z - 0.91 * x[1],
            _ => 2.0 * z - x[i - 2],
        };
        let mut pp = 0.0;
        for _ in 0..100 {
            let mut p1 = pim4;
            let mut p2 = 0.0;
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = z * (2.0 / (jf + 1.0)).sqrt() * p2 - (jf / (jf + 1.0)).sqrt() * p3;
            }
            pp = (2.0 * nf).sqrt() * p2;
            let step = p1 / pp;
            z -= step;
            if step.abs() < 3e-14 {
                break;
            }
        }
        x[i] = z;
        x[n - 1 - i] = -z;
        w[i] = 2.0 / (pp * pp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

/// `∫ f(ξ) d⁴ξ` with the product rule of `nodes` points per axis, whitened
/// against `N(mean, cov)`.
pub fn integrate_with_nodes<F>(f: &F, mean: &[f64; 4], cov: &Matrix4<f64>, nodes: usize) -> Result<f64>
where
    F: Fn([f64; 4]) -> f64,
{
    let chol = cov
        .cholesky()
        .ok_or_else(|| Error::NumericalDegeneracy("reference covariance is not positive definite".into()))?;
    let l = chol.l();
    let det = l.diagonal().iter().product::<f64>().abs();
    let (u, w) = gauss_hermite(nodes);
    // weight · e^{u²}, folded per axis to avoid overflow
    let scaled: Vec<f64> = u.iter().zip(&w).map(|(ui, wi)| wi * (ui * ui).exp()).collect();
    let s2 = std::f64::consts::SQRT_2;
    let m = Vector4::from_column_slice(mean);

    let mut total = 0.0;
    for a in 0..nodes {
        for b in 0..nodes {
            let wab = scaled[a] * scaled[b];
            for c in 0..nodes {
                let wabc = wab * scaled[c];
                let mut partial = 0.0;
                for e in 0..nodes {
                    let z = Vector4::new(u[a], u[b], u[c], u[e]) * s2;
                    let xi = m + l * z;
                    partial += scaled[e] * f([xi[0], xi[1], xi[2], xi[3]]);
                }
                total += wabc * partial;
            }
        }
    }
    Ok(total * det * 4.0)
}

/// Phase-space integral `∫ f dx1dp1/(4π) dx2dp2/(4π)`, refined until two
/// successive node counts agree to `tol` (relative to `max(1, |I|)`).
pub fn integrate_phase_space<F>(f: F, mean: &[f64; 4], cov: &Matrix4<f64>, tol: f64) -> Result<f64>
where
    F: Fn([f64; 4]) -> f64,
{
    let measure = 1.0 / (16.0 * std::f64::consts::PI * std::f64::consts::PI);
    let mut prev = integrate_with_nodes(&f, mean, cov, 12)? * measure;
    for &n in &[20usize, 28, 40, 56] {
        let cur = integrate_with_nodes(&f, mean, cov, n)? * measure;
        if (cur - prev).abs() <= tol * cur.abs().max(1.0) {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::NumericalDegeneracy(format!("phase-space quadrature did not converge to {tol:e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hermite_rule_integrates_moments() {
        let (x, w) = gauss_hermite(20);
        let sqrt_pi = std::f64::consts::PI.sqrt();
        let m0: f64 = w.iter().sum();
        let m2: f64 = x.iter().zip(&w).map(|(x, w)| w * x * x).sum();
        let m4: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(4)).sum();
        assert!((m0 - sqrt_pi).abs() < 1e-13);
        assert!((m2 - sqrt_pi / 2.0).abs() < 1e-13);
        assert!((m4 - 3.0 * sqrt_pi / 4.0).abs() < 1e-12);
    }

    #[test]
    fn correlated_gaussian_normalizes() {
        // Gaussian with CM `cov` in SNU: W = 4/sqrt(det cov) exp(-½ ξᵀ cov⁻¹ ξ)
        let cov = Matrix4::new(
            2.0_f64, 0.0, 1.5, 0.0, //
            0.0, 2.0, 0.0, -1.5, //
            1.5, 0.0, 2.0, 0.0, //
            0.0, -1.5, 0.0, 2.0,
        );
        let inv = cov.try_inverse().unwrap();
        let norm = 4.0 / cov.determinant().sqrt();
        let f = |v: [f64; 4]| {
            let x = Vector4::from_column_slice(&v);
            norm * (-0.5 * (x.transpose() * inv * x)[0]).exp()
        };
        let total = integrate_phase_space(f, &[0.0; 4], &cov, 1e-10).unwrap();
        assert!((total - 1.0).abs() < 1e-10);
    }
}
