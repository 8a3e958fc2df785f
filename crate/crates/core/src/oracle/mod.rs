//! Truncated Fock-space model of the source, used as ground truth for the
//! closed forms.
//!
//! The state is built by brute force: coherent amplitudes on both modes, a
//! numerically exponentiated two-mode squeeze generator, a beam-splitter
//! unitary onto a vacuum ancilla and a projection of the ancilla on `|k⟩`.
//! No identity from the phase-space derivation is reused here.

mod check;
mod wigner;

pub use check::{oracle_check, OracleCheckReport, OracleCheckRow, ORACLE_TOLERANCE};
pub use wigner::{fock_wigner, hermite_wigner_fock};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::nongaussian::TwoModeCM;

/// Levels added above the cutoff while exponentiating generators.
const PADDING: usize = 10;
/// Population allowed above level `N - 5`.
pub const LEAKAGE_LIMIT: f64 = 1e-8;

/// Two-mode amplitudes `ψ[n1][n2]` for `n1, n2 <= truncation`.
#[derive(Debug, Clone, PartialEq)]
pub struct FockTwoModeState {
    pub amplitudes: DMatrix<Complex64>,
    pub truncation: usize,
}

impl FockTwoModeState {
    pub fn vacuum(truncation: usize) -> Self {
        let mut amplitudes = DMatrix::zeros(truncation + 1, truncation + 1);
        amplitudes[(0, 0)] = Complex64::new(1.0, 0.0);
        Self { amplitudes, truncation }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Population with either photon number above `N - 5`.
    pub fn leakage(&self) -> f64 {
        tail_population(&self.amplitudes, self.truncation.saturating_sub(5))
    }

    fn normalized(mut self) -> Self {
        let n = self.norm_sqr().sqrt();
        self.amplitudes /= Complex64::new(n, 0.0);
        self
    }
}

fn tail_population(psi: &DMatrix<Complex64>, level: usize) -> f64 {
    let mut tail = 0.0;
    for j in 0..psi.ncols() {
        for i in 0..psi.nrows() {
            if i > level || j > level {
                tail += psi[(i, j)].norm_sqr();
            }
        }
    }
    tail
}

/// Cutoff that keeps leakage below [`LEAKAGE_LIMIT`] for `r <= 1`, `d <= 2`.
///
/// The squeezed thermal tail decays like `tanh(r)^{2n}`, which needs more
/// room than the displacement alone at `r = 1`.
pub fn suggested_truncation(r: f64, d: f64) -> usize {
    (10.0 + 40.0 * r + 20.0 * d).ceil() as usize
}

fn coherent_amplitudes(alpha: f64, levels: usize) -> Vec<f64> {
    let mut c = Vec::with_capacity(levels);
    let mut cur = (-0.5 * alpha * alpha).exp();
    for n in 0..levels {
        c.push(cur);
        cur *= alpha / ((n + 1) as f64).sqrt();
    }
    c
}

/// `S₁₂(r) D₁(d) D₂(d) |00⟩` with coherent amplitude `d/2` per mode.
pub fn build_tmsc_fock(r: f64, d: f64, truncation: usize) -> Result<FockTwoModeState> {
    if !(r.is_finite() && r >= 0.0 && d.is_finite() && d >= 0.0) {
        return Err(Error::domain(format!("need finite r, d >= 0, got r = {r}, d = {d}")));
    }
    let m = truncation + 1 + PADDING;
    let coh = coherent_amplitudes(d / 2.0, m);

    // r(a1†a2† - a1a2) conserves n1 - n2; exponentiate each diagonal strip.
    let mut psi = DMatrix::<f64>::zeros(m, m);
    for delta in 0..m {
        for swap in [false, true] {
            if swap && delta == 0 {
                continue;
            }
            let len = m - delta;
            let mut gen = DMatrix::<f64>::zeros(len, len);
            for j in 0..len - 1 {
                let v = r * (((j + delta + 1) * (j + 1)) as f64).sqrt();
                gen[(j + 1, j)] = v;
                gen[(j, j + 1)] = -v;
            }
            let u = gen.exp();
            let idx = |j: usize| if swap { (j, j + delta) } else { (j + delta, j) };
            let input: Vec<f64> = (0..len)
                .map(|j| {
                    let (a, b) = idx(j);
                    coh[a] * coh[b]
                })
                .collect();
            for i in 0..len {
                let mut acc = 0.0;
                for (j, x) in input.iter().enumerate() {
                    acc += u[(i, j)] * x;
                }
                let (a, b) = idx(i);
                psi[(a, b)] = acc;
            }
        }
    }

    let psi_c = psi.map(|x| Complex64::new(x, 0.0));
    let leakage = tail_population(&psi_c, truncation.saturating_sub(5));
    if leakage > LEAKAGE_LIMIT {
        return Err(Error::TruncationInsufficient { truncation, leakage });
    }
    let cropped = psi_c.view((0, 0), (truncation + 1, truncation + 1)).into_owned();
    Ok(FockTwoModeState { amplitudes: cropped, truncation }.normalized())
}

/// Unitary of the beam splitter on the block `n2 + n3 = total`, in the
/// basis `|total - j, j⟩`.
fn bs_block(theta: f64, total: usize) -> DMatrix<f64> {
    let len = total + 1;
    let mut gen = DMatrix::<f64>::zeros(len, len);
    // θ(a2†a3 - a2a3†): |n2, n3⟩ → √((n2+1)n3)|n2+1, n3-1⟩ - √(n2(n3+1))|n2-1, n3+1⟩
    for j in 1..len {
        let n2 = (total - j) as f64;
        let n3 = j as f64;
        let v = theta * ((n2 + 1.0) * n3).sqrt();
        gen[(j - 1, j)] = v;
        gen[(j, j - 1)] = -v;
    }
    gen.exp()
}

/// Three-mode amplitudes `ψ[n1][n2][n3]` after mixing mode 2 with a vacuum
/// ancilla, flattened as `(n1 * L + n2) * L + n3`.
fn mix_with_ancilla(state: &FockTwoModeState, tau: f64) -> Vec<Complex64> {
    let l = state.truncation + 1;
    let theta = tau.sqrt().clamp(-1.0, 1.0).acos();
    let mut out = vec![Complex64::new(0.0, 0.0); l * l * l];
    for n in 0..l {
        let block = bs_block(theta, n);
        for n1 in 0..l {
            let a = state.amplitudes[(n1, n)];
            if a == Complex64::new(0.0, 0.0) {
                continue;
            }
            for j in 0..=n {
                out[(n1 * l + (n - j)) * l + j] += a * block[(j, 0)];
            }
        }
    }
    out
}

/// Mix mode 2 on a beam splitter of transmittance `tau`, detect `k` photons
/// on the ancilla and return the normalized heralded state with its
/// probability.
pub fn apply_bs_and_project(state: &FockTwoModeState, tau: f64, k: u32) -> Result<(FockTwoModeState, f64)> {
    if !(0.0..=1.0).contains(&tau) {
        return Err(Error::domain(format!("transmittance tau must lie in [0, 1], got {tau}")));
    }
    let l = state.truncation + 1;
    let k = k as usize;
    if k >= l {
        return Err(Error::TruncationInsufficient { truncation: state.truncation, leakage: 1.0 });
    }
    let mixed = mix_with_ancilla(state, tau);
    let mut amplitudes = DMatrix::<Complex64>::zeros(l, l);
    for n1 in 0..l {
        for n2 in 0..l {
            amplitudes[(n1, n2)] = mixed[(n1 * l + n2) * l + k];
        }
    }
    let projected = FockTwoModeState { amplitudes, truncation: state.truncation };
    let prob = projected.norm_sqr();
    if prob < 1e-300 {
        return Err(Error::ZeroProbability(format!("oracle heralding probability {prob:e} for k = {k}")));
    }
    Ok((projected.normalized(), prob))
}

fn ladder(l: usize) -> DMatrix<Complex64> {
    let mut a = DMatrix::zeros(l, l);
    for n in 1..l {
        a[(n - 1, n)] = Complex64::new((n as f64).sqrt(), 0.0);
    }
    a
}

/// `(x, p)` with `x = a + a†`, `p = i(a† - a)`.
fn quadratures(l: usize) -> (DMatrix<Complex64>, DMatrix<Complex64>) {
    let a = ladder(l);
    let ad = a.adjoint();
    let x = &a + &ad;
    let p = (&ad - &a) * Complex64::new(0.0, 1.0);
    (x, p)
}

/// Symmetrized `x^i p^j`: the mean over all distinct orderings.
fn symmetrized(x: &DMatrix<Complex64>, p: &DMatrix<Complex64>, i: u32, j: u32) -> DMatrix<Complex64> {
    let l = x.nrows();
    let total = (i + j) as usize;
    let mut sum = DMatrix::<Complex64>::zeros(l, l);
    let mut count = 0usize;
    for mask in 0u32..(1 << total) {
        if mask.count_ones() != j {
            continue;
        }
        let mut prod = DMatrix::<Complex64>::identity(l, l);
        for bit in 0..total {
            prod = if mask & (1 << bit) != 0 { prod * p } else { prod * x };
        }
        sum += prod;
        count += 1;
    }
    sum / Complex64::new(count as f64, 0.0)
}

/// Symmetrized moment `⟨x1^i p1^j x2^m p2^n⟩` up to total order 4.
pub fn fock_moment(state: &FockTwoModeState, i: u32, j: u32, m: u32, n: u32) -> Result<f64> {
    let order = i + j + m + n;
    if order > 4 {
        return Err(Error::UnsupportedOrder { order });
    }
    let l = state.truncation + 1;
    let (x, p) = quadratures(l);
    let o1 = symmetrized(&x, &p, i, j);
    let o2 = symmetrized(&x, &p, m, n);
    let psi = &state.amplitudes;
    let applied = &o1 * psi * o2.transpose();
    let value: Complex64 = psi.iter().zip(applied.iter()).map(|(a, b)| a.conj() * b).sum();
    if value.im.abs() > 1e-10 * value.re.abs().max(1.0) {
        return Err(Error::NumericalDegeneracy(format!("moment has imaginary part {:e}", value.im)));
    }
    Ok(value.re)
}

/// Heralded state for the given source, with its probability.
pub fn oracle_state(r: f64, d: f64, tau: f64, k: u32, truncation: usize) -> Result<(FockTwoModeState, f64)> {
    let source = build_tmsc_fock(r, d, truncation)?;
    apply_bs_and_project(&source, tau, k)
}

/// Centered CM and means of the heralded state, from Fock-space moments.
pub fn oracle_covariance(r: f64, d: f64, tau: f64, k: u32, truncation: usize) -> Result<TwoModeCM> {
    let (state, _) = oracle_state(r, d, tau, k, truncation)?;
    moments_to_cm(&state)
}

pub(crate) fn moments_to_cm(state: &FockTwoModeState) -> Result<TwoModeCM> {
    let mom = |i, j, m, n| fock_moment(state, i, j, m, n);
    let mean_x1 = mom(1, 0, 0, 0)?;
    let mean_x2 = mom(0, 0, 1, 0)?;
    Ok(TwoModeCM {
        vax: mom(2, 0, 0, 0)? - mean_x1 * mean_x1,
        vap: mom(0, 2, 0, 0)?,
        vbx: mom(0, 0, 2, 0)? - mean_x2 * mean_x2,
        vbp: mom(0, 0, 0, 2)?,
        vcx: mom(1, 0, 1, 0)? - mean_x1 * mean_x2,
        vcp: mom(0, 1, 0, 1)?,
        mean_x1,
        mean_x2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vacuum_source() {
        let s = build_tmsc_fock(0.0, 0.0, 5).unwrap();
        assert!((s.amplitudes[(0, 0)].re - 1.0).abs() < 1e-15);
        assert!((s.norm_sqr() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn squeezed_vacuum_schmidt_form() {
        let r: f64 = 0.5;
        let s = build_tmsc_fock(r, 0.0, 25).unwrap();
        for n in 0..20 {
            let want = r.tanh().powi(n as i32) / r.cosh();
            assert!((s.amplitudes[(n, n)].re - want).abs() < 1e-12, "n = {n}");
            if n > 0 {
                assert!(s.amplitudes[(n, n - 1)].norm() < 1e-14);
            }
        }
    }

    #[test]
    fn truncation_too_small_is_reported() {
        assert!(matches!(build_tmsc_fock(1.0, 2.0, 12), Err(Error::TruncationInsufficient { truncation: 12, .. })));
    }

    #[test]
    fn beam_splitter_preserves_norm() {
        let s = build_tmsc_fock(0.5, 1.0, 30).unwrap();
        for tau in [0.0, 0.3, 0.8, 1.0] {
            let mixed = mix_with_ancilla(&s, tau);
            let norm: f64 = mixed.iter().map(|a| a.norm_sqr()).sum();
            assert!((norm - s.norm_sqr()).abs() < 1e-10);
        }
    }

    #[test]
    fn transparent_splitter_limits() {
        let s = build_tmsc_fock(0.5, 1.0, 30).unwrap();
        let (out, p) = apply_bs_and_project(&s, 1.0, 0).unwrap();
        assert!((p - 1.0).abs() < 1e-12);
        assert!((&out.amplitudes - &s.amplitudes).norm() < 1e-12);
        assert!(matches!(apply_bs_and_project(&s, 1.0, 1), Err(Error::ZeroProbability(_))));
    }

    #[test]
    fn splitter_sign_on_first_moments() {
        // Coherent input on mode 2 only: the ancilla picks up -√(1-τ)·x2.
        let (tau, d) = (0.6_f64, 1.4_f64);
        let s = build_tmsc_fock(0.0, d, 30).unwrap();
        let mixed = mix_with_ancilla(&s, tau);
        let l = s.truncation + 1;
        let alpha = d / 2.0;
        // ⟨a3⟩ = Σ √n3 ψ*(n1,n2,n3-1) ψ(n1,n2,n3)
        let mut a3 = Complex64::new(0.0, 0.0);
        for n1 in 0..l {
            for n2 in 0..l {
                for n3 in 1..l {
                    a3 += mixed[(n1 * l + n2) * l + n3 - 1].conj() * mixed[(n1 * l + n2) * l + n3] * (n3 as f64).sqrt();
                }
            }
        }
        assert!((a3.re + (1.0 - tau).sqrt() * alpha).abs() < 1e-10);
    }

    #[test]
    fn vacuum_and_tmsv_moments() {
        let vac = FockTwoModeState::vacuum(10);
        assert!((fock_moment(&vac, 2, 0, 0, 0).unwrap() - 1.0).abs() < 1e-14);
        assert!((fock_moment(&vac, 0, 0, 0, 2).unwrap() - 1.0).abs() < 1e-14);
        let tmsv = build_tmsc_fock(0.5, 0.0, 30).unwrap();
        assert!((fock_moment(&tmsv, 1, 0, 1, 0).unwrap() - 1f64.sinh()).abs() < 1e-9);
        assert!(matches!(fock_moment(&tmsv, 2, 1, 1, 1), Err(Error::UnsupportedOrder { order: 5 })));
    }

    #[test]
    fn symmetrized_product_is_hermitian() {
        let (x, p) = quadratures(12);
        let xp = symmetrized(&x, &p, 1, 1);
        assert!((&xp - xp.adjoint()).norm() < 1e-12);
        // (xp + px)/2 has zero vacuum expectation
        assert!(xp[(0, 0)].norm() < 1e-14);
    }

    #[test]
    fn tmsv_covariance() {
        let cm = oracle_covariance(0.3, 0.0, 1.0, 0, 25).unwrap();
        let (c, s) = (0.6f64.cosh(), 0.6f64.sinh());
        for v in [cm.vax, cm.vap, cm.vbx, cm.vbp] {
            assert!((v - c).abs() < 1e-9);
        }
        assert!((cm.vcx - s).abs() < 1e-9 && (cm.vcp + s).abs() < 1e-9);
    }

    #[test]
    fn displaced_source_mean() {
        let (state, _) = oracle_state(0.5, 1.0, 1.0, 0, 40).unwrap();
        let x1 = fock_moment(&state, 1, 0, 0, 0).unwrap();
        assert!((x1 - 0.5f64.exp()).abs() < 1e-8);
    }
}
