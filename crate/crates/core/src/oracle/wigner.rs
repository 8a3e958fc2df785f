use nalgebra::DMatrix;
use num_complex::Complex64;

use super::FockTwoModeState;
use crate::phase_space::quadrature::gauss_hermite;
use crate::phase_space::PhasePoint;

/// `exp(β a† - β* a)` on `levels` states, built in a padded space.
fn displacement(beta: Complex64, levels: usize) -> DMatrix<Complex64> {
    let m = levels + 20 + (4.0 * beta.norm_sqr()).ceil() as usize;
    let mut gen = DMatrix::<Complex64>::zeros(m, m);
    for n in 1..m {
        let s = (n as f64).sqrt();
        gen[(n, n - 1)] += beta * s;
        gen[(n - 1, n)] -= beta.conj() * s;
    }
    gen.exp().view((0, 0), (levels, levels)).into_owned()
}

/// Two-mode Wigner function of a Fock-basis state by displaced parity,
/// `W = 4 Σ (-1)^{n1+n2} |⟨n1 n2| D₁(-β₁) D₂(-β₂) |ψ⟩|²` with `β = (x + ip)/2`.
pub fn fock_wigner(state: &FockTwoModeState, pt: &PhasePoint) -> f64 {
    let beta1 = Complex64::new(pt.x1, pt.p1) / 2.0;
    let beta2 = Complex64::new(pt.x2, pt.p2) / 2.0;
    let l = state.truncation + 1;
    let pad = l + 10 + (4.0 * beta1.norm_sqr().max(beta2.norm_sqr())).ceil() as usize;
    let mut psi = DMatrix::<Complex64>::zeros(pad, pad);
    psi.view_mut((0, 0), (l, l)).copy_from(&state.amplitudes);
    let d1 = displacement(-beta1, pad);
    let d2 = displacement(-beta2, pad);
    let phi = d1 * psi * d2.transpose();
    let mut w = 0.0;
    for j in 0..pad {
        for i in 0..pad {
            let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
            w += sign * phi[(i, j)].norm_sqr();
        }
    }
    4.0 * w
}

/// Hermite functions `ψ_n(q) e^{q²/2}` for `n = 0..=n_max`.
fn hermite_functions(q: f64, n_max: u32) -> Vec<f64> {
    let mut h = Vec::with_capacity(n_max as usize + 1);
    h.push(std::f64::consts::PI.powf(-0.25));
    if n_max >= 1 {
        h.push(std::f64::consts::SQRT_2 * q * h[0]);
    }
    for n in 1..n_max as usize {
        let nf = n as f64;
        let next = (2.0 / (nf + 1.0)).sqrt() * q * h[n] - (nf / (nf + 1.0)).sqrt() * h[n - 1];
        h.push(next);
    }
    h
}

/// Single-mode Wigner function of `|n⟩` from its position wavefunction,
/// `W = 2 ∫ ψ(q+y) ψ(q-y) cos(2 p' y) dy` with `q = x/√2`, `p' = p/√2`.
pub fn hermite_wigner_fock(x: f64, p: f64, n: u32) -> f64 {
    let q = x / std::f64::consts::SQRT_2;
    let ps = p / std::f64::consts::SQRT_2;
    let (nodes, weights) = gauss_hermite(120);
    let mut acc = 0.0;
    for (y, w) in nodes.iter().zip(&weights) {
        let a = hermite_functions(q + y, n)[n as usize];
        let b = hermite_functions(q - y, n)[n as usize];
        acc += w * a * b * (2.0 * ps * y).cos();
    }
    2.0 * (-q * q).exp() * acc
}
