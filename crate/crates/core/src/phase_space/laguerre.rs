//! Generalized Laguerre polynomials.
//!
//! Both entry points use the three-term recurrence
//! `(m+1) L_{m+1} = (2m+1+α-x) L_m - (m+α) L_{m-1}`,
//! which is exact for the polynomial degree and free of cancellation for
//! `x <= 0`, the only region the covariance formulas visit.

/// `L_n^α(x)`, with the convention `L_n^α ≡ 0` for `n < 0`.
pub fn laguerre(n: i32, alpha: u32, x: f64) -> f64 {
    if n < 0 {
        return 0.0;
    }
    let a = alpha as f64;
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 1.0 + a - x;
    for m in 1..n {
        let m = m as f64;
        let next = ((2.0 * m + 1.0 + a - x) * cur - (m + a) * prev) / (m + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Homogenized Laguerre polynomial `w^n · L_n^α(-c / w)`.
///
/// Expanding gives `Σ_j C(n+α, n-j) c^j w^(n-j) / j!`, which stays finite at
/// `w = 0` (value `c^n / n!`). The closed forms carry `ν²` as `w`, so this
/// form removes the `1/ν²` singularity of the raw argument at zero squeezing.
pub fn scaled_laguerre(n: i32, alpha: u32, c: f64, w: f64) -> f64 {
    if n < 0 {
        return 0.0;
    }
    let a = alpha as f64;
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let w2 = w * w;
    let mut cur = (1.0 + a) * w + c;
    for m in 1..n {
        let m = m as f64;
        let next = (((2.0 * m + 1.0 + a) * w + c) * cur - (m + a) * w2 * prev) / (m + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}
