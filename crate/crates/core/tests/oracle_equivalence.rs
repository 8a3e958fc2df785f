use pstmsc_core::nongaussian::low_order_moment;
use pstmsc_core::oracle::{
    build_tmsc_fock, fock_moment, fock_wigner, hermite_wigner_fock, oracle_covariance, oracle_state,
    suggested_truncation, FockTwoModeState,
};
use pstmsc_core::phase_space::{wigner_fock, wigner_pstmsc, wigner_tmsc};
use pstmsc_core::{pstmsc_covariance, subtraction_probability, PhasePoint, SqueezedSourceParams, TwoModeCM};

fn src(r: f64, d: f64, tau: f64, k: u32) -> SqueezedSourceParams {
    SqueezedSourceParams::new(r, d, tau, k).unwrap()
}

fn entries(cm: &TwoModeCM) -> [f64; 8] {
    [cm.vax, cm.vap, cm.vbx, cm.vbp, cm.vcx, cm.vcp, cm.mean_x1, cm.mean_x2]
}

fn assert_cm_close(a: &TwoModeCM, b: &TwoModeCM, tol: f64) {
    for (i, (x, y)) in entries(a).iter().zip(entries(b)).enumerate() {
        assert!((x - y).abs() < tol, "entry {i}: {x} vs {y}");
    }
}

#[test]
fn single_subtraction_probability_from_squeezed_vacuum() {
    let p = src(0.5, 0.0, 0.8, 1);
    let (_, oracle) = oracle_state(0.5, 0.0, 0.8, 1, 30).unwrap();
    let closed = subtraction_probability(&p);
    assert!((closed - oracle).abs() < 1e-7);
    assert!((closed - 0.0489).abs() < 1e-4);
}

#[test]
fn displaced_subtraction_probability() {
    let (_, oracle) = oracle_state(0.5, 1.0, 0.8, 1, 30).unwrap();
    assert!((subtraction_probability(&src(0.5, 1.0, 0.8, 1)) - oracle).abs() < 1e-7);
    // Reference value from an independent dense-matrix implementation.
    assert!((oracle - 0.14489529338016).abs() < 1e-9);
}

#[test]
fn squeezed_vacuum_covariance_matches_oracle() {
    let closed = pstmsc_covariance(&src(0.5, 0.0, 0.8, 1)).unwrap();
    let oracle = oracle_covariance(0.5, 0.0, 0.8, 1, 30).unwrap();
    assert_cm_close(&closed, &oracle, 1e-7);
    assert!((closed.vax - 3.82416994216569).abs() < 1e-9);
    assert!((closed.vcx - 1.99397489007063).abs() < 1e-9);
}

#[test]
fn displaced_covariance_matches_oracle() {
    let closed = pstmsc_covariance(&src(0.5, 1.0, 0.8, 1)).unwrap();
    let oracle = oracle_covariance(0.5, 1.0, 0.8, 1, 30).unwrap();
    assert_cm_close(&closed, &oracle, 1e-7);

    let closed = pstmsc_covariance(&src(0.5, 1.0, 0.8, 2)).unwrap();
    let oracle = oracle_covariance(0.5, 1.0, 0.8, 2, 35).unwrap();
    assert_cm_close(&closed, &oracle, 1e-6);
    let reference = [
        0.99461639115,
        2.64385217971,
        1.34076388175,
        1.62252231497,
        0.82443509390,
        -1.50611397123,
        3.19302319114,
        2.11296768068,
    ];
    for (x, y) in entries(&closed).iter().zip(reference) {
        assert!((x - y).abs() < 1e-9, "{x} vs {y}");
    }
}

#[test]
fn low_order_cross_moment_matches_oracle() {
    let (state, _) = oracle_state(0.5, 1.0, 0.8, 1, 30).unwrap();
    let oracle = fock_moment(&state, 1, 0, 1, 0).unwrap();
    let closed = low_order_moment(&src(0.5, 1.0, 0.8, 1), 1, 0, 1, 0).unwrap();
    assert!((closed - oracle).abs() < 1e-7);
}

#[test]
fn tmsc_mean_matches_oracle() {
    let (state, _) = oracle_state(0.5, 1.0, 1.0, 0, 30).unwrap();
    let closed = pstmsc_covariance(&src(0.5, 1.0, 1.0, 0)).unwrap();
    assert!((fock_moment(&state, 1, 0, 0, 0).unwrap() - closed.mean_x1).abs() < 1e-8);
}

#[test]
fn p_reflection_leaves_x_variances() {
    let p = src(0.6, 1.3, 0.7, 1);
    let (state, _) = oracle_state(p.r, p.d, p.tau, p.k, 50).unwrap();
    let reflected = FockTwoModeState { amplitudes: state.amplitudes.map(|a| a.conj()), truncation: state.truncation };
    let closed = pstmsc_covariance(&p).unwrap();
    let m1 = fock_moment(&reflected, 1, 0, 0, 0).unwrap();
    let m2 = fock_moment(&reflected, 0, 0, 1, 0).unwrap();
    let vax = fock_moment(&reflected, 2, 0, 0, 0).unwrap() - m1 * m1;
    let vbx = fock_moment(&reflected, 0, 0, 2, 0).unwrap() - m2 * m2;
    assert!((vax - closed.vax).abs() < 1e-7);
    assert!((vbx - closed.vbx).abs() < 1e-7);
    assert!(fock_moment(&reflected, 0, 1, 0, 0).unwrap().abs() < 1e-10);
}

#[test]
fn truncation_convergence() {
    let a = oracle_covariance(0.5, 1.0, 0.8, 1, 40).unwrap();
    let b = oracle_covariance(0.5, 1.0, 0.8, 1, 80).unwrap();
    assert_cm_close(&a, &b, 1e-8);
}

#[test]
fn squeezed_coherent_wigner_matches_fock_reconstruction() {
    let p = src(0.5, 0.3, 1.0, 0);
    let state = build_tmsc_fock(0.5, 0.3, 30).unwrap();
    for pt in [PhasePoint::origin(), PhasePoint::new(0.4, -0.3, 0.2, 0.5)] {
        let w = fock_wigner(&state, &pt);
        assert!((wigner_tmsc(&pt, &p) - w).abs() < 1e-8, "{pt:?}");
    }
}

#[test]
fn fock_wigner_matches_wavefunction_oracle() {
    assert!((wigner_fock(1.0, 1.0, 2) - hermite_wigner_fock(1.0, 1.0, 2)).abs() < 1e-10);
    for n in 0..6 {
        for &(x, p) in &[(0.0, 0.0), (0.5, -1.5), (2.2, 0.3)] {
            assert!((wigner_fock(x, p, n) - hermite_wigner_fock(x, p, n)).abs() < 1e-10, "n = {n}");
        }
    }
}

#[test]
fn subtracted_wigner_matches_fock_reconstruction() {
    let cases = [(src(0.5, 0.0, 0.8, 1), 30), (src(0.5, 1.0, 0.8, 2), 35)];
    for (p, n) in cases {
        let (state, _) = oracle_state(p.r, p.d, p.tau, p.k, n).unwrap();
        for pt in [PhasePoint::origin(), PhasePoint::new(1.0, 0.5, 0.8, -0.2)] {
            let closed = wigner_pstmsc(&pt, &p).unwrap();
            let oracle = fock_wigner(&state, &pt);
            assert!((closed - oracle).abs() < 1e-7, "{p:?} at {pt:?}: {closed} vs {oracle}");
        }
    }
}

#[test]
fn suggested_truncation_keeps_leakage_small() {
    for &(r, d) in &[(1.0, 2.0), (0.2, 0.0), (0.8, 1.5)] {
        let s = build_tmsc_fock(r, d, suggested_truncation(r, d)).unwrap();
        assert!(s.leakage() < 1e-8);
    }
}
