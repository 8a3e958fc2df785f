use rayon::prelude::*;
use serde::Serialize;

use super::{moments_to_cm, oracle_state, suggested_truncation};
use crate::error::Error;
use crate::nongaussian::{pstmsc_covariance, subtraction_probability, TwoModeCM};
use crate::phase_space::SqueezedSourceParams;

/// Largest accepted deviation `|closed - oracle| / max(|oracle|, 1)`.
pub const ORACLE_TOLERANCE: f64 = 1e-5;

#[derive(Debug, Clone, Serialize)]
pub struct OracleCheckRow {
    pub params: SqueezedSourceParams,
    pub truncation: usize,
    /// Worst deviation over the probability, six variances and two means.
    pub max_deviation: Option<f64>,
    pub error: Option<String>,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleCheckReport {
    pub rows: Vec<OracleCheckRow>,
    pub max_deviation: f64,
    pub pass: bool,
}

fn deviation(closed: f64, oracle: f64) -> f64 {
    (closed - oracle).abs() / oracle.abs().max(1.0)
}

fn cm_entries(cm: &TwoModeCM) -> [f64; 8] {
    [cm.vax, cm.vap, cm.vbx, cm.vbp, cm.vcx, cm.vcp, cm.mean_x1, cm.mean_x2]
}

fn check_point(params: &SqueezedSourceParams, truncation: Option<usize>) -> OracleCheckRow {
    let truncation = truncation.unwrap_or_else(|| suggested_truncation(params.r, params.d));
    let row = |max_deviation, error: Option<String>, pass| OracleCheckRow {
        params: *params,
        truncation,
        max_deviation,
        error,
        pass,
    };
    let oracle = oracle_state(params.r, params.d, params.tau, params.k, truncation)
        .and_then(|(state, p)| Ok((moments_to_cm(&state)?, p)));
    let closed = pstmsc_covariance(params);
    match (closed, oracle) {
        (Ok(cm), Ok((ocm, op))) => {
            let mut worst = (subtraction_probability(params) - op).abs() / op;
            for (a, b) in cm_entries(&cm).iter().zip(cm_entries(&ocm)) {
                worst = worst.max(deviation(*a, b));
            }
            row(Some(worst), None, worst <= ORACLE_TOLERANCE)
        }
        (Err(Error::ZeroProbability(_)), Err(Error::ZeroProbability(_))) => row(Some(0.0), None, true),
        (Err(e), _) | (_, Err(e)) => row(None, Some(e.to_string()), false),
    }
}

/// Compare closed forms with the Fock oracle at every point. `truncation`
/// overrides [`suggested_truncation`].
pub fn oracle_check(points: &[SqueezedSourceParams], truncation: Option<usize>) -> OracleCheckReport {
    let rows: Vec<OracleCheckRow> = points.par_iter().map(|p| check_point(p, truncation)).collect();
    let max_deviation = rows.iter().filter_map(|r| r.max_deviation).fold(0.0, f64::max);
    let pass = rows.iter().all(|r| r.pass);
    OracleCheckReport { rows, max_deviation, pass }
}
