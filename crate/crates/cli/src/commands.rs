use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use pstmsc_core::oracle::oracle_check;
use pstmsc_core::sweep::{max_secure_distance, optimize_scalar, run_sweep, OptimizeResult};
use pstmsc_core::{secret_key_rate, Family, KeyRateResult, SweepRow, SweepSpec};

use crate::config::RawConfig;
use crate::error::CliError;

pub const SWEEP_HEADER: &str = "swept_value,family,p_ps,i_ab,chi_be,key_rate,lambda1,lambda2,lambda3";
pub const DISTANCE_HEADER: &str = "swept_value,family,key_target,max_distance_km";

/// Text produced by a command, and whether every requested result was
/// obtained.
pub struct Report {
    pub body: String,
    pub failure: Option<CliError>,
}

impl Report {
    fn complete(body: String) -> Self {
        Report { body, failure: None }
    }
}

/// Twelve significant digits; failures print as `NaN`.
pub fn fmt_value(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.11e}")
    } else {
        "NaN".to_string()
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

pub fn keyrate(cfg: &RawConfig) -> Result<Report, CliError> {
    let source = cfg.source()?;
    let channel = cfg.channel(&source)?;
    let result: KeyRateResult = secret_key_rate(&source, &channel)?;
    Ok(Report::complete(json(&result)))
}

fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(SWEEP_HEADER);
    out.push('\n');
    for row in rows {
        for fo in &row.results {
            let fields = match &fo.outcome {
                Ok(r) => [r.p_ps, r.i_ab, r.chi_be, r.key_rate, r.lambda1, r.lambda2, r.lambda3],
                Err(_) => [f64::NAN; 7],
            };
            let _ = write!(out, "{},{}", fmt_value(row.value), fo.family);
            for f in fields {
                let _ = write!(out, ",{}", fmt_value(f));
            }
            out.push('\n');
        }
    }
    out
}

pub fn sweep(cfg: &RawConfig) -> Result<Report, CliError> {
    let source = cfg.source()?;
    let channel = cfg.channel(&source)?;
    let section = cfg.sweep()?;
    let spec = SweepSpec {
        variable: section.variable,
        lo: section.lo,
        hi: section.hi,
        grid: section.grid,
        source,
        channel,
        families: cfg.families()?,
    };
    let Some(targets) = section.targets else {
        return Ok(Report::complete(sweep_csv(&run_sweep(&spec)?)));
    };

    let mut jobs = Vec::new();
    for value in spec.values() {
        for &family in &spec.families {
            for &target in &targets {
                jobs.push((value, family, target));
            }
        }
    }
    let distances: Vec<f64> = jobs
        .par_iter()
        .map(|&(value, family, target)| {
            let (mut s, mut c) = (spec.source, spec.channel);
            spec.variable
                .apply(value, &mut s, &mut c)
                .and_then(|_| max_secure_distance(&family.realize(&s), &c, target))
                .unwrap_or(f64::NAN)
        })
        .collect();
    let mut out = String::from(DISTANCE_HEADER);
    out.push('\n');
    for ((value, family, target), km) in jobs.iter().zip(distances) {
        let _ = writeln!(out, "{},{family},{},{}", fmt_value(*value), fmt_value(*target), fmt_value(km));
    }
    Ok(Report::complete(out))
}

fn per_family<T: Serialize + Send>(families: &[Family], f: impl Fn(Family) -> pstmsc_core::Result<T> + Sync) -> Report {
    let outcomes: Vec<_> = families.par_iter().map(|&fam| (fam, f(fam))).collect();
    let mut map = BTreeMap::new();
    let mut failures = Vec::new();
    for (fam, outcome) in outcomes {
        match outcome {
            Ok(v) => {
                map.insert(fam.label(), Some(v));
            }
            Err(e) => {
                failures.push(format!("{fam}: {e}"));
                map.insert(fam.label(), None);
            }
        }
    }
    let failure = (!failures.is_empty()).then(|| CliError::Incomplete(failures.join("; ")));
    Report { body: json(&map), failure }
}

pub fn max_distance(cfg: &RawConfig) -> Result<Report, CliError> {
    let source = cfg.source()?;
    let channel = cfg.channel(&source)?;
    let target = cfg.key_target()?;
    let families = cfg.families()?;
    Ok(per_family(&families, |fam| max_secure_distance(&fam.realize(&source), &channel, target)))
}

pub fn optimize(cfg: &RawConfig) -> Result<Report, CliError> {
    let source = cfg.source()?;
    let channel = cfg.channel(&source)?;
    let section = cfg.optimize()?;
    let families = cfg.families()?;
    Ok(per_family(&families, |fam| -> pstmsc_core::Result<OptimizeResult> {
        optimize_scalar(&fam.realize(&source), &channel, section.variable, section.objective, section.lo, section.hi)
    }))
}

pub fn oracle(cfg: &RawConfig) -> Result<Report, CliError> {
    let points = cfg.oracle_points()?;
    let report = oracle_check(&points, cfg.oracle_truncation()?);
    let failure = (!report.pass).then(|| {
        let bad = report.rows.iter().filter(|r| !r.pass).count();
        CliError::Incomplete(format!("oracle check failed at {bad} of {} points", report.rows.len()))
    });
    Ok(Report { body: json(&report), failure })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(fmt_value(0.1), "1.00000000000e-1");
        assert_eq!(fmt_value(-1234.5), "-1.23450000000e3");
        assert_eq!(fmt_value(f64::NAN), "NaN");
        assert_eq!(fmt_value(0.0), "0.00000000000e0");
    }
}
