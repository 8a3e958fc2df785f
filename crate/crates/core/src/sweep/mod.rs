//! Parameter sweeps over the key-rate pipeline and scalar searches on top
//! of it.

mod distance;
mod optimize;

pub use distance::{max_secure_distance, DISTANCE_TOLERANCE_KM, MAX_SCAN_KM};
pub use optimize::{optimize_scalar, Objective, OptimizeResult, COARSE_POINTS};

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::ChannelParams;
use crate::error::{Error, Result};
use crate::keyrate::{secret_key_rate, KeyRateResult};
use crate::phase_space::SqueezedSourceParams;

/// State family, realized from a full parameter set by taking limits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    /// `k = 0, τ = 1, d = 0`.
    Tmsv,
    /// `k` subtractions from the squeezed vacuum (`d = 0`).
    Pstmsv(u32),
    /// `k` subtractions from the squeezed coherent state.
    Pstmsc(u32),
}

impl Family {
    pub fn label(&self) -> String {
        self.to_string()
    }

    pub fn realize(&self, base: &SqueezedSourceParams) -> SqueezedSourceParams {
        match *self {
            Family::Tmsv => SqueezedSourceParams { r: base.r, d: 0.0, tau: 1.0, k: 0 },
            Family::Pstmsv(k) => SqueezedSourceParams { r: base.r, d: 0.0, tau: base.tau, k },
            Family::Pstmsc(k) => SqueezedSourceParams { r: base.r, d: base.d, tau: base.tau, k },
        }
    }

    /// TMSV plus the `k`-PSTMSV and `k`-PSTMSC families for `k = 1..=max_k`.
    pub fn standard_set(max_k: u32) -> Vec<Family> {
        let mut v = vec![Family::Tmsv];
        for k in 1..=max_k {
            v.push(Family::Pstmsv(k));
            v.push(Family::Pstmsc(k));
        }
        v
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Tmsv => write!(f, "TMSV"),
            Family::Pstmsv(k) => write!(f, "{k}-PSTMSV"),
            Family::Pstmsc(k) => write!(f, "{k}-PSTMSC"),
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("TMSV") {
            return Ok(Family::Tmsv);
        }
        let bad = || Error::domain(format!("unknown state family '{s}'"));
        let (k, kind) = s.split_once('-').ok_or_else(bad)?;
        let k: u32 = k.parse().map_err(|_| bad())?;
        match kind.to_ascii_uppercase().as_str() {
            "PSTMSV" => Ok(Family::Pstmsv(k)),
            "PSTMSC" => Ok(Family::Pstmsc(k)),
            _ => Err(bad()),
        }
    }
}

/// Quantity varied along a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SweepVariable {
    LAc,
    VA,
    D,
    Tau,
    Eta,
}

impl SweepVariable {
    /// Write `value` into the source or channel.
    pub fn apply(&self, value: f64, source: &mut SqueezedSourceParams, channel: &mut ChannelParams) -> Result<()> {
        match self {
            SweepVariable::LAc => *channel = channel.with_l_ac(value),
            SweepVariable::VA => {
                *source = SqueezedSourceParams::from_variance(value, source.d, source.tau, source.k)?;
                channel.v_a = value;
            }
            SweepVariable::D => *source = SqueezedSourceParams::new(source.r, value, source.tau, source.k)?,
            SweepVariable::Tau => *source = SqueezedSourceParams::new(source.r, source.d, value, source.k)?,
            SweepVariable::Eta => channel.eta = value,
        }
        Ok(())
    }

    pub fn name(&self) -> &'static str {
        match self {
            SweepVariable::LAc => "L_AC",
            SweepVariable::VA => "V_A",
            SweepVariable::D => "d",
            SweepVariable::Tau => "tau",
            SweepVariable::Eta => "eta",
        }
    }
}

impl FromStr for SweepVariable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "L_AC" | "l_ac" => Ok(SweepVariable::LAc),
            "V_A" | "v_a" => Ok(SweepVariable::VA),
            "d" => Ok(SweepVariable::D),
            "tau" => Ok(SweepVariable::Tau),
            "eta" => Ok(SweepVariable::Eta),
            other => Err(Error::domain(format!("unknown sweep variable '{other}'"))),
        }
    }
}

/// Grid spacing along the swept axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Grid {
    /// Evenly spaced points including both ends; `0` yields an empty grid.
    Points(usize),
    /// `lo, lo + step, …` up to `hi`.
    Step(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub variable: SweepVariable,
    pub lo: f64,
    pub hi: f64,
    pub grid: Grid,
    pub source: SqueezedSourceParams,
    pub channel: ChannelParams,
    pub families: Vec<Family>,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.lo.is_finite() && self.hi.is_finite()) {
            return Err(Error::domain("sweep bounds must be finite"));
        }
        if self.lo > self.hi {
            return Err(Error::domain(format!("sweep needs lo <= hi, got {} > {}", self.lo, self.hi)));
        }
        if let Grid::Step(step) = self.grid {
            if !(step > 0.0 && step.is_finite()) {
                return Err(Error::domain(format!("sweep step must be positive, got {step}")));
            }
        }
        if self.families.is_empty() {
            return Err(Error::domain("sweep needs at least one state family"));
        }
        let mut source = self.source;
        let mut channel = self.channel;
        if let Some(&first) = self.values().first() {
            self.variable.apply(first, &mut source, &mut channel)?;
        }
        channel.validate()
    }

    /// Grid values in ascending order.
    pub fn values(&self) -> Vec<f64> {
        match self.grid {
            Grid::Points(0) => Vec::new(),
            Grid::Points(1) => vec![self.lo],
            Grid::Points(n) => {
                let h = (self.hi - self.lo) / (n - 1) as f64;
                (0..n).map(|i| if i == n - 1 { self.hi } else { self.lo + i as f64 * h }).collect()
            }
            Grid::Step(step) => {
                let n = ((self.hi - self.lo) / step + 1e-9).floor() as usize;
                (0..=n).map(|i| self.lo + i as f64 * step).collect()
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FamilyOutcome {
    pub family: Family,
    pub outcome: Result<KeyRateResult>,
}

/// All families evaluated at one grid value.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub value: f64,
    pub results: Vec<FamilyOutcome>,
}

fn evaluate_point(spec: &SweepSpec, value: f64) -> SweepRow {
    let mut source = spec.source;
    let mut channel = spec.channel;
    let applied = spec.variable.apply(value, &mut source, &mut channel);
    let results = spec
        .families
        .iter()
        .map(|&family| {
            let outcome = match &applied {
                Ok(()) => secret_key_rate(&family.realize(&source), &channel),
                Err(e) => Err(e.clone()),
            };
            FamilyOutcome { family, outcome }
        })
        .collect();
    SweepRow { value, results }
}

/// Evaluate every family at every grid value. Per-point failures are kept
/// in the rows.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    Ok(spec.values().par_iter().map(|&v| evaluate_point(spec, v)).collect())
}

/// Sequential reference for [`run_sweep`].
pub fn run_sweep_sequential(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    Ok(spec.values().iter().map(|&v| evaluate_point(spec, v)).collect())
}
