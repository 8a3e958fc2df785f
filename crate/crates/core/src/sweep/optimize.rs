use serde::Serialize;

use super::{max_secure_distance, SweepVariable};
use crate::channel::ChannelParams;
use crate::error::{Error, Result};
use crate::keyrate::secret_key_rate;
use crate::phase_space::SqueezedSourceParams;

/// Size of the coarse grid preceding golden-section refinement.
pub const COARSE_POINTS: usize = 41;
const GOLDEN_ITERATIONS: usize = 60;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Objective {
    /// Maximize the key rate at the channel's current length.
    KeyRate,
    /// Maximize the distance at which the key rate still reaches the target.
    MaxDistance { k_target: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OptimizeResult {
    pub argmax: f64,
    pub value: f64,
}

fn evaluate(
    source: &SqueezedSourceParams,
    channel: &ChannelParams,
    variable: SweepVariable,
    objective: Objective,
    x: f64,
) -> Option<f64> {
    let mut s = *source;
    let mut c = *channel;
    variable.apply(x, &mut s, &mut c).ok()?;
    let value = match objective {
        Objective::KeyRate => secret_key_rate(&s, &c).ok()?.key_rate,
        Objective::MaxDistance { k_target } => max_secure_distance(&s, &c, k_target).ok()?,
    };
    let secure = match objective {
        Objective::KeyRate => value > 0.0,
        Objective::MaxDistance { .. } => true,
    };
    (secure && value.is_finite()).then_some(value)
}

/// Maximize `objective` over `variable ∈ [lo, hi]` (one of `tau`, `d`,
/// `V_A`). Ties on the coarse grid go to the smallest argument.
pub fn optimize_scalar(
    source: &SqueezedSourceParams,
    channel: &ChannelParams,
    variable: SweepVariable,
    objective: Objective,
    lo: f64,
    hi: f64,
) -> Result<OptimizeResult> {
    if !matches!(variable, SweepVariable::Tau | SweepVariable::D | SweepVariable::VA) {
        return Err(Error::domain(format!("cannot optimize over {}", variable.name())));
    }
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::domain(format!("search interval [{lo}, {hi}] is empty")));
    }
    let f = |x: f64| evaluate(source, channel, variable, objective, x);

    let h = (hi - lo) / (COARSE_POINTS - 1) as f64;
    let xs: Vec<f64> =
        (0..COARSE_POINTS).map(|i| if i == COARSE_POINTS - 1 { hi } else { lo + i as f64 * h }).collect();
    let mut best: Option<(usize, f64)> = None;
    for (i, &x) in xs.iter().enumerate() {
        if let Some(v) = f(x) {
            if best.is_none_or(|(_, b)| v > b) {
                best = Some((i, v));
            }
        }
    }
    let (i, coarse) = best.ok_or(Error::NoSecureRegion)?;
    let mut result = OptimizeResult { argmax: xs[i], value: coarse };

    let score = |x: f64| f(x).unwrap_or(f64::NEG_INFINITY);
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    let (mut a, mut b) = (xs[i.saturating_sub(1)], xs[(i + 1).min(COARSE_POINTS - 1)]);
    let mut c = b - phi * (b - a);
    let mut d = a + phi * (b - a);
    let (mut fc, mut fd) = (score(c), score(d));
    for _ in 0..GOLDEN_ITERATIONS {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = score(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = score(d);
        }
    }
    for (x, v) in [(c, fc), (d, fd)] {
        if v > result.value {
            result = OptimizeResult { argmax: x, value: v };
        }
    }
    Ok(result)
}
