use crate::channel::ChannelParams;
use crate::error::{Error, Result};
use crate::keyrate::secret_key_rate;
use crate::phase_space::SqueezedSourceParams;

/// Absolute accuracy of [`max_secure_distance`], km.
pub const DISTANCE_TOLERANCE_KM: f64 = 0.01;
/// Upper end of the coarse scan, km.
pub const MAX_SCAN_KM: f64 = 300.0;
const SCAN_STEP_KM: f64 = 1.0;

/// Largest `L_AC` (km) at which the key rate still reaches `k_target`.
///
/// A 1 km scan locates the last grid point above target. If the scan shows
/// the rate rising again after first dropping below target, the final
/// bracket is resolved by a dense scan at the tolerance; otherwise by
/// bisection.
pub fn max_secure_distance(source: &SqueezedSourceParams, channel: &ChannelParams, k_target: f64) -> Result<f64> {
    let rate = |l: f64| secret_key_rate(source, &channel.with_l_ac(l)).map(|r| r.key_rate);
    let k0 = rate(0.0)?;
    if k0.is_nan() || k0 < k_target {
        return Err(Error::TargetUnreachable(format!("key rate at zero distance {k0:e} is below target {k_target:e}")));
    }

    let steps = (MAX_SCAN_KM / SCAN_STEP_KM) as usize;
    let mut last_above = 0.0;
    let mut dipped = false;
    let mut monotone = true;
    let mut prev = k0;
    for i in 1..=steps {
        let l = i as f64 * SCAN_STEP_KM;
        let k = rate(l)?;
        if dipped && k > prev {
            monotone = false;
        }
        if k >= k_target {
            last_above = l;
        } else {
            dipped = true;
        }
        prev = k;
    }
    if last_above >= MAX_SCAN_KM {
        return Err(Error::NumericalDegeneracy(format!("key rate stays above target beyond {MAX_SCAN_KM} km")));
    }

    let (mut lo, mut hi) = (last_above, last_above + SCAN_STEP_KM);
    if !monotone {
        let n = (SCAN_STEP_KM / DISTANCE_TOLERANCE_KM).round() as usize;
        let mut best = lo;
        for i in 1..n {
            let l = lo + i as f64 * DISTANCE_TOLERANCE_KM;
            if rate(l)? >= k_target {
                best = l;
            }
        }
        lo = best;
        hi = best + DISTANCE_TOLERANCE_KM;
    }
    while hi - lo > DISTANCE_TOLERANCE_KM / 2.0 {
        let mid = 0.5 * (lo + hi);
        if rate(mid)? >= k_target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}
