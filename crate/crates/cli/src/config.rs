//! Flat dotted-key configuration files.
//!
//! One `key = value` pair per line, `#` starts a comment. Keys are grouped
//! into `source.*`, `channel.*`, `sweep.*`, `target.*`, `optimize.*` and
//! `oracle.*`. Unknown keys are rejected with the offending line.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use pstmsc_core::sweep::{Grid, Objective};
use pstmsc_core::{ChannelParams, Family, Geometry, SqueezedSourceParams, SweepVariable};

use crate::error::CliError;

const KNOWN_KEYS: &[&str] = &[
    "source.V_A",
    "source.r",
    "source.d",
    "source.tau",
    "source.k",
    "source.families",
    "channel.geometry",
    "channel.L_AC",
    "channel.L_BC",
    "channel.loss_db_per_km",
    "channel.eps_A",
    "channel.eps_B",
    "channel.eta",
    "channel.v_el",
    "channel.beta",
    "channel.gain",
    "sweep.variable",
    "sweep.lo",
    "sweep.hi",
    "sweep.points",
    "sweep.step",
    "sweep.targets",
    "target.key_rate",
    "optimize.variable",
    "optimize.lo",
    "optimize.hi",
    "optimize.objective",
    "oracle.truncation",
    "oracle.r",
    "oracle.d",
    "oracle.tau",
    "oracle.k",
];

/// Where a value came from, for error messages.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Origin {
    Line { file: String, line: usize },
    Override,
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Origin::Line { file, line } => write!(f, "{file}:{line}"),
            Origin::Override => write!(f, "--set"),
        }
    }
}

#[derive(Debug, Clone)]
struct Entry {
    value: String,
    origin: Origin,
}

#[derive(Debug, Clone, Default)]
pub struct RawConfig {
    entries: BTreeMap<String, Entry>,
}

impl RawConfig {
    pub fn parse(text: &str, file: &str) -> Result<Self, CliError> {
        let mut cfg = RawConfig::default();
        for (i, line) in text.lines().enumerate() {
            let origin = Origin::Line { file: file.to_string(), line: i + 1 };
            let content = line.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| CliError::config(&origin, format!("expected 'key = value', found '{content}'")))?;
            cfg.insert(key.trim(), value.trim(), origin, false)?;
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text, &path.display().to_string())
    }

    /// Apply a `key=value` override from the command line.
    pub fn set(&mut self, assignment: &str) -> Result<(), CliError> {
        let (key, value) = assignment
            .split_once('=')
            .ok_or_else(|| CliError::config(&Origin::Override, format!("expected key=value, found '{assignment}'")))?;
        self.insert(key.trim(), value.trim(), Origin::Override, true)
    }

    fn insert(&mut self, key: &str, value: &str, origin: Origin, replace: bool) -> Result<(), CliError> {
        if !KNOWN_KEYS.contains(&key) {
            return Err(CliError::config(&origin, format!("unknown key '{key}'")));
        }
        if value.is_empty() {
            return Err(CliError::config(&origin, format!("empty value for '{key}'")));
        }
        if !replace {
            if let Some(prev) = self.entries.get(key) {
                return Err(CliError::config(&origin, format!("duplicate key '{key}' (first set at {})", prev.origin)));
            }
        }
        self.entries.insert(key.to_string(), Entry { value: value.to_string(), origin });
        Ok(())
    }

    fn origin(&self, key: &str) -> Origin {
        self.entries.get(key).map(|e| e.origin.clone()).unwrap_or(Origin::Override)
    }

    fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>, CliError>
    where
        T::Err: fmt::Display,
    {
        self.entries
            .get(key)
            .map(|e| {
                e.value.parse::<T>().map_err(|err| {
                    CliError::config(&e.origin, format!("invalid value '{}' for '{key}': {err}", e.value))
                })
            })
            .transpose()
    }

    fn require<T: FromStr>(&self, key: &str) -> Result<T, CliError>
    where
        T::Err: fmt::Display,
    {
        self.get(key)?.ok_or_else(|| CliError::Missing(key.to_string()))
    }

    fn list<T: FromStr>(&self, key: &str) -> Result<Option<Vec<T>>, CliError>
    where
        T::Err: fmt::Display,
    {
        let Some(e) = self.entries.get(key) else { return Ok(None) };
        e.value
            .split(',')
            .map(|item| {
                let item = item.trim();
                item.parse::<T>()
                    .map_err(|err| CliError::config(&e.origin, format!("invalid item '{item}' in '{key}': {err}")))
            })
            .collect::<Result<Vec<T>, _>>()
            .map(Some)
    }

    /// Squeezing parameter from either `source.r` or `source.V_A`.
    fn squeezing(&self) -> Result<f64, CliError> {
        match (self.get::<f64>("source.r")?, self.get::<f64>("source.V_A")?) {
            (Some(_), Some(_)) => {
                Err(CliError::config(&self.origin("source.V_A"), "set either 'source.r' or 'source.V_A', not both"))
            }
            (Some(r), None) => Ok(r),
            (None, Some(v)) if v >= 1.0 => Ok(v.acosh() / 2.0),
            (None, Some(v)) => Err(CliError::config(&self.origin("source.V_A"), format!("V_A must be >= 1, got {v}"))),
            (None, None) => Err(CliError::Missing("source.V_A".into())),
        }
    }

    pub fn source(&self) -> Result<SqueezedSourceParams, CliError> {
        let r = self.squeezing()?;
        let d = self.get("source.d")?.unwrap_or(0.0);
        let tau = self.require("source.tau")?;
        let k = self.require("source.k")?;
        SqueezedSourceParams::new(r, d, tau, k).map_err(|e| CliError::config(&self.origin("source.tau"), e.to_string()))
    }

    pub fn channel(&self, source: &SqueezedSourceParams) -> Result<ChannelParams, CliError> {
        let geometry = match self.require::<String>("channel.geometry")?.to_ascii_lowercase().as_str() {
            "symmetric" => Geometry::Symmetric,
            "asymmetric" => Geometry::Asymmetric,
            other => {
                return Err(CliError::config(
                    &self.origin("channel.geometry"),
                    format!("geometry must be 'symmetric' or 'asymmetric', got '{other}'"),
                ))
            }
        };
        let l_ac = self.require("channel.L_AC")?;
        let mut c = ChannelParams::paper_defaults(geometry, l_ac, source.variance());
        if let Some(v) = self.get("channel.L_BC")? {
            c.l_bc = v;
        }
        if let Some(v) = self.get("channel.loss_db_per_km")? {
            c.loss_db_per_km = v;
        }
        if let Some(v) = self.get("channel.eps_A")? {
            c.eps_a = v;
        }
        if let Some(v) = self.get("channel.eps_B")? {
            c.eps_b = v;
        }
        if let Some(v) = self.get("channel.eta")? {
            c.eta = v;
        }
        if let Some(v) = self.get("channel.v_el")? {
            c.v_el = v;
        }
        if let Some(v) = self.get("channel.beta")? {
            c.beta = v;
        }
        c.gain_override = self.get("channel.gain")?;
        c.validate().map_err(|e| CliError::config(&self.origin("channel.geometry"), e.to_string()))?;
        Ok(c)
    }

    /// Families in label order, which is also the CSV row order.
    pub fn families(&self) -> Result<Vec<Family>, CliError> {
        let mut families = self.list::<Family>("source.families")?.unwrap_or_else(|| Family::standard_set(2));
        families.sort_by_key(|f| f.label());
        families.dedup();
        Ok(families)
    }

    pub fn key_target(&self) -> Result<f64, CliError> {
        Ok(self.get("target.key_rate")?.unwrap_or(0.0))
    }

    pub fn sweep(&self) -> Result<SweepSection, CliError> {
        let variable = self.require("sweep.variable")?;
        let lo: f64 = self.require("sweep.lo")?;
        let hi: f64 = self.require("sweep.hi")?;
        if lo > hi {
            return Err(CliError::config(
                &self.origin("sweep.hi"),
                format!("sweep.hi ({hi}) is below sweep.lo ({lo})"),
            ));
        }
        let grid = match (self.get::<usize>("sweep.points")?, self.get::<f64>("sweep.step")?) {
            (Some(_), Some(_)) => {
                return Err(CliError::config(&self.origin("sweep.step"), "set either 'sweep.points' or 'sweep.step'"))
            }
            (Some(n), None) => Grid::Points(n),
            (None, Some(s)) if s > 0.0 => Grid::Step(s),
            (None, Some(s)) => {
                return Err(CliError::config(
                    &self.origin("sweep.step"),
                    format!("sweep.step must be positive, got {s}"),
                ))
            }
            (None, None) => return Err(CliError::Missing("sweep.points".into())),
        };
        let targets = self.list("sweep.targets")?;
        if targets.is_some() && variable == SweepVariable::LAc {
            return Err(CliError::config(&self.origin("sweep.targets"), "distance mode cannot sweep L_AC itself"));
        }
        Ok(SweepSection { variable, lo, hi, grid, targets })
    }

    pub fn optimize(&self) -> Result<OptimizeSection, CliError> {
        let variable = self.require("optimize.variable")?;
        let lo = self.require("optimize.lo")?;
        let hi = self.require("optimize.hi")?;
        let objective = match self.get::<String>("optimize.objective")?.as_deref().unwrap_or("key_rate") {
            "key_rate" => Objective::KeyRate,
            "max_distance" => Objective::MaxDistance { k_target: self.key_target()? },
            other => {
                return Err(CliError::config(
                    &self.origin("optimize.objective"),
                    format!("objective must be 'key_rate' or 'max_distance', got '{other}'"),
                ))
            }
        };
        Ok(OptimizeSection { variable, lo, hi, objective })
    }

    /// Cartesian grid of oracle points; each axis defaults to the source value.
    pub fn oracle_points(&self) -> Result<Vec<SqueezedSourceParams>, CliError> {
        let fallback = |key: &str| self.list::<f64>(key);
        let rs = match fallback("oracle.r")? {
            Some(v) => v,
            None => vec![self.squeezing()?],
        };
        let ds = match fallback("oracle.d")? {
            Some(v) => v,
            None => vec![self.get("source.d")?.unwrap_or(0.0)],
        };
        let taus = match fallback("oracle.tau")? {
            Some(v) => v,
            None => vec![self.require("source.tau")?],
        };
        let ks = match self.list::<u32>("oracle.k")? {
            Some(v) => v,
            None => vec![self.require("source.k")?],
        };
        let mut points = Vec::new();
        for &r in &rs {
            for &d in &ds {
                for &tau in &taus {
                    for &k in &ks {
                        let p = SqueezedSourceParams::new(r, d, tau, k)
                            .map_err(|e| CliError::config(&self.origin("oracle.r"), e.to_string()))?;
                        points.push(p);
                    }
                }
            }
        }
        Ok(points)
    }

    pub fn oracle_truncation(&self) -> Result<Option<usize>, CliError> {
        self.get("oracle.truncation")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSection {
    pub variable: SweepVariable,
    pub lo: f64,
    pub hi: f64,
    pub grid: Grid,
    /// Key-rate targets; when present the sweep reports maximal distances.
    pub targets: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizeSection {
    pub variable: SweepVariable,
    pub lo: f64,
    pub hi: f64,
    pub objective: Objective,
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASIC: &str = "\
# comment line
source.V_A = 50
source.d = 2      # trailing comment
source.tau = 0.9
source.k = 1
channel.geometry = asymmetric
channel.L_AC = 20
";

    #[test]
    fn parses_source_and_channel() {
        let cfg = RawConfig::parse(BASIC, "basic.conf").unwrap();
        let s = cfg.source().unwrap();
        assert!((s.variance() - 50.0).abs() < 1e-12);
        assert_eq!((s.d, s.tau, s.k), (2.0, 0.9, 1));
        let c = cfg.channel(&s).unwrap();
        assert_eq!(c.geometry, Geometry::Asymmetric);
        assert_eq!((c.l_ac, c.l_bc, c.beta), (20.0, 0.0, 0.96));
    }

    #[test]
    fn unknown_key_reports_line() {
        let err = RawConfig::parse("source.k = 1\nsource.colour = red\n", "x.conf").unwrap_err();
        assert_eq!(err.to_string(), "x.conf:2: unknown key 'source.colour'");
    }

    #[test]
    fn bad_value_reports_line() {
        let cfg = RawConfig::parse(&BASIC.replace("source.tau = 0.9", "source.tau = ninety"), "b.conf").unwrap();
        assert!(cfg.source().unwrap_err().to_string().starts_with("b.conf:4:"));
    }

    #[test]
    fn duplicate_keys_rejected_but_overrides_replace() {
        assert!(RawConfig::parse("source.k = 1\nsource.k = 2\n", "d.conf").is_err());
        let mut cfg = RawConfig::parse(BASIC, "basic.conf").unwrap();
        cfg.set("source.k=2").unwrap();
        assert_eq!(cfg.source().unwrap().k, 2);
        assert!(cfg.set("nonsense").is_err());
    }

    #[test]
    fn missing_key() {
        let cfg = RawConfig::parse("source.V_A = 50\n", "m.conf").unwrap();
        assert!(matches!(cfg.source(), Err(CliError::Missing(k)) if k == "source.tau"));
    }

    #[test]
    fn families_sorted_by_label() {
        let mut cfg = RawConfig::default();
        cfg.set("source.families=TMSV, 2-PSTMSC, 1-PSTMSV").unwrap();
        let labels: Vec<String> = cfg.families().unwrap().iter().map(|f| f.label()).collect();
        assert_eq!(labels, ["1-PSTMSV", "2-PSTMSC", "TMSV"]);
    }

    #[test]
    fn sweep_grid_choices() {
        let mut cfg = RawConfig::default();
        for kv in ["sweep.variable=tau", "sweep.lo=0.1", "sweep.hi=0.9", "sweep.step=0.1"] {
            cfg.set(kv).unwrap();
        }
        assert_eq!(cfg.sweep().unwrap().grid, Grid::Step(0.1));
        cfg.set("sweep.points=5").unwrap();
        assert!(cfg.sweep().is_err());
    }
}
