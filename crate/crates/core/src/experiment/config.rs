//! Flat `key = value` experiment configuration.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::calibration::{CalibrationSettings, ScalingBase};
use crate::error::{Error, Result};
use crate::market::DEFAULT_MONEY_SCALE;

/// One scenario run. Relative paths in a file are resolved against the
/// file's directory.
///
/// | key | default |
/// |---|---|
/// | `scenario` | required |
/// | `replications` | 1000 |
/// | `seed` | 0 |
/// | `quantity_unit_kt` | required |
/// | `money_scale` | 100 |
/// | `theta` | 0.5 |
/// | `reference_market` | required |
/// | `reference_year` | required |
/// | `scaling_base` | `observed-mean` (or `latest-year`) |
/// | `raw_dir` | `raw` |
/// | `data_dir` | `data` |
/// | `output_dir` | `out` |
/// | `workers` | 0 (all cores) |
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub scenario: String,
    pub replications: usize,
    pub seed: u64,
    pub quantity_unit_kt: f64,
    pub money_scale: i64,
    pub theta: f64,
    pub reference_market: String,
    pub reference_year: i32,
    pub scaling_base: ScalingBase,
    pub raw_dir: PathBuf,
    pub data_dir: PathBuf,
    pub output_dir: PathBuf,
    pub workers: usize,
}

fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Config(format!("{key}: cannot parse {value:?}")))
}

impl ExperimentConfig {
    pub fn parse_str(text: &str, base_dir: &Path) -> Result<Self> {
        let mut scenario = None;
        let mut quantity_unit_kt = None;
        let mut reference_market = None;
        let mut reference_year = None;
        let mut cfg = ExperimentConfig {
            scenario: String::new(),
            replications: 1000,
            seed: 0,
            quantity_unit_kt: 0.0,
            money_scale: DEFAULT_MONEY_SCALE,
            theta: 0.5,
            reference_market: String::new(),
            reference_year: 0,
            scaling_base: ScalingBase::default(),
            raw_dir: base_dir.join("raw"),
            data_dir: base_dir.join("data"),
            output_dir: base_dir.join("out"),
            workers: 0,
        };
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected `key = value`", n + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "scenario" => scenario = Some(value.to_string()),
                "replications" => cfg.replications = parse(key, value)?,
                "seed" => cfg.seed = parse(key, value)?,
                "quantity_unit_kt" => quantity_unit_kt = Some(parse(key, value)?),
                "money_scale" => cfg.money_scale = parse(key, value)?,
                "theta" => cfg.theta = parse(key, value)?,
                "reference_market" => reference_market = Some(value.to_string()),
                "reference_year" => reference_year = Some(parse(key, value)?),
                "scaling_base" => cfg.scaling_base = value.parse()?,
                "raw_dir" => cfg.raw_dir = base_dir.join(value),
                "data_dir" => cfg.data_dir = base_dir.join(value),
                "output_dir" => cfg.output_dir = base_dir.join(value),
                "workers" => cfg.workers = parse(key, value)?,
                other => return Err(Error::Config(format!("unknown key {other:?}"))),
            }
        }
        let missing = |k: &str| Error::Config(format!("missing required key {k:?}"));
        cfg.scenario = scenario.ok_or_else(|| missing("scenario"))?;
        cfg.quantity_unit_kt = quantity_unit_kt.ok_or_else(|| missing("quantity_unit_kt"))?;
        cfg.reference_market = reference_market.ok_or_else(|| missing("reference_market"))?;
        cfg.reference_year = reference_year.ok_or_else(|| missing("reference_year"))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse_str(&text, path.parent().unwrap_or(Path::new(".")))
    }

    pub fn validate(&self) -> Result<()> {
        if self.replications == 0 {
            return Err(Error::Config("replications must be ≥ 1".into()));
        }
        if !(self.quantity_unit_kt > 0.0) || self.money_scale <= 0 {
            return Err(Error::Config("quantity_unit_kt and money_scale must be positive".into()));
        }
        if !(self.theta >= 0.0) {
            return Err(Error::Config("theta must be ≥ 0".into()));
        }
        if self.scenario.is_empty() || self.reference_market.is_empty() {
            return Err(Error::Config("scenario and reference_market must be non-empty".into()));
        }
        Ok(())
    }

    pub fn settings(&self, reference_market: usize) -> CalibrationSettings {
        CalibrationSettings {
            quantity_unit: self.quantity_unit_kt,
            money_scale: self.money_scale,
            theta: self.theta,
            reference_market,
            reference_year: self.reference_year,
            scaling_base: self.scaling_base,
        }
    }

    /// The configuration as `key = value` lines (paths as given after
    /// resolution).
    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "scenario = {}", self.scenario);
        let _ = writeln!(s, "replications = {}", self.replications);
        let _ = writeln!(s, "seed = {}", self.seed);
        let _ = writeln!(s, "quantity_unit_kt = {}", self.quantity_unit_kt);
        let _ = writeln!(s, "money_scale = {}", self.money_scale);
        let _ = writeln!(s, "theta = {}", self.theta);
        let _ = writeln!(s, "reference_market = {}", self.reference_market);
        let _ = writeln!(s, "reference_year = {}", self.reference_year);
        let _ = writeln!(s, "scaling_base = {}", self.scaling_base);
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TEXT: &str = "\
# fixture
scenario = BAU
quantity_unit_kt = 250
reference_market = South Asia   # largest importer
reference_year = 2015
replications = 20
";

    #[test]
    fn parses_with_defaults() {
        let cfg = ExperimentConfig::parse_str(TEXT, Path::new("/tmp/x")).unwrap();
        assert_eq!(cfg.scenario, "BAU");
        assert_eq!(cfg.replications, 20);
        assert_eq!(cfg.reference_market, "South Asia");
        assert_eq!(cfg.money_scale, 100);
        assert_eq!(cfg.theta, 0.5);
        assert_eq!(cfg.data_dir, Path::new("/tmp/x/data"));
        assert_eq!(cfg.scaling_base, ScalingBase::ObservedMean);
    }

    #[test]
    fn rejects_bad_configs() {
        let base = Path::new(".");
        assert!(ExperimentConfig::parse_str("scenario = BAU\n", base).is_err());
        assert!(ExperimentConfig::parse_str(&format!("{TEXT}colour = red\n"), base).is_err());
        assert!(ExperimentConfig::parse_str(&format!("{TEXT}replications = 0\n"), base).is_err());
        assert!(ExperimentConfig::parse_str(&format!("{TEXT}seed = -1\n"), base).is_err());
        assert!(ExperimentConfig::parse_str(&format!("{TEXT}just words\n"), base).is_err());
        assert!(ExperimentConfig::parse_str(&format!("{TEXT}scaling_base = median\n"), base).is_err());
    }
}
