//! JSON run configuration for `symcut sweep --config`.

use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use serde::Deserialize;
use symcut_core::{CheckId, EquivBundleCP1, GridSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
    Md,
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    pub path: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    #[serde(default)]
    bundles: Vec<EquivBundleCP1>,
    grid: Option<GridSpec>,
    #[serde(default)]
    checks: Vec<String>,
    output: Option<OutputSpec>,
    #[serde(default)]
    fail_fast: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub bundles: Vec<EquivBundleCP1>,
    pub grid: Option<GridSpec>,
    pub checks: Vec<CheckId>,
    pub output: Option<OutputSpec>,
    pub fail_fast: bool,
}

impl RunConfig {
    /// Parses and validates a config. Checks default to `all` when the list
    /// is absent; unknown check ids are rejected here.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawConfig = serde_json::from_str(text).context("invalid run config")?;
        if raw.bundles.is_empty() && raw.grid.is_none() {
            bail!("run config needs at least one bundle or a grid");
        }
        let checks = if raw.checks.is_empty() {
            CheckId::ALL.to_vec()
        } else {
            CheckId::parse_list(&raw.checks.join(","))?
        };
        Ok(Self {
            bundles: raw.bundles,
            grid: raw.grid,
            checks,
            output: raw.output,
            fail_fast: raw.fail_fast,
        })
    }

    /// Grid points first (lexicographic), then the listed bundles.
    pub fn points(&self) -> Vec<EquivBundleCP1> {
        let mut pts = self.grid.map(|g| g.points()).unwrap_or_default();
        pts.extend(self.bundles.iter().cloned());
        pts
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_grid_config() {
        let c = RunConfig::from_json(
            r#"{"grid": {"rp_range": "-1..1", "rq_range": "0..0"},
                "checks": ["morse", "mv"],
                "output": {"path": "out.csv", "format": "csv"},
                "fail_fast": true}"#,
        )
        .unwrap();
        assert_eq!(c.points().len(), 3);
        assert_eq!(c.checks, vec![CheckId::Morse, CheckId::Mv]);
        assert_eq!(c.output.unwrap().format, Format::Csv);
        assert!(c.fail_fast);
    }

    #[test]
    fn bundles_and_default_checks() {
        let c = RunConfig::from_json(r#"{"bundles": ["3:1,0:-2", "2:2"]}"#).unwrap();
        assert_eq!(c.points().len(), 2);
        assert_eq!(c.checks, CheckId::ALL.to_vec());
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(RunConfig::from_json(r#"{"checks": ["all"]}"#).is_err());
        assert!(RunConfig::from_json(r#"{"bundles": ["2:2"], "checks": ["nope"]}"#).is_err());
        assert!(RunConfig::from_json(r#"{"bundles": ["2"]}"#).is_err());
        assert!(
            RunConfig::from_json(r#"{"grid": {"rp_range": "2..1", "rq_range": "0..0"}}"#).is_err()
        );
        assert!(RunConfig::from_json(r#"{"bundles": ["2:2"], "extra": 1}"#).is_err());
        assert!(
            RunConfig::from_json(r#"{"bundles": ["2:2"], "output": {"format": "xml"}}"#).is_err()
        );
    }
}
