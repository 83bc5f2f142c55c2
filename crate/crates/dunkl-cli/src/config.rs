//! Run configuration: defaults, flat key-value config file, flag overrides.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use dunkl_core::MuParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

/// Validated settings shared by all subcommands.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub mu: MuParams,
    pub level_max: u32,
    pub quadrature_nodes: usize,
    pub tolerance: f64,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
}

/// Settings before validation; `None` means "not set here".
#[derive(Debug, Clone, Default)]
pub struct PartialConfig {
    pub mu_x: Option<f64>,
    pub mu_y: Option<f64>,
    pub level_max: Option<u32>,
    pub nodes: Option<usize>,
    pub tol: Option<f64>,
    pub format: Option<OutputFormat>,
    pub out: Option<PathBuf>,
}

impl PartialConfig {
    /// Parses `key = value` lines; `#` starts a comment, blank lines skip.
    pub fn from_file(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config file {}", path.display()))?;
        let mut cfg = Self::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                bail!("{}:{}: expected `key = value`", path.display(), lineno + 1);
            };
            let key = key.trim();
            let value = value.trim();
            let parse_f64 = || -> anyhow::Result<f64> {
                value
                    .parse()
                    .with_context(|| format!("{}:{}: bad number {value:?}", path.display(), lineno + 1))
            };
            match key {
                "mu_x" => cfg.mu_x = Some(parse_f64()?),
                "mu_y" => cfg.mu_y = Some(parse_f64()?),
                "level_max" => {
                    cfg.level_max = Some(value.parse().with_context(|| {
                        format!("{}:{}: bad integer {value:?}", path.display(), lineno + 1)
                    })?)
                }
                "nodes" => {
                    cfg.nodes = Some(value.parse().with_context(|| {
                        format!("{}:{}: bad integer {value:?}", path.display(), lineno + 1)
                    })?)
                }
                "tol" => cfg.tol = Some(parse_f64()?),
                "format" => {
                    cfg.format = Some(match value {
                        "csv" => OutputFormat::Csv,
                        "json" => OutputFormat::Json,
                        other => bail!(
                            "{}:{}: format must be csv or json, got {other:?}",
                            path.display(),
                            lineno + 1
                        ),
                    })
                }
                "out" => cfg.out = Some(PathBuf::from(value)),
                other => bail!(
                    "{}:{}: unknown config key {other:?}",
                    path.display(),
                    lineno + 1
                ),
            }
        }
        Ok(cfg)
    }

    /// Later layers win: `self` is the base, `over` the override.
    pub fn overridden_by(self, over: PartialConfig) -> PartialConfig {
        PartialConfig {
            mu_x: over.mu_x.or(self.mu_x),
            mu_y: over.mu_y.or(self.mu_y),
            level_max: over.level_max.or(self.level_max),
            nodes: over.nodes.or(self.nodes),
            tol: over.tol.or(self.tol),
            format: over.format.or(self.format),
            out: over.out.or(self.out),
        }
    }

    pub fn finalize(self) -> anyhow::Result<RunConfig> {
        let mu = MuParams::new(self.mu_x.unwrap_or(0.3), self.mu_y.unwrap_or(0.5))
            .map_err(|e| anyhow::anyhow!("{e}"))?;
        let quadrature_nodes = self.nodes.unwrap_or(64);
        if quadrature_nodes < 8 {
            bail!("nodes = {quadrature_nodes} is below the minimum of 8");
        }
        let tolerance = self.tol.unwrap_or(1e-10);
        if !(tolerance > 0.0) || !tolerance.is_finite() {
            bail!("tol = {tolerance} must be a positive finite number");
        }
        Ok(RunConfig {
            mu,
            level_max: self.level_max.unwrap_or(6),
            quadrature_nodes,
            tolerance,
            format: self.format.unwrap_or(OutputFormat::Csv),
            out: self.out,
        })
    }
}
