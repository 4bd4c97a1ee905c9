//! Scenario configuration: TOML file with flat key paths, environment
//! overrides under the `TWISTOR_` prefix, and command-line flags on top.

use anyhow::{bail, Context};
use serde::Deserialize;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
    Markdown,
}

impl OutputFormat {
    pub fn parse(s: &str) -> anyhow::Result<Self> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            "markdown" => Ok(OutputFormat::Markdown),
            other => bail!("unknown format `{other}` (expected json, csv or markdown)"),
        }
    }
}

/// File-level schema; every field optional, flat key paths except the
/// `samples` table.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    manifold: Option<String>,
    structure: Option<String>,
    epsilon: Option<i8>,
    epsilon1: Option<i8>,
    epsilon2: Option<i8>,
    phi: Option<f64>,
    t: Option<Vec<f64>>,
    seed: Option<u64>,
    tolerance: Option<f64>,
    format: Option<String>,
    out: Option<String>,
    samples: Option<SamplesConfig>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct SamplesConfig {
    base_points: Option<usize>,
    fiber_angles: Option<usize>,
}

/// Fully resolved scenario.
#[derive(Debug, Clone)]
pub struct Scenario {
    /// Catalog entry id or "all".
    pub manifold: String,
    /// Structure name filter or "all".
    pub structure: String,
    pub epsilon: i8,
    pub epsilon1: i8,
    pub epsilon2: i8,
    pub phi: f64,
    pub t: Vec<f64>,
    pub seed: u64,
    /// Global residual tolerance override; checks fall back to their own
    /// defaults when unset.
    pub tolerance: Option<f64>,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
    pub base_points: usize,
    pub fiber_angles: usize,
}

impl Default for Scenario {
    fn default() -> Self {
        Scenario {
            manifold: "all".into(),
            structure: "all".into(),
            epsilon: 1,
            epsilon1: 1,
            epsilon2: 1,
            phi: std::f64::consts::FRAC_PI_6,
            t: vec![0.5, 1.0, 2.0],
            seed: 42,
            tolerance: None,
            format: OutputFormat::Json,
            out: None,
            base_points: 8,
            fiber_angles: 16,
        }
    }
}

/// Command-line overrides; `None` keeps the file/env/default value.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub manifold: Option<String>,
    pub structure: Option<String>,
    pub t: Option<Vec<f64>>,
    pub seed: Option<u64>,
    pub tolerance: Option<f64>,
    pub format: Option<String>,
    pub out: Option<PathBuf>,
}

pub const ENV_PREFIX: &str = "TWISTOR_";

impl Scenario {
    /// Resolution order: defaults < config file < environment < flags.
    pub fn resolve(config_path: Option<&Path>, overrides: &Overrides) -> anyhow::Result<Scenario> {
        let mut s = Scenario::default();
        if let Some(path) = config_path {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("cannot read config file {}", path.display()))?;
            let file: FileConfig = toml::from_str(&text)
                .with_context(|| format!("cannot parse config file {}", path.display()))?;
            s.apply_file(file)?;
        }
        s.apply_env()?;
        s.apply_overrides(overrides)?;
        s.validate()?;
        Ok(s)
    }

    fn apply_file(&mut self, f: FileConfig) -> anyhow::Result<()> {
        if let Some(v) = f.manifold {
            self.manifold = v;
        }
        if let Some(v) = f.structure {
            self.structure = v;
        }
        if let Some(v) = f.epsilon {
            self.epsilon = v;
        }
        if let Some(v) = f.epsilon1 {
            self.epsilon1 = v;
        }
        if let Some(v) = f.epsilon2 {
            self.epsilon2 = v;
        }
        if let Some(v) = f.phi {
            self.phi = v;
        }
        if let Some(v) = f.t {
            self.t = v;
        }
        if let Some(v) = f.seed {
            self.seed = v;
        }
        if let Some(v) = f.tolerance {
            self.tolerance = Some(v);
        }
        if let Some(v) = f.format {
            self.format = OutputFormat::parse(&v)?;
        }
        if let Some(v) = f.out {
            self.out = Some(PathBuf::from(v));
        }
        if let Some(sm) = f.samples {
            if let Some(v) = sm.base_points {
                self.base_points = v;
            }
            if let Some(v) = sm.fiber_angles {
                self.fiber_angles = v;
            }
        }
        Ok(())
    }

    fn apply_env(&mut self) -> anyhow::Result<()> {
        let get = |key: &str| std::env::var(format!("{ENV_PREFIX}{key}")).ok();
        if let Some(v) = get("MANIFOLD") {
            self.manifold = v;
        }
        if let Some(v) = get("STRUCTURE") {
            self.structure = v;
        }
        if let Some(v) = get("EPSILON") {
            self.epsilon = v.parse().context("TWISTOR_EPSILON must be ±1")?;
        }
        if let Some(v) = get("EPSILON1") {
            self.epsilon1 = v.parse().context("TWISTOR_EPSILON1 must be ±1")?;
        }
        if let Some(v) = get("EPSILON2") {
            self.epsilon2 = v.parse().context("TWISTOR_EPSILON2 must be ±1")?;
        }
        if let Some(v) = get("PHI") {
            self.phi = v.parse().context("TWISTOR_PHI must be a float")?;
        }
        if let Some(v) = get("T") {
            self.t = parse_t_list(&v)?;
        }
        if let Some(v) = get("SEED") {
            self.seed = v.parse().context("TWISTOR_SEED must be an integer")?;
        }
        if let Some(v) = get("TOLERANCE") {
            self.tolerance = Some(v.parse().context("TWISTOR_TOLERANCE must be a float")?);
        }
        if let Some(v) = get("FORMAT") {
            self.format = OutputFormat::parse(&v)?;
        }
        if let Some(v) = get("OUT") {
            self.out = Some(PathBuf::from(v));
        }
        if let Some(v) = get("BASE_POINTS") {
            self.base_points = v.parse().context("TWISTOR_BASE_POINTS must be an integer")?;
        }
        if let Some(v) = get("FIBER_ANGLES") {
            self.fiber_angles = v
                .parse()
                .context("TWISTOR_FIBER_ANGLES must be an integer")?;
        }
        Ok(())
    }

    fn apply_overrides(&mut self, o: &Overrides) -> anyhow::Result<()> {
        if let Some(v) = &o.manifold {
            self.manifold = v.clone();
        }
        if let Some(v) = &o.structure {
            self.structure = v.clone();
        }
        if let Some(v) = &o.t {
            self.t = v.clone();
        }
        if let Some(v) = o.seed {
            self.seed = v;
        }
        if let Some(v) = o.tolerance {
            self.tolerance = Some(v);
        }
        if let Some(v) = &o.format {
            self.format = OutputFormat::parse(v)?;
        }
        if let Some(v) = &o.out {
            self.out = Some(v.clone());
        }
        Ok(())
    }

    fn validate(&self) -> anyhow::Result<()> {
        if self.t.is_empty() {
            bail!("the t list must not be empty");
        }
        for &t in &self.t {
            if !(t > 0.0) {
                bail!("fibre scales must be positive, got {t}");
            }
        }
        if self.base_points == 0 || self.fiber_angles == 0 {
            bail!("sample counts must be at least 1");
        }
        if ![1i8, -1].contains(&self.epsilon)
            || ![1i8, -1].contains(&self.epsilon1)
            || ![1i8, -1].contains(&self.epsilon2)
        {
            bail!("sign parameters must be ±1");
        }
        if self.manifold != "all"
            && !twistor_geom::catalog::entry_ids().contains(&self.manifold.as_str())
        {
            bail!(
                "unknown manifold `{}`; known: {:?} or `all`",
                self.manifold,
                twistor_geom::catalog::entry_ids()
            );
        }
        Ok(())
    }

    /// Catalog ids selected by the scenario.
    pub fn manifold_ids(&self) -> Vec<&'static str> {
        twistor_geom::catalog::entry_ids()
            .into_iter()
            .filter(|id| self.manifold == "all" || self.manifold == *id)
            .collect()
    }
}

pub fn parse_t_list(s: &str) -> anyhow::Result<Vec<f64>> {
    s.split(',')
        .map(|part| {
            part.trim()
                .parse::<f64>()
                .with_context(|| format!("bad t value `{part}`"))
        })
        .collect()
}
