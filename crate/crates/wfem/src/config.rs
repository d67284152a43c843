//! Run options shared by the command line and TOML config files.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::Args;
use serde::Deserialize;
use wfem_core::benchmark::StudyConfig;

/// Every field is optional so that a config file and flags can be merged;
/// flags win. Keys in the file are the flag names, e.g. `nu-star = -0.275`.
#[derive(Debug, Clone, Default, PartialEq, Args, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct RunOptions {
    /// Benchmark corner: 1, 2 or 3.
    #[arg(long = "case")]
    pub case: Option<usize>,
    /// 1 for the convective form, 0 for the rotation form.
    #[arg(long)]
    pub gamma: Option<u8>,
    /// Weight exponent of the bilinear forms and the error norm.
    #[arg(long)]
    pub nu: Option<f64>,
    #[arg(long = "nu-star", allow_negative_numbers = true)]
    pub nu_star: Option<f64>,
    /// Defaults to nu-star.
    #[arg(long = "mu-star", allow_negative_numbers = true)]
    pub mu_star: Option<f64>,
    #[arg(long)]
    pub delta: Option<f64>,
    /// Mesh steps, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub levels: Option<Vec<f64>>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub mu: Option<f64>,
    /// Node-error thresholds, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub thresholds: Option<Vec<f64>>,
    /// Krylov dimension of the inner GMRES.
    #[arg(long = "gmres-dim")]
    pub gmres_dim: Option<usize>,
    /// GMRES cycles per Uzawa step.
    #[arg(long = "gmres-cycles")]
    pub gmres_cycles: Option<usize>,
    /// Richardson sweeps of the pressure correction.
    #[arg(long = "richardson-steps")]
    pub richardson_steps: Option<usize>,
    #[arg(long = "picard-max")]
    pub picard_max: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl RunOptions {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).context("parsing config")
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::from_toml(&text).with_context(|| format!("in {}", path.display()))
    }

    /// Fields set here take precedence over `base`.
    pub fn over(self, base: RunOptions) -> RunOptions {
        RunOptions {
            case: self.case.or(base.case),
            gamma: self.gamma.or(base.gamma),
            nu: self.nu.or(base.nu),
            nu_star: self.nu_star.or(base.nu_star),
            mu_star: self.mu_star.or(base.mu_star),
            delta: self.delta.or(base.delta),
            levels: self.levels.or(base.levels),
            alpha: self.alpha.or(base.alpha),
            mu: self.mu.or(base.mu),
            thresholds: self.thresholds.or(base.thresholds),
            gmres_dim: self.gmres_dim.or(base.gmres_dim),
            gmres_cycles: self.gmres_cycles.or(base.gmres_cycles),
            richardson_steps: self.richardson_steps.or(base.richardson_steps),
            picard_max: self.picard_max.or(base.picard_max),
            out: self.out.or(base.out),
        }
    }

    pub fn out_dir(&self) -> PathBuf {
        self.out.clone().unwrap_or_else(|| PathBuf::from("out"))
    }

    /// Study configuration with unset fields at their classical defaults.
    pub fn study(&self) -> Result<StudyConfig> {
        let m = self.case.unwrap_or(1);
        let gamma = self.gamma.unwrap_or(1);
        if gamma > 1 {
            bail!("gamma must be 0 or 1, got {gamma}");
        }
        let mut c = StudyConfig::classical(m, gamma);
        c.nu = self.nu.unwrap_or(c.nu);
        c.nu_star = self.nu_star.unwrap_or(c.nu_star);
        c.mu_star = self.mu_star.unwrap_or(c.nu_star);
        c.delta = self.delta.unwrap_or(c.delta);
        c.alpha = self.alpha.unwrap_or(c.alpha);
        c.mu = self.mu.unwrap_or(c.mu);
        if let Some(l) = &self.levels {
            if l.is_empty() || l.iter().any(|&h| !(h > 0.0)) {
                bail!("levels must be positive mesh steps");
            }
            c.levels = l.clone();
        }
        if let Some(t) = &self.thresholds {
            if t.windows(2).any(|w| w[0] > w[1]) {
                bail!("thresholds must be ascending");
            }
            c.thresholds = t.clone();
        }
        if let Some(s) = self.gmres_dim {
            c.picard.uzawa.gmres.dim = s;
        }
        if let Some(n) = self.gmres_cycles {
            c.picard.uzawa.gmres.max_restarts = n;
        }
        if let Some(n) = self.richardson_steps {
            c.picard.uzawa.richardson_steps = n;
        }
        if let Some(n) = self.picard_max {
            c.picard.max_iter = n;
        }
        c.params().validate()?;
        c.case()?;
        Ok(c)
    }
}
