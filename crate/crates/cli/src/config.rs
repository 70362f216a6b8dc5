//! Optional TOML run configuration. Command-line flags take precedence.
//!
//! ```toml
//! out = "meshes"
//! formats = ["obj", "ply"]
//! tol_h = 1e-8
//! eps_s = 1e-12
//! manifest = "catalog.tsv"
//!
//! [grids]
//! phi9 = "-2:2:60,-2:2:60"
//! ```

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use minsurf::legendre::{GridSpec, DEFAULT_EPS_SINGULAR};
use serde::Deserialize;

use crate::Format;

pub const DEFAULT_TOL_H: f64 = 1e-8;
pub const DEFAULT_OUT: &str = "minsurf-out";
pub const DEFAULT_MANIFEST: &str = "minsurf-catalog.tsv";

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    out: Option<PathBuf>,
    formats: Option<Vec<Format>>,
    tol_h: Option<f64>,
    eps_s: Option<f64>,
    manifest: Option<PathBuf>,
    #[serde(default)]
    grids: BTreeMap<String, String>,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub out: PathBuf,
    pub formats: Vec<Format>,
    pub tol_h: f64,
    pub eps_s: f64,
    pub manifest: PathBuf,
    pub grids: BTreeMap<String, GridSpec>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            out: PathBuf::from(DEFAULT_OUT),
            formats: Format::ALL.to_vec(),
            tol_h: DEFAULT_TOL_H,
            eps_s: DEFAULT_EPS_SINGULAR,
            manifest: PathBuf::from(DEFAULT_MANIFEST),
            grids: BTreeMap::new(),
        }
    }
}

fn check_positive(label: &str, v: f64) -> Result<f64> {
    if !(v.is_finite() && v > 0.0) {
        bail!("{label} must be a positive number, got {v}");
    }
    Ok(v)
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        Self::from_toml(&text).with_context(|| format!("in config {}", path.display()))
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let raw: RawConfig = toml::from_str(text)?;
        let mut cfg = Self::default();
        if let Some(out) = raw.out {
            cfg.out = out;
        }
        if let Some(formats) = raw.formats {
            if formats.is_empty() {
                bail!("formats must not be empty");
            }
            cfg.formats = formats;
        }
        if let Some(v) = raw.tol_h {
            cfg.tol_h = check_positive("tol_h", v)?;
        }
        if let Some(v) = raw.eps_s {
            cfg.eps_s = check_positive("eps_s", v)?;
        }
        if let Some(m) = raw.manifest {
            cfg.manifest = m;
        }
        for (name, grid) in raw.grids {
            let spec = grid.parse::<GridSpec>().with_context(|| format!("grid for {name}"))?;
            cfg.grids.insert(name, spec);
        }
        Ok(cfg)
    }

    pub fn set_tol_h(&mut self, v: f64) -> Result<()> {
        self.tol_h = check_positive("--tol-h", v)?;
        Ok(())
    }

    pub fn set_eps_s(&mut self, v: f64) -> Result<()> {
        self.eps_s = check_positive("--eps-s", v)?;
        Ok(())
    }

    pub fn grid_for(&self, name: &str) -> GridSpec {
        self.grids.get(name).copied().unwrap_or_default()
    }
}
