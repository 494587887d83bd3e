//! Run configuration: an optional JSON file provides defaults, and
//! command-line flags override field by field. The resolved values are
//! echoed into the run manifest so artifacts are self-describing.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

/// Everything a config file may set. All fields optional; a flag given on
/// the command line wins over the file value.
#[derive(Debug, Default, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub alpha: Option<f64>,
    pub k0: Option<f64>,
    #[serde(rename = "T")]
    pub horizon: Option<usize>,
    pub t_max: Option<usize>,
    pub t_grid: Option<Vec<usize>>,
    pub horizons: Option<Vec<usize>>,
    pub tolerance: Option<f64>,
    pub grid_points: Option<usize>,
    pub method: Option<String>,
    pub out: Option<PathBuf>,
    pub alpha_grid: Option<Vec<f64>>,
    pub k0_grid: Option<Vec<f64>>,
    #[serde(rename = "T_grid")]
    pub horizon_grid: Option<Vec<usize>>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config file {}", path.display()))?;
        serde_json::from_str(&text)
            .with_context(|| format!("parsing config file {}", path.display()))
    }
}

/// Flag value if present, else the file value, else a single-line
/// diagnostic naming the missing field.
pub fn require<T: Clone>(flag: Option<T>, file: Option<T>, name: &str) -> Result<T> {
    match flag.or(file) {
        Some(v) => Ok(v),
        None => bail!("missing required parameter `{name}` (flag or config file)"),
    }
}

/// Output directory precedence: OVERTAKE_OUT env var, then --out flag,
/// then the config file, then ./out.
pub fn resolve_out_dir(flag: Option<PathBuf>, file: Option<PathBuf>) -> PathBuf {
    if let Some(env) = std::env::var_os("OVERTAKE_OUT") {
        return PathBuf::from(env);
    }
    flag.or(file).unwrap_or_else(|| PathBuf::from("out"))
}
