//! Experiment configuration: registry defaults, the flat `key = value`
//! config-file format, and command-line overrides.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub experiment: String,
    /// Training length: the training and testing trajectories have `m + 1`
    /// points each.
    pub m: usize,
    /// Snippet-ensemble size for the autocorrelation protocol.
    pub ensemble: usize,
    /// Depth grid for the error curve (for the spectrum experiment: the
    /// depths at which spectra are written).
    pub depths: Vec<usize>,
    /// Depth used for the autocorrelation comparison.
    pub d_autocorr: usize,
    /// Largest autocorrelation lag.
    pub n_max: usize,
    pub seed: u64,
    /// Sampling times of the chaotic flow (ignored by the other systems).
    pub flow_times: Vec<f64>,
    pub rk4_step: f64,
    /// Prediction horizon, in flow-time units, for the multistep error
    /// curves of the chaotic system.
    pub horizon: f64,
    /// Delay-depth-times-flow-time grid for the chaotic error curves.
    pub dt_grid: Vec<f64>,
    /// Overrides for the trigonometric observable amplitudes, when set.
    pub obs_a: Option<f64>,
    pub obs_b: Option<f64>,
    pub out_dir: PathBuf,
    pub force: bool,
    pub plot: bool,
}

pub fn registered_experiments() -> &'static [&'static str] {
    &[
        "torus-f1",
        "torus-f2",
        "twist",
        "twist-weak",
        "odometer",
        "odometer-spectrum",
        "lorenz-x1",
        "lorenz-bump",
    ]
}

fn dt_grid_default() -> Vec<f64> {
    (1..=20).map(|k| 0.5 * k as f64).collect()
}

/// Registry defaults. Training lengths and ensemble sizes follow the
/// standard protocol (`m = N = 10^4`) except where noted; the chaotic runs
/// default to the downscaled `m = 2*10^4`, `N = 10^4`, recorded in the run
/// manifest.
pub fn default_config(name: &str) -> Option<ExperimentConfig> {
    let base = ExperimentConfig {
        experiment: name.to_string(),
        m: 10_000,
        ensemble: 10_000,
        depths: (1..=40).collect(),
        d_autocorr: 21,
        n_max: 63,
        seed: 1,
        flow_times: vec![0.05, 0.1, 0.2, 0.4],
        rk4_step: crate::systems::DEFAULT_RK4_STEP,
        horizon: 0.4,
        dt_grid: dt_grid_default(),
        obs_a: None,
        obs_b: None,
        out_dir: PathBuf::from("runs").join(name),
        force: false,
        plot: false,
    };
    let cfg = match name {
        "torus-f1" | "torus-f2" => base,
        "twist" | "twist-weak" => ExperimentConfig {
            depths: (1..=100).collect(),
            ..base
        },
        "odometer" => ExperimentConfig {
            ensemble: 100_000,
            d_autocorr: 51,
            n_max: 153,
            ..base
        },
        "odometer-spectrum" => ExperimentConfig {
            depths: vec![64, 250],
            ..base
        },
        "lorenz-x1" => ExperimentConfig {
            m: 20_000,
            ..base
        },
        "lorenz-bump" => ExperimentConfig {
            m: 20_000,
            flow_times: vec![0.05],
            n_max: 80,
            ..base
        },
        _ => return None,
    };
    Some(cfg)
}

/// Parses `1..40` (inclusive) or a comma list `1,2,5`.
pub fn parse_depths(text: &str) -> CliResult<Vec<usize>> {
    let text = text.trim();
    if let Some((lo, hi)) = text.split_once("..") {
        let lo: usize = lo
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("bad depth range start {lo:?}")))?;
        let hi: usize = hi
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("bad depth range end {hi:?}")))?;
        if lo == 0 || hi < lo {
            return Err(CliError::Usage(format!("bad depth range {text:?}")));
        }
        return Ok((lo..=hi).collect());
    }
    let mut out = Vec::new();
    for part in text.split(',') {
        let d: usize = part
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("bad depth {part:?}")))?;
        if d == 0 {
            return Err(CliError::Usage("depths must be positive".into()));
        }
        out.push(d);
    }
    if out.is_empty() {
        return Err(CliError::Usage("empty depth list".into()));
    }
    Ok(out)
}

fn parse_float_list(text: &str) -> CliResult<Vec<f64>> {
    let mut out = Vec::new();
    for part in text.split(',') {
        out.push(
            part.trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("bad number {part:?}")))?,
        );
    }
    Ok(out)
}

/// Reads a flat `key = value` file; `#` starts a comment.
pub fn read_key_values(path: &Path) -> CliResult<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path)?;
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::Usage(format!(
                "{}: line {}: expected `key = value`",
                path.display(),
                lineno + 1
            ))
        })?;
        map.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(map)
}

macro_rules! parse_into {
    ($map:expr, $key:literal, $slot:expr) => {
        if let Some(v) = $map.get($key) {
            $slot = v
                .parse()
                .map_err(|_| CliError::Usage(format!(concat!("bad ", $key, " value {:?}"), v)))?;
        }
    };
}

/// Applies config-file keys on top of a config. Unknown keys are rejected.
pub fn apply_key_values(
    cfg: &mut ExperimentConfig,
    map: &BTreeMap<String, String>,
) -> CliResult<()> {
    for key in map.keys() {
        match key.as_str() {
            "experiment" | "m" | "ensemble" | "depths" | "d_autocorr" | "n_max" | "seed"
            | "flow_times" | "rk4_step" | "horizon" | "dt_grid" | "obs_a" | "obs_b" | "out" => {}
            other => return Err(CliError::Usage(format!("unknown config key {other:?}"))),
        }
    }
    parse_into!(map, "m", cfg.m);
    parse_into!(map, "ensemble", cfg.ensemble);
    parse_into!(map, "d_autocorr", cfg.d_autocorr);
    parse_into!(map, "n_max", cfg.n_max);
    parse_into!(map, "seed", cfg.seed);
    parse_into!(map, "rk4_step", cfg.rk4_step);
    parse_into!(map, "horizon", cfg.horizon);
    if let Some(v) = map.get("depths") {
        cfg.depths = parse_depths(v)?;
    }
    if let Some(v) = map.get("flow_times") {
        cfg.flow_times = parse_float_list(v)?;
    }
    if let Some(v) = map.get("dt_grid") {
        cfg.dt_grid = parse_float_list(v)?;
    }
    if let Some(v) = map.get("obs_a") {
        cfg.obs_a = Some(
            v.parse()
                .map_err(|_| CliError::Usage(format!("bad obs_a value {v:?}")))?,
        );
    }
    if let Some(v) = map.get("obs_b") {
        cfg.obs_b = Some(
            v.parse()
                .map_err(|_| CliError::Usage(format!("bad obs_b value {v:?}")))?,
        );
    }
    if let Some(v) = map.get("out") {
        cfg.out_dir = PathBuf::from(v);
    }
    Ok(())
}
