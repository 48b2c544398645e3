use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::control::ControllerKind;
use crate::error::{Error, Result};
use crate::sim::{Scenario, SimConfig};

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn parse<T: serde::de::DeserializeOwned>(path: &Path, text: &str) -> Result<T> {
    toml::from_str(text).map_err(|e| Error::config(path.display().to_string(), e.to_string().trim_end()))
}

fn resolve(base: &Path, p: &Path) -> PathBuf {
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.join(p)
    }
}

/// Parses a scenario file. An empty name becomes the file stem and a
/// relative wind trace path is taken relative to the file.
pub fn load_scenario(path: impl AsRef<Path>) -> Result<Scenario> {
    let path = path.as_ref();
    let mut scenario: Scenario = parse(path, &read(path)?)?;
    if scenario.name.is_empty() {
        scenario.name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    }
    let base = path.parent().unwrap_or(Path::new(""));
    if let Some(trace) = scenario.wind.as_mut().and_then(|w| w.trace_path.as_mut()) {
        *trace = resolve(base, trace);
    }
    scenario.validate().map_err(|e| Error::config(path.display().to_string(), e.to_string()))?;
    Ok(scenario)
}

/// Simulation settings file (all fields optional).
pub fn load_sim_config(path: impl AsRef<Path>) -> Result<SimConfig> {
    let path = path.as_ref();
    let config: SimConfig = parse(path, &read(path)?)?;
    config.validate().map_err(|e| Error::config(path.display().to_string(), e.to_string()))?;
    Ok(config)
}

/// Experiment matrix as written on disk. Empty `controllers` or
/// `feedforward` lists keep each scenario's own choice; an empty `seeds`
/// list means `0..seed_count`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MatrixFile {
    pub name: String,
    pub scenarios: Vec<PathBuf>,
    pub controllers: Vec<ControllerKind>,
    pub feedforward: Vec<bool>,
    pub seeds: Vec<u64>,
    pub seed_count: u64,
    pub sim: SimConfig,
}

impl Default for MatrixFile {
    fn default() -> Self {
        Self {
            name: String::new(),
            scenarios: Vec::new(),
            controllers: Vec::new(),
            feedforward: Vec::new(),
            seeds: Vec::new(),
            seed_count: 1,
            sim: SimConfig::default(),
        }
    }
}

/// A matrix with its scenarios loaded.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    pub name: String,
    pub scenarios: Vec<Scenario>,
    pub controllers: Vec<ControllerKind>,
    pub feedforward: Vec<bool>,
    pub seeds: Vec<u64>,
    pub sim: SimConfig,
}

impl Matrix {
    /// Checks everything that can be checked without simulating.
    pub fn validate(&self) -> Result<()> {
        if self.scenarios.is_empty() {
            return Err(Error::config(&self.name, "matrix lists no scenarios"));
        }
        if self.seeds.is_empty() {
            return Err(Error::config(&self.name, "matrix has no seeds"));
        }
        self.sim.validate()?;
        let mut names: Vec<&str> = self.scenarios.iter().map(|s| s.name.as_str()).collect();
        names.sort_unstable();
        if let Some(w) = names.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::config(&self.name, format!("duplicate scenario name '{}'", w[0])));
        }
        for s in &self.scenarios {
            s.validate()?;
        }
        Ok(())
    }
}

pub fn load_matrix(path: impl AsRef<Path>) -> Result<Matrix> {
    let path = path.as_ref();
    let file: MatrixFile = parse(path, &read(path)?)?;
    let base = path.parent().unwrap_or(Path::new(""));
    let scenarios = file.scenarios.iter().map(|p| load_scenario(resolve(base, p))).collect::<Result<Vec<_>>>()?;
    let seeds = if file.seeds.is_empty() { (0..file.seed_count).collect() } else { file.seeds };
    let name = if file.name.is_empty() {
        path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
    } else {
        file.name
    };
    let matrix = Matrix {
        name,
        scenarios,
        controllers: file.controllers,
        feedforward: file.feedforward,
        seeds,
        sim: file.sim,
    };
    matrix.validate().map_err(|e| match e {
        e @ Error::Config { .. } => e,
        other => Error::config(path.display().to_string(), other.to_string()),
    })?;
    Ok(matrix)
}
