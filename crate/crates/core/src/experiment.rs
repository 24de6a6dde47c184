//! Experiment definitions: named profiles and the manifest every artifact points back to.

use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::evaluator::{baseline_opponent, EvalConfig};
use crate::fields::MicroParams;
use crate::nsga2::EAConfig;
use crate::scenario::{training_scenarios, ScenarioLayout};
use crate::sim::SimConfig;

const PAPER_TOML: &str = include_str!("../config/paper.toml");
const DESK_TOML: &str = include_str!("../config/desk.toml");

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Profile {
    Paper,
    Desk,
}

impl Profile {
    pub fn config(self) -> ExperimentConfig {
        let text = match self {
            Profile::Paper => PAPER_TOML,
            Profile::Desk => DESK_TOML,
        };
        text.parse().expect("bundled profile parses")
    }
}

impl FromStr for Profile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(Profile::Paper),
            "desk" => Ok(Profile::Desk),
            other => Err(Error::InvalidConfig(format!("unknown profile {other:?} (expected paper or desk)"))),
        }
    }
}

/// Everything needed to reproduce a batch of runs. `ea.seed` is ignored; each entry of
/// `seeds` drives one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub profile: String,
    pub seeds: Vec<u64>,
    /// Size of the random test set used for Monte Carlo and generalization.
    pub random_scenarios: usize,
    /// Number of random genomes in a Monte Carlo batch.
    pub random_genomes: usize,
    /// Generations between front snapshots in the progress plots.
    pub plot_interval: usize,
    #[serde(default)]
    pub ea: EAConfig,
    #[serde(default)]
    pub layout: ScenarioLayout,
    #[serde(default)]
    pub sim: SimConfig,
}

impl FromStr for ExperimentConfig {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let cfg: ExperimentConfig = toml::from_str(s)?;
        cfg.validate()?;
        Ok(cfg)
    }
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self> {
        std::fs::read_to_string(path)?.parse()
    }

    pub fn to_toml(&self) -> Result<String> {
        Ok(toml::to_string(self)?)
    }

    pub fn validate(&self) -> Result<()> {
        if self.seeds.is_empty() {
            return Err(Error::InvalidConfig("at least one seed is required".into()));
        }
        if self.plot_interval == 0 {
            return Err(Error::InvalidConfig("plot_interval must be positive".into()));
        }
        if self.layout.n_friends == 0 {
            return Err(Error::InvalidConfig("layout needs at least one friendly unit".into()));
        }
        self.ea.validate()?;
        self.sim.validate()
    }

    /// EA settings for the run driven by `seed`.
    pub fn ea_for(&self, seed: u64) -> EAConfig {
        EAConfig { seed, ..self.ea.clone() }
    }

    /// Fitness setup for `seed`: that seed's frozen training trio against the baseline.
    pub fn eval_for(&self, seed: u64) -> EvalConfig {
        EvalConfig::new(training_scenarios(seed, &self.layout).to_vec(), self.sim.clone())
    }
}

/// The configuration snapshot plus its content hash. Written as `manifest.json` next to the
/// artifacts; every CSV names the hash in its first line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub config: ExperimentConfig,
    pub opponent: MicroParams<f64>,
    pub hash: String,
}

impl RunManifest {
    pub fn new(config: ExperimentConfig) -> Result<Self> {
        config.validate()?;
        let opponent = baseline_opponent();
        let hash = content_hash(&config, &opponent)?;
        Ok(Self { config, opponent, hash })
    }

    pub fn with_seeds(mut self, seeds: Vec<u64>) -> Result<Self> {
        self.config.seeds = seeds;
        Self::new(self.config)
    }

    /// Fitness setup for `seed` with the opponent recorded in this manifest.
    pub fn eval_for(&self, seed: u64) -> EvalConfig {
        EvalConfig { opponent: self.opponent, ..self.config.eval_for(seed) }
    }

    pub fn short_hash(&self) -> &str {
        &self.hash[..12]
    }

    pub fn write(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        let json = serde_json::to_string_pretty(self)?;
        std::fs::write(dir.join(MANIFEST_FILE), json + "\n")?;
        Ok(())
    }

    pub fn read(dir: &Path) -> Result<Self> {
        let path = dir.join(MANIFEST_FILE);
        let text = std::fs::read_to_string(&path)
            .map_err(|e| Error::Artifact { path: path.display().to_string(), reason: e.to_string() })?;
        let m: RunManifest = serde_json::from_str(&text)?;
        let expected = content_hash(&m.config, &m.opponent)?;
        if expected != m.hash {
            return Err(Error::Artifact { path: path.display().to_string(), reason: format!("hash {} does not match contents {expected}", m.hash) });
        }
        Ok(m)
    }
}

pub const MANIFEST_FILE: &str = "manifest.json";

/// SHA-256 over a git-style `manifest <len>\0<canonical json>` header and body.
fn content_hash(config: &ExperimentConfig, opponent: &MicroParams<f64>) -> Result<String> {
    let body = serde_json::to_vec(&(config, opponent))?;
    let mut h = Sha256::new();
    h.update(format!("manifest {}\0", body.len()).as_bytes());
    h.update(&body);
    Ok(hex::encode(h.finalize()))
}
