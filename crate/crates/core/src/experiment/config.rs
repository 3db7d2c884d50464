use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::ExperimentError;
use crate::circuit::AnsatzConfig;
use crate::train::{Evaluator, SpsaConfig};

/// Where sentences come from: a corpus file, or every sentence the lexicon
/// generates, labelled by a world.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorpusConfig {
    pub lexicon: PathBuf,
    #[serde(default)]
    pub path: Option<PathBuf>,
    #[serde(default = "default_fraction")]
    pub test_fraction: f64,
    #[serde(default)]
    pub world: WorldChoice,
    #[serde(default)]
    pub world_seed: u64,
}

fn default_fraction() -> f64 {
    0.34
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WorldChoice {
    #[default]
    Toy,
    Random,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// drives the split, the initial angles and the SPSA perturbations
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "one")]
    pub workers: usize,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
    #[serde(default)]
    pub checkpoint_every: usize,
    pub corpus: CorpusConfig,
    #[serde(default)]
    pub ansatz: AnsatzConfig,
    #[serde(default)]
    pub spsa: SpsaConfig,
    #[serde(default)]
    pub evaluator: Evaluator,
    #[serde(default)]
    pub questions: Vec<String>,
}

fn one() -> usize {
    1
}

impl ExperimentConfig {
    /// Parse TOML text. Relative paths are taken from `base`.
    pub fn from_toml(text: &str, base: &Path) -> Result<Self, ExperimentError> {
        let mut cfg: Self = toml::from_str(text).map_err(|e| ExperimentError::Config(e.to_string()))?;
        cfg.corpus.lexicon = base.join(&cfg.corpus.lexicon);
        if let Some(p) = &cfg.corpus.path {
            cfg.corpus.path = Some(base.join(p));
        }
        if let Some(p) = &cfg.output_dir {
            cfg.output_dir = Some(base.join(p));
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<(Self, String), ExperimentError> {
        let text = std::fs::read_to_string(path).map_err(|e| ExperimentError::Io(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new("."));
        Ok((Self::from_toml(&text, base)?, text))
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        let f = self.corpus.test_fraction;
        if !(f > 0.0 && f < 1.0) {
            return Err(ExperimentError::Config(format!("corpus.test_fraction must lie in (0, 1), got {f}")));
        }
        if self.workers == 0 {
            return Err(ExperimentError::Config("workers must be at least 1".into()));
        }
        if let Evaluator::Shots { shots: 0 } = self.evaluator {
            return Err(ExperimentError::Config("evaluator.shots must be positive".into()));
        }
        self.spsa.validate().map_err(ExperimentError::Config)?;
        self.ansatz.validate().map_err(|e| ExperimentError::Config(e.to_string()))?;
        if !self.corpus.lexicon.is_file() {
            return Err(ExperimentError::Config(format!(
                "lexicon {} not found",
                self.corpus.lexicon.display()
            )));
        }
        if let Some(p) = &self.corpus.path {
            if !p.is_file() {
                return Err(ExperimentError::Config(format!("corpus {} not found", p.display())));
            }
        }
        Ok(())
    }
}
