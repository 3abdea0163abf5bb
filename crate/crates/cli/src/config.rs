use std::collections::BTreeMap;
use std::path::Path;

use hardy_core::eor::Setup;
use hardy_core::spacetime::{Boost, Geometry, SpacetimeEvent};
use hardy_core::tolerance::Tolerances;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Table,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Boosts {
    pub f_plus: f64,
    pub f_minus: f64,
}

impl Default for Boosts {
    fn default() -> Self {
        Boosts {
            f_plus: 0.5,
            f_minus: -0.5,
        }
    }
}

/// Contents of a `--config` file. Every section is optional; `[events]`, if
/// present, must name every landmark.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub seed: Option<u64>,
    pub format: Option<Format>,
    pub boosts: Boosts,
    pub tolerances: Tolerances,
    pub events: Option<BTreeMap<String, SpacetimeEvent>>,
}

impl RunConfig {
    pub fn from_toml_str(text: &str) -> Result<Self, CliError> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if !self.tolerances.is_valid() {
            return Err(CliError::Config("tolerances must be positive and finite".into()));
        }
        self.setup().map(|_| ())
    }

    pub fn geometry(&self) -> Result<Geometry, CliError> {
        match &self.events {
            None => Ok(Geometry::default()),
            Some(events) => Geometry::from_events(events.clone()).map_err(|e| CliError::Config(e.to_string())),
        }
    }

    pub fn setup(&self) -> Result<Setup, CliError> {
        let boost = |b: f64| Boost::new(b).map_err(|e| CliError::Config(e.to_string()));
        Ok(Setup {
            geometry: self.geometry()?,
            f_plus: boost(self.boosts.f_plus)?,
            f_minus: boost(self.boosts.f_minus)?,
            tol: self.tolerances,
        })
    }
}
