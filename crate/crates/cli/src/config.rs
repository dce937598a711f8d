//! Run configuration and the optional JSON constants file.

use std::fs;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use phasespace_core::hta::PhysicalParams;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UnitSystem {
    Atomic,
    Custom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

/// Contents of a `--config` file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub unit_system: UnitSystem,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hbar: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e2: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub unit_system: UnitSystem,
    /// Constants with `l = 0`; commands set `l` per state.
    pub params: PhysicalParams,
    pub output_format: OutputFormat,
    pub output_path: Option<PathBuf>,
}

impl RunConfig {
    pub fn atomic(output_format: OutputFormat, output_path: Option<PathBuf>) -> Self {
        RunConfig {
            unit_system: UnitSystem::Atomic,
            params: PhysicalParams::atomic(0),
            output_format,
            output_path,
        }
    }

    pub fn load(
        config: Option<&Path>,
        output_format: OutputFormat,
        output_path: Option<PathBuf>,
    ) -> Result<Self, String> {
        let mut rc = Self::atomic(output_format, output_path);
        if let Some(path) = config {
            let text = fs::read_to_string(path)
                .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            let file: ConfigFile = serde_json::from_str(&text)
                .map_err(|e| format!("invalid config {}: {e}", path.display()))?;
            rc.apply(&file)?;
        }
        Ok(rc)
    }

    pub fn apply(&mut self, file: &ConfigFile) -> Result<(), String> {
        let given = [file.m, file.hbar, file.k, file.e2];
        match file.unit_system {
            UnitSystem::Atomic => {
                if given.iter().any(Option::is_some) {
                    return Err("atomic unit system takes no constants; use \"custom\"".into());
                }
                self.params = PhysicalParams::atomic(0);
            }
            UnitSystem::Custom => {
                let [Some(m), Some(hbar), Some(k), Some(e2)] = given else {
                    return Err("custom unit system needs m, hbar, k and e2".into());
                };
                let params = PhysicalParams {
                    mass: m,
                    hbar,
                    coulomb_k: k,
                    charge_sq: e2,
                    l: 0,
                };
                params
                    .validate()
                    .map_err(|_| "constants must be positive and finite".to_string())?;
                self.params = params;
            }
        }
        self.unit_system = file.unit_system;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<RunConfig, String> {
        let file: ConfigFile = serde_json::from_str(text).map_err(|e| e.to_string())?;
        let mut rc = RunConfig::atomic(OutputFormat::Json, None);
        rc.apply(&file)?;
        Ok(rc)
    }

    #[test]
    fn atomic_file() {
        let rc = parse(r#"{"unit_system": "atomic"}"#).unwrap();
        assert_eq!(rc.params, PhysicalParams::atomic(0));
    }

    #[test]
    fn custom_file() {
        let rc =
            parse(r#"{"unit_system": "custom", "m": 2, "hbar": 1, "k": 1, "e2": 0.5}"#).unwrap();
        assert_eq!(rc.unit_system, UnitSystem::Custom);
        assert_eq!(rc.params.mass, 2.0);
        assert_eq!(rc.params.charge_sq, 0.5);
    }

    #[test]
    fn rejected_files() {
        assert!(parse(r#"{"unit_system": "custom", "m": 2}"#).is_err());
        assert!(
            parse(r#"{"unit_system": "custom", "m": -1, "hbar": 1, "k": 1, "e2": 1}"#).is_err()
        );
        assert!(parse(r#"{"unit_system": "atomic", "m": 1}"#).is_err());
        assert!(parse(r#"{"unit_system": "si"}"#).is_err());
        assert!(parse(r#"{"unit_system": "atomic", "extra": 1}"#).is_err());
    }
}
