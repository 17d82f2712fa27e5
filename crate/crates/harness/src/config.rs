//! Session config documents (TOML).

use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use touchchart_core::config::DEFAULT_SCREEN;
use touchchart_core::{
    parse_dataset, ChartModel, ChartSpec, DtmConfig, Engine, EngineConfig, GridSettings, ScreenSize,
    SnfConfig, SonificationConfig,
};

use crate::error::HarnessError;

pub const CONFIG_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScreenSettings {
    pub width: u32,
    pub height: u32,
}

impl Default for ScreenSettings {
    fn default() -> Self {
        Self {
            width: DEFAULT_SCREEN.width,
            height: DEFAULT_SCREEN.height,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SessionConfig {
    pub format_version: u32,
    /// Relative paths resolve against the config file's directory.
    pub csv_path: String,
    pub chart: ChartSpec,
    #[serde(default)]
    pub grid: GridSettings,
    #[serde(default)]
    pub screen: ScreenSettings,
    #[serde(default)]
    pub snf: SnfConfig,
    #[serde(default)]
    pub dtm: DtmConfig,
    #[serde(default)]
    pub sonification: SonificationConfig,
}

impl SessionConfig {
    pub fn parse(text: &str, path: &Path) -> Result<Self, HarnessError> {
        let cfg: SessionConfig = toml::from_str(text).map_err(|e| HarnessError::Config {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        if cfg.format_version != CONFIG_VERSION {
            return Err(HarnessError::UnsupportedVersion {
                what: "config",
                found: cfg.format_version,
                expected: CONFIG_VERSION,
            });
        }
        if cfg.screen.width == 0 || cfg.screen.height == 0 {
            return Err(HarnessError::Config {
                path: path.to_path_buf(),
                message: "screen dimensions must be positive".into(),
            });
        }
        Ok(cfg)
    }

    pub fn engine_config(&self, model: &ChartModel) -> EngineConfig {
        EngineConfig {
            grid: self.grid.resolve(model),
            screen: ScreenSize::new(self.screen.width, self.screen.height),
            snf: self.snf,
            dtm: self.dtm,
            sonification: self.sonification,
        }
    }
}

/// A config with its dataset loaded and an engine built.
#[derive(Debug, Clone)]
pub struct LoadedSession {
    pub config: SessionConfig,
    pub csv_path: PathBuf,
    pub engine: Arc<Engine>,
    /// Hex SHA-256 over the canonical config and the CSV bytes.
    pub hash: String,
}

pub fn config_hash(config: &SessionConfig, csv: &[u8]) -> String {
    let canonical = serde_json::to_vec(config).expect("config serializes");
    let mut h = Sha256::new();
    h.update(&canonical);
    h.update(b"\n");
    h.update(csv);
    hex::encode(h.finalize())
}

pub fn read_file(path: &Path) -> Result<String, HarnessError> {
    std::fs::read_to_string(path).map_err(|source| HarnessError::Io {
        path: path.to_path_buf(),
        source,
    })
}

impl LoadedSession {
    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let text = read_file(path)?;
        let config = SessionConfig::parse(&text, path)?;
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        let csv_path = base.join(&config.csv_path);
        let csv = read_file(&csv_path)?;
        Self::from_parts(config, csv_path, &csv)
    }

    pub fn from_parts(config: SessionConfig, csv_path: PathBuf, csv: &str) -> Result<Self, HarnessError> {
        let model = parse_dataset(csv, &config.chart).map_err(|source| HarnessError::Model {
            path: csv_path.clone(),
            source,
        })?;
        let engine_config = config.engine_config(&model);
        let hash = config_hash(&config, csv.as_bytes());
        log::debug!("loaded {} points from {}", model.points.len(), csv_path.display());
        Ok(Self {
            config,
            csv_path,
            engine: Arc::new(Engine::new(model, engine_config)),
            hash,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
format_version = 1
csv_path = "d.csv"

[chart]
kind = "scatter"
title = "T"
x_label = "x"
y_label = "y"
x_kind = "numeric"
series_names = ["a"]
x_column = "x"
y_column = "y"
"#;

    #[test]
    fn minimal_config_gets_defaults() {
        let cfg = SessionConfig::parse(MINIMAL, Path::new("c.toml")).unwrap();
        assert_eq!(cfg.screen, ScreenSettings { width: 390, height: 844 });
        assert_eq!(cfg.dtm, DtmConfig::default());
        assert_eq!(cfg.grid, GridSettings::default());
    }

    #[test]
    fn unknown_keys_rejected() {
        for extra in ["bogus = 1\n", "[dtm]\nmin_rad = 3\n", "[screen]\ndepth = 3\n"] {
            let text = format!("{MINIMAL}\n{extra}");
            let text = if extra.starts_with("bogus") {
                format!("{extra}{MINIMAL}")
            } else {
                text
            };
            let err = SessionConfig::parse(&text, Path::new("c.toml")).unwrap_err();
            assert!(matches!(err, HarnessError::Config { .. }), "{extra}: {err}");
        }
    }

    #[test]
    fn wrong_version_rejected() {
        let text = MINIMAL.replace("format_version = 1", "format_version = 7");
        let err = SessionConfig::parse(&text, Path::new("c.toml")).unwrap_err();
        assert!(matches!(err, HarnessError::UnsupportedVersion { found: 7, .. }));
    }

    #[test]
    fn hash_tracks_config_and_data() {
        let cfg = SessionConfig::parse(MINIMAL, Path::new("c.toml")).unwrap();
        let a = config_hash(&cfg, b"x,y\n1,2\n");
        assert_eq!(a.len(), 64);
        assert_eq!(a, config_hash(&cfg, b"x,y\n1,2\n"));
        assert_ne!(a, config_hash(&cfg, b"x,y\n1,3\n"));
        let mut other = cfg.clone();
        other.dtm.min_interval_ms = 90;
        assert_ne!(a, config_hash(&other, b"x,y\n1,2\n"));
    }
}
