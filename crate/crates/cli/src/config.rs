use std::path::{Path, PathBuf};

use serde::Deserialize;

/// Optional TOML defaults; command-line flags take precedence.
#[derive(Debug, Clone, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct CliConfig {
    pub index: Option<PathBuf>,
    pub ingest_config: Option<PathBuf>,
    pub strategy: Option<String>,
    pub phrases: Option<String>,
    pub beta: Option<f64>,
    pub top: Option<usize>,
    /// error, warn, info, debug or trace
    pub log: Option<String>,
}

impl CliConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        let mut cfg: CliConfig = toml::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
        if let Some(b) = cfg.beta {
            if !(0.0..=1.0).contains(&b) {
                return Err(format!("{}: beta must be within [0, 1], got {b}", path.display()));
            }
        }
        if cfg.top == Some(0) {
            return Err(format!("{}: top must be at least 1", path.display()));
        }
        // relative paths are taken from the config file's directory
        let base = path.parent().unwrap_or(Path::new("."));
        for p in [&mut cfg.index, &mut cfg.ingest_config].into_iter().flatten() {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loads_and_resolves_paths() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("xcas.toml");
        std::fs::write(&path, "index = \"idx\"\nstrategy = \"ss\"\nbeta = 0.3\ntop = 10\n").unwrap();
        let cfg = CliConfig::load(&path).unwrap();
        assert_eq!(cfg.index, Some(dir.path().join("idx")));
        assert_eq!(cfg.strategy.as_deref(), Some("ss"));
        assert_eq!(cfg.beta, Some(0.3));
        assert_eq!(cfg.top, Some(10));
    }

    #[test]
    fn rejects_bad_values() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("xcas.toml");
        for bad in ["beta = 1.5", "top = 0", "colour = \"red\"", "beta = "] {
            std::fs::write(&path, bad).unwrap();
            assert!(CliConfig::load(&path).is_err(), "{bad}");
        }
    }
}
