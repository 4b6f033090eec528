use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use super::text::Stopwords;
use crate::error::ConfigError;

/// Ingestion settings.
///
/// The config file is line based, one `key=value` per line:
///
/// ```text
/// # comments start with '#'
/// stopwords = stopwords.txt   # path, relative to the config file
/// index_numbers = false
/// p1 = p                      # any other key maps a tag onto a tag class
/// ```
#[derive(Debug, Clone, Default, PartialEq)]
pub struct IngestConfig {
    pub stopwords: Stopwords,
    pub tag_classes: BTreeMap<String, String>,
    pub index_numbers: bool,
}

impl IngestConfig {
    pub fn map_tag<'a>(&'a self, tag: &'a str) -> &'a str {
        self.tag_classes.get(tag).map(String::as_str).unwrap_or(tag)
    }

    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text, path.parent())
    }

    /// Parses config text; relative stopword paths resolve against `base`.
    pub fn parse(text: &str, base: Option<&Path>) -> Result<Self, ConfigError> {
        let mut config = IngestConfig::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| ConfigError::Syntax {
                line: i + 1,
                message: format!("expected key=value, got {line:?}"),
            })?;
            let (key, value) = (key.trim(), value.trim());
            if key.is_empty() || value.is_empty() {
                return Err(ConfigError::Syntax {
                    line: i + 1,
                    message: "empty key or value".into(),
                });
            }
            match key {
                "stopwords" => {
                    let path: PathBuf = match base {
                        Some(b) => b.join(value),
                        None => PathBuf::from(value),
                    };
                    let words = std::fs::read_to_string(&path)
                        .map_err(|source| ConfigError::Io { path, source })?;
                    config.stopwords = Stopwords::from_lines(&words);
                }
                "index_numbers" => {
                    config.index_numbers = value.parse().map_err(|_| ConfigError::Syntax {
                        line: i + 1,
                        message: format!("index_numbers must be true or false, got {value:?}"),
                    })?;
                }
                tag => {
                    config.tag_classes.insert(tag.to_string(), value.to_string());
                }
            }
        }
        Ok(config)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_keys() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(dir.path().join("sw.txt"), "foo\nbar\n").unwrap();
        let cfg = IngestConfig::parse(
            "# demo\nstopwords = sw.txt\nindex_numbers=true\nss1 = sec # class\n",
            Some(dir.path()),
        )
        .unwrap();
        assert!(cfg.stopwords.contains("foo"));
        assert!(!cfg.stopwords.contains("the"));
        assert!(cfg.index_numbers);
        assert_eq!(cfg.map_tag("ss1"), "sec");
        assert_eq!(cfg.map_tag("p"), "p");
    }

    #[test]
    fn rejects_garbage() {
        assert!(matches!(
            IngestConfig::parse("no equals sign", None),
            Err(ConfigError::Syntax { line: 1, .. })
        ));
        assert!(IngestConfig::parse("index_numbers=maybe", None).is_err());
        assert!(matches!(
            IngestConfig::parse("stopwords=/definitely/not/here", None),
            Err(ConfigError::Io { .. })
        ));
    }
}
