//! Flat `key = value` configuration with `[section]` headers.
//!
//! Every read marks the key as consumed; [`Config::finish`] then rejects
//! whatever was never read, so a typo cannot silently fall back to a default.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use crate::error::{CliError, Result};

#[derive(Debug, Clone)]
struct Entry {
    value: String,
    /// Where the value came from, for diagnostics.
    origin: String,
    used: bool,
}

#[derive(Debug, Clone, Default)]
pub struct Config {
    entries: BTreeMap<(String, String), Entry>,
}

impl Config {
    pub fn parse(text: &str, source: &str) -> Result<Self> {
        let mut cfg = Config::default();
        let mut section = String::new();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let origin = format!("{source}:{}", no + 1);
            if let Some(rest) = line.strip_prefix('[') {
                let name = rest
                    .strip_suffix(']')
                    .ok_or_else(|| CliError::config(format!("{origin}: unterminated section header")))?;
                section = name.trim().to_string();
                if section.is_empty() {
                    return Err(CliError::config(format!("{origin}: empty section name")));
                }
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::config(format!("{origin}: expected `key = value`")))?;
            if section.is_empty() {
                return Err(CliError::config(format!("{origin}: key outside of any section")));
            }
            cfg.insert(&section, key.trim(), value.trim(), origin)?;
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text, &path.display().to_string())
    }

    fn insert(&mut self, section: &str, key: &str, value: &str, origin: String) -> Result<()> {
        if key.is_empty() {
            return Err(CliError::config(format!("{origin}: empty key")));
        }
        let slot = (section.to_string(), key.to_string());
        if let Some(prev) = self.entries.get(&slot) {
            return Err(CliError::config(format!(
                "{origin}: duplicate key {section}.{key} (first set at {})",
                prev.origin
            )));
        }
        self.entries.insert(
            slot,
            Entry {
                value: value.to_string(),
                origin,
                used: false,
            },
        );
        Ok(())
    }

    /// Applies a `section.key=value` override, replacing any file value.
    pub fn set(&mut self, assignment: &str) -> Result<()> {
        let (path, value) = assignment
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("--set expects section.key=value, got `{assignment}`")))?;
        let (section, key) = path
            .trim()
            .split_once('.')
            .ok_or_else(|| CliError::Usage(format!("--set expects section.key=value, got `{assignment}`")))?;
        self.entries.insert(
            (section.to_string(), key.to_string()),
            Entry {
                value: value.trim().to_string(),
                origin: format!("--set {assignment}"),
                used: false,
            },
        );
        Ok(())
    }

    fn take(&mut self, section: &str, key: &str) -> Option<(String, String)> {
        let e = self.entries.get_mut(&(section.to_string(), key.to_string()))?;
        e.used = true;
        Some((e.value.clone(), e.origin.clone()))
    }

    pub fn get<T: FromStr>(&mut self, section: &str, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        match self.take(section, key) {
            None => Ok(None),
            Some((value, origin)) => value.parse().map(Some).map_err(|e| {
                CliError::config(format!("{origin}: invalid {section}.{key} = `{value}`: {e}"))
            }),
        }
    }

    pub fn get_or<T: FromStr>(&mut self, section: &str, key: &str, default: T) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        Ok(self.get(section, key)?.unwrap_or(default))
    }

    pub fn require<T: FromStr>(&mut self, section: &str, key: &str) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        self.get(section, key)?
            .ok_or_else(|| CliError::config(format!("missing required key {section}.{key}")))
    }

    /// Comma-separated list.
    pub fn list<T: FromStr>(&mut self, section: &str, key: &str) -> Result<Option<Vec<T>>>
    where
        T::Err: std::fmt::Display,
    {
        let Some((value, origin)) = self.take(section, key) else {
            return Ok(None);
        };
        value
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| {
                s.parse().map_err(|e| {
                    CliError::config(format!("{origin}: invalid entry `{s}` in {section}.{key}: {e}"))
                })
            })
            .collect::<Result<Vec<T>>>()
            .map(Some)
    }

    /// Rejects every key that no reader asked for.
    pub fn finish(self) -> Result<()> {
        let unknown: Vec<String> = self
            .entries
            .iter()
            .filter(|(_, e)| !e.used)
            .map(|((s, k), e)| format!("{s}.{k} ({})", e.origin))
            .collect();
        if unknown.is_empty() {
            Ok(())
        } else {
            Err(CliError::config(format!("unknown keys: {}", unknown.join(", "))))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sections_comments_and_overrides() {
        let mut cfg = Config::parse("# run\n[grid]\nn_cells = 64 # small\n[run]\nt_end=2\n", "t").unwrap();
        cfg.set("run.t_end=3").unwrap();
        assert_eq!(cfg.require::<usize>("grid", "n_cells").unwrap(), 64);
        assert_eq!(cfg.get_or("run", "t_end", 0.0).unwrap(), 3.0);
        assert_eq!(cfg.get_or("run", "cfl", 0.4).unwrap(), 0.4);
        cfg.finish().unwrap();
    }

    #[test]
    fn unknown_and_duplicate_keys_are_rejected() {
        let mut cfg = Config::parse("[grid]\nn_cels = 64\n", "t").unwrap();
        assert_eq!(cfg.get_or("grid", "n_cells", 8usize).unwrap(), 8);
        let err = cfg.finish().unwrap_err().to_string();
        assert!(err.contains("grid.n_cels"), "{err}");
        assert!(Config::parse("[a]\nx=1\nx=2\n", "t").is_err());
        assert!(Config::parse("x=1\n", "t").is_err());
    }

    #[test]
    fn lists_and_bad_values() {
        let mut cfg = Config::parse("[sweep]\namplitudes = 0.1, 0.2 ,0.3\nn = x\n", "t").unwrap();
        assert_eq!(cfg.list::<f64>("sweep", "amplitudes").unwrap(), Some(vec![0.1, 0.2, 0.3]));
        let err = cfg.get::<f64>("sweep", "n").unwrap_err().to_string();
        assert!(err.contains("t:3"), "{err}");
    }
}
