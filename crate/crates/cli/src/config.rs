//! Optional key=value configuration file and flag resolution.
//!
//! Precedence: explicit flag > config-file entry > built-in default. Keys use
//! the long flag names (k, h, T, paths, ...). Unknown keys are ignored so one
//! file can serve several subcommands.

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::CliError;

#[derive(Debug, Default)]
pub struct ConfigFile {
    entries: HashMap<String, String>,
}

impl ConfigFile {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(ConfigFile::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::validation(format!("cannot read config {path:?}: {e}")))?;
        let mut entries = HashMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::validation(format!(
                    "config line {} is not key=value: {line:?}",
                    lineno + 1
                )));
            };
            entries.insert(key.trim().to_string(), value.trim().to_string());
        }
        Ok(ConfigFile { entries })
    }

    fn raw(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    /// flag > config > default.
    pub fn resolve<T>(&self, flag: Option<T>, key: &str, default: T) -> Result<T, CliError>
    where
        T: FromStr,
        T::Err: std::fmt::Display,
    {
        self.resolve_opt(flag, key)
            .map(|v| v.unwrap_or(default))
    }

    /// flag > config > None.
    pub fn resolve_opt<T>(&self, flag: Option<T>, key: &str) -> Result<Option<T>, CliError>
    where
        T: FromStr,
        T::Err: std::fmt::Display,
    {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.raw(key) {
            None => Ok(None),
            Some(text) => text.parse::<T>().map(Some).map_err(|e| {
                CliError::validation(format!("config key {key} = {text:?}: {e}"))
            }),
        }
    }

    /// Required output directory.
    pub fn resolve_out(&self, flag: Option<PathBuf>, key: &str) -> Result<PathBuf, CliError> {
        self.resolve_opt(flag, key)?
            .ok_or_else(|| CliError::validation("--out is required".into()))
    }
}

/// Parses a comma-separated list, e.g. "158,398,1000".
pub fn parse_list<T>(text: &str, what: &str) -> Result<Vec<T>, CliError>
where
    T: FromStr,
    T::Err: std::fmt::Display,
{
    let items: Result<Vec<T>, _> = text
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<T>()
                .map_err(|e| CliError::validation(format!("bad {what} entry {s:?}: {e}")))
        })
        .collect();
    let items = items?;
    if items.is_empty() {
        return Err(CliError::validation(format!("{what} list is empty")));
    }
    Ok(items)
}
