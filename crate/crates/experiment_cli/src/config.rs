use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet};
use std::str::FromStr;

use crate::CliError;

/// Sections accepted in a configuration file.
pub const SECTIONS: [&str; 3] = ["process", "strategy", "checker"];

/// Flat `key = value` configuration split into `[section]`s.
///
/// Lines starting with `#` or `;` are comments. Every key must be read by
/// the consumer; [`Config::finish`] reports the ones that were not.
#[derive(Debug)]
pub struct Config {
    sections: BTreeMap<String, BTreeMap<String, String>>,
    consumed: RefCell<BTreeSet<(String, String)>>,
}

impl Config {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut sections: BTreeMap<String, BTreeMap<String, String>> = BTreeMap::new();
        let mut current: Option<String> = None;
        for (number, raw) in text.lines().enumerate() {
            let line = raw.trim();
            let at = |message: String| CliError::Config { field: format!("line {}", number + 1), message };
            if line.is_empty() || line.starts_with('#') || line.starts_with(';') {
                continue;
            }
            if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
                let name = name.trim();
                if !SECTIONS.contains(&name) {
                    return Err(at(format!("unknown section [{name}]; expected one of {SECTIONS:?}")));
                }
                if sections.contains_key(name) {
                    return Err(at(format!("section [{name}] appears twice")));
                }
                sections.insert(name.to_string(), BTreeMap::new());
                current = Some(name.to_string());
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(at(format!("expected `key = value`, found `{line}`")));
            };
            let Some(section) = &current else {
                return Err(at("key outside of any section".into()));
            };
            let (key, value) = (key.trim(), value.trim());
            if key.is_empty() {
                return Err(at("empty key".into()));
            }
            let entries = sections.get_mut(section).expect("current section exists");
            if entries.insert(key.to_string(), value.to_string()).is_some() {
                return Err(at(format!("key [{section}].{key} appears twice")));
            }
        }
        Ok(Config { sections, consumed: RefCell::new(BTreeSet::new()) })
    }

    fn raw(&self, section: &str, key: &str) -> Option<&str> {
        let value = self.sections.get(section)?.get(key)?;
        self.consumed.borrow_mut().insert((section.to_string(), key.to_string()));
        Some(value)
    }

    pub fn has(&self, section: &str, key: &str) -> bool {
        self.sections.get(section).is_some_and(|s| s.contains_key(key))
    }

    /// Typed optional value.
    pub fn get<T: FromStr>(&self, section: &str, key: &str) -> Result<Option<T>, CliError>
    where
        T::Err: std::fmt::Display,
    {
        match self.raw(section, key) {
            None => Ok(None),
            Some(text) => text.parse().map(Some).map_err(|e: T::Err| CliError::Config {
                field: format!("[{section}].{key}"),
                message: format!("cannot parse `{text}`: {e}"),
            }),
        }
    }

    /// Typed value that must be present.
    pub fn require<T: FromStr>(&self, section: &str, key: &str) -> Result<T, CliError>
    where
        T::Err: std::fmt::Display,
    {
        self.get(section, key)?.ok_or_else(|| CliError::Config {
            field: format!("[{section}].{key}"),
            message: "missing required key".into(),
        })
    }

    /// Fails on the first key that no consumer read.
    pub fn finish(&self) -> Result<(), CliError> {
        let consumed = self.consumed.borrow();
        for (section, entries) in &self.sections {
            for key in entries.keys() {
                if !consumed.contains(&(section.clone(), key.clone())) {
                    return Err(CliError::Config {
                        field: format!("[{section}].{key}"),
                        message: "unknown key".into(),
                    });
                }
            }
        }
        Ok(())
    }
}
