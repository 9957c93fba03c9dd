//! Flat `key = value` configuration files with `#` comments.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Default)]
pub struct KeyValues {
    entries: BTreeMap<String, String>,
}

impl KeyValues {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::ConfigSyntax {
                    line: idx + 1,
                    reason: format!("expected `key = value`, got {line:?}"),
                });
            };
            let key = key.trim();
            if key.is_empty() {
                return Err(Error::ConfigSyntax {
                    line: idx + 1,
                    reason: "empty key".into(),
                });
            }
            if entries
                .insert(key.to_string(), value.trim().to_string())
                .is_some()
            {
                return Err(Error::ConfigSyntax {
                    line: idx + 1,
                    reason: format!("duplicate key `{key}`"),
                });
            }
        }
        Ok(Self { entries })
    }

    pub fn take(&mut self, key: &str) -> Option<String> {
        self.entries.remove(key)
    }

    pub fn take_required(&mut self, key: &str) -> Result<String> {
        self.take(key)
            .ok_or_else(|| Error::MissingKey { key: key.into() })
    }

    pub fn take_parsed<T: std::str::FromStr>(&mut self, key: &str) -> Result<Option<T>> {
        match self.take(key) {
            None => Ok(None),
            Some(v) => v.parse().map(Some).map_err(|_| Error::InvalidValue {
                key: key.into(),
                value: v,
            }),
        }
    }

    pub fn take_f64(&mut self, key: &str) -> Result<f64> {
        let v = self.take_required(key)?;
        v.parse().map_err(|_| Error::InvalidValue {
            key: key.into(),
            value: v,
        })
    }

    /// Fails on the first key nobody asked for.
    pub fn finish(self) -> Result<()> {
        match self.entries.into_keys().next() {
            Some(key) => Err(Error::UnknownKey { key }),
            None => Ok(()),
        }
    }
}
