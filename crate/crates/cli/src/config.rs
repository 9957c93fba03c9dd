//! Flag / config-file merging. Flags win over file values, file values over
//! built-in defaults.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use ctap_core::kv::KeyValues;
use ctap_core::MaterialParams;

pub struct FileConfig(Option<KeyValues>);

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else {
            return Ok(Self(None));
        };
        let text = fs::read_to_string(path)
            .with_context(|| format!("cannot read config file {}", path.display()))?;
        let kv = KeyValues::parse(&text).with_context(|| format!("in {}", path.display()))?;
        Ok(Self(Some(kv)))
    }

    /// Flag value if given, else the file value, else `default`.
    pub fn pick<T: std::str::FromStr>(
        &mut self,
        flag: Option<T>,
        key: &str,
        default: T,
    ) -> Result<T> {
        Ok(self.pick_opt(flag, key)?.unwrap_or(default))
    }

    pub fn pick_opt<T: std::str::FromStr>(
        &mut self,
        flag: Option<T>,
        key: &str,
    ) -> Result<Option<T>> {
        let from_file = match self.0.as_mut() {
            Some(kv) => kv.take_parsed(key)?,
            None => None,
        };
        Ok(flag.or(from_file))
    }

    pub fn finish(self) -> Result<()> {
        if let Some(kv) = self.0 {
            kv.finish()?;
        }
        Ok(())
    }
}

pub fn material(bohr_nm: Option<f64>, hartree_mev: Option<f64>) -> Result<MaterialParams> {
    let d = MaterialParams::default();
    Ok(MaterialParams::new(
        bohr_nm.unwrap_or(d.bohr_radius()),
        hartree_mev.unwrap_or(d.hartree()),
    )?)
}

pub fn write(dir: &Path, name: &str, contents: &str) -> Result<PathBuf> {
    fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    let path = dir.join(name);
    fs::write(&path, contents).with_context(|| format!("cannot write {}", path.display()))?;
    Ok(path)
}
