//! JSON report envelope and artifact writing.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;

use crate::config::ExperimentConfig;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Serialize)]
pub struct Report<'a, T: Serialize> {
    pub schema_version: u32,
    pub library_version: &'static str,
    pub command: &'static str,
    pub master_seed: Option<u64>,
    pub config: &'a ExperimentConfig,
    pub result: T,
    /// Files written next to the report, relative to the output directory.
    pub artifacts: Vec<String>,
}

/// Collects artifacts for one run. Without an output directory nothing is
/// written and only the report goes to stdout.
pub struct Output {
    dir: Option<PathBuf>,
    written: Vec<String>,
}

impl Output {
    pub fn new(dir: Option<&Path>) -> Result<Self> {
        if let Some(d) = dir {
            fs::create_dir_all(d).with_context(|| format!("creating output directory {}", d.display()))?;
        }
        Ok(Output { dir: dir.map(Path::to_path_buf), written: vec![] })
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    pub fn csv<R: Serialize>(&mut self, name: &str, rows: &[R]) -> Result<()> {
        let Some(dir) = &self.dir else { return Ok(()) };
        let path = dir.join(name);
        let mut w = csv::Writer::from_path(&path).with_context(|| format!("writing {}", path.display()))?;
        for r in rows {
            w.serialize(r).with_context(|| format!("writing {}", path.display()))?;
        }
        w.flush().with_context(|| format!("writing {}", path.display()))?;
        self.written.push(name.to_string());
        Ok(())
    }

    /// Writes a file through `f` and records it.
    pub fn file(&mut self, name: &str, f: impl FnOnce(&Path) -> Result<()>) -> Result<()> {
        let Some(dir) = &self.dir else { return Ok(()) };
        let path = dir.join(name);
        f(&path).with_context(|| format!("writing {}", path.display()))?;
        self.written.push(name.to_string());
        Ok(())
    }

    /// Prints the report and, with an output directory, stores it as
    /// `<command>.json`.
    pub fn finish<T: Serialize>(mut self, config: &ExperimentConfig, command: &'static str, result: T) -> Result<()> {
        let json_name = format!("{command}.json");
        if self.dir.is_some() {
            self.written.insert(0, json_name.clone());
        }
        let report = Report {
            schema_version: SCHEMA_VERSION,
            library_version: fastsketch::VERSION,
            command,
            master_seed: config.seed,
            config,
            result,
            artifacts: self.written,
        };
        let text = serde_json::to_string_pretty(&report)? + "\n";
        if let Some(dir) = &self.dir {
            let path = dir.join(&json_name);
            fs::write(&path, &text).with_context(|| format!("writing {}", path.display()))?;
        }
        print!("{text}");
        Ok(())
    }
}
