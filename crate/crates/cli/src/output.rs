//! Report sinks and the per-run manifest.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::Serialize;
use sha2::{Digest, Sha256};

use cyma_core::grid::io::{to_csv, write_field};
use cyma_core::TorusField;

use crate::GlobalOpts;

#[derive(Serialize)]
pub struct InputRecord {
    pub spec: String,
    /// Hash of the file contents; absent for generated inputs.
    pub sha256: Option<String>,
}

#[derive(Serialize)]
struct RunManifest<'a> {
    command: &'a str,
    inputs: &'a [InputRecord],
    config: &'a serde_json::Value,
    flags: &'a GlobalOpts,
    notes: &'a [String],
    outputs: &'a [String],
    version: &'static str,
    wall_time_s: f64,
    exit_status: u8,
}

pub struct Run {
    command: &'static str,
    pub opts: GlobalOpts,
    inputs: Vec<InputRecord>,
    config: serde_json::Value,
    notes: Vec<String>,
    outputs: Vec<String>,
}

impl Run {
    pub fn new(command: &'static str, opts: GlobalOpts) -> Self {
        Self {
            command,
            opts,
            inputs: Vec::new(),
            config: serde_json::Value::Null,
            notes: Vec::new(),
            outputs: Vec::new(),
        }
    }

    pub fn record_file(&mut self, path: &Path) -> anyhow::Result<()> {
        let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
        self.inputs.push(InputRecord {
            spec: path.display().to_string(),
            sha256: Some(hex::encode(Sha256::digest(&bytes))),
        });
        Ok(())
    }

    pub fn record_generated(&mut self, spec: &str) {
        self.inputs.push(InputRecord {
            spec: spec.to_string(),
            sha256: None,
        });
    }

    pub fn set_config(&mut self, config: &impl Serialize) -> anyhow::Result<()> {
        self.config = serde_json::to_value(config)?;
        Ok(())
    }

    /// Logged to stderr and kept in the manifest.
    pub fn note(&mut self, msg: String) {
        eprintln!("note: {msg}");
        self.notes.push(msg);
    }

    fn out_dir(&self) -> anyhow::Result<Option<&Path>> {
        match &self.opts.out {
            Some(dir) => {
                fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
                Ok(Some(dir))
            }
            None => Ok(None),
        }
    }

    fn out_path(&mut self, file: &str) -> anyhow::Result<Option<PathBuf>> {
        let path = self.out_dir()?.map(|d| d.join(file));
        if path.is_some() {
            self.outputs.push(file.to_string());
        }
        Ok(path)
    }

    /// Pretty JSON on stdout, and `<name>.json` under `--out`.
    pub fn report(&mut self, name: &str, value: &impl Serialize) -> anyhow::Result<()> {
        let text = serde_json::to_string_pretty(value)? + "\n";
        print!("{text}");
        if let Some(path) = self.out_path(&format!("{name}.json"))? {
            fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
        }
        Ok(())
    }

    /// `<name>.json` under `--out` only.
    pub fn write_json(&mut self, name: &str, value: &impl Serialize) -> anyhow::Result<()> {
        if let Some(path) = self.out_path(&format!("{name}.json"))? {
            fs::write(&path, serde_json::to_string_pretty(value)? + "\n")?;
        }
        Ok(())
    }

    /// Writes `<name>.f64` (+ sidecar, + CSV with `--csv`) under `--out`;
    /// without an output directory the field is only summarized.
    pub fn field(&mut self, name: &str, field: &TorusField) -> anyhow::Result<()> {
        let Some(path) = self.out_path(&format!("{name}.f64"))? else {
            return Ok(());
        };
        write_field(&path, field)?;
        if self.opts.csv {
            if let Some(csv) = self.out_path(&format!("{name}.csv"))? {
                fs::write(csv, to_csv(field))?;
            }
        }
        Ok(())
    }

    /// Emits the manifest: `manifest.json` under `--out`, otherwise one JSON line on stderr.
    pub fn finish(mut self, exit_status: u8, wall_time_s: f64) -> anyhow::Result<()> {
        let path = self.out_path("manifest.json").ok().flatten();
        let manifest = RunManifest {
            command: self.command,
            inputs: &self.inputs,
            config: &self.config,
            flags: &self.opts,
            notes: &self.notes,
            outputs: &self.outputs,
            version: env!("CARGO_PKG_VERSION"),
            wall_time_s,
            exit_status,
        };
        match path {
            Some(path) => fs::write(&path, serde_json::to_string_pretty(&manifest)? + "\n")?,
            None => eprintln!("{}", serde_json::to_string(&manifest)?),
        }
        Ok(())
    }
}
