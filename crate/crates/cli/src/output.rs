//! Buffered output files, written in order, plus the run manifest.

use std::path::{Path, PathBuf};
use std::time::SystemTime;

use chrono::{DateTime, SecondsFormat, Utc};
use loadstab::report::{to_report_json, write_file};
use loadstab::Result;
use serde::Serialize;

#[derive(Debug, Default)]
pub struct Outputs {
    files: Vec<(String, String)>,
}

impl Outputs {
    pub fn add(&mut self, name: &str, contents: String) {
        self.files.push((name.to_string(), contents));
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.files.iter().map(|(n, _)| n.as_str())
    }

    /// Write every file, then the manifest. Nothing time-dependent goes
    /// into the data files themselves.
    pub fn write(self, dir: &Path, command: &str, inputs: &[PathBuf], exit_code: u8) -> Result<()> {
        let mut listed = Vec::with_capacity(self.files.len());
        for (name, contents) in &self.files {
            write_file(&dir.join(name), contents)?;
            listed.push(ManifestFile { name: name.clone(), bytes: contents.len() });
        }
        let manifest = Manifest {
            command,
            version: env!("CARGO_PKG_VERSION"),
            created: DateTime::<Utc>::from(SystemTime::now()).to_rfc3339_opts(SecondsFormat::Secs, true),
            inputs: inputs.iter().map(|p| p.display().to_string()).collect(),
            outputs: listed,
            exit_code,
        };
        write_file(&dir.join(format!("manifest-{command}.json")), &to_report_json(&manifest)?)
    }
}

#[derive(Serialize)]
struct ManifestFile {
    name: String,
    bytes: usize,
}

#[derive(Serialize)]
struct Manifest<'a> {
    command: &'a str,
    version: &'a str,
    created: String,
    inputs: Vec<String>,
    outputs: Vec<ManifestFile>,
    exit_code: u8,
}
