use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::time::Instant;

use lbann_core::table_io::write_string;
use serde::Serialize;

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug)]
pub enum CliError {
    /// Bad option values; exit code 2.
    Usage(String),
    /// Anything that fails while running; exit code 1.
    Runtime(lbann_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage error: {msg}"),
            CliError::Runtime(e) => write!(f, "{e}"),
        }
    }
}

impl From<lbann_core::Error> for CliError {
    fn from(e: lbann_core::Error) -> Self {
        CliError::Runtime(e)
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

#[derive(Debug, Serialize)]
struct Timing {
    stage: String,
    ms: f64,
}

#[derive(Debug, Serialize)]
struct RunManifest {
    subcommand: String,
    tool_version: &'static str,
    options: serde_json::Value,
    seeds: BTreeMap<String, u64>,
    inputs: Vec<PathBuf>,
    outputs: Vec<PathBuf>,
    timings: Vec<Timing>,
    status: &'static str,
    error: Option<String>,
}

/// Book-keeping for one subcommand invocation: every artifact goes through
/// here so the manifest lists it.
pub struct Run {
    out_dir: PathBuf,
    quiet: bool,
    started: Instant,
    manifest: RunManifest,
}

impl Run {
    pub fn new(subcommand: &str, options: serde_json::Value, out_dir: PathBuf, quiet: bool) -> Self {
        Run {
            out_dir,
            quiet,
            started: Instant::now(),
            manifest: RunManifest {
                subcommand: subcommand.to_string(),
                tool_version: env!("CARGO_PKG_VERSION"),
                options,
                seeds: BTreeMap::new(),
                inputs: Vec::new(),
                outputs: Vec::new(),
                timings: Vec::new(),
                status: "running",
                error: None,
            },
        }
    }

    pub fn out_dir(&self) -> &Path {
        &self.out_dir
    }

    pub fn input(&mut self, path: &Path) {
        self.manifest.inputs.push(path.to_path_buf());
    }

    pub fn seed(&mut self, name: &str, value: u64) {
        self.manifest.seeds.insert(name.to_string(), value);
    }

    pub fn write(&mut self, name: &str, contents: &str) -> CliResult<()> {
        let path = self.out_dir.join(name);
        write_string(&path, contents)?;
        self.manifest.outputs.push(path);
        Ok(())
    }

    /// Lists every file of a directory written by a library routine.
    pub fn record_dir(&mut self, dir: &Path) -> CliResult<()> {
        let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
            .map_err(|e| lbann_core::Error::Io {
                path: dir.to_path_buf(),
                source: e,
            })?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .collect();
        files.sort();
        self.manifest.outputs.extend(files);
        Ok(())
    }

    pub fn time<R>(&mut self, stage: &str, f: impl FnOnce() -> R) -> R {
        let t = Instant::now();
        let out = f();
        self.manifest.timings.push(Timing {
            stage: stage.to_string(),
            ms: t.elapsed().as_secs_f64() * 1e3,
        });
        out
    }

    pub fn say(&self, msg: impl AsRef<str>) {
        if !self.quiet {
            println!("{}", msg.as_ref());
        }
    }

    /// Writes `manifest.json` whatever the outcome.
    pub fn finish(mut self, outcome: &CliResult<()>) -> Result<(), String> {
        self.manifest.timings.push(Timing {
            stage: "total".into(),
            ms: self.started.elapsed().as_secs_f64() * 1e3,
        });
        match outcome {
            Ok(()) => self.manifest.status = "ok",
            Err(e) => {
                self.manifest.status = "error";
                self.manifest.error = Some(e.to_string());
            }
        }
        let path = self.out_dir.join(MANIFEST_FILE);
        let text = serde_json::to_string_pretty(&self.manifest).map_err(|e| e.to_string())? + "\n";
        write_string(&path, &text).map_err(|e| e.to_string())
    }
}
