//! Output plumbing: run manifests, CSV metadata headers, text tables,
//! and the write-to-file-or-stdout switch.
//!
//! Reproducibility is a formatting concern as much as an algorithmic
//! one: CSV floats are rendered with Rust's shortest-roundtrip `{}`
//! display, and every CSV starts with metadata (tool version, command,
//! config hash, seed) sufficient to regenerate it byte for byte.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use cahnet::config::ScenarioConfig;
use cahnet::{Error, Result};
use sha2::{Digest, Sha256};

/// Everything that identifies one CLI run for reproduction purposes.
pub struct RunManifest {
    pub config_path: PathBuf,
    pub command: &'static str,
    /// First 16 hex characters of the SHA-256 of the canonical scenario
    /// serialization — tracks parameter values, not file cosmetics.
    pub config_sha256: String,
    pub seed: Option<u64>,
    /// Label ("trials" or "intervals") and count of the randomized work.
    pub trials: Option<(&'static str, u64)>,
    pub output_path: Option<PathBuf>,
}

impl RunManifest {
    pub fn new(config_path: &Path, command: &'static str, config: &ScenarioConfig) -> Self {
        let digest = Sha256::digest(config.canonical_toml().as_bytes());
        let mut hash = String::with_capacity(16);
        for byte in &digest[..8] {
            write!(hash, "{byte:02x}").expect("writing to a String cannot fail");
        }
        RunManifest {
            config_path: config_path.to_path_buf(),
            command,
            config_sha256: hash,
            seed: None,
            trials: None,
            output_path: None,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn with_trials(mut self, label: &'static str, count: u64) -> Self {
        self.trials = Some((label, count));
        self
    }

    pub fn with_output(mut self, out: Option<&Path>) -> Self {
        self.output_path = out.map(Path::to_path_buf);
        self
    }

    /// `#`-prefixed metadata lines that head every CSV.
    pub fn metadata_lines(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# cahnet {}", env!("CARGO_PKG_VERSION"));
        let _ = writeln!(s, "# command: {}", self.command);
        let _ = writeln!(s, "# config: {}", self.config_path.display());
        let _ = writeln!(s, "# config_sha256: {}", self.config_sha256);
        if let Some(seed) = self.seed {
            let _ = writeln!(s, "# seed: {seed}");
        }
        if let Some((label, count)) = self.trials {
            let _ = writeln!(s, "# {label}: {count}");
        }
        s
    }
}

/// Writes a finished CSV to the manifest's output path, or to stdout
/// when no path was given.
pub fn emit_csv(manifest: &RunManifest, csv: &str) -> Result<()> {
    match &manifest.output_path {
        Some(path) => std::fs::write(path, csv).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        }),
        None => {
            print!("{csv}");
            Ok(())
        }
    }
}

/// Renders rows as a left-aligned text table with two-space separators.
pub fn render_table(headers: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = headers.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (i, cell) in row.iter().enumerate() {
            widths[i] = widths[i].max(cell.chars().count());
        }
    }
    let mut out = String::new();
    let render_row = |cells: &[String], out: &mut String| {
        for (i, cell) in cells.iter().enumerate() {
            let pad = widths[i] - cell.chars().count();
            out.push_str(cell);
            if i + 1 < cells.len() {
                out.extend(std::iter::repeat_n(' ', pad + 2));
            }
        }
        out.push('\n');
    };
    let header_cells: Vec<String> = headers.iter().map(|h| h.to_string()).collect();
    render_row(&header_cells, &mut out);
    for row in rows {
        render_row(row, &mut out);
    }
    out
}
