//! Options shared by every command after merging command-line flags over
//! config-file values: the RNG seed, the output destination, and chattiness.

use std::fs;
use std::path::{Path, PathBuf};

/// Name of the environment variable that supplies a default directory for
/// output files when neither `--out` nor `[output] out` names one.
pub const OUT_DIR_VAR: &str = "TELSIM_OUT_DIR";

pub struct RunOptions {
    /// Base seed for every seeded ingredient (flag wins over config; 0 if
    /// neither is given).
    pub seed: u64,
    /// Explicit output path, if any (flag wins over config).
    pub out: Option<PathBuf>,
    /// Suppress "wrote ..." summaries. Never suppresses data.
    pub quiet: bool,
}

impl RunOptions {
    /// Where a command that always writes a file should put it: the explicit
    /// path if one was given, otherwise `default_name` inside the directory
    /// named by [`OUT_DIR_VAR`], otherwise `default_name` in the working
    /// directory.
    pub fn resolve_out(&self, default_name: &str) -> PathBuf {
        if let Some(path) = &self.out {
            return path.clone();
        }
        match std::env::var_os(OUT_DIR_VAR) {
            Some(dir) => PathBuf::from(dir).join(default_name),
            None => PathBuf::from(default_name),
        }
    }

    /// Write a finished text file and print the one-line summary unless the
    /// run is quiet.
    pub fn write_file(&self, path: &Path, text: &str, rows: usize) -> Result<(), String> {
        fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
        if !self.quiet {
            println!("wrote {rows} rows to {}", path.display());
        }
        Ok(())
    }
}
