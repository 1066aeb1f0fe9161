//! Run records: what was run, with which configuration and code version,
//! and what came out.

use std::fmt::Write as _;
use std::path::Path;

use sha2::{Digest, Sha256};

use super::config::Config;
use super::output::write_file;
use crate::checks::Verdict;
use crate::error::Result;
use crate::solver::run::Event;

pub const CODE_VERSION: &str = concat!("vdwe ", env!("CARGO_PKG_VERSION"));

/// Hex SHA-256 of the canonical serialisation of `config`.
pub fn config_hash(config: &Config) -> String {
    Sha256::digest(config.serialize().as_bytes()).iter().fold(String::with_capacity(64), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

/// Provenance, event log and verdicts of one command invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub command: String,
    pub config: Config,
    pub config_hash: String,
    pub version: &'static str,
    pub events: Vec<Event>,
    pub verdicts: Vec<Verdict>,
    /// Free-form measurement lines shown under the verdicts.
    pub notes: Vec<String>,
}

impl RunRecord {
    pub fn new(command: &str, config: &Config) -> Self {
        Self {
            command: command.to_string(),
            config: config.clone(),
            config_hash: config_hash(config),
            version: CODE_VERSION,
            events: Vec::new(),
            verdicts: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn verdict(&mut self, v: Verdict) {
        self.verdicts.push(v);
    }

    pub fn note(&mut self, line: impl Into<String>) {
        self.notes.push(line.into());
    }

    pub fn all_passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.passed)
    }

    /// Human-readable summary.
    pub fn summary(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "command: {}", self.command);
        let _ = writeln!(s, "code: {}", self.version);
        let _ = writeln!(s, "config sha256: {}", self.config_hash);
        let _ = writeln!(s);
        for v in &self.verdicts {
            let _ = writeln!(s, "[{}] {}: {}", if v.passed { "PASS" } else { "FAIL" }, v.name, v.detail);
        }
        if !self.notes.is_empty() {
            let _ = writeln!(s);
            for n in &self.notes {
                let _ = writeln!(s, "{n}");
            }
        }
        if !self.events.is_empty() {
            let _ = writeln!(s, "\nevents:");
            for e in &self.events {
                let _ = writeln!(s, "  t={:.6} {:?}: {}", e.t, e.kind, e.message);
            }
        }
        let _ = writeln!(s, "\noverall: {}", if self.all_passed() { "PASS" } else { "FAIL" });
        s
    }

    /// Writes `config.txt` (the canonical configuration echo) and `summary.txt`.
    pub fn write(&self, dir: &Path) -> Result<()> {
        write_file(&dir.join("config.txt"), &self.config.serialize())?;
        write_file(&dir.join("summary.txt"), &self.summary())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hash_tracks_configuration() {
        let a = Config::default();
        let mut b = a.clone();
        assert_eq!(config_hash(&a), config_hash(&b));
        assert_eq!(config_hash(&a).len(), 64);
        b.run.seed = 7;
        assert_ne!(config_hash(&a), config_hash(&b));
    }

    #[test]
    fn summary_reports_failure() {
        let mut r = RunRecord::new("eos-check", &Config::default());
        r.verdict(Verdict::new("one", true, "ok"));
        assert!(r.summary().ends_with("overall: PASS\n"));
        r.verdict(Verdict::new("two", false, "bad"));
        assert!(r.summary().contains("[FAIL] two: bad"));
        assert!(!r.all_passed());
    }
}
