//! Machine-readable run certificates.
//!
//! Every command accumulates named checks into a [`Certificate`] and writes
//! it as JSON; the human-readable lines on stdout are a courtesy, the JSON
//! is authoritative.  Certificates are deterministic for a given config —
//! fixed seeds, deterministic solvers, and no timestamps or durations inside
//! the JSON (timings go to stdout only, so reruns stay byte-identical).

use serde::Serialize;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

/// One verified fact: what was expected, what was measured, how close it
/// had to be.  `tolerance` is 0 for exact (combinatorial or rational)
/// checks.
#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub expected: String,
    pub measured: String,
    pub tolerance: f64,
    pub pass: bool,
}

/// Everything a run asserts, echoing enough config to reproduce it.
#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    pub artifact_version: String,
    pub command: String,
    pub config: serde_json::Value,
    pub checks: Vec<CheckResult>,
    pub pass: bool,
}

impl Certificate {
    pub fn new(command: &str, config: serde_json::Value) -> Self {
        Certificate {
            artifact_version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            config,
            checks: Vec::new(),
            pass: true,
        }
    }

    /// Record a check and echo it to stdout.
    pub fn check(
        &mut self,
        name: impl Into<String>,
        expected: impl ToString,
        measured: impl ToString,
        tolerance: f64,
        pass: bool,
    ) {
        let c = CheckResult {
            name: name.into(),
            expected: expected.to_string(),
            measured: measured.to_string(),
            tolerance,
            pass,
        };
        let verdict = if pass { "PASS" } else { "FAIL" };
        if tolerance > 0.0 {
            println!(
                "[{verdict}] {}: measured {} (expected {}, tol {:e})",
                c.name, c.measured, c.expected, c.tolerance
            );
        } else {
            println!(
                "[{verdict}] {}: measured {} (expected {})",
                c.name, c.measured, c.expected
            );
        }
        self.pass &= pass;
        self.checks.push(c);
    }

    /// An exact check: pass iff the two renderings agree.
    pub fn check_eq(
        &mut self,
        name: impl Into<String>,
        expected: impl ToString,
        measured: impl ToString,
    ) {
        let (e, m) = (expected.to_string(), measured.to_string());
        let pass = e == m;
        self.check(name, e, m, 0.0, pass);
    }

    /// Write the certificate under `out_dir`, creating the directory.
    /// Returns the file path.
    pub fn write(&self, out_dir: &Path, file_stem: &str) -> std::io::Result<PathBuf> {
        fs::create_dir_all(out_dir)?;
        let path = out_dir.join(format!("{file_stem}.json"));
        let mut f = fs::File::create(&path)?;
        serde_json::to_writer_pretty(&mut f, self)?;
        writeln!(f)?;
        println!(
            "certificate: {} ({})",
            path.display(),
            if self.pass { "pass" } else { "FAIL" }
        );
        Ok(path)
    }
}
