//! CSV and manifest writers. Files are written to a temporary sibling and
//! renamed into place.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::Context;
use d2d_core::ScenarioConfig;

use crate::config::to_config_string;

/// Builds a CSV document with `\n` line endings.
pub struct Csv {
    text: String,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        let mut text = header.join(",");
        text.push('\n');
        Self { text }
    }

    pub fn row(&mut self, fields: &[String]) {
        let _ = writeln!(self.text, "{}", fields.join(","));
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }
}

pub fn write_atomic(path: &Path, contents: &str) -> anyhow::Result<()> {
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .with_context(|| format!("cannot create temporary file in {}", dir.display()))?;
    tmp.write_all(contents.as_bytes())
        .with_context(|| format!("cannot write {}", path.display()))?;
    tmp.persist(path)
        .with_context(|| format!("cannot move output into {}", path.display()))?;
    Ok(())
}

/// Record of one invocation. It is itself a valid scenario file, so it can
/// be passed back through `--config`.
pub struct RunManifest<'a> {
    pub config: &'a ScenarioConfig,
    pub subcommand: &'a str,
    pub command_line: &'a [String],
    pub outputs: &'a [PathBuf],
}

impl RunManifest<'_> {
    pub fn render(&self) -> String {
        let stamp = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        let outputs: Vec<String> = self
            .outputs
            .iter()
            .map(|p| p.display().to_string())
            .collect();
        let mut text = String::new();
        let _ = writeln!(text, "# d2dsim run manifest");
        let _ = writeln!(text, "# tool_version = {}", env!("CARGO_PKG_VERSION"));
        let _ = writeln!(text, "# subcommand = {}", self.subcommand);
        let _ = writeln!(text, "# command = {}", self.command_line.join(" "));
        let _ = writeln!(text, "# outputs = {}", outputs.join(","));
        let _ = writeln!(text, "# timestamp_unix = {stamp}");
        text.push_str(&to_config_string(self.config));
        text
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let mut csv = Csv::new(&["a", "b"]);
        csv.row(&["1".into(), "0.5".into()]);
        assert_eq!(csv.as_str(), "a,b\n1,0.5\n");
    }

    #[test]
    fn manifest_is_a_config_file() {
        let cfg = ScenarioConfig {
            num_cellular: 3,
            ..Default::default()
        };
        let m = RunManifest {
            config: &cfg,
            subcommand: "sweep",
            command_line: &["d2dsim".into(), "sweep".into()],
            outputs: &[PathBuf::from("sweep.csv")],
        };
        let mut back = ScenarioConfig::default();
        crate::config::apply_str(&mut back, &m.render()).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn atomic_write_replaces_content() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("x.csv");
        write_atomic(&p, "one\n").unwrap();
        write_atomic(&p, "two\n").unwrap();
        assert_eq!(std::fs::read_to_string(&p).unwrap(), "two\n");
    }
}
