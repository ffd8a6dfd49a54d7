//! CSV and sidecar JSON writers.
//!
//! The CSV opens with `#` comment lines (tool version, command, SHA-256 of
//! the canonical config, creation time). Everything except the `created`
//! line is a pure function of the config and the results.

use std::path::{Path, PathBuf};

use serde_json::json;
use sha2::{Digest, Sha256};
use time::format_description::well_known::Rfc3339;
use time::OffsetDateTime;

use super::config::SweepConfig;
use super::run::{Row, SweepResult};
use crate::error::{Error, Result};

pub const TOOL: &str = "optomech-sweep";

pub fn config_hash(cfg: &SweepConfig) -> String {
    let digest = Sha256::digest(cfg.canonical_json().as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

pub fn now_rfc3339() -> String {
    OffsetDateTime::now_utc().format(&Rfc3339).unwrap_or_else(|_| "unknown".into())
}

pub fn columns(result: &SweepResult) -> Vec<String> {
    let mut cols = result.axis_names.clone();
    if let Some(m) = &result.minimize {
        cols.push(format!("{m}_argmin"));
    }
    cols.extend(["S1", "S2", "g2_1", "g2_2", "engine", "residual", "tail", "flags"].map(String::from));
    cols
}

// Shortest round-trip form, switching to exponent notation for very small
// or large magnitudes.
fn fmt_f64(v: f64) -> String {
    let a = v.abs();
    if a == 0.0 || (1e-4..1e6).contains(&a) || !a.is_finite() {
        v.to_string()
    } else {
        format!("{v:e}")
    }
}

fn num(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

fn record(result: &SweepResult, row: &Row) -> Vec<String> {
    let mut rec: Vec<String> = row.axes.iter().map(|&v| fmt_f64(v)).collect();
    if result.minimize.is_some() {
        rec.push(num(row.argmin));
    }
    rec.extend([num(row.s1), num(row.s2), num(row.g2_1), num(row.g2_2)]);
    rec.push(row.engine.name().to_string());
    rec.push(num(row.residual));
    rec.push(num(row.tail));
    let mut flags = row.flags.clone();
    if let Some(e) = &row.error {
        flags.push(format!("message={}", e.replace(';', ",")));
    }
    rec.push(flags.join(";"));
    rec
}

/// The CSV text for `result`, stamped with `created`.
pub fn render_csv(result: &SweepResult, cfg: &SweepConfig, created: &str) -> Result<String> {
    let mut out = String::new();
    out.push_str(&format!("# {TOOL} {}\n", env!("CARGO_PKG_VERSION")));
    out.push_str(&format!("# command: {}\n", result.command.name()));
    if let Some(n) = &cfg.name {
        out.push_str(&format!("# name: {}\n", n.replace('\n', " ")));
    }
    out.push_str(&format!("# config_sha256: {}\n", config_hash(cfg)));
    out.push_str(&format!("# created: {created}\n"));
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(columns(result))?;
    for row in &result.rows {
        w.write_record(record(result, row))?;
    }
    let body = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    out.push_str(&String::from_utf8(body).expect("csv output is UTF-8"));
    Ok(out)
}

pub fn render_sidecar(
    result: &SweepResult,
    cfg: &SweepConfig,
    created: &str,
    extra: Option<serde_json::Value>,
) -> serde_json::Value {
    let mut v = json!({
        "tool": TOOL,
        "version": env!("CARGO_PKG_VERSION"),
        "command": result.command.name(),
        "config": cfg,
        "config_sha256": config_hash(cfg),
        "created": created,
        "columns": columns(result),
        "rows": result.rows.len(),
        "failed_rows": result.failures(),
    });
    if let Some(x) = extra {
        v["comparison"] = x;
    }
    v
}

/// Writes `<prefix>.csv` and `<prefix>.json`.
pub fn write_outputs(
    result: &SweepResult,
    cfg: &SweepConfig,
    prefix: &Path,
    extra: Option<serde_json::Value>,
) -> Result<(PathBuf, PathBuf)> {
    let created = now_rfc3339();
    let csv_path = prefix.with_extension("csv");
    let json_path = prefix.with_extension("json");
    if let Some(dir) = csv_path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(&csv_path, render_csv(result, cfg, &created)?)?;
    let side = render_sidecar(result, cfg, &created, extra);
    std::fs::write(&json_path, serde_json::to_string_pretty(&side)? + "\n")?;
    Ok((csv_path, json_path))
}

/// Parsed CSV: header comments and records keyed by column name.
#[derive(Clone, Debug)]
pub struct CsvTable {
    pub comments: Vec<String>,
    pub columns: Vec<String>,
    pub records: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Numeric values of a column, `None` for empty cells.
    pub fn values(&self, name: &str) -> Result<Vec<Option<f64>>> {
        let k = self.column(name).ok_or_else(|| Error::Config(format!("no column `{name}`")))?;
        self.records
            .iter()
            .map(|r| {
                let s = r[k].trim();
                if s.is_empty() {
                    Ok(None)
                } else {
                    s.parse().map(Some).map_err(|_| Error::Config(format!("`{s}` in column `{name}` is not a number")))
                }
            })
            .collect()
    }
}

pub fn read_csv(text: &str) -> Result<CsvTable> {
    let comments: Vec<String> = text.lines().take_while(|l| l.starts_with('#')).map(str::to_string).collect();
    let mut r = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
    let columns = r.headers()?.iter().map(str::to_string).collect();
    let records = r
        .records()
        .map(|rec| rec.map(|x| x.iter().map(str::to_string).collect()))
        .collect::<std::result::Result<_, _>>()?;
    Ok(CsvTable { comments, columns, records })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sweep::config::{Axis, Engine};
    use crate::sweep::run::{run_sweep, Command};

    fn cfg() -> SweepConfig {
        SweepConfig {
            engine: Engine::Analytic,
            axes: vec![Axis::linear("delta1", 0.2, 0.3, 3)],
            ..SweepConfig::default()
        }
    }

    #[test]
    fn header_and_columns() {
        let c = cfg();
        let r = run_sweep(&c, Command::ScanDelta1).unwrap();
        let text = render_csv(&r, &c, "T").unwrap();
        let t = read_csv(&text).unwrap();
        assert_eq!(t.columns, ["delta1", "S1", "S2", "g2_1", "g2_2", "engine", "residual", "tail", "flags"]);
        assert_eq!(t.records.len(), 3);
        assert!(t.comments.iter().any(|l| l == &format!("# config_sha256: {}", config_hash(&c))));
        assert_eq!(t.values("delta1").unwrap()[1], Some(0.25));
        assert_eq!(t.values("residual").unwrap()[0], None);
        assert_eq!(t.values("g2_1").unwrap()[2], r.rows[2].g2_1);
    }

    #[test]
    fn output_is_deterministic_apart_from_timestamp() {
        let c = cfg();
        let a = render_csv(&run_sweep(&c, Command::ScanDelta1).unwrap(), &c, "T").unwrap();
        let b = render_csv(&run_sweep(&c, Command::ScanDelta1).unwrap(), &c, "T").unwrap();
        assert_eq!(a, b);
        let mut other = c.clone();
        other.base.g = 0.4;
        assert_ne!(config_hash(&c), config_hash(&other));
    }

    #[test]
    fn argmin_column_and_sidecar() {
        let c = SweepConfig {
            axes: vec![Axis::values("J", &[0.0, 0.05])],
            minimize_over: Some(Axis::linear("delta1", 0.1, 0.4, 7)),
            ..cfg()
        };
        let r = run_sweep(&c, Command::ScanG).unwrap();
        assert!(columns(&r).contains(&"delta1_argmin".to_string()));
        let dir = tempfile::tempdir().unwrap();
        let (csv_path, json_path) = write_outputs(&r, &c, &dir.path().join("run"), None).unwrap();
        let side: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(json_path).unwrap()).unwrap();
        assert_eq!(side["rows"], 2);
        assert_eq!(side["config_sha256"], config_hash(&c));
        let back: SweepConfig = serde_json::from_value(side["config"].clone()).unwrap();
        assert_eq!(back, c);
        assert!(std::fs::read_to_string(csv_path).unwrap().starts_with("# optomech-sweep"));
    }
}
