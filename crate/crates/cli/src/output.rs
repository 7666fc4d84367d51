//! CSV tables with a commented header block, run manifests and gnuplot scripts.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Duration;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::CliError;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Formats a float with the shortest round-trip representation.
pub fn num(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else {
        v.to_string()
    }
}

pub fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

#[derive(Debug, Clone)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub notes: Vec<String>,
}

impl Table {
    pub fn new<S: AsRef<str>>(columns: &[S]) -> Self {
        Self { columns: columns.iter().map(|c| c.as_ref().to_string()).collect(), rows: Vec::new(), notes: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

/// Everything that determines a run's output.
#[derive(Debug, Clone)]
pub struct RunSpec {
    pub command: &'static str,
    pub config: Vec<(String, String)>,
    pub params: Vec<(String, String)>,
    pub seed: Option<u64>,
}

impl RunSpec {
    fn canonical(&self) -> String {
        let mut s = format!("m2magg {VERSION}\ncommand={}\n", self.command);
        for (k, v) in self.config.iter().chain(&self.params) {
            let _ = writeln!(s, "{k}={v}");
        }
        if let Some(seed) = self.seed {
            let _ = writeln!(s, "seed={seed}");
        }
        s
    }

    pub fn hash(&self) -> String {
        Sha256::digest(self.canonical().as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
    }
}

fn join(pairs: &[(String, String)]) -> String {
    pairs.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(" ")
}

pub fn render_csv(spec: &RunSpec, table: &Table) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# m2magg {VERSION} {}", spec.command);
    let _ = writeln!(s, "# manifest-hash: {}", spec.hash());
    let _ = writeln!(s, "# config: {}", join(&spec.config));
    let _ = writeln!(s, "# params: {}", join(&spec.params));
    if let Some(seed) = spec.seed {
        let _ = writeln!(s, "# seed: {seed}");
    }
    for n in &table.notes {
        let _ = writeln!(s, "# {n}");
    }
    let _ = writeln!(s, "{}", table.columns.join(","));
    for r in &table.rows {
        let _ = writeln!(s, "{}", r.join(","));
    }
    s
}

/// x and y columns of a generated plot script.
#[derive(Debug, Clone, Copy)]
pub struct PlotSpec {
    pub x: &'static str,
    pub y: &'static str,
    pub log_x: bool,
}

fn render_plot(csv_name: &str, table: &Table, p: PlotSpec) -> Option<String> {
    let col = |name: &str| table.columns.iter().position(|c| *c == name).map(|i| i + 1);
    let (x, y) = (col(p.x)?, col(p.y)?);
    let mut s = String::new();
    let _ = writeln!(s, "set datafile separator ','");
    let _ = writeln!(s, "set datafile commentschars '#'");
    let _ = writeln!(s, "set key autotitle columnhead");
    let _ = writeln!(s, "set xlabel '{}'\nset ylabel '{}'", p.x, p.y);
    if p.log_x {
        let _ = writeln!(s, "set logscale x");
    }
    let _ = writeln!(s, "plot '{csv_name}' using {x}:{y} with points pt 7 ps 0.5");
    Some(s)
}

#[derive(Debug, Serialize)]
struct Manifest<'a> {
    command: &'a str,
    version: &'a str,
    config_hash: String,
    seed: Option<u64>,
    outputs: Vec<String>,
    wall_clock_seconds: f64,
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Io { path: path.into(), source })
}

/// Writes `<command>.csv`, the optional plot script and `manifest.json` into `dir`.
pub fn write_run(
    dir: &Path,
    spec: &RunSpec,
    table: &Table,
    plot: Option<PlotSpec>,
    elapsed: Duration,
) -> Result<Vec<PathBuf>, CliError> {
    std::fs::create_dir_all(dir).map_err(|source| CliError::Io { path: dir.into(), source })?;
    let csv_name = format!("{}.csv", spec.command);
    let csv = dir.join(&csv_name);
    write(&csv, &render_csv(spec, table))?;
    let mut outputs = vec![csv];
    if let Some(script) = plot.and_then(|p| render_plot(&csv_name, table, p)) {
        let gp = dir.join(format!("{}.gp", spec.command));
        write(&gp, &format!("# manifest-hash: {}\n{script}", spec.hash()))?;
        outputs.push(gp);
    }
    let manifest = Manifest {
        command: spec.command,
        version: VERSION,
        config_hash: spec.hash(),
        seed: spec.seed,
        outputs: outputs.iter().map(|p| p.display().to_string()).collect(),
        wall_clock_seconds: elapsed.as_secs_f64(),
    };
    let path = dir.join("manifest.json");
    let json = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    write(&path, &(json + "\n"))?;
    outputs.push(path);
    Ok(outputs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec() -> RunSpec {
        RunSpec {
            command: "hops",
            config: vec![("eta".into(), "0.5".into())],
            params: vec![("t".into(), "0.01".into())],
            seed: None,
        }
    }

    #[test]
    fn hash_tracks_inputs() {
        let a = spec();
        let mut b = spec();
        assert_eq!(a.hash(), b.hash());
        b.params[0].1 = "0.1".into();
        assert_ne!(a.hash(), b.hash());
        assert_eq!(a.hash().len(), 64);
    }

    #[test]
    fn csv_layout() {
        let mut t = Table::new(&["a", "b"]);
        t.push(vec![num(1.5), num(f64::INFINITY)]);
        let s = render_csv(&spec(), &t);
        let lines: Vec<&str> = s.lines().collect();
        assert!(lines[1].starts_with("# manifest-hash: "));
        assert_eq!(&lines[lines.len() - 2..], ["a,b", "1.5,inf"]);
    }

    #[test]
    fn plot_script_names_columns() {
        let t = Table::new(&["rho", "coverage"]);
        let s = render_plot("x.csv", &t, PlotSpec { x: "rho", y: "coverage", log_x: true }).unwrap();
        assert!(s.contains("using 1:2") && s.contains("logscale x"));
        assert!(render_plot("x.csv", &t, PlotSpec { x: "rho", y: "nope", log_x: false }).is_none());
    }
}
