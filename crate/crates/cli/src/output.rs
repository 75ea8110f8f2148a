use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use serde_json::{json, Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// A command's result in both encodings, built from the same strings.
pub struct Report {
    pub json: Value,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    pub seed: Option<u64>,
    /// Human-readable text printed to stderr alongside the data.
    pub summary: Option<String>,
    pub success: bool,
}

impl Report {
    pub fn new(json: Value, header: Vec<&'static str>, rows: Vec<Vec<String>>) -> Self {
        Report {
            json,
            header,
            rows,
            seed: None,
            summary: None,
            success: true,
        }
    }
}

/// Provenance recorded in every output.
pub struct Manifest {
    pub subcommand: &'static str,
    pub flags: Map<String, Value>,
    pub seed: Option<u64>,
    pub wall_time: f64,
    pub output: Option<PathBuf>,
}

impl Manifest {
    fn to_json(&self) -> Value {
        json!({
            "subcommand": self.subcommand,
            "flags": self.flags,
            "version": env!("CARGO_PKG_VERSION"),
            "seed": self.seed,
            "wall_time_seconds": self.wall_time,
            "output": self.output.as_ref().map(|p| p.display().to_string()),
        })
    }
}

pub fn render(report: &Report, manifest: &Manifest, format: Format) -> io::Result<Vec<u8>> {
    match format {
        Format::Json => {
            let mut doc = report.json.clone();
            if let Value::Object(map) = &mut doc {
                map.insert("manifest".into(), manifest.to_json());
            }
            let mut out = serde_json::to_vec_pretty(&doc)?;
            out.push(b'\n');
            Ok(out)
        }
        Format::Csv => {
            let mut out = format!("# manifest: {}\n", manifest.to_json()).into_bytes();
            let mut w = csv::Writer::from_writer(&mut out);
            w.write_record(&report.header)?;
            for row in &report.rows {
                w.write_record(row)?;
            }
            w.flush()?;
            drop(w);
            Ok(out)
        }
    }
}

pub fn emit(bytes: &[u8], out: Option<&PathBuf>) -> io::Result<()> {
    match out {
        Some(path) => fs::write(path, bytes),
        None => io::stdout().write_all(bytes),
    }
}
