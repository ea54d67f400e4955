//! Pixel-to-physical calibration and data file export.

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::trace::Signal1D;

/// Pixel-to-physical-unit mapping. Defaults are the universal ECG chart
/// conventions: 25 mm/s paper speed, 10 mm per mV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibSpec {
    pub dpi: u32,
    /// mm per second.
    pub paper_speed: f64,
    /// mm per signal unit.
    pub amplitude_scale: f64,
    pub unit_label: String,
}

impl Default for CalibSpec {
    fn default() -> Self {
        Self {
            dpi: 300,
            paper_speed: 25.0,
            amplitude_scale: 10.0,
            unit_label: "mV".into(),
        }
    }
}

const MM_PER_INCH: f64 = 25.4;

impl CalibSpec {
    /// Seconds per horizontal pixel: 25.4 / (dpi * paper speed).
    pub fn sample_period(&self) -> f64 {
        MM_PER_INCH / (f64::from(self.dpi) * self.paper_speed)
    }

    /// Signal units per vertical pixel.
    pub fn units_per_pixel(&self) -> f64 {
        MM_PER_INCH / (f64::from(self.dpi) * self.amplitude_scale)
    }
}

/// A calibrated time series plus the provenance needed to reproduce it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhysicalSignal {
    /// Seconds between samples.
    pub sample_period: f64,
    /// Amplitudes in `unit_label` units.
    pub values: Vec<f64>,
    pub unit_label: String,
    pub calibration: CalibSpec,
    /// Free-form source description (input file, pipeline parameters).
    pub source: String,
}

impl PhysicalSignal {
    pub fn time_at(&self, index: usize) -> f64 {
        index as f64 * self.sample_period
    }
}

/// Supported export formats.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExportFormat {
    Csv,
    /// One amplitude per line, no header.
    Ascii,
    Json,
}

/// Map a pixel signal to physical units. `baseline_row` is subtracted from
/// every row value before scaling; a pipeline that already extracted rows
/// relative to the baseline passes 0.
pub fn to_physical(sig: &Signal1D, spec: &CalibSpec, baseline_row: i32, source: &str) -> PhysicalSignal {
    let upp = spec.units_per_pixel();
    let values = sig
        .values()
        .map(|row| f64::from(row - baseline_row) * upp)
        .collect();
    PhysicalSignal {
        sample_period: spec.sample_period(),
        values,
        unit_label: spec.unit_label.clone(),
        calibration: spec.clone(),
        source: source.to_string(),
    }
}

/// Write the signal to `path` in the requested format.
pub fn export(sig: &PhysicalSignal, format: ExportFormat, path: &Path) -> Result<()> {
    let body = render(sig, format);
    std::fs::write(path, body).map_err(|e| Error::Io { path: path.to_path_buf(), source: e })
}

/// The exact file body `export` writes.
pub fn render(sig: &PhysicalSignal, format: ExportFormat) -> String {
    match format {
        ExportFormat::Csv => {
            let mut out = String::from("t,value\n");
            for (i, v) in sig.values.iter().enumerate() {
                let mut line = Vec::new();
                write!(line, "{:.6},{}\n", sig.time_at(i), v).unwrap();
                out.push_str(std::str::from_utf8(&line).unwrap());
            }
            out
        }
        ExportFormat::Ascii => {
            let mut out = String::new();
            for v in &sig.values {
                out.push_str(&v.to_string());
                out.push('\n');
            }
            out
        }
        ExportFormat::Json => {
            let mut out = serde_json::to_string_pretty(sig).unwrap();
            out.push('\n');
            out
        }
    }
}
