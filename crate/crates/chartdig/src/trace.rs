//! Pixel-to-vector conversion and 1-D reduction.
//!
//! A cleaned binary image becomes per-column vertical ink runs, each run a
//! complex pair (column + i*lower, column + i*upper). The alpha/beta rule
//! reduces runs to one sample per column: thin runs keep their upper end,
//! tall runs (spikes) keep whichever end lies farther from the previous
//! sample. Gaps are filled by linear interpolation and flat header/trailer
//! stretches are trimmed by count.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::layout::ScanOrigin;
use crate::raster::BinaryImage;

/// One maximal vertical ink run. Rows are bottom-up relative to the
/// baseline row, so values below the baseline are negative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Run {
    pub column: usize,
    pub lower: i32,
    pub upper: i32,
}

impl Run {
    pub fn thickness(&self) -> u32 {
        (self.upper - self.lower + 1) as u32
    }
}

/// The 2-D run vector: runs sorted by column, then by lower row.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct TraceRuns {
    pub runs: Vec<Run>,
}

impl TraceRuns {
    pub fn is_empty(&self) -> bool {
        self.runs.is_empty()
    }

    /// Flatten to the complex-pair form: two components per run with the
    /// same real part (the column), imaginary parts lower then upper.
    pub fn to_complex_pairs(&self) -> Vec<(usize, i32)> {
        self.runs
            .iter()
            .flat_map(|r| [(r.column, r.lower), (r.column, r.upper)])
            .collect()
    }

    /// Rebuild from the complex-pair form. Components must come in pairs
    /// with matching real parts.
    pub fn from_complex_pairs(pairs: &[(usize, i32)]) -> Option<TraceRuns> {
        if pairs.len() % 2 != 0 {
            return None;
        }
        let mut runs = Vec::with_capacity(pairs.len() / 2);
        for chunk in pairs.chunks_exact(2) {
            let ((c0, lower), (c1, upper)) = (chunk[0], chunk[1]);
            if c0 != c1 || lower > upper {
                return None;
            }
            runs.push(Run { column: c0, lower, upper });
        }
        Some(TraceRuns { runs })
    }
}

/// Parameters of the alpha/beta reduction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtractionParams {
    /// Modal run thickness in pixels.
    pub alpha: u32,
    /// Reference row seeding the first column; defaults to the midpoint of
    /// the first column's run.
    pub initial_beta: i32,
}

impl ExtractionParams {
    /// Alpha from the run statistics, beta from the first run's midpoint.
    pub fn from_runs(runs: &TraceRuns) -> Result<ExtractionParams> {
        let alpha = compute_alpha(runs)?;
        let first = runs.runs[0];
        Ok(ExtractionParams { alpha, initial_beta: (first.lower + first.upper).div_euclid(2) })
    }
}

/// Sample origin: measured from ink, or filled in by interpolation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Measured,
    Interpolated,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sample {
    pub column: usize,
    /// Bottom-up row relative to the baseline.
    pub value: i32,
    pub provenance: Provenance,
}

/// One-sample-per-column series in pixel coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Signal1D {
    pub samples: Vec<Sample>,
    pub dpi: u32,
}

impl Signal1D {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn values(&self) -> impl Iterator<Item = i32> + '_ {
        self.samples.iter().map(|s| s.value)
    }
}

/// Scan every column from the origin column rightward, recording maximal
/// vertical ink runs bottom-up relative to the baseline row.
pub fn extract_runs(img: &BinaryImage, origin: ScanOrigin) -> TraceRuns {
    let (w, h) = (img.width(), img.height());
    let mut runs = Vec::new();
    for x in origin.origin_col..w {
        // walk bottom-up: bottom-up row r is stored row h-1-r
        let mut start: Option<i32> = None;
        for r in 0..h {
            let ink = img.is_ink(x, h - 1 - r);
            match (ink, start) {
                (true, None) => start = Some(r as i32),
                (false, Some(s)) => {
                    runs.push(Run {
                        column: x,
                        lower: s - origin.baseline_row as i32,
                        upper: r as i32 - 1 - origin.baseline_row as i32,
                    });
                    start = None;
                }
                _ => {}
            }
        }
        if let Some(s) = start {
            runs.push(Run {
                column: x,
                lower: s - origin.baseline_row as i32,
                upper: h as i32 - 1 - origin.baseline_row as i32,
            });
        }
    }
    TraceRuns { runs }
}

/// Modal run thickness; ties break to the smaller thickness.
pub fn compute_alpha(runs: &TraceRuns) -> Result<u32> {
    if runs.is_empty() {
        return Err(Error::NoTrace);
    }
    let mut counts: std::collections::BTreeMap<u32, usize> = std::collections::BTreeMap::new();
    for run in &runs.runs {
        *counts.entry(run.thickness()).or_insert(0) += 1;
    }
    // BTreeMap iterates thickness ascending, so > keeps the smaller on ties
    let mut best = (0u32, 0usize);
    for (&thickness, &n) in &counts {
        if n > best.1 {
            best = (thickness, n);
        }
    }
    Ok(best.0)
}

/// The alpha/beta reduction. Per column: the run nearest the running
/// reference beta is chosen; a run no taller than alpha stores its upper
/// end, a taller run stores whichever end is farther from beta (the spike
/// tip). Beta becomes the stored sample after every column.
pub fn reduce_to_1d(runs: &TraceRuns, params: &ExtractionParams, dpi: u32) -> Signal1D {
    let mut samples = Vec::new();
    let mut beta = params.initial_beta;
    let mut i = 0;
    let all = &runs.runs;
    while i < all.len() {
        let column = all[i].column;
        let mut j = i;
        while j < all.len() && all[j].column == column {
            j += 1;
        }
        // nearest-midpoint run; compare 2*midpoint to stay in integers
        let run = all[i..j]
            .iter()
            .min_by_key(|r| ((r.lower + r.upper) - 2 * beta).abs())
            .copied()
            .unwrap();
        let value = if run.upper - run.lower <= params.alpha as i32 {
            run.upper
        } else if (beta - run.lower).abs() > (beta - run.upper).abs() {
            run.lower
        } else {
            run.upper
        };
        samples.push(Sample { column, value, provenance: Provenance::Measured });
        beta = value;
        i = j;
    }
    Signal1D { samples, dpi }
}

/// Fill missing columns between the first and last measured samples by
/// linear interpolation, rounded to the nearest row (exact halves round
/// toward the later neighbor's value).
pub fn interpolate_gaps(sig: &Signal1D) -> Result<Signal1D> {
    if sig.samples.len() < 2 {
        return Err(Error::InsufficientData);
    }
    let mut samples = Vec::new();
    for pair in sig.samples.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        samples.push(a);
        let span = (b.column - a.column) as f64;
        for col in a.column + 1..b.column {
            let frac = (col - a.column) as f64 / span;
            let v = a.value as f64 + (b.value as f64 - a.value as f64) * frac;
            let floor = v.floor();
            let value = if (v - floor - 0.5).abs() < 1e-9 {
                // exact half: round toward the later neighbor
                if b.value >= a.value { floor as i32 + 1 } else { floor as i32 }
            } else {
                v.round() as i32
            };
            samples.push(Sample { column: col, value, provenance: Provenance::Interpolated });
        }
    }
    samples.push(*sig.samples.last().unwrap());
    Ok(Signal1D { samples, dpi: sig.dpi })
}

/// Drop `head` leading and `tail` trailing samples, re-basing columns to 0.
pub fn trim_ends(sig: &Signal1D, head: usize, tail: usize) -> Result<Signal1D> {
    let len = sig.len();
    if head + tail >= len {
        return Err(Error::TrimExceedsSignal { head, tail, len });
    }
    let samples = sig.samples[head..len - tail]
        .iter()
        .enumerate()
        .map(|(i, s)| Sample { column: i, ..*s })
        .collect();
    Ok(Signal1D { samples, dpi: sig.dpi })
}
