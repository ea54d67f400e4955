//! Reference-geometry analysis: classify the chart as grid, box, axis lines
//! or bare trace, locate the scan origin, and strip reference lines.
//!
//! Rows in this module's outputs are bottom-up (row 0 = image bottom), the
//! orientation trace extraction works in. Raster storage is top-down; the
//! conversion happens here.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::raster::BinaryImage;

/// A band of adjacent full lines (a reference line of thickness >= 1).
/// `lo..=hi` are indices along the perpendicular direction: bottom-up rows
/// for horizontal lines, columns for vertical lines.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineBand {
    pub lo: usize,
    pub hi: usize,
}

impl LineBand {
    pub fn center(&self) -> usize {
        (self.lo + self.hi) / 2
    }

    pub fn contains(&self, i: usize) -> bool {
        self.lo <= i && i <= self.hi
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum LayoutKind {
    /// Repeated ruling in both directions; pitch is the median spacing in px.
    Grid { pitch: usize },
    /// Rectangular frame. Rows are bottom-up.
    Box { left: usize, right: usize, bottom: usize, top: usize },
    /// One horizontal baseline, optionally one vertical line.
    Axes { baseline_row: usize, origin_col: Option<usize> },
    None,
}

/// Reference geometry of a chart, with the detected full-line bands.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxisLayout {
    pub kind: LayoutKind,
    /// Horizontal full lines as bottom-up row bands.
    pub full_rows: Vec<LineBand>,
    /// Vertical full lines as column bands.
    pub full_cols: Vec<LineBand>,
}

/// Reference point for trace scanning.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanOrigin {
    pub origin_col: usize,
    /// Bottom-up row of the amplitude baseline.
    pub baseline_row: usize,
}

/// Fraction of the image extent a row/column must cover in ink to count as
/// a full reference line. Traces cross axes, so 100% is unrealistic.
pub const FULL_LINE_COVERAGE: f64 = 0.8;

/// Grid spacings within this relative deviation of their median are uniform.
const GRID_SPACING_TOLERANCE: f64 = 0.2;

/// Bands whose center lies within this fraction of the extent from an edge
/// count as "near the border" for box classification.
const BORDER_FRACTION: f64 = 0.25;

fn coverage_bands(counts: &[usize], extent: usize) -> Vec<LineBand> {
    let need = (FULL_LINE_COVERAGE * extent as f64).ceil() as usize;
    let mut bands = Vec::new();
    let mut start: Option<usize> = None;
    for (i, &c) in counts.iter().enumerate() {
        if c >= need {
            start.get_or_insert(i);
        } else if let Some(s) = start.take() {
            bands.push(LineBand { lo: s, hi: i - 1 });
        }
    }
    if let Some(s) = start {
        bands.push(LineBand { lo: s, hi: counts.len() - 1 });
    }
    bands
}

fn uniform_spacing(bands: &[LineBand]) -> Option<usize> {
    if bands.len() < 3 {
        return None;
    }
    let centers: Vec<usize> = bands.iter().map(|b| b.center()).collect();
    let mut gaps: Vec<usize> = centers.windows(2).map(|w| w[1] - w[0]).collect();
    gaps.sort_unstable();
    let median = gaps[gaps.len() / 2];
    let ok = gaps.iter().all(|&g| {
        (g as f64 - median as f64).abs() <= GRID_SPACING_TOLERANCE * median as f64
    });
    (ok && median >= 2).then_some(median)
}

/// Classify the chart's reference geometry from full-line analysis.
pub fn classify_axes(img: &BinaryImage) -> AxisLayout {
    let (w, h) = (img.width(), img.height());
    let mut row_counts = vec![0usize; h]; // indexed bottom-up
    let mut col_counts = vec![0usize; w];
    for y in 0..h {
        for x in 0..w {
            if img.is_ink(x, y) {
                row_counts[h - 1 - y] += 1;
                col_counts[x] += 1;
            }
        }
    }
    let full_rows = coverage_bands(&row_counts, w);
    let full_cols = coverage_bands(&col_counts, h);

    let row_pitch = uniform_spacing(&full_rows);
    let col_pitch = uniform_spacing(&full_cols);

    let kind = if full_rows.len() >= 3 && full_cols.len() >= 3 && row_pitch.is_some() && col_pitch.is_some() {
        let pitches = [row_pitch.unwrap(), col_pitch.unwrap()];
        LayoutKind::Grid { pitch: (pitches[0] + pitches[1]) / 2 }
    } else if full_rows.len() == 2 && full_cols.len() == 2 {
        let near = |c: usize, extent: usize| {
            let f = BORDER_FRACTION * extent as f64;
            (c as f64) < f || (c as f64) > extent as f64 - f
        };
        let rows_near = full_rows.iter().all(|b| near(b.center(), h));
        let cols_near = full_cols.iter().all(|b| near(b.center(), w));
        if rows_near && cols_near {
            LayoutKind::Box {
                left: full_cols[0].center(),
                right: full_cols[1].center(),
                bottom: full_rows[0].center(),
                top: full_rows[1].center(),
            }
        } else {
            LayoutKind::None
        }
    } else if full_rows.len() == 1 && full_cols.len() <= 1 {
        LayoutKind::Axes {
            baseline_row: full_rows[0].center(),
            origin_col: full_cols.first().map(|b| b.center()),
        }
    } else {
        LayoutKind::None
    };

    AxisLayout { kind, full_rows, full_cols }
}

/// Locate the scanning reference point: axis/box intersection when reference
/// geometry exists, otherwise first ink column and the image bottom row.
pub fn resolve_origin(layout: &AxisLayout, img: &BinaryImage) -> Result<ScanOrigin> {
    let (w, h) = (img.width(), img.height());
    let first_ink_col = (0..w).find(|&x| (0..h).any(|y| img.is_ink(x, y)));
    let Some(first_col) = first_ink_col else {
        return Err(Error::NoInk);
    };
    let origin = match &layout.kind {
        LayoutKind::Box { left, bottom, .. } => ScanOrigin { origin_col: *left, baseline_row: *bottom },
        LayoutKind::Axes { baseline_row, origin_col } => ScanOrigin {
            origin_col: origin_col.unwrap_or(first_col),
            baseline_row: *baseline_row,
        },
        LayoutKind::Grid { .. } | LayoutKind::None => {
            ScanOrigin { origin_col: first_col, baseline_row: 0 }
        }
    };
    Ok(origin)
}

/// Erase detected reference lines, keeping pixels where the trace crosses a
/// line: an ink pixel inside a horizontal band survives if the column has ink
/// just above and just below the band (outside any full line), and likewise
/// left/right of vertical bands.
pub fn strip_reference_lines(img: &BinaryImage, layout: &AxisLayout) -> BinaryImage {
    let (w, h) = (img.width(), img.height());
    let mut out = img.clone();

    // bands in top-down rows for direct pixel addressing
    let row_bands: Vec<LineBand> = layout
        .full_rows
        .iter()
        .map(|b| LineBand { lo: h - 1 - b.hi, hi: h - 1 - b.lo })
        .collect();
    let on_row_band = |y: usize| row_bands.iter().any(|b| b.contains(y));
    let on_col_band = |x: usize| layout.full_cols.iter().any(|b| b.contains(x));

    for band in &row_bands {
        for x in 0..w {
            let above_ok = band.lo > 0
                && img.is_ink(x, band.lo - 1)
                && !on_row_band(band.lo - 1)
                && !on_col_band(x);
            let below_ok = band.hi + 1 < h
                && img.is_ink(x, band.hi + 1)
                && !on_row_band(band.hi + 1)
                && !on_col_band(x);
            if above_ok && below_ok {
                continue; // trace crosses the line here
            }
            for y in band.lo..=band.hi {
                out.set_ink(x, y, false);
            }
        }
    }
    for band in &layout.full_cols {
        for y in 0..h {
            let left_ok = band.lo > 0
                && img.is_ink(band.lo - 1, y)
                && !on_col_band(band.lo - 1)
                && !on_row_band(y);
            let right_ok = band.hi + 1 < w
                && img.is_ink(band.hi + 1, y)
                && !on_col_band(band.hi + 1)
                && !on_row_band(y);
            if left_ok && right_ok {
                continue;
            }
            for x in band.lo..=band.hi {
                out.set_ink(x, y, false);
            }
        }
    }
    out
}
