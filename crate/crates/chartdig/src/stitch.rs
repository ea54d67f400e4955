//! Multi-part strips: detect handmade colored cut marks, derive the signal
//! region of each part, and append per-part signals into one record.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::preprocess::GridColorSpec;
use crate::raster::RasterImage;
use crate::trace::Signal1D;

/// What a stitch mark looks like: its color class and how much of the image
/// height a pen stroke must cover to count as deliberate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarkSpec {
    pub color: GridColorSpec,
    /// Fraction of image height, in (0, 1].
    pub min_height_fraction: f64,
}

impl Default for MarkSpec {
    fn default() -> Self {
        Self { color: GridColorSpec::Red, min_height_fraction: 0.5 }
    }
}

/// Where a scanned part sits in the original strip; fixes how many marks it
/// must carry (first/last: 1, intermediate: 2, only: 0).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StripPosition {
    First,
    Intermediate,
    Last,
    Only,
}

impl StripPosition {
    pub fn expected_marks(&self) -> usize {
        match self {
            StripPosition::First | StripPosition::Last => 1,
            StripPosition::Intermediate => 2,
            StripPosition::Only => 0,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            StripPosition::First => "first",
            StripPosition::Intermediate => "intermediate",
            StripPosition::Last => "last",
            StripPosition::Only => "only",
        }
    }

    /// Position of part `index` among `total` ordered parts.
    pub fn for_index(index: usize, total: usize) -> StripPosition {
        match (index, total) {
            (_, 1) => StripPosition::Only,
            (0, _) => StripPosition::First,
            (i, n) if i + 1 == n => StripPosition::Last,
            _ => StripPosition::Intermediate,
        }
    }
}

/// Inclusive column interval of one detected mark.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarkInterval {
    pub left: usize,
    pub right: usize,
}

/// Scan columns for pen marks: maximal intervals where the count of
/// spec-colored pixels reaches the minimum height fraction.
pub fn detect_marks(img: &RasterImage, spec: &MarkSpec) -> Vec<MarkInterval> {
    let (w, h) = (img.width(), img.height());
    let need = (spec.min_height_fraction * h as f64).ceil() as usize;
    let mut intervals = Vec::new();
    let mut start: Option<usize> = None;
    for x in 0..w {
        let count = (0..h).filter(|&y| spec.color.matches(img.get(x, y))).count();
        if count >= need.max(1) {
            start.get_or_insert(x);
        } else if let Some(s) = start.take() {
            intervals.push(MarkInterval { left: s, right: x - 1 });
        }
    }
    if let Some(s) = start {
        intervals.push(MarkInterval { left: s, right: w - 1 });
    }
    intervals
}

/// Column range (inclusive) holding signal for a part, given its marks.
pub fn segment_bounds(
    marks: &[MarkInterval],
    width: usize,
    pos: StripPosition,
) -> Result<(usize, usize)> {
    let expected = pos.expected_marks();
    if marks.len() != expected {
        return Err(Error::MarkCountMismatch {
            position: pos.label(),
            expected,
            found: marks.len(),
        });
    }
    Ok(match pos {
        StripPosition::Only => (0, width - 1),
        StripPosition::First => (0, marks[0].left.saturating_sub(1)),
        StripPosition::Last => (marks[0].right + 1, width - 1),
        StripPosition::Intermediate => (marks[0].right + 1, marks[1].left.saturating_sub(1)),
    })
}

/// Concatenate part signals into one record with contiguous columns. With
/// `continuity` on (the default pipeline behavior), each later part is
/// vertically offset so junction values meet; hand-drawn marks consume
/// columns, so raw concatenation would otherwise step.
pub fn append_segments_with(parts: &[Signal1D], continuity: bool) -> Result<Signal1D> {
    let Some(first) = parts.first() else {
        return Err(Error::NoSegments);
    };
    let dpi = first.dpi;
    if let Some(bad) = parts.iter().find(|p| p.dpi != dpi) {
        return Err(Error::DpiMismatch { a: dpi, b: bad.dpi });
    }

    let mut samples = Vec::with_capacity(parts.iter().map(|p| p.len()).sum());
    let mut next_col = 0usize;
    for part in parts {
        let offset = if continuity {
            match (samples.last(), part.samples.first()) {
                (Some(prev), Some(head)) => {
                    let prev: &crate::trace::Sample = prev;
                    prev.value - head.value
                }
                _ => 0,
            }
        } else {
            0
        };
        for s in &part.samples {
            samples.push(crate::trace::Sample {
                column: next_col,
                value: s.value + offset,
                provenance: s.provenance,
            });
            next_col += 1;
        }
    }
    Ok(Signal1D { samples, dpi })
}

/// [`append_segments_with`] with junction continuity enabled.
pub fn append_segments(parts: &[Signal1D]) -> Result<Signal1D> {
    append_segments_with(parts, true)
}
