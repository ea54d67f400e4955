//! End-to-end orchestration: raw scan in, pixel signal out. The CLI is a
//! thin wrapper over this module so tests can drive the full pipeline
//! in-process.

use serde::{Deserialize, Serialize};

use crate::calib::CalibSpec;
use crate::error::{Error, Result};
use crate::layout::{self, AxisLayout, LayoutKind};
use crate::preprocess::{self, GridColorSpec, SkewSearch};
use crate::raster::{self, RasterImage};
use crate::stitch::{self, MarkSpec, StripPosition};
use crate::trace::{self, ExtractionParams, Signal1D};

/// Override for the axis classifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AxisMode {
    #[default]
    Auto,
    Grid,
    Box,
    Axes,
    None,
}

/// Every pipeline tunable. Defaults follow the per-module defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PipelineConfig {
    /// Colored-grid suppression; `None` skips the step.
    pub grid_color: Option<GridColorSpec>,
    pub despeckle: bool,
    pub deskew: bool,
    pub skew_search: SkewSearch,
    /// Skew corrections below this confidence are skipped; a bare trace
    /// without reference lines gives the sweep little to lock onto.
    pub min_skew_confidence: f64,
    pub axis_mode: AxisMode,
    /// Overrides the modal run thickness when set.
    pub alpha: Option<u32>,
    pub trim_head: usize,
    pub trim_tail: usize,
    pub mark: MarkSpec,
    /// Vertical junction alignment when appending segments.
    pub continuity: bool,
    pub calib: CalibSpec,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            grid_color: None,
            despeckle: true,
            deskew: true,
            skew_search: SkewSearch::default(),
            min_skew_confidence: 0.6,
            axis_mode: AxisMode::Auto,
            alpha: None,
            trim_head: 0,
            trim_tail: 0,
            mark: MarkSpec::default(),
            continuity: true,
            calib: CalibSpec::default(),
        }
    }
}

fn apply_axis_mode(detected: AxisLayout, mode: AxisMode) -> Result<AxisLayout> {
    let kind_ok = matches!(
        (&detected.kind, mode),
        (_, AxisMode::Auto)
            | (LayoutKind::Grid { .. }, AxisMode::Grid)
            | (LayoutKind::Box { .. }, AxisMode::Box)
            | (LayoutKind::Axes { .. }, AxisMode::Axes)
            | (LayoutKind::None, AxisMode::None)
    );
    if kind_ok {
        return Ok(detected);
    }
    match mode {
        // forcing "none" disables reference-line handling entirely
        AxisMode::None => Ok(AxisLayout { kind: LayoutKind::None, full_rows: vec![], full_cols: vec![] }),
        _ => Err(Error::Config(format!(
            "axis mode {mode:?} forced but detected geometry is {:?}",
            detected.kind
        ))),
    }
}

/// Digitize one cleaned-up scan into a pixel signal. Stages: grid
/// suppression, grayscale, Otsu binarization, despeckle, deskew, axis
/// classification, reference-line stripping, run extraction, alpha/beta
/// reduction, gap interpolation, trimming.
pub fn digitize_image(img: &RasterImage, config: &PipelineConfig, file: &str) -> Result<Signal1D> {
    let suppressed = match &config.grid_color {
        Some(spec) => preprocess::suppress_grid(img, spec),
        None => img.clone(),
    };
    let gray = raster::to_grayscale(&suppressed);
    let threshold = preprocess::otsu_threshold(&gray);
    let mut bin = preprocess::binarize(&gray, threshold);
    if config.despeckle {
        bin = preprocess::despeckle(&bin);
    }
    if config.deskew {
        let est = preprocess::detect_skew(&bin, config.skew_search)
            .map_err(|e| e.at_stage("detect_skew", file))?;
        if est.angle != 0.0 && est.confidence >= config.min_skew_confidence {
            bin = preprocess::rotate(&bin, -est.angle);
        }
    }
    let detected = layout::classify_axes(&bin);
    let layout = apply_axis_mode(detected, config.axis_mode)
        .map_err(|e| e.at_stage("classify_axes", file))?;
    let origin = layout::resolve_origin(&layout, &bin)
        .map_err(|e| e.at_stage("resolve_origin", file))?;
    let stripped = layout::strip_reference_lines(&bin, &layout);

    let runs = trace::extract_runs(&stripped, origin);
    let mut params = ExtractionParams::from_runs(&runs)
        .map_err(|e| e.at_stage("extract_runs", file))?;
    if let Some(alpha) = config.alpha {
        params.alpha = alpha;
    }
    let reduced = trace::reduce_to_1d(&runs, &params, config.calib.dpi);
    let filled = trace::interpolate_gaps(&reduced)
        .map_err(|e| e.at_stage("interpolate_gaps", file))?;
    trace::trim_ends(&filled, config.trim_head, config.trim_tail)
        .map_err(|e| e.at_stage("trim_ends", file))
}

/// Digitize an ordered multi-part scan. File order assigns strip positions
/// (first/intermediate/last); each part's stitch marks are validated
/// against its position, the mark columns are excluded, and the per-part
/// signals are appended.
pub fn digitize_strips(parts: &[(RasterImage, String)], config: &PipelineConfig) -> Result<Signal1D> {
    if parts.is_empty() {
        return Err(Error::NoSegments);
    }
    if parts.len() == 1 {
        let (img, file) = &parts[0];
        return digitize_image(img, config, file);
    }
    let mut signals = Vec::with_capacity(parts.len());
    for (i, (img, file)) in parts.iter().enumerate() {
        let pos = StripPosition::for_index(i, parts.len());
        let marks = stitch::detect_marks(img, &config.mark);
        let (start, end) = stitch::segment_bounds(&marks, img.width(), pos)
            .map_err(|e| e.at_stage("segment_bounds", file))?;
        let cropped = img.crop_columns(start, end);
        signals.push(digitize_image(&cropped, config, file)?);
    }
    stitch::append_segments_with(&signals, config.continuity)
}
