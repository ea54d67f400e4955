//! Digitize scanned raster images of paper chart recordings (ECG strips,
//! plotter traces, spectra) into calibrated 1-D signals.
//!
//! The pipeline: load the scan, suppress colored grid ruling, binarize via
//! Otsu's method, despeckle, deskew, classify and strip reference geometry
//! (grid/box/axis lines), convert ink columns to vertical runs, reduce to
//! one sample per column with the alpha/beta rule, interpolate gaps, trim
//! header/trailer, calibrate to physical units and export. Multi-part scans
//! are segmented at hand-drawn colored marks and appended.
//!
//! [`synth`] renders ground-truth charts for testing and demos.

pub mod calib;
pub mod error;
pub mod layout;
pub mod pipeline;
pub mod plot;
pub mod preprocess;
pub mod raster;
pub mod stitch;
pub mod synth;
pub mod trace;

pub use crate::calib::{CalibSpec, ExportFormat, PhysicalSignal};
pub use crate::error::{Error, Result};
pub use crate::layout::{AxisLayout, LayoutKind, ScanOrigin};
pub use crate::pipeline::{digitize_image, digitize_strips, AxisMode, PipelineConfig};
pub use crate::preprocess::{GridColorSpec, SkewEstimate, SkewSearch};
pub use crate::raster::{load_image, to_grayscale, BinaryImage, GrayImage, RasterImage};
pub use crate::stitch::{MarkSpec, StripPosition};
pub use crate::synth::{make_ecg_like, render_chart, AxisStyle, ChartStyle, GroundTruth, SpikeSpec};
pub use crate::trace::{ExtractionParams, Signal1D, TraceRuns};
