//! Synthetic chart renderer: draws waveforms in the chart styles the
//! pipeline must handle (bare trace, box, axis lines, colored grid), with
//! optional stitch marks, skew and speck noise, and records exact ground
//! truth for round-trip testing. Ships in the library so the CLI can
//! generate demo corpora.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::preprocess::GridColorSpec;
use crate::raster::RasterImage;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AxisStyle {
    None,
    Box,
    Axes,
    Grid,
}

/// Everything about how a chart is drawn. Defect injection order is
/// geometry, trace, marks, skew, noise; ground truth is recorded in
/// pre-skew coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChartStyle {
    pub axis_kind: AxisStyle,
    pub grid_color: GridColorSpec,
    /// Pixels between grid lines.
    pub grid_pitch: usize,
    /// Vertical trace thickness in pixels.
    pub trace_thickness: usize,
    /// Inclusive column ranges of stitch marks.
    pub marks: Vec<(usize, usize)>,
    pub mark_color: GridColorSpec,
    /// Degrees, positive = counterclockwise.
    pub skew: f64,
    /// Fraction of pixels flipped to isolated dark specks, in [0, 0.05].
    pub noise_density: f64,
    pub dpi: u32,
    pub seed: u64,
    /// Canvas height in pixels.
    pub height: usize,
    /// Bottom-up row of the baseline for the axes style.
    pub baseline_row: usize,
    /// Column of the vertical axis for the axes style.
    pub axis_col: usize,
    /// Inset of the box frame from the canvas edge.
    pub box_inset: usize,
}

impl Default for ChartStyle {
    fn default() -> Self {
        Self {
            axis_kind: AxisStyle::None,
            grid_color: GridColorSpec::Red,
            grid_pitch: 20,
            trace_thickness: 1,
            marks: Vec::new(),
            mark_color: GridColorSpec::Red,
            skew: 0.0,
            noise_density: 0.0,
            dpi: 300,
            seed: 0,
            height: 200,
            baseline_row: 12,
            axis_col: 8,
            box_inset: 5,
        }
    }
}

/// Exact render record, taken before skew and noise injection.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundTruth {
    /// Bottom-up centerline row per rendered column.
    pub centerline: Vec<i32>,
    pub style: ChartStyle,
    pub mark_ranges: Vec<(usize, usize)>,
    pub applied_skew: f64,
}

const INK: [u8; 3] = [0, 0, 0];

fn set_bu(img: &mut RasterImage, x: usize, row_bu: i32, rgb: [u8; 3]) {
    let h = img.height() as i32;
    if row_bu >= 0 && row_bu < h {
        img.set(x, (h - 1 - row_bu) as usize, rgb);
    }
}

/// Draw a chart for `waveform` (bottom-up centerline row per column) in the
/// given style. The image width equals the waveform length.
pub fn render_chart(waveform: &[i32], style: &ChartStyle) -> Result<(RasterImage, GroundTruth)> {
    let w = waveform.len();
    let h = style.height;
    assert!(w > 0, "waveform must be nonempty");
    let thick = style.trace_thickness.max(1) as i32;
    let below = (thick - 1) / 2; // thickness extends this far below the centerline
    let above = thick - 1 - below;
    for &v in waveform {
        if v - below < 0 || v + above >= h as i32 {
            return Err(Error::WaveformOutOfCanvas { value: v, height: h });
        }
    }

    let mut img = RasterImage::blank(w, h);

    // reference geometry
    match style.axis_kind {
        AxisStyle::None => {}
        AxisStyle::Box => {
            let (l, r) = (style.box_inset, w - 1 - style.box_inset);
            let (b, t) = (style.box_inset as i32, (h - 1 - style.box_inset) as i32);
            for x in l..=r {
                set_bu(&mut img, x, b, INK);
                set_bu(&mut img, x, t, INK);
            }
            for row in b..=t {
                set_bu(&mut img, l, row, INK);
                set_bu(&mut img, r, row, INK);
            }
        }
        AxisStyle::Axes => {
            for x in 0..w {
                set_bu(&mut img, x, style.baseline_row as i32, INK);
            }
            for row in 0..h as i32 {
                set_bu(&mut img, style.axis_col, row, INK);
            }
        }
        AxisStyle::Grid => {
            let color = style.grid_color.center();
            for row in (0..h).step_by(style.grid_pitch.max(2)) {
                for x in 0..w {
                    set_bu(&mut img, x, row as i32, color);
                }
            }
            for x in (0..w).step_by(style.grid_pitch.max(2)) {
                for row in 0..h as i32 {
                    set_bu(&mut img, x, row, color);
                }
            }
        }
    }

    // connected trace: each column covers the span to the previous column
    for (x, &v) in waveform.iter().enumerate() {
        let prev = if x == 0 { v } else { waveform[x - 1] };
        let lo = v.min(prev) - below;
        let hi = v.max(prev) + above;
        for row in lo..=hi {
            set_bu(&mut img, x, row, INK);
        }
    }

    // stitch marks, full height
    let mark_rgb = style.mark_color.center();
    for &(l, r) in &style.marks {
        for x in l..=r.min(w - 1) {
            for y in 0..h {
                img.set(x, y, mark_rgb);
            }
        }
    }

    let truth = GroundTruth {
        centerline: waveform.to_vec(),
        style: style.clone(),
        mark_ranges: style.marks.clone(),
        applied_skew: style.skew,
    };

    if style.skew != 0.0 {
        img = rotate_raster(&img, style.skew);
    }

    if style.noise_density > 0.0 {
        sprinkle_specks(&mut img, style.noise_density, style.seed);
    }

    Ok((img, truth))
}

/// Nearest-neighbor rotation about the center; uncovered pixels are white.
pub fn rotate_raster(img: &RasterImage, angle: f64) -> RasterImage {
    let (w, h) = (img.width(), img.height());
    let cx = (w as f64 - 1.0) / 2.0;
    let cy = (h as f64 - 1.0) / 2.0;
    let rad = angle.to_radians();
    let (sin, cos) = rad.sin_cos();
    let mut out = RasterImage::blank(w, h);
    for y in 0..h {
        for x in 0..w {
            let dx = x as f64 - cx;
            let dy = y as f64 - cy;
            let sx = (cx + dx * cos - dy * sin).round();
            let sy = (cy + dx * sin + dy * cos).round();
            if sx >= 0.0 && sy >= 0.0 && (sx as usize) < w && (sy as usize) < h {
                out.set(x, y, img.get(sx as usize, sy as usize));
            }
        }
    }
    out
}

fn is_light(rgb: [u8; 3]) -> bool {
    rgb.iter().all(|&c| c > 200)
}

/// Flip about `density * w * h` background pixels to isolated dark specks.
/// A speck is only placed where its whole 3x3 neighborhood is light, so
/// every speck is removable by the despeckle filter.
fn sprinkle_specks(img: &mut RasterImage, density: f64, seed: u64) {
    let (w, h) = (img.width(), img.height());
    let target = (density * (w * h) as f64).round() as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut placed = 0;
    let mut attempts = 0;
    while placed < target && attempts < target * 20 {
        attempts += 1;
        let x = rng.gen_range(1..w - 1);
        let y = rng.gen_range(1..h - 1);
        let clear = (-1i64..=1).all(|dy| {
            (-1i64..=1).all(|dx| {
                is_light(img.get((x as i64 + dx) as usize, (y as i64 + dy) as usize))
            })
        });
        if clear {
            img.set(x, y, INK);
            placed += 1;
        }
    }
}

/// Spike shape for [`make_ecg_like`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpikeSpec {
    /// Columns between spikes.
    pub period: usize,
    /// Peak height in pixels above the hump envelope.
    pub height: i32,
    /// Spike width in columns.
    pub width: usize,
}

/// Deviation of the hump component from the baseline, in pixels.
pub const HUMP_AMPLITUDE: f64 = 8.0;

/// A P-QRS-T-like test waveform: gentle humps plus periodic narrow spikes,
/// returned as deviations from a zero baseline. Deterministic per seed.
pub fn make_ecg_like(length: usize, spike: SpikeSpec, seed: u64) -> Vec<i32> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let phase1: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let phase2: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let mut wave: Vec<i32> = (0..length)
        .map(|x| {
            let t = x as f64;
            let hump = 0.7 * (t / 23.0 + phase1).sin() + 0.3 * (t / 9.0 + phase2).sin();
            (HUMP_AMPLITUDE * hump).round() as i32
        })
        .collect();
    if spike.height != 0 && spike.width > 0 && spike.period > 0 {
        let mut c = spike.period / 2;
        while c + spike.width <= length {
            for i in 0..spike.width {
                wave[c + i] += spike.height;
            }
            c += spike.period;
        }
    }
    wave
}
