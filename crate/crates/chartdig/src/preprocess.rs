//! Scan cleanup: colored-grid suppression, Otsu binarization, despeckling,
//! skew detection and rotation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::raster::{BinaryImage, GrayImage, RasterImage};

/// Color class used to key out grid lines (and stitch marks).
///
/// Named classes carry fixed centers, a per-channel tolerance of 90 and a
/// dominance condition: the target channel must exceed each other channel
/// by at least 30, so near-black trace ink never matches.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GridColorSpec {
    Red,
    Green,
    Blue,
    Custom { center: [u8; 3], tolerance: [u8; 3] },
}

const NAMED_TOLERANCE: i16 = 90;
const DOMINANCE_MARGIN: i16 = 30;

impl GridColorSpec {
    pub fn center(&self) -> [u8; 3] {
        match self {
            GridColorSpec::Red => [220, 80, 80],
            GridColorSpec::Green => [80, 200, 80],
            GridColorSpec::Blue => [80, 80, 220],
            GridColorSpec::Custom { center, .. } => *center,
        }
    }

    pub fn matches(&self, rgb: [u8; 3]) -> bool {
        let [r, g, b] = rgb.map(i16::from);
        match self {
            GridColorSpec::Custom { center, tolerance } => {
                let c = center.map(i16::from);
                let t = tolerance.map(i16::from);
                (r - c[0]).abs() <= t[0] && (g - c[1]).abs() <= t[1] && (b - c[2]).abs() <= t[2]
            }
            named => {
                let c = named.center().map(i16::from);
                let within = (r - c[0]).abs() <= NAMED_TOLERANCE
                    && (g - c[1]).abs() <= NAMED_TOLERANCE
                    && (b - c[2]).abs() <= NAMED_TOLERANCE;
                let dominant = match named {
                    GridColorSpec::Red => r - g >= DOMINANCE_MARGIN && r - b >= DOMINANCE_MARGIN,
                    GridColorSpec::Green => g - r >= DOMINANCE_MARGIN && g - b >= DOMINANCE_MARGIN,
                    GridColorSpec::Blue => b - r >= DOMINANCE_MARGIN && b - g >= DOMINANCE_MARGIN,
                    GridColorSpec::Custom { .. } => unreachable!(),
                };
                within && dominant
            }
        }
    }
}

/// Replace every pixel matching `spec` with pure white.
pub fn suppress_grid(img: &RasterImage, spec: &GridColorSpec) -> RasterImage {
    let mut out = img.clone();
    for p in out.pixels_mut() {
        if spec.matches(*p) {
            *p = [255, 255, 255];
        }
    }
    out
}

/// Otsu threshold: the gray level t maximizing between-class variance of the
/// 256-bin histogram split at t, foreground = values <= t. Ties break to the
/// smallest t. A constant image returns value - 1 (clamped), so a blank scan
/// binarizes to all background.
pub fn otsu_threshold(img: &GrayImage) -> u8 {
    let mut hist = [0u64; 256];
    for &v in img.pixels() {
        hist[v as usize] += 1;
    }
    otsu_from_histogram(&hist)
}

/// Histogram form of [`otsu_threshold`]; the image form delegates here.
pub fn otsu_from_histogram(hist: &[u64; 256]) -> u8 {
    let total: u64 = hist.iter().sum();
    debug_assert!(total > 0, "empty histogram");

    let occupied: Vec<usize> = (0..256).filter(|&i| hist[i] > 0).collect();
    if occupied.len() == 1 {
        return (occupied[0] as i32 - 1).clamp(0, 255) as u8;
    }

    let total_f = total as f64;
    let sum_total: f64 = hist.iter().enumerate().map(|(i, &h)| i as f64 * h as f64).sum();

    let mut w_fg = 0.0;
    let mut sum_fg = 0.0;
    let mut best_t = 0u8;
    let mut best_var = f64::NEG_INFINITY;
    for t in 0..256usize {
        w_fg += hist[t] as f64;
        sum_fg += t as f64 * hist[t] as f64;
        let w_bg = total_f - w_fg;
        if w_fg == 0.0 || w_bg == 0.0 {
            continue;
        }
        let m_fg = sum_fg / w_fg;
        let m_bg = (sum_total - sum_fg) / w_bg;
        let var = w_fg * w_bg * (m_fg - m_bg) * (m_fg - m_bg);
        if var > best_var {
            best_var = var;
            best_t = t as u8;
        }
    }
    best_t
}

/// Threshold to a binary image: gray <= threshold becomes ink.
pub fn binarize(img: &GrayImage, threshold: u8) -> BinaryImage {
    let pixels = img.pixels().iter().map(|&v| v <= threshold).collect();
    BinaryImage::new(img.width(), img.height(), pixels)
}

/// Salt-and-pepper filter: removes ink pixels whose 3x3 neighborhood is all
/// background, and isolated axis-adjacent ink pairs whose surrounding border
/// (the enclosing 3x4 / 4x3 window) is all background. Out-of-bounds counts
/// as background. Classification reads the input only; removals apply in one
/// synchronous pass.
pub fn despeckle(img: &BinaryImage) -> BinaryImage {
    let (w, h) = (img.width(), img.height());
    let ink_at = |x: isize, y: isize| -> bool {
        x >= 0 && y >= 0 && (x as usize) < w && (y as usize) < h && img.is_ink(x as usize, y as usize)
    };
    // true for any ink pixel in the rectangle except the listed keep cells
    let border_clear = |x0: isize, y0: isize, x1: isize, y1: isize, keep: &[(isize, isize)]| {
        for y in y0..=y1 {
            for x in x0..=x1 {
                if keep.contains(&(x, y)) {
                    continue;
                }
                if ink_at(x, y) {
                    return false;
                }
            }
        }
        true
    };

    let mut out = img.clone();
    for y in 0..h as isize {
        for x in 0..w as isize {
            if !ink_at(x, y) {
                continue;
            }
            // (a) lone pixel in a 3x3 window
            if border_clear(x - 1, y - 1, x + 1, y + 1, &[(x, y)]) {
                out.set_ink(x as usize, y as usize, false);
                continue;
            }
            // (b) isolated horizontal or vertical pair
            if ink_at(x + 1, y) && border_clear(x - 1, y - 1, x + 2, y + 1, &[(x, y), (x + 1, y)]) {
                out.set_ink(x as usize, y as usize, false);
                out.set_ink(x as usize + 1, y as usize, false);
                continue;
            }
            if ink_at(x, y + 1) && border_clear(x - 1, y - 1, x + 1, y + 2, &[(x, y), (x, y + 1)]) {
                out.set_ink(x as usize, y as usize, false);
                out.set_ink(x as usize, y as usize + 1, false);
            }
        }
    }
    out
}

/// Result of a skew sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SkewEstimate {
    /// Degrees, positive = counterclockwise.
    pub angle: f64,
    /// Normalized variance gap between the best and median candidate, in [0,1].
    pub confidence: f64,
}

/// Search grid for [`detect_skew`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SkewSearch {
    pub max_angle: f64,
    pub step: f64,
}

impl Default for SkewSearch {
    fn default() -> Self {
        Self { max_angle: 5.0, step: 0.05 }
    }
}

/// Estimate skew as the grid angle whose compensating rotation maximizes the
/// variance of the horizontal projection profile.
pub fn detect_skew(img: &BinaryImage, search: SkewSearch) -> Result<SkewEstimate> {
    let (w, h) = (img.width(), img.height());
    let mut ink: Vec<(f64, f64)> = Vec::new();
    for y in 0..h {
        for x in 0..w {
            if img.is_ink(x, y) {
                ink.push((x as f64, y as f64));
            }
        }
    }
    if ink.is_empty() {
        return Err(Error::NoInk);
    }

    let cx = (w as f64 - 1.0) / 2.0;
    let cy = (h as f64 - 1.0) / 2.0;
    let steps = (search.max_angle / search.step).round() as i64;

    let mut scored: Vec<(f64, f64)> = Vec::with_capacity((2 * steps + 1) as usize);
    for k in -steps..=steps {
        let angle = k as f64 * search.step;
        // profile of the image rotated by -angle; rotating content by -angle
        // (CCW-positive, y-down raster) sends (x, y) to the row computed below
        let rad = (-angle).to_radians();
        let (sin, cos) = rad.sin_cos();
        let mut profile = vec![0u32; h];
        for &(x, y) in &ink {
            let row = cy - (x - cx) * sin + (y - cy) * cos;
            let r = row.round();
            if r >= 0.0 && r < h as f64 {
                profile[r as usize] += 1;
            }
        }
        let n = profile.len() as f64;
        let mean = profile.iter().map(|&c| c as f64).sum::<f64>() / n;
        let var = profile.iter().map(|&c| (c as f64 - mean).powi(2)).sum::<f64>() / n;
        scored.push((angle, var));
    }

    // variance ties break toward the smaller correction
    let &(best_angle, best_var) = scored
        .iter()
        .max_by(|a, b| {
            a.1.partial_cmp(&b.1)
                .unwrap()
                .then(b.0.abs().partial_cmp(&a.0.abs()).unwrap())
                .then(b.0.partial_cmp(&a.0).unwrap())
        })
        .unwrap();
    let mut vars: Vec<f64> = scored.iter().map(|&(_, v)| v).collect();
    vars.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let median = vars[vars.len() / 2];
    let confidence = if best_var > 0.0 {
        ((best_var - median) / best_var).clamp(0.0, 1.0)
    } else {
        0.0
    };
    Ok(SkewEstimate { angle: best_angle, confidence })
}

/// Rotate about the image center by `angle` degrees (positive = CCW) using
/// inverse mapping with nearest-neighbor sampling. Same canvas; pixels
/// mapping outside the source become background.
pub fn rotate(img: &BinaryImage, angle: f64) -> BinaryImage {
    let (w, h) = (img.width(), img.height());
    let cx = (w as f64 - 1.0) / 2.0;
    let cy = (h as f64 - 1.0) / 2.0;
    // inverse map: rotate destination coords by +angle in raster (y-down)
    // coordinates, which is -angle in math coordinates
    let rad = angle.to_radians();
    let (sin, cos) = rad.sin_cos();
    let mut out = BinaryImage::blank(w, h);
    for y in 0..h {
        for x in 0..w {
            let dx = x as f64 - cx;
            let dy = y as f64 - cy;
            let sx = (cx + dx * cos - dy * sin).round();
            let sy = (cy + dx * sin + dy * cos).round();
            if sx >= 0.0 && sy >= 0.0 && (sx as usize) < w && (sy as usize) < h {
                out.set_ink(x, y, img.is_ink(sx as usize, sy as usize));
            }
        }
    }
    out
}
