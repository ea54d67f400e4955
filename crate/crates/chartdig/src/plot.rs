//! SVG polyline rendering of a calibrated signal. Output is plain text and
//! byte-deterministic for identical inputs.

use std::fmt::Write as _;
use std::path::Path;

use crate::calib::PhysicalSignal;
use crate::error::{Error, Result};

const WIDTH: f64 = 900.0;
const HEIGHT: f64 = 400.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 20.0;
const MARGIN_TOP: f64 = 20.0;
const MARGIN_BOTTOM: f64 = 50.0;

/// Render the signal as an SVG document with labeled time/amplitude axes.
pub fn render_svg(sig: &PhysicalSignal) -> String {
    assert!(!sig.values.is_empty(), "signal must be nonempty");
    let n = sig.values.len();
    let t_max = sig.time_at(n.saturating_sub(1)).max(sig.sample_period);
    let v_min = sig.values.iter().cloned().fold(f64::INFINITY, f64::min);
    let v_max = sig.values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let v_span = if v_max > v_min { v_max - v_min } else { 1.0 };

    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let x_of = |t: f64| MARGIN_LEFT + t / t_max * plot_w;
    let y_of = |v: f64| MARGIN_TOP + (v_max - v) / v_span * plot_h;

    let mut points = String::new();
    for (i, &v) in sig.values.iter().enumerate() {
        if i > 0 {
            points.push(' ');
        }
        write!(points, "{:.3},{:.3}", x_of(sig.time_at(i)), y_of(v)).unwrap();
    }

    let x_axis_y = HEIGHT - MARGIN_BOTTOM;
    let mut svg = String::new();
    write!(
        svg,
        concat!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" ",
            "viewBox=\"0 0 {w} {h}\">\n",
            "<rect width=\"{w}\" height=\"{h}\" fill=\"white\"/>\n",
            "<line x1=\"{ml}\" y1=\"{mt}\" x2=\"{ml}\" y2=\"{xy}\" stroke=\"black\"/>\n",
            "<line x1=\"{ml}\" y1=\"{xy}\" x2=\"{xr}\" y2=\"{xy}\" stroke=\"black\"/>\n"
        ),
        w = WIDTH,
        h = HEIGHT,
        ml = MARGIN_LEFT,
        mt = MARGIN_TOP,
        xy = x_axis_y,
        xr = WIDTH - MARGIN_RIGHT,
    )
    .unwrap();
    write!(
        svg,
        concat!(
            "<text x=\"{tx:.1}\" y=\"{ty:.1}\" text-anchor=\"middle\" font-size=\"14\">",
            "time [s]</text>\n",
            "<text x=\"16\" y=\"{ay:.1}\" text-anchor=\"middle\" font-size=\"14\" ",
            "transform=\"rotate(-90 16 {ay:.1})\">amplitude [{unit}]</text>\n",
            "<text x=\"{ml}\" y=\"{ly:.1}\" font-size=\"12\">{t0:.3} s</text>\n",
            "<text x=\"{xr}\" y=\"{ly:.1}\" text-anchor=\"end\" font-size=\"12\">{t1:.3} s</text>\n",
            "<text x=\"{lx:.1}\" y=\"{mt2:.1}\" text-anchor=\"end\" font-size=\"12\">{v1:.4}</text>\n",
            "<text x=\"{lx:.1}\" y=\"{xy2:.1}\" text-anchor=\"end\" font-size=\"12\">{v0:.4}</text>\n"
        ),
        tx = MARGIN_LEFT + (WIDTH - MARGIN_LEFT - MARGIN_RIGHT) / 2.0,
        ty = HEIGHT - 12.0,
        ay = MARGIN_TOP + (HEIGHT - MARGIN_TOP - MARGIN_BOTTOM) / 2.0,
        unit = sig.unit_label,
        ml = MARGIN_LEFT,
        ly = x_axis_y + 16.0,
        xr = WIDTH - MARGIN_RIGHT,
        t0 = 0.0,
        t1 = t_max,
        lx = MARGIN_LEFT - 6.0,
        mt2 = MARGIN_TOP + 4.0,
        xy2 = x_axis_y,
        v0 = v_min,
        v1 = v_max,
    )
    .unwrap();
    write!(
        svg,
        "<polyline fill=\"none\" stroke=\"#c22\" stroke-width=\"1.2\" points=\"{points}\"/>\n</svg>\n"
    )
    .unwrap();
    svg
}

/// Write the SVG plot to `path`.
pub fn emit_plot(sig: &PhysicalSignal, path: &Path) -> Result<()> {
    let body = render_svg(sig);
    std::fs::write(path, body).map_err(|e| Error::Io { path: path.to_path_buf(), source: e })
}
