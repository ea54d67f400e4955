//! Layout classification and origin stability over the synthetic corpus.

use chartdig::layout::{classify_axes, resolve_origin, LayoutKind};
use chartdig::preprocess::{binarize, despeckle, otsu_threshold};
use chartdig::raster::BinaryImage;
use chartdig::{make_ecg_like, render_chart, to_grayscale, AxisStyle, ChartStyle, SpikeSpec};

fn render_binary(style_kind: AxisStyle, seed: u64, noise: f64) -> BinaryImage {
    let wave: Vec<i32> = make_ecg_like(500, SpikeSpec { period: 0, height: 0, width: 0 }, seed)
        .into_iter()
        .map(|v| v + 100)
        .collect();
    let style = ChartStyle {
        axis_kind: style_kind,
        noise_density: noise,
        seed,
        ..Default::default()
    };
    let (img, _) = render_chart(&wave, &style).unwrap();
    let gray = to_grayscale(&img);
    binarize(&gray, otsu_threshold(&gray))
}

fn kind_matches(kind: &LayoutKind, style: AxisStyle) -> bool {
    matches!(
        (kind, style),
        (LayoutKind::None, AxisStyle::None)
            | (LayoutKind::Box { .. }, AxisStyle::Box)
            | (LayoutKind::Axes { .. }, AxisStyle::Axes)
            | (LayoutKind::Grid { .. }, AxisStyle::Grid)
    )
}

const STYLES: [AxisStyle; 4] = [AxisStyle::None, AxisStyle::Box, AxisStyle::Axes, AxisStyle::Grid];

#[test]
fn classification_is_perfect_on_clean_corpus() {
    for style in STYLES {
        for seed in 0..10u64 {
            let bin = despeckle(&render_binary(style, seed, 0.0));
            let layout = classify_axes(&bin);
            assert!(
                kind_matches(&layout.kind, style),
                "seed {seed}: style {style:?} classified as {:?}",
                layout.kind
            );
        }
    }
}

#[test]
fn classification_survives_speck_noise() {
    let mut correct = 0usize;
    let mut total = 0usize;
    for style in STYLES {
        for seed in 0..10u64 {
            let bin = despeckle(&render_binary(style, seed, 0.005));
            let layout = classify_axes(&bin);
            total += 1;
            if kind_matches(&layout.kind, style) {
                correct += 1;
            }
        }
    }
    let rate = correct as f64 / total as f64;
    assert!(rate >= 0.95, "classification rate {rate:.2} on noisy corpus ({correct}/{total})");
}

#[test]
fn origin_is_stable_under_despeckle() {
    for style in STYLES {
        for seed in 0..5u64 {
            let raw = render_binary(style, seed, 0.0);
            let cleaned = despeckle(&raw);
            let before = resolve_origin(&classify_axes(&raw), &raw).unwrap();
            let after = resolve_origin(&classify_axes(&cleaned), &cleaned).unwrap();
            assert_eq!(before, after, "style {style:?} seed {seed}");
        }
    }
}

#[test]
fn box_bounds_match_render_within_one_pixel() {
    let bin = despeckle(&render_binary(AxisStyle::Box, 3, 0.0));
    let layout = classify_axes(&bin);
    // default box inset is 5 on a 500x200 canvas
    match layout.kind {
        LayoutKind::Box { left, right, bottom, top } => {
            assert!(left.abs_diff(5) <= 1);
            assert!(right.abs_diff(494) <= 1);
            assert!(bottom.abs_diff(5) <= 1);
            assert!(top.abs_diff(194) <= 1);
        }
        other => panic!("expected box, got {other:?}"),
    }
}

#[test]
fn axes_baseline_matches_render_within_one_pixel() {
    let bin = despeckle(&render_binary(AxisStyle::Axes, 3, 0.0));
    let layout = classify_axes(&bin);
    // default baseline row 12, axis column 8
    match layout.kind {
        LayoutKind::Axes { baseline_row, origin_col } => {
            assert!(baseline_row.abs_diff(12) <= 1);
            assert_eq!(origin_col, Some(8));
        }
        other => panic!("expected axes, got {other:?}"),
    }
}
