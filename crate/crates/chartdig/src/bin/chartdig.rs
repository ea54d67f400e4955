//! Command-line front end: digitize scans, render synthetic charts, plot
//! exported signals.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use chartdig::{
    calib, digitize_strips, load_image, make_ecg_like, plot, render_chart, AxisMode, AxisStyle,
    ChartStyle, ExportFormat, GridColorSpec, PhysicalSignal, PipelineConfig, SpikeSpec,
};

#[derive(Parser)]
#[command(name = "chartdig", version, about = "Digitize scanned paper chart recordings into 1-D signals")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Digitize one scan, or several ordered marked parts of one strip
    Digitize(DigitizeArgs),
    /// Render a synthetic chart image plus a ground-truth sidecar
    Synth(SynthArgs),
    /// Plot an exported JSON signal as SVG
    Plot(PlotArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ColorName {
    Red,
    Green,
    Blue,
}

impl From<ColorName> for GridColorSpec {
    fn from(c: ColorName) -> Self {
        match c {
            ColorName::Red => GridColorSpec::Red,
            ColorName::Green => GridColorSpec::Green,
            ColorName::Blue => GridColorSpec::Blue,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum AxisModeArg {
    Auto,
    Grid,
    Box,
    Axes,
    None,
}

impl From<AxisModeArg> for AxisMode {
    fn from(m: AxisModeArg) -> Self {
        match m {
            AxisModeArg::Auto => AxisMode::Auto,
            AxisModeArg::Grid => AxisMode::Grid,
            AxisModeArg::Box => AxisMode::Box,
            AxisModeArg::Axes => AxisMode::Axes,
            AxisModeArg::None => AxisMode::None,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Ascii,
    Json,
}

impl From<FormatArg> for ExportFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => ExportFormat::Csv,
            FormatArg::Ascii => ExportFormat::Ascii,
            FormatArg::Json => ExportFormat::Json,
        }
    }
}

#[derive(Args)]
struct DigitizeArgs {
    /// Input scans in strip order (PNG or BMP)
    #[arg(required = true)]
    inputs: Vec<PathBuf>,

    /// JSON file with a full pipeline configuration; flags override it
    #[arg(long)]
    config: Option<PathBuf>,

    /// Data file to write
    #[arg(short, long)]
    output: PathBuf,

    /// Also write an SVG plot here
    #[arg(long)]
    plot: Option<PathBuf>,

    #[arg(long, value_enum)]
    format: Option<FormatArg>,

    /// Suppress a colored grid before binarization
    #[arg(long, value_enum)]
    grid_color: Option<ColorName>,

    #[arg(long)]
    no_despeckle: bool,

    #[arg(long)]
    no_deskew: bool,

    /// Half-width of the skew search in degrees
    #[arg(long)]
    skew_range: Option<f64>,

    /// Skew search step in degrees
    #[arg(long)]
    skew_step: Option<f64>,

    #[arg(long, value_enum)]
    axis_mode: Option<AxisModeArg>,

    /// Override the modal run thickness
    #[arg(long)]
    alpha: Option<u32>,

    #[arg(long)]
    trim_head: Option<usize>,

    #[arg(long)]
    trim_tail: Option<usize>,

    /// Stitch mark color
    #[arg(long, value_enum)]
    mark_color: Option<ColorName>,

    /// Minimum mark height as a fraction of image height
    #[arg(long)]
    mark_min_height: Option<f64>,

    /// Append segments without vertical junction alignment
    #[arg(long)]
    no_continuity: bool,

    #[arg(long)]
    dpi: Option<u32>,

    /// Chart speed in mm/s
    #[arg(long)]
    paper_speed: Option<f64>,

    /// mm per signal unit
    #[arg(long)]
    amplitude_scale: Option<f64>,

    /// Amplitude unit label
    #[arg(long)]
    unit: Option<String>,
}

impl DigitizeArgs {
    fn build_config(&self) -> Result<PipelineConfig, String> {
        let mut cfg = match &self.config {
            Some(path) => {
                let body = std::fs::read_to_string(path)
                    .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
                serde_json::from_str(&body)
                    .map_err(|e| format!("bad config {}: {e}", path.display()))?
            }
            None => PipelineConfig::default(),
        };
        if let Some(c) = self.grid_color {
            cfg.grid_color = Some(c.into());
        }
        if self.no_despeckle {
            cfg.despeckle = false;
        }
        if self.no_deskew {
            cfg.deskew = false;
        }
        if let Some(r) = self.skew_range {
            cfg.skew_search.max_angle = r;
        }
        if let Some(s) = self.skew_step {
            cfg.skew_search.step = s;
        }
        if let Some(m) = self.axis_mode {
            cfg.axis_mode = m.into();
        }
        if self.alpha.is_some() {
            cfg.alpha = self.alpha;
        }
        if let Some(h) = self.trim_head {
            cfg.trim_head = h;
        }
        if let Some(t) = self.trim_tail {
            cfg.trim_tail = t;
        }
        if let Some(c) = self.mark_color {
            cfg.mark.color = c.into();
        }
        if let Some(f) = self.mark_min_height {
            cfg.mark.min_height_fraction = f;
        }
        if self.no_continuity {
            cfg.continuity = false;
        }
        if let Some(dpi) = self.dpi {
            cfg.calib.dpi = dpi;
        }
        if let Some(s) = self.paper_speed {
            cfg.calib.paper_speed = s;
        }
        if let Some(a) = self.amplitude_scale {
            cfg.calib.amplitude_scale = a;
        }
        if let Some(u) = &self.unit {
            cfg.calib.unit_label = u.clone();
        }
        Ok(cfg)
    }
}

fn run_digitize(args: &DigitizeArgs) -> Result<(), String> {
    let config = args.build_config()?;
    let mut parts = Vec::with_capacity(args.inputs.len());
    for path in &args.inputs {
        let img = load_image(path).map_err(|e| e.to_string())?;
        parts.push((img, path.display().to_string()));
    }
    let sources: Vec<String> = args.inputs.iter().map(|p| p.display().to_string()).collect();
    let signal = digitize_strips(&parts, &config).map_err(|e| e.to_string())?;
    let physical = calib::to_physical(&signal, &config.calib, 0, &sources.join(","));

    // render everything before writing so a failure leaves no partial output
    let format: ExportFormat = args.format.map(Into::into).unwrap_or(ExportFormat::Csv);
    let data_body = calib::render(&physical, format);
    let plot_body = args.plot.as_ref().map(|_| plot::render_svg(&physical));

    std::fs::write(&args.output, data_body)
        .map_err(|e| format!("cannot write {}: {e}", args.output.display()))?;
    if let (Some(path), Some(body)) = (&args.plot, plot_body) {
        std::fs::write(path, body).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
    }
    Ok(())
}

#[derive(Clone, Copy, ValueEnum)]
enum StyleArg {
    None,
    Box,
    Axes,
    Grid,
}

#[derive(Args)]
struct SynthArgs {
    /// PNG file to write; a `<output>.truth.json` sidecar is written too
    #[arg(short, long)]
    output: PathBuf,

    #[arg(long, value_enum, default_value = "none")]
    style: StyleArg,

    /// Chart width in columns
    #[arg(long, default_value_t = 600)]
    length: usize,

    /// Canvas height in pixels
    #[arg(long, default_value_t = 200)]
    height: usize,

    /// Baseline row (bottom-up) the waveform oscillates around
    #[arg(long, default_value_t = 100)]
    base: i32,

    #[arg(long, value_enum, default_value = "red")]
    grid_color: ColorName,

    #[arg(long, default_value_t = 20)]
    grid_pitch: usize,

    #[arg(long, default_value_t = 1)]
    thickness: usize,

    #[arg(long, default_value_t = 150)]
    spike_period: usize,

    #[arg(long, default_value_t = 50)]
    spike_height: i32,

    #[arg(long, default_value_t = 1)]
    spike_width: usize,

    /// Skew to inject, degrees counterclockwise
    #[arg(long, default_value_t = 0.0)]
    skew: f64,

    /// Isolated-speck noise density in [0, 0.05]
    #[arg(long, default_value_t = 0.0)]
    noise: f64,

    /// Stitch marks as column ranges, e.g. 300:304,700:703
    #[arg(long)]
    marks: Option<String>,

    #[arg(long, value_enum, default_value = "red")]
    mark_color: ColorName,

    #[arg(long, default_value_t = 300)]
    dpi: u32,

    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn parse_marks(s: &str) -> Result<Vec<(usize, usize)>, String> {
    s.split(',')
        .map(|range| {
            let (l, r) = range
                .split_once(':')
                .ok_or_else(|| format!("bad mark range '{range}', expected L:R"))?;
            let l = l.trim().parse().map_err(|e| format!("bad mark '{range}': {e}"))?;
            let r = r.trim().parse().map_err(|e| format!("bad mark '{range}': {e}"))?;
            Ok((l, r))
        })
        .collect()
}

fn run_synth(args: &SynthArgs) -> Result<(), String> {
    let spike = SpikeSpec {
        period: args.spike_period,
        height: args.spike_height,
        width: args.spike_width,
    };
    let waveform: Vec<i32> = make_ecg_like(args.length, spike, args.seed)
        .into_iter()
        .map(|v| v + args.base)
        .collect();
    let style = ChartStyle {
        axis_kind: match args.style {
            StyleArg::None => AxisStyle::None,
            StyleArg::Box => AxisStyle::Box,
            StyleArg::Axes => AxisStyle::Axes,
            StyleArg::Grid => AxisStyle::Grid,
        },
        grid_color: args.grid_color.into(),
        grid_pitch: args.grid_pitch,
        trace_thickness: args.thickness,
        marks: args.marks.as_deref().map(parse_marks).transpose()?.unwrap_or_default(),
        mark_color: args.mark_color.into(),
        skew: args.skew,
        noise_density: args.noise,
        dpi: args.dpi,
        seed: args.seed,
        height: args.height,
        ..ChartStyle::default()
    };
    let (img, truth) = render_chart(&waveform, &style).map_err(|e| e.to_string())?;
    img.save_png(&args.output).map_err(|e| e.to_string())?;
    let sidecar = args.output.with_extension("truth.json");
    let body = serde_json::to_string_pretty(&truth).map_err(|e| e.to_string())?;
    std::fs::write(&sidecar, body)
        .map_err(|e| format!("cannot write {}: {e}", sidecar.display()))?;
    Ok(())
}

#[derive(Args)]
struct PlotArgs {
    /// JSON signal exported by `digitize --format json`
    input: PathBuf,

    /// SVG file to write
    #[arg(short, long)]
    output: PathBuf,
}

fn run_plot(args: &PlotArgs) -> Result<(), String> {
    let body = std::fs::read_to_string(&args.input)
        .map_err(|e| format!("cannot read {}: {e}", args.input.display()))?;
    let sig: PhysicalSignal = serde_json::from_str(&body)
        .map_err(|e| format!("bad signal file {}: {e}", args.input.display()))?;
    if sig.values.is_empty() {
        return Err("signal is empty".into());
    }
    plot::emit_plot(&sig, &args.output).map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Digitize(args) => run_digitize(args),
        Command::Synth(args) => run_synth(args),
        Command::Plot(args) => run_plot(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}
