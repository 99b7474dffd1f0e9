//! Command line front end for the scan pipeline.
//!
//! Exit codes: 0 success, 1 usage errors, 2 file and image I/O errors,
//! 3 pipeline and data errors.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use stripescan_core::cloud::{
    denoise, export_obj, export_pcd, export_xyz, import_obj, import_pcd, import_xyz, merge,
    plot_svg, PlotPlane, PointCloud, RigidTransform, SweepConfig, DEFAULT_NEIGHBORS,
    DEFAULT_SIGMA_MULT,
};
use stripescan_core::pipeline::process_sweep;
use stripescan_core::simulator::{ground_truth, render_sweep_with, RenderOptions, Scene};
use stripescan_core::{Calibration, Error as CoreError, Frame};

/// Command line mistakes that clap cannot catch itself.
#[derive(Debug)]
struct UsageError(String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(message: impl Into<String>) -> anyhow::Error {
    anyhow::Error::new(UsageError(message.into()))
}

#[derive(Parser)]
#[command(name = "stripescan", version, about = "Line laser sweep reconstruction")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Reconstruct a point cloud from laser frame photographs
    Scan(ScanArgs),
    /// Render a synthetic sweep of a heightfield scene
    Simulate(SimulateArgs),
    /// Remove statistical outliers from a cloud
    Denoise(DenoiseArgs),
    /// Merge two clouds, transforming the second
    Merge(MergeArgs),
    /// Convert a cloud between the supported formats
    Convert(ConvertArgs),
    /// Render an SVG scatter plot of a cloud projection
    Plot(PlotArgs),
}

#[derive(Args)]
struct CalibArgs {
    /// Calibration file with `key = value` lines (s, D, r, x0, pixel_scale)
    #[arg(long, value_name = "FILE")]
    calib: Option<PathBuf>,
    /// Laser to image center offset s, overrides the file
    #[arg(long)]
    s: Option<f64>,
    /// Reference surface distance D, overrides the file
    #[arg(long = "D", value_name = "D")]
    d: Option<f64>,
    /// Camera range r (frame height in pixels), overrides the file
    #[arg(long)]
    r: Option<f64>,
    /// Laser column on the reference surface x0, overrides the file
    #[arg(long)]
    x0: Option<f64>,
    /// Physical units per pixel, defaults to 1
    #[arg(long)]
    pixel_scale: Option<f64>,
}

impl CalibArgs {
    fn resolve(&self) -> Result<Calibration> {
        let mut from_file = [None::<f64>; 5];
        if let Some(path) = &self.calib {
            let text = fs::read_to_string(path)
                .with_context(|| format!("reading calibration {}", path.display()))?;
            for (idx, raw) in text.lines().enumerate() {
                let line = raw.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let Some((key, value)) = line.split_once('=') else {
                    return Err(CoreError::Parse {
                        line: idx + 1,
                        message: format!("expected `key = value`, found {line:?}"),
                    })
                    .with_context(|| format!("parsing {}", path.display()));
                };
                let slot = match key.trim() {
                    "s" => 0,
                    "D" => 1,
                    "r" => 2,
                    "x0" => 3,
                    "pixel_scale" => 4,
                    other => {
                        return Err(CoreError::Parse {
                            line: idx + 1,
                            message: format!("unknown calibration key {other:?}"),
                        })
                        .with_context(|| format!("parsing {}", path.display()));
                    }
                };
                let value: f64 = value
                    .trim()
                    .parse()
                    .map_err(|_| CoreError::Parse {
                        line: idx + 1,
                        message: format!("not a number: {:?}", value.trim()),
                    })
                    .with_context(|| format!("parsing {}", path.display()))?;
                from_file[slot] = Some(value);
            }
        }
        let pick = |flag: Option<f64>, slot: usize, name: &str| {
            flag.or(from_file[slot])
                .ok_or_else(|| usage(format!("calibration value {name} missing: pass --{name} or put it in --calib")))
        };
        Ok(Calibration {
            s: pick(self.s, 0, "s")?,
            d: pick(self.d, 1, "D")?,
            r: pick(self.r, 2, "r")?,
            x0: pick(self.x0, 3, "x0")?,
            pixel_scale: self.pixel_scale.or(from_file[4]).unwrap_or(1.0),
        })
    }
}

#[derive(Args)]
struct SweepArgs {
    /// Laser rotation between frames in degrees
    #[arg(long, value_name = "DEG")]
    delta_theta: Option<f64>,
    /// Spatial step between frames, replaces the tangent of delta-theta
    #[arg(long, value_name = "UNITS")]
    frame_step: Option<f64>,
}

impl SweepArgs {
    fn resolve(&self, d: f64, frame_count: usize) -> Result<SweepConfig> {
        let sweep = match (self.delta_theta, self.frame_step) {
            (Some(dt), step) => SweepConfig {
                delta_theta_deg: dt,
                frame_count,
                frame_step_override: step,
            },
            (None, Some(step)) => SweepConfig {
                // equivalent angular step, kept as metadata
                delta_theta_deg: (step / d).atan().to_degrees(),
                frame_count,
                frame_step_override: Some(step),
            },
            (None, None) => return Err(usage("pass --delta-theta or --frame-step")),
        };
        sweep.validate()?;
        Ok(sweep)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CloudFormat {
    Xyz,
    Pcd,
    Obj,
}

impl CloudFormat {
    fn from_path(path: &Path) -> Result<Self> {
        let ext = path
            .extension()
            .and_then(|e| e.to_str())
            .map(|e| e.to_ascii_lowercase());
        match ext.as_deref() {
            Some("xyz") => Ok(CloudFormat::Xyz),
            Some("pcd") => Ok(CloudFormat::Pcd),
            Some("obj") => Ok(CloudFormat::Obj),
            _ => Err(usage(format!(
                "cannot tell the cloud format of {}; use an xyz, pcd or obj extension or pass --format",
                path.display()
            ))),
        }
    }
}

fn import_cloud(path: &Path, format: Option<CloudFormat>) -> Result<PointCloud> {
    let format = match format {
        Some(f) => f,
        None => CloudFormat::from_path(path)?,
    };
    let text =
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let cloud = match format {
        CloudFormat::Xyz => import_xyz(&text),
        CloudFormat::Pcd => import_pcd(&text),
        CloudFormat::Obj => import_obj(&text),
    };
    cloud.with_context(|| format!("parsing {}", path.display()))
}

fn export_cloud(cloud: &PointCloud, path: &Path, format: Option<CloudFormat>) -> Result<()> {
    let format = match format {
        Some(f) => f,
        None => CloudFormat::from_path(path)?,
    };
    let text = match format {
        CloudFormat::Xyz => export_xyz(cloud),
        CloudFormat::Pcd => export_pcd(cloud),
        CloudFormat::Obj => export_obj(cloud),
    };
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

#[derive(Args)]
struct ScanArgs {
    /// Frame image files (PNG), processed in lexicographic order
    frames: Vec<PathBuf>,
    /// File listing one frame path per line, processed in listed order
    #[arg(long, value_name = "FILE", conflicts_with = "frames")]
    manifest: Option<PathBuf>,
    #[command(flatten)]
    calib: CalibArgs,
    #[command(flatten)]
    sweep: SweepArgs,
    /// Red channel threshold
    #[arg(long, default_value_t = 128, value_parser = clap::value_parser!(u8).range(1..=254))]
    alpha: u8,
    /// Output cloud file
    #[arg(short, long, value_name = "FILE")]
    output: PathBuf,
    /// Output format, inferred from the extension when omitted
    #[arg(long, value_enum)]
    format: Option<CloudFormat>,
}

fn cmd_scan(args: ScanArgs) -> Result<()> {
    let paths = if let Some(manifest) = &args.manifest {
        let text = fs::read_to_string(manifest)
            .with_context(|| format!("reading manifest {}", manifest.display()))?;
        text.lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(PathBuf::from)
            .collect()
    } else {
        let mut paths = args.frames.clone();
        paths.sort();
        paths
    };
    if paths.is_empty() {
        return Err(usage("no frames given: list image files or pass --manifest"));
    }

    let calib = args.calib.resolve()?;
    let sweep = args.sweep.resolve(calib.d, paths.len())?;

    let mut frames = Vec::with_capacity(paths.len());
    for path in &paths {
        frames.push(
            Frame::read_png(path).with_context(|| format!("reading frame {}", path.display()))?,
        );
    }

    let (cloud, stats) = process_sweep(&frames, &calib, args.alpha, &sweep)?;
    for (path, s) in paths.iter().zip(&stats) {
        println!(
            "{}: {} lit pixels, {} rows, min x {:.3}",
            path.display(),
            s.lit_pixels,
            s.rows,
            s.min_rotated_x
        );
    }

    export_cloud(&cloud, &args.output, args.format)?;
    println!(
        "cloud: {} points ({}) -> {}",
        cloud.len(),
        cloud.units,
        args.output.display()
    );
    Ok(())
}

#[derive(Args)]
struct SimulateArgs {
    /// Scene file: `width height cell_size D` header, then the height grid
    scene: PathBuf,
    #[command(flatten)]
    calib: CalibArgs,
    #[command(flatten)]
    sweep: SweepArgs,
    /// Number of frames to render
    #[arg(long)]
    frames: usize,
    /// Frame width in pixels (height comes from the calibration r)
    #[arg(long, default_value_t = 320)]
    width: u32,
    /// Laser x position in the first frame, scene units
    #[arg(long, default_value_t = 0.0)]
    laser_start: f64,
    /// Gaussian blur of the laser line, standard deviation in pixels
    #[arg(long, default_value_t = 0.0)]
    blur_sigma: f64,
    /// Fraction of pixels hit by salt and pepper noise
    #[arg(long, default_value_t = 0.0)]
    noise_density: f64,
    /// Noise RNG seed
    #[arg(long, default_value_t = 0)]
    noise_seed: u64,
    /// Output directory for frame_NNNN.png and ground_truth.xyz
    #[arg(short, long, value_name = "DIR")]
    output: PathBuf,
}

fn cmd_simulate(args: SimulateArgs) -> Result<()> {
    let text = fs::read_to_string(&args.scene)
        .with_context(|| format!("reading scene {}", args.scene.display()))?;
    let scene =
        Scene::parse(&text).with_context(|| format!("parsing {}", args.scene.display()))?;
    let calib = args.calib.resolve()?;
    let sweep = args.sweep.resolve(calib.d, args.frames)?;
    let options = RenderOptions {
        blur_sigma: args.blur_sigma,
        noise_density: args.noise_density,
        noise_seed: args.noise_seed,
    };

    let frames = render_sweep_with(&scene, &calib, args.width, args.laser_start, &sweep, &options)?;
    fs::create_dir_all(&args.output)
        .with_context(|| format!("creating {}", args.output.display()))?;
    for (k, frame) in frames.iter().enumerate() {
        frame.write_png(args.output.join(format!("frame_{k:04}.png")))?;
    }
    let truth = ground_truth(&scene, &calib, args.laser_start, &sweep)?;
    fs::write(args.output.join("ground_truth.xyz"), export_xyz(&truth))
        .with_context(|| format!("writing {}", args.output.join("ground_truth.xyz").display()))?;

    println!(
        "wrote {} frames and ground_truth.xyz ({} points) to {}",
        frames.len(),
        truth.len(),
        args.output.display()
    );
    Ok(())
}

#[derive(Args)]
struct DenoiseArgs {
    /// Input cloud file
    input: PathBuf,
    /// Output cloud file
    #[arg(short, long, value_name = "FILE")]
    output: PathBuf,
    /// Neighbors per point for the distance statistic
    #[arg(long, default_value_t = DEFAULT_NEIGHBORS)]
    k: usize,
    /// Cutoff in standard deviations above the mean distance
    #[arg(long, default_value_t = DEFAULT_SIGMA_MULT)]
    sigma_mult: f64,
    /// Output format, inferred from the extension when omitted
    #[arg(long, value_enum)]
    format: Option<CloudFormat>,
}

fn cmd_denoise(args: DenoiseArgs) -> Result<()> {
    let cloud = import_cloud(&args.input, None)?;
    let kept = denoise(&cloud, args.k, args.sigma_mult)?;
    export_cloud(&kept, &args.output, args.format)?;
    println!(
        "kept {} of {} points -> {}",
        kept.len(),
        cloud.len(),
        args.output.display()
    );
    Ok(())
}

#[derive(Args)]
struct MergeArgs {
    /// Base cloud, copied through unchanged
    first: PathBuf,
    /// Second cloud, rotated then translated before the merge
    second: PathBuf,
    /// Output cloud file
    #[arg(short, long, value_name = "FILE")]
    output: PathBuf,
    /// Rotation of the second cloud about x, degrees
    #[arg(long, default_value_t = 0.0)]
    rx: f64,
    /// Rotation about y, degrees
    #[arg(long, default_value_t = 0.0)]
    ry: f64,
    /// Rotation about z, degrees
    #[arg(long, default_value_t = 0.0)]
    rz: f64,
    /// Translation along x
    #[arg(long, default_value_t = 0.0)]
    tx: f64,
    /// Translation along y
    #[arg(long, default_value_t = 0.0)]
    ty: f64,
    /// Translation along z
    #[arg(long, default_value_t = 0.0)]
    tz: f64,
    /// Output format, inferred from the extension when omitted
    #[arg(long, value_enum)]
    format: Option<CloudFormat>,
}

fn cmd_merge(args: MergeArgs) -> Result<()> {
    let a = import_cloud(&args.first, None)?;
    let b = import_cloud(&args.second, None)?;
    let transform = RigidTransform {
        rotation_deg: [args.rx, args.ry, args.rz],
        translation: [args.tx, args.ty, args.tz],
    };
    let merged = merge(&a, &b, &transform)?;
    export_cloud(&merged, &args.output, args.format)?;
    println!(
        "merged {} + {} points -> {}",
        a.len(),
        b.len(),
        args.output.display()
    );
    Ok(())
}

#[derive(Args)]
struct ConvertArgs {
    /// Input cloud file
    input: PathBuf,
    /// Output cloud file
    #[arg(short, long, value_name = "FILE")]
    output: PathBuf,
    /// Output format, inferred from the extension when omitted
    #[arg(long, value_enum)]
    format: Option<CloudFormat>,
}

fn cmd_convert(args: ConvertArgs) -> Result<()> {
    let cloud = import_cloud(&args.input, None)?;
    export_cloud(&cloud, &args.output, args.format)?;
    println!("{} points -> {}", cloud.len(), args.output.display());
    Ok(())
}

#[derive(Args)]
struct PlotArgs {
    /// Input cloud file
    input: PathBuf,
    /// Output SVG file
    #[arg(short, long, value_name = "FILE")]
    output: PathBuf,
    /// Projection plane: xy, xz or yz
    #[arg(long, default_value = "xz")]
    plane: PlotPlane,
    /// Image side length in pixels
    #[arg(long, default_value_t = 800)]
    size: u32,
}

fn cmd_plot(args: PlotArgs) -> Result<()> {
    let cloud = import_cloud(&args.input, None)?;
    let svg = plot_svg(&cloud, args.plane, args.size);
    fs::write(&args.output, svg)
        .with_context(|| format!("writing {}", args.output.display()))?;
    println!(
        "plotted {} points ({} plane) -> {}",
        cloud.len(),
        format!("{:?}", args.plane).to_lowercase(),
        args.output.display()
    );
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Scan(args) => cmd_scan(args),
        Command::Simulate(args) => cmd_simulate(args),
        Command::Denoise(args) => cmd_denoise(args),
        Command::Merge(args) => cmd_merge(args),
        Command::Convert(args) => cmd_convert(args),
        Command::Plot(args) => cmd_plot(args),
    }
}

fn exit_code_for(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(core) = cause.downcast_ref::<CoreError>() {
            if matches!(core, CoreError::Io(_) | CoreError::Image(_)) {
                return 2;
            }
        }
        if cause.downcast_ref::<std::io::Error>().is_some() {
            return 2;
        }
        if cause.downcast_ref::<UsageError>().is_some() {
            return 1;
        }
    }
    3
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help and version land on stdout and exit cleanly
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}
