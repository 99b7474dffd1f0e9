//! Synthetic scan generation.
//!
//! A `Scene` is a heightfield object resting on an infinite flat reference
//! surface at distance D from the camera. Rendering paints the laser line
//! the way the projection stages expect to see it: the line sits at the
//! calibrated baseline column and is displaced by height / pixel_scale
//! columns wherever the laser crosses the object.
//!
//! `ground_truth` mirrors the reconstruction's own geometric contract
//! (same laser angle, same per-frame depth rebasing, same units) with the
//! pixel rounding removed. Comparing a reconstruction against it therefore
//! validates internal consistency of the pipeline, not absolute physical
//! accuracy.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cloud::{PointCloud, SweepConfig};
use crate::error::{Error, Result};
use crate::geometry::{laser_angle, Calibration, Point3};
use crate::imaging::Frame;

/// Heightfield scene sampled on a regular grid of nodes, `cell_size`
/// apart, covering x in [0, (grid_width - 1) cell] and y likewise.
#[derive(Clone, Debug, PartialEq)]
pub struct Scene {
    grid_width: usize,
    grid_height: usize,
    cell_size: f64,
    background_distance: f64,
    heights: Vec<f64>,
}

impl Scene {
    pub fn new(
        grid_width: usize,
        grid_height: usize,
        cell_size: f64,
        background_distance: f64,
        heights: Vec<f64>,
    ) -> Result<Self> {
        if grid_width < 2 || grid_height < 2 {
            return Err(Error::InvalidScene(format!(
                "grid must be at least 2x2, got {grid_width}x{grid_height}"
            )));
        }
        if !cell_size.is_finite() || cell_size <= 0.0 {
            return Err(Error::InvalidScene(format!(
                "cell size must be finite and positive, got {cell_size}"
            )));
        }
        if !background_distance.is_finite() || background_distance <= 0.0 {
            return Err(Error::InvalidScene(format!(
                "background distance must be finite and positive, got {background_distance}"
            )));
        }
        if heights.len() != grid_width * grid_height {
            return Err(Error::InvalidScene(format!(
                "{}x{} grid needs {} heights, got {}",
                grid_width,
                grid_height,
                grid_width * grid_height,
                heights.len()
            )));
        }
        if let Some(bad) = heights
            .iter()
            .find(|&&h| !h.is_finite() || h < 0.0 || h >= background_distance)
        {
            return Err(Error::InvalidScene(format!(
                "heights must lie in [0, {background_distance}), found {bad}"
            )));
        }
        Ok(Scene {
            grid_width,
            grid_height,
            cell_size,
            background_distance,
            heights,
        })
    }

    /// Parses the scene text format: a header line
    /// `width height cell_size D` followed by `height` rows of `width`
    /// node heights each. Blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut content = text.lines().enumerate().filter(|(_, raw)| {
            let t = raw.trim();
            !t.is_empty() && !t.starts_with('#')
        });
        let Some((idx, header)) = content.next() else {
            return Err(Error::Parse {
                line: 1,
                message: "empty scene file".into(),
            });
        };
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 4 {
            return Err(Error::Parse {
                line: idx + 1,
                message: format!(
                    "header must be 'width height cell_size D', found {} fields",
                    fields.len()
                ),
            });
        }
        let dim = |s: &str| -> Result<usize> {
            s.parse().map_err(|_| Error::Parse {
                line: idx + 1,
                message: format!("bad grid dimension: {s:?}"),
            })
        };
        let real = |s: &str| -> Result<f64> {
            s.parse().map_err(|_| Error::Parse {
                line: idx + 1,
                message: format!("not a number: {s:?}"),
            })
        };
        let grid_width = dim(fields[0])?;
        let grid_height = dim(fields[1])?;
        let cell_size = real(fields[2])?;
        let background_distance = real(fields[3])?;

        let mut heights = Vec::with_capacity(grid_width * grid_height);
        let mut rows_read = 0;
        for (idx, raw) in content {
            let line = idx + 1;
            if rows_read == grid_height {
                return Err(Error::Parse {
                    line,
                    message: "unexpected data after the last grid row".into(),
                });
            }
            let fields: Vec<&str> = raw.split_whitespace().collect();
            if fields.len() != grid_width {
                return Err(Error::Parse {
                    line,
                    message: format!(
                        "grid row needs {grid_width} values, found {}",
                        fields.len()
                    ),
                });
            }
            for f in fields {
                heights.push(f.parse::<f64>().map_err(|_| Error::Parse {
                    line,
                    message: format!("not a number: {f:?}"),
                })?);
            }
            rows_read += 1;
        }
        if rows_read != grid_height {
            return Err(Error::Parse {
                line: text.lines().count(),
                message: format!("expected {grid_height} grid rows, found {rows_read}"),
            });
        }
        Scene::new(grid_width, grid_height, cell_size, background_distance, heights)
    }

    pub fn extent_x(&self) -> f64 {
        (self.grid_width - 1) as f64 * self.cell_size
    }

    pub fn extent_y(&self) -> f64 {
        (self.grid_height - 1) as f64 * self.cell_size
    }

    pub fn background_distance(&self) -> f64 {
        self.background_distance
    }

    fn node(&self, gx: usize, gy: usize) -> f64 {
        self.heights[gy * self.grid_width + gx]
    }

    /// Bilinear height sample. Positions beyond the grid's y extent fall
    /// on the reference surface and read zero; x is clamped to the grid.
    pub fn sample_height(&self, x: f64, y: f64) -> f64 {
        if y < 0.0 || y > self.extent_y() {
            return 0.0;
        }
        let x = x.clamp(0.0, self.extent_x());
        let gx = x / self.cell_size;
        let gy = y / self.cell_size;
        let i = (gx.floor() as usize).min(self.grid_width - 2);
        let j = (gy.floor() as usize).min(self.grid_height - 2);
        let fx = gx - i as f64;
        let fy = gy - j as f64;
        (1.0 - fx) * (1.0 - fy) * self.node(i, j)
            + fx * (1.0 - fy) * self.node(i + 1, j)
            + (1.0 - fx) * fy * self.node(i, j + 1)
            + fx * fy * self.node(i + 1, j + 1)
    }
}

/// Optional image degradations, all off by default.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RenderOptions {
    /// Gaussian blur of the red channel, standard deviation in pixels.
    pub blur_sigma: f64,
    /// Fraction of pixels hit by salt and pepper noise, in [0, 1).
    pub noise_density: f64,
    pub noise_seed: u64,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions {
            blur_sigma: 0.0,
            noise_density: 0.0,
            noise_seed: 0,
        }
    }
}

impl RenderOptions {
    fn validate(&self) -> Result<()> {
        if !self.blur_sigma.is_finite() || self.blur_sigma < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "blur sigma must be finite and non-negative, got {}",
                self.blur_sigma
            )));
        }
        if !self.noise_density.is_finite() || !(0.0..1.0).contains(&self.noise_density) {
            return Err(Error::InvalidParameter(format!(
                "noise density must lie in [0, 1), got {}",
                self.noise_density
            )));
        }
        Ok(())
    }
}

const MAX_FRAME_SIDE: u32 = 32768;

fn frame_height(calib: &Calibration) -> Result<u32> {
    let rounded = calib.r.round();
    if rounded < 1.0 || rounded > MAX_FRAME_SIDE as f64 {
        return Err(Error::InvalidCalibration(format!(
            "camera range r must round to a frame height in [1, {MAX_FRAME_SIDE}], got {}",
            calib.r
        )));
    }
    Ok(rounded as u32)
}

fn check_laser(scene: &Scene, laser_x: f64) -> Result<()> {
    if !laser_x.is_finite() || laser_x < 0.0 || laser_x > scene.extent_x() {
        return Err(Error::LaserOutOfScene {
            laser_x,
            max_x: scene.extent_x(),
        });
    }
    Ok(())
}

fn check_width(frame_width: u32) -> Result<()> {
    if frame_width == 0 || frame_width > MAX_FRAME_SIDE {
        return Err(Error::InvalidParameter(format!(
            "frame width must lie in [1, {MAX_FRAME_SIDE}], got {frame_width}"
        )));
    }
    Ok(())
}

/// Renders the laser line for one laser position: a black frame with one
/// pure red pixel per row at column x0 + round(height / pixel_scale).
pub fn render_frame(
    scene: &Scene,
    calib: &Calibration,
    frame_width: u32,
    laser_x: f64,
) -> Result<Frame> {
    render_frame_with(scene, calib, frame_width, laser_x, &RenderOptions::default())
}

pub fn render_frame_with(
    scene: &Scene,
    calib: &Calibration,
    frame_width: u32,
    laser_x: f64,
    options: &RenderOptions,
) -> Result<Frame> {
    calib.validate()?;
    options.validate()?;
    check_width(frame_width)?;
    check_laser(scene, laser_x)?;
    let height = frame_height(calib)?;
    let base = calib.x0.round();
    let mut frame = Frame::black(frame_width, height)?;
    for row in 0..height {
        let y = row as f64 * calib.pixel_scale;
        let h = scene.sample_height(laser_x, y);
        let column = base + (h / calib.pixel_scale).round();
        if column < 0.0 || column >= frame_width as f64 {
            return Err(Error::LineOutOfFrame {
                row,
                column: column as i64,
                width: frame_width,
            });
        }
        frame.set_pixel(column as u32, row, [255, 0, 0]);
    }
    if options.blur_sigma > 0.0 {
        blur_red(&mut frame, options.blur_sigma);
    }
    if options.noise_density > 0.0 {
        salt_and_pepper(&mut frame, options.noise_density, options.noise_seed);
    }
    Ok(frame)
}

fn blur_red(frame: &mut Frame, sigma: f64) {
    let radius = (3.0 * sigma).ceil() as i64;
    let mut kernel = Vec::with_capacity(radius as usize * 2 + 1);
    for i in -radius..=radius {
        kernel.push((-(i as f64) * i as f64 / (2.0 * sigma * sigma)).exp());
    }
    let total: f64 = kernel.iter().sum();
    for w in &mut kernel {
        *w /= total;
    }

    let (w, h) = (frame.width() as i64, frame.height() as i64);
    let red_at = |f: &Frame, x: i64, y: i64| -> f64 {
        if x < 0 || x >= w || y < 0 || y >= h {
            0.0
        } else {
            f.pixel(x as u32, y as u32)[0] as f64
        }
    };
    let mut horizontal = vec![0.0f64; (w * h) as usize];
    for y in 0..h {
        for x in 0..w {
            let mut acc = 0.0;
            for (ki, weight) in kernel.iter().enumerate() {
                acc += weight * red_at(frame, x + ki as i64 - radius, y);
            }
            horizontal[(y * w + x) as usize] = acc;
        }
    }
    let sample_h = |x: i64, y: i64| -> f64 {
        if x < 0 || x >= w || y < 0 || y >= h {
            0.0
        } else {
            horizontal[(y * w + x) as usize]
        }
    };
    for y in 0..h {
        for x in 0..w {
            let mut acc = 0.0;
            for (ki, weight) in kernel.iter().enumerate() {
                acc += weight * sample_h(x, y + ki as i64 - radius);
            }
            let v = acc.round().clamp(0.0, 255.0) as u8;
            frame.set_pixel(x as u32, y as u32, [v, 0, 0]);
        }
    }
}

fn salt_and_pepper(frame: &mut Frame, density: f64, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for y in 0..frame.height() {
        for x in 0..frame.width() {
            if rng.random::<f64>() < density {
                let px = if rng.random::<bool>() {
                    [255, 255, 255]
                } else {
                    [0, 0, 0]
                };
                frame.set_pixel(x, y, px);
            }
        }
    }
}

/// Renders the whole sweep, the laser advancing by the sweep step per
/// frame starting at `laser_start`.
pub fn render_sweep(
    scene: &Scene,
    calib: &Calibration,
    frame_width: u32,
    laser_start: f64,
    sweep: &SweepConfig,
) -> Result<Vec<Frame>> {
    render_sweep_with(scene, calib, frame_width, laser_start, sweep, &RenderOptions::default())
}

pub fn render_sweep_with(
    scene: &Scene,
    calib: &Calibration,
    frame_width: u32,
    laser_start: f64,
    sweep: &SweepConfig,
    options: &RenderOptions,
) -> Result<Vec<Frame>> {
    sweep.validate()?;
    calib.validate()?;
    let step = sweep.step(calib.d);
    let mut frames = Vec::with_capacity(sweep.frame_count);
    for k in 0..sweep.frame_count {
        let per_frame = RenderOptions {
            noise_seed: options.noise_seed.wrapping_add(k as u64),
            ..*options
        };
        frames.push(render_frame_with(
            scene,
            calib,
            frame_width,
            laser_start + k as f64 * step,
            &per_frame,
        )?);
    }
    Ok(frames)
}

/// The cloud an exact, rounding-free reconstruction of the sweep would
/// produce: identical laser angle, identical per-frame depth rebasing,
/// identical frame-major point order and units. See the module notes.
pub fn ground_truth(
    scene: &Scene,
    calib: &Calibration,
    laser_start: f64,
    sweep: &SweepConfig,
) -> Result<PointCloud> {
    calib.validate()?;
    sweep.validate()?;
    let height = frame_height(calib)?;
    let theta = laser_angle(calib)?;
    let (sin, cos) = theta.radians().sin_cos();
    let ps = calib.pixel_scale;
    let base = calib.x0.round();
    let step = sweep.step(calib.d);

    let mut points = Vec::with_capacity(sweep.frame_count * height as usize);
    for k in 0..sweep.frame_count {
        let laser_x = laser_start + k as f64 * step;
        check_laser(scene, laser_x)?;
        let offset = k as f64 * step;
        // continuous columns through the same arithmetic the pipeline
        // applies to the rounded ones
        let xs: Vec<f64> = (0..height)
            .map(|row| {
                let y = row as f64 * ps;
                let column = base + scene.sample_height(laser_x, y) / ps;
                (column * cos) * ps
            })
            .collect();
        let x0 = xs.iter().copied().fold(f64::INFINITY, f64::min);
        for (row, &x) in xs.iter().enumerate() {
            let y = (row as f64 * sin) * ps;
            points.push(Point3::new(x0 + offset, y, calib.d - (x - x0)));
        }
    }
    PointCloud::new(points, calib.units_label())
}
