//! Laser angle calibration and the two projection maps that lift a
//! smoothed curve into camera space.

use crate::error::{Error, Result};
use crate::extraction::Curve2D;

/// Plane angle stored in degrees.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Angle {
    degrees: f64,
}

impl Angle {
    pub fn from_degrees(degrees: f64) -> Self {
        Angle { degrees }
    }

    pub fn degrees(self) -> f64 {
        self.degrees
    }

    pub fn radians(self) -> f64 {
        self.degrees.to_radians()
    }
}

/// Fixed scanner geometry.
///
/// `s` is the laser-to-camera baseline and `d` the camera-to-surface
/// distance, both in physical units. `r` is the camera's vertical pixel
/// range, `x0` the leftmost lit column when the surface is flat, both in
/// pixels. `pixel_scale` (physical units per pixel) reconciles the two;
/// a value of 1.0 keeps the whole pipeline in pixel units.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Calibration {
    pub s: f64,
    pub d: f64,
    pub r: f64,
    pub x0: f64,
    pub pixel_scale: f64,
}

impl Calibration {
    pub fn validate(&self) -> Result<()> {
        let positive = [("s", self.s), ("D", self.d), ("pixel_scale", self.pixel_scale)];
        for (name, value) in positive {
            if !value.is_finite() || value <= 0.0 {
                return Err(Error::InvalidCalibration(format!(
                    "{name} must be finite and positive, got {value}"
                )));
            }
        }
        for (name, value) in [("r", self.r), ("x0", self.x0)] {
            if !value.is_finite() {
                return Err(Error::InvalidCalibration(format!("{name} must be finite")));
            }
        }
        Ok(())
    }

    /// Signed horizontal offset k between the laser pivot and the image
    /// center line, in physical units.
    pub fn offset_k(&self) -> f64 {
        self.s - self.pixel_scale * (self.r / 2.0 + self.x0)
    }

    pub fn units_label(&self) -> &'static str {
        if self.pixel_scale == 1.0 {
            "px"
        } else {
            "mm"
        }
    }
}

/// Laser plane angle from the calibration triangle:
/// theta = 90 degrees - arccos(k / sqrt(k^2 + D^2)).
pub fn laser_angle(calib: &Calibration) -> Result<Angle> {
    calib.validate()?;
    let k = calib.offset_k();
    let ratio = k / k.hypot(calib.d);
    Ok(Angle::from_degrees(90.0 - ratio.acos().to_degrees()))
}

/// One curve sample after rotation, still keyed by its source image row.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RotatedPoint {
    pub row: u32,
    pub x: f64,
    pub y: f64,
}

/// Curve mapped through the laser rotation, ordered by source row.
#[derive(Clone, Debug, PartialEq)]
pub struct RotatedCurve {
    pub points: Vec<RotatedPoint>,
}

impl RotatedCurve {
    /// Uniform scale on both coordinates, used to convert pixels to
    /// physical units. Commutes with `rotate` since both maps are linear.
    pub fn scaled(mut self, factor: f64) -> Self {
        for p in &mut self.points {
            p.x *= factor;
            p.y *= factor;
        }
        self
    }
}

/// Applies the laser rotation (x, y) -> (x cos theta, y sin theta) to every
/// curve sample, taking y to be the sample's integer row index.
pub fn rotate(curve: &Curve2D, angle: Angle) -> RotatedCurve {
    let (sin, cos) = angle.radians().sin_cos();
    let points = curve
        .samples()
        .iter()
        .map(|(&row, &x)| RotatedPoint {
            row,
            x: x * cos,
            y: row as f64 * sin,
        })
        .collect();
    RotatedCurve { points }
}

/// Reconstructed camera space point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point3 {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Point3 { x, y, z }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

/// Depth projection: with x0' the frame's minimum rotated x, each sample
/// (x', y) becomes (x0', y, D - (x' - x0')). Depth is therefore relative
/// to the nearest column of this frame.
pub fn project_t2(curve: &RotatedCurve, d: f64) -> Result<Vec<Point3>> {
    if curve.points.is_empty() {
        return Err(Error::EmptyScan);
    }
    let x0 = curve
        .points
        .iter()
        .map(|p| p.x)
        .fold(f64::INFINITY, f64::min);
    Ok(curve
        .points
        .iter()
        .map(|p| Point3::new(x0, p.y, d - (p.x - x0)))
        .collect())
}
