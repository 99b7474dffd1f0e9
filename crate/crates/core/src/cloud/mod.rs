//! Point cloud assembly, statistical denoising, and rigid merging.

mod formats;
mod plot;

pub use formats::{
    export_obj, export_pcd, export_xyz, import_obj, import_pcd, import_xyz, DEFAULT_UNITS,
};
pub use plot::{plot_svg, PlotPlane};

use crate::error::{Error, Result};
use crate::geometry::Point3;

pub const DEFAULT_NEIGHBORS: usize = 8;
pub const DEFAULT_SIGMA_MULT: f64 = 2.0;

/// Ordered point collection tagged with a units label ("px", "mm", ...).
#[derive(Clone, Debug, PartialEq)]
pub struct PointCloud {
    pub points: Vec<Point3>,
    pub units: String,
}

impl PointCloud {
    /// Builds a cloud, rejecting NaN or infinite coordinates.
    pub fn new(points: Vec<Point3>, units: impl Into<String>) -> Result<Self> {
        if let Some(index) = points.iter().position(|p| !p.is_finite()) {
            return Err(Error::NonFinitePoint { index });
        }
        Ok(PointCloud { points, units: units.into() })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Sweep description: angular step per frame and the number of frames.
/// `frame_step_override`, when set, replaces the derived world X advance.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepConfig {
    pub delta_theta_deg: f64,
    pub frame_count: usize,
    pub frame_step_override: Option<f64>,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if !self.delta_theta_deg.is_finite() || self.delta_theta_deg <= 0.0 {
            return Err(Error::InvalidSweep(format!(
                "delta_theta must be finite and positive, got {}",
                self.delta_theta_deg
            )));
        }
        if self.frame_count == 0 {
            return Err(Error::InvalidSweep("frame_count must be at least 1".into()));
        }
        if let Some(step) = self.frame_step_override {
            if !step.is_finite() {
                return Err(Error::InvalidSweep("frame step override must be finite".into()));
            }
        }
        Ok(())
    }

    /// World X advance between consecutive frames: the override when given,
    /// otherwise D tan(delta_theta).
    pub fn step(&self, d: f64) -> f64 {
        self.frame_step_override
            .unwrap_or_else(|| d * self.delta_theta_deg.to_radians().tan())
    }
}

/// Offsets each frame's points along world X by its frame index times the
/// sweep step and concatenates them in frame order.
pub fn assemble(
    frames: Vec<Vec<Point3>>,
    sweep: &SweepConfig,
    d: f64,
    units: &str,
) -> Result<PointCloud> {
    sweep.validate()?;
    if !d.is_finite() || d <= 0.0 {
        return Err(Error::InvalidCalibration(format!(
            "D must be finite and positive, got {d}"
        )));
    }
    if frames.len() != sweep.frame_count {
        return Err(Error::FrameCountMismatch {
            expected: sweep.frame_count,
            actual: frames.len(),
        });
    }
    if frames.iter().any(|f| f.is_empty()) {
        return Err(Error::EmptyScan);
    }
    let step = sweep.step(d);
    let mut points = Vec::with_capacity(frames.iter().map(Vec::len).sum());
    for (k, frame) in frames.into_iter().enumerate() {
        let offset = k as f64 * step;
        points.extend(
            frame
                .into_iter()
                .map(|p| Point3::new(p.x + offset, p.y, p.z)),
        );
    }
    PointCloud::new(points, units)
}

fn mean_knn_distances(points: &[Point3], k: usize) -> Vec<f64> {
    let n = points.len();
    let mut out = Vec::with_capacity(n);
    let mut dists = Vec::with_capacity(n - 1);
    for (i, p) in points.iter().enumerate() {
        dists.clear();
        for (j, q) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            let (dx, dy, dz) = (p.x - q.x, p.y - q.y, p.z - q.z);
            dists.push((dx * dx + dy * dy + dz * dz).sqrt());
        }
        if k < dists.len() {
            dists.select_nth_unstable_by(k - 1, |a, b| a.partial_cmp(b).unwrap());
        }
        let mean = dists[..k].iter().sum::<f64>() / k as f64;
        out.push(mean);
    }
    out
}

/// Statistical outlier removal: a point is dropped when its mean distance
/// to its k nearest neighbors exceeds mu + sigma_mult * sigma, where mu and
/// sigma are taken over all per-point mean distances. Survivors keep their
/// original order. Exact brute force neighbors, O(n^2).
pub fn denoise(cloud: &PointCloud, k_neighbors: usize, sigma_mult: f64) -> Result<PointCloud> {
    if k_neighbors == 0 {
        return Err(Error::InvalidParameter("k_neighbors must be at least 1".into()));
    }
    if !sigma_mult.is_finite() || sigma_mult <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "sigma_mult must be finite and positive, got {sigma_mult}"
        )));
    }
    let n = cloud.len();
    if n <= k_neighbors {
        return Err(Error::TooFewPoints { points: n, k_neighbors });
    }
    let means = mean_knn_distances(&cloud.points, k_neighbors);
    let mu = means.iter().sum::<f64>() / n as f64;
    let var = means.iter().map(|m| (m - mu) * (m - mu)).sum::<f64>() / n as f64;
    let cutoff = mu + sigma_mult * var.sqrt();
    let points = cloud
        .points
        .iter()
        .zip(&means)
        .filter(|(_, &m)| m <= cutoff)
        .map(|(p, _)| *p)
        .collect();
    Ok(PointCloud {
        points,
        units: cloud.units.clone(),
    })
}

/// Rotation (degrees about X, Y, Z, applied in that order) followed by a
/// translation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RigidTransform {
    pub rotation_deg: [f64; 3],
    pub translation: [f64; 3],
}

impl RigidTransform {
    pub fn identity() -> Self {
        RigidTransform {
            rotation_deg: [0.0; 3],
            translation: [0.0; 3],
        }
    }

    fn matrix(&self) -> [[f64; 3]; 3] {
        let [rx, ry, rz] = self.rotation_deg.map(f64::to_radians);
        let (sx, cx) = rx.sin_cos();
        let (sy, cy) = ry.sin_cos();
        let (sz, cz) = rz.sin_cos();
        // Rz * Ry * Rx
        [
            [cz * cy, cz * sy * sx - sz * cx, cz * sy * cx + sz * sx],
            [sz * cy, sz * sy * sx + cz * cx, sz * sy * cx - cz * sx],
            [-sy, cy * sx, cy * cx],
        ]
    }

    pub fn apply(&self, p: Point3) -> Point3 {
        let m = self.matrix();
        let t = self.translation;
        Point3::new(
            m[0][0] * p.x + m[0][1] * p.y + m[0][2] * p.z + t[0],
            m[1][0] * p.x + m[1][1] * p.y + m[1][2] * p.z + t[1],
            m[2][0] * p.x + m[2][1] * p.y + m[2][2] * p.z + t[2],
        )
    }
}

/// Concatenates `a` with `b` mapped through the rigid transform. Both
/// clouds must carry the same units label.
pub fn merge(a: &PointCloud, b: &PointCloud, transform: &RigidTransform) -> Result<PointCloud> {
    if a.units != b.units {
        return Err(Error::UnitMismatch {
            left: a.units.clone(),
            right: b.units.clone(),
        });
    }
    let mut points = Vec::with_capacity(a.len() + b.len());
    points.extend_from_slice(&a.points);
    points.extend(b.points.iter().map(|&p| transform.apply(p)));
    PointCloud::new(points, a.units.clone())
}
