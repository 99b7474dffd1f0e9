//! Frame-to-cloud orchestration: threshold, smooth, rotate, scale,
//! project, assemble.

use crate::cloud::{assemble, PointCloud, SweepConfig};
use crate::error::Result;
use crate::extraction::{extract_pointset, t1_smooth};
use crate::geometry::{laser_angle, project_t2, rotate, Angle, Calibration, Point3};
use crate::imaging::{threshold_red, Frame};

/// Per-frame processing summary.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FrameStats {
    pub lit_pixels: usize,
    pub rows: usize,
    pub min_rotated_x: f64,
}

/// Runs one frame through the whole chain at a fixed laser angle.
pub fn process_frame(
    frame: &Frame,
    alpha: u8,
    angle: Angle,
    calib: &Calibration,
) -> Result<Vec<Point3>> {
    Ok(process_frame_stats(frame, alpha, angle, calib)?.0)
}

pub fn process_frame_stats(
    frame: &Frame,
    alpha: u8,
    angle: Angle,
    calib: &Calibration,
) -> Result<(Vec<Point3>, FrameStats)> {
    let mask = threshold_red(frame, alpha)?;
    let lit_pixels = mask.lit_count();
    let points = extract_pointset(&mask);
    let curve = t1_smooth(&points)?;
    let rotated = rotate(&curve, angle).scaled(calib.pixel_scale);
    let min_rotated_x = rotated
        .points
        .iter()
        .map(|p| p.x)
        .fold(f64::INFINITY, f64::min);
    let projected = project_t2(&rotated, calib.d)?;
    let stats = FrameStats {
        lit_pixels,
        rows: projected.len(),
        min_rotated_x,
    };
    Ok((projected, stats))
}

/// Processes a full sweep. The laser angle comes from the calibration and
/// is shared by every frame; frames are spaced along world x by the sweep
/// step.
pub fn process_sweep(
    frames: &[Frame],
    calib: &Calibration,
    alpha: u8,
    sweep: &SweepConfig,
) -> Result<(PointCloud, Vec<FrameStats>)> {
    calib.validate()?;
    sweep.validate()?;
    let angle = laser_angle(calib)?;
    let mut projected = Vec::with_capacity(frames.len());
    let mut stats = Vec::with_capacity(frames.len());
    for frame in frames {
        let (points, frame_stats) = process_frame_stats(frame, alpha, angle, calib)?;
        projected.push(points);
        stats.push(frame_stats);
    }
    let cloud = assemble(projected, sweep, calib.d, calib.units_label())?;
    Ok((cloud, stats))
}
