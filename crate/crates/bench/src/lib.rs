//! Shared fixtures for the benchmark suite.

use stripescan_core::cloud::PointCloud;
use stripescan_core::simulator::{render_frame, Scene};
use stripescan_core::{Calibration, Frame, Point3};

pub fn bench_calib() -> Calibration {
    Calibration {
        s: 300.0,
        d: 500.0,
        r: 480.0,
        x0: 50.0,
        pixel_scale: 1.0,
    }
}

/// 640x480 frame of a gentle ramp, the acceptance throughput workload.
pub fn ramp_frame() -> Frame {
    let heights: Vec<f64> = (0..49)
        .flat_map(|j| std::iter::repeat_n(0.05 * (j as f64 * 10.0), 2))
        .collect();
    let scene = Scene::new(2, 49, 10.0, 500.0, heights).unwrap();
    render_frame(&scene, &bench_calib(), 640, 5.0).unwrap()
}

/// side x side unit grid with mild deterministic height variation.
pub fn plane_cloud(side: u32) -> PointCloud {
    let mut points = Vec::with_capacity((side * side) as usize);
    for y in 0..side {
        for x in 0..side {
            let z = ((x * 31 + y * 17) % 7) as f64 * 0.05;
            points.push(Point3::new(x as f64, y as f64, z));
        }
    }
    PointCloud::new(points, "px").unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_build() {
        let frame = ramp_frame();
        assert_eq!((frame.width(), frame.height()), (640, 480));
        assert_eq!(plane_cloud(45).len(), 2025);
    }
}
