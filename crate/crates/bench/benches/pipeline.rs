use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use stripescan_bench::{bench_calib, plane_cloud, ramp_frame};
use stripescan_core::cloud::{denoise, export_xyz};
use stripescan_core::extraction::{extract_pointset, t1_smooth};
use stripescan_core::geometry::{laser_angle, project_t2, rotate};
use stripescan_core::imaging::threshold_red;
use stripescan_core::pipeline::process_frame;

fn frame_stages(c: &mut Criterion) {
    let frame = ramp_frame();
    let calib = bench_calib();
    let angle = laser_angle(&calib).unwrap();

    c.bench_function("threshold_red 640x480", |b| {
        b.iter(|| threshold_red(black_box(&frame), 128).unwrap())
    });

    let mask = threshold_red(&frame, 128).unwrap();
    c.bench_function("extract_t1 640x480", |b| {
        b.iter(|| t1_smooth(&extract_pointset(black_box(&mask))).unwrap())
    });

    let curve = t1_smooth(&extract_pointset(&mask)).unwrap();
    c.bench_function("rotate_project 480 rows", |b| {
        b.iter(|| {
            let rotated = rotate(black_box(&curve), angle).scaled(calib.pixel_scale);
            project_t2(&rotated, calib.d).unwrap()
        })
    });

    c.bench_function("process_frame 640x480", |b| {
        b.iter(|| process_frame(black_box(&frame), 128, angle, &calib).unwrap())
    });
}

fn cloud_stages(c: &mut Criterion) {
    let cloud = plane_cloud(45);

    c.bench_function("denoise 2025 points k=8", |b| {
        b.iter(|| denoise(black_box(&cloud), 8, 2.0).unwrap())
    });

    c.bench_function("export_xyz 2025 points", |b| {
        b.iter(|| export_xyz(black_box(&cloud)))
    });
}

criterion_group!(benches, frame_stages, cloud_stages);
criterion_main!(benches);
