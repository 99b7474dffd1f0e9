//! ASCII point cloud formats: xyz, PCD v0.7, and vertex-only OBJ.
//!
//! All exporters write coordinates with exactly six decimal places, one
//! point per line, '\n' terminated. Rust's formatter rounds half to even,
//! so a value survives export and reimport unchanged once quantized.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::geometry::Point3;

use super::PointCloud;

/// Units label assigned to imported clouds; the formats themselves do not
/// carry one.
pub const DEFAULT_UNITS: &str = "px";

pub fn export_xyz(cloud: &PointCloud) -> String {
    let mut out = String::new();
    for p in &cloud.points {
        writeln!(out, "{:.6} {:.6} {:.6}", p.x, p.y, p.z).unwrap();
    }
    out
}

fn parse_component(line: usize, field: &str) -> Result<f64> {
    let value: f64 = field.parse().map_err(|_| Error::Parse {
        line,
        message: format!("not a number: {field:?}"),
    })?;
    if !value.is_finite() {
        return Err(Error::Parse {
            line,
            message: format!("non-finite coordinate: {field:?}"),
        });
    }
    Ok(value)
}

fn parse_triple(line: usize, fields: &[&str]) -> Result<Point3> {
    if fields.len() != 3 {
        return Err(Error::Parse {
            line,
            message: format!("expected 3 coordinates, found {}", fields.len()),
        });
    }
    Ok(Point3::new(
        parse_component(line, fields[0])?,
        parse_component(line, fields[1])?,
        parse_component(line, fields[2])?,
    ))
}

/// Reads whitespace separated x y z lines. Blank lines are skipped and any
/// malformed line is reported with its 1-based number.
pub fn import_xyz(text: &str) -> Result<PointCloud> {
    let mut points = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let fields: Vec<&str> = raw.split_whitespace().collect();
        if fields.is_empty() {
            continue;
        }
        points.push(parse_triple(idx + 1, &fields)?);
    }
    PointCloud::new(points, DEFAULT_UNITS)
}

pub fn export_pcd(cloud: &PointCloud) -> String {
    let n = cloud.len();
    let mut out = String::new();
    out.push_str("# .PCD v0.7 - Point Cloud Data file format\n");
    out.push_str("VERSION 0.7\n");
    out.push_str("FIELDS x y z\n");
    out.push_str("SIZE 8 8 8\n");
    out.push_str("TYPE F F F\n");
    out.push_str("COUNT 1 1 1\n");
    writeln!(out, "WIDTH {n}").unwrap();
    out.push_str("HEIGHT 1\n");
    out.push_str("VIEWPOINT 0 0 0 1 0 0 0\n");
    writeln!(out, "POINTS {n}").unwrap();
    out.push_str("DATA ascii\n");
    out.push_str(&export_xyz(cloud));
    out
}

/// Reads an ASCII PCD file with fields x y z.
pub fn import_pcd(text: &str) -> Result<PointCloud> {
    let mut version = None;
    let mut fields = None;
    let mut declared_points = None;
    let mut data_line = None;

    let mut lines = text.lines().enumerate();
    for (idx, raw) in &mut lines {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let (key, rest) = trimmed.split_once(char::is_whitespace).unwrap_or((trimmed, ""));
        let rest = rest.trim();
        match key {
            "VERSION" => version = Some((line, rest.to_string())),
            "FIELDS" => fields = Some((line, rest.split_whitespace().collect::<Vec<_>>().join(" "))),
            "SIZE" | "TYPE" | "COUNT" | "WIDTH" | "HEIGHT" | "VIEWPOINT" => {}
            "POINTS" => {
                declared_points = Some((
                    line,
                    rest.parse::<usize>().map_err(|_| Error::Parse {
                        line,
                        message: format!("bad POINTS count: {rest:?}"),
                    })?,
                ))
            }
            "DATA" => {
                if rest != "ascii" {
                    return Err(Error::Parse {
                        line,
                        message: format!("only DATA ascii is supported, got {rest:?}"),
                    });
                }
                data_line = Some(line);
                break;
            }
            other => {
                return Err(Error::Parse {
                    line,
                    message: format!("unknown header entry {other:?}"),
                })
            }
        }
    }

    match version {
        Some((_, v)) if v == "0.7" || v == ".7" => {}
        Some((line, v)) => {
            return Err(Error::Parse {
                line,
                message: format!("unsupported PCD version {v:?}"),
            })
        }
        None => {
            return Err(Error::Parse {
                line: 1,
                message: "missing VERSION header".into(),
            })
        }
    }
    match fields {
        Some((_, f)) if f == "x y z" => {}
        Some((line, f)) => {
            return Err(Error::Parse {
                line,
                message: format!("expected FIELDS x y z, got {f:?}"),
            })
        }
        None => {
            return Err(Error::Parse {
                line: 1,
                message: "missing FIELDS header".into(),
            })
        }
    }
    let Some((points_line, expected)) = declared_points else {
        return Err(Error::Parse {
            line: 1,
            message: "missing POINTS header".into(),
        });
    };
    if data_line.is_none() {
        return Err(Error::Parse {
            line: 1,
            message: "missing DATA header".into(),
        });
    }

    let mut points = Vec::with_capacity(expected);
    for (idx, raw) in lines {
        let fields: Vec<&str> = raw.split_whitespace().collect();
        if fields.is_empty() {
            continue;
        }
        points.push(parse_triple(idx + 1, &fields)?);
    }
    if points.len() != expected {
        return Err(Error::Parse {
            line: points_line,
            message: format!("header declares {expected} points, file holds {}", points.len()),
        });
    }
    PointCloud::new(points, DEFAULT_UNITS)
}

pub fn export_obj(cloud: &PointCloud) -> String {
    let mut out = String::new();
    for p in &cloud.points {
        writeln!(out, "v {:.6} {:.6} {:.6}", p.x, p.y, p.z).unwrap();
    }
    out
}

/// Reads vertex lines from an OBJ file; everything that is not a `v` line
/// (faces, normals, comments) is ignored.
pub fn import_obj(text: &str) -> Result<PointCloud> {
    let mut points = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let fields: Vec<&str> = raw.split_whitespace().collect();
        if let Some(&"v") = fields.first() { points.push(parse_triple(idx + 1, &fields[1..])?) }
    }
    PointCloud::new(points, DEFAULT_UNITS)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cloud(points: Vec<Point3>) -> PointCloud {
        PointCloud::new(points, DEFAULT_UNITS).unwrap()
    }

    // independent rounding oracle: take the exact decimal expansion and
    // round it half to even at six places with string arithmetic
    fn decimal_string_round(v: f64) -> String {
        let exact = format!("{:.40}", v.abs());
        let (int_part, frac_part) = exact.split_once('.').unwrap();
        let digits: Vec<u8> = int_part
            .bytes()
            .chain(frac_part.bytes())
            .map(|b| b - b'0')
            .collect();
        let keep = int_part.len() + 6;
        let mut kept: Vec<u8> = digits[..keep].to_vec();
        let next = digits[keep];
        let tail_nonzero = digits[keep + 1..].iter().any(|&d| d != 0);
        let round_up = match next.cmp(&5) {
            std::cmp::Ordering::Greater => true,
            std::cmp::Ordering::Less => false,
            std::cmp::Ordering::Equal => tail_nonzero || kept[keep - 1] % 2 == 1,
        };
        if round_up {
            let mut i = keep;
            loop {
                if i == 0 {
                    kept.insert(0, 1);
                    break;
                }
                i -= 1;
                if kept[i] == 9 {
                    kept[i] = 0;
                } else {
                    kept[i] += 1;
                    break;
                }
            }
        }
        let int_len = kept.len() - 6;
        let to_str = |ds: &[u8]| ds.iter().map(|d| (d + b'0') as char).collect::<String>();
        let sign = if v.is_sign_negative() { "-" } else { "" };
        format!("{sign}{}.{}", to_str(&kept[..int_len]), to_str(&kept[int_len..]))
    }

    #[test]
    fn xyz_writes_six_decimals() {
        let c = cloud(vec![Point3::new(1.0, 2.0, 3.0)]);
        assert_eq!(export_xyz(&c), "1.000000 2.000000 3.000000\n");
        assert_eq!(export_xyz(&cloud(vec![])), "");
    }

    #[test]
    fn xyz_rounds_half_to_even() {
        let c = cloud(vec![Point3::new(0.1234567, 0.0, -1.0)]);
        assert_eq!(export_xyz(&c), "0.123457 0.000000 -1.000000\n");

        for v in [
            0.1234567, 0.0000005, -0.0000005, 1.5e-7, 123456.789, -42.5, 2.0000015,
            9.9999995, 0.9999999, 1e-12, -1e-12, 0.1015625, 0.1171875,
        ] {
            let expected = decimal_string_round(v);
            assert_eq!(format!("{v:.6}"), expected, "value {v:?}");
        }
        // exact ties, settled by the even rule: 0.1015625 = 0.101562|5
        // keeps the even 2, 0.1171875 = 0.117187|5 rounds up to the even 8
        assert_eq!(format!("{:.6}", 0.1015625), "0.101562");
        assert_eq!(format!("{:.6}", 0.1171875), "0.117188");
    }

    #[test]
    fn xyz_import_tolerates_whitespace() {
        let c = import_xyz("1   2\t3\n  4 5\t 6  \n").unwrap();
        assert_eq!(c.points, vec![Point3::new(1.0, 2.0, 3.0), Point3::new(4.0, 5.0, 6.0)]);
        assert_eq!(c.units, DEFAULT_UNITS);
    }

    #[test]
    fn xyz_import_reports_line_numbers() {
        let err = import_xyz("1 2 3\n\n1 2\n").unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 3),
            other => panic!("unexpected error {other:?}"),
        }
        assert!(import_xyz("1 2 x").is_err());
        assert!(import_xyz("1 2 inf").is_err());
        assert!(import_xyz("1 2 nan").is_err());
        assert!(import_xyz("1 2 3 4").is_err());
    }

    #[test]
    fn pcd_header_matches_the_v07_layout() {
        let c = cloud(vec![Point3::new(1.0, 2.0, 3.0), Point3::new(-1.0, 0.5, 2.0)]);
        let text = export_pcd(&c);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "# .PCD v0.7 - Point Cloud Data file format");
        assert_eq!(lines[1], "VERSION 0.7");
        assert_eq!(lines[2], "FIELDS x y z");
        assert_eq!(lines[3], "SIZE 8 8 8");
        assert_eq!(lines[4], "TYPE F F F");
        assert_eq!(lines[5], "COUNT 1 1 1");
        assert_eq!(lines[6], "WIDTH 2");
        assert_eq!(lines[7], "HEIGHT 1");
        assert_eq!(lines[8], "VIEWPOINT 0 0 0 1 0 0 0");
        assert_eq!(lines[9], "POINTS 2");
        assert_eq!(lines[10], "DATA ascii");
        assert_eq!(lines[11], "1.000000 2.000000 3.000000");
        assert_eq!(lines.len(), 13);
    }

    #[test]
    fn pcd_round_trips_through_import() {
        let c = cloud(vec![Point3::new(0.25, -3.5, 99.0), Point3::new(7.0, 8.0, 9.0)]);
        let back = import_pcd(&export_pcd(&c)).unwrap();
        assert_eq!(back.points, c.points);
    }

    #[test]
    fn pcd_import_rejects_binary_and_bad_counts() {
        let c = cloud(vec![Point3::new(1.0, 2.0, 3.0)]);
        let binary = export_pcd(&c).replace("DATA ascii", "DATA binary");
        assert!(import_pcd(&binary).is_err());

        let trunc = export_pcd(&c).replace("POINTS 1", "POINTS 2");
        assert!(import_pcd(&trunc).is_err());

        assert!(import_pcd("DATA ascii\n1 2 3\n").is_err());
    }

    #[test]
    fn obj_writes_vertex_lines_only() {
        let c = cloud(vec![Point3::new(1.0, 2.0, 3.0), Point3::new(4.0, 5.0, 6.0)]);
        let text = export_obj(&c);
        assert_eq!(text, "v 1.000000 2.000000 3.000000\nv 4.000000 5.000000 6.000000\n");
        let back = import_obj(&text).unwrap();
        assert_eq!(back.points, c.points);
    }

    #[test]
    fn obj_import_skips_non_vertex_lines() {
        let text = "# comment\nv 1 2 3\nvn 0 0 1\nf 1 1 1\nv 4 5 6\n";
        let back = import_obj(text).unwrap();
        assert_eq!(back.points, vec![Point3::new(1.0, 2.0, 3.0), Point3::new(4.0, 5.0, 6.0)]);
        assert!(import_obj("v 1 2\n").is_err());
    }

    prop_compose! {
        fn arb_cloud()(
            coords in proptest::collection::vec(
                (-1.0e6f64..1.0e6, -1.0e6f64..1.0e6, -1.0e6f64..1.0e6),
                0..40,
            ),
        ) -> PointCloud {
            cloud(coords.into_iter().map(|(x, y, z)| Point3::new(x, y, z)).collect())
        }
    }

    proptest! {
        #[test]
        fn export_import_export_is_byte_stable(c in arb_cloud()) {
            let first = export_xyz(&c);
            let reimported = import_xyz(&first).unwrap();
            let second = export_xyz(&reimported);
            prop_assert_eq!(&first, &second);
            // quantization error is at most half of the last printed digit
            for (p, q) in c.points.iter().zip(&reimported.points) {
                prop_assert!((p.x - q.x).abs() <= 5.1e-7);
                prop_assert!((p.y - q.y).abs() <= 5.1e-7);
                prop_assert!((p.z - q.z).abs() <= 5.1e-7);
            }
        }

        #[test]
        fn pcd_and_obj_round_trip(c in arb_cloud()) {
            let quantized = import_xyz(&export_xyz(&c)).unwrap();
            let via_pcd = import_pcd(&export_pcd(&quantized)).unwrap();
            prop_assert_eq!(&via_pcd.points, &quantized.points);
            let via_obj = import_obj(&export_obj(&quantized)).unwrap();
            prop_assert_eq!(&via_obj.points, &quantized.points);
        }
    }
}
