//! Scatter plot rendering of a cloud projection to a standalone SVG.

use std::fmt::Write as _;
use std::str::FromStr;

use super::PointCloud;

/// Which pair of coordinates lands on the plot axes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlotPlane {
    Xy,
    Xz,
    Yz,
}

impl PlotPlane {
    fn project(self, p: &crate::geometry::Point3) -> (f64, f64) {
        match self {
            PlotPlane::Xy => (p.x, p.y),
            PlotPlane::Xz => (p.x, p.z),
            PlotPlane::Yz => (p.y, p.z),
        }
    }
}

impl FromStr for PlotPlane {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "xy" => Ok(PlotPlane::Xy),
            "xz" => Ok(PlotPlane::Xz),
            "yz" => Ok(PlotPlane::Yz),
            other => Err(format!("unknown plane {other:?}, expected xy, xz or yz")),
        }
    }
}

fn axis_range(values: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let min = values.clone().fold(f64::INFINITY, f64::min);
    let max = values.fold(f64::NEG_INFINITY, f64::max);
    if !min.is_finite() || !max.is_finite() {
        return (0.0, 1.0);
    }
    if min == max {
        // degenerate axis, give it unit breadth
        return (min - 0.5, max + 0.5);
    }
    let margin = 0.05 * (max - min);
    (min - margin, max + margin)
}

/// Draws an orthographic scatter of the chosen projection on a square,
/// `size` pixels a side, one circle per point, axes auto-scaled to the
/// data bounds plus a five percent margin. Vertical axis points up.
pub fn plot_svg(cloud: &PointCloud, plane: PlotPlane, size: u32) -> String {
    let size = size.max(1);
    let projected: Vec<(f64, f64)> = cloud.points.iter().map(|p| plane.project(p)).collect();
    let (umin, umax) = axis_range(projected.iter().map(|&(u, _)| u));
    let (vmin, vmax) = axis_range(projected.iter().map(|&(_, v)| v));
    let side = size as f64;
    let radius = (side / 200.0).max(1.0);

    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{size}\" height=\"{size}\" viewBox=\"0 0 {size} {size}\">"
    )
    .unwrap();
    writeln!(
        out,
        "<rect x=\"0\" y=\"0\" width=\"{size}\" height=\"{size}\" fill=\"#ffffff\"/>"
    )
    .unwrap();
    writeln!(out, "<g fill=\"#20639b\" stroke=\"none\">").unwrap();
    for (u, v) in projected {
        let cx = (u - umin) / (umax - umin) * side;
        let cy = side - (v - vmin) / (vmax - vmin) * side;
        writeln!(out, "<circle cx=\"{cx:.2}\" cy=\"{cy:.2}\" r=\"{radius:.2}\"/>").unwrap();
    }
    out.push_str("</g>\n</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point3;

    fn cloud(points: Vec<Point3>) -> PointCloud {
        PointCloud::new(points, "px").unwrap()
    }

    // tiny well-formedness checker for the subset of XML we emit
    fn assert_well_formed(doc: &str) {
        let mut stack: Vec<String> = Vec::new();
        let mut rest = doc;
        while let Some(open) = rest.find('<') {
            let close = rest[open..].find('>').expect("unterminated tag") + open;
            let tag = &rest[open + 1..close];
            rest = &rest[close + 1..];
            if tag.starts_with('?') {
                continue;
            }
            if let Some(name) = tag.strip_prefix('/') {
                assert_eq!(stack.pop().as_deref(), Some(name), "mismatched close tag");
                continue;
            }
            let name: String = tag
                .chars()
                .take_while(|c| c.is_ascii_alphanumeric())
                .collect();
            assert!(
                ["svg", "g", "rect", "circle"].contains(&name.as_str()),
                "unexpected element {name}"
            );
            if !tag.ends_with('/') {
                stack.push(name);
            }
        }
        assert!(stack.is_empty(), "unclosed tags {stack:?}");
    }

    #[test]
    fn one_circle_per_point() {
        let c = cloud(vec![
            Point3::new(0.0, 0.0, 0.0),
            Point3::new(1.0, 2.0, 3.0),
            Point3::new(-5.0, 2.0, 8.0),
        ]);
        for plane in [PlotPlane::Xy, PlotPlane::Xz, PlotPlane::Yz] {
            let doc = plot_svg(&c, plane, 400);
            assert_eq!(doc.matches("<circle ").count(), 3);
            assert_well_formed(&doc);
        }
    }

    #[test]
    fn empty_cloud_renders_no_circles() {
        let doc = plot_svg(&cloud(vec![]), PlotPlane::Xz, 300);
        assert_eq!(doc.matches("<circle ").count(), 0);
        assert_well_formed(&doc);
    }

    #[test]
    fn single_point_lands_inside_the_canvas() {
        let doc = plot_svg(&cloud(vec![Point3::new(42.0, 42.0, 42.0)]), PlotPlane::Xy, 100);
        assert_well_formed(&doc);
        assert!(doc.contains("<circle cx=\"50.00\" cy=\"50.00\""));
    }

    #[test]
    fn circles_stay_within_bounds() {
        let c = cloud(vec![
            Point3::new(-100.0, 3.0, -7.5),
            Point3::new(250.0, -3.0, 90.0),
            Point3::new(75.0, 0.0, 41.0),
        ]);
        let doc = plot_svg(&c, PlotPlane::Xz, 500);
        for part in doc.split("<circle ").skip(1) {
            let cx: f64 = part
                .split("cx=\"")
                .nth(1)
                .unwrap()
                .split('"')
                .next()
                .unwrap()
                .parse()
                .unwrap();
            let cy: f64 = part
                .split("cy=\"")
                .nth(1)
                .unwrap()
                .split('"')
                .next()
                .unwrap()
                .parse()
                .unwrap();
            assert!((0.0..=500.0).contains(&cx), "cx = {cx}");
            assert!((0.0..=500.0).contains(&cy), "cy = {cy}");
        }
    }

    #[test]
    fn plane_parsing_accepts_the_three_projections() {
        assert_eq!("xy".parse::<PlotPlane>().unwrap(), PlotPlane::Xy);
        assert_eq!("XZ".parse::<PlotPlane>().unwrap(), PlotPlane::Xz);
        assert_eq!("yz".parse::<PlotPlane>().unwrap(), PlotPlane::Yz);
        assert!("zz".parse::<PlotPlane>().is_err());
    }
}
