//! Lit pixel collection and the per-row mean smoothing stage.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::imaging::BinaryImage;

/// Set of lit pixel coordinates pulled out of a binary image.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointSet2D {
    width: u32,
    height: u32,
    points: Vec<(u32, u32)>,
}

impl PointSet2D {
    pub fn new(width: u32, height: u32, points: Vec<(u32, u32)>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidImage(format!(
                "dimensions must be at least 1x1, got {width}x{height}"
            )));
        }
        let mut seen = std::collections::HashSet::with_capacity(points.len());
        for &(x, y) in &points {
            if x >= width || y >= height {
                return Err(Error::InvalidImage(format!(
                    "point ({x}, {y}) lies outside {width}x{height}"
                )));
            }
            if !seen.insert((x, y)) {
                return Err(Error::InvalidImage(format!("duplicate point ({x}, {y})")));
            }
        }
        Ok(PointSet2D { width, height, points })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn points(&self) -> &[(u32, u32)] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// One smoothed sample per image row: the mean x of that row's lit pixels.
/// Rows without lit pixels carry no sample.
#[derive(Clone, Debug, PartialEq)]
pub struct Curve2D {
    width: u32,
    height: u32,
    samples: BTreeMap<u32, f64>,
}

impl Curve2D {
    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn samples(&self) -> &BTreeMap<u32, f64> {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

/// Collects lit pixel coordinates in row-major order.
pub fn extract_pointset(image: &BinaryImage) -> PointSet2D {
    let mut points = Vec::new();
    for y in 0..image.height() {
        for x in 0..image.width() {
            if image.get(x, y) {
                points.push((x, y));
            }
        }
    }
    PointSet2D {
        width: image.width(),
        height: image.height(),
        points,
    }
}

/// Collapses each row's lit pixels to their mean x position.
///
/// The sums are taken over integers, which makes the result exact and
/// independent of point visit order. They agree bit for bit with f64
/// accumulation in ascending x order because every partial sum of pixel
/// coordinates stays far below 2^53.
pub fn t1_smooth(points: &PointSet2D) -> Result<Curve2D> {
    if points.is_empty() {
        return Err(Error::EmptyScan);
    }
    let mut rows: BTreeMap<u32, (u64, u64)> = BTreeMap::new();
    for &(x, y) in points.points() {
        let entry = rows.entry(y).or_insert((0, 0));
        entry.0 += x as u64;
        entry.1 += 1;
    }
    let samples = rows
        .into_iter()
        .map(|(y, (sum, count))| (y, sum as f64 / count as f64))
        .collect();
    Ok(Curve2D {
        width: points.width(),
        height: points.height(),
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mask(width: u32, height: u32, bits: &[bool]) -> BinaryImage {
        BinaryImage::new(width, height, bits.to_vec()).unwrap()
    }

    fn set(width: u32, height: u32, pts: &[(u32, u32)]) -> PointSet2D {
        PointSet2D::new(width, height, pts.to_vec()).unwrap()
    }

    // reference accumulator, deliberately written as the plain per-row
    // double loop with f64 sums in ascending x order
    fn naive_row_means(image: &BinaryImage) -> BTreeMap<u32, f64> {
        let mut out = BTreeMap::new();
        for y in 0..image.height() {
            let mut sum = 0.0f64;
            let mut n = 0.0f64;
            for x in 0..image.width() {
                if image.get(x, y) {
                    sum += x as f64;
                    n += 1.0;
                }
            }
            if n > 0.0 {
                out.insert(y, sum / n);
            }
        }
        out
    }

    #[test]
    fn extract_reads_row_major() {
        let m = mask(2, 2, &[true, false, false, true]);
        assert_eq!(extract_pointset(&m).points(), &[(0, 0), (1, 1)]);

        let empty = mask(2, 2, &[false; 4]);
        assert!(extract_pointset(&empty).is_empty());

        let full = mask(2, 1, &[true, true]);
        assert_eq!(extract_pointset(&full).points(), &[(0, 0), (1, 0)]);
    }

    #[test]
    fn t1_means_per_row() {
        let curve = t1_smooth(&set(16, 8, &[(10, 5), (12, 5), (14, 5)])).unwrap();
        assert_eq!(curve.samples().len(), 1);
        assert_eq!(curve.samples()[&5], 12.0);

        let single = t1_smooth(&set(8, 1, &[(7, 0)])).unwrap();
        assert_eq!(single.samples()[&0], 7.0);
    }

    #[test]
    fn t1_multi_row_matches_reference_accumulator() {
        let m = mask(
            4,
            3,
            &[
                false, false, false, false, // row 0 empty
                true, false, false, true,   // row 1: x 0 and 3
                true, false, false, false,  // row 2: x 0
            ],
        );
        let curve = t1_smooth(&extract_pointset(&m)).unwrap();
        assert_eq!(curve.samples()[&1], 1.5);
        assert_eq!(curve.samples()[&2], 0.0);
        assert!(!curve.samples().contains_key(&0));
        assert_eq!(curve.samples(), &naive_row_means(&m));
    }

    #[test]
    fn t1_rejects_empty_scan() {
        let pts = set(4, 4, &[]);
        assert!(matches!(t1_smooth(&pts), Err(Error::EmptyScan)));
    }

    #[test]
    fn pointset_validates_bounds_and_duplicates() {
        assert!(PointSet2D::new(2, 2, vec![(2, 0)]).is_err());
        assert!(PointSet2D::new(2, 2, vec![(0, 0), (0, 0)]).is_err());
    }

    prop_compose! {
        fn arb_mask()(
            (w, h) in (1u32..=64, 1u32..=64)
        )(
            w in Just(w),
            h in Just(h),
            bits in proptest::collection::vec(any::<bool>(), (w * h) as usize),
        ) -> BinaryImage {
            BinaryImage::new(w, h, bits).unwrap()
        }
    }

    proptest! {
        #[test]
        fn matches_naive_double_loop_bit_for_bit(m in arb_mask()) {
            let pts = extract_pointset(&m);
            let reference = naive_row_means(&m);
            if pts.is_empty() {
                prop_assert!(reference.is_empty());
            } else {
                let curve = t1_smooth(&pts).unwrap();
                prop_assert_eq!(curve.samples().len(), reference.len());
                for (row, mean) in curve.samples() {
                    prop_assert_eq!(mean.to_bits(), reference[row].to_bits());
                }
            }
        }

        #[test]
        fn result_ignores_point_order(m in arb_mask(), seed in any::<u64>()) {
            let pts = extract_pointset(&m);
            prop_assume!(!pts.is_empty());
            let mut shuffled = pts.points().to_vec();
            // cheap deterministic shuffle
            let mut state = seed | 1;
            for i in (1..shuffled.len()).rev() {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let j = (state >> 33) as usize % (i + 1);
                shuffled.swap(i, j);
            }
            let reordered = PointSet2D::new(m.width(), m.height(), shuffled).unwrap();
            let a = t1_smooth(&pts).unwrap();
            let b = t1_smooth(&reordered).unwrap();
            prop_assert_eq!(a.samples().len(), b.samples().len());
            for (row, mean) in a.samples() {
                prop_assert_eq!(mean.to_bits(), b.samples()[row].to_bits());
            }
        }

        #[test]
        fn means_stay_within_row_extremes(m in arb_mask()) {
            let pts = extract_pointset(&m);
            prop_assume!(!pts.is_empty());
            let curve = t1_smooth(&pts).unwrap();
            for (&row, &mean) in curve.samples() {
                let xs: Vec<u32> = pts
                    .points()
                    .iter()
                    .filter(|&&(_, y)| y == row)
                    .map(|&(x, _)| x)
                    .collect();
                prop_assert!(!xs.is_empty());
                let min = *xs.iter().min().unwrap() as f64;
                let max = *xs.iter().max().unwrap() as f64;
                prop_assert!(mean >= min && mean <= max);
            }
        }
    }
}
