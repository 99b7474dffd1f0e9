//! Reconstruction of 3D point clouds from line laser sweep photographs.
//!
//! A scan is a sequence of frames, each showing a red laser line deformed
//! by the scene. Per frame the pipeline thresholds the red channel,
//! averages the lit pixels of every row into a single sample, rotates the
//! samples by the calibrated laser angle, scales pixels to physical
//! units and projects to depth against the frame's own nearest sample.
//! Frames are then spaced along world x by the sweep step to form the
//! cloud.
//!
//! The `simulator` module generates synthetic sweeps of a heightfield
//! scene together with an analytic expectation of the reconstruction.
//! That expectation shares the pipeline's geometric conventions (laser
//! angle, per frame depth rebasing, point order), so agreement validates
//! internal consistency of the implementation rather than physical
//! accuracy of a scanner build.

pub mod cloud;
pub mod error;
pub mod extraction;
pub mod geometry;
pub mod imaging;
pub mod pipeline;
pub mod simulator;

pub use cloud::{PointCloud, SweepConfig};
pub use error::{Error, Result};
pub use geometry::{Angle, Calibration, Point3};
pub use imaging::Frame;
