//! RGB-D odometry and reconstruction toolkit.
//!
//! Estimates a 6-DOF camera trajectory from consecutive RGB + depth frames
//! with a coarse-to-fine scheme: feature-based visual odometry provides a
//! rough frame-to-frame motion which seeds a point-to-plane ICP against the
//! raycast prediction of a truncated signed distance volume. Depth is fused
//! into the volume as the trajectory grows and a polygon mesh is extracted
//! at the end. Trajectories can be compared against ground truth with the
//! usual ATE/RPE metrics.

pub mod dataset;
pub mod descriptors;
pub mod evaluation;
pub mod fusion;
pub mod geometry;
pub mod grid;
pub mod keypoints;
pub mod matching;
pub mod meshing;
pub mod pipeline;
pub mod preprocess;
pub mod rigid_motion;
pub mod synth;

pub use geometry::{Intrinsics, Point3, Pose};
pub use grid::{DepthMap, GrayImage};
