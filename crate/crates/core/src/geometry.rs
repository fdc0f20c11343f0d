//! Core spatial types: SE(3) poses, camera intrinsics, projection and
//! back-projection.

use nalgebra::{Matrix3, Quaternion, Rotation3, Unit, UnitQuaternion, Vector3};
use thiserror::Error;

pub type Point3 = nalgebra::Point3<f64>;

/// Orthonormality drift beyond which a composed rotation is re-orthonormalized.
const ROTATION_DRIFT_TOL: f64 = 1e-9;

#[derive(Debug, Error, PartialEq)]
pub enum GeometryError {
    #[error("rotation matrix is not orthonormal with determinant +1")]
    InvalidRotation,
    #[error("depth must be positive, got {0}")]
    NonPositiveDepth(f64),
    #[error("invalid intrinsics: {0}")]
    InvalidIntrinsics(String),
}

/// Rigid body transform in SE(3). Maps points from the frame it describes
/// into its parent frame: `apply(p) = R * p + t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pose {
    rotation: Matrix3<f64>,
    translation: Vector3<f64>,
}

impl Pose {
    pub fn identity() -> Self {
        Self {
            rotation: Matrix3::identity(),
            translation: Vector3::zeros(),
        }
    }

    /// Builds a pose, rejecting rotations that are not orthonormal with
    /// determinant +1 (reflections included).
    pub fn new(rotation: Matrix3<f64>, translation: Vector3<f64>) -> Result<Self, GeometryError> {
        let drift = (rotation.transpose() * rotation - Matrix3::identity()).abs().max();
        if drift > 1e-6 || rotation.determinant() < 0.0 {
            return Err(GeometryError::InvalidRotation);
        }
        let rotation = if drift > ROTATION_DRIFT_TOL {
            orthonormalize(&rotation)
        } else {
            rotation
        };
        Ok(Self {
            rotation,
            translation,
        })
    }

    /// Trusted constructor for rotations already known to be orthonormal.
    pub(crate) fn from_parts(rotation: Matrix3<f64>, translation: Vector3<f64>) -> Self {
        debug_assert!(
            (rotation.transpose() * rotation - Matrix3::identity())
                .abs()
                .max()
                < 1e-6,
            "rotation drifted from SO(3)"
        );
        Self {
            rotation,
            translation,
        }
    }

    pub fn from_axis_angle(axis: &Vector3<f64>, angle: f64, translation: Vector3<f64>) -> Self {
        let rotation = Rotation3::from_axis_angle(&Unit::new_normalize(*axis), angle);
        Self {
            rotation: rotation.into_inner(),
            translation,
        }
    }

    pub fn from_translation(translation: Vector3<f64>) -> Self {
        Self {
            rotation: Matrix3::identity(),
            translation,
        }
    }

    pub fn rotation(&self) -> &Matrix3<f64> {
        &self.rotation
    }

    pub fn translation(&self) -> &Vector3<f64> {
        &self.translation
    }

    /// The transform applying `other` first, then `self`.
    pub fn compose(&self, other: &Pose) -> Pose {
        let mut rotation = self.rotation * other.rotation;
        let drift = (rotation.transpose() * rotation - Matrix3::identity()).abs().max();
        if drift > ROTATION_DRIFT_TOL {
            rotation = orthonormalize(&rotation);
        }
        Pose {
            rotation,
            translation: self.rotation * other.translation + self.translation,
        }
    }

    pub fn invert(&self) -> Pose {
        let rt = self.rotation.transpose();
        Pose {
            rotation: rt,
            translation: -(rt * self.translation),
        }
    }

    pub fn apply(&self, pt: &Point3) -> Point3 {
        Point3::from(self.rotation * pt.coords + self.translation)
    }

    pub fn rotate(&self, v: &Vector3<f64>) -> Vector3<f64> {
        self.rotation * v
    }

    /// Rotation angle in radians, in [0, pi].
    pub fn rotation_angle(&self) -> f64 {
        let cos = ((self.rotation.trace() - 1.0) / 2.0).clamp(-1.0, 1.0);
        cos.acos()
    }

    pub fn to_quaternion(&self) -> UnitQuaternion<f64> {
        UnitQuaternion::from_rotation_matrix(&Rotation3::from_matrix_unchecked(self.rotation))
    }

    /// Builds a pose from a (possibly slightly denormalized) quaternion in
    /// (x, y, z, w) order plus a translation. Rejects quaternions whose norm
    /// deviates from 1 by more than 1e-3, renormalizes smaller deviations.
    pub fn from_quaternion_xyzw(
        qx: f64,
        qy: f64,
        qz: f64,
        qw: f64,
        translation: Vector3<f64>,
    ) -> Result<Self, GeometryError> {
        let q = Quaternion::new(qw, qx, qy, qz);
        if (q.norm() - 1.0).abs() > 1e-3 {
            return Err(GeometryError::InvalidRotation);
        }
        let rotation = UnitQuaternion::new_normalize(q).to_rotation_matrix();
        Ok(Self {
            rotation: rotation.into_inner(),
            translation,
        })
    }
}

/// Nearest orthonormal matrix by polar decomposition (via SVD), with the
/// determinant forced to +1.
pub(crate) fn orthonormalize(m: &Matrix3<f64>) -> Matrix3<f64> {
    let svd = m.svd(true, true);
    let u = svd.u.expect("svd of 3x3 always yields u");
    let v_t = svd.v_t.expect("svd of 3x3 always yields v_t");
    let mut r = u * v_t;
    if r.determinant() < 0.0 {
        let mut u = u;
        u.column_mut(2).neg_mut();
        r = u * v_t;
    }
    r
}

/// Pinhole camera parameters. `depth_scale` divides raw stored depth values
/// to obtain meters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Intrinsics {
    pub fx: f64,
    pub fy: f64,
    pub cx: f64,
    pub cy: f64,
    pub width: usize,
    pub height: usize,
    pub depth_scale: f64,
}

impl Intrinsics {
    pub fn new(
        fx: f64,
        fy: f64,
        cx: f64,
        cy: f64,
        width: usize,
        height: usize,
        depth_scale: f64,
    ) -> Result<Self, GeometryError> {
        let intr = Self {
            fx,
            fy,
            cx,
            cy,
            width,
            height,
            depth_scale,
        };
        intr.validate()?;
        Ok(intr)
    }

    pub fn validate(&self) -> Result<(), GeometryError> {
        if !(self.fx > 0.0 && self.fy > 0.0) {
            return Err(GeometryError::InvalidIntrinsics(
                "focal lengths must be positive".into(),
            ));
        }
        if !(0.0 <= self.cx && self.cx < self.width as f64)
            || !(0.0 <= self.cy && self.cy < self.height as f64)
        {
            return Err(GeometryError::InvalidIntrinsics(
                "principal point outside the image".into(),
            ));
        }
        if self.depth_scale <= 0.0 {
            return Err(GeometryError::InvalidIntrinsics(
                "depth scale must be positive".into(),
            ));
        }
        Ok(())
    }

    /// The TUM benchmark's default Kinect calibration for 640x480.
    pub fn tum_default() -> Self {
        Self {
            fx: 525.0,
            fy: 525.0,
            cx: 319.5,
            cy: 239.5,
            width: 640,
            height: 480,
            depth_scale: 5000.0,
        }
    }

    /// Same field of view as [`tum_default`](Self::tum_default) at an
    /// arbitrary resolution.
    pub fn scaled_to(&self, width: usize, height: usize) -> Self {
        let sx = width as f64 / self.width as f64;
        let sy = height as f64 / self.height as f64;
        Self {
            fx: self.fx * sx,
            fy: self.fy * sy,
            cx: (self.cx + 0.5) * sx - 0.5,
            cy: (self.cy + 0.5) * sy - 0.5,
            width,
            height,
            depth_scale: self.depth_scale,
        }
    }

    /// Lifts a pixel with a metric depth into camera coordinates.
    pub fn backproject(&self, u: f64, v: f64, depth: f64) -> Result<Point3, GeometryError> {
        if depth <= 0.0 {
            return Err(GeometryError::NonPositiveDepth(depth));
        }
        Ok(Point3::new(
            (u - self.cx) * depth / self.fx,
            (v - self.cy) * depth / self.fy,
            depth,
        ))
    }

    /// Projects a camera-space point to pixel coordinates, or `None` when the
    /// point is behind the camera or lands outside the image.
    pub fn project(&self, pt: &Point3) -> Option<(f64, f64)> {
        if pt.z <= 0.0 {
            return None;
        }
        let u = self.fx * pt.x / pt.z + self.cx;
        let v = self.fy * pt.y / pt.z + self.cy;
        if u < 0.0 || u > (self.width - 1) as f64 || v < 0.0 || v > (self.height - 1) as f64 {
            return None;
        }
        Some((u, v))
    }
}

/// A surface sample: position plus unit normal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrientedPoint {
    pub position: Point3,
    pub normal: Unit<Vector3<f64>>,
}

impl OrientedPoint {
    pub fn new(position: Point3, normal: Vector3<f64>) -> Self {
        Self {
            position,
            normal: Unit::new_normalize(normal),
        }
    }
}
