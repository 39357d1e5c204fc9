//! Rotation representations and conversions between them.
//!
//! Frame: right-handed, `x` = left, `y` = down, `z` = front. Euler triples
//! are `(roll, yaw, pitch)` in degrees and compose as
//! `R = Rz(roll) · Ry(yaw) · Rx(pitch)` acting on column vectors, i.e.
//! pitch is applied first, then yaw, then roll.

use std::ops::Mul;

use crate::error::{PoseError, Result};
use crate::linalg::{Matrix3, Vector3};
use crate::scalar::Real;

/// `(roll, yaw, pitch)` in degrees.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EulerAngles<T = f64> {
    pub roll: T,
    pub yaw: T,
    pub pitch: T,
}

impl<T: Real> EulerAngles<T> {
    pub const fn new(roll: T, yaw: T, pitch: T) -> Self {
        Self { roll, yaw, pitch }
    }

    pub fn to_array(self) -> [T; 3] {
        [self.roll, self.yaw, self.pitch]
    }

    pub fn is_finite(&self) -> bool {
        self.roll.is_finite() && self.yaw.is_finite() && self.pitch.is_finite()
    }

    /// The other triple describing the same rotation:
    /// `(roll ± 180, ±180 - yaw, pitch ± 180)`, wrapped into `[-180, 180]`.
    pub fn alternate(&self) -> Self {
        let half = T::lit(180.0);
        let yaw = if self.yaw >= T::zero() { half - self.yaw } else { -half - self.yaw };
        Self::new(wrap_degrees(self.roll + half), yaw, wrap_degrees(self.pitch + half))
    }
}

/// Wraps an angle into `(-180, 180]`.
pub fn wrap_degrees<T: Real>(a: T) -> T {
    let full = T::lit(360.0);
    let half = T::lit(180.0);
    let mut w = a % full;
    if w > half {
        w = w - full;
    } else if w <= -half {
        w = w + full;
    }
    w
}

/// Result of decomposing a rotation into Euler angles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerDecomposition<T = f64> {
    pub angles: EulerAngles<T>,
    /// `|cos(yaw)|` fell below the gimbal threshold. Roll was pinned to 0
    /// and pitch carries the remaining freedom.
    pub gimbal_locked: bool,
}

/// Quaternion `w + xi + yj + zk`. Constructors do not force unit norm;
/// [`quat_to_rotation`] checks it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quaternion<T = f64> {
    pub w: T,
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: Real> Quaternion<T> {
    pub const fn new(w: T, x: T, y: T, z: T) -> Self {
        Self { w, x, y, z }
    }

    pub fn identity() -> Self {
        Self::new(T::one(), T::zero(), T::zero(), T::zero())
    }

    pub fn to_array(self) -> [T; 4] {
        [self.w, self.x, self.y, self.z]
    }

    pub fn norm(&self) -> T {
        (self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if !n.is_finite() {
            return Err(PoseError::InvalidArgument("quaternion has non-finite components".into()));
        }
        if n == T::zero() {
            return Err(PoseError::InvalidArgument("zero quaternion".into()));
        }
        let inv = n.recip();
        Ok(Self::new(self.w * inv, self.x * inv, self.y * inv, self.z * inv))
    }

    /// Picks the representative of `{q, -q}` with `w > 0`, or, when `w == 0`,
    /// whose first nonzero vector component is positive.
    pub fn canonical(&self) -> Self {
        let flip = if self.w != T::zero() {
            self.w < T::zero()
        } else {
            [self.x, self.y, self.z]
                .into_iter()
                .find(|c| *c != T::zero())
                .is_some_and(|c| c < T::zero())
        };
        if flip {
            -*self
        } else {
            *self
        }
    }
}

impl<T: Real> std::ops::Neg for Quaternion<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.w, -self.x, -self.y, -self.z)
    }
}

/// A proper rotation: orthonormal columns and unit determinant.
///
/// The columns are the rotated left, down and front reference vectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationMatrix<T = f64>(Matrix3<T>);

impl<T: Real> RotationMatrix<T> {
    /// Validates orthonormality and `det = +1` within `T::VALIDATION_TOL`.
    pub fn new(m: Matrix3<T>) -> Result<Self> {
        Self::with_tolerance(m, T::VALIDATION_TOL)
    }

    pub fn with_tolerance(m: Matrix3<T>, tol: T) -> Result<Self> {
        if !m.is_finite() {
            return Err(PoseError::InvalidArgument("matrix has non-finite entries".into()));
        }
        let ortho = m.orthogonality_error();
        if ortho > tol {
            return Err(PoseError::InvariantViolation(format!(
                "columns not orthonormal (max |RᵀR - I| = {ortho:e})"
            )));
        }
        let det = m.determinant();
        if (det - T::one()).abs() > tol {
            return Err(PoseError::InvariantViolation(format!("determinant is {det}, expected +1")));
        }
        Ok(Self(m))
    }

    pub(crate) fn new_unchecked(m: Matrix3<T>) -> Self {
        debug_assert!(m.orthogonality_error() < T::VALIDATION_TOL.sqrt());
        Self(m)
    }

    pub fn identity() -> Self {
        Self(Matrix3::identity())
    }

    pub fn matrix(&self) -> &Matrix3<T> {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix3<T> {
        self.0
    }

    pub fn column(&self, j: usize) -> Vector3<T> {
        self.0.column(j)
    }

    pub fn transpose(&self) -> Self {
        Self(self.0.transpose())
    }

    pub fn rotate(&self, v: &Vector3<T>) -> Vector3<T> {
        self.0.mul_vec(v)
    }

    /// Rotation by `angle` radians about axis `0` (left, pitch), `1` (down, yaw)
    /// or `2` (front, roll).
    pub fn elementary(axis: usize, angle: T) -> Self {
        let (s, c) = angle.sin_cos();
        let (o, z) = (T::one(), T::zero());
        let rows = match axis {
            0 => [[o, z, z], [z, c, -s], [z, s, c]],
            1 => [[c, z, s], [z, o, z], [-s, z, c]],
            2 => [[c, -s, z], [s, c, z], [z, z, o]],
            _ => panic!("rotation axis {axis} out of range"),
        };
        Self(Matrix3::from_rows(rows))
    }
}

impl<T: Real> Mul for RotationMatrix<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self(self.0 * o.0)
    }
}

/// The three head-pose vectors; identical to the rotation's columns.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoseVectors<T = f64> {
    pub left: Vector3<T>,
    pub down: Vector3<T>,
    pub front: Vector3<T>,
}

impl<T: Real> PoseVectors<T> {
    pub fn to_array(self) -> [Vector3<T>; 3] {
        [self.left, self.down, self.front]
    }

    pub fn to_rotation(&self) -> Result<RotationMatrix<T>> {
        RotationMatrix::new(Matrix3::from_columns(self.to_array()))
    }
}

impl<T: Real> From<RotationMatrix<T>> for PoseVectors<T> {
    fn from(r: RotationMatrix<T>) -> Self {
        pose_vectors(&r)
    }
}

pub fn euler_to_rotation<T: Real>(e: &EulerAngles<T>) -> Result<RotationMatrix<T>> {
    if !e.is_finite() {
        return Err(PoseError::InvalidArgument(format!("non-finite Euler angles {e:?}")));
    }
    let roll = RotationMatrix::elementary(2, e.roll.to_radians());
    let yaw = RotationMatrix::elementary(1, e.yaw.to_radians());
    let pitch = RotationMatrix::elementary(0, e.pitch.to_radians());
    Ok(roll * yaw * pitch)
}

/// Canonical Euler decomposition with yaw in `[-90, 90]`.
pub fn rotation_to_euler<T: Real>(r: &RotationMatrix<T>) -> EulerDecomposition<T> {
    let m = r.matrix();
    // R31 = -sin(yaw), (R11, R21) = cos(yaw)·(cos roll, sin roll),
    // (R32, R33) = cos(yaw)·(sin pitch, cos pitch).
    let cos_yaw = m[(0, 0)].hypot(m[(1, 0)]);
    let yaw = (-m[(2, 0)]).atan2(cos_yaw);
    if cos_yaw < T::GIMBAL_TOL {
        // roll := 0 leaves R12 = sin(yaw) sin(pitch), R22 = cos(pitch), R23 = -sin(pitch).
        let pitch = (-m[(1, 2)]).atan2(m[(1, 1)]);
        return EulerDecomposition {
            angles: EulerAngles::new(T::zero(), yaw.to_degrees(), pitch.to_degrees()),
            gimbal_locked: true,
        };
    }
    let roll = m[(1, 0)].atan2(m[(0, 0)]);
    let pitch = m[(2, 1)].atan2(m[(2, 2)]);
    EulerDecomposition {
        angles: EulerAngles::new(roll.to_degrees(), yaw.to_degrees(), pitch.to_degrees()),
        gimbal_locked: false,
    }
}

/// Accepts quaternions whose norm is within `1e-6` of one and renormalizes them.
pub fn quat_to_rotation<T: Real>(q: &Quaternion<T>) -> Result<RotationMatrix<T>> {
    let n = q.norm();
    if !n.is_finite() || n == T::zero() {
        return Err(PoseError::InvalidArgument(format!("cannot rotate by quaternion {q:?}")));
    }
    if (n - T::one()).abs() > T::lit(1e-6).max(T::VALIDATION_TOL) {
        return Err(PoseError::InvalidArgument(format!("quaternion norm {n} is not 1")));
    }
    let Quaternion { w, x, y, z } = q.normalized()?;
    let two = T::lit(2.0);
    let one = T::one();
    Ok(RotationMatrix::new_unchecked(Matrix3::from_rows([
        [one - two * (y * y + z * z), two * (x * y - w * z), two * (x * z + w * y)],
        [two * (x * y + w * z), one - two * (x * x + z * z), two * (y * z - w * x)],
        [two * (x * z - w * y), two * (y * z + w * x), one - two * (x * x + y * y)],
    ])))
}

/// Canonical unit quaternion, branching on the largest of `w², x², y², z²`.
pub fn rotation_to_quat<T: Real>(r: &RotationMatrix<T>) -> Quaternion<T> {
    let m = r.matrix();
    let (m00, m11, m22) = (m[(0, 0)], m[(1, 1)], m[(2, 2)]);
    let one = T::one();
    let quarter = T::lit(0.25);
    let trace = m00 + m11 + m22;
    let q = if trace >= m00 && trace >= m11 && trace >= m22 {
        let s = (one + trace).sqrt() * T::lit(2.0);
        Quaternion::new(
            quarter * s,
            (m[(2, 1)] - m[(1, 2)]) / s,
            (m[(0, 2)] - m[(2, 0)]) / s,
            (m[(1, 0)] - m[(0, 1)]) / s,
        )
    } else if m00 >= m11 && m00 >= m22 {
        let s = (one + m00 - m11 - m22).sqrt() * T::lit(2.0);
        Quaternion::new(
            (m[(2, 1)] - m[(1, 2)]) / s,
            quarter * s,
            (m[(0, 1)] + m[(1, 0)]) / s,
            (m[(0, 2)] + m[(2, 0)]) / s,
        )
    } else if m11 >= m22 {
        let s = (one + m11 - m00 - m22).sqrt() * T::lit(2.0);
        Quaternion::new(
            (m[(0, 2)] - m[(2, 0)]) / s,
            (m[(0, 1)] + m[(1, 0)]) / s,
            quarter * s,
            (m[(1, 2)] + m[(2, 1)]) / s,
        )
    } else {
        let s = (one + m22 - m00 - m11).sqrt() * T::lit(2.0);
        Quaternion::new(
            (m[(1, 0)] - m[(0, 1)]) / s,
            (m[(0, 2)] + m[(2, 0)]) / s,
            (m[(1, 2)] + m[(2, 1)]) / s,
            quarter * s,
        )
    };
    q.normalized().unwrap_or_else(|_| Quaternion::identity()).canonical()
}

pub fn pose_vectors<T: Real>(r: &RotationMatrix<T>) -> PoseVectors<T> {
    PoseVectors {
        left: r.column(0),
        down: r.column(1),
        front: r.column(2),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_matrix_eq(a: &Matrix3<f64>, b: &Matrix3<f64>, tol: f64) {
        let d = (*a - *b).max_abs();
        assert!(d < tol, "matrices differ by {d:e}:\n{a:?}\n{b:?}");
    }

    #[test]
    fn zero_angles_give_identity() {
        let r = euler_to_rotation(&EulerAngles::new(0.0, 0.0, 0.0)).unwrap();
        assert_eq!(*r.matrix(), Matrix3::identity());
    }

    #[test]
    fn yaw_quarter_turn_by_hand() {
        // Ry(90°) = [[0,0,1],[0,1,0],[-1,0,0]]: front goes to +left, left goes to -front.
        let r = euler_to_rotation(&EulerAngles::new(0.0, 90.0, 0.0)).unwrap();
        let expected = Matrix3::from_row_major([0.0, 0.0, 1.0, 0.0, 1.0, 0.0, -1.0, 0.0, 0.0]);
        assert_matrix_eq(r.matrix(), &expected, 1e-15);
        let p = pose_vectors(&r);
        assert!((p.front - Vector3::new(1.0, 0.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn composition_matches_hand_built_elementary_matrices() {
        let rx = Matrix3::from_row_major([1.0, 0.0, 0.0, 0.0, 0.0, -1.0, 0.0, 1.0, 0.0]);
        let ry = Matrix3::from_row_major([0.0, 0.0, 1.0, 0.0, 1.0, 0.0, -1.0, 0.0, 0.0]);
        let rz = Matrix3::from_row_major([0.0, -1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0]);
        let r = euler_to_rotation(&EulerAngles::new(90.0, 90.0, 90.0)).unwrap();
        assert_matrix_eq(r.matrix(), &(rz * ry * rx), 1e-15);
        let r = euler_to_rotation(&EulerAngles::new(180.0, -90.0, 90.0)).unwrap();
        let rz2 = rz * rz;
        assert_matrix_eq(r.matrix(), &(rz2 * ry.transpose() * rx), 1e-15);
    }

    #[test]
    fn non_finite_euler_rejected() {
        let err = euler_to_rotation(&EulerAngles::new(f64::NAN, 0.0, 0.0)).unwrap_err();
        assert!(matches!(err, PoseError::InvalidArgument(_)));
    }

    #[test]
    fn identity_decomposes_to_zero() {
        let d = rotation_to_euler(&RotationMatrix::<f64>::identity());
        assert!(!d.gimbal_locked);
        assert_eq!(d.angles, EulerAngles::new(0.0, 0.0, 0.0));
    }

    #[test]
    fn round_trip_away_from_singularity() {
        let e = EulerAngles::<f64>::new(10.0, 45.0, 20.0);
        let d = rotation_to_euler(&euler_to_rotation(&e).unwrap());
        for (a, b) in d.angles.to_array().iter().zip(e.to_array()) {
            assert!((a - b).abs() < 1e-9, "{:?}", d.angles);
        }
    }

    #[test]
    fn yaw_beyond_ninety_folds_back() {
        let d = rotation_to_euler(&euler_to_rotation(&EulerAngles::<f64>::new(10.0, 92.0, 15.0)).unwrap());
        let a = d.angles;
        assert!(!d.gimbal_locked);
        assert!((a.yaw - 88.0).abs() < 1e-9);
        assert!((a.roll + 170.0).abs() < 1e-9);
        assert!((a.pitch + 165.0).abs() < 1e-9);
        assert_eq!(EulerAngles::new(10.0, 92.0, 15.0).alternate(), EulerAngles::new(-170.0, 88.0, -165.0));
    }

    #[test]
    fn gimbal_lock_is_flagged_and_reconstructs() {
        let r = euler_to_rotation(&EulerAngles::<f64>::new(30.0, 90.0, 50.0)).unwrap();
        let d = rotation_to_euler(&r);
        assert!(d.gimbal_locked);
        assert_eq!(d.angles.roll, 0.0);
        // Only pitch - roll is observable at yaw = +90.
        assert!((d.angles.pitch - 20.0).abs() < 1e-6, "{:?}", d.angles);
        let back = euler_to_rotation(&d.angles).unwrap();
        assert_matrix_eq(back.matrix(), r.matrix(), 1e-7);
    }

    #[test]
    fn quaternion_identity_and_antipode() {
        let r = quat_to_rotation(&Quaternion::<f64>::identity()).unwrap();
        assert_eq!(*r.matrix(), Matrix3::identity());
        let q = Quaternion::new(0.5, -0.5, 0.5, 0.5);
        let a = quat_to_rotation(&q).unwrap();
        let b = quat_to_rotation(&-q).unwrap();
        assert!((*a.matrix() - *b.matrix()).max_abs() < 1e-12);
    }

    #[test]
    fn zero_quaternion_rejected() {
        let err = quat_to_rotation(&Quaternion::new(0.0, 0.0, 0.0, 0.0)).unwrap_err();
        assert!(matches!(err, PoseError::InvalidArgument(_)));
    }

    #[test]
    fn half_turn_about_left_axis() {
        let r = RotationMatrix::new(Matrix3::diagonal(1.0, -1.0, -1.0)).unwrap();
        assert_eq!(rotation_to_quat(&r), Quaternion::new(0.0, 1.0, 0.0, 0.0));
        assert_eq!(Quaternion::new(-0.0, -1.0, 0.0, 0.0).canonical(), Quaternion::new(0.0, 1.0, -0.0, -0.0));
        assert_eq!(rotation_to_quat(&RotationMatrix::<f64>::identity()), Quaternion::identity());
    }

    #[test]
    fn validated_constructor_rejects_reflection_and_shear() {
        assert!(RotationMatrix::new(Matrix3::diagonal(1.0, 1.0, -1.0)).is_err());
        let mut m = Matrix3::<f64>::identity();
        m[(0, 1)] = 1e-3;
        assert!(matches!(RotationMatrix::new(m), Err(PoseError::InvariantViolation(_))));
    }

    #[test]
    fn pose_vectors_of_identity_are_reference_axes() {
        let p = pose_vectors(&RotationMatrix::<f64>::identity());
        assert_eq!(p.left, Vector3::new(1.0, 0.0, 0.0));
        assert_eq!(p.down, Vector3::new(0.0, 1.0, 0.0));
        assert_eq!(p.front, Vector3::new(0.0, 0.0, 1.0));
    }

    #[test]
    fn works_in_single_precision() {
        let e = EulerAngles::<f32>::new(10.0, 45.0, 20.0);
        let r = euler_to_rotation(&e).unwrap();
        assert!(RotationMatrix::new(*r.matrix()).is_ok());
        let d = rotation_to_euler(&r);
        assert!((d.angles.yaw - 45.0).abs() < 1e-3);
    }

    #[test]
    fn wrap_degrees_range() {
        assert_eq!(wrap_degrees(190.0), -170.0);
        assert_eq!(wrap_degrees(-180.0), 180.0);
        assert_eq!(wrap_degrees(45.0), 45.0);
    }
}
