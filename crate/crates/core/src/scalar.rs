use std::fmt::{Debug, Display, LowerExp};

use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating-point scalar the rotation math is written against: `f32` or `f64`.
///
/// The associated tolerances are scaled to each type's precision so the
/// same invariant checks are meaningful on both.
pub trait Real:
    Float + FloatConst + FromPrimitive + Debug + Display + LowerExp + Default + Send + Sync + 'static
{
    /// Orthonormality / unit-norm tolerance for validated constructors.
    const VALIDATION_TOL: Self;
    /// Pairwise column cosine below which Jacobi sweeps stop.
    const JACOBI_TOL: Self;
    /// Below this, `sigma2 + sigma3` marks a rank-deficient input.
    const DEGENERATE_TOL: Self;
    /// `|cos(yaw)|` threshold for the gimbal-lock branch.
    const GIMBAL_TOL: Self;

    /// Lossy conversion of an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }
}

impl Real for f64 {
    const VALIDATION_TOL: f64 = 1e-9;
    const JACOBI_TOL: f64 = 1e-15;
    const DEGENERATE_TOL: f64 = 1e-12;
    const GIMBAL_TOL: f64 = 1e-7;
}

impl Real for f32 {
    const VALIDATION_TOL: f32 = 1e-4;
    const JACOBI_TOL: f32 = 1e-7;
    const DEGENERATE_TOL: f32 = 1e-6;
    const GIMBAL_TOL: f32 = 1e-4;
}
