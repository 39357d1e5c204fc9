//! Rotation representations, vector-based head-pose error metrics,
//! nearest-rotation refinement and pose-vector training losses.
//!
//! The numeric core is generic over [`Real`] (`f32` or `f64`); every type
//! defaults to `f64`, and `*F32` aliases are provided for single precision.

pub mod error;
pub mod experiment;
pub mod linalg;
pub mod losses;
pub mod metrics;
pub mod refinement;
pub mod rotation;
pub mod scalar;

pub use error::{PoseError, Result};
pub use linalg::{Matrix3, Vector3};
pub use losses::{
    ortho_loss, reg_loss, soft_binning_expectation, total_loss, LossConfig, LossEval, PredVectors,
    StageConfig, StageDistribution,
};
pub use metrics::{
    binned_report, frobenius_distance, mae_euler, maev, vector_angle, BinStats, ErrorReport,
    ErrorSample, EulerAxis,
};
pub use refinement::{gram_schmidt_rotation, nearest_rotation_svd, svd3, RefinementResult, Svd3};
pub use rotation::{
    euler_to_rotation, pose_vectors, quat_to_rotation, rotation_to_euler, rotation_to_quat,
    EulerAngles, EulerDecomposition, PoseVectors, Quaternion, RotationMatrix,
};
pub use scalar::Real;

pub type Vector3F32 = Vector3<f32>;
pub type Matrix3F32 = Matrix3<f32>;
pub type EulerAnglesF32 = EulerAngles<f32>;
pub type QuaternionF32 = Quaternion<f32>;
pub type RotationMatrixF32 = RotationMatrix<f32>;
pub type PoseVectorsF32 = PoseVectors<f32>;

pub type Vector3F64 = Vector3<f64>;
pub type Matrix3F64 = Matrix3<f64>;
pub type EulerAnglesF64 = EulerAngles<f64>;
pub type QuaternionF64 = Quaternion<f64>;
pub type RotationMatrixF64 = RotationMatrix<f64>;
pub type PoseVectorsF64 = PoseVectors<f64>;
