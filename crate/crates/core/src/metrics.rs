//! Pose error metrics: unwrapped Euler MAE, vector-angle MAEV, Frobenius
//! distance, and per-axis binned error reports.

use crate::error::{PoseError, Result};
use crate::linalg::{Matrix3, Vector3};
use crate::rotation::{rotation_to_euler, EulerAngles, RotationMatrix};
use crate::scalar::Real;

/// Ground-truth angle range covered by [`binned_report`].
pub const BIN_RANGE_DEGREES: (f64, f64) = (-99.0, 99.0);
pub const DEFAULT_BIN_WIDTH: f64 = 33.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EulerAxis {
    Roll,
    Pitch,
    Yaw,
}

impl EulerAxis {
    /// Report order, as in the roll / pitch / yaw table columns.
    pub const ALL: [EulerAxis; 3] = [EulerAxis::Roll, EulerAxis::Pitch, EulerAxis::Yaw];

    pub fn name(self) -> &'static str {
        match self {
            EulerAxis::Roll => "roll",
            EulerAxis::Pitch => "pitch",
            EulerAxis::Yaw => "yaw",
        }
    }

    pub fn of<T: Real>(self, e: &EulerAngles<T>) -> T {
        match self {
            EulerAxis::Roll => e.roll,
            EulerAxis::Pitch => e.pitch,
            EulerAxis::Yaw => e.yaw,
        }
    }
}

/// Per-angle absolute errors, ordered `(roll, yaw, pitch)` like [`EulerAngles`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerError<T = f64> {
    pub per_angle: EulerAngles<T>,
    pub mae: T,
}

/// Angle between corresponding left, down and front vectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VectorError<T = f64> {
    pub per_vector: [T; 3],
    pub maev: T,
}

/// Raw `|gt - pred|` per angle with no wrapping, and their mean.
pub fn mae_euler<T: Real>(gt: &EulerAngles<T>, pred: &EulerAngles<T>) -> EulerError<T> {
    let per_angle = EulerAngles::new(
        (gt.roll - pred.roll).abs(),
        (gt.yaw - pred.yaw).abs(),
        (gt.pitch - pred.pitch).abs(),
    );
    let mae = (per_angle.roll + per_angle.yaw + per_angle.pitch) / T::lit(3.0);
    EulerError { per_angle, mae }
}

/// Angle in degrees between two unit vectors.
pub fn vector_angle<T: Real>(u: &Vector3<T>, v: &Vector3<T>) -> Result<T> {
    let tol = T::lit(1e-6);
    for (name, w) in [("u", u), ("v", v)] {
        let n = w.norm();
        if !n.is_finite() || (n - T::one()).abs() > tol {
            return Err(PoseError::InvalidArgument(format!("{name} is not unit length (|{name}| = {n})")));
        }
    }
    // Same value as acos of the clamped dot product, without its loss of
    // precision near 0 and 180 degrees.
    Ok(u.cross(v).norm().atan2(u.dot(v)).to_degrees())
}

pub fn maev<T: Real>(gt: &RotationMatrix<T>, pred: &RotationMatrix<T>) -> VectorError<T> {
    let per_vector = [0, 1, 2].map(|i| {
        vector_angle(&gt.column(i), &pred.column(i)).expect("rotation columns are unit length")
    });
    let maev = (per_vector[0] + per_vector[1] + per_vector[2]) / T::lit(3.0);
    VectorError { per_vector, maev }
}

pub fn frobenius_distance<T: Real>(a: &Matrix3<T>, b: &Matrix3<T>) -> T {
    (*a - *b).frobenius_norm()
}

/// One ground-truth / prediction pair. Euler annotations are kept when the
/// inputs were Euler triples so MAE is computed on them exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorSample<T = f64> {
    pub gt: RotationMatrix<T>,
    pub pred: RotationMatrix<T>,
    pub gt_euler: Option<EulerAngles<T>>,
    pub pred_euler: Option<EulerAngles<T>>,
}

impl<T: Real> ErrorSample<T> {
    pub fn from_rotations(gt: RotationMatrix<T>, pred: RotationMatrix<T>) -> Self {
        Self { gt, pred, gt_euler: None, pred_euler: None }
    }

    pub fn from_euler(gt: &EulerAngles<T>, pred: &EulerAngles<T>) -> Result<Self> {
        Ok(Self {
            gt: crate::rotation::euler_to_rotation(gt)?,
            pred: crate::rotation::euler_to_rotation(pred)?,
            gt_euler: Some(*gt),
            pred_euler: Some(*pred),
        })
    }

    /// Ground-truth triple, decomposing the matrix when no annotation was kept.
    pub fn gt_angles(&self) -> EulerAngles<T> {
        self.gt_euler.unwrap_or_else(|| rotation_to_euler(&self.gt).angles)
    }

    pub fn pred_angles(&self) -> EulerAngles<T> {
        self.pred_euler.unwrap_or_else(|| rotation_to_euler(&self.pred).angles)
    }

    /// True if either side's Euler triple had to be derived from its matrix.
    pub fn mae_converted(&self) -> bool {
        self.gt_euler.is_none() || self.pred_euler.is_none()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BinStats<T = f64> {
    pub axis: EulerAxis,
    /// `[lo, hi)`; the last bin of each axis is closed at `hi`.
    pub lo: T,
    pub hi: T,
    pub count: usize,
    /// `None` when the bin is empty.
    pub mean_mae: Option<T>,
    pub mean_maev: Option<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorReport<T = f64> {
    pub count: usize,
    pub per_angle_mae: EulerAngles<T>,
    pub mae: T,
    /// Set when any sample's MAE came from a matrix-to-Euler conversion.
    pub mae_converted: bool,
    pub per_vector_error: [T; 3],
    pub maev: T,
    pub bin_width: T,
    pub bins: Vec<BinStats<T>>,
}

impl<T: Real> ErrorReport<T> {
    pub fn bins_for(&self, axis: EulerAxis) -> impl Iterator<Item = &BinStats<T>> {
        self.bins.iter().filter(move |b| b.axis == axis)
    }

    /// Count-weighted mean MAE over the `axis` bins lying inside
    /// `lo <= |angle| <= hi`.
    pub fn mean_mae_where(&self, axis: EulerAxis, lo: T, hi: T) -> Option<T> {
        self.weighted_mean(axis, lo, hi, |b| b.mean_mae)
    }

    pub fn mean_maev_where(&self, axis: EulerAxis, lo: T, hi: T) -> Option<T> {
        self.weighted_mean(axis, lo, hi, |b| b.mean_maev)
    }

    fn weighted_mean(
        &self,
        axis: EulerAxis,
        lo: T,
        hi: T,
        value: impl Fn(&BinStats<T>) -> Option<T>,
    ) -> Option<T> {
        let (mut sum, mut n) = (T::zero(), 0usize);
        for b in self.bins_for(axis) {
            let inner = b.lo.abs().min(b.hi.abs());
            let outer = b.lo.abs().max(b.hi.abs());
            let straddles_zero = b.lo < T::zero() && b.hi > T::zero();
            let inner = if straddles_zero { T::zero() } else { inner };
            if inner >= lo && outer <= hi {
                if let Some(v) = value(b) {
                    sum = sum + v * T::from_usize(b.count).unwrap();
                    n += b.count;
                }
            }
        }
        (n > 0).then(|| sum / T::from_usize(n).unwrap())
    }
}

/// Bin edges over `[-99, 99]`: `ceil(198 / width)` bins, the last one capped at 99.
pub fn bin_edges<T: Real>(bin_width: T) -> Vec<(T, T)> {
    let lo = T::lit(BIN_RANGE_DEGREES.0);
    let hi = T::lit(BIN_RANGE_DEGREES.1);
    // Round away float noise so 198 / 33 yields exactly 6.
    let n = ((hi - lo) / bin_width - T::lit(1e-9)).ceil().to_usize().unwrap_or(1).max(1);
    (0..n)
        .map(|k| {
            let a = lo + bin_width * T::from_usize(k).unwrap();
            let b = if k + 1 == n { hi } else { lo + bin_width * T::from_usize(k + 1).unwrap() };
            (a, b)
        })
        .collect()
}

fn bin_index<T: Real>(edges: &[(T, T)], angle: T) -> Option<usize> {
    let last = edges.len() - 1;
    edges.iter().enumerate().position(|(k, &(lo, hi))| {
        angle >= lo && (angle < hi || (k == last && angle <= hi))
    })
}

/// Aggregate MAE / MAEV over `samples`, plus per-axis bins keyed on the
/// ground-truth angle. Samples outside `[-99, 99]` on an axis are left out
/// of that axis's bins but still count toward the summary.
pub fn binned_report<T: Real>(samples: &[ErrorSample<T>], bin_width: T) -> Result<ErrorReport<T>> {
    if samples.is_empty() {
        return Err(PoseError::InvalidArgument("no samples to report on".into()));
    }
    if bin_width <= T::zero() || !bin_width.is_finite() {
        return Err(PoseError::InvalidArgument(format!("bin width must be positive, got {bin_width}")));
    }
    let edges = bin_edges(bin_width);
    let mut acc: Vec<(T, T, usize)> = vec![(T::zero(), T::zero(), 0); 3 * edges.len()];

    let (mut roll, mut yaw, mut pitch) = (T::zero(), T::zero(), T::zero());
    let mut vec_sum = [T::zero(); 3];
    let mut converted = false;
    for s in samples {
        let gt_angles = s.gt_angles();
        let e = mae_euler(&gt_angles, &s.pred_angles());
        let v = maev(&s.gt, &s.pred);
        converted |= s.mae_converted();
        roll = roll + e.per_angle.roll;
        yaw = yaw + e.per_angle.yaw;
        pitch = pitch + e.per_angle.pitch;
        for (acc, x) in vec_sum.iter_mut().zip(v.per_vector) {
            *acc = *acc + x;
        }
        for (a, axis) in EulerAxis::ALL.iter().enumerate() {
            if let Some(k) = bin_index(&edges, axis.of(&gt_angles)) {
                let slot = &mut acc[a * edges.len() + k];
                slot.0 = slot.0 + e.mae;
                slot.1 = slot.1 + v.maev;
                slot.2 += 1;
            }
        }
    }

    let n = T::from_usize(samples.len()).unwrap();
    let per_angle_mae = EulerAngles::new(roll / n, yaw / n, pitch / n);
    let per_vector_error = vec_sum.map(|x| x / n);
    let three = T::lit(3.0);
    let mut bins = Vec::with_capacity(acc.len());
    for (a, &axis) in EulerAxis::ALL.iter().enumerate() {
        for (k, &(lo, hi)) in edges.iter().enumerate() {
            let (mae_sum, maev_sum, count) = acc[a * edges.len() + k];
            let c = T::from_usize(count).unwrap();
            bins.push(BinStats {
                axis,
                lo,
                hi,
                count,
                mean_mae: (count > 0).then(|| mae_sum / c),
                mean_maev: (count > 0).then(|| maev_sum / c),
            });
        }
    }

    Ok(ErrorReport {
        count: samples.len(),
        mae: (per_angle_mae.roll + per_angle_mae.yaw + per_angle_mae.pitch) / three,
        per_angle_mae,
        mae_converted: converted,
        maev: (per_vector_error[0] + per_vector_error[1] + per_vector_error[2]) / three,
        per_vector_error,
        bin_width,
        bins,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rotation::euler_to_rotation;

    fn worked_pair() -> (EulerAngles, EulerAngles) {
        (EulerAngles::new(-80.8, -88.9, 78.0), EulerAngles::new(-19.9, -87.4, 8.0))
    }

    #[test]
    fn mae_of_identical_triples_is_zero() {
        let e = EulerAngles::new(3.0, -4.0, 5.0);
        let err = mae_euler(&e, &e);
        assert_eq!(err.mae, 0.0);
        assert_eq!(err.per_angle, EulerAngles::new(0.0, 0.0, 0.0));
    }

    #[test]
    fn mae_of_worked_example_is_unwrapped() {
        let (gt, pred) = worked_pair();
        let err = mae_euler(&gt, &pred);
        assert!((err.mae - 132.4 / 3.0).abs() < 1e-12);
        let err = mae_euler(&EulerAngles::<f64>::new(10.0, 89.0, 15.0), &EulerAngles::new(-170.0, 88.0, -165.0));
        assert_eq!(err.per_angle, EulerAngles::new(180.0, 1.0, 180.0));
        assert!((err.mae - 361.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn vector_angle_cases() {
        let x = Vector3::<f64>::new(1.0, 0.0, 0.0);
        let y = Vector3::new(0.0, 1.0, 0.0);
        assert_eq!(vector_angle(&x, &x).unwrap(), 0.0);
        assert!((vector_angle(&x, &y).unwrap() - 90.0).abs() < 1e-12);
        let c: f64 = 0.999;
        let v = Vector3::new(c, (1.0 - c * c).sqrt(), 0.0);
        // arccos(0.999) in degrees, evaluated with mpmath at 50 digits.
        assert!((vector_angle(&x, &v).unwrap() - 2.562558733123139).abs() < 1e-9);
        assert!(matches!(vector_angle(&x, &Vector3::new(2.0, 0.0, 0.0)), Err(PoseError::InvalidArgument(_))));
    }

    #[test]
    fn maev_of_worked_example_under_pinned_convention() {
        // Frozen from an independent numpy evaluation of Rz·Ry·Rx.
        let (gt, pred) = worked_pair();
        let v = maev(&euler_to_rotation(&gt).unwrap(), &euler_to_rotation(&pred).unwrap());
        let expected = [2.2776144289081435, 9.133174007541779, 9.388478687524717];
        for (a, b) in v.per_vector.iter().zip(expected) {
            assert!((a - b).abs() < 1e-9, "{a} vs {b}");
        }
        assert!((v.maev - 6.93308904132488).abs() < 1e-9);
    }

    #[test]
    fn maev_of_gimbal_pair_is_small() {
        let a = euler_to_rotation(&EulerAngles::<f64>::new(10.0, 89.0, 15.0)).unwrap();
        let b = euler_to_rotation(&EulerAngles::new(-170.0, 88.0, -165.0)).unwrap();
        let v = maev(&a, &b);
        // numpy: (3.0, 0.776374382, 2.897755299), mean 2.224709894
        assert!((v.per_vector[0] - 3.0).abs() < 1e-9);
        assert!((v.maev - 2.2247098937723258).abs() < 1e-9);
        assert!(v.maev < 4.0);
    }

    #[test]
    fn frobenius_of_half_turn() {
        let r = Matrix3::diagonal(1.0, -1.0, -1.0);
        assert!((frobenius_distance(&Matrix3::identity(), &r) - 8f64.sqrt()).abs() < 1e-15);
        assert_eq!(frobenius_distance(&r, &r), 0.0);
    }

    #[test]
    fn six_bins_at_default_width() {
        let edges = bin_edges(33.0);
        assert_eq!(edges.len(), 6);
        assert_eq!(edges[0], (-99.0, -66.0));
        assert_eq!(edges[5], (66.0, 99.0));
        assert_eq!(bin_edges(40.0).len(), 5);
        assert_eq!(bin_edges(40.0)[4], (61.0, 99.0));
    }

    #[test]
    fn bin_edges_closed_left_open_right_last_closed() {
        let edges = bin_edges(33.0);
        assert_eq!(bin_index(&edges, 0.0), Some(3));
        assert_eq!(bin_index(&edges, -0.0), Some(3));
        assert_eq!(bin_index(&edges, -33.0), Some(2));
        assert_eq!(bin_index(&edges, 99.0), Some(5));
        assert_eq!(bin_index(&edges, -99.0), Some(0));
        assert_eq!(bin_index(&edges, 99.5), None);
    }

    #[test]
    fn single_exact_sample() {
        let e = EulerAngles::new(0.0, 10.0, 0.0);
        let s = ErrorSample::from_euler(&e, &e).unwrap();
        let report = binned_report(&[s], 33.0).unwrap();
        let yaw_bin = report.bins_for(EulerAxis::Yaw).find(|b| b.lo == 0.0).unwrap();
        assert_eq!(yaw_bin.count, 1);
        assert_eq!(yaw_bin.mean_mae, Some(0.0));
        assert_eq!(report.bins.len(), 18);
        assert!(!report.mae_converted);
    }

    #[test]
    fn empty_samples_rejected() {
        assert!(matches!(binned_report::<f64>(&[], 33.0), Err(PoseError::InvalidArgument(_))));
        let e = EulerAngles::new(0.0, 0.0, 0.0);
        let s = ErrorSample::from_euler(&e, &e).unwrap();
        assert!(binned_report(&[s], 0.0).is_err());
    }

    #[test]
    fn error_growing_with_yaw_gives_monotone_bins() {
        // error = |yaw| / 10 degrees on pitch, so bin means grow outward from 0.
        let samples: Vec<_> = (0..=90)
            .map(|k| {
                let yaw = k as f64;
                let gt = EulerAngles::new(0.0, yaw, 0.0);
                let pred = EulerAngles::new(0.0, yaw, yaw / 10.0);
                ErrorSample::from_euler(&gt, &pred).unwrap()
            })
            .collect();
        let report = binned_report(&samples, 33.0).unwrap();
        let means: Vec<f64> = report
            .bins_for(EulerAxis::Yaw)
            .filter_map(|b| b.mean_mae)
            .collect();
        assert_eq!(means.len(), 3);
        // Bins [0,33): yaw 0..=32, mean |yaw| = 16 -> mae 16/30.
        assert!((means[0] - 16.0 / 30.0).abs() < 1e-12);
        assert!(means.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn matrix_only_samples_are_flagged_converted() {
        let r = euler_to_rotation(&EulerAngles::<f64>::new(5.0, 6.0, 7.0)).unwrap();
        let report = binned_report(&[ErrorSample::from_rotations(r, r)], 33.0).unwrap();
        assert!(report.mae_converted);
        assert!(report.mae.abs() < 1e-9);
    }
}
