//! Projection of noisy 3x3 predictions onto SO(3).
//!
//! [`nearest_rotation_svd`] gives the Frobenius-nearest rotation:
//! `U Vᵀ`, or `U diag(1, 1, -1) Vᵀ` when `det(U Vᵀ) = -1`.
//! [`gram_schmidt_rotation`] is the order-dependent baseline.

use crate::error::{PoseError, Result};
use crate::linalg::{Matrix3, Vector3};
use crate::metrics::frobenius_distance;
use crate::rotation::RotationMatrix;
use crate::scalar::Real;

const MAX_SWEEPS: usize = 30;

/// `m = U · diag(sigma) · Vᵀ` with `sigma` descending.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Svd3<T = f64> {
    pub u: Matrix3<T>,
    pub sigma: [T; 3],
    pub v: Matrix3<T>,
}

impl<T: Real> Svd3<T> {
    pub fn reconstruct(&self) -> Matrix3<T> {
        let [a, b, c] = self.sigma;
        self.u * Matrix3::diagonal(a, b, c) * self.v.transpose()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RefinementResult<T = f64> {
    pub rotation: RotationMatrix<T>,
    /// Frobenius distance from the input to `rotation`.
    pub residual: T,
    /// The `diag(1, 1, -1)` correction was needed.
    pub det_corrected: bool,
}

/// Any unit vector orthogonal to unit `a`.
fn any_orthogonal<T: Real>(a: &Vector3<T>) -> Vector3<T> {
    let axis = if a.x.abs() <= a.y.abs() && a.x.abs() <= a.z.abs() {
        Vector3::unit(0)
    } else if a.y.abs() <= a.z.abs() {
        Vector3::unit(1)
    } else {
        Vector3::unit(2)
    };
    a.cross(&axis).normalized().expect("axis chosen away from a")
}

/// One-sided cyclic Jacobi SVD.
///
/// Plane rotations are applied to the columns of `W = m·V` until every pair
/// is orthogonal to `T::JACOBI_TOL` relative to the column norms. The
/// column norms are then the singular values and `U = W·Σ⁻¹`, completed with
/// cross products for columns whose singular value is negligible.
pub fn svd3<T: Real>(m: &Matrix3<T>) -> Svd3<T> {
    let mut w = m.columns();
    let mut v = [Vector3::unit(0), Vector3::unit(1), Vector3::unit(2)];
    let two = T::lit(2.0);

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for (p, q) in [(0, 1), (0, 2), (1, 2)] {
            let alpha = w[p].norm_squared();
            let beta = w[q].norm_squared();
            let gamma = w[p].dot(&w[q]);
            if gamma == T::zero() || gamma.abs() <= T::JACOBI_TOL * (alpha * beta).sqrt() {
                continue;
            }
            rotated = true;
            let zeta = (beta - alpha) / (two * gamma);
            let t = zeta.signum() / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
            let c = (T::one() + t * t).sqrt().recip();
            let s = c * t;
            let (wp, wq) = (w[p], w[q]);
            w[p] = wp * c - wq * s;
            w[q] = wp * s + wq * c;
            let (vp, vq) = (v[p], v[q]);
            v[p] = vp * c - vq * s;
            v[q] = vp * s + vq * c;
        }
        if !rotated {
            break;
        }
    }

    let mut order = [0usize, 1, 2];
    let norms = w.map(|c| c.norm());
    order.sort_by(|&a, &b| norms[b].partial_cmp(&norms[a]).unwrap_or(std::cmp::Ordering::Equal));
    let sigma = order.map(|i| norms[i]);
    let w = order.map(|i| w[i]);
    let v = order.map(|i| v[i]);

    let negligible = |s: T| s <= sigma[0] * T::epsilon() * T::lit(16.0) || s == T::zero();
    let u0 = if negligible(sigma[0]) { Vector3::unit(0) } else { w[0] * sigma[0].recip() };
    let u1 = if negligible(sigma[1]) {
        any_orthogonal(&u0)
    } else {
        // Re-orthogonalize against u0 to keep U orthogonal to working precision.
        let c = w[1] - u0 * u0.dot(&w[1]);
        c.normalized().unwrap_or_else(|| any_orthogonal(&u0))
    };
    let cross = u0.cross(&u1);
    let u2 = if !negligible(sigma[2]) && w[2].dot(&cross) < T::zero() { -cross } else { cross };

    Svd3 {
        u: Matrix3::from_columns([u0, u1, u2]),
        sigma,
        v: Matrix3::from_columns(v),
    }
}

/// Frobenius-nearest rotation to `m`.
///
/// Rejects inputs with `sigma2 + sigma3` below `T::DEGENERATE_TOL`, where the
/// minimizer is not unique.
pub fn nearest_rotation_svd<T: Real>(m: &Matrix3<T>) -> Result<RefinementResult<T>> {
    if !m.is_finite() {
        return Err(PoseError::InvalidArgument("matrix has non-finite entries".into()));
    }
    let svd = svd3(m);
    if svd.sigma[1] + svd.sigma[2] < T::DEGENERATE_TOL {
        return Err(PoseError::Degenerate(format!(
            "rank below 2 (singular values {:?}); nearest rotation is not unique",
            svd.sigma
        )));
    }
    let vt = svd.v.transpose();
    let det = svd.u.determinant() * svd.v.determinant();
    let det_corrected = det < T::zero();
    let r = if det_corrected {
        svd.u * Matrix3::diagonal(T::one(), T::one(), -T::one()) * vt
    } else {
        svd.u * vt
    };
    let rotation = RotationMatrix::new(r)?;
    Ok(RefinementResult {
        residual: frobenius_distance(m, rotation.matrix()),
        rotation,
        det_corrected,
    })
}

/// Gram-Schmidt on two chosen columns, the third completed by a cross
/// product with its sign fixed so `det = +1`.
pub fn gram_schmidt_rotation<T: Real>(m: &Matrix3<T>, seed_columns: (usize, usize)) -> Result<RotationMatrix<T>> {
    let (a, b) = seed_columns;
    if a > 2 || b > 2 || a == b {
        return Err(PoseError::InvalidArgument(format!("seed columns {seed_columns:?} must be two distinct indices in 0..3")));
    }
    if !m.is_finite() {
        return Err(PoseError::InvalidArgument("matrix has non-finite entries".into()));
    }
    let c = 3 - a - b;
    let scale = m.frobenius_norm();
    let tiny = scale * T::lit(1e3) * T::epsilon();
    let ca = m.column(a);
    if ca.norm() <= tiny {
        return Err(PoseError::Degenerate(format!("seed column {a} is zero")));
    }
    let ea = ca * ca.norm().recip();
    let cb = m.column(b);
    let rb = cb - ea * ea.dot(&cb);
    if rb.norm() <= tiny.max(cb.norm() * T::lit(1e3) * T::epsilon()) {
        return Err(PoseError::Degenerate(format!("seed columns {a} and {b} are linearly dependent")));
    }
    let eb = rb * rb.norm().recip();
    let mut out = Matrix3::zeros();
    out.set_column(a, ea);
    out.set_column(b, eb);
    out.set_column(c, ea.cross(&eb));
    if out.determinant() < T::zero() {
        out.set_column(c, -ea.cross(&eb));
    }
    RotationMatrix::new(out)
}
