//! Regularized 2-D sample covariance and Mahalanobis distance.

use crate::error::NumericError;

/// Sample covariance of a 2-D point set, with a recorded ridge term when the
/// raw matrix is near-singular. History foods can be near-duplicates, so the
/// distance metric must survive a collapsed direction.
#[derive(Debug, Clone)]
pub struct CovarianceModel {
    pub mean: [f64; 2],
    /// Symmetric positive-definite after regularization.
    pub matrix: [[f64; 2]; 2],
    /// Ridge actually added to the diagonal (0 when none was needed).
    pub regularization: f64,
}

impl CovarianceModel {
    /// Eigenvalues of the 2x2 matrix, ascending.
    pub fn eigenvalues(&self) -> [f64; 2] {
        let [[a, b], [_, d]] = self.matrix;
        let half_trace = 0.5 * (a + d);
        let det = a * d - b * b;
        let disc = (half_trace * half_trace - det).max(0.0).sqrt();
        [half_trace - disc, half_trace + disc]
    }

    fn inverse(&self) -> [[f64; 2]; 2] {
        let [[a, b], [c, d]] = self.matrix;
        let det = a * d - b * c;
        debug_assert!(det > 0.0, "covariance must be positive-definite");
        [[d / det, -b / det], [-c / det, a / det]]
    }
}

/// Unbiased (n-1) covariance of `points`. When the smallest eigenvalue drops
/// below 1e-9 * trace / 2, a ridge of max(1e-9 * trace / 2, 1e-12) is added
/// to the diagonal and recorded.
pub fn sample_covariance(points: &[[f64; 2]]) -> Result<CovarianceModel, NumericError> {
    let n = points.len();
    if n < 3 {
        return Err(NumericError::TooFewPoints {
            context: "sample_covariance",
            needed: 3,
            found: n,
        });
    }
    let mut mean = [0.0; 2];
    for p in points {
        mean[0] += p[0];
        mean[1] += p[1];
    }
    mean[0] /= n as f64;
    mean[1] /= n as f64;

    let mut m = [[0.0; 2]; 2];
    for p in points {
        let dx = p[0] - mean[0];
        let dy = p[1] - mean[1];
        m[0][0] += dx * dx;
        m[0][1] += dx * dy;
        m[1][1] += dy * dy;
    }
    let denom = (n - 1) as f64;
    m[0][0] /= denom;
    m[0][1] /= denom;
    m[1][1] /= denom;
    m[1][0] = m[0][1];

    let mut model = CovarianceModel { mean, matrix: m, regularization: 0.0 };
    let trace = m[0][0] + m[1][1];
    let threshold = 1e-9 * trace / 2.0;
    if model.eigenvalues()[0] <= threshold {
        let ridge = threshold.max(1e-12);
        model.matrix[0][0] += ridge;
        model.matrix[1][1] += ridge;
        model.regularization = ridge;
    }
    debug_assert!(model.eigenvalues()[0] > 0.0);
    Ok(model)
}

/// Mahalanobis distance sqrt((a-b)^T M^-1 (a-b)) under `cov`.
pub fn mahalanobis(a: [f64; 2], b: [f64; 2], cov: &CovarianceModel) -> f64 {
    let inv = cov.inverse();
    let dx = a[0] - b[0];
    let dy = a[1] - b[1];
    let q = dx * (inv[0][0] * dx + inv[0][1] * dy) + dy * (inv[1][0] * dx + inv[1][1] * dy);
    q.max(0.0).sqrt()
}
