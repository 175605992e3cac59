//! Principal component analysis down to the plane.
//!
//! Axes are eigenvectors of the sample covariance, computed directly since
//! the embedding dimension is small. Sign is fixed so that each axis's
//! largest-magnitude entry is positive, which keeps outputs reproducible.

use nalgebra::{DMatrix, DVector};

use crate::error::NumericError;

/// A 2-D reduction of a point set: the projected points plus the frame that
/// produced them.
#[derive(Debug, Clone)]
pub struct ReducedPointSet {
    /// Projected points, one per input, in input order.
    pub points: Vec<[f64; 2]>,
    /// The two principal axes (rows), orthonormal, by descending eigenvalue.
    pub projection: [Vec<f64>; 2],
    /// Input mean subtracted before projection.
    pub mean: Vec<f64>,
    /// Eigenvalues of the two retained axes.
    pub eigenvalues: [f64; 2],
}

impl ReducedPointSet {
    /// Projects a new vector into the fitted frame.
    pub fn project(&self, v: &[f64]) -> [f64; 2] {
        assert_eq!(v.len(), self.mean.len(), "vector dimension mismatch");
        let mut out = [0.0; 2];
        for (axis, slot) in self.projection.iter().zip(out.iter_mut()) {
            *slot = v
                .iter()
                .zip(self.mean.iter())
                .zip(axis.iter())
                .map(|((x, m), a)| (x - m) * a)
                .sum();
        }
        out
    }
}

/// Reduces `vectors` to 2-D along the top-2 principal axes of their sample
/// covariance (n-1 denominator).
pub fn pca_reduce(vectors: &[Vec<f64>]) -> Result<ReducedPointSet, NumericError> {
    let n = vectors.len();
    if n < 3 {
        return Err(NumericError::TooFewPoints { context: "pca_reduce", needed: 3, found: n });
    }
    let dim = vectors[0].len();
    if dim < 2 {
        return Err(NumericError::MixedDimensions { expected: 2, found: dim });
    }
    for v in vectors {
        if v.len() != dim {
            return Err(NumericError::MixedDimensions { expected: dim, found: v.len() });
        }
        if v.iter().any(|x| !x.is_finite()) {
            return Err(NumericError::NonFiniteInput);
        }
    }
    if vectors.iter().all(|v| v == &vectors[0]) {
        return Err(NumericError::DegenerateInput);
    }

    let mut mean = vec![0.0; dim];
    for v in vectors {
        for (m, x) in mean.iter_mut().zip(v) {
            *m += x;
        }
    }
    for m in mean.iter_mut() {
        *m /= n as f64;
    }

    let mut cov = DMatrix::zeros(dim, dim);
    for v in vectors {
        let centered = DVector::from_iterator(dim, v.iter().zip(&mean).map(|(x, m)| x - m));
        cov += &centered * centered.transpose();
    }
    cov /= (n - 1) as f64;
    if cov.trace() <= 0.0 {
        return Err(NumericError::DegenerateInput);
    }

    let eigen = cov.symmetric_eigen();
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| {
        eigen.eigenvalues[b]
            .partial_cmp(&eigen.eigenvalues[a])
            .unwrap()
    });

    let mut projection: [Vec<f64>; 2] = [vec![0.0; dim], vec![0.0; dim]];
    let mut eigenvalues = [0.0; 2];
    for (k, &idx) in order.iter().take(2).enumerate() {
        let col = eigen.eigenvectors.column(idx);
        let mut axis: Vec<f64> = col.iter().copied().collect();
        // Largest-magnitude entry goes positive; first such entry wins ties.
        let lead = axis
            .iter()
            .enumerate()
            .max_by(|(i, a), (j, b)| {
                a.abs()
                    .partial_cmp(&b.abs())
                    .unwrap()
                    .then(j.cmp(i))
            })
            .map(|(i, _)| i)
            .unwrap();
        if axis[lead] < 0.0 {
            for x in axis.iter_mut() {
                *x = -*x;
            }
        }
        eigenvalues[k] = eigen.eigenvalues[idx].max(0.0);
        projection[k] = axis;
    }

    let reduced = ReducedPointSet {
        points: Vec::new(),
        projection,
        mean,
        eigenvalues,
    };
    let points = vectors.iter().map(|v| reduced.project(v)).collect();
    Ok(ReducedPointSet { points, ..reduced })
}
