//! Gaussian kernel density estimation on the plane.
//!
//! Product kernel with per-dimension bandwidths; log densities evaluate via
//! log-sum-exp and are floored at log(1e-300) so downstream negative-log
//! scores stay finite.

use std::f64::consts::TAU;

use crate::error::NumericError;

/// Density floor: evaluations never report less than this.
pub const DENSITY_FLOOR: f64 = 1e-300;

/// Bandwidth selection for [`kde_fit`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BandwidthRule {
    /// h_d = sigma_d * n^(-1/6), the 2-D case of n^(-1/(dim+4)).
    Scott,
    /// One fixed bandwidth for both dimensions.
    FixedScalar(f64),
}

/// A fitted Gaussian product-kernel density.
#[derive(Debug, Clone)]
pub struct DensityModel {
    pub support: Vec<[f64; 2]>,
    pub bandwidths: [f64; 2],
}

/// Fits a KDE over `points`. Scott bandwidths use the per-dimension sample
/// standard deviation; a collapsed dimension falls back to 1e-6.
pub fn kde_fit(points: &[[f64; 2]], rule: BandwidthRule) -> Result<DensityModel, NumericError> {
    let n = points.len();
    if n < 3 {
        return Err(NumericError::TooFewPoints { context: "kde_fit", needed: 3, found: n });
    }
    let bandwidths = match rule {
        BandwidthRule::FixedScalar(h) => {
            if h <= 0.0 || !h.is_finite() {
                return Err(NumericError::NonpositiveBandwidth(h));
            }
            [h, h]
        }
        BandwidthRule::Scott => {
            let factor = (n as f64).powf(-1.0 / 6.0);
            let mut hs = [0.0; 2];
            for (d, h) in hs.iter_mut().enumerate() {
                let mean = points.iter().map(|p| p[d]).sum::<f64>() / n as f64;
                let var =
                    points.iter().map(|p| (p[d] - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
                let sigma = if var > 0.0 { var.sqrt() } else { 1e-6 };
                *h = sigma * factor;
            }
            hs
        }
    };
    Ok(DensityModel { support: points.to_vec(), bandwidths })
}

/// log p(point) by log-sum-exp over the support, floored at log(1e-300).
pub fn kde_log_density(model: &DensityModel, point: [f64; 2]) -> f64 {
    let [hx, hy] = model.bandwidths;
    let n = model.support.len() as f64;
    // log normalization of one product kernel: -log(2*pi*hx*hy)
    let log_norm = -(TAU * hx * hy).ln();

    let mut max_exponent = f64::NEG_INFINITY;
    let mut exponents = Vec::with_capacity(model.support.len());
    for s in &model.support {
        let zx = (point[0] - s[0]) / hx;
        let zy = (point[1] - s[1]) / hy;
        let e = -0.5 * (zx * zx + zy * zy);
        if e > max_exponent {
            max_exponent = e;
        }
        exponents.push(e);
    }
    if max_exponent == f64::NEG_INFINITY {
        return DENSITY_FLOOR.ln();
    }
    let sum: f64 = exponents.iter().map(|e| (e - max_exponent).exp()).sum();
    let log_p = max_exponent + sum.ln() - n.ln() + log_norm;
    log_p.max(DENSITY_FLOOR.ln())
}
