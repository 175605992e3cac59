//! Numeric primitives behind the scorers: PCA to the plane, regularized
//! covariance, Mahalanobis distance, and Gaussian KDE.

mod covariance;
mod kde;
mod pca;

pub use covariance::{mahalanobis, sample_covariance, CovarianceModel};
pub use kde::{kde_fit, kde_log_density, BandwidthRule, DensityModel, DENSITY_FLOOR};
pub use pca::{pca_reduce, ReducedPointSet};
