//! Comfort/curiosity quantifiers over one embedding axis.
//!
//! Both scorers reduce the history and the candidate to the plane, then ask
//! how well the candidate fits the history distribution there: KDS scores
//! the negative log density under a KDE of the history, MDS the ratio of a
//! candidate's mean Mahalanobis distance to the history over the history's
//! mean internal pairwise distance. Small scores mean comfort, large scores
//! mean curiosity.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::data::{EmbeddedFood, FoodId, UserContext};
use crate::error::NumericError;
use crate::numeric::{
    kde_fit, kde_log_density, mahalanobis, pca_reduce, sample_covariance, BandwidthRule,
};

/// Which representation vector feeds the scorer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Axis {
    Taste,
    Ingredient,
}

impl Axis {
    pub fn name(self) -> &'static str {
        match self {
            Axis::Taste => "taste",
            Axis::Ingredient => "ingredient",
        }
    }

    pub fn vector(self, food: &EmbeddedFood) -> &[f64] {
        match self {
            Axis::Taste => &food.taste_vec,
            Axis::Ingredient => &food.ingredient_vec,
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Scoring method.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    Kds,
    Mds,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Kds => "kds",
            Method::Mds => "mds",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "kds" => Ok(Method::Kds),
            "mds" => Ok(Method::Mds),
            _ => Err(format!("unknown method '{s}', expected kds or mds")),
        }
    }
}

/// Scorer knobs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScoringConfig {
    pub bandwidth: BandwidthRule,
    /// Fit one PCA frame on history plus all candidates instead of refitting
    /// per candidate. Off by default: the per-candidate refit is the
    /// reference behavior, this is an O(|F|) speedup.
    pub shared_pca: bool,
}

impl Default for ScoringConfig {
    fn default() -> Self {
        ScoringConfig { bandwidth: BandwidthRule::Scott, shared_pca: false }
    }
}

/// Raw scores for every history and candidate food on one axis.
#[derive(Debug, Clone, PartialEq)]
pub struct AxisScores {
    pub axis: Axis,
    pub method: Method,
    pub history_scores: BTreeMap<FoodId, f64>,
    pub candidate_scores: BTreeMap<FoodId, f64>,
}

fn kds_from_reduced(
    history: &[[f64; 2]],
    candidate: [f64; 2],
    bandwidth: BandwidthRule,
) -> Result<f64, NumericError> {
    let model = kde_fit(history, bandwidth)?;
    Ok(-kde_log_density(&model, candidate))
}

fn mean_pairwise_distance(
    points: &[[f64; 2]],
    cov: &crate::numeric::CovarianceModel,
) -> f64 {
    // Unordered pairs; identical to the ordered double-sum mean by symmetry.
    let n = points.len();
    let mut total = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            total += mahalanobis(points[i], points[j], cov);
        }
    }
    total / (n * (n - 1) / 2) as f64
}

fn mds_from_reduced(history: &[[f64; 2]], candidate: [f64; 2]) -> Result<f64, NumericError> {
    let cov = sample_covariance(history)?;
    let d_in = mean_pairwise_distance(history, &cov);
    if d_in == 0.0 {
        return Err(NumericError::DegenerateHistory);
    }
    let d_out = history
        .iter()
        .map(|h| mahalanobis(candidate, *h, &cov))
        .sum::<f64>()
        / history.len() as f64;
    Ok(d_out / d_in)
}

fn reduce_with_candidate(
    history: &[Vec<f64>],
    candidate: &[f64],
) -> Result<(Vec<[f64; 2]>, [f64; 2]), NumericError> {
    let mut all: Vec<Vec<f64>> = history.to_vec();
    all.push(candidate.to_vec());
    let reduced = pca_reduce(&all)?;
    let mut points = reduced.points;
    let cand = points.pop().expect("candidate was appended");
    Ok((points, cand))
}

/// Kernel density score of `candidate` against `history`: the PCA frame is
/// fit on history plus the candidate, the density on the reduced history
/// only, and the score is -log p(candidate).
pub fn kds_score(
    history: &[Vec<f64>],
    candidate: &[f64],
    config: &ScoringConfig,
) -> Result<f64, NumericError> {
    if history.len() < 3 {
        return Err(NumericError::TooFewPoints {
            context: "kds_score",
            needed: 3,
            found: history.len(),
        });
    }
    let (reduced_history, reduced_candidate) = reduce_with_candidate(history, candidate)?;
    kds_from_reduced(&reduced_history, reduced_candidate, config.bandwidth)
}

/// Mahalanobis distance score of `candidate` against `history`:
/// d_out / d_in in the reduced frame fit on history plus the candidate.
pub fn mds_score(
    history: &[Vec<f64>],
    candidate: &[f64],
    _config: &ScoringConfig,
) -> Result<f64, NumericError> {
    if history.len() < 3 {
        return Err(NumericError::TooFewPoints {
            context: "mds_score",
            needed: 3,
            found: history.len(),
        });
    }
    let (reduced_history, reduced_candidate) = reduce_with_candidate(history, candidate)?;
    mds_from_reduced(&reduced_history, reduced_candidate)
}

/// Scores every history and candidate food of `context` on one axis.
///
/// Candidate scores follow the per-candidate PCA refit (or the shared frame
/// when configured). History members' own scores use a frame fit on the
/// history alone; MDS excludes the member itself from its d_out, KDS keeps
/// the member in the density support.
pub fn score_axis(
    context: &UserContext,
    axis: Axis,
    method: Method,
    config: &ScoringConfig,
) -> Result<AxisScores, NumericError> {
    let history_ids: Vec<&FoodId> = context.history.keys().collect();
    let history_vecs: Vec<Vec<f64>> = context
        .history
        .values()
        .map(|f| axis.vector(f).to_vec())
        .collect();

    // History members, in the history-only frame.
    let reduced = pca_reduce(&history_vecs)?;
    let mut history_scores = BTreeMap::new();
    match method {
        Method::Kds => {
            let model = kde_fit(&reduced.points, config.bandwidth)?;
            for (id, point) in history_ids.iter().zip(&reduced.points) {
                history_scores.insert((*id).clone(), -kde_log_density(&model, *point));
            }
        }
        Method::Mds => {
            let cov = sample_covariance(&reduced.points)?;
            let d_in = mean_pairwise_distance(&reduced.points, &cov);
            if d_in == 0.0 {
                return Err(NumericError::DegenerateHistory);
            }
            let n = reduced.points.len();
            for (i, id) in history_ids.iter().enumerate() {
                let d_out = (0..n)
                    .filter(|j| *j != i)
                    .map(|j| mahalanobis(reduced.points[i], reduced.points[j], &cov))
                    .sum::<f64>()
                    / (n - 1) as f64;
                history_scores.insert((*id).clone(), d_out / d_in);
            }
        }
    }

    let mut candidate_scores = BTreeMap::new();
    if config.shared_pca {
        let mut all = history_vecs.clone();
        for food in context.candidates.values() {
            all.push(axis.vector(food).to_vec());
        }
        let shared = pca_reduce(&all)?;
        let reduced_history = &shared.points[..history_vecs.len()];
        match method {
            Method::Kds => {
                let model = kde_fit(reduced_history, config.bandwidth)?;
                for (id, point) in context
                    .candidates
                    .keys()
                    .zip(&shared.points[history_vecs.len()..])
                {
                    candidate_scores.insert(id.clone(), -kde_log_density(&model, *point));
                }
            }
            Method::Mds => {
                let cov = sample_covariance(reduced_history)?;
                let d_in = mean_pairwise_distance(reduced_history, &cov);
                if d_in == 0.0 {
                    return Err(NumericError::DegenerateHistory);
                }
                for (id, point) in context
                    .candidates
                    .keys()
                    .zip(&shared.points[history_vecs.len()..])
                {
                    let d_out = reduced_history
                        .iter()
                        .map(|h| mahalanobis(*point, *h, &cov))
                        .sum::<f64>()
                        / reduced_history.len() as f64;
                    candidate_scores.insert(id.clone(), d_out / d_in);
                }
            }
        }
    } else {
        for (id, food) in &context.candidates {
            let score = match method {
                Method::Kds => kds_score(&history_vecs, axis.vector(food), config)?,
                Method::Mds => mds_score(&history_vecs, axis.vector(food), config)?,
            };
            candidate_scores.insert(id.clone(), score);
        }
    }

    debug_assert!(history_scores.values().chain(candidate_scores.values()).all(|s| s.is_finite()));
    debug_assert_eq!(history_scores.len(), context.history.len());
    debug_assert_eq!(candidate_scores.len(), context.candidates.len());
    Ok(AxisScores { axis, method, history_scores, candidate_scores })
}
