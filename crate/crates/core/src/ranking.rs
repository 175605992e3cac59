//! Score scaling, the comfort anchor, the balance score, and the final
//! descending ranking.
//!
//! Raw axis scores are scaled against the largest history score so that the
//! best-known comfort food sits at 1. The anchor r is the scaled
//! curiosity-axis score of the history food with the smallest comfort-axis
//! score; a candidate's balance score is the curiosity gained beyond r per
//! unit of comfort score.

use crate::data::{Experiment, FoodId, UserContext, WorkerId};
use crate::error::NumericError;
use crate::scoring::{score_axis, Axis, AxisScores, Method, ScoringConfig};

use std::collections::BTreeMap;

impl Experiment {
    pub fn comfort_axis(self) -> Axis {
        match self {
            Experiment::Exp1 => Axis::Taste,
            Experiment::Exp2 => Axis::Ingredient,
        }
    }

    pub fn curiosity_axis(self) -> Axis {
        match self {
            Experiment::Exp1 => Axis::Ingredient,
            Experiment::Exp2 => Axis::Taste,
        }
    }
}

/// Axis scores scaled against the history maximum, after an affine shift
/// when raw scores are not all positive (KDS goes negative whenever a
/// density exceeds 1).
#[derive(Debug, Clone)]
pub struct ScaledAxisScores {
    pub base: AxisScores,
    /// Max shifted history score, the scaling denominator.
    pub score_max: f64,
    /// Nonnegative shift applied to every raw score before scaling.
    pub shift: f64,
    pub scaled_history: BTreeMap<FoodId, f64>,
    pub scaled_candidates: BTreeMap<FoodId, f64>,
}

/// Scales raw scores by the history maximum. When any raw score (history or
/// candidate) is nonpositive, all scores are first shifted by 1e-6 minus the
/// minimum so every scaled value stays positive.
pub fn scale_scores(axis_scores: &AxisScores) -> ScaledAxisScores {
    assert!(
        !axis_scores.history_scores.is_empty(),
        "scaling needs at least one history score"
    );
    let min_raw = axis_scores
        .history_scores
        .values()
        .chain(axis_scores.candidate_scores.values())
        .fold(f64::INFINITY, |m, v| m.min(*v));
    let shift = if min_raw <= 0.0 { 1e-6 - min_raw } else { 0.0 };
    let score_max = axis_scores
        .history_scores
        .values()
        .fold(f64::NEG_INFINITY, |m, v| m.max(v + shift));
    assert!(score_max > 0.0, "history maximum must be positive after shift");

    let scale = |scores: &BTreeMap<FoodId, f64>| {
        scores
            .iter()
            .map(|(id, v)| (id.clone(), (v + shift) / score_max))
            .collect::<BTreeMap<_, _>>()
    };
    let scaled = ScaledAxisScores {
        scaled_history: scale(&axis_scores.history_scores),
        scaled_candidates: scale(&axis_scores.candidate_scores),
        base: axis_scores.clone(),
        score_max,
        shift,
    };
    debug_assert!(
        scaled
            .scaled_history
            .values()
            .fold(f64::NEG_INFINITY, |m, v| m.max(*v))
            - 1.0
            <= 1e-12
    );
    scaled
}

/// Identifies the assured-comfort history food h_min (smallest raw
/// comfort-axis score, ties to the ascending food id) and returns its scaled
/// curiosity-axis score as the anchor r.
pub fn comfort_anchor(comfort: &ScaledAxisScores, curiosity: &ScaledAxisScores) -> (FoodId, f64) {
    assert!(!comfort.base.history_scores.is_empty(), "anchor needs history scores");
    debug_assert!(comfort
        .base
        .history_scores
        .keys()
        .eq(curiosity.base.history_scores.keys()));
    let (h_min, _) = comfort
        .base
        .history_scores
        .iter()
        .min_by(|(ia, va), (ib, vb)| va.partial_cmp(vb).unwrap().then_with(|| ia.cmp(ib)))
        .expect("nonempty history");
    let r = curiosity.scaled_history[h_min];
    (h_min.clone(), r)
}

/// Balance of comfort and curiosity for one candidate.
#[derive(Debug, Clone, PartialEq)]
pub struct BalanceScore {
    pub food_id: FoodId,
    pub total: f64,
    pub comfort_axis: Axis,
    pub curiosity_axis: Axis,
    pub comfort_scaled: f64,
    pub curiosity_scaled: f64,
    pub r: f64,
}

/// total = (curiosity' - r) / comfort' for every candidate.
pub fn total_scores(
    comfort: &ScaledAxisScores,
    curiosity: &ScaledAxisScores,
    r: f64,
) -> Vec<BalanceScore> {
    assert_ne!(comfort.base.axis, curiosity.base.axis, "axes must differ");
    debug_assert!(comfort
        .scaled_candidates
        .keys()
        .eq(curiosity.scaled_candidates.keys()));
    comfort
        .scaled_candidates
        .iter()
        .map(|(id, comfort_scaled)| {
            let curiosity_scaled = curiosity.scaled_candidates[id];
            assert!(*comfort_scaled > 0.0, "comfort scores are positive after shift");
            BalanceScore {
                food_id: id.clone(),
                total: (curiosity_scaled - r) / comfort_scaled,
                comfort_axis: comfort.base.axis,
                curiosity_axis: curiosity.base.axis,
                comfort_scaled: *comfort_scaled,
                curiosity_scaled,
                r,
            }
        })
        .collect()
}

/// One user's final ranking.
#[derive(Debug, Clone, PartialEq)]
pub struct RankingRun {
    pub worker_id: WorkerId,
    pub method: Method,
    pub experiment: Experiment,
    /// The assured-comfort history food behind the anchor.
    pub h_min: FoodId,
    /// Candidates by descending total, ties by ascending food id.
    pub ranked: Vec<BalanceScore>,
}

impl RankingRun {
    /// Candidate ids in rank order.
    pub fn ranked_ids(&self) -> Vec<FoodId> {
        self.ranked.iter().map(|b| b.food_id.clone()).collect()
    }
}

/// Sorts balance scores into the final ranking.
pub fn rank(
    worker_id: WorkerId,
    method: Method,
    experiment: Experiment,
    h_min: FoodId,
    mut totals: Vec<BalanceScore>,
) -> RankingRun {
    totals.sort_by(|a, b| {
        b.total
            .partial_cmp(&a.total)
            .unwrap()
            .then_with(|| a.food_id.cmp(&b.food_id))
    });
    RankingRun { worker_id, method, experiment, h_min, ranked: totals }
}

/// Full per-user pipeline: score both axes, scale, anchor, balance, rank.
pub fn rank_user(
    context: &UserContext,
    method: Method,
    experiment: Experiment,
    config: &ScoringConfig,
) -> Result<RankingRun, NumericError> {
    let comfort_raw = score_axis(context, experiment.comfort_axis(), method, config)?;
    let curiosity_raw = score_axis(context, experiment.curiosity_axis(), method, config)?;
    let comfort = scale_scores(&comfort_raw);
    let curiosity = scale_scores(&curiosity_raw);
    let (h_min, r) = comfort_anchor(&comfort, &curiosity);
    let totals = total_scores(&comfort, &curiosity, r);
    let run = rank(context.worker_id.clone(), method, experiment, h_min, totals);
    debug_assert_eq!(run.ranked.len(), context.candidates.len());
    debug_assert!(run
        .ranked
        .iter()
        .all(|b| context.candidates.contains_key(&b.food_id)));
    Ok(run)
}
