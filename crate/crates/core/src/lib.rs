//! Scoring, ranking, and evaluation for food recommendation that balances
//! comfort and curiosity.
//!
//! A user's eating history defines a distribution in taste and ingredient
//! embedding space. Two scorers quantify how a candidate food relates to it:
//! kernel density scoring (negative log density under a KDE of the reduced
//! history) and Mahalanobis distance scoring (mean candidate-to-history
//! distance over mean within-history distance). Candidates are then ranked
//! by curiosity gained per unit of comfort, and the evaluation layer
//! reproduces the full ranking-metric protocol: P@K, R@K, NDCG@K against a
//! seeded random baseline, pooled ROC/AUC per region, and a Wilcoxon
//! signed-rank comparison.

pub mod data;
pub mod error;
pub mod evaluation;
pub mod fixture;
pub mod numeric;
pub mod ranking;
pub mod scoring;

pub use data::{
    build_user_context, load_embeddings, load_extended, load_interactions, relevance_labels,
    DatasetBundle, EmbeddedFood, Experiment, FoodId, FoodTable, InteractionRecord, Region,
    RelevanceLabels, TasteEval, UserContext, WorkerId,
};
pub use error::{DataError, EvalError, NumericError};
pub use evaluation::{run_experiment, EvaluationConfig, ExperimentReport, MetricReport};
pub use numeric::BandwidthRule;
pub use ranking::{rank_user, BalanceScore, RankingRun};
pub use scoring::{score_axis, Axis, AxisScores, Method, ScoringConfig};
