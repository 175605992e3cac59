//! The evaluation protocol: per-user rankings scored with P@K/R@K/NDCG@K,
//! a seeded random baseline, pooled ROC curves per region with a vertical
//! all-region average, and a Wilcoxon signed-rank comparison of the method
//! against the baseline over every (metric, K, region) cell.

pub mod baseline;
pub mod metrics;
pub mod roc;
pub mod wilcoxon;

pub use baseline::{monte_carlo_baseline, BaselineUser};
pub use metrics::{
    expected_random_metrics, ndcg_at_k, precision_at_k, recall_at_k, relevance_in_rank_order,
};
pub use roc::{average_roc, mann_whitney_auc, roc_points, RocCurve};
pub use wilcoxon::{wilcoxon_signed_rank, WilcoxonResult, EXACT_LIMIT};

use std::collections::BTreeMap;
use std::fmt;

use crate::data::{
    relevance_labels, region_contexts, DatasetBundle, Experiment, Region, WorkerId,
};
use crate::error::EvalError;
use crate::ranking::rank_user;
use crate::scoring::{Method, ScoringConfig};

/// Averaged precision/recall/NDCG at one K.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct KMetrics {
    pub precision: f64,
    pub recall: f64,
    pub ndcg: f64,
}

/// Metric averages keyed by K.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct MetricAverages {
    pub per_k: BTreeMap<usize, KMetrics>,
}

/// What produced a metric row: one of the scorers or the random baseline.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportMethod {
    Scorer(Method),
    Baseline,
}

impl fmt::Display for ReportMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReportMethod::Scorer(m) => f.write_str(m.name()),
            ReportMethod::Baseline => f.write_str("baseline"),
        }
    }
}

/// Region scope of a metric row: one region or the all-region average.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegionScope {
    One(Region),
    All,
}

impl RegionScope {
    pub fn slug(self) -> &'static str {
        match self {
            RegionScope::One(r) => r.slug(),
            RegionScope::All => "all",
        }
    }
}

/// Metric averages for one (method, experiment, region) cell.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricReport {
    pub method: ReportMethod,
    pub experiment: Experiment,
    pub scope: RegionScope,
    pub averages: MetricAverages,
    pub users_evaluated: usize,
    pub users_skipped: usize,
}

/// Everything produced for one region.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionEvaluation {
    pub region: Region,
    pub method_report: MetricReport,
    pub baseline_report: MetricReport,
    /// Pooled over all (user, candidate) pairs of the region, scored by the
    /// balance total.
    pub roc: RocCurve,
    pub users_evaluated: usize,
    /// Users with no relevant candidate or too few candidates for the
    /// largest K; they are excluded from every average.
    pub users_skipped: usize,
    /// Workers dropped before evaluation because |H| < 3.
    pub users_insufficient_history: Vec<WorkerId>,
}

/// Full evaluation of one method under one experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub method: Method,
    pub experiment: Experiment,
    pub regions: Vec<RegionEvaluation>,
    pub method_average: MetricReport,
    pub baseline_average: MetricReport,
    pub average_roc: RocCurve,
    pub wilcoxon_vs_baseline: WilcoxonResult,
}

/// Evaluation knobs.
#[derive(Debug, Clone)]
pub struct EvaluationConfig {
    pub scoring: ScoringConfig,
    pub ks: Vec<usize>,
    pub baseline_trials: u64,
    pub seed: u64,
}

impl Default for EvaluationConfig {
    fn default() -> Self {
        EvaluationConfig {
            scoring: ScoringConfig::default(),
            ks: vec![1, 3, 5],
            baseline_trials: 100_000,
            seed: 7,
        }
    }
}

fn mean_averages(per_user: &[MetricAverages], ks: &[usize]) -> MetricAverages {
    let mut out = MetricAverages::default();
    let n = per_user.len().max(1) as f64;
    for k in ks {
        let mut acc = KMetrics::default();
        for user in per_user {
            let m = &user.per_k[k];
            acc.precision += m.precision / n;
            acc.recall += m.recall / n;
            acc.ndcg += m.ndcg / n;
        }
        out.per_k.insert(*k, acc);
    }
    out
}

fn macro_average(reports: &[&MetricReport], ks: &[usize]) -> MetricAverages {
    let mut out = MetricAverages::default();
    let n = reports.len().max(1) as f64;
    for k in ks {
        let mut acc = KMetrics::default();
        for report in reports {
            let m = &report.averages.per_k[k];
            acc.precision += m.precision / n;
            acc.recall += m.recall / n;
            acc.ndcg += m.ndcg / n;
        }
        out.per_k.insert(*k, acc);
    }
    out
}

/// Runs the full protocol for one method and experiment over `regions`:
/// per-user rankings, per-region metric averages with the Monte Carlo
/// baseline on the same users, pooled ROC curves plus their vertical
/// average, and the Wilcoxon test over all (metric, K, region) pairs.
pub fn run_experiment(
    bundle: &DatasetBundle,
    method: Method,
    experiment: Experiment,
    regions: &[Region],
    config: &EvaluationConfig,
) -> Result<ExperimentReport, EvalError> {
    assert!(!config.ks.is_empty(), "need at least one K");
    let max_k = *config.ks.iter().max().expect("nonempty ks");
    let mut region_evals = Vec::new();

    for &region in regions {
        let (contexts, dropped) = region_contexts(bundle, region);
        let total_contexts = contexts.len();
        let mut per_user = Vec::new();
        let mut baseline_users = Vec::new();
        let mut roc_pairs: Vec<(f64, bool)> = Vec::new();
        let mut skipped = 0usize;

        for context in &contexts {
            let labels = relevance_labels(context, &bundle.interactions, experiment)?;
            if labels.relevant_count() == 0 || context.candidate_len() < max_k {
                skipped += 1;
                continue;
            }
            let run = rank_user(context, method, experiment, &config.scoring)?;
            let rels = relevance_in_rank_order(&run.ranked_ids(), &labels.labels);
            let mut averages = MetricAverages::default();
            for &k in &config.ks {
                averages.per_k.insert(
                    k,
                    KMetrics {
                        precision: precision_at_k(&rels, k)?,
                        recall: recall_at_k(&rels, k)?,
                        ndcg: ndcg_at_k(&rels, k)?,
                    },
                );
            }
            per_user.push(averages);
            for balance in &run.ranked {
                roc_pairs.push((balance.total, labels.labels[&balance.food_id]));
            }
            baseline_users.push(BaselineUser {
                worker_id: context.worker_id.clone(),
                relevance: labels.labels.values().copied().collect(),
            });
        }

        if per_user.is_empty() {
            return Err(EvalError::NoEvaluableUsers { region: region.name().to_string() });
        }
        debug_assert_eq!(per_user.len() + skipped, total_contexts);

        let method_report = MetricReport {
            method: ReportMethod::Scorer(method),
            experiment,
            scope: RegionScope::One(region),
            averages: mean_averages(&per_user, &config.ks),
            users_evaluated: per_user.len(),
            users_skipped: skipped,
        };
        let baseline_report = MetricReport {
            method: ReportMethod::Baseline,
            experiment,
            scope: RegionScope::One(region),
            averages: monte_carlo_baseline(
                &baseline_users,
                &config.ks,
                config.baseline_trials,
                config.seed,
            )?,
            users_evaluated: baseline_users.len(),
            users_skipped: skipped,
        };
        let roc = roc_points(&roc_pairs)?;

        region_evals.push(RegionEvaluation {
            region,
            users_evaluated: per_user.len(),
            users_skipped: skipped,
            users_insufficient_history: dropped,
            method_report,
            baseline_report,
            roc,
        });
    }

    let method_average = MetricReport {
        method: ReportMethod::Scorer(method),
        experiment,
        scope: RegionScope::All,
        averages: macro_average(
            &region_evals.iter().map(|r| &r.method_report).collect::<Vec<_>>(),
            &config.ks,
        ),
        users_evaluated: region_evals.iter().map(|r| r.users_evaluated).sum(),
        users_skipped: region_evals.iter().map(|r| r.users_skipped).sum(),
    };
    let baseline_average = MetricReport {
        method: ReportMethod::Baseline,
        experiment,
        scope: RegionScope::All,
        averages: macro_average(
            &region_evals.iter().map(|r| &r.baseline_report).collect::<Vec<_>>(),
            &config.ks,
        ),
        users_evaluated: method_average.users_evaluated,
        users_skipped: method_average.users_skipped,
    };
    let average_roc = average_roc(
        &region_evals.iter().map(|r| r.roc.clone()).collect::<Vec<_>>(),
    )?;

    // One pair per (region, metric, K): 3 x 3 x 3 = 27 under the defaults.
    let mut pairs = Vec::new();
    for region in &region_evals {
        for &k in &config.ks {
            let m = &region.method_report.averages.per_k[&k];
            let b = &region.baseline_report.averages.per_k[&k];
            pairs.push((m.precision, b.precision));
            pairs.push((m.recall, b.recall));
            pairs.push((m.ndcg, b.ndcg));
        }
    }
    let wilcoxon_vs_baseline = wilcoxon_signed_rank(&pairs)?;

    Ok(ExperimentReport {
        method,
        experiment,
        regions: region_evals,
        method_average,
        baseline_average,
        average_roc,
        wilcoxon_vs_baseline,
    })
}

impl DatasetBundle {
    /// Candidate regions for evaluation: every region present in the main
    /// food table except the home region the histories are built on.
    pub fn destination_regions(&self) -> Vec<Region> {
        self.all_food
            .regions()
            .into_iter()
            .filter(|r| *r != Region::Japan)
            .collect()
    }
}
