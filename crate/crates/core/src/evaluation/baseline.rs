//! Seeded Monte Carlo baseline: metrics of uniformly random rankings.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::data::WorkerId;
use crate::error::EvalError;

use super::{KMetrics, MetricAverages};

/// One user's candidates for baseline evaluation: relevance flags in the
/// canonical (ascending food id) candidate order.
#[derive(Debug, Clone)]
pub struct BaselineUser {
    pub worker_id: WorkerId,
    pub relevance: Vec<bool>,
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut hash = 0xcbf2_9ce4_8422_2325u64;
    for b in bytes {
        hash ^= *b as u64;
        hash = hash.wrapping_mul(0x0000_0100_0000_01B3);
    }
    hash
}

/// Per-user RNG stream derived from the master seed and the worker id, so
/// results are independent of user iteration order and of which method run
/// requested the baseline.
pub(crate) fn user_stream_seed(master: u64, worker_id: &WorkerId) -> u64 {
    splitmix(master ^ fnv1a(worker_id.as_str().as_bytes()))
}

/// Averages each metric over `trials` uniform random permutations per user,
/// then across users. Identical (seed, input) pairs produce identical output.
pub fn monte_carlo_baseline(
    users: &[BaselineUser],
    ks: &[usize],
    trials: u64,
    seed: u64,
) -> Result<MetricAverages, EvalError> {
    assert!(trials >= 1, "at least one trial");
    let max_k = ks.iter().copied().max().unwrap_or(0);
    for user in users {
        if max_k == 0 || max_k > user.relevance.len() {
            return Err(EvalError::KOutOfRange { k: max_k, len: user.relevance.len() });
        }
        if !user.relevance.iter().any(|r| *r) {
            return Err(EvalError::NoRelevantItems);
        }
    }

    let discounts: Vec<f64> = (0..max_k).map(|i| 1.0 / ((i + 2) as f64).log2()).collect();
    let mut across_users: BTreeMap<usize, KMetrics> = ks
        .iter()
        .map(|k| (*k, KMetrics::default()))
        .collect();

    for user in users {
        let total_relevant = user.relevance.iter().filter(|r| **r).count();
        let idcg: BTreeMap<usize, f64> = ks
            .iter()
            .map(|k| (*k, discounts[..(*k).min(total_relevant)].iter().sum::<f64>()))
            .collect();

        let mut rng = ChaCha8Rng::seed_from_u64(user_stream_seed(seed, &user.worker_id));
        let mut scratch = user.relevance.clone();
        let mut sums: BTreeMap<usize, KMetrics> =
            ks.iter().map(|k| (*k, KMetrics::default())).collect();

        for _ in 0..trials {
            scratch.shuffle(&mut rng);
            let mut hits = 0usize;
            let mut dcg = 0.0;
            for (i, rel) in scratch[..max_k].iter().enumerate() {
                if *rel {
                    hits += 1;
                    dcg += discounts[i];
                }
                let k = i + 1;
                if let Some(acc) = sums.get_mut(&k) {
                    acc.precision += hits as f64 / k as f64;
                    acc.recall += hits as f64 / total_relevant as f64;
                    acc.ndcg += dcg / idcg[&k];
                }
            }
        }

        for (k, acc) in sums {
            let entry = across_users.get_mut(&k).expect("same k set");
            entry.precision += acc.precision / trials as f64;
            entry.recall += acc.recall / trials as f64;
            entry.ndcg += acc.ndcg / trials as f64;
        }
    }

    let n = users.len().max(1) as f64;
    for metrics in across_users.values_mut() {
        metrics.precision /= n;
        metrics.recall /= n;
        metrics.ndcg /= n;
    }
    Ok(MetricAverages { per_k: across_users })
}
