//! Two-sided Wilcoxon signed-rank test: exact by sign enumeration for small
//! samples, normal approximation with tie and continuity corrections beyond.

use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::EvalError;

/// Largest effective sample size enumerated exactly (2^n sign patterns).
pub const EXACT_LIMIT: usize = 12;

#[derive(Debug, Clone, PartialEq)]
pub struct WilcoxonResult {
    /// Pairs remaining after zero differences are dropped.
    pub n_effective: usize,
    /// min(W+, W-).
    pub statistic: f64,
    /// Tie-corrected z with continuity correction.
    pub z: f64,
    pub p_two_sided: f64,
    pub significant_at_0_05: bool,
}

/// Average ranks of `values` (ascending), ties sharing their mean rank.
fn average_ranks(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap());
    let mut ranks = vec![0.0; n];
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let mean_rank = (i + j + 2) as f64 / 2.0; // ranks are 1-based
        for &idx in &order[i..=j] {
            ranks[idx] = mean_rank;
        }
        i = j + 1;
    }
    ranks
}

/// Exact two-sided p: the fraction of the 2^n equally likely sign patterns
/// whose W+ deviates from the center at least as much as the observed one.
fn exact_p(ranks: &[f64], observed_deviation: f64) -> f64 {
    let n = ranks.len();
    let mu: f64 = ranks.iter().sum::<f64>() / 2.0;
    let mut count = 0u64;
    for pattern in 0u64..(1 << n) {
        let w_plus: f64 = ranks
            .iter()
            .enumerate()
            .filter(|(i, _)| pattern & (1 << i) != 0)
            .map(|(_, r)| *r)
            .sum();
        if (w_plus - mu).abs() >= observed_deviation - 1e-9 {
            count += 1;
        }
    }
    count as f64 / (1u64 << n) as f64
}

/// Tests whether paired samples (a, b) differ, two-sided. Zero differences
/// are dropped; tied absolute differences share average ranks.
pub fn wilcoxon_signed_rank(paired: &[(f64, f64)]) -> Result<WilcoxonResult, EvalError> {
    let diffs: Vec<f64> = paired
        .iter()
        .map(|(a, b)| a - b)
        .filter(|d| *d != 0.0)
        .collect();
    let n = diffs.len();
    if n < 5 {
        return Err(EvalError::TooFewPairs { found: n });
    }

    let abs_diffs: Vec<f64> = diffs.iter().map(|d| d.abs()).collect();
    let ranks = average_ranks(&abs_diffs);
    let w_plus: f64 = diffs
        .iter()
        .zip(&ranks)
        .filter(|(d, _)| **d > 0.0)
        .map(|(_, r)| *r)
        .sum();
    let rank_total: f64 = ranks.iter().sum();
    let w_minus = rank_total - w_plus;
    let statistic = w_plus.min(w_minus);

    let mu = rank_total / 2.0;
    let deviation = w_plus - mu;

    // Variance with the tie correction sum(t^3 - t) / 48.
    let nf = n as f64;
    let mut tie_term = 0.0;
    let mut sorted = abs_diffs.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && sorted[j + 1] == sorted[i] {
            j += 1;
        }
        let t = (j - i + 1) as f64;
        tie_term += t * t * t - t;
        i = j + 1;
    }
    let variance = nf * (nf + 1.0) * (2.0 * nf + 1.0) / 24.0 - tie_term / 48.0;
    let z = if variance > 0.0 && deviation != 0.0 {
        deviation.signum() * (deviation.abs() - 0.5).max(0.0) / variance.sqrt()
    } else {
        0.0
    };

    let p = if n <= EXACT_LIMIT {
        exact_p(&ranks, deviation.abs())
    } else {
        let normal = Normal::new(0.0, 1.0).expect("unit normal");
        2.0 * (1.0 - normal.cdf(z.abs()))
    };
    let p_two_sided = p.clamp(f64::MIN_POSITIVE, 1.0);

    Ok(WilcoxonResult {
        n_effective: n,
        statistic,
        z,
        p_two_sided,
        significant_at_0_05: p_two_sided < 0.05,
    })
}
