//! Ranking metrics over binary relevance sequences.

use std::collections::BTreeMap;

use crate::data::FoodId;
use crate::error::EvalError;

/// Relevance flags in rank order; absent labels count as irrelevant.
pub fn relevance_in_rank_order(ranked: &[FoodId], labels: &BTreeMap<FoodId, bool>) -> Vec<bool> {
    ranked
        .iter()
        .map(|id| labels.get(id).copied().unwrap_or(false))
        .collect()
}

fn check_k(relevance: &[bool], k: usize) -> Result<(), EvalError> {
    if k == 0 || k > relevance.len() {
        return Err(EvalError::KOutOfRange { k, len: relevance.len() });
    }
    Ok(())
}

/// Fraction of the top K that is relevant.
pub fn precision_at_k(relevance: &[bool], k: usize) -> Result<f64, EvalError> {
    check_k(relevance, k)?;
    let hits = relevance[..k].iter().filter(|r| **r).count();
    Ok(hits as f64 / k as f64)
}

/// Fraction of all relevant items found in the top K.
pub fn recall_at_k(relevance: &[bool], k: usize) -> Result<f64, EvalError> {
    check_k(relevance, k)?;
    let total = relevance.iter().filter(|r| **r).count();
    if total == 0 {
        return Err(EvalError::NoRelevantItems);
    }
    let hits = relevance[..k].iter().filter(|r| **r).count();
    Ok(hits as f64 / total as f64)
}

/// Binary-gain NDCG: DCG over the top K against the ideal ordering.
pub fn ndcg_at_k(relevance: &[bool], k: usize) -> Result<f64, EvalError> {
    check_k(relevance, k)?;
    let total = relevance.iter().filter(|r| **r).count();
    if total == 0 {
        return Err(EvalError::NoRelevantItems);
    }
    let discount = |i: usize| ((i + 2) as f64).log2();
    let dcg: f64 = relevance[..k]
        .iter()
        .enumerate()
        .filter(|(_, r)| **r)
        .map(|(i, _)| 1.0 / discount(i))
        .sum();
    let idcg: f64 = (0..k.min(total)).map(|i| 1.0 / discount(i)).sum();
    Ok(dcg / idcg)
}

/// Closed-form expectations under a uniform random permutation:
/// E[P@K] = R/N and E[R@K] = K/N.
pub fn expected_random_metrics(n: usize, r: usize, k: usize) -> Result<(f64, f64), EvalError> {
    if r == 0 || r > n || k == 0 || k > n {
        return Err(EvalError::InvalidCounts { n, r, k });
    }
    Ok((r as f64 / n as f64, k as f64 / n as f64))
}
