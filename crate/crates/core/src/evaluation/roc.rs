//! ROC curves by threshold sweep and vertical curve averaging.

use crate::error::EvalError;

/// An ROC curve from (0,0) to (1,1) with its trapezoid AUC. Ties in the
/// underlying scores are grouped, so the AUC equals the Mann-Whitney
/// statistic with half credit for ties.
#[derive(Debug, Clone, PartialEq)]
pub struct RocCurve {
    /// (false positive rate, true positive rate), monotone in both.
    pub points: Vec<[f64; 2]>,
    pub auc: f64,
}

/// Sweeps descending score thresholds over pooled (score, label) pairs,
/// one step per distinct score.
pub fn roc_points(pairs: &[(f64, bool)]) -> Result<RocCurve, EvalError> {
    let positives = pairs.iter().filter(|(_, l)| *l).count();
    let negatives = pairs.len() - positives;
    if positives == 0 || negatives == 0 {
        return Err(EvalError::SingleClassInput);
    }
    assert!(pairs.iter().all(|(s, _)| s.is_finite()), "scores must be finite");

    let mut sorted: Vec<(f64, bool)> = pairs.to_vec();
    sorted.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());

    let mut points = vec![[0.0, 0.0]];
    let mut tp = 0usize;
    let mut fp = 0usize;
    let mut i = 0;
    while i < sorted.len() {
        let threshold = sorted[i].0;
        while i < sorted.len() && sorted[i].0 == threshold {
            if sorted[i].1 {
                tp += 1;
            } else {
                fp += 1;
            }
            i += 1;
        }
        points.push([fp as f64 / negatives as f64, tp as f64 / positives as f64]);
    }

    let auc = trapezoid(&points);
    debug_assert!((0.0..=1.0 + 1e-12).contains(&auc));
    Ok(RocCurve { points, auc })
}

fn trapezoid(points: &[[f64; 2]]) -> f64 {
    points
        .windows(2)
        .map(|w| (w[1][0] - w[0][0]) * (w[1][1] + w[0][1]) / 2.0)
        .sum()
}

/// TPR of `curve` at false positive rate `q`; vertical risers resolve to
/// their upper end.
fn tpr_at(curve: &RocCurve, q: f64) -> f64 {
    let pts = &curve.points;
    let i = pts
        .iter()
        .rposition(|p| p[0] <= q)
        .expect("curves start at fpr 0");
    if pts[i][0] == q || i + 1 == pts.len() {
        return pts[i][1];
    }
    let [x0, y0] = pts[i];
    let [x1, y1] = pts[i + 1];
    y0 + (y1 - y0) * (q - x0) / (x1 - x0)
}

/// Vertical averaging on a common 101-point false-positive-rate grid.
pub fn average_roc(curves: &[RocCurve]) -> Result<RocCurve, EvalError> {
    if curves.is_empty() {
        return Err(EvalError::NoCurves);
    }
    let points: Vec<[f64; 2]> = (0..=100)
        .map(|i| {
            let q = i as f64 / 100.0;
            let tpr = curves.iter().map(|c| tpr_at(c, q)).sum::<f64>() / curves.len() as f64;
            [q, tpr]
        })
        .collect();
    let auc = trapezoid(&points);
    Ok(RocCurve { points, auc })
}

/// Pairwise Mann-Whitney AUC with 0.5 credit for ties. Quadratic; used as
/// the independent cross-check for [`roc_points`].
pub fn mann_whitney_auc(pairs: &[(f64, bool)]) -> Result<f64, EvalError> {
    let pos: Vec<f64> = pairs.iter().filter(|(_, l)| *l).map(|(s, _)| *s).collect();
    let neg: Vec<f64> = pairs.iter().filter(|(_, l)| !*l).map(|(s, _)| *s).collect();
    if pos.is_empty() || neg.is_empty() {
        return Err(EvalError::SingleClassInput);
    }
    let mut wins = 0.0;
    for p in &pos {
        for n in &neg {
            if p > n {
                wins += 1.0;
            } else if p == n {
                wins += 0.5;
            }
        }
    }
    Ok(wins / (pos.len() * neg.len()) as f64)
}
