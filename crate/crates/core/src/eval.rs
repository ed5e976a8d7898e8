//! Evaluation metrics: per-class F1, macro/micro-F1, exact ROC AUC, and
//! multi-label report assembly.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::corpus::DesignPattern;
use crate::{Error, Result};

/// Binary confusion counts.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinaryCounts {
    pub tp: usize,
    pub fp: usize,
    pub fn_: usize,
    pub tn: usize,
}

impl BinaryCounts {
    pub fn from_predictions(predicted: &[bool], gold: &[bool]) -> Self {
        let mut counts = BinaryCounts::default();
        for (&p, &g) in predicted.iter().zip(gold) {
            match (p, g) {
                (true, true) => counts.tp += 1,
                (true, false) => counts.fp += 1,
                (false, true) => counts.fn_ += 1,
                (false, false) => counts.tn += 1,
            }
        }
        counts
    }

    pub fn total(&self) -> usize {
        self.tp + self.fp + self.fn_ + self.tn
    }

    fn add(&mut self, other: &BinaryCounts) {
        self.tp += other.tp;
        self.fp += other.fp;
        self.fn_ += other.fn_;
        self.tn += other.tn;
    }
}

/// F1 = 2tp / (2tp + fp + fn); 0 by convention when the denominator is 0.
pub fn f1_from_counts(counts: &BinaryCounts) -> f64 {
    let denominator = 2 * counts.tp + counts.fp + counts.fn_;
    if denominator == 0 {
        0.0
    } else {
        2.0 * counts.tp as f64 / denominator as f64
    }
}

/// Unweighted mean of per-class F1 scores.
pub fn macro_f1(per_class: &[f64]) -> Result<f64> {
    if per_class.is_empty() {
        return Err(Error::validation("macro-F1 of an empty class list"));
    }
    Ok(per_class.iter().sum::<f64>() / per_class.len() as f64)
}

/// F1 of the element-wise summed counts across classes.
pub fn micro_f1(per_class: &[BinaryCounts]) -> Result<f64> {
    if per_class.is_empty() {
        return Err(Error::validation("micro-F1 of an empty class list"));
    }
    let mut pooled = BinaryCounts::default();
    for counts in per_class {
        pooled.add(counts);
    }
    Ok(f1_from_counts(&pooled))
}

/// Exact ROC AUC via the rank statistic with midrank tie handling.
///
/// Equals P(score_pos > score_neg) + 0.5 * P(tie) over all positive/negative
/// pairs. Labels are +1/-1; errors when only one class is present.
pub fn roc_auc(scores: &[f64], labels: &[i8]) -> Result<f64> {
    if scores.len() != labels.len() {
        return Err(Error::DimensionMismatch {
            expected: scores.len(),
            actual: labels.len(),
        });
    }
    let n_pos = labels.iter().filter(|&&l| l > 0).count();
    let n_neg = labels.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(Error::validation(
            "ROC AUC undefined: labels contain a single class",
        ));
    }
    if scores.iter().any(|s| !s.is_finite()) {
        return Err(Error::validation("ROC AUC over non-finite scores"));
    }

    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].partial_cmp(&scores[b]).unwrap());

    // Midranks: tied scores all receive the mean of their rank range.
    let mut rank = vec![0.0; scores.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && scores[order[j + 1]] == scores[order[i]] {
            j += 1;
        }
        let mid = (i + j) as f64 / 2.0 + 1.0;
        for &idx in &order[i..=j] {
            rank[idx] = mid;
        }
        i = j + 1;
    }

    let rank_sum_pos: f64 = labels
        .iter()
        .zip(&rank)
        .filter(|(&l, _)| l > 0)
        .map(|(_, &r)| r)
        .sum();
    let n_pos = n_pos as f64;
    let n_neg = n_neg as f64;
    Ok((rank_sum_pos - n_pos * (n_pos + 1.0) / 2.0) / (n_pos * n_neg))
}

/// Per-class outcome inside an [`EvalReport`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassMetrics {
    pub counts: BinaryCounts,
    pub f1: f64,
    /// None when the gold labels for this class are single-class on the
    /// evaluated fragments.
    pub auroc: Option<f64>,
}

/// A row of the experiment report: per-class F1/AUROC plus the averages.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub config_name: String,
    pub per_class: BTreeMap<DesignPattern, ClassMetrics>,
    pub macro_f1: f64,
    pub micro_f1: f64,
}

/// Per-pattern predictions and raw scores over a fixed fragment order.
#[derive(Clone, Debug)]
pub struct PatternPredictions {
    pub predicted: Vec<bool>,
    pub scores: Vec<f64>,
}

/// Assembles the report for one configuration from per-pattern predictions.
///
/// `gold` holds each evaluated fragment's label set, in the same order the
/// prediction vectors use. Every pattern in [`DesignPattern::ALL`] must be
/// present in `predictions`.
pub fn evaluate_multilabel(
    predictions: &BTreeMap<DesignPattern, PatternPredictions>,
    gold: &[std::collections::BTreeSet<DesignPattern>],
    config_name: &str,
) -> Result<EvalReport> {
    let mut per_class = BTreeMap::new();
    let mut f1s = Vec::new();
    let mut all_counts = Vec::new();
    for pattern in DesignPattern::ALL {
        let preds = predictions.get(&pattern).ok_or_else(|| {
            Error::validation(format!("missing predictions for pattern {}", pattern.name()))
        })?;
        if preds.predicted.len() != gold.len() || preds.scores.len() != gold.len() {
            return Err(Error::DimensionMismatch {
                expected: gold.len(),
                actual: preds.predicted.len(),
            });
        }
        let gold_binary: Vec<bool> = gold.iter().map(|set| set.contains(&pattern)).collect();
        let counts = BinaryCounts::from_predictions(&preds.predicted, &gold_binary);
        let f1 = f1_from_counts(&counts);
        let labels: Vec<i8> = gold_binary.iter().map(|&g| if g { 1 } else { -1 }).collect();
        let auroc = roc_auc(&preds.scores, &labels).ok();
        f1s.push(f1);
        all_counts.push(counts);
        per_class.insert(pattern, ClassMetrics { counts, f1, auroc });
    }
    Ok(EvalReport {
        config_name: config_name.to_string(),
        per_class,
        macro_f1: macro_f1(&f1s)?,
        micro_f1: micro_f1(&all_counts)?,
    })
}

/// Renders reports as CSV mirroring the experiment table: one row per
/// configuration, six pattern F1 columns plus macro and micro.
///
/// `decimals` of `None` prints full precision (shortest round-trip form).
pub fn report_csv(reports: &[EvalReport], decimals: Option<usize>) -> String {
    let fmt = |v: f64| match decimals {
        Some(d) => format!("{v:.d$}"),
        None => format!("{v}"),
    };
    let mut out = String::from("config");
    for pattern in DesignPattern::ALL {
        out.push(',');
        out.push_str(pattern.name());
    }
    out.push_str(",macro_f1,micro_f1\n");
    for report in reports {
        out.push_str(&report.config_name);
        for pattern in DesignPattern::ALL {
            out.push(',');
            match report.per_class.get(&pattern) {
                Some(metrics) => out.push_str(&fmt(metrics.f1)),
                None => out.push_str("NA"),
            }
        }
        out.push(',');
        out.push_str(&fmt(report.macro_f1));
        out.push(',');
        out.push_str(&fmt(report.micro_f1));
        out.push('\n');
    }
    out
}
