//! Confusion matrices and the six-metric predictive report.
//!
//! Macro averages are unweighted means over classes. Precision is
//! unavailable for a class that is never predicted, and a single unavailable
//! class makes the macro precision and F1 unavailable too.

use ndarray::Array2;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::table_io::{fmt_sig, render_rows};

/// Rows are actual classes, columns predicted classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfusionMatrix {
    pub counts: Array2<u64>,
    pub labels: Vec<String>,
}

pub fn confusion(actual: &[usize], predicted: &[usize], labels: &[String]) -> Result<ConfusionMatrix> {
    if actual.len() != predicted.len() {
        return Err(Error::shape(format!(
            "{} actual labels vs {} predicted",
            actual.len(),
            predicted.len()
        )));
    }
    let j = labels.len();
    let mut counts = Array2::<u64>::zeros((j, j));
    for (&a, &p) in actual.iter().zip(predicted) {
        for c in [a, p] {
            if c >= j {
                return Err(Error::UnknownLevel {
                    axis: "class".into(),
                    level: c.to_string(),
                });
            }
        }
        counts[[a, p]] += 1;
    }
    Ok(ConfusionMatrix {
        counts,
        labels: labels.to_vec(),
    })
}

impl ConfusionMatrix {
    pub fn total(&self) -> u64 {
        self.counts.sum()
    }

    pub fn n_classes(&self) -> usize {
        self.labels.len()
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let rows: Vec<Vec<String>> = self
            .labels
            .iter()
            .zip(self.counts.rows())
            .map(|(l, r)| std::iter::once(l.clone()).chain(r.iter().map(u64::to_string)).collect())
            .collect();
        let mut header = vec!["actual\\predicted"];
        header.extend(self.labels.iter().map(String::as_str));
        render_rows(&header, &rows)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassMetrics<T> {
    pub label: String,
    pub precision: Option<T>,
    pub recall: Option<T>,
    pub specificity: Option<T>,
    pub f1: Option<T>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricsReport<T> {
    pub mse: T,
    pub accuracy: T,
    pub precision: Option<T>,
    pub recall: T,
    pub specificity: T,
    pub f1: Option<T>,
    pub per_class: Vec<ClassMetrics<T>>,
}

fn ratio<T: Scalar>(num: u64, den: u64) -> Option<T> {
    (den > 0).then(|| T::lit(num as f64) / T::lit(den as f64))
}

fn harmonic<T: Scalar>(p: T, r: T) -> T {
    if p + r > T::zero() {
        T::lit(2.0) * p * r / (p + r)
    } else {
        T::zero()
    }
}

fn mean_defined<T: Scalar>(values: impl Iterator<Item = Option<T>>) -> Option<T> {
    let defined: Vec<T> = values.flatten().collect();
    (!defined.is_empty()).then(|| defined.iter().copied().sum::<T>() / T::count(defined.len()))
}

/// `mse` is taken over all `N·J` entries of `scores` against the one-hot
/// truth; the remaining metrics come from the confusion matrix.
pub fn metrics<T: Scalar>(
    cm: &ConfusionMatrix,
    scores: &Array2<T>,
    actual_one_hot: &Array2<T>,
) -> Result<MetricsReport<T>> {
    let total = cm.total();
    if total == 0 {
        return Err(Error::Degenerate("confusion matrix is empty".into()));
    }
    let j = cm.n_classes();
    if scores.dim() != actual_one_hot.dim() || scores.ncols() != j || scores.nrows() as u64 != total {
        return Err(Error::shape(format!(
            "scores {:?} and truth {:?} do not match {total} records over {j} classes",
            scores.dim(),
            actual_one_hot.dim()
        )));
    }
    let mse = crate::nn::loss(crate::nn::LossKind::Mse, actual_one_hot, scores)?;
    let trace: u64 = (0..j).map(|c| cm.counts[[c, c]]).sum();
    let per_class: Vec<ClassMetrics<T>> = (0..j)
        .map(|c| {
            let tp = cm.counts[[c, c]];
            let row: u64 = cm.counts.row(c).sum();
            let col: u64 = cm.counts.column(c).sum();
            let (fn_, fp) = (row - tp, col - tp);
            let tn = total - tp - fn_ - fp;
            let precision = ratio(tp, tp + fp);
            let recall = ratio(tp, tp + fn_);
            let f1 = match (precision, recall) {
                (Some(p), Some(r)) => Some(harmonic(p, r)),
                _ => None,
            };
            ClassMetrics {
                label: cm.labels[c].clone(),
                precision,
                recall,
                specificity: ratio(tn, tn + fp),
                f1,
            }
        })
        .collect();
    let precision = if per_class.iter().all(|c| c.precision.is_some()) {
        mean_defined(per_class.iter().map(|c| c.precision))
    } else {
        None
    };
    let recall = mean_defined(per_class.iter().map(|c| c.recall)).unwrap_or_else(T::zero);
    let specificity = mean_defined(per_class.iter().map(|c| c.specificity)).unwrap_or_else(T::one);
    let f1 = precision.map(|p| harmonic(p, recall));
    Ok(MetricsReport {
        mse,
        accuracy: T::lit(trace as f64) / T::lit(total as f64),
        precision,
        recall,
        specificity,
        f1,
        per_class,
    })
}

fn cell<T: Scalar>(v: Option<T>) -> String {
    v.map_or_else(|| "NA".to_string(), |x| fmt_sig(x.as_f64(), 6))
}

impl<T: Scalar> MetricsReport<T> {
    /// The six headline metrics in reporting order; `None` means NA.
    pub fn headline(&self) -> [(&'static str, Option<T>); 6] {
        [
            ("mean square error", Some(self.mse)),
            ("accuracy", Some(self.accuracy)),
            ("precision", self.precision),
            ("recall", Some(self.recall)),
            ("specificity", Some(self.specificity)),
            ("f1-score", self.f1),
        ]
    }

    pub fn to_json(&self) -> Result<String>
    where
        T: Serialize,
    {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }
}

/// Aligned text table with one column per model.
pub fn render_text<T: Scalar>(models: &[(&str, &MetricsReport<T>)]) -> String {
    let mut rows: Vec<Vec<String>> = vec![std::iter::once(String::new())
        .chain(models.iter().map(|(name, _)| name.to_string()))
        .collect()];
    for idx in 0..6 {
        let mut row = vec![models
            .first()
            .map(|(_, r)| r.headline()[idx].0)
            .unwrap_or_default()
            .to_string()];
        row.extend(models.iter().map(|(_, r)| cell(r.headline()[idx].1)));
        rows.push(row);
    }
    let widths: Vec<usize> = (0..rows[0].len())
        .map(|c| rows.iter().map(|r| r[c].chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for r in &rows {
        let line: Vec<String> = r
            .iter()
            .zip(&widths)
            .enumerate()
            .map(|(c, (v, &w))| if c == 0 { format!("{v:<w$}") } else { format!("{v:>w$}") })
            .collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    }
    if models.iter().any(|(_, r)| r.precision.is_none()) {
        out.push_str("NA: at least one class was never predicted, so precision and f1-score are undefined.\n");
    }
    out
}
