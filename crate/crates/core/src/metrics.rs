//! Evaluation metrics and comparison-table rendering: confusion matrix,
//! macro precision/recall/F1, one-vs-rest ROC AUC via the Mann-Whitney rank
//! formula (ties counted 0.5), and text/markdown/CSV table output with
//! 4-decimal fixed formatting.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::learners::Classifier;
use crate::tabular::LabeledDataset;

/// n_classes × n_classes counts; entry (i, j) counts rows with true class i
/// predicted as j.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    counts: Vec<Vec<usize>>,
}

impl ConfusionMatrix {
    pub fn n_classes(&self) -> usize {
        self.counts.len()
    }

    pub fn entry(&self, true_class: usize, predicted: usize) -> usize {
        self.counts[true_class][predicted]
    }

    pub fn counts(&self) -> &[Vec<usize>] {
        &self.counts
    }

    pub fn total(&self) -> usize {
        self.counts.iter().flatten().sum()
    }

    /// Support of one true class.
    pub fn row_sum(&self, class: usize) -> usize {
        self.counts[class].iter().sum()
    }

    /// How often one class was predicted.
    pub fn col_sum(&self, class: usize) -> usize {
        self.counts.iter().map(|row| row[class]).sum()
    }
}

/// Counts true/predicted label pairs.
pub fn confusion(y_true: &[usize], y_pred: &[usize], n_classes: usize) -> Result<ConfusionMatrix> {
    if y_true.len() != y_pred.len() {
        return Err(Error::invalid_data(format!(
            "{} true labels vs {} predictions",
            y_true.len(),
            y_pred.len()
        )));
    }
    let mut counts = vec![vec![0usize; n_classes]; n_classes];
    for (&t, &p) in y_true.iter().zip(y_pred) {
        if t >= n_classes || p >= n_classes {
            return Err(Error::invalid_data(format!(
                "label out of range: true {t}, predicted {p}, n_classes {n_classes}"
            )));
        }
        counts[t][p] += 1;
    }
    Ok(ConfusionMatrix { counts })
}

fn ratio(numerator: usize, denominator: usize) -> f64 {
    if denominator == 0 {
        0.0
    } else {
        numerator as f64 / denominator as f64
    }
}

fn harmonic(p: f64, r: f64) -> f64 {
    if p + r == 0.0 {
        0.0
    } else {
        2.0 * p * r / (p + r)
    }
}

/// Per-class precision/recall/F1 with zero-denominator cases defined as 0.
pub fn per_class_metrics(cm: &ConfusionMatrix) -> Vec<(f64, f64, f64)> {
    (0..cm.n_classes())
        .map(|c| {
            let precision = ratio(cm.entry(c, c), cm.col_sum(c));
            let recall = ratio(cm.entry(c, c), cm.row_sum(c));
            (precision, recall, harmonic(precision, recall))
        })
        .collect()
}

/// Unweighted (macro) mean of per-class precision, recall and F1.
pub fn precision_recall_f1(cm: &ConfusionMatrix) -> (f64, f64, f64) {
    let per_class = per_class_metrics(cm);
    let n = per_class.len() as f64;
    let (mut p, mut r, mut f) = (0.0, 0.0, 0.0);
    for (cp, cr, cf) in per_class {
        p += cp;
        r += cr;
        f += cf;
    }
    (p / n, r / n, f / n)
}

/// Support-weighted variant for sensitivity analysis.
pub fn precision_recall_f1_weighted(cm: &ConfusionMatrix) -> (f64, f64, f64) {
    let per_class = per_class_metrics(cm);
    let total = cm.total();
    if total == 0 {
        return (0.0, 0.0, 0.0);
    }
    let (mut p, mut r, mut f) = (0.0, 0.0, 0.0);
    for (c, (cp, cr, cf)) in per_class.into_iter().enumerate() {
        let w = cm.row_sum(c) as f64 / total as f64;
        p += w * cp;
        r += w * cr;
        f += w * cf;
    }
    (p, r, f)
}

/// Binary AUC by the Mann-Whitney rank formula with average ranks for ties
/// (equivalent to counting concordant pairs with ties worth 0.5).
pub fn binary_auc(scores: &[f64], positives: &[bool]) -> Result<f64> {
    if scores.len() != positives.len() {
        return Err(Error::invalid_data("scores and labels differ in length"));
    }
    let n_pos = positives.iter().filter(|&&p| p).count();
    let n_neg = positives.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(Error::invalid_data(
            "AUC undefined: needs both positive and negative rows",
        ));
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].partial_cmp(&scores[b]).expect("finite scores"));
    let mut rank_sum_pos = 0.0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j < order.len() && scores[order[j]] == scores[order[i]] {
            j += 1;
        }
        // 1-based ranks i+1 ..= j averaged over the tie group.
        let avg_rank = (i + 1 + j) as f64 / 2.0;
        for &idx in &order[i..j] {
            if positives[idx] {
                rank_sum_pos += avg_rank;
            }
        }
        i = j;
    }
    let n_pos_f = n_pos as f64;
    Ok((rank_sum_pos - n_pos_f * (n_pos_f + 1.0) / 2.0) / (n_pos_f * n_neg as f64))
}

/// One-vs-rest ROC AUC: mean binary AUC over the classes present in
/// `y_true`; absent classes are skipped. Errors when only one class occurs.
pub fn roc_auc_ovr(y_true: &[usize], scores: &[Vec<f64>]) -> Result<f64> {
    if y_true.len() != scores.len() {
        return Err(Error::invalid_data("labels and score rows differ in length"));
    }
    if y_true.is_empty() {
        return Err(Error::invalid_data("AUC undefined on empty input"));
    }
    let n_classes = scores[0].len();
    let mut present = vec![false; n_classes];
    for &y in y_true {
        if y >= n_classes {
            return Err(Error::invalid_data(format!(
                "label {y} exceeds {n_classes} score columns"
            )));
        }
        present[y] = true;
    }
    if present.iter().filter(|&&p| p).count() < 2 {
        return Err(Error::invalid_data(
            "AUC undefined: only one class present",
        ));
    }
    let mut sum = 0.0;
    let mut classes = 0usize;
    for (class, &is_present) in present.iter().enumerate() {
        if !is_present {
            continue;
        }
        let class_scores: Vec<f64> = scores.iter().map(|row| row[class]).collect();
        let positives: Vec<bool> = y_true.iter().map(|&y| y == class).collect();
        sum += binary_auc(&class_scores, &positives)?;
        classes += 1;
    }
    Ok(sum / classes as f64)
}

/// Argmax with ties resolved to the lowest class code.
pub fn argmax(probs: &[f64]) -> usize {
    let mut best = 0;
    for (i, &p) in probs.iter().enumerate().skip(1) {
        if p > probs[best] {
            best = i;
        }
    }
    best
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Averaging {
    Macro,
    Weighted,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassMetrics {
    pub class: String,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub support: usize,
}

/// Headline metrics for one model. The `*_macro` fields hold macro averages
/// by default; under `Averaging::Weighted` they carry the support-weighted
/// variants and `averaging` records that.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub model_name: String,
    pub f1_macro: f64,
    pub recall_macro: f64,
    pub precision_macro: f64,
    pub roc_auc_ovr_macro: Option<f64>,
    pub averaging: Averaging,
    pub per_class: Vec<ClassMetrics>,
    pub n_test: usize,
}

/// Scores a fitted model on a test set: argmax predictions (ties to the
/// lowest class code), confusion counts, averaged metrics, AUC from the
/// probability scores. AUC is absent when the test set holds one class.
pub fn evaluate(model: &dyn Classifier, test: &LabeledDataset, name: &str) -> Result<MetricsReport> {
    evaluate_with_averaging(model, test, name, Averaging::Macro)
}

pub fn evaluate_with_averaging(
    model: &dyn Classifier,
    test: &LabeledDataset,
    name: &str,
    averaging: Averaging,
) -> Result<MetricsReport> {
    if test.n_rows() == 0 {
        return Err(Error::invalid_data("cannot evaluate on an empty test set"));
    }
    let probs = model.predict_proba(&test.features)?;
    let predictions: Vec<usize> = probs.iter().map(|p| argmax(p)).collect();
    let cm = confusion(&test.labels, &predictions, test.n_classes())?;
    report_from_parts(&cm, &test.labels, &probs, &test.class_names, name, averaging)
}

/// Builds a report from precomputed predictions; shared by `evaluate` and
/// the CLI paths that keep probabilities around.
pub fn report_from_parts(
    cm: &ConfusionMatrix,
    y_true: &[usize],
    probs: &[Vec<f64>],
    class_names: &[String],
    name: &str,
    averaging: Averaging,
) -> Result<MetricsReport> {
    let (precision, recall, f1) = match averaging {
        Averaging::Macro => precision_recall_f1(cm),
        Averaging::Weighted => precision_recall_f1_weighted(cm),
    };
    let roc = roc_auc_ovr(y_true, probs).ok();
    let per_class = per_class_metrics(cm)
        .into_iter()
        .enumerate()
        .map(|(c, (p, r, f))| ClassMetrics {
            class: class_names[c].clone(),
            precision: p,
            recall: r,
            f1: f,
            support: cm.row_sum(c),
        })
        .collect();
    Ok(MetricsReport {
        model_name: name.to_string(),
        f1_macro: f1,
        recall_macro: recall,
        precision_macro: precision,
        roc_auc_ovr_macro: roc,
        averaging,
        per_class,
        n_test: y_true.len(),
    })
}

fn fmt4(v: f64) -> String {
    format!("{v:.4}")
}

fn fmt_roc(v: Option<f64>) -> String {
    v.map_or_else(|| "N/A".to_string(), fmt4)
}

const TABLE_HEADERS: [&str; 5] = ["Model", "F1 Score", "Recall", "Precision", "ROC AUC"];

fn table_rows(reports: &[MetricsReport]) -> Vec<[String; 5]> {
    reports
        .iter()
        .map(|r| {
            [
                r.model_name.clone(),
                fmt4(r.f1_macro),
                fmt4(r.recall_macro),
                fmt4(r.precision_macro),
                fmt_roc(r.roc_auc_ovr_macro),
            ]
        })
        .collect()
}

/// Aligned plain-text comparison table.
pub fn render_text(reports: &[MetricsReport]) -> String {
    let rows = table_rows(reports);
    let mut widths: Vec<usize> = TABLE_HEADERS.iter().map(|h| h.len()).collect();
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let mut out = String::new();
    for (i, h) in TABLE_HEADERS.iter().enumerate() {
        out.push_str(&format!("{:<width$}", h, width = widths[i] + 2));
    }
    out.truncate(out.trim_end().len());
    out.push('\n');
    for row in &rows {
        let mut line = String::new();
        for (i, cell) in row.iter().enumerate() {
            line.push_str(&format!("{:<width$}", cell, width = widths[i] + 2));
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

pub fn render_markdown(reports: &[MetricsReport]) -> String {
    let mut out = String::new();
    out.push_str(&format!("| {} |\n", TABLE_HEADERS.join(" | ")));
    out.push_str(&format!("|{}\n", " --- |".repeat(TABLE_HEADERS.len())));
    for row in table_rows(reports) {
        out.push_str(&format!("| {} |\n", row.join(" | ")));
    }
    out
}

/// CSV export: `model,f1_score,recall,precision,roc_auc,n_test` with metrics
/// at 4 decimals and an empty roc field when absent.
pub fn reports_to_csv(reports: &[MetricsReport]) -> String {
    let mut out = String::from("model,f1_score,recall,precision,roc_auc,n_test\n");
    for r in reports {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.model_name,
            fmt4(r.f1_macro),
            fmt4(r.recall_macro),
            fmt4(r.precision_macro),
            r.roc_auc_ovr_macro.map_or(String::new(), fmt4),
            r.n_test
        ));
    }
    out
}

/// Reads the CSV export back (per-class details are not part of the export).
/// External model scores can be merged into comparison tables this way.
pub fn reports_from_csv(text: &str) -> Result<Vec<MetricsReport>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(text.as_bytes());
    let headers: Vec<String> = reader
        .headers()?
        .iter()
        .map(str::to_string)
        .collect();
    let expected = ["model", "f1_score", "recall", "precision", "roc_auc", "n_test"];
    if headers != expected {
        return Err(Error::invalid_data(format!(
            "metrics csv header mismatch: got {headers:?}"
        )));
    }
    let mut reports = Vec::new();
    for record in reader.records() {
        let record = record?;
        let field = |i: usize| record.get(i).unwrap_or("").to_string();
        let parse = |i: usize| -> Result<f64> {
            field(i)
                .parse::<f64>()
                .map_err(|_| Error::invalid_data(format!("bad number '{}' in metrics csv", field(i))))
        };
        let roc = if field(4).is_empty() {
            None
        } else {
            Some(parse(4)?)
        };
        reports.push(MetricsReport {
            model_name: field(0),
            f1_macro: parse(1)?,
            recall_macro: parse(2)?,
            precision_macro: parse(3)?,
            roc_auc_ovr_macro: roc,
            averaging: Averaging::Macro,
            per_class: Vec::new(),
            n_test: field(5)
                .parse()
                .map_err(|_| Error::invalid_data("bad n_test in metrics csv"))?,
        });
    }
    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn confusion_counts() {
        let cm = confusion(&[0, 0, 1, 2], &[0, 1, 1, 2], 3).unwrap();
        assert_eq!(cm.entry(0, 1), 1);
        assert_eq!(cm.entry(0, 0), 1);
        assert_eq!(cm.entry(1, 1), 1);
        assert_eq!(cm.entry(2, 2), 1);
        assert_eq!(cm.total(), 4);
    }

    #[test]
    fn confusion_perfect_is_diagonal() {
        let y = [0, 1, 2, 1, 0];
        let cm = confusion(&y, &y, 3).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    assert_eq!(cm.entry(i, j), 0);
                }
            }
        }
    }

    #[test]
    fn confusion_empty_and_errors() {
        let cm = confusion(&[], &[], 2).unwrap();
        assert_eq!(cm.total(), 0);
        assert!(confusion(&[0], &[], 2).is_err());
        assert!(confusion(&[5], &[0], 2).is_err());
    }

    #[test]
    fn prf_hand_example() {
        let cm = ConfusionMatrix {
            counts: vec![vec![2, 2], vec![0, 4]],
        };
        let (p, r, f) = precision_recall_f1(&cm);
        assert!((p - (1.0 + 2.0 / 3.0) / 2.0).abs() < 1e-12);
        assert!((r - 0.75).abs() < 1e-12);
        let f_expected = (2.0 / 3.0 + 0.8) / 2.0;
        assert!((f - f_expected).abs() < 1e-12);
    }

    #[test]
    fn prf_perfect() {
        let cm = confusion(&[0, 1, 2], &[0, 1, 2], 3).unwrap();
        assert_eq!(precision_recall_f1(&cm), (1.0, 1.0, 1.0));
    }

    #[test]
    fn prf_absent_class_counts_as_zero() {
        // Class 2 never occurs and is never predicted: contributes 0.
        let cm = confusion(&[0, 1], &[0, 1], 3).unwrap();
        let (p, r, f) = precision_recall_f1(&cm);
        assert!((p - 2.0 / 3.0).abs() < 1e-12);
        assert!((r - 2.0 / 3.0).abs() < 1e-12);
        assert!((f - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn weighted_ignores_empty_classes() {
        let cm = confusion(&[0, 1], &[0, 1], 3).unwrap();
        let (p, r, f) = precision_recall_f1_weighted(&cm);
        assert_eq!((p, r, f), (1.0, 1.0, 1.0));
    }

    #[test]
    fn auc_hand_case() {
        // Pairs: (0.35 > 0.1) ok, (0.35 > 0.4) no, (0.8 > 0.1) ok,
        // (0.8 > 0.4) ok -> 3/4.
        let auc = binary_auc(&[0.1, 0.4, 0.35, 0.8], &[false, false, true, true]).unwrap();
        assert!((auc - 0.75).abs() < 1e-12);
    }

    #[test]
    fn auc_perfect_and_ties() {
        let auc = binary_auc(&[0.1, 0.2, 0.8, 0.9], &[false, false, true, true]).unwrap();
        assert_eq!(auc, 1.0);
        let auc = binary_auc(&[0.5, 0.5, 0.5, 0.5], &[false, true, false, true]).unwrap();
        assert_eq!(auc, 0.5);
    }

    #[test]
    fn auc_single_class_errors() {
        assert!(binary_auc(&[0.1, 0.2], &[true, true]).is_err());
        assert!(roc_auc_ovr(&[1, 1], &[vec![0.5, 0.5], vec![0.5, 0.5]]).is_err());
    }

    #[test]
    fn ovr_skips_absent_classes() {
        // 3 score columns but only classes 0 and 1 occur.
        let y = [0, 0, 1, 1];
        let scores = vec![
            vec![0.8, 0.1, 0.1],
            vec![0.7, 0.2, 0.1],
            vec![0.2, 0.7, 0.1],
            vec![0.1, 0.8, 0.1],
        ];
        let auc = roc_auc_ovr(&y, &scores).unwrap();
        assert_eq!(auc, 1.0);
    }

    #[test]
    fn argmax_tie_takes_lowest() {
        assert_eq!(argmax(&[0.4, 0.4, 0.2]), 0);
        assert_eq!(argmax(&[0.1, 0.4, 0.5]), 2);
    }

    struct ConstantModel {
        probs: Vec<f64>,
    }

    impl Classifier for ConstantModel {
        fn n_classes(&self) -> usize {
            self.probs.len()
        }
        fn predict_proba(&self, rows: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
            Ok(rows.iter().map(|_| self.probs.clone()).collect())
        }
    }

    #[test]
    fn constant_predictor_recall_third_on_balanced_data() {
        let test = LabeledDataset {
            features: (0..9).map(|i| vec![i as f64]).collect(),
            labels: (0..9).map(|i| i % 3).collect(),
            feature_names: vec!["x".into()],
            class_names: vec!["a".into(), "b".into(), "c".into()],
        };
        let model = ConstantModel {
            probs: vec![1.0 / 3.0; 3],
        };
        let report = evaluate(&model, &test, "priors").unwrap();
        assert!((report.recall_macro - 1.0 / 3.0).abs() < 1e-12);
        assert_eq!(report.n_test, 9);
    }

    #[test]
    fn evaluate_is_deterministic() {
        let test = LabeledDataset {
            features: (0..12).map(|i| vec![i as f64]).collect(),
            labels: (0..12).map(|i| i % 2).collect(),
            feature_names: vec!["x".into()],
            class_names: vec!["a".into(), "b".into()],
        };
        let model = ConstantModel {
            probs: vec![0.6, 0.4],
        };
        let a = evaluate(&model, &test, "m").unwrap();
        let b = evaluate(&model, &test, "m").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn metrics_stay_in_unit_interval() {
        let cm = confusion(&[0, 1, 1, 2, 2, 0], &[1, 1, 0, 2, 0, 0], 3).unwrap();
        let (p, r, f) = precision_recall_f1(&cm);
        for v in [p, r, f] {
            assert!((0.0..=1.0).contains(&v));
        }
    }

    #[test]
    fn csv_round_trip_at_four_decimals() {
        let reports = vec![
            MetricsReport {
                model_name: "forest".into(),
                f1_macro: 0.71234567,
                recall_macro: 0.7,
                precision_macro: 0.76,
                roc_auc_ovr_macro: Some(0.87566666),
                averaging: Averaging::Macro,
                per_class: Vec::new(),
                n_test: 100,
            },
            MetricsReport {
                model_name: "external_lightgbm".into(),
                f1_macro: 0.7,
                recall_macro: 0.69,
                precision_macro: 0.75,
                roc_auc_ovr_macro: None,
                averaging: Averaging::Macro,
                per_class: Vec::new(),
                n_test: 100,
            },
        ];
        let csv1 = reports_to_csv(&reports);
        let parsed = reports_from_csv(&csv1).unwrap();
        let csv2 = reports_to_csv(&parsed);
        assert_eq!(csv1, csv2);
        assert_eq!(parsed[0].f1_macro, 0.7123);
        assert_eq!(parsed[1].roc_auc_ovr_macro, None);
    }

    #[test]
    fn text_table_shape() {
        let reports = vec![MetricsReport {
            model_name: "Ensemble Model".into(),
            f1_macro: 0.8123,
            recall_macro: 0.8045,
            precision_macro: 0.8312,
            roc_auc_ovr_macro: Some(0.9234),
            averaging: Averaging::Macro,
            per_class: Vec::new(),
            n_test: 50,
        }];
        let text = render_text(&reports);
        let mut lines = text.lines();
        let header = lines.next().unwrap();
        assert!(header.starts_with("Model"));
        assert!(header.contains("F1 Score"));
        assert!(header.contains("ROC AUC"));
        let row = lines.next().unwrap();
        assert!(row.contains("0.8123"));
        assert!(row.contains("0.9234"));
        let md = render_markdown(&reports);
        assert!(md.starts_with("| Model |"));
        assert!(md.contains("| 0.8123 |"));
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        /// Brute-force pairwise AUC with ties counted 0.5.
        fn pairwise_auc(scores: &[f64], positives: &[bool]) -> f64 {
            let pos: Vec<f64> = scores
                .iter()
                .zip(positives)
                .filter(|(_, &p)| p)
                .map(|(s, _)| *s)
                .collect();
            let neg: Vec<f64> = scores
                .iter()
                .zip(positives)
                .filter(|(_, &p)| !p)
                .map(|(s, _)| *s)
                .collect();
            let mut total = 0.0;
            for &sp in &pos {
                for &sn in &neg {
                    if sp > sn {
                        total += 1.0;
                    } else if sp == sn {
                        total += 0.5;
                    }
                }
            }
            total / (pos.len() * neg.len()) as f64
        }

        proptest! {
            #[test]
            fn rank_auc_equals_pairwise(
                raw in proptest::collection::vec((0u8..10, any::<bool>()), 4..200),
            ) {
                // Coarse score grid forces plenty of ties.
                let scores: Vec<f64> = raw.iter().map(|&(s, _)| s as f64 / 10.0).collect();
                let positives: Vec<bool> = raw.iter().map(|&(_, p)| p).collect();
                prop_assume!(positives.iter().any(|&p| p) && positives.iter().any(|&p| !p));
                let rank = binary_auc(&scores, &positives).unwrap();
                let brute = pairwise_auc(&scores, &positives);
                prop_assert!((rank - brute).abs() < 1e-9);
            }

            #[test]
            fn macro_f1_invariant_under_relabeling(
                pairs in proptest::collection::vec((0usize..3, 0usize..3), 6..60),
            ) {
                let y_true: Vec<usize> = pairs.iter().map(|&(t, _)| t).collect();
                let y_pred: Vec<usize> = pairs.iter().map(|&(_, p)| p).collect();
                let cm = confusion(&y_true, &y_pred, 3).unwrap();
                let (_, _, f1) = precision_recall_f1(&cm);
                // permutation 0->2, 1->0, 2->1
                let perm = [2usize, 0, 1];
                let y_true_p: Vec<usize> = y_true.iter().map(|&t| perm[t]).collect();
                let y_pred_p: Vec<usize> = y_pred.iter().map(|&p| perm[p]).collect();
                let cm_p = confusion(&y_true_p, &y_pred_p, 3).unwrap();
                let (_, _, f1_p) = precision_recall_f1(&cm_p);
                prop_assert!((f1 - f1_p).abs() < 1e-12);
            }
        }
    }
}
