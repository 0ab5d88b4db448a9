//! SMOTE synthetic oversampling, ENN cleaning, and their composition.
//!
//! Both stages share one exact Euclidean nearest-neighbour primitive:
//! SMOTE interpolates new minority rows between same-class neighbours until
//! every class reaches the majority count, ENN then drops rows whose
//! neighbourhood plurality disagrees with their own label. Every synthetic
//! row retains provenance (seed row, neighbour row, interpolation factor) so
//! it can be reconstructed bit for bit.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::preprocess::FilterSummary;
use crate::seeding;
use crate::tabular::LabeledDataset;

/// Brute-force exact Euclidean neighbour index.
#[derive(Debug, Clone)]
pub struct NeighborIndex {
    points: Vec<Vec<f64>>,
}

impl NeighborIndex {
    pub fn new(points: Vec<Vec<f64>>) -> Result<Self> {
        let dim = points.first().map_or(0, Vec::len);
        if !points.is_empty() && dim == 0 {
            return Err(Error::invalid_data("neighbor index needs at least 1 dimension"));
        }
        for (i, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(Error::invalid_data(format!(
                    "point {i} has {} dimensions, expected {dim}",
                    p.len()
                )));
            }
            if p.iter().any(|v| !v.is_finite()) {
                return Err(Error::invalid_data(format!("point {i} is not finite")));
            }
        }
        Ok(NeighborIndex { points })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i]
    }
}

fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let d = x - y;
            d * d
        })
        .sum()
}

/// Indices of the `k` points nearest to `query`, closest first. Ties break
/// toward the lower row index; `exclude` skips one row (the query itself
/// when querying a stored point).
pub fn k_nearest(
    points: &[Vec<f64>],
    query: &[f64],
    k: usize,
    exclude: Option<usize>,
) -> Result<Vec<usize>> {
    if k == 0 {
        return Err(Error::invalid_param("k must be at least 1"));
    }
    let available = points.len() - usize::from(exclude.is_some_and(|e| e < points.len()));
    if k > available {
        return Err(Error::invalid_param(format!(
            "k = {k} exceeds the {available} available points"
        )));
    }
    let mut candidates: Vec<(f64, usize)> = points
        .iter()
        .enumerate()
        .filter(|(i, _)| Some(*i) != exclude)
        .map(|(i, p)| (squared_distance(query, p), i))
        .collect();
    candidates.sort_unstable_by(|a, b| {
        a.0.partial_cmp(&b.0)
            .expect("finite distances")
            .then(a.1.cmp(&b.1))
    });
    Ok(candidates.into_iter().take(k).map(|(_, i)| i).collect())
}

/// [`k_nearest`] over a validated index.
pub fn knn_indices(
    index: &NeighborIndex,
    query: &[f64],
    k: usize,
    exclude: Option<usize>,
) -> Result<Vec<usize>> {
    k_nearest(&index.points, query, k, exclude)
}

/// SMOTE / ENN knobs; the canonical literature defaults are 5 and 3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResampleParams {
    pub smote_k: usize,
    pub enn_k: usize,
    pub seed: u64,
}

impl ResampleParams {
    pub fn new(seed: u64) -> Self {
        ResampleParams {
            smote_k: 5,
            enn_k: 3,
            seed,
        }
    }
}

/// How one synthetic row was built: `row = seed + u * (neighbor - seed)`,
/// with `seed_row` and `neighbor_row` indexing the SMOTE input.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SyntheticProvenance {
    pub seed_row: usize,
    pub neighbor_row: usize,
    pub u: f64,
}

impl SyntheticProvenance {
    /// Recomputes the synthetic row from the original feature matrix using
    /// the exact expression SMOTE used, so equality holds bitwise.
    pub fn reconstruct(&self, features: &[Vec<f64>]) -> Vec<f64> {
        interpolate(&features[self.seed_row], &features[self.neighbor_row], self.u)
    }
}

fn interpolate(seed: &[f64], neighbor: &[f64], u: f64) -> Vec<f64> {
    seed.iter()
        .zip(neighbor)
        .map(|(a, b)| a + u * (b - a))
        .collect()
}

/// SMOTE output: the balanced dataset (originals first, synthetics appended
/// by ascending class code) plus per-synthetic provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct SmoteOutput {
    pub dataset: LabeledDataset,
    pub provenance: Vec<SyntheticProvenance>,
}

/// Oversamples every class below the majority count by interpolating between
/// a uniformly chosen class row and one of its `smote_k` same-class nearest
/// neighbours (`k` capped at class size − 1). Deterministic given the seed.
pub fn smote(ds: &LabeledDataset, params: &ResampleParams) -> Result<SmoteOutput> {
    if params.smote_k == 0 {
        return Err(Error::invalid_param("smote_k must be at least 1"));
    }
    ds.validate()?;
    let counts = ds.class_counts();
    let majority = counts.iter().copied().max().unwrap_or(0);
    for (class, &count) in counts.iter().enumerate() {
        if count < majority && count < 2 {
            return Err(Error::invalid_data(format!(
                "SMOTE requires >= 2 rows per class; class '{}' has {count}",
                ds.class_names[class]
            )));
        }
    }

    let mut out = ds.clone();
    let mut provenance = Vec::new();
    for (class, &count) in counts.iter().enumerate() {
        if count >= majority {
            continue;
        }
        let class_rows: Vec<usize> = (0..ds.n_rows()).filter(|&i| ds.labels[i] == class).collect();
        let k = params.smote_k.min(count - 1);
        let index = NeighborIndex::new(class_rows.iter().map(|&i| ds.features[i].clone()).collect())?;
        let neighbor_lists: Vec<Vec<usize>> = class_rows
            .iter()
            .enumerate()
            .map(|(local, _)| knn_indices(&index, index.point(local), k, Some(local)))
            .collect::<Result<_>>()?;
        let mut rng = seeding::task_rng(params.seed, class as u64);
        for _ in count..majority {
            let local_seed = rng.random_range(0..class_rows.len());
            let local_neighbor = neighbor_lists[local_seed][rng.random_range(0..k)];
            let u: f64 = rng.random();
            let seed_row = class_rows[local_seed];
            let neighbor_row = class_rows[local_neighbor];
            out.features
                .push(interpolate(&ds.features[seed_row], &ds.features[neighbor_row], u));
            out.labels.push(class);
            provenance.push(SyntheticProvenance {
                seed_row,
                neighbor_row,
                u,
            });
        }
    }
    Ok(SmoteOutput {
        dataset: out,
        provenance,
    })
}

/// What ENN did: rows removed, plus classes whose rows were retained because
/// removal would have emptied them.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct EnnReport {
    pub removed: usize,
    pub warnings: Vec<String>,
}

/// Edited-nearest-neighbours cleaning: a row is marked when the plurality
/// label among its `enn_k` nearest neighbours (self excluded, ties toward
/// the smallest label code) differs from its own; all marks are applied in
/// one simultaneous pass. A class that would be emptied is kept whole with
/// a warning.
pub fn enn(ds: &LabeledDataset, enn_k: usize) -> Result<(LabeledDataset, EnnReport)> {
    if enn_k == 0 {
        return Err(Error::invalid_param("enn_k must be at least 1"));
    }
    if ds.n_rows() <= enn_k {
        return Err(Error::invalid_data(format!(
            "ENN with k = {enn_k} needs more than {enn_k} rows, got {}",
            ds.n_rows()
        )));
    }
    let index = NeighborIndex::new(ds.features.clone())?;
    let n_classes = ds.n_classes();
    let marked: Vec<bool> = (0..ds.n_rows())
        .into_par_iter()
        .map(|i| {
            let neighbors = knn_indices(&index, &ds.features[i], enn_k, Some(i))
                .expect("k < n checked above");
            let mut votes = vec![0usize; n_classes];
            for &j in &neighbors {
                votes[ds.labels[j]] += 1;
            }
            let winner = votes
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
                .map(|(label, _)| label)
                .expect("at least one class");
            winner != ds.labels[i]
        })
        .collect();

    let mut keep_class = vec![false; n_classes];
    let mut class_survivors = vec![0usize; n_classes];
    for (i, &m) in marked.iter().enumerate() {
        if !m {
            class_survivors[ds.labels[i]] += 1;
        }
    }
    let mut report = EnnReport::default();
    for (class, &survivors) in class_survivors.iter().enumerate() {
        let present = ds.labels.contains(&class);
        if present && survivors == 0 {
            keep_class[class] = true;
            report.warnings.push(format!(
                "class '{}' kept whole: ENN would have removed every row",
                ds.class_names[class]
            ));
        }
    }
    let keep: Vec<usize> = (0..ds.n_rows())
        .filter(|&i| !marked[i] || keep_class[ds.labels[i]])
        .collect();
    report.removed = ds.n_rows() - keep.len();
    Ok((ds.select_rows(&keep), report))
}

/// SMOTE-ENN: balance with SMOTE, then clean the balanced set with ENN.
/// The summary records rows added by SMOTE and removed by ENN.
pub fn smote_enn(
    ds: &LabeledDataset,
    params: &ResampleParams,
) -> Result<(LabeledDataset, FilterSummary, Vec<SyntheticProvenance>)> {
    let smoted = smote(ds, params)?;
    let synthetic_added = smoted.dataset.n_rows() - ds.n_rows();
    let (cleaned, enn_report) = enn(&smoted.dataset, params.enn_k)?;
    let mut removed_by_column = std::collections::BTreeMap::new();
    removed_by_column.insert("enn".to_string(), enn_report.removed);
    let summary = FilterSummary {
        rows_before: ds.n_rows(),
        rows_after: cleaned.n_rows(),
        rows_added: synthetic_added,
        removed_by_column,
        notes: enn_report.warnings,
    };
    Ok((cleaned, summary, smoted.provenance))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dataset(rows: &[(Vec<f64>, usize)], n_classes: usize) -> LabeledDataset {
        LabeledDataset {
            features: rows.iter().map(|(v, _)| v.clone()).collect(),
            labels: rows.iter().map(|&(_, l)| l).collect(),
            feature_names: (0..rows[0].0.len()).map(|i| format!("f{i}")).collect(),
            class_names: (0..n_classes).map(|c| format!("c{c}")).collect(),
        }
    }

    #[test]
    fn knn_orders_by_distance() {
        let index =
            NeighborIndex::new(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![5.0, 0.0]]).unwrap();
        let got = knn_indices(&index, &[0.4, 0.0], 2, None).unwrap();
        assert_eq!(got, vec![0, 1]);
    }

    #[test]
    fn knn_excludes_requested_row() {
        let index =
            NeighborIndex::new(vec![vec![0.0], vec![1.0], vec![2.0]]).unwrap();
        let got = knn_indices(&index, &[0.0], 2, Some(0)).unwrap();
        assert_eq!(got, vec![1, 2]);
    }

    #[test]
    fn knn_tie_prefers_lower_index() {
        let index =
            NeighborIndex::new(vec![vec![1.0], vec![-1.0], vec![9.0]]).unwrap();
        let got = knn_indices(&index, &[0.0], 1, None).unwrap();
        assert_eq!(got, vec![0]);
    }

    #[test]
    fn knn_rejects_oversized_k() {
        let index = NeighborIndex::new(vec![vec![0.0], vec![1.0]]).unwrap();
        assert!(knn_indices(&index, &[0.0], 2, Some(0)).is_err());
        assert!(knn_indices(&index, &[0.0], 3, None).is_err());
    }

    #[test]
    fn smote_synthetic_lies_on_segment() {
        let ds = dataset(
            &[
                (vec![0.0, 0.0], 0),
                (vec![2.0, 0.0], 0),
                (vec![5.0, 5.0], 1),
                (vec![6.0, 5.0], 1),
                (vec![7.0, 5.0], 1),
            ],
            2,
        );
        let params = ResampleParams {
            smote_k: 1,
            enn_k: 3,
            seed: 5,
        };
        let out = smote(&ds, &params).unwrap();
        assert_eq!(out.dataset.class_counts(), vec![3, 3]);
        let synthetic = &out.dataset.features[5];
        assert_eq!(synthetic[1], 0.0);
        assert!(synthetic[0] >= 0.0 && synthetic[0] < 2.0);
    }

    #[test]
    fn smote_balanced_input_is_identity() {
        let ds = dataset(&[(vec![0.0], 0), (vec![1.0], 0), (vec![5.0], 1), (vec![6.0], 1)], 2);
        let out = smote(&ds, &ResampleParams::new(1)).unwrap();
        assert_eq!(out.dataset, ds);
        assert!(out.provenance.is_empty());
    }

    #[test]
    fn smote_synthetics_stay_in_class_bounding_box() {
        let mut rows = vec![
            (vec![1.0, 10.0], 0),
            (vec![2.0, 11.0], 0),
            (vec![3.0, 9.0], 0),
        ];
        for i in 0..9 {
            rows.push((vec![50.0 + i as f64, -20.0 - i as f64], 1));
        }
        let ds = dataset(&rows, 2);
        let out = smote(&ds, &ResampleParams::new(42)).unwrap();
        assert_eq!(out.dataset.class_counts(), vec![9, 9]);
        assert_eq!(out.provenance.len(), 6);
        for i in ds.n_rows()..out.dataset.n_rows() {
            let row = &out.dataset.features[i];
            assert_eq!(out.dataset.labels[i], 0);
            assert!(row[0] >= 1.0 && row[0] <= 3.0);
            assert!(row[1] >= 9.0 && row[1] <= 11.0);
        }
    }

    #[test]
    fn smote_singleton_minority_errors() {
        let ds = dataset(&[(vec![0.0], 0), (vec![5.0], 1), (vec![6.0], 1)], 2);
        let err = smote(&ds, &ResampleParams::new(1)).unwrap_err();
        assert!(err.to_string().contains(">= 2 rows"));
    }

    #[test]
    fn smote_provenance_reconstructs_bitwise() {
        let rows: Vec<(Vec<f64>, usize)> = (0..20)
            .map(|i| {
                let v = i as f64 * 0.37 + 0.1;
                (vec![v, v * v, (i % 5) as f64], usize::from(i >= 15))
            })
            .collect();
        let ds = dataset(&rows, 2);
        let out = smote(&ds, &ResampleParams::new(99)).unwrap();
        let n_original = ds.n_rows();
        for (offset, prov) in out.provenance.iter().enumerate() {
            let rebuilt = prov.reconstruct(&ds.features);
            let emitted = &out.dataset.features[n_original + offset];
            for (a, b) in rebuilt.iter().zip(emitted) {
                assert_eq!(a.to_bits(), b.to_bits());
            }
        }
    }

    #[test]
    fn smote_is_deterministic() {
        let ds = dataset(
            &[
                (vec![0.0], 0),
                (vec![1.0], 0),
                (vec![2.0], 0),
                (vec![5.0], 1),
                (vec![6.0], 1),
                (vec![7.0], 1),
                (vec![8.0], 1),
                (vec![9.0], 1),
            ],
            2,
        );
        let a = smote(&ds, &ResampleParams::new(7)).unwrap();
        let b = smote(&ds, &ResampleParams::new(7)).unwrap();
        assert_eq!(a, b);
        let bytes_a = serde_json::to_vec(&a.dataset).unwrap();
        let bytes_b = serde_json::to_vec(&b.dataset).unwrap();
        assert_eq!(bytes_a, bytes_b);
    }

    // Hand-enumerated: points 0,1,2,10 with labels 0,0,1,1 and k=3. Every
    // row's three neighbours are all the other rows, so the vote goes 2:1
    // against each row's own label and all four get marked; the empty-class
    // guard then keeps both classes whole.
    #[test]
    fn enn_guard_keeps_classes_that_would_empty() {
        let ds = dataset(
            &[(vec![0.0], 0), (vec![1.0], 0), (vec![2.0], 1), (vec![10.0], 1)],
            2,
        );
        let (out, report) = enn(&ds, 3).unwrap();
        assert_eq!(out, ds);
        assert_eq!(report.removed, 0);
        assert_eq!(report.warnings.len(), 2);
    }

    // Hand-enumerated: two supported clusters plus one stray row at 9.0
    // whose three nearest neighbours (10, 11, 12) all carry the other label.
    #[test]
    fn enn_removes_stray_row() {
        let ds = dataset(
            &[
                (vec![0.0], 0),
                (vec![1.0], 0),
                (vec![2.0], 0),
                (vec![3.0], 0),
                (vec![9.0], 0),
                (vec![10.0], 1),
                (vec![11.0], 1),
                (vec![12.0], 1),
                (vec![13.0], 1),
            ],
            2,
        );
        let (out, report) = enn(&ds, 3).unwrap();
        assert_eq!(report.removed, 1);
        assert_eq!(report.warnings.len(), 0);
        assert!(out.features.iter().all(|r| r[0] != 9.0));
        assert_eq!(out.n_rows(), 8);
    }

    #[test]
    fn enn_separated_clusters_untouched() {
        let ds = dataset(
            &[
                (vec![0.0, 0.0], 0),
                (vec![0.1, 0.0], 0),
                (vec![0.0, 0.1], 0),
                (vec![9.0, 9.0], 1),
                (vec![9.1, 9.0], 1),
                (vec![9.0, 9.1], 1),
            ],
            2,
        );
        let (out, report) = enn(&ds, 3).unwrap();
        assert_eq!(out, ds);
        assert_eq!(report.removed, 0);
    }

    #[test]
    fn enn_lone_point_removed_when_class_survives_elsewhere() {
        let mut rows = vec![(vec![0.0, 0.0], 0)];
        rows.push((vec![0.1, 0.0], 1));
        rows.push((vec![0.0, 0.1], 1));
        rows.push((vec![0.1, 0.1], 1));
        for (dx, dy) in [(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (1.0, 1.0)] {
            rows.push((vec![100.0 + dx, 100.0 + dy], 0));
        }
        let ds = dataset(&rows, 2);
        let (out, report) = enn(&ds, 3).unwrap();
        assert_eq!(report.removed, 1);
        assert!(!out
            .features
            .iter()
            .zip(&out.labels)
            .any(|(r, &l)| r == &vec![0.0, 0.0] && l == 0));
    }

    #[test]
    fn enn_rejects_too_few_rows() {
        let ds = dataset(&[(vec![0.0], 0), (vec![1.0], 1)], 2);
        assert!(enn(&ds, 3).is_err());
    }

    #[test]
    fn smote_enn_well_separated_balanced_is_identity() {
        let ds = dataset(
            &[
                (vec![0.0, 0.0], 0),
                (vec![0.1, 0.0], 0),
                (vec![0.0, 0.1], 0),
                (vec![9.0, 9.0], 1),
                (vec![9.1, 9.0], 1),
                (vec![9.0, 9.1], 1),
            ],
            2,
        );
        let (out, summary, provenance) = smote_enn(&ds, &ResampleParams::new(3)).unwrap();
        assert_eq!(out, ds);
        assert_eq!(summary.rows_added, 0);
        assert_eq!(summary.removed_by_column["enn"], 0);
        assert!(provenance.is_empty());
    }

    #[test]
    fn smote_enn_overlapping_clusters_remove_rows() {
        // Two overlapping blobs; ENN must find disputable rows.
        let mut rng_state = 123456789u64;
        let mut next = || {
            // xorshift; plenty for fixture jitter
            rng_state ^= rng_state << 13;
            rng_state ^= rng_state >> 7;
            rng_state ^= rng_state << 17;
            (rng_state >> 11) as f64 / (1u64 << 53) as f64
        };
        let mut rows = Vec::new();
        for i in 0..40 {
            let class = usize::from(i >= 25);
            let center = if class == 0 { 0.0 } else { 1.0 };
            rows.push((vec![center + next() * 2.0 - 1.0, next() * 2.0 - 1.0], class));
        }
        let ds = dataset(&rows, 2);
        let (_, summary, _) = smote_enn(&ds, &ResampleParams::new(9)).unwrap();
        assert!(summary.rows_added > 0);
        assert!(summary.removed_by_column["enn"] > 0);
    }

    #[test]
    fn smote_stage_counts_hit_majority() {
        let ds = dataset(
            &[
                (vec![0.0], 0),
                (vec![0.5], 0),
                (vec![1.0], 0),
                (vec![5.0], 1),
                (vec![5.5], 1),
                (vec![6.0], 1),
                (vec![6.5], 1),
                (vec![7.0], 1),
                (vec![7.5], 1),
                (vec![8.0], 1),
                (vec![8.5], 1),
                (vec![9.0], 1),
            ],
            2,
        );
        let out = smote(&ds, &ResampleParams::new(4)).unwrap();
        assert_eq!(out.dataset.class_counts(), vec![9, 9]);
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        /// Independent brute-force ENN used as the oracle: full sort per row,
        /// explicit vote table, no shared code with the implementation.
        fn brute_force_enn(ds: &LabeledDataset, k: usize) -> Vec<usize> {
            let n = ds.n_rows();
            let mut marked = vec![false; n];
            for i in 0..n {
                let mut dists: Vec<(f64, usize)> = (0..n)
                    .filter(|&j| j != i)
                    .map(|j| {
                        let d: f64 = ds.features[i]
                            .iter()
                            .zip(&ds.features[j])
                            .map(|(a, b)| (a - b) * (a - b))
                            .sum();
                        (d, j)
                    })
                    .collect();
                dists.sort_by(|a, b| a.partial_cmp(b).unwrap());
                let mut votes = std::collections::BTreeMap::new();
                for &(_, j) in dists.iter().take(k) {
                    *votes.entry(ds.labels[j]).or_insert(0usize) += 1;
                }
                let best = votes
                    .iter()
                    .map(|(&l, &v)| (v, std::cmp::Reverse(l)))
                    .max()
                    .map(|(_, std::cmp::Reverse(l))| l)
                    .unwrap();
                marked[i] = best != ds.labels[i];
            }
            // Empty-class guard.
            let classes = ds.n_classes();
            for class in 0..classes {
                let rows: Vec<usize> =
                    (0..n).filter(|&i| ds.labels[i] == class).collect();
                if !rows.is_empty() && rows.iter().all(|&i| marked[i]) {
                    for i in rows {
                        marked[i] = false;
                    }
                }
            }
            (0..n).filter(|&i| !marked[i]).collect()
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(40))]

            #[test]
            fn enn_matches_brute_force(
                raw in proptest::collection::vec(
                    (proptest::collection::vec(-10.0f64..10.0, 2), 0usize..3),
                    8..60,
                ),
                k in 1usize..5,
            ) {
                let ds = LabeledDataset {
                    features: raw.iter().map(|(v, _)| v.clone()).collect(),
                    labels: raw.iter().map(|&(_, l)| l).collect(),
                    feature_names: vec!["f0".into(), "f1".into()],
                    class_names: vec!["c0".into(), "c1".into(), "c2".into()],
                };
                prop_assume!(ds.n_rows() > k);
                let (out, _) = enn(&ds, k).unwrap();
                let expected = ds.select_rows(&brute_force_enn(&ds, k));
                prop_assert_eq!(out, expected);
            }

            #[test]
            fn smote_reaches_exact_majority_everywhere(
                counts in proptest::collection::vec(2usize..12, 2..4),
                seed in any::<u64>(),
            ) {
                let n_classes = counts.len();
                let mut rows = Vec::new();
                for (class, &count) in counts.iter().enumerate() {
                    for i in 0..count {
                        rows.push((vec![class as f64 * 10.0 + i as f64, i as f64], class));
                    }
                }
                let ds = LabeledDataset {
                    features: rows.iter().map(|(v, _)| v.clone()).collect(),
                    labels: rows.iter().map(|&(_, l)| l).collect(),
                    feature_names: vec!["f0".into(), "f1".into()],
                    class_names: (0..n_classes).map(|c| format!("c{c}")).collect(),
                };
                let out = smote(&ds, &ResampleParams::new(seed)).unwrap();
                let majority = *counts.iter().max().unwrap();
                prop_assert_eq!(out.dataset.class_counts(), vec![majority; n_classes]);
            }
        }
    }
}
