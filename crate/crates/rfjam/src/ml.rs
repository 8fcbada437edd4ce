//! From-scratch classifiers over the observation features: k-nearest-neighbor
//! and a random forest, plus the stratified train/test split, min-max feature
//! scaling, and confusion-matrix evaluation.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::MlError;
use crate::features::ObservationRecord;
use crate::scenario::ScenarioKind;

/// Which feature columns a classifier sees.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FeatureSet {
    /// RSSI, SINR, PDR, relative speed, VRS label.
    WithVrs,
    /// RSSI, SINR, PDR, relative speed.
    WithoutVrs,
}

impl FeatureSet {
    pub fn width(&self) -> usize {
        match self {
            FeatureSet::WithVrs => 5,
            FeatureSet::WithoutVrs => 4,
        }
    }
}

/// Project one observation onto the selected feature columns.
pub fn feature_row(rec: &ObservationRecord, set: FeatureSet) -> Vec<f64> {
    let mut row = vec![rec.rssi, rec.sinr, rec.pdr, rec.delta_u];
    if set == FeatureSet::WithVrs {
        row.push(rec.vrs);
    }
    row
}

/// Dense feature rows with their class labels.
#[derive(Debug, Clone, Default)]
pub struct FeatureMatrix {
    pub rows: Vec<Vec<f64>>,
    pub labels: Vec<ScenarioKind>,
}

impl FeatureMatrix {
    pub fn from_records(records: &[ObservationRecord], set: FeatureSet) -> Self {
        Self {
            rows: records.iter().map(|r| feature_row(r, set)).collect(),
            labels: records.iter().map(|r| r.class_label).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn width(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }
}

/// Stratified split parameters. The default fraction reproduces a 941-row
/// training set out of 3000 observations.
#[derive(Debug, Clone, Copy)]
pub struct SplitSpec {
    pub train_fraction: f64,
    pub seed: u64,
}

impl Default for SplitSpec {
    fn default() -> Self {
        Self {
            train_fraction: 941.0 / 3000.0,
            seed: 0,
        }
    }
}

/// Split per class: each class contributes round(n_c * fraction) training
/// rows, membership drawn at random from the class under the split seed.
pub fn split_train_test(
    data: &FeatureMatrix,
    spec: &SplitSpec,
) -> Result<(FeatureMatrix, FeatureMatrix), MlError> {
    if data.is_empty() {
        return Err(MlError::EmptyTrain);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut train_mask = vec![false; data.len()];
    for class in [
        ScenarioKind::Interference,
        ScenarioKind::SmartAttack,
        ScenarioKind::ConstantAttack,
    ] {
        let mut idx: Vec<usize> = (0..data.len())
            .filter(|&i| data.labels[i] == class)
            .collect();
        if idx.is_empty() {
            continue;
        }
        let take = (idx.len() as f64 * spec.train_fraction).round() as usize;
        let take = take.min(idx.len());
        idx.shuffle(&mut rng);
        for &i in &idx[..take] {
            train_mask[i] = true;
        }
    }
    let mut train = FeatureMatrix::default();
    let mut test = FeatureMatrix::default();
    for i in 0..data.len() {
        let dst = if train_mask[i] { &mut train } else { &mut test };
        dst.rows.push(data.rows[i].clone());
        dst.labels.push(data.labels[i]);
    }
    if train.is_empty() {
        return Err(MlError::EmptyTrain);
    }
    Ok((train, test))
}

/// Per-feature min-max scaler fitted on training data. Transformed values are
/// clamped to [-0.1, 1.1]; a constant feature maps to 0.5.
#[derive(Debug, Clone)]
pub struct MinMaxScaler {
    pub mins: Vec<f64>,
    pub maxs: Vec<f64>,
}

impl MinMaxScaler {
    pub fn fit(data: &FeatureMatrix) -> Result<Self, MlError> {
        if data.is_empty() {
            return Err(MlError::EmptyTrain);
        }
        let w = data.width();
        let mut mins = vec![f64::INFINITY; w];
        let mut maxs = vec![f64::NEG_INFINITY; w];
        for row in &data.rows {
            for (j, &v) in row.iter().enumerate() {
                mins[j] = mins[j].min(v);
                maxs[j] = maxs[j].max(v);
            }
        }
        Ok(Self { mins, maxs })
    }

    pub fn transform_row(&self, row: &[f64]) -> Result<Vec<f64>, MlError> {
        if row.len() != self.mins.len() {
            return Err(MlError::WidthMismatch {
                expected: self.mins.len(),
                got: row.len(),
            });
        }
        Ok(row
            .iter()
            .enumerate()
            .map(|(j, &v)| {
                let span = self.maxs[j] - self.mins[j];
                if span <= 0.0 {
                    0.5
                } else {
                    ((v - self.mins[j]) / span).clamp(-0.1, 1.1)
                }
            })
            .collect())
    }

    pub fn transform(&self, data: &FeatureMatrix) -> Result<FeatureMatrix, MlError> {
        let rows = data
            .rows
            .iter()
            .map(|r| self.transform_row(r))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(FeatureMatrix {
            rows,
            labels: data.labels.clone(),
        })
    }
}

fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Default neighborhood size.
pub const DEFAULT_K: usize = 5;

/// Classify every test row by majority vote over its k nearest training rows.
/// Vote ties break to the class with the smaller summed neighbor distance,
/// then to the fixed class order.
pub fn knn_classify(
    train: &FeatureMatrix,
    test: &FeatureMatrix,
    k: usize,
) -> Result<Vec<ScenarioKind>, MlError> {
    if train.is_empty() {
        return Err(MlError::EmptyTrain);
    }
    if k == 0 || k > train.len() {
        return Err(MlError::InvalidK { k, n: train.len() });
    }
    let w = train.width();
    let mut out = Vec::with_capacity(test.len());
    for row in &test.rows {
        if row.len() != w {
            return Err(MlError::WidthMismatch {
                expected: w,
                got: row.len(),
            });
        }
        let mut dists: Vec<(f64, usize)> = train
            .rows
            .iter()
            .enumerate()
            .map(|(i, t)| (euclidean(row, t), i))
            .collect();
        dists.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let mut votes = [0usize; 3];
        let mut dist_sums = [0.0f64; 3];
        for &(d, i) in &dists[..k] {
            let c = train.labels[i].index();
            votes[c] += 1;
            dist_sums[c] += d;
        }
        let best = (0..3)
            .max_by(|&a, &b| {
                votes[a]
                    .cmp(&votes[b])
                    .then(dist_sums[b].total_cmp(&dist_sums[a]))
                    .then(b.cmp(&a))
            })
            .unwrap();
        out.push(ScenarioKind::from_index(best));
    }
    Ok(out)
}

// --- random forest --------------------------------------------------------

#[derive(Debug, Clone)]
enum TreeNode {
    Leaf(ScenarioKind),
    Split {
        feature: usize,
        threshold: f64,
        left: Box<TreeNode>,
        right: Box<TreeNode>,
    },
}

#[derive(Debug, Clone)]
pub struct RandomForestSpec {
    pub n_trees: usize,
    pub max_depth: usize,
    pub min_leaf: usize,
    pub seed: u64,
}

impl Default for RandomForestSpec {
    fn default() -> Self {
        Self {
            n_trees: 100,
            max_depth: 16,
            min_leaf: 1,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RandomForest {
    trees: Vec<TreeNode>,
    width: usize,
}

fn class_counts(labels: &[ScenarioKind], idx: &[usize]) -> [usize; 3] {
    let mut counts = [0usize; 3];
    for &i in idx {
        counts[labels[i].index()] += 1;
    }
    counts
}

fn majority(counts: &[usize; 3]) -> ScenarioKind {
    let best = (0..3)
        .max_by(|&a, &b| counts[a].cmp(&counts[b]).then(b.cmp(&a)))
        .unwrap();
    ScenarioKind::from_index(best)
}

fn gini(counts: &[usize; 3], total: usize) -> f64 {
    if total == 0 {
        return 0.0;
    }
    let t = total as f64;
    1.0 - counts
        .iter()
        .map(|&c| {
            let p = c as f64 / t;
            p * p
        })
        .sum::<f64>()
}

/// Best threshold on one feature by a sorted sweep; returns
/// (weighted impurity, threshold) if a proper split exists.
fn best_split_on_feature(
    data: &FeatureMatrix,
    idx: &[usize],
    feature: usize,
) -> Option<(f64, f64)> {
    let mut vals: Vec<(f64, usize)> = idx
        .iter()
        .map(|&i| (data.rows[i][feature], data.labels[i].index()))
        .collect();
    vals.sort_by(|a, b| a.0.total_cmp(&b.0));
    let total = vals.len();
    let mut right = [0usize; 3];
    for &(_, c) in &vals {
        right[c] += 1;
    }
    let mut left = [0usize; 3];
    let mut best: Option<(f64, f64)> = None;
    for s in 0..total - 1 {
        let c = vals[s].1;
        left[c] += 1;
        right[c] -= 1;
        if vals[s + 1].0 <= vals[s].0 {
            continue;
        }
        let n_l = s + 1;
        let n_r = total - n_l;
        let score = (n_l as f64 * gini(&left, n_l) + n_r as f64 * gini(&right, n_r))
            / total as f64;
        let threshold = 0.5 * (vals[s].0 + vals[s + 1].0);
        if best.is_none_or(|(b, _)| score < b) {
            best = Some((score, threshold));
        }
    }
    best
}

fn grow_tree(
    data: &FeatureMatrix,
    idx: &[usize],
    depth: usize,
    spec: &RandomForestSpec,
    n_candidates: usize,
    rng: &mut ChaCha8Rng,
) -> TreeNode {
    let counts = class_counts(&data.labels, idx);
    let pure = counts.iter().filter(|&&c| c > 0).count() <= 1;
    if pure || depth >= spec.max_depth || idx.len() <= spec.min_leaf {
        return TreeNode::Leaf(majority(&counts));
    }
    let w = data.width();
    let mut features: Vec<usize> = (0..w).collect();
    features.shuffle(rng);
    features.truncate(n_candidates);
    let mut best: Option<(f64, usize, f64)> = None;
    for &f in &features {
        if let Some((score, threshold)) = best_split_on_feature(data, idx, f) {
            if best.is_none_or(|(b, _, _)| score < b) {
                best = Some((score, f, threshold));
            }
        }
    }
    let Some((_, feature, threshold)) = best else {
        return TreeNode::Leaf(majority(&counts));
    };
    let (left_idx, right_idx): (Vec<usize>, Vec<usize>) = idx
        .iter()
        .partition(|&&i| data.rows[i][feature] <= threshold);
    if left_idx.is_empty() || right_idx.is_empty() {
        return TreeNode::Leaf(majority(&counts));
    }
    TreeNode::Split {
        feature,
        threshold,
        left: Box::new(grow_tree(data, &left_idx, depth + 1, spec, n_candidates, rng)),
        right: Box::new(grow_tree(data, &right_idx, depth + 1, spec, n_candidates, rng)),
    }
}

/// Train a forest of Gini-impurity decision trees on bootstrap resamples,
/// considering ceil(sqrt(width)) random features at every split.
pub fn rf_train(train: &FeatureMatrix, spec: &RandomForestSpec) -> Result<RandomForest, MlError> {
    if train.is_empty() {
        return Err(MlError::EmptyTrain);
    }
    let n = train.len();
    let n_candidates = (train.width() as f64).sqrt().ceil() as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let trees = (0..spec.n_trees)
        .map(|_| {
            let idx: Vec<usize> = (0..n).map(|_| rng.gen_range(0..n)).collect();
            grow_tree(train, &idx, 0, spec, n_candidates.max(1), &mut rng)
        })
        .collect();
    Ok(RandomForest {
        trees,
        width: train.width(),
    })
}

fn tree_predict(node: &TreeNode, row: &[f64]) -> ScenarioKind {
    match node {
        TreeNode::Leaf(c) => *c,
        TreeNode::Split {
            feature,
            threshold,
            left,
            right,
        } => {
            if row[*feature] <= *threshold {
                tree_predict(left, row)
            } else {
                tree_predict(right, row)
            }
        }
    }
}

impl RandomForest {
    /// Majority vote across the trees; ties break to the fixed class order.
    pub fn classify(&self, test: &FeatureMatrix) -> Result<Vec<ScenarioKind>, MlError> {
        let mut out = Vec::with_capacity(test.len());
        for row in &test.rows {
            if row.len() != self.width {
                return Err(MlError::WidthMismatch {
                    expected: self.width,
                    got: row.len(),
                });
            }
            let mut votes = [0usize; 3];
            for tree in &self.trees {
                votes[tree_predict(tree, row).index()] += 1;
            }
            out.push(majority(&votes));
        }
        Ok(out)
    }
}

// --- evaluation -----------------------------------------------------------

/// 3x3 confusion counts, rows indexed by predicted class, columns by actual.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConfusionMatrix {
    pub counts: [[usize; 3]; 3],
}

impl ConfusionMatrix {
    pub fn from_predictions(
        predictions: &[ScenarioKind],
        truths: &[ScenarioKind],
    ) -> Result<Self, MlError> {
        if predictions.len() != truths.len() {
            return Err(MlError::LengthMismatch {
                predictions: predictions.len(),
                truths: truths.len(),
            });
        }
        let mut counts = [[0usize; 3]; 3];
        for (p, t) in predictions.iter().zip(truths) {
            counts[p.index()][t.index()] += 1;
        }
        Ok(Self { counts })
    }

    pub fn total(&self) -> usize {
        self.counts.iter().flatten().sum()
    }

    /// Correct fraction: the diagonal over the total.
    pub fn accuracy(&self) -> f64 {
        let correct: usize = (0..3).map(|i| self.counts[i][i]).sum();
        correct as f64 / self.total() as f64
    }

    /// Fraction of actual `actual`-class rows predicted as `predicted`.
    pub fn rate(&self, predicted: ScenarioKind, actual: ScenarioKind) -> f64 {
        let col: usize = (0..3).map(|i| self.counts[i][actual.index()]).sum();
        if col == 0 {
            return 0.0;
        }
        self.counts[predicted.index()][actual.index()] as f64 / col as f64
    }
}

impl std::fmt::Display for ConfusionMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "predicted \\ actual  Interf  Smart  Const")?;
        let names = ["Interf", "Smart", "Const"];
        for (i, name) in names.iter().enumerate() {
            writeln!(
                f,
                "{name:<19} {:>6} {:>6} {:>6}",
                self.counts[i][0], self.counts[i][1], self.counts[i][2]
            )?;
        }
        Ok(())
    }
}
