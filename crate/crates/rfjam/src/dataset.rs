//! Observation persistence (CSV), run manifests, and the twelve-case
//! experiment grid: Same / Different / Norm crossed with KNN / RF, with and
//! without the VRS feature.

use std::collections::HashMap;
use std::io::Write as _;
use std::path::Path;

use crate::error::DatasetError;
use crate::features::ObservationRecord;
use crate::ml::{
    knn_classify, rf_train, split_train_test, ConfusionMatrix, FeatureMatrix, FeatureSet,
    MinMaxScaler, RandomForestSpec, SplitSpec, DEFAULT_K,
};
use crate::scenario::{simulate_run, ScenarioConfig, ScenarioKind};

/// Exact CSV header of an observation file.
pub const CSV_HEADER: &str = "t,rssi_dbm,sinr_db,pdr,delta_u_mps,own_speed_mps,vrs,class";

/// Write observation rows as CSV, floats with six decimal places.
pub fn write_observations(path: &Path, records: &[ObservationRecord]) -> Result<(), DatasetError> {
    if records.is_empty() {
        return Err(DatasetError::NoRecords);
    }
    let io_err = |source| DatasetError::Io {
        path: path.display().to_string(),
        source,
    };
    let mut out = String::with_capacity(records.len() * 80);
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&format!(
            "{:.6},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6},{}\n",
            r.t, r.rssi, r.sinr, r.pdr, r.delta_u, r.own_speed, r.vrs, r.class_label
        ));
    }
    let mut f = std::fs::File::create(path).map_err(io_err)?;
    f.write_all(out.as_bytes()).map_err(io_err)
}

/// Read an observation CSV written by [`write_observations`].
pub fn read_observations(path: &Path) -> Result<Vec<ObservationRecord>, DatasetError> {
    let text = std::fs::read_to_string(path).map_err(|source| DatasetError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let malformed = |line: usize, reason: &str| DatasetError::Malformed {
        path: path.display().to_string(),
        line,
        reason: reason.to_string(),
    };
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header == CSV_HEADER => {}
        _ => return Err(malformed(1, "missing or wrong header")),
    }
    let mut records = Vec::new();
    for (i, line) in lines {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 8 {
            return Err(malformed(i + 1, "expected 8 fields"));
        }
        let num = |j: usize| -> Result<f64, DatasetError> {
            fields[j]
                .parse::<f64>()
                .map_err(|_| malformed(i + 1, &format!("bad float in column {}", j + 1)))
        };
        let class = ScenarioKind::from_str_opt(fields[7])
            .ok_or_else(|| malformed(i + 1, "unknown class"))?;
        records.push(ObservationRecord {
            t: num(0)?,
            rssi: num(1)?,
            sinr: num(2)?,
            pdr: num(3)?,
            delta_u: num(4)?,
            own_speed: num(5)?,
            vrs: num(6)?,
            class_label: class,
        });
    }
    if records.is_empty() {
        return Err(DatasetError::NoRecords);
    }
    Ok(records)
}

/// One dataset file tracked by a manifest.
#[derive(Debug, Clone, PartialEq)]
pub struct ManifestEntry {
    pub path: String,
    pub kind: ScenarioKind,
    pub speed: f64,
    pub seed: u64,
}

/// Write a run manifest in the same key = value format as the configs.
pub fn write_manifest(path: &Path, entries: &[ManifestEntry]) -> Result<(), DatasetError> {
    let mut out = String::new();
    for (i, e) in entries.iter().enumerate() {
        out.push_str(&format!("run.{i}.path = {}\n", e.path));
        out.push_str(&format!("run.{i}.kind = {}\n", e.kind));
        out.push_str(&format!("run.{i}.speed = {}\n", e.speed));
        out.push_str(&format!("run.{i}.seed = {}\n", e.seed));
    }
    std::fs::write(path, out).map_err(|source| DatasetError::Io {
        path: path.display().to_string(),
        source,
    })
}

// --- experiment cases -----------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classifier {
    Knn,
    Rf,
}

impl std::fmt::Display for Classifier {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Classifier::Knn => "KNN",
            Classifier::Rf => "RF",
        })
    }
}

/// One cell of the experiment grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentCase {
    pub name: String,
    pub train_speed: f64,
    pub test_speed: f64,
    pub use_vrs: bool,
    pub normalize: bool,
    pub classifier: Classifier,
}

impl ExperimentCase {
    /// The twelve named cases: Same and Norm train and test at 15 m/s from one
    /// split dataset; Different trains at 15 and tests on separate 25 m/s runs.
    pub fn all() -> Vec<ExperimentCase> {
        let mut cases = Vec::new();
        for family in ["Same", "Different", "Norm"] {
            for clf in [Classifier::Knn, Classifier::Rf] {
                for use_vrs in [true, false] {
                    let suffix = if use_vrs { "-VRS" } else { "" };
                    cases.push(ExperimentCase {
                        name: format!("{family}_{clf}{suffix}"),
                        train_speed: 15.0,
                        test_speed: if family == "Different" { 25.0 } else { 15.0 },
                        use_vrs,
                        normalize: family == "Norm",
                        classifier: clf,
                    });
                }
            }
        }
        cases
    }

    pub fn from_name(name: &str) -> Result<ExperimentCase, DatasetError> {
        Self::all()
            .into_iter()
            .find(|c| c.name == name)
            .ok_or_else(|| DatasetError::UnknownCase {
                name: name.to_string(),
            })
    }

    /// Same case at another speed range (the high-speed variants train and
    /// test at 25 m/s).
    pub fn with_speeds(mut self, train_speed: f64, test_speed: f64) -> ExperimentCase {
        self.train_speed = train_speed;
        self.test_speed = test_speed;
        self
    }

    pub fn feature_set(&self) -> FeatureSet {
        if self.use_vrs {
            FeatureSet::WithVrs
        } else {
            FeatureSet::WithoutVrs
        }
    }
}

/// Simulate the three scenarios at one speed and concatenate their rows.
pub fn generate_speed_dataset(speed: f64, seed: u64) -> Vec<ObservationRecord> {
    let mut records = Vec::new();
    for kind in ScenarioKind::all() {
        let run_seed = seed
            .wrapping_mul(0x0100_0000_01b3)
            .wrapping_add(kind.index() as u64 + 1);
        let cfg = ScenarioConfig::new(kind, speed, run_seed);
        records.extend(simulate_run(&cfg));
    }
    records
}

/// Cache of generated datasets keyed by (speed, seed), so an experiment grid
/// regenerates each speed range once.
#[derive(Debug, Default)]
pub struct DatasetCache {
    map: HashMap<(u64, u64), Vec<ObservationRecord>>,
}

impl DatasetCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&mut self, speed: f64, seed: u64) -> &[ObservationRecord] {
        let key = ((speed * 1000.0).round() as u64, seed);
        self.map
            .entry(key)
            .or_insert_with(|| generate_speed_dataset(speed, seed))
    }
}

/// Train and test feature matrices for one case.
#[derive(Debug, Clone)]
pub struct CaseData {
    pub train: FeatureMatrix,
    pub test: FeatureMatrix,
}

/// Assemble the train/test pair for a case: the case's speed selection, VRS
/// inclusion, optional normalization, and the stratified split. Same-speed
/// cases split one dataset; cross-speed cases test on separate runs.
pub fn build_case_dataset(
    case: &ExperimentCase,
    seed: u64,
    cache: &mut DatasetCache,
) -> Result<CaseData, DatasetError> {
    let set = case.feature_set();
    let split = SplitSpec {
        seed,
        ..SplitSpec::default()
    };
    let train_full = FeatureMatrix::from_records(cache.get(case.train_speed, seed), set);
    let (mut train, mut test) = split_train_test(&train_full, &split)?;
    if (case.test_speed - case.train_speed).abs() > 1e-9 {
        // Physically separate runs for the test speed; keep its split's test
        // share so no generation leaks between the two sides.
        let test_full =
            FeatureMatrix::from_records(cache.get(case.test_speed, seed.wrapping_add(1)), set);
        let (_, cross_test) = split_train_test(&test_full, &split)?;
        test = cross_test;
    }
    if case.normalize {
        let scaler = MinMaxScaler::fit(&train)?;
        test = scaler.transform(&test)?;
        train = scaler.transform(&train)?;
    }
    Ok(CaseData { train, test })
}

/// Outcome of one evaluated case.
#[derive(Debug, Clone)]
pub struct CaseResult {
    pub case: ExperimentCase,
    pub matrix: ConfusionMatrix,
    pub accuracy: f64,
}

/// Build the case's data, fit its classifier, and evaluate on the test side.
pub fn run_case(
    case: &ExperimentCase,
    seed: u64,
    k: usize,
    n_trees: usize,
    cache: &mut DatasetCache,
) -> Result<CaseResult, DatasetError> {
    let data = build_case_dataset(case, seed, cache)?;
    let predictions = match case.classifier {
        Classifier::Knn => knn_classify(&data.train, &data.test, k)?,
        Classifier::Rf => {
            let spec = RandomForestSpec {
                n_trees,
                seed: seed.wrapping_add(0x5f),
                ..RandomForestSpec::default()
            };
            rf_train(&data.train, &spec)?.classify(&data.test)?
        }
    };
    let matrix = ConfusionMatrix::from_predictions(&predictions, &data.test.labels)?;
    Ok(CaseResult {
        case: case.clone(),
        accuracy: matrix.accuracy(),
        matrix,
    })
}

/// Run every named case at one seed with default hyperparameters.
pub fn run_all_cases(seed: u64) -> Result<Vec<CaseResult>, DatasetError> {
    let mut cache = DatasetCache::new();
    ExperimentCase::all()
        .iter()
        .map(|c| run_case(c, seed, DEFAULT_K, 100, &mut cache))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vrs::{NUM_A, NUM_NA};

    fn sample_records(n: usize) -> Vec<ObservationRecord> {
        (0..n)
            .map(|i| ObservationRecord {
                t: i as f64 * 0.1,
                rssi: -40.0 - i as f64,
                sinr: 20.0 + i as f64 * 0.5,
                pdr: 1.0 - 0.01 * i as f64,
                delta_u: 5.0,
                own_speed: 15.0,
                vrs: if i % 2 == 0 { NUM_NA } else { NUM_A },
                class_label: ScenarioKind::from_index(i % 3),
            })
            .collect()
    }

    #[test]
    fn csv_roundtrip_preserves_rows() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("obs.csv");
        let records = sample_records(30);
        write_observations(&path, &records).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text.lines().next().unwrap(), CSV_HEADER);
        assert_eq!(text.lines().count(), 31, "header plus one line per row");
        let back = read_observations(&path).unwrap();
        assert_eq!(back.len(), records.len());
        for (a, b) in back.iter().zip(&records) {
            assert!((a.t - b.t).abs() < 1e-6);
            assert!((a.rssi - b.rssi).abs() < 1e-6);
            assert!((a.sinr - b.sinr).abs() < 1e-6);
            assert!((a.pdr - b.pdr).abs() < 1e-6);
            assert_eq!(a.class_label, b.class_label);
        }
    }

    #[test]
    fn csv_six_decimal_floats() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("obs.csv");
        write_observations(&path, &sample_records(2)).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let row = text.lines().nth(1).unwrap();
        assert_eq!(
            row,
            "0.000000,-40.000000,20.000000,1.000000,5.000000,15.000000,0.000000,Interference"
        );
    }

    #[test]
    fn csv_rejects_empty_and_malformed() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("obs.csv");
        assert!(matches!(
            write_observations(&path, &[]),
            Err(DatasetError::NoRecords)
        ));
        std::fs::write(&path, "wrong,header\n1,2\n").unwrap();
        assert!(matches!(
            read_observations(&path),
            Err(DatasetError::Malformed { line: 1, .. })
        ));
        std::fs::write(&path, format!("{CSV_HEADER}\n1,2,3\n")).unwrap();
        assert!(matches!(
            read_observations(&path),
            Err(DatasetError::Malformed { line: 2, .. })
        ));
        std::fs::write(
            &path,
            format!("{CSV_HEADER}\n0,0,0,0,0,0,0,NotAClass\n"),
        )
        .unwrap();
        assert!(matches!(
            read_observations(&path),
            Err(DatasetError::Malformed { line: 2, .. })
        ));
    }

    #[test]
    fn twelve_cases_with_expected_speeds() {
        let cases = ExperimentCase::all();
        assert_eq!(cases.len(), 12);
        let names: Vec<&str> = cases.iter().map(|c| c.name.as_str()).collect();
        for expect in [
            "Same_KNN-VRS",
            "Same_RF-VRS",
            "Same_KNN",
            "Same_RF",
            "Different_KNN-VRS",
            "Different_RF",
            "Norm_KNN-VRS",
            "Norm_RF",
        ] {
            assert!(names.contains(&expect), "missing {expect}");
        }
        for c in &cases {
            if c.name.starts_with("Different") {
                assert_eq!(c.train_speed, 15.0);
                assert_eq!(c.test_speed, 25.0);
            } else {
                assert_eq!(c.train_speed, c.test_speed);
                assert_eq!(c.train_speed, 15.0);
            }
            assert_eq!(c.normalize, c.name.starts_with("Norm"));
            assert_eq!(c.use_vrs, c.name.ends_with("-VRS"));
        }
    }

    #[test]
    fn unknown_case_rejected() {
        assert!(matches!(
            ExperimentCase::from_name("Sideways_KNN"),
            Err(DatasetError::UnknownCase { .. })
        ));
        let c = ExperimentCase::from_name("Different_RF-VRS").unwrap();
        assert_eq!(c.classifier, Classifier::Rf);
        assert!(c.use_vrs);
    }

    #[test]
    fn speed_dataset_is_deterministic_and_complete() {
        let a = generate_speed_dataset(15.0, 3);
        let b = generate_speed_dataset(15.0, 3);
        assert_eq!(a.len(), 3000);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x, y);
        }
        let mut counts = [0usize; 3];
        for r in &a {
            counts[r.class_label.index()] += 1;
        }
        assert_eq!(counts, [1000, 1000, 1000]);
    }

    #[test]
    fn case_dataset_shapes() {
        let mut cache = DatasetCache::new();
        let same = ExperimentCase::from_name("Same_KNN-VRS").unwrap();
        let data = build_case_dataset(&same, 5, &mut cache).unwrap();
        assert_eq!(data.train.len() + data.test.len(), 3000);
        assert_eq!(data.train.width(), 5);
        assert!((data.train.len() as i64 - 941).unsigned_abs() <= 20);

        let diff = ExperimentCase::from_name("Different_KNN").unwrap();
        let data = build_case_dataset(&diff, 5, &mut cache).unwrap();
        assert_eq!(data.train.width(), 4);
        // Test side comes from the separate 25 m/s runs.
        assert!(data.test.len() > 1900);

        let norm = ExperimentCase::from_name("Norm_RF-VRS").unwrap();
        let data = build_case_dataset(&norm, 5, &mut cache).unwrap();
        for row in data.train.rows.iter().chain(&data.test.rows) {
            for &v in row {
                assert!((-0.1..=1.1).contains(&v), "normalized value {v}");
            }
        }
    }
}
