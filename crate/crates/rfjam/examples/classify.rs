//! Train one experiment case and print its confusion matrix and accuracy,
//! with and without the VRS feature.
//!
//! Usage: cargo run --release --example classify [Same_KNN|Same_RF|Different_KNN|...] [seed]

use rfjam::dataset::{run_case, DatasetCache, ExperimentCase};

fn main() {
    let name = std::env::args().nth(1).unwrap_or("Same_KNN".into());
    let seed = std::env::args()
        .nth(2)
        .and_then(|s| s.parse().ok())
        .unwrap_or(0);
    let mut cache = DatasetCache::new();
    for suffix in ["-VRS", ""] {
        let case = ExperimentCase::from_name(&format!("{name}{suffix}")).expect("known case");
        let res = run_case(&case, seed, 5, 100, &mut cache).expect("case evaluation");
        println!("{}: {:.2}%", res.case.name, res.accuracy * 100.0);
        print!("{}", res.matrix);
    }
}
