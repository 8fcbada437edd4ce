//! Simulate all three scenarios at one speed and write the labeled
//! observations to a CSV file.
//!
//! Usage: cargo run --release --example simulate_to_csv [out.csv] [seed]

use std::path::Path;

use rfjam::dataset::{generate_speed_dataset, write_observations};

fn main() {
    let out = std::env::args().nth(1).unwrap_or("observations.csv".into());
    let seed = std::env::args()
        .nth(2)
        .and_then(|s| s.parse().ok())
        .unwrap_or(0);
    let records = generate_speed_dataset(15.0, seed);
    write_observations(Path::new(&out), &records).expect("write csv");
    println!("wrote {} rows to {out}", records.len());
}
