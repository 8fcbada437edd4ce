//! Run the full twelve-case experiment grid at one seed and print the
//! accuracy of every case, mirroring the comparison table.
//!
//! Usage: cargo run --release --example case_grid [seed]

fn main() {
    let seed = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(0);
    let results = rfjam::dataset::run_all_cases(seed).expect("grid evaluation");
    println!("{:<20} accuracy", "case");
    for res in &results {
        println!("{:<20} {:>6.2}%", res.case.name, res.accuracy * 100.0);
    }
}
