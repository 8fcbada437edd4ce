//! Simulate one scenario and print the per-observation link metrics: RSSI,
//! SINR, packet delivery ratio, estimated relative speed, and the VRS label.
//!
//! Usage: cargo run --release --example link_trace [Interference|SmartAttack|ConstantAttack] [seed]

use rfjam::scenario::{simulate_run, ScenarioConfig, ScenarioKind};

fn main() {
    let kind = std::env::args()
        .nth(1)
        .and_then(|s| ScenarioKind::from_str_opt(&s))
        .unwrap_or(ScenarioKind::ConstantAttack);
    let seed = std::env::args()
        .nth(2)
        .and_then(|s| s.parse().ok())
        .unwrap_or(0);
    let cfg = ScenarioConfig::new(kind, 15.0, seed);
    let records = simulate_run(&cfg);
    println!("{kind} run, {} observations", records.len());
    println!(
        "{:>6} {:>9} {:>9} {:>6} {:>8} {:>5}",
        "t", "rssi", "sinr", "pdr", "delta_u", "vrs"
    );
    for rec in records.iter().step_by(25) {
        println!(
            "{:>6.1} {:>9.2} {:>9.2} {:>6.2} {:>8.2} {:>5.0}",
            rec.t, rec.rssi, rec.sinr, rec.pdr, rec.delta_u, rec.vrs
        );
    }
}
