//! Label a few relative speed traces with the VRS pass and print the
//! resulting attack / not-attack sequences.
//!
//! Usage: cargo run --example vrs_labeling

use rfjam::vrs::{vrs_labels, VrsInput, VrsLabel};

fn show(name: &str, delta_u: &[f64]) {
    let own = vec![15.0; delta_u.len()];
    let out = vrs_labels(&VrsInput::new(delta_u.to_vec(), own, 0.5).unwrap()).unwrap();
    let labels: Vec<&str> = out
        .labels
        .iter()
        .map(|l| match l {
            VrsLabel::Na => "NA",
            VrsLabel::A => "A",
        })
        .collect();
    println!("{name:<22} du={delta_u:?}");
    println!("{:<22} -> {}", "", labels.join(" "));
}

fn main() {
    show("steady cruise", &[15.0; 8]);
    show("constant follower", &[0.0; 8]);
    show("pursuer reaching", &[9.0, 9.0, 9.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
    show("isolated dip", &[15.0, 15.0, 0.0, 15.0, 15.0]);
    show("speed change", &[15.0, 15.0, 12.0, 12.0, 12.0, 15.0, 15.0, 15.0]);
}
