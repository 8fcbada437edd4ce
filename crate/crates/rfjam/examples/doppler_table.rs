//! Print the Doppler shift of a 5.9 GHz carrier over a range of relative
//! speeds, head-on and at an angle.
//!
//! Usage: cargo run --example doppler_table

use rfjam::channel::doppler_shift;

fn main() {
    let f_c = 5.9e9;
    println!("{:>10} {:>12} {:>12}", "km/h", "f_d @ 0 deg", "f_d @ 60 deg");
    for kmh in [10.0, 30.0, 50.0, 80.0, 120.0, 160.0] {
        let u = kmh / 3.6;
        println!(
            "{kmh:>10.0} {:>10.1} Hz {:>10.1} Hz",
            doppler_shift(u, 1.0, f_c),
            doppler_shift(u, 0.5, f_c),
        );
    }
}
