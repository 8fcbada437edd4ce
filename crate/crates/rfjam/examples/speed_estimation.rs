//! Pilot-based relative speed estimation on a synthetic two-link channel:
//! sweep the true relative speed and compare against the estimate recovered
//! from the rotating jammer tap.
//!
//! Usage: cargo run --release --example speed_estimation

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rfjam::channel::{self, make_tap, RadioConfig, RayGeometry, RayKind};
use rfjam::estimator::{
    estimate_relative_speed, mmse_estimate_combined, separate_jammer_los, PilotBlock,
    SpeedReading, DEFAULT_BLOCK_INTERVAL,
};

fn main() {
    let mut radio = RadioConfig::default();
    radio.noise_power = 1e-10;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let pilots = vec![1.0; 32];
    let jam_syms = vec![1.0; 32];
    let taps = |dist: f64, du: f64| {
        let los = RayGeometry::new(RayKind::Los, dist, 1.0).unwrap();
        let nlos = RayGeometry::new(RayKind::Nlos, dist + 150.0, 1.0).unwrap();
        [
            make_tap(los, Complex64::new(0.0, 0.0), &radio, du).unwrap(),
            make_tap(nlos, Complex64::new(0.0, 0.0), &radio, du).unwrap(),
        ]
    };
    let taps_tx = taps(35.0, 0.0);
    let dt = DEFAULT_BLOCK_INTERVAL;
    println!("{:>8} {:>10} {:>10}", "true", "estimate", "f_d (Hz)");
    for du in [0.0, 5.0, 10.0, 15.0, 25.0, 33.33] {
        let mut h2 = Vec::new();
        for b in 0..8 {
            let d_jam = 120.0 - du * b as f64 * dt;
            let taps_jam = taps(d_jam, du);
            let received = channel::received_block(
                &taps_tx, &taps_jam, &pilots, &jam_syms, &radio, &mut rng,
            )
            .unwrap();
            let block = PilotBlock::new(pilots.clone(), received, radio.noise_power, radio.n_rays);
            let z = mmse_estimate_combined(&block).unwrap();
            h2.push(separate_jammer_los(&z, taps_tx[0].value, radio.tx_power_p1));
        }
        match estimate_relative_speed(&h2, dt, radio.f_c, 1e-9).unwrap() {
            SpeedReading::Estimate(e) => {
                println!("{du:>8.2} {:>10.3} {:>10.1}", e.delta_u_hat, e.f_d_hat.abs())
            }
            SpeedReading::NoJammerSignal => println!("{du:>8.2} {:>10} {:>10}", "none", "-"),
        }
    }
}
