//! Pilot-based estimation of the combined transmitter + jammer channel and of
//! the jammer-receiver relative speed.
//!
//! The receiver sends known BPSK pilots through the combined channel and forms
//! the linear MMSE estimate of the tap vector. Because transmitter and
//! receiver move at the same speed, the transmitter LOS contribution is a
//! known static complex value; subtracting it isolates the jammer LOS sample.
//! Consecutive block estimates rotate at the jammer Doppler frequency, which
//! inverts to the relative speed.

use num_complex::Complex64;
use rand::Rng;

use crate::channel::{self, ChannelTap, RadioConfig, DOPPLER_LIGHT_SPEED};
use crate::error::EstimatorError;

/// Default pilot block length.
pub const DEFAULT_PILOT_LEN: usize = 32;
/// Default interval between block estimates. Keeps Doppler up to 1 kHz
/// phase-unambiguous.
pub const DEFAULT_BLOCK_INTERVAL: f64 = 5.0e-4;

/// A block of known pilots and the corresponding received samples. The channel
/// is assumed constant across one block.
#[derive(Debug, Clone)]
pub struct PilotBlock {
    pub pilots: Vec<f64>,
    pub received: Vec<Complex64>,
    /// Per-sample complex noise variance; 0 selects the exact least-squares path.
    pub noise_cov: f64,
    pub n_rays: usize,
    /// Prior tap variance for the MMSE shrinkage term.
    pub tap_prior_var: f64,
}

impl PilotBlock {
    pub fn new(pilots: Vec<f64>, received: Vec<Complex64>, noise_cov: f64, n_rays: usize) -> Self {
        Self {
            pilots,
            received,
            noise_cov,
            n_rays,
            tap_prior_var: 1.0,
        }
    }
}

/// Relative speed reading from a sequence of jammer LOS samples.
#[derive(Debug, Clone, Copy)]
pub struct SpeedEstimate {
    /// Estimated |u_jammer - u_receiver| in m/s.
    pub delta_u_hat: f64,
    /// Estimated Doppler frequency in Hz (signed).
    pub f_d_hat: f64,
    /// RMS deviation of the per-step phase increments, dimensionless.
    pub quality: f64,
}

/// Outcome of a speed estimation attempt.
#[derive(Debug, Clone, Copy)]
pub enum SpeedReading {
    Estimate(SpeedEstimate),
    /// All samples sat below the calibrated magnitude floor.
    NoJammerSignal,
}

fn design_matrix(pilots: &[f64], n_rays: usize) -> Vec<Vec<f64>> {
    let k = pilots.len();
    let mut x = vec![vec![0.0; n_rays]; k];
    for (row, entry) in x.iter_mut().enumerate() {
        for (tap, cell) in entry.iter_mut().enumerate() {
            if row >= tap {
                *cell = pilots[row - tap];
            }
        }
    }
    x
}

/// Solve the hermitian system A z = b in place by Gaussian elimination with
/// partial pivoting. A is n x n row-major.
fn solve_hermitian(
    mut a: Vec<Vec<Complex64>>,
    mut b: Vec<Complex64>,
) -> Result<Vec<Complex64>, EstimatorError> {
    let n = b.len();
    let scale: f64 = a
        .iter()
        .flat_map(|row| row.iter().map(|v| v.norm()))
        .fold(0.0, f64::max)
        .max(1.0);
    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&i, &j| a[i][col].norm().total_cmp(&a[j][col].norm()))
            .unwrap();
        let pivot = a[pivot_row][col].norm();
        if pivot < 1e-12 * scale {
            return Err(EstimatorError::IllConditioned { pivot });
        }
        a.swap(col, pivot_row);
        b.swap(col, pivot_row);
        for row in col + 1..n {
            let factor = a[row][col] / a[col][col];
            for c in col..n {
                let upper = a[col][c];
                a[row][c] -= factor * upper;
            }
            let upper = b[col];
            b[row] -= factor * upper;
        }
    }
    let mut z = vec![Complex64::new(0.0, 0.0); n];
    for row in (0..n).rev() {
        let mut acc = b[row];
        for c in row + 1..n {
            acc -= a[row][c] * z[c];
        }
        z[row] = acc / a[row][row];
    }
    Ok(z)
}

/// Linear MMSE estimate of the combined N-tap channel vector. With zero noise
/// this is the exact least-squares solution; with noise it shrinks by the
/// noise-to-prior ratio.
pub fn mmse_estimate_combined(block: &PilotBlock) -> Result<Vec<Complex64>, EstimatorError> {
    let k = block.pilots.len();
    let n = block.n_rays;
    if k <= 2 * n {
        return Err(EstimatorError::Underdetermined { k, n });
    }
    debug_assert_eq!(block.received.len(), k);
    let x = design_matrix(&block.pilots, n);

    // Normal equations: (X^H X + (sigma^2 / prior) I) z = X^H y.
    let ridge = if block.noise_cov > 0.0 {
        block.noise_cov / block.tap_prior_var
    } else {
        0.0
    };
    let mut a = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    let mut b = vec![Complex64::new(0.0, 0.0); n];
    for i in 0..n {
        for j in 0..n {
            let mut acc = 0.0;
            for row in &x {
                acc += row[i] * row[j];
            }
            a[i][j] = Complex64::new(acc, 0.0);
        }
        a[i][i] += ridge;
        let mut acc = Complex64::new(0.0, 0.0);
        for (row, &y) in x.iter().zip(&block.received) {
            acc += row[i] * y;
        }
        b[i] = acc;
    }
    solve_hermitian(a, b)
}

/// Subtract the known static transmitter LOS contribution from the LOS entry
/// of the combined estimate, leaving the jammer LOS sample (scaled by the
/// jammer symbol amplitude; only its phase trajectory is used downstream).
pub fn separate_jammer_los(z_hat: &[Complex64], tx_los: Complex64, p_1: f64) -> Complex64 {
    z_hat[0] - tx_los * p_1.sqrt()
}

/// Doppler-based relative speed from consecutive jammer LOS samples.
/// `signal_floor` is the calibrated magnitude below which the jammer is
/// declared absent.
pub fn estimate_relative_speed(
    h2_los_seq: &[Complex64],
    dt_block: f64,
    f_c: f64,
    signal_floor: f64,
) -> Result<SpeedReading, EstimatorError> {
    if h2_los_seq.len() < 2 {
        return Err(EstimatorError::TooFewBlocks {
            got: h2_los_seq.len(),
        });
    }
    if dt_block <= 0.0 {
        return Err(EstimatorError::InvalidBlockInterval { dt_block });
    }
    let mean_mag = h2_los_seq.iter().map(|h| h.norm()).sum::<f64>() / h2_los_seq.len() as f64;
    if mean_mag < signal_floor {
        return Ok(SpeedReading::NoJammerSignal);
    }
    // Average the complex one-step rotations before taking the angle: the
    // magnitude-weighted mean suppresses phase noise on weak samples, and the
    // result stays wrapped to (-pi, pi].
    let rotations: Vec<Complex64> = h2_los_seq
        .windows(2)
        .map(|w| w[1] * w[0].conj())
        .collect();
    let mean_rot: Complex64 = rotations.iter().sum();
    let mean = mean_rot.arg();
    let quality = (rotations
        .iter()
        .map(|r| {
            let d = (r * Complex64::from_polar(1.0, -mean)).arg();
            d * d
        })
        .sum::<f64>()
        / rotations.len() as f64)
        .sqrt();
    let f_d_hat = mean / (std::f64::consts::TAU * dt_block);
    Ok(SpeedReading::Estimate(SpeedEstimate {
        delta_u_hat: f_d_hat.abs() * DOPPLER_LIGHT_SPEED / f_c,
        f_d_hat,
        quality,
    }))
}

/// Calibrate the "no jammer signal" floor: run jammer-free pilot blocks under
/// the configured noise and return 3x the RMS of the residual LOS estimate.
pub fn calibrate_signal_floor<R: Rng + ?Sized>(
    radio: &RadioConfig,
    taps_tx: &[ChannelTap],
    pilots: &[f64],
    n_blocks: usize,
    rng: &mut R,
) -> f64 {
    let mut quiet = *radio;
    quiet.jam_power_p2 = 0.0;
    let tx_los = taps_tx[0].value;
    let jam_syms = vec![1.0; pilots.len()];
    let mut acc = 0.0;
    for _ in 0..n_blocks {
        let received =
            channel::received_block(taps_tx, taps_tx, pilots, &jam_syms, &quiet, rng)
                .expect("consistent shapes");
        let block = PilotBlock::new(pilots.to_vec(), received, quiet.noise_power, quiet.n_rays);
        let z = mmse_estimate_combined(&block).expect("well-posed calibration block");
        let h2 = separate_jammer_los(&z, tx_los, quiet.tx_power_p1);
        acc += h2.norm_sqr();
    }
    3.0 * (acc / n_blocks as f64).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{make_tap, RayGeometry, RayKind};
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Independent normal-equations oracle: unweighted least squares solved by
    /// explicit 2x2 (or 1x1) inversion, no shared code with the implementation.
    fn ls_oracle(pilots: &[f64], received: &[Complex64], n: usize) -> Vec<Complex64> {
        assert!(n <= 2, "oracle handles N <= 2");
        let k = pilots.len();
        let x = |row: usize, tap: usize| -> f64 {
            if row >= tap {
                pilots[row - tap]
            } else {
                0.0
            }
        };
        if n == 1 {
            let mut num = Complex64::new(0.0, 0.0);
            let mut den = 0.0;
            for row in 0..k {
                num += x(row, 0) * received[row];
                den += x(row, 0) * x(row, 0);
            }
            return vec![num / den];
        }
        let (mut a00, mut a01, mut a11) = (0.0, 0.0, 0.0);
        let mut b0 = Complex64::new(0.0, 0.0);
        let mut b1 = Complex64::new(0.0, 0.0);
        for row in 0..k {
            a00 += x(row, 0) * x(row, 0);
            a01 += x(row, 0) * x(row, 1);
            a11 += x(row, 1) * x(row, 1);
            b0 += x(row, 0) * received[row];
            b1 += x(row, 1) * received[row];
        }
        let det = a00 * a11 - a01 * a01;
        vec![
            (b0 * a11 - b1 * a01) / det,
            (b1 * a00 - b0 * a01) / det,
        ]
    }

    #[test]
    fn noiseless_single_tap_exact() {
        let h = Complex64::new(0.3, -0.4);
        let pilots: Vec<f64> = (0..8).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect();
        let received: Vec<Complex64> = pilots.iter().map(|&p| h * p).collect();
        let block = PilotBlock::new(pilots, received, 0.0, 1);
        let z = mmse_estimate_combined(&block).unwrap();
        assert!((z[0] - h).norm() < 1e-9);
    }

    #[test]
    fn zero_received_gives_zero_taps() {
        let pilots = vec![1.0; 16];
        let received = vec![Complex64::new(0.0, 0.0); 16];
        let block = PilotBlock::new(pilots, received, 0.0, 2);
        let z = mmse_estimate_combined(&block).unwrap();
        assert!(z.iter().all(|t| t.norm() < 1e-15));
    }

    #[test]
    fn underdetermined_rejected() {
        let block = PilotBlock::new(vec![1.0; 4], vec![Complex64::new(0.0, 0.0); 4], 0.0, 2);
        assert!(matches!(
            mmse_estimate_combined(&block),
            Err(EstimatorError::Underdetermined { .. })
        ));
    }

    #[test]
    fn singular_design_rejected() {
        // All-zero pilots give a rank-0 design matrix.
        let block = PilotBlock::new(vec![0.0; 8], vec![Complex64::new(0.0, 0.0); 8], 0.0, 1);
        assert!(matches!(
            mmse_estimate_combined(&block),
            Err(EstimatorError::IllConditioned { .. })
        ));
    }

    #[test]
    fn vanishing_noise_converges_to_ls_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let pilots = vec![1.0; 16];
        let taps = [Complex64::new(0.2, 0.5), Complex64::new(-0.1, 0.03)];
        let x = design_matrix(&pilots, 2);
        let received: Vec<Complex64> = x
            .iter()
            .map(|row| {
                taps.iter()
                    .zip(row)
                    .map(|(t, &c)| t * c)
                    .sum::<Complex64>()
                    + channel::draw_noise(1e-8, &mut rng)
            })
            .collect();
        let oracle = ls_oracle(&pilots, &received, 2);
        for noise in [1e-6, 1e-9, 1e-12] {
            let mut block = PilotBlock::new(pilots.clone(), received.clone(), noise, 2);
            block.tap_prior_var = 1.0;
            let z = mmse_estimate_combined(&block).unwrap();
            if noise <= 1e-12 {
                assert!((z[0] - oracle[0]).norm() < 1e-6);
                assert!((z[1] - oracle[1]).norm() < 1e-6);
            }
        }
    }

    #[test]
    fn mmse_dominates_ls_over_trials() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let pilots = vec![1.0; 16];
        let noise = 0.05;
        let trials = 1200;
        let (mut mse_mmse, mut mse_ls) = (0.0, 0.0);
        for _ in 0..trials {
            // Taps drawn from the assumed unit-variance prior.
            let taps: Vec<Complex64> = (0..2)
                .map(|_| {
                    Complex64::new(
                        rand_distr::Distribution::sample(
                            &rand_distr::Normal::new(0.0, (0.5_f64).sqrt()).unwrap(),
                            &mut rng,
                        ),
                        rand_distr::Distribution::sample(
                            &rand_distr::Normal::new(0.0, (0.5_f64).sqrt()).unwrap(),
                            &mut rng,
                        ),
                    )
                })
                .collect();
            let x = design_matrix(&pilots, 2);
            let received: Vec<Complex64> = x
                .iter()
                .map(|row| {
                    taps.iter()
                        .zip(row)
                        .map(|(t, &c)| t * c)
                        .sum::<Complex64>()
                        + channel::draw_noise(noise, &mut rng)
                })
                .collect();
            let block = PilotBlock::new(pilots.clone(), received.clone(), noise, 2);
            let z = mmse_estimate_combined(&block).unwrap();
            let ls = ls_oracle(&pilots, &received, 2);
            for i in 0..2 {
                mse_mmse += (z[i] - taps[i]).norm_sqr();
                mse_ls += (ls[i] - taps[i]).norm_sqr();
            }
        }
        assert!(
            mse_mmse <= mse_ls,
            "mmse {mse_mmse:.4} should not exceed ls {mse_ls:.4}"
        );
    }

    #[test]
    fn separate_recovers_jammer_los() {
        let h1 = Complex64::new(0.02, -0.01);
        let h2 = Complex64::new(-0.005, 0.007);
        let p1: f64 = 100.0;
        let z = vec![h1 * p1.sqrt() + h2, Complex64::new(0.0, 0.0)];
        let got = separate_jammer_los(&z, h1, p1);
        assert!((got - h2).norm() < 1e-15);
    }

    #[test]
    fn tap_mse_shrinks_with_pilot_length() {
        // Pseudo-random BPSK pilots decorrelate the design columns, so the
        // per-tap error variance falls roughly as 1/K.
        let noise = 1e-4;
        let taps = [Complex64::new(0.02, -0.01), Complex64::new(-0.004, 0.006)];
        let mut mses = Vec::new();
        for &k in &[8usize, 128] {
            let mut rng = ChaCha8Rng::seed_from_u64(17);
            let pilots: Vec<f64> = (0..k)
                .map(|_| if rng.gen::<bool>() { 1.0 } else { -1.0 })
                .collect();
            let x = design_matrix(&pilots, 2);
            let trials = 400;
            let mut err = 0.0;
            for _ in 0..trials {
                let received: Vec<Complex64> = x
                    .iter()
                    .map(|row| {
                        taps.iter()
                            .zip(row)
                            .map(|(t, &c)| t * c)
                            .sum::<Complex64>()
                            + channel::draw_noise(noise, &mut rng)
                    })
                    .collect();
                let block = PilotBlock::new(pilots.clone(), received, noise, 2);
                let z = mmse_estimate_combined(&block).unwrap();
                err += (z[0] - taps[0]).norm_sqr() + (z[1] - taps[1]).norm_sqr();
            }
            mses.push(err / trials as f64);
        }
        assert!(
            mses[1] < mses[0] / 2.0,
            "K=128 mse {} vs K=8 mse {}",
            mses[1],
            mses[0]
        );
    }

    #[test]
    fn separate_error_shrinks_with_noise() {
        let geom_tx = RayGeometry::new(RayKind::Los, 35.0, 1.0).unwrap();
        let geom_tx_n = RayGeometry::new(RayKind::Nlos, 700.0, 1.0).unwrap();
        let geom_j = RayGeometry::new(RayKind::Los, 50.0, 1.0).unwrap();
        let geom_j_n = RayGeometry::new(RayKind::Nlos, 800.0, 1.0).unwrap();
        let zero = Complex64::new(0.0, 0.0);
        let mut errs = Vec::new();
        for noise in [1e-5, 1e-8] {
            let radio = RadioConfig {
                noise_power: noise,
                ..RadioConfig::default()
            };
            let taps_tx = [
                make_tap(geom_tx, zero, &radio, 0.0).unwrap(),
                make_tap(geom_tx_n, zero, &radio, 0.0).unwrap(),
            ];
            let taps_jam = [
                make_tap(geom_j, zero, &radio, 5.0).unwrap(),
                make_tap(geom_j_n, zero, &radio, 5.0).unwrap(),
            ];
            let true_h2 = taps_jam[0].value * radio.jam_power_p2.sqrt();
            let mut rng = ChaCha8Rng::seed_from_u64(17);
            let pilots = vec![1.0; 32];
            let jam_syms = vec![1.0; 32];
            let trials = 200;
            let mut err = 0.0;
            for _ in 0..trials {
                let received = channel::received_block(
                    &taps_tx, &taps_jam, &pilots, &jam_syms, &radio, &mut rng,
                )
                .unwrap();
                let block = PilotBlock::new(pilots.clone(), received, radio.noise_power, 2);
                let z = mmse_estimate_combined(&block).unwrap();
                let h2 = separate_jammer_los(&z, taps_tx[0].value, radio.tx_power_p1);
                err += (h2 - true_h2).norm_sqr();
            }
            errs.push(err / trials as f64);
        }
        assert!(
            errs[1] < errs[0] / 10.0,
            "low-noise err {} vs high-noise err {}",
            errs[1],
            errs[0]
        );
    }

    #[test]
    fn constant_phase_means_zero_speed() {
        let seq = vec![Complex64::new(0.1, 0.2); 5];
        match estimate_relative_speed(&seq, 5e-4, 5.9e9, 1e-6).unwrap() {
            SpeedReading::Estimate(e) => assert!(e.delta_u_hat.abs() < 1e-12),
            SpeedReading::NoJammerSignal => panic!("signal above floor"),
        }
    }

    #[test]
    fn synthetic_rotation_inverts_to_speed() {
        // 655.5 Hz at 5.9 GHz is 120 km/h; 98.33 Hz is 5 m/s.
        for (f_d, want) in [(655.5, 33.33), (98.33, 5.0)] {
            let dt = 5e-4;
            let seq: Vec<Complex64> = (0..6)
                .map(|i| Complex64::from_polar(0.01, std::f64::consts::TAU * f_d * dt * i as f64))
                .collect();
            match estimate_relative_speed(&seq, dt, 5.9e9, 1e-6).unwrap() {
                SpeedReading::Estimate(e) => {
                    assert!(
                        (e.delta_u_hat - want).abs() / want < 0.01,
                        "f_d {f_d}: got {}",
                        e.delta_u_hat
                    );
                }
                SpeedReading::NoJammerSignal => panic!("signal above floor"),
            }
        }
    }

    #[test]
    fn below_floor_reports_no_jammer() {
        let seq = vec![Complex64::new(1e-9, 0.0); 4];
        assert!(matches!(
            estimate_relative_speed(&seq, 5e-4, 5.9e9, 1e-6).unwrap(),
            SpeedReading::NoJammerSignal
        ));
    }

    #[test]
    fn scale_invariance_of_speed_estimate() {
        let dt = 5e-4;
        let seq: Vec<Complex64> = (0..5)
            .map(|i| Complex64::from_polar(0.02, 0.3 * i as f64))
            .collect();
        let scaled: Vec<Complex64> = seq
            .iter()
            .map(|h| h * Complex64::new(3.0, -4.0))
            .collect();
        let a = match estimate_relative_speed(&seq, dt, 5.9e9, 1e-9).unwrap() {
            SpeedReading::Estimate(e) => e.delta_u_hat,
            _ => panic!(),
        };
        let b = match estimate_relative_speed(&scaled, dt, 5.9e9, 1e-9).unwrap() {
            SpeedReading::Estimate(e) => e.delta_u_hat,
            _ => panic!(),
        };
        assert_relative_eq!(a, b, max_relative = 1e-12);
    }
}
