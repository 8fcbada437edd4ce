//! Per-tick link metrics and observation rows.
//!
//! Each 0.1 s tick yields one row of {RSSI, SINR, PDR, estimated relative
//! speed} plus the VRS label filled in after the run completes.

use rand::Rng;
use statrs::function::erf::erfc;

use crate::error::FeatureError;
use crate::scenario::ScenarioKind;

/// SINR clamp range in dB, keeping CSV output finite.
pub const SINR_FLOOR_DB: f64 = -40.0;
pub const SINR_CAP_DB: f64 = 60.0;

/// Trailing delivery window for PDR, in packets (1 s at 10 packets/s).
pub const PDR_WINDOW: usize = 10;

/// One feature row sampled every 0.1 s.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservationRecord {
    pub t: f64,
    pub rssi: f64,
    pub sinr: f64,
    pub pdr: f64,
    /// Estimated relative speed, m/s.
    pub delta_u: f64,
    /// Vehicle's own travelling speed, m/s.
    pub own_speed: f64,
    /// Encoded VRS label (NUM_NA or NUM_A).
    pub vrs: f64,
    pub class_label: ScenarioKind,
}

/// Signal to interference-plus-noise ratio in dB, clamped to the finite range.
pub fn compute_sinr(signal_mw: f64, jam_mw: f64, noise_mw: f64) -> Result<f64, FeatureError> {
    if noise_mw <= 0.0 {
        return Err(FeatureError::InvalidNoise { noise_mw });
    }
    if signal_mw <= 0.0 {
        return Ok(SINR_FLOOR_DB);
    }
    let db = 10.0 * (signal_mw / (jam_mw + noise_mw)).log10();
    Ok(db.clamp(SINR_FLOOR_DB, SINR_CAP_DB))
}

/// Total in-band received power in dBm (for mW inputs).
pub fn compute_rssi(signal_mw: f64, jam_mw: f64, noise_mw: f64) -> f64 {
    10.0 * (signal_mw + jam_mw + noise_mw).log10()
}

/// Gaussian tail probability Q(x) = 0.5 erfc(x / sqrt(2)).
pub fn q_function(x: f64) -> f64 {
    0.5 * erfc(x / std::f64::consts::SQRT_2)
}

/// BPSK bit error probability at a linear SINR.
pub fn bpsk_ber(sinr_linear: f64) -> f64 {
    q_function((2.0 * sinr_linear.max(0.0)).sqrt())
}

/// Probability that all `bits` bits of a packet survive at a linear SINR.
pub fn packet_success_prob(sinr_linear: f64, bits: u32) -> f64 {
    (1.0 - bpsk_ber(sinr_linear)).powi(bits as i32)
}

/// Bernoulli delivery draw for a packet at uniform SINR.
pub fn packet_delivered<R: Rng + ?Sized>(mean_sinr_linear: f64, bits: u32, rng: &mut R) -> bool {
    rng.gen::<f64>() < packet_success_prob(mean_sinr_linear, bits)
}

/// Delivery draw for a header-jammed packet: the header bits see the jammed
/// SINR, the remainder the clean SINR.
pub fn packet_delivered_split<R: Rng + ?Sized>(
    header_sinr_linear: f64,
    clean_sinr_linear: f64,
    header_bits: u32,
    total_bits: u32,
    rng: &mut R,
) -> bool {
    let header_bits = header_bits.min(total_bits);
    let p = packet_success_prob(header_sinr_linear, header_bits)
        * packet_success_prob(clean_sinr_linear, total_bits - header_bits);
    rng.gen::<f64>() < p
}

/// Delivered fraction over a trailing window of outcomes.
pub fn compute_pdr(window: &[bool]) -> Result<f64, FeatureError> {
    if window.is_empty() {
        return Err(FeatureError::EmptyWindow);
    }
    let delivered = window.iter().filter(|&&d| d).count();
    Ok(delivered as f64 / window.len() as f64)
}

/// Join the per-tick metrics into one observation row. `delta_u` is the
/// estimator output when a jammer signal was present, otherwise the vehicle's
/// own speed (a static or absent emitter appears at that relative speed). The
/// VRS field is filled after the full run by the labeling pass.
#[allow(clippy::too_many_arguments)]
pub fn assemble_observation(
    t: f64,
    rssi: f64,
    sinr: f64,
    pdr: f64,
    estimated_delta_u: Option<f64>,
    own_speed: f64,
    class_label: ScenarioKind,
) -> ObservationRecord {
    ObservationRecord {
        t,
        rssi,
        sinr,
        pdr,
        delta_u: estimated_delta_u.unwrap_or(own_speed),
        own_speed,
        vrs: crate::vrs::NUM_NA,
        class_label,
    }
}
