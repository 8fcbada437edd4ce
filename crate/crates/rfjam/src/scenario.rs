//! Kinematic simulation of the transmitter / receiver pair and the jamming or
//! interfering source on a straight road, plus the three jammer behaviors.
//!
//! The receiver and transmitter travel at the same speed with a fixed 35 m
//! gap. A pursuing jammer starts `dist_initial` behind and closes in; an
//! interference run replaces it with a static roadside emitter the receiver
//! drives past. Every `sample_period` the driver rebuilds the channel,
//! measures SINR / RSSI / PDR, runs the pilot-based speed estimator, and emits
//! one observation row.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::channel::{
    self, ChannelTap, RadioConfig, RayGeometry, RayKind,
};
use crate::error::ConfigError;
use crate::estimator::{self, PilotBlock, SpeedReading};
use crate::features::{self, ObservationRecord, PDR_WINDOW};
use crate::vrs::{vrs_labels, VrsInput};

/// The three simulated classes, in the fixed tie-break order used by the
/// classifiers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ScenarioKind {
    Interference,
    SmartAttack,
    ConstantAttack,
}

impl ScenarioKind {
    pub fn all() -> [ScenarioKind; 3] {
        [
            ScenarioKind::SmartAttack,
            ScenarioKind::Interference,
            ScenarioKind::ConstantAttack,
        ]
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            ScenarioKind::Interference => "Interference",
            ScenarioKind::SmartAttack => "SmartAttack",
            ScenarioKind::ConstantAttack => "ConstantAttack",
        }
    }

    pub fn from_str_opt(s: &str) -> Option<ScenarioKind> {
        match s {
            "Interference" => Some(ScenarioKind::Interference),
            "SmartAttack" => Some(ScenarioKind::SmartAttack),
            "ConstantAttack" => Some(ScenarioKind::ConstantAttack),
            _ => None,
        }
    }

    /// Index in the fixed class order.
    pub fn index(&self) -> usize {
        match self {
            ScenarioKind::Interference => 0,
            ScenarioKind::SmartAttack => 1,
            ScenarioKind::ConstantAttack => 2,
        }
    }

    pub fn from_index(i: usize) -> ScenarioKind {
        match i {
            0 => ScenarioKind::Interference,
            1 => ScenarioKind::SmartAttack,
            _ => ScenarioKind::ConstantAttack,
        }
    }
}

impl std::fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VehicleRole {
    Transmitter,
    Receiver,
    Jammer,
    Interferer,
}

/// Position and speed of one vehicle on the 1-D road.
#[derive(Debug, Clone, Copy)]
pub struct VehicleState {
    pub pos: f64,
    pub speed: f64,
    pub role: VehicleRole,
}

/// Advance every vehicle by one time step.
pub fn step_kinematics(states: &mut [VehicleState], dt: f64) {
    assert!(dt > 0.0, "dt must be positive");
    for s in states.iter_mut() {
        s.pos += s.speed * dt;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SmartJammerMode {
    Pursue,
    Retreated,
}

/// Energy-detection state machine of the reactive jammer. One burst per busy
/// period: after a burst the machine re-arms only once the medium goes quiet,
/// so each sensed packet loses at most its header window.
#[derive(Debug, Clone, Copy)]
pub struct SmartJammerState {
    pub mode: SmartJammerMode,
    /// Energy threshold in dBm.
    pub sense_threshold: f64,
    /// Required above-threshold dwell before transmitting, seconds.
    pub t_detection: f64,
    /// Burst length, seconds.
    pub t_duration: f64,
    /// Accumulated above-threshold time, seconds.
    pub energy_timer: f64,
    /// Remaining burst time, seconds.
    pub tx_timer: f64,
    /// Cleared after a burst until a below-threshold reading is seen.
    pub armed: bool,
}

impl SmartJammerState {
    pub fn new(sense_threshold: f64, t_detection: f64, t_duration: f64) -> Self {
        Self {
            mode: SmartJammerMode::Pursue,
            sense_threshold,
            t_detection,
            t_duration,
            energy_timer: 0.0,
            tx_timer: 0.0,
            armed: true,
        }
    }
}

/// One step of the reactive decision: accumulate sensed energy, fire a burst
/// of exactly `t_duration` once `t_detection` is met, then wait for quiet
/// before re-arming. Returns the updated state and whether the jammer
/// transmits during this step.
pub fn smart_jammer_decision(
    mut state: SmartJammerState,
    sensed_dbm: f64,
    dt: f64,
) -> (SmartJammerState, bool) {
    debug_assert!(dt <= state.t_detection, "step must resolve the detection window");
    if state.tx_timer > 0.0 {
        state.tx_timer -= dt;
        if state.tx_timer <= 1e-15 {
            state.tx_timer = 0.0;
            state.armed = false;
        }
        return (state, true);
    }
    if !state.armed {
        if sensed_dbm <= state.sense_threshold {
            state.armed = true;
            state.energy_timer = 0.0;
        }
        return (state, false);
    }
    if sensed_dbm > state.sense_threshold {
        state.energy_timer += dt;
        if state.energy_timer >= state.t_detection - 1e-15 {
            state.energy_timer = 0.0;
            state.tx_timer = state.t_duration - dt;
            return (state, true);
        }
    } else {
        state.energy_timer = 0.0;
    }
    (state, false)
}

/// Full parameterization of one simulation run.
#[derive(Debug, Clone)]
pub struct ScenarioConfig {
    pub kind: ScenarioKind,
    /// Travelling speed of the Tx/Rx pair, m/s.
    pub base_speed: f64,
    /// Initial jammer-to-receiver gap, m.
    pub dist_initial: f64,
    /// Run length, s.
    pub duration: f64,
    /// Observation period, s.
    pub sample_period: f64,
    pub radio: RadioConfig,
    pub seed: u64,
    /// Per-dimension Rayleigh variance factor (0 = deterministic channel).
    pub fading_variance: f64,
    /// AR(1) correlation of the Rayleigh component between consecutive pilot
    /// blocks; below 1 the scatter decorrelates and jitters the Doppler
    /// estimate.
    pub block_fading_rho: f64,
    /// Pursuit speed of a moving jammer, m/s.
    pub pursuit_speed: f64,
    /// Gap the smart jammer retreats to after reaching its target, m.
    pub safe_distance: f64,
    /// Gap at which the constant jammer goes to full power, m.
    pub follow_distance: f64,
    /// Constant jammer approach power, mW.
    pub p_min: f64,
    /// Roadside emitter power in the interference run, mW.
    pub emitter_power: f64,
    /// Closest-approach clamp to the roadside emitter, m.
    pub emitter_min_dist: f64,
    /// Lateral offset of the static reflector, m.
    pub reflector_lateral: f64,
    /// Smart jammer energy threshold, dBm.
    pub sense_threshold_dbm: f64,
    /// Smart jammer detection dwell, s.
    pub t_detection: f64,
    /// Smart jammer burst length, s.
    pub t_duration: f64,
    /// Pilot block length K.
    pub pilot_len: usize,
    /// Interval between pilot block estimates, s.
    pub block_interval: f64,
    /// Block estimates per observation tick.
    pub n_est_blocks: usize,
    /// Equality tolerance for the VRS labeling pass, m/s.
    pub vrs_epsilon: f64,
    /// Packet length in bits.
    pub packet_bits: u32,
}

impl ScenarioConfig {
    pub fn new(kind: ScenarioKind, base_speed: f64, seed: u64) -> Self {
        Self {
            kind,
            base_speed,
            dist_initial: 240.0,
            duration: 100.0,
            sample_period: 0.1,
            radio: RadioConfig::default(),
            seed,
            fading_variance: 0.25,
            block_fading_rho: 0.985,
            // Scales with traffic speed so a faster run also closes faster.
            pursuit_speed: base_speed * 8.0 / 5.0,
            safe_distance: 50.0,
            follow_distance: 10.0,
            p_min: 100.0,
            emitter_power: 40.0,
            emitter_min_dist: 10.0,
            reflector_lateral: 200.0,
            sense_threshold_dbm: -86.0,
            t_detection: 12.0e-6,
            t_duration: 84.0e-6,
            pilot_len: estimator::DEFAULT_PILOT_LEN,
            block_interval: estimator::DEFAULT_BLOCK_INTERVAL,
            n_est_blocks: 8,
            // Wide enough to absorb fading-induced jitter on the estimates.
            vrs_epsilon: 4.5,
            packet_bits: 500,
        }
    }

    /// Observations per run.
    pub fn ticks(&self) -> usize {
        (self.duration / self.sample_period).round() as usize
    }
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self::new(ScenarioKind::Interference, 15.0, 0)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SmartTick {
    pub pos: f64,
    pub speed: f64,
    pub mode: SmartJammerMode,
}

/// Per-tick pose of the smart jammer: pursue until the gap closes to
/// `follow_distance`, fall back to `safe_distance`, then shadow the target.
pub fn smart_jammer_trajectory(cfg: &ScenarioConfig) -> Vec<SmartTick> {
    let dt = cfg.sample_period;
    let mut out = Vec::with_capacity(cfg.ticks());
    let mut pos = -cfg.dist_initial;
    let mut mode = SmartJammerMode::Pursue;
    let retreat_rate = cfg.pursuit_speed - cfg.base_speed;
    for tick in 0..cfg.ticks() {
        let rx = cfg.base_speed * tick as f64 * dt;
        let gap = rx - pos;
        if mode == SmartJammerMode::Pursue && gap <= cfg.follow_distance {
            mode = SmartJammerMode::Retreated;
        }
        let speed = match mode {
            SmartJammerMode::Pursue => cfg.pursuit_speed,
            SmartJammerMode::Retreated => {
                if gap < cfg.safe_distance {
                    cfg.base_speed - retreat_rate
                } else {
                    cfg.base_speed
                }
            }
        };
        out.push(SmartTick { pos, speed, mode });
        pos += speed * dt;
    }
    out
}

#[derive(Debug, Clone, Copy)]
pub struct ConstantTick {
    pub pos: f64,
    pub speed: f64,
    pub power_mw: f64,
}

/// Per-tick pose of the constant jammer: approach at minimum power, then
/// follow at full power.
pub fn constant_jammer_trajectory(cfg: &ScenarioConfig) -> Vec<ConstantTick> {
    let dt = cfg.sample_period;
    let mut out = Vec::with_capacity(cfg.ticks());
    let mut pos = -cfg.dist_initial;
    let mut reached = false;
    for tick in 0..cfg.ticks() {
        let rx = cfg.base_speed * tick as f64 * dt;
        let gap = rx - pos;
        if !reached && gap <= cfg.follow_distance {
            reached = true;
        }
        let (speed, power) = if reached {
            (cfg.base_speed, cfg.radio.jam_power_p2)
        } else {
            (cfg.pursuit_speed, cfg.p_min)
        };
        out.push(ConstantTick {
            pos,
            speed,
            power_mw: power,
        });
        pos += speed * dt;
    }
    out
}

#[derive(Debug, Clone, Copy)]
pub struct InterferenceTick {
    pub pos: f64,
    pub power_mw: f64,
}

/// Static roadside emitter at the road midpoint, always on.
pub fn interference_trajectory(cfg: &ScenarioConfig) -> Vec<InterferenceTick> {
    let pos = cfg.base_speed * cfg.duration / 2.0;
    vec![
        InterferenceTick {
            pos,
            power_mw: cfg.emitter_power,
        };
        cfg.ticks()
    ]
}

/// Unified per-tick drive of the jamming / interfering source.
#[derive(Debug, Clone, Copy)]
struct SourceTick {
    pos: f64,
    speed: f64,
    power_mw: f64,
    reactive: bool,
}

fn source_track(cfg: &ScenarioConfig) -> Vec<SourceTick> {
    match cfg.kind {
        ScenarioKind::Interference => interference_trajectory(cfg)
            .into_iter()
            .map(|t| SourceTick {
                pos: t.pos,
                speed: 0.0,
                power_mw: t.power_mw,
                reactive: false,
            })
            .collect(),
        ScenarioKind::SmartAttack => smart_jammer_trajectory(cfg)
            .into_iter()
            .map(|t| SourceTick {
                pos: t.pos,
                speed: t.speed,
                power_mw: cfg.radio.jam_power_p2,
                reactive: t.mode == SmartJammerMode::Retreated,
            })
            .collect(),
        ScenarioKind::ConstantAttack => constant_jammer_trajectory(cfg)
            .into_iter()
            .map(|t| SourceTick {
                pos: t.pos,
                speed: t.speed,
                power_mw: t.power_mw,
                reactive: false,
            })
            .collect(),
    }
}

/// Distance from the receiver to the source; the interference emitter sits
/// beside the road so the pass-by distance is clamped.
fn source_dist(cfg: &ScenarioConfig, rx_pos: f64, src_pos: f64) -> f64 {
    let d = (rx_pos - src_pos).abs();
    if cfg.kind == ScenarioKind::Interference {
        d.max(cfg.emitter_min_dist)
    } else {
        d.max(1.0)
    }
}

/// Build the two taps of one link at a given pose. The NLOS ray bounces off
/// the static lateral reflector; its path is at least the direct path.
/// `phase_dist` is the true (unclamped) path length driving the carrier
/// phase; the clamped `direct_dist` only caps the path-loss amplitude.
fn link_taps(
    cfg: &ScenarioConfig,
    node_pos: f64,
    direct_dist: f64,
    phase_dist: f64,
    delta_u: f64,
    rayleigh: [Complex64; 2],
) -> [ChannelTap; 2] {
    let refl_x = cfg.base_speed * cfg.duration / 2.0;
    let d_reflector = ((node_pos - refl_x).powi(2) + cfg.reflector_lateral.powi(2)).sqrt();
    let nlos_dist = (2.0 * d_reflector - direct_dist).max(direct_dist + 1.0);
    let mut los = RayGeometry::new(RayKind::Los, direct_dist, 1.0).expect("positive distance");
    los.excess_delay = phase_dist / channel::SPEED_OF_LIGHT;
    let mut nlos = RayGeometry::new(RayKind::Nlos, nlos_dist, 1.0).expect("positive distance");
    nlos.excess_delay = (2.0 * d_reflector - phase_dist).max(phase_dist + 1.0)
        / channel::SPEED_OF_LIGHT;
    [
        channel::make_tap(los, rayleigh[0], &cfg.radio, delta_u).expect("valid geometry"),
        channel::make_tap(nlos, rayleigh[1], &cfg.radio, delta_u).expect("valid geometry"),
    ]
}

/// Count the packet bits hit by the reactive burst, driving the energy
/// detector across one packet window at symbol resolution.
fn reactive_jammed_bits(cfg: &ScenarioConfig, sensed_dbm: f64) -> u32 {
    let mut state = SmartJammerState::new(
        cfg.sense_threshold_dbm,
        cfg.t_detection,
        cfg.t_duration,
    );
    state.mode = SmartJammerMode::Retreated;
    let dt = cfg.radio.symbol_duration;
    let mut jammed = 0u32;
    for _ in 0..cfg.packet_bits {
        let (next, transmitting) = smart_jammer_decision(state, sensed_dbm, dt);
        state = next;
        if transmitting {
            jammed += 1;
        }
    }
    jammed
}

/// Run one full scenario and emit the labeled observation rows.
pub fn simulate_run(cfg: &ScenarioConfig) -> Vec<ObservationRecord> {
    let ticks = cfg.ticks();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let track = source_track(cfg);
    let pilots = vec![1.0; cfg.pilot_len];
    let jam_syms = vec![1.0; cfg.pilot_len];
    let tx_gap = 35.0;

    // Calibrate the "no jammer" magnitude floor from jammer-free blocks.
    let signal_floor = {
        let mut cal_rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x9e37_79b9_7f4a_7c15);
        let taps_tx = link_taps(cfg, tx_gap, tx_gap, tx_gap, 0.0, [Complex64::new(0.0, 0.0); 2]);
        estimator::calibrate_signal_floor(&cfg.radio, &taps_tx, &pilots, 64, &mut cal_rng)
    };

    let mut delivery_window: Vec<bool> = Vec::with_capacity(PDR_WINDOW);
    let mut records: Vec<ObservationRecord> = Vec::with_capacity(ticks);
    let mut delta_u_seq: Vec<f64> = Vec::with_capacity(ticks);

    for (tick, src) in track.iter().enumerate() {
        let t = tick as f64 * cfg.sample_period;
        let rx_pos = cfg.base_speed * t;
        let tx_pos = rx_pos + tx_gap;
        let noise = cfg.radio.noise_power;

        // Per-tick fading draws, held constant across the estimation blocks.
        let d_src = source_dist(cfg, rx_pos, src.pos);
        let ray_tx = [
            channel::draw_rayleigh(tx_gap, cfg.fading_variance, &mut rng).expect("valid dist"),
            channel::draw_rayleigh(tx_gap, cfg.fading_variance, &mut rng).expect("valid dist"),
        ];
        let ray_jam = [
            channel::draw_rayleigh(d_src, cfg.fading_variance, &mut rng).expect("valid dist"),
            channel::draw_rayleigh(d_src, cfg.fading_variance, &mut rng).expect("valid dist"),
        ];

        let rel_speed = if cfg.kind == ScenarioKind::Interference {
            cfg.base_speed
        } else {
            (cfg.base_speed - src.speed).abs()
        };
        let taps_tx = link_taps(cfg, tx_pos, tx_gap, tx_gap, 0.0, ray_tx);
        let taps_jam = link_taps(cfg, src.pos, d_src, (rx_pos - src.pos).abs(), rel_speed, ray_jam);

        // Reactive burst shape for this tick's packet.
        let d_tx_src = (tx_pos - src.pos).abs().max(1.0);
        let sensed_mw = cfg.radio.tx_power_p1 / d_tx_src.powi(4);
        let sensed_dbm = 10.0 * sensed_mw.log10();
        let jammed_bits = if src.reactive {
            reactive_jammed_bits(cfg, sensed_dbm)
        } else if src.power_mw > 0.0 {
            cfg.packet_bits
        } else {
            0
        };
        let duty = jammed_bits as f64 / cfg.packet_bits as f64;

        // Link powers.
        let sig_mw = cfg.radio.tx_power_p1 * taps_tx.iter().map(|t| t.value.norm_sqr()).sum::<f64>();
        let jam_chan = taps_jam.iter().map(|t| t.value.norm_sqr()).sum::<f64>();
        let jam_inst_mw = src.power_mw * jam_chan;

        let sinr_db = features::compute_sinr(sig_mw, jam_inst_mw * duty, noise)
            .expect("positive noise power");
        let rssi_db = features::compute_rssi(sig_mw, jam_inst_mw * duty, noise);

        // Packet delivery.
        let clean_lin = sig_mw / noise;
        let jammed_lin = sig_mw / (jam_inst_mw + noise);
        let delivered = if jammed_bits == 0 {
            features::packet_delivered(clean_lin, cfg.packet_bits, &mut rng)
        } else if jammed_bits == cfg.packet_bits {
            features::packet_delivered(jammed_lin, cfg.packet_bits, &mut rng)
        } else {
            features::packet_delivered_split(
                jammed_lin,
                clean_lin,
                jammed_bits,
                cfg.packet_bits,
                &mut rng,
            )
        };
        if delivery_window.len() == PDR_WINDOW {
            delivery_window.remove(0);
        }
        delivery_window.push(delivered);
        let pdr = features::compute_pdr(&delivery_window).expect("non-empty window");

        // Pilot-based relative speed estimate. The reactive jammer fires on
        // the pilot transmissions too, so it is observable whenever above its
        // sensing threshold.
        // The pilot preamble itself trips a reactive jammer's energy detector,
        // so whenever the source can sense the transmitter its bursts land on
        // the pilots too. Continuous sources always cover them.
        let jam_active = src.power_mw > 0.0
            && (!src.reactive || sensed_dbm > cfg.sense_threshold_dbm);
        let mut est_radio = cfg.radio;
        est_radio.jam_power_p2 = if jam_active { src.power_mw } else { 0.0 };
        let mut h2_seq = Vec::with_capacity(cfg.n_est_blocks);
        // Scatter decorrelation between pilot blocks grows with the square of
        // the platform speed (small-argument Jakes autocorrelation); the
        // configured coefficient is referenced to 15 m/s.
        let speed_ratio = cfg.base_speed / 15.0;
        let rho = (1.0 - (1.0 - cfg.block_fading_rho) * speed_ratio * speed_ratio).clamp(0.0, 1.0);
        let innov = (1.0 - rho * rho).sqrt();
        let mut ray_tx_b = ray_tx;
        let mut ray_jam_b = ray_jam;
        for b in 0..cfg.n_est_blocks {
            let dt_b = b as f64 * cfg.block_interval;
            let rx_b = rx_pos + cfg.base_speed * dt_b;
            let tx_b = tx_pos + cfg.base_speed * dt_b;
            let src_b = src.pos + src.speed * dt_b;
            let d_src_b = source_dist(cfg, rx_b, src_b);
            if b > 0 {
                // Scatter decorrelates between blocks (Gauss-Markov).
                for r in ray_tx_b.iter_mut() {
                    *r = *r * rho
                        + channel::draw_rayleigh(tx_gap, cfg.fading_variance, &mut rng)
                            .expect("valid dist")
                            * innov;
                }
                for r in ray_jam_b.iter_mut() {
                    *r = *r * rho
                        + channel::draw_rayleigh(d_src_b, cfg.fading_variance, &mut rng)
                            .expect("valid dist")
                            * innov;
                }
            }
            let taps_tx_b = link_taps(cfg, tx_b, tx_gap, tx_gap, 0.0, ray_tx_b);
            let taps_jam_b =
                link_taps(cfg, src_b, d_src_b, (rx_b - src_b).abs(), rel_speed, ray_jam_b);
            let received = channel::received_block(
                &taps_tx_b,
                &taps_jam_b,
                &pilots,
                &jam_syms,
                &est_radio,
                &mut rng,
            )
            .expect("consistent block shapes");
            let block = PilotBlock::new(pilots.clone(), received, noise, cfg.radio.n_rays);
            let z = estimator::mmse_estimate_combined(&block).expect("well-posed pilot system");
            h2_seq.push(estimator::separate_jammer_los(
                &z,
                taps_tx_b[0].value,
                cfg.radio.tx_power_p1,
            ));
        }
        let estimated = match estimator::estimate_relative_speed(
            &h2_seq,
            cfg.block_interval,
            cfg.radio.f_c,
            signal_floor,
        )
        .expect("enough blocks")
        {
            SpeedReading::Estimate(e) => Some(e.delta_u_hat),
            SpeedReading::NoJammerSignal => None,
        };

        let rec = features::assemble_observation(
            t,
            rssi_db,
            sinr_db,
            pdr,
            estimated,
            cfg.base_speed,
            cfg.kind,
        );
        delta_u_seq.push(rec.delta_u);
        records.push(rec);
    }

    // VRS labeling pass over the completed run.
    let own = vec![cfg.base_speed; records.len()];
    let out = vrs_labels(&VrsInput::new(delta_u_seq, own, cfg.vrs_epsilon).expect("run length >= 2"))
        .expect("valid vrs input");
    for (rec, &enc) in records.iter_mut().zip(out.encoded.iter()) {
        rec.vrs = enc;
    }
    records
}

// --- config file (key = value) -------------------------------------------

impl ScenarioConfig {
    pub fn to_key_values(&self) -> Vec<(String, String)> {
        let mut kv: Vec<(String, String)> = Vec::new();
        let mut push = |k: &str, v: String| kv.push((k.to_string(), v));
        push("kind", self.kind.as_str().to_string());
        push("base_speed", format!("{}", self.base_speed));
        push("dist_initial", format!("{}", self.dist_initial));
        push("duration", format!("{}", self.duration));
        push("sample_period", format!("{}", self.sample_period));
        push("seed", format!("{}", self.seed));
        push("radio.f_c", format!("{}", self.radio.f_c));
        push("radio.tx_power_p1", format!("{}", self.radio.tx_power_p1));
        push("radio.jam_power_p2", format!("{}", self.radio.jam_power_p2));
        push("radio.noise_power", format!("{}", self.radio.noise_power));
        push("radio.n_rays", format!("{}", self.radio.n_rays));
        push("radio.symbol_duration", format!("{}", self.radio.symbol_duration));
        push("fading_variance", format!("{}", self.fading_variance));
        push("block_fading_rho", format!("{}", self.block_fading_rho));
        push("pursuit_speed", format!("{}", self.pursuit_speed));
        push("safe_distance", format!("{}", self.safe_distance));
        push("follow_distance", format!("{}", self.follow_distance));
        push("p_min", format!("{}", self.p_min));
        push("emitter_power", format!("{}", self.emitter_power));
        push("emitter_min_dist", format!("{}", self.emitter_min_dist));
        push("reflector_lateral", format!("{}", self.reflector_lateral));
        push("sense_threshold_dbm", format!("{}", self.sense_threshold_dbm));
        push("t_detection", format!("{}", self.t_detection));
        push("t_duration", format!("{}", self.t_duration));
        push("pilot_len", format!("{}", self.pilot_len));
        push("block_interval", format!("{}", self.block_interval));
        push("n_est_blocks", format!("{}", self.n_est_blocks));
        push("vrs_epsilon", format!("{}", self.vrs_epsilon));
        push("packet_bits", format!("{}", self.packet_bits));
        kv
    }

    pub fn write_config(&self, path: &std::path::Path) -> Result<(), ConfigError> {
        let body: String = self
            .to_key_values()
            .into_iter()
            .map(|(k, v)| format!("{k} = {v}\n"))
            .collect();
        std::fs::write(path, body).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })
    }

    /// Parse a `key = value` config body. Unknown keys are rejected by name.
    pub fn parse_config(text: &str) -> Result<ScenarioConfig, ConfigError> {
        let mut cfg = ScenarioConfig::default();
        let mut saw_kind = false;
        let mut explicit_pursuit = false;
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| ConfigError::InvalidValue {
                key: line.to_string(),
                value: String::new(),
            })?;
            let key = key.trim();
            let value = value.trim();
            let bad = |k: &str, v: &str| ConfigError::InvalidValue {
                key: k.to_string(),
                value: v.to_string(),
            };
            let num = |k: &str, v: &str| v.parse::<f64>().map_err(|_| bad(k, v));
            match key {
                "kind" => {
                    cfg.kind =
                        ScenarioKind::from_str_opt(value).ok_or_else(|| bad(key, value))?;
                    saw_kind = true;
                }
                "base_speed" => cfg.base_speed = num(key, value)?,
                "dist_initial" => cfg.dist_initial = num(key, value)?,
                "duration" => cfg.duration = num(key, value)?,
                "sample_period" => cfg.sample_period = num(key, value)?,
                "seed" => cfg.seed = value.parse().map_err(|_| bad(key, value))?,
                "radio.f_c" => cfg.radio.f_c = num(key, value)?,
                "radio.tx_power_p1" => cfg.radio.tx_power_p1 = num(key, value)?,
                "radio.jam_power_p2" => cfg.radio.jam_power_p2 = num(key, value)?,
                "radio.noise_power" => cfg.radio.noise_power = num(key, value)?,
                "radio.n_rays" => cfg.radio.n_rays = value.parse().map_err(|_| bad(key, value))?,
                "radio.symbol_duration" => cfg.radio.symbol_duration = num(key, value)?,
                "fading_variance" => cfg.fading_variance = num(key, value)?,
                "block_fading_rho" => cfg.block_fading_rho = num(key, value)?,
                "pursuit_speed" => {
                    cfg.pursuit_speed = num(key, value)?;
                    explicit_pursuit = true;
                }
                "safe_distance" => cfg.safe_distance = num(key, value)?,
                "follow_distance" => cfg.follow_distance = num(key, value)?,
                "p_min" => cfg.p_min = num(key, value)?,
                "emitter_power" => cfg.emitter_power = num(key, value)?,
                "emitter_min_dist" => cfg.emitter_min_dist = num(key, value)?,
                "reflector_lateral" => cfg.reflector_lateral = num(key, value)?,
                "sense_threshold_dbm" => cfg.sense_threshold_dbm = num(key, value)?,
                "t_detection" => cfg.t_detection = num(key, value)?,
                "t_duration" => cfg.t_duration = num(key, value)?,
                "pilot_len" => cfg.pilot_len = value.parse().map_err(|_| bad(key, value))?,
                "block_interval" => cfg.block_interval = num(key, value)?,
                "n_est_blocks" => cfg.n_est_blocks = value.parse().map_err(|_| bad(key, value))?,
                "vrs_epsilon" => cfg.vrs_epsilon = num(key, value)?,
                "packet_bits" => cfg.packet_bits = value.parse().map_err(|_| bad(key, value))?,
                other => {
                    return Err(ConfigError::UnknownKey {
                        key: other.to_string(),
                    })
                }
            }
        }
        if !saw_kind {
            return Err(ConfigError::MissingKey {
                key: "kind".to_string(),
            });
        }
        if !explicit_pursuit {
            cfg.pursuit_speed = cfg.base_speed * 8.0 / 5.0;
        }
        Ok(cfg)
    }

    pub fn read_config(path: &std::path::Path) -> Result<ScenarioConfig, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse_config(&text)
    }
}
