//! Variations-of-relative-speed labeling.
//!
//! Maps a per-observation relative speed sequence and the vehicle's own speed
//! sequence to attack / not-attack labels, carrying a trigger state across
//! observations. The labels are encoded as two extreme numeric values so they
//! dominate the classifier's distance metric.

use crate::error::VrsError;

/// Numeric encoding of a not-attack label.
pub const NUM_NA: f64 = 0.0;
/// Numeric encoding of an attack label.
pub const NUM_A: f64 = 100.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VrsLabel {
    /// Not attack.
    Na,
    /// Attack.
    A,
}

/// Input sequences for one scenario run. Equality tests use |a - b| <= epsilon.
#[derive(Debug, Clone)]
pub struct VrsInput {
    pub delta_u: Vec<f64>,
    pub own_speed: Vec<f64>,
    pub epsilon: f64,
}

impl VrsInput {
    pub fn new(delta_u: Vec<f64>, own_speed: Vec<f64>, epsilon: f64) -> Result<Self, VrsError> {
        if delta_u.len() != own_speed.len() {
            return Err(VrsError::LengthMismatch {
                delta_u: delta_u.len(),
                own_speed: own_speed.len(),
            });
        }
        if delta_u.len() < 2 {
            return Err(VrsError::TooShort { got: delta_u.len() });
        }
        if epsilon <= 0.0 {
            return Err(VrsError::InvalidEpsilon { epsilon });
        }
        Ok(Self {
            delta_u,
            own_speed,
            epsilon,
        })
    }
}

#[derive(Debug, Clone)]
pub struct VrsOutput {
    pub labels: Vec<VrsLabel>,
    pub final_trigger: u8,
    pub encoded: Vec<f64>,
}

/// Label every observation. The first index is decided by comparing the first
/// two relative speed values; the loop then walks the remaining indices once
/// each, branching on whether the relative speed is zero, how it compares to
/// its predecessor and to the own speed, and a one-step lookahead at the
/// matched-speed boundary. The trigger persists across iterations and decides
/// the terminal branches.
pub fn vrs_labels(input: &VrsInput) -> Result<VrsOutput, VrsError> {
    let du = &input.delta_u;
    let u = &input.own_speed;
    let eps = input.epsilon;
    let m = du.len();
    let eq = |a: f64, b: f64| (a - b).abs() <= eps;

    let mut labels = Vec::with_capacity(m);
    let mut trigger: u8;

    if eq(du[0], du[1]) {
        labels.push(VrsLabel::Na);
        trigger = 0;
    } else {
        labels.push(VrsLabel::A);
        trigger = 1;
    }

    for k in 1..m {
        let has_next = k + 1 < m;
        let label = if !eq(du[k], 0.0) {
            if !eq(du[k], du[k - 1]) {
                if eq(du[k], u[k]) {
                    trigger = 0;
                    VrsLabel::Na
                } else {
                    trigger = 1;
                    VrsLabel::A
                }
            } else if !eq(du[k], u[k]) {
                trigger = 1;
                VrsLabel::A
            } else if has_next {
                if eq(du[k - 1], u[k - 1]) && eq(du[k + 1], u[k + 1]) {
                    trigger = 0;
                    VrsLabel::Na
                } else {
                    trigger = 1;
                    VrsLabel::A
                }
            } else if trigger == 0 {
                VrsLabel::Na
            } else {
                VrsLabel::A
            }
        } else if !eq(u[k], 0.0) {
            trigger = 1;
            VrsLabel::A
        } else if eq(du[k - 1], u[k - 1]) {
            if trigger == 0 {
                VrsLabel::Na
            } else {
                VrsLabel::A
            }
        } else {
            trigger = 1;
            VrsLabel::A
        };
        labels.push(label);
    }

    let encoded = encode_labels(&labels);
    Ok(VrsOutput {
        labels,
        final_trigger: trigger,
        encoded,
    })
}

/// Map labels to their extreme numeric feature values.
pub fn encode_labels(labels: &[VrsLabel]) -> Vec<f64> {
    labels
        .iter()
        .map(|l| match l {
            VrsLabel::Na => NUM_NA,
            VrsLabel::A => NUM_A,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn labels(delta_u: &[f64], own: &[f64]) -> (Vec<VrsLabel>, u8) {
        let out = vrs_labels(&VrsInput::new(delta_u.to_vec(), own.to_vec(), 0.5).unwrap()).unwrap();
        (out.labels, out.final_trigger)
    }

    #[test]
    fn steady_nonzero_relative_speed_is_not_attack() {
        let (l, t) = labels(&[15.0; 8], &[15.0; 8]);
        assert!(l.iter().all(|&x| x == VrsLabel::Na));
        assert_eq!(t, 0);
    }

    #[test]
    fn steady_zero_relative_speed_is_attack() {
        // First index only consults the first two relative speed values, so it
        // stays NA; every following index takes the zero-speed attack branch.
        let (l, t) = labels(&[0.0; 8], &[15.0; 8]);
        assert_eq!(l[0], VrsLabel::Na);
        assert!(l[1..].iter().all(|&x| x == VrsLabel::A));
        assert_eq!(t, 1);
    }

    #[test]
    fn deceleration_to_zero_stays_attack() {
        let (l, t) = labels(
            &[5.0, 4.0, 3.0, 2.0, 1.0, 0.0, 0.0, 0.0],
            &[15.0; 8],
        );
        assert!(l.iter().all(|&x| x == VrsLabel::A));
        assert_eq!(t, 1);
    }

    #[test]
    fn isolated_zero_dip_hand_trace() {
        // Hand trace: index 0 NA (15 == 15); index 1 takes the lookahead
        // branch and flags A because index 2 breaks the matched-speed run;
        // index 2 is A (zero relative speed, moving vehicle); index 3 resets
        // to NA (changed and matching own speed); index 4 ends on trigger 0.
        let (l, t) = labels(&[15.0, 15.0, 0.0, 15.0, 15.0], &[15.0; 5]);
        assert_eq!(
            l,
            vec![
                VrsLabel::Na,
                VrsLabel::A,
                VrsLabel::A,
                VrsLabel::Na,
                VrsLabel::Na
            ]
        );
        assert_eq!(t, 0);
    }

    #[test]
    fn zero_relative_speed_moving_vehicle_is_attack() {
        let (l, _) = labels(&[15.0, 15.0, 0.0, 0.0], &[15.0; 4]);
        assert_eq!(l[2], VrsLabel::A);
        assert_eq!(l[3], VrsLabel::A);
    }

    #[test]
    fn too_short_rejected() {
        assert!(VrsInput::new(vec![1.0], vec![1.0], 0.5).is_err());
        assert!(VrsInput::new(vec![1.0, 2.0], vec![1.0], 0.5).is_err());
        assert!(VrsInput::new(vec![1.0, 2.0], vec![1.0, 2.0], 0.0).is_err());
    }

    #[test]
    fn encode_maps_elementwise() {
        assert_eq!(encode_labels(&[VrsLabel::Na, VrsLabel::Na]), vec![0.0, 0.0]);
        assert_eq!(encode_labels(&[VrsLabel::A]), vec![100.0]);
        assert_eq!(
            encode_labels(&[VrsLabel::A, VrsLabel::Na, VrsLabel::A]),
            vec![100.0, 0.0, 100.0]
        );
    }

    proptest! {
        #[test]
        fn deterministic(seq in proptest::collection::vec(0.0f64..30.0, 2..40)) {
            let own = vec![15.0; seq.len()];
            let input = VrsInput::new(seq.clone(), own.clone(), 0.5).unwrap();
            let a = vrs_labels(&input).unwrap();
            let b = vrs_labels(&input).unwrap();
            prop_assert_eq!(a.labels, b.labels);
            prop_assert_eq!(a.final_trigger, b.final_trigger);
        }

        #[test]
        fn scale_invariance(
            seq in proptest::collection::vec(0.0f64..30.0, 2..40),
            scale in 0.1f64..10.0,
        ) {
            let own = vec![15.0; seq.len()];
            let base = vrs_labels(&VrsInput::new(seq.clone(), own.clone(), 0.5).unwrap()).unwrap();
            let scaled = vrs_labels(&VrsInput::new(
                seq.iter().map(|x| x * scale).collect(),
                own.iter().map(|x| x * scale).collect(),
                0.5 * scale,
            ).unwrap()).unwrap();
            prop_assert_eq!(base.labels, scaled.labels);
        }

        #[test]
        fn zero_delta_moving_vehicle_always_attack(
            prefix in proptest::collection::vec(1.0f64..30.0, 1..20),
            suffix in proptest::collection::vec(0.0f64..30.0, 0..20),
        ) {
            let mut seq = prefix.clone();
            let k = seq.len();
            seq.push(0.0);
            seq.extend(&suffix);
            let own = vec![15.0; seq.len()];
            let out = vrs_labels(&VrsInput::new(seq, own, 0.4).unwrap()).unwrap();
            prop_assert_eq!(out.labels[k], VrsLabel::A);
        }
    }

    #[test]
    fn terminal_branch_follows_trigger() {
        // Matched-speed run ending without a lookahead keeps the prior trigger.
        let (l, t) = labels(&[15.0, 15.0, 15.0], &[15.0, 15.0, 15.0]);
        assert_eq!(l[2], VrsLabel::Na);
        assert_eq!(t, 0);
        let (l, t) = labels(&[10.0, 15.0, 15.0], &[15.0, 15.0, 15.0]);
        // Index 1: changed and equal to own speed, so resets to NA; index 2
        // sees an unbroken matched run on both neighbors at the boundary.
        assert_eq!(l, vec![VrsLabel::A, VrsLabel::Na, VrsLabel::Na]);
        assert_eq!(t, 0);
    }
}
