//! Simulation and detection of RF jamming in vehicular networks.
//!
//! A transmitter/receiver pair drives down a road through a Rician fading
//! channel while a jamming vehicle (constant or reactive) or a benign
//! roadside emitter degrades the link. The receiver estimates the jammer's
//! relative speed from pilot-based channel estimates, labels each observation
//! with the variations-of-relative-speed (VRS) heuristic, and classifies the
//! threat with from-scratch KNN and random forest models.
//!
//! Modules:
//! - [`channel`]: taps, path loss, Doppler, received samples
//! - [`scenario`]: road kinematics, jammer behaviors, the simulation driver
//! - [`estimator`]: MMSE channel estimation and relative-speed estimation
//! - [`vrs`]: the A / not-attack labeling pass
//! - [`features`]: SINR, RSSI, packet delivery, observation rows
//! - [`ml`]: split, scaling, KNN, random forest, confusion matrices
//! - [`dataset`]: CSV persistence and the experiment-case grid
//! - [`cli`]: the `rfjam` command-line front end

pub mod channel;
pub mod cli;
pub mod dataset;
pub mod error;
pub mod estimator;
pub mod features;
pub mod ml;
pub mod scenario;
pub mod vrs;

pub use channel::{RadioConfig, DOPPLER_LIGHT_SPEED, SPEED_OF_LIGHT};
pub use dataset::{ExperimentCase, DatasetCache};
pub use features::ObservationRecord;
pub use ml::{ConfusionMatrix, FeatureSet};
pub use scenario::{simulate_run, ScenarioConfig, ScenarioKind};
