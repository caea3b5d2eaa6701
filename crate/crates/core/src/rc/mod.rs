//! Generic reservoir-computing pieces: input signals, state harvesting,
//! least-squares readouts and a reference echo-state network.

pub mod design;
pub mod esn;
pub mod input;
pub mod readout;

pub use design::{harvest, DesignMatrix, ReadoutMode};
pub use esn::{esn_step, scale_spectral_radius, spectral_radius, Activation, EsnParams};
pub use input::{generate_input, stream_rng, trial_seed};
pub use readout::{predict, train_readout, ReadoutRecord, ReadoutWeights, TrainOptions, TrainedReadout};
