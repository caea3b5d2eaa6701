//! Reservoir computing with a network of three coupled deoxyribozyme
//! oscillators in an open microfluidic reactor.
//!
//! - [`reactor`]: the reduced six-species ODE model and its fixed-step RK4 integrator.
//! - [`dynamics`]: closed-form Jacobian spectrum, oscillation period and regime checks.
//! - [`rc`]: input signals, state harvesting, least-squares readouts, a reference ESN.
//! - [`tasks`]: delay-recall targets and NRMSE.
//! - [`benchmark`]: the trial protocol and multi-trial statistics.
//! - [`config`], [`format`], [`cli`]: JSON configuration, CSV output and the command line.
//!
//! ```no_run
//! use molres::{benchmark::run_benchmark, config::ExperimentConfig};
//!
//! let stats = run_benchmark(&ExperimentConfig::default(), 100)?;
//! for c in &stats.cells {
//!     println!("{} {}: {:.3} ± {:.3}", c.mode, c.task, c.mean, c.std);
//! }
//! # Ok::<(), molres::Error>(())
//! ```

pub mod benchmark;
pub mod cli;
pub mod config;
pub mod dynamics;
pub mod error;
pub mod format;
pub mod rc;
pub mod reactor;
pub mod tasks;

pub use error::{Error, Result};
