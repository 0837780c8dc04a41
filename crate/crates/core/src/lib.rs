//! Quantum and classical Metropolis-Hastings engines for finite cost
//! landscapes, with time-to-solution benchmarking.
//!
//! The crate centers on one object, [`problem::ProblemSpec`]: a finite
//! set of bit-string labels with real costs and a move model connecting
//! them. Two engines consume it through the same canonical move
//! enumeration and acceptance table:
//!
//! - [`classical`]: Metropolis-Hastings chains, both sampled
//!   trajectories and exact distribution evolution, plus stationary and
//!   mixing-time analysis.
//! - [`qwalk`]: the coined quantum walk built from the same acceptance
//!   data, simulated exactly on a statevector, in three operator
//!   orderings.
//!
//! [`metrics`] turns success curves from either engine into
//! time-to-solution figures and fits scaling laws between them.
//! [`nqueens`] generates the permutation-encoded N-Queens benchmark
//! family. [`config`], [`report`], and [`runner`] back the `qmh`
//! command-line binary.
//!
//! ```
//! use qmh::classical::{InitMode, Schedule};
//! use qmh::metrics::TtsCurve;
//! use qmh::qwalk::{WalkEngine, WalkOrdering};
//!
//! let spec = qmh::nqueens::generate_instance(4, None).unwrap();
//! let schedule = Schedule::constant(1.0, 30).unwrap();
//! let mut engine = WalkEngine::new(&spec, 26).unwrap();
//! let curve = engine
//!     .walk_curve(&schedule, WalkOrdering::Lemieux, &InitMode::Uniform, 30)
//!     .unwrap();
//! let (t_star, tts_star) = TtsCurve::from_success_curve(&curve, 0.9)
//!     .unwrap()
//!     .min_tts()
//!     .unwrap();
//! assert!(t_star >= 1 && tts_star.is_finite());
//! ```

pub mod classical;
pub mod config;
pub mod error;
pub mod metrics;
pub mod nqueens;
pub mod problem;
pub mod qwalk;
pub mod report;
pub mod runner;

pub use error::{Error, Result};
