//! Age of Information (AoI) and throughput of a slotted ALOHA network without
//! feedback, where each node buffers only its latest sensor reading and may
//! retransmit it while it is stale.
//!
//! The crate is organised bottom-up:
//!
//! - [`model`]: system parameters and elementary channel quantities
//!   (access probability, success probability, throughput, reset statistics).
//! - [`sfg`]: polynomials, rational functions, Markov chains, signal flow
//!   graphs and Mason's gain formula; produces the inter-refresh time
//!   generating function and its moments.
//! - [`analytics`]: average AoI, both as `E[Z] + E[Y^2]/(2E[Y])` and in closed
//!   form, plus the minima of the throughput-optimal and reactive policies.
//! - [`lambert`] and [`policy`]: the Lambert W function and the
//!   retransmission-based policy optimisation.
//! - [`sim`]: slot-level Monte Carlo used to validate every closed form.
//! - [`cli`]: the `aoi-aloha` command-line front end (analyze, optimize,
//!   sweep, simulate, validate).
//!
//! ```
//! use aoi_aloha::{analytics, model::{AccessPolicy, ApproxMode, SystemConfig}};
//!
//! let config = SystemConfig::new(1, 1.0, 0.0).unwrap();
//! let policy = AccessPolicy::new(1.0, 1.0).unwrap();
//! let report = analytics::avg_aoi_closed_form(&config, &policy, ApproxMode::Exact).unwrap();
//! assert!((report.avg_aoi - 1.5).abs() < 1e-12);
//! ```

pub mod analytics;
pub mod cli;
pub mod error;
pub mod lambert;
pub mod model;
pub mod policy;
pub mod search;
pub mod sfg;
pub mod sim;

pub use error::{Error, Result};
