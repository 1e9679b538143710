//! A twisted discrete thread between `(0,0)` and `(A,B)` straightening itself
//! into a Christoffel word through randomized local flips.
//!
//! The crate is organised bottom-up:
//!
//! * [`config`] lattice paths as two-letter words, heights, flips and the
//!   Christoffel target.
//! * [`rule`] the totally symmetric local rule of sight `s`.
//! * [`dynamics`] the random sequential scheduler, stop conditions and traces.
//! * [`analysis`] the energy function, exact drift and Monte Carlo statistics.
//! * [`oracle`] exhaustive ground truth on small instances.
//! * [`render`] ASCII and SVG drawings of configurations and trajectories.
//! * [`cli`] the command-line front end.

pub mod analysis;
pub mod cli;
pub mod config;
pub mod dynamics;
mod error;
pub mod oracle;
pub mod render;
pub mod rule;

pub use config::{Configuration, Letter, LineParams, Site, Topology, Word};
pub use error::{Error, Result};
pub use rule::{LocalRule, RuleParams, SlopeEstimate, ThreadRule};
