//! Reach times and quantitative resilience of driftless linear systems
//! `ẋ = B̄ ū`, `‖ū‖∞ ≤ u_max`, that lose control authority over some of
//! their actuators.
//!
//! The lost actuators keep producing bounded inputs that the controller can
//! observe but not command. The crate answers three questions:
//!
//! * how long the healthy and the malfunctioning plant need to move the
//!   state by `d` ([`reach`]),
//! * how much slower the malfunctioning plant can be in the worst
//!   direction, `r_q` ([`resilience`]),
//! * whether the polytope facts that make these one-LP computations valid
//!   hold on sampled instances ([`geometry`]).
//!
//! Everything reduces to small dense LPs solved by [`lp::solve`].

pub mod cli;
pub mod error;
pub mod geometry;
pub mod lp;
pub mod matrix;
pub mod reach;
pub mod resilience;
pub mod scenarios;
pub mod system;

pub use error::{Error, Result};
pub use matrix::Matrix;
pub use reach::{DisturbanceVertex, Options, RatioValue, ReachTime};
pub use resilience::{ColumnResilience, ResilienceReport, Verdict};
pub use system::{is_controllable, load_system, split, MalfunctionSplit, SystemSpec};
