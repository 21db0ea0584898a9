//! Domination game on isolate-free graphs.
//!
//! [`residual`] tracks the coloured residual graph, [`phase`] the four-phase
//! potential bookkeeping, [`strategy`] the greedy Dominator and the Staller
//! policies, [`solver`] exact game values and [`verify`] audits transcripts
//! and bounds over corpora built by [`corpus`].

pub mod corpus;
pub mod error;
pub mod generators;
pub mod graph;
pub mod phase;
pub mod residual;
pub mod rng;
pub mod solver;
pub mod strategy;
pub mod verify;

pub use error::{Error, Result};
pub use graph::Graph;
pub use residual::{Color, ResidualState, Shade};
pub use strategy::{play_game, Player, Transcript};
