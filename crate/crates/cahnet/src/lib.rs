//! Delay-driven joint feedback-bit and transmit-power control for underlay
//! cognitive ad hoc networks.
//!
//! A cognitive ad hoc network (CAHNet) of `k` multi-antenna transmitter–
//! receiver pairs shares a licensed band with a single-antenna primary
//! user. Each cognitive transmitter beamforms into the null space of the
//! *quantized* transmitter→primary channel direction (fed back with a
//! limited number of bits) plus any intra-network victim directions, so the
//! residual interference at the primary user is governed entirely by the
//! quantization error. This crate sizes the two control knobs jointly:
//!
//! - **transmit power**: the smallest power whose ergodic rate meets each
//!   link's queueing-delay requirement ([`delay`]);
//! - **feedback bits**: the fewest total bits that keep the aggregate
//!   average interference at the primary user under a configured cap,
//!   allocated greedily by marginal interference reduction and
//!   cross-checked against an exhaustive oracle ([`control`]).
//!
//! Every analytical expression used by the controller is validated by
//! Monte Carlo channel simulation ([`montecarlo`]): realized interference,
//! SNR and rate distributions, the interference bound, and the queueing
//! delays themselves.
//!
//! The accompanying `cahnet` binary exposes scenario execution and
//! reproduction of the reference results as CSV; see the [`guide`].

pub mod channel;
pub mod config;
pub mod control;
pub mod delay;
pub mod error;
pub mod guide;
pub mod montecarlo;
pub mod numerics;

pub use error::{Error, Result};
