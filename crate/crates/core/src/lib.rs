//! Link-level Monte Carlo simulator and tradeoff optimizer for
//! multi-antenna wireless information and power transfer.
//!
//! The crate models two transfer architectures over i.i.d. Rayleigh block
//! fading:
//!
//! * **Wireless powered communication** ([`wpc`]): a multi-antenna power
//!   transmitter charges a device for the first `tau` seconds of each
//!   slot; the device spends the harvested energy transmitting during the
//!   rest. Energy beamforming runs on limited feedback (random vector
//!   quantization, [`feedback`]), on a TDD reciprocity estimate, or on
//!   full CSI; [`optimize`] picks the switching point that maximizes the
//!   average rate or, on the deterministic large-array path, the energy
//!   efficiency in bits per Joule.
//! * **Simultaneous transfer** ([`swipt`]): rate-energy regions of the
//!   time-division and power-splitting protocols for a combined receiver,
//!   and the two-beam power-allocation sweep with secrecy rates for
//!   separated information/energy receivers.
//!
//! [`experiment`] wires these into seeded, reproducible parameter sweeps;
//! everything downstream of a master seed is bit-identical regardless of
//! thread count ([`rng`]).

// Guards use `!(x > 0.0)` on purpose: NaN must fail validation too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channel;
pub mod error;
pub mod experiment;
pub mod feedback;
pub mod optimize;
pub mod rng;
mod stats;
pub mod swipt;
pub mod units;
pub mod wpc;

pub use error::{Error, Result};
