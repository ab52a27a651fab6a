//! Spin decoherence of massive spin-1/2 particles crossing a plane
//! gravitational wave.
//!
//! The pipeline runs from the wave profile through the spacetime geometry,
//! the forced worldline and its local Wigner rotation, the momentum-averaged
//! decoherence factor `ū`, the induced single-qubit channel, and finally the
//! entropy, negativity, and entanglement-swapping ladder of the spin state.
//!
//! Two numerical tracks run side by side:
//!
//! * the **matrix track** builds explicit density operators in double
//!   precision and is trustworthy while the decoherence deficit stays above
//!   roughly `1e-14`;
//! * the **deficit track** carries `1 - |ū|` (and its powers) directly, which
//!   keeps full relative accuracy at realistic wave amplitudes around `1e-21`
//!   where `|ū|` rounds to exactly `1.0`.
//!
//! Coordinates are always ordered `(t, x, y, z)` with `c = 1` and metric
//! signature `(-, +, +, +)`.

#![allow(clippy::needless_range_loop)]

pub mod error;
pub mod geometry;
pub mod kinematics;
pub mod oracles;
pub mod quantum;
pub mod swapping;
pub mod wavepacket;
pub mod waveform;

pub use error::{Error, Result};
pub use geometry::Event;
pub use kinematics::{FrameParams, LocalMomentum, OmegaMethod, WignerAngle};
pub use quantum::{BasisOp, ChannelU, DensityOperator};
pub use wavepacket::{DecoherenceFactor, WavePacket};
pub use waveform::Waveform;

/// Which numerical path produced (or should produce) a quantity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Track {
    Matrix,
    Deficit,
    Both,
}

impl Track {
    pub fn matrix(self) -> bool {
        matches!(self, Track::Matrix | Track::Both)
    }

    pub fn deficit(self) -> bool {
        matches!(self, Track::Deficit | Track::Both)
    }
}
