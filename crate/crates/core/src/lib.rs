//! Bound states of the generalized hyperbolic and trigonometric Pöschl–Teller
//! potentials.
//!
//! Energies come from two independent grid eigensolvers ([`dvr`] and
//! [`hofd`]); the tridiagonal-representation series wavefunctions are then
//! rebuilt from those energies by [`tra`] using the polynomial machinery in
//! [`orthopoly`].

pub mod cli;
pub mod dvr;
pub mod hofd;
pub mod linalg;
pub mod orthopoly;
pub mod potentials;
pub mod tra;
pub mod verify;

pub use dvr::{DvrConfig, Method, SpectrumResult};
pub use hofd::HofdConfig;
pub use potentials::{HyperbolicParams, Phase, Potential, SpectralPhase, TrigParams};
pub use tra::{Family, SeriesSolution};
