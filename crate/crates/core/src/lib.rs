//! Quantized two-player games.
//!
//! Each player applies an SU(2) matrix to one qubit of an entangled pair
//! prepared by a referee entangler J; the outcome probabilities of
//! J†(U₁⊗U₂)J|00⟩ weight a classical 2x2 payoff table. On top of that sit a
//! mesh Nash-equilibrium search, a sweep over the entanglement angle, a
//! two-type Bayesian variant and the qutrit entangler.

pub mod bayes;
pub mod entangler;
pub mod equilibrium;
pub mod error;
pub mod game;
pub mod num;
pub mod qutrit;
pub mod strategy;
pub mod verify;

pub use error::{Error, Result};
