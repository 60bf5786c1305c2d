//! Hybrid coin–walker entanglement in one-dimensional discrete-time quantum walks.
//!
//! The crate is organised bottom-up:
//!
//! * [`walk`] holds the joint walker/coin state, coin matrices and the `U = S·C` step.
//! * [`entanglement`] reduces a state to its coin density matrix, Bloch vector and
//!   Schmidt coefficients. The Schmidt norm `λ₁ + λ₂ ∈ [1, √2]` is the figure of merit.
//! * [`sequences`] builds and parses coin sequences, including the universal entangler
//!   `[(H,F)^m, F]` and its generalized-Hadamard and phase-compensated variants.
//! * [`asymptotics`] evaluates walks in momentum space via 4×4 Bloch superoperators and
//!   computes the `m → ∞` limit of the universal sequence.
//! * [`rl`] learns coin sequences with tabular Q-learning and checks them against an
//!   exhaustive search.

pub mod asymptotics;
pub mod entanglement;
pub mod error;
pub mod quadrature;
pub mod rl;
pub mod sequences;
pub mod walk;

pub use asymptotics::{AsymptoticResult, Superoperator4};
pub use entanglement::{BlochState, CoinDensity, SchmidtPair};
pub use error::{QwalkError, Result};
pub use rl::{Action, History, QTable, StateDistribution, TrainConfig, TrainingRecord};
pub use sequences::{CoinLabel, CoinSequence, SequenceEvaluation};
pub use walk::{Coin, CoinMatrix, InitialStateParams, WalkerCoinState};
