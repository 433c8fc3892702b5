//! Quantum Wasserstein-2 distances between density matrices.
//!
//! Two optimal-transport distances are computed by solving the coupling
//! semidefinite program over bipartite states with prescribed marginals:
//!
//! * GMPC: `D² = ½ min Tr[Σ_n (H_n⊗𝟙 − 𝟙⊗H_n)² X]` with `Tr₂X = ρ`, `Tr₁X = σ`;
//! * DPT: `D² = ½ min Tr[Σ_n (H_nᵀ⊗𝟙 − 𝟙⊗H_n)² X]` with `Tr₂X = ρᵀ`, `Tr₁X = σ`.
//!
//! Alongside the distances the crate evaluates the closed-form quantities
//! they are tied to (skew information, quantum Fisher information, product
//! coupling cost) and ships the seeded verification campaigns in [`harness`].

pub mod error;
pub mod harness;
pub mod info;
pub mod linalg;
pub mod solver;
pub mod state;
pub mod wasserstein;

pub use error::{Error, Result};
