//! Finite-dimensional operator-algebra toolkit for CCR flows on type III factors.
//!
//! The crate covers Weyl and CAR calculus on lattice test-function spaces,
//! truncated bosonic and exact fermionic Fock spaces, the doubled GNS
//! representation of quasi-free CCR states with its modular data, the
//! spectral classification of symbols `A = I ⊗ R`, symplectic decompositions
//! and a small toolkit of finite-dimensional *-algebras.
//!
//! Batch workloads (random instance sweeps, multi-start optimisation,
//! pairwise comparisons) run on rayon when the `parallel` feature is on and
//! fall back to plain iterators otherwise; see [`par`].

pub mod boson;
pub mod ccr;
pub mod classify;
mod error;
pub mod fermion;
pub mod gns;
pub mod linalg;
pub mod par;
pub mod sample;
pub mod symplectic;
mod tolerance;
pub mod vna;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use tolerance::ToleranceConfig;

/// Shorthand for a complex scalar.
pub type C64 = Complex64;
