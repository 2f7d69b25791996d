//! Two-qubit entanglement toolkit.
//!
//! Wootters basis and concurrence of 4×4 density matrices, the
//! Lewenstein–Sanpera split ρ = λρ_sep + (1−λ)|ψ⟩⟨ψ| built on the boundary of
//! the separable set, a numerical check of its closed-form optimality
//! conditions, and state generation from the SO(4,c)/SO(4,r) coset
//! parameterization.
//!
//! All linear algebra is done by the small fixed-size kernel in [`matcore`].

#![allow(clippy::needless_range_loop)]

pub mod coset;
pub mod error;
pub mod io;
pub mod lsd;
pub mod matcore;
pub mod qstate;
pub mod report;
pub mod suite;
pub mod wootters;

pub use error::{Error, Result};
pub use matcore::{CMat, CMat2, CMat4, CVec, CVec2, CVec4, C64};
