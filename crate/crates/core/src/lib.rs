//! Generalized Buchdahl equations as Lie–Hamilton systems.
//!
//! The crate covers the undeformed and deformed book-algebra (`b2`) and
//! oscillator-algebra (`h4`) systems in both the Buchdahl chart `(x, y)` and
//! the canonical chart `(q, p)`, their closed-form solutions, a Dormand–Prince
//! integrator used as an independent oracle, and numerical checks of the
//! algebraic structure.

pub mod cli;
pub mod error;
pub mod exactsol;
pub mod funcspace;
pub mod integrator;
pub mod lhsystems;
pub mod structcheck;
pub mod zfactor;

pub use error::{Error, Result};
