//! Exact arithmetic for the Gepner-point central charge on the quintic 3-fold.
//!
//! The crate works in the cyclotomic field ℚ(ζ₂₀) so that every coefficient of
//! the charge, the twisted rewrite constants `a`, `b`, `c`, and the resulting
//! Bogomolov–Gieseker type bounds are represented exactly. Numeric values are
//! only ever produced as certified interval boxes.
//!
//! Modules:
//! - [`cyclotomic`]: field arithmetic, embeddings, exact sign decisions.
//! - [`ktheory`]: Chern characters on the quintic 3-fold and quintic surface.
//! - [`charges`]: Z_G†, the rewrite form, Z_{B,tH}, and the monodromy matrix.
//! - [`periods`]: Picard–Fuchs period series and their coefficient identities.
//! - [`bginequality`]: classical and strengthened BG checks, the rank-two certificate.
//! - [`surface`]: coherent systems on the quintic surface and the Clifford bound.
//! - [`tilt`]: slopes, phases, torsion pairs, HN ordering.
//! - [`trace`]: replayable proof traces.

pub mod bginequality;
pub mod charges;
pub mod cyclotomic;
pub mod error;
pub mod hp;
pub mod interval;
pub mod ktheory;
pub mod periods;
pub mod rational;
pub mod surface;
pub mod tilt;
pub mod trace;

pub use cyclotomic::{CycloNumber, Sign};
pub use error::{Error, Result};
pub use interval::{ComplexInterval, RealInterval};
pub use ktheory::{ChernVector, SurfaceClass};
pub use rational::Q;
pub use trace::{Outcome, ProofTrace, Verdict};
