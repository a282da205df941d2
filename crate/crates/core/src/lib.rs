//! Hitting-time and return-time distribution laws for ergodic dynamical
//! systems.
//!
//! The crate is organised around the integral duality between the limit law
//! `F` of normalized hitting times and the limit law `F̃` of normalized return
//! times,
//!
//! ```text
//! F(t) = ∫₀ᵗ (1 − F̃(s)) ds,
//! ```
//!
//! together with the machinery needed to observe it on concrete systems:
//!
//! * [`distfn`]: step functions (return laws) and concave piecewise-linear
//!   functions (hitting laws), the transform in both directions, class checks,
//!   closed-form limit laws and sup-norm metrics.
//! * [`cfrac`]: Gauss map, continued-fraction digits, convergents, the natural
//!   extension and renormalization arcs of circle rotations.
//! * [`dynsys`]: finite cyclic rotations, rigid circle rotations in 64-bit
//!   fixed point, and the doubling map, with their target sets.
//! * [`hitstat`]: hitting times, the exact return decomposition of finite
//!   systems and empirical distribution functions of sampled systems.

pub mod cfrac;
pub mod distfn;
pub mod dynsys;
mod error;
pub mod hitstat;
pub mod scalar;

pub use error::{Error, ErrorKind, Result};
pub use scalar::Scalar;
