//! Mutually unbiased bases in prime dimensions built from Weyl-Heisenberg
//! orbits of cubic-phase fiducials, with the Clifford-group machinery to
//! classify them.
//!
//! ```
//! use mubkit::mubs::{is_complete_mub, orbit_complete_mub, AlltopParameter};
//! use mubkit::linalg::Tolerance;
//!
//! let x = AlltopParameter::from_ints(1, 5)?;
//! let mub = orbit_complete_mub(x)?;
//! assert!(is_complete_mub(&mub, Tolerance::DEFAULT)?);
//! # Ok::<(), mubkit::Error>(())
//! ```

pub mod clifford;
pub mod error;
pub mod geometry;
pub mod linalg;
pub mod modring;
pub mod mubs;
pub mod sic3;
pub mod weylheisenberg;

pub use error::{Error, Result};

#[cfg(doctest)]
mod guide {
    #[doc = include_str!("../../../book/src/arithmetic.md")]
    mod arithmetic {}
    #[doc = include_str!("../../../book/src/displacements.md")]
    mod displacements {}
    #[doc = include_str!("../../../book/src/clifford.md")]
    mod clifford {}
    #[doc = include_str!("../../../book/src/orbit-mubs.md")]
    mod orbit_mubs {}
    #[doc = include_str!("../../../book/src/distances.md")]
    mod distances {}
    #[doc = include_str!("../../../book/src/sic.md")]
    mod sic {}
}
