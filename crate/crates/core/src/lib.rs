//! Vector erasure codes with all-symbol regenerating locality.
//!
//! The crate builds four code families over small finite fields:
//!
//! - [`pm_mbr`]: product-matrix MBR regenerating codes (`β = 1`),
//! - [`tamo_barg`]: scalar `(r, δ)` locally recoverable codes obtained by
//!   CRT lifting of low-degree polynomials over cosets of a cyclic subgroup,
//! - [`mbr_locality`]: vector codes whose local codes are product-matrix MBR
//!   codes, with cross-group dependencies chosen so that the code is both
//!   rate-optimal and `d_min`-optimal,
//! - [`pct_msr`]: vector codes with MSR locality obtained by stacking
//!   Tamo-Barg layers and applying a pairwise coupling transform per group.
//!
//! [`oracle`] certifies minimum distance, rank profiles and the distance
//! bounds by exhaustive rank enumeration, independently of the constructions.
//!
//! Everything here is pure computation over `alloc`; file formats and the
//! command-line front end live in the `locregen-cli` crate.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod code_model;
pub mod error;
pub mod gf;
pub mod gf_linalg;
pub mod mbr_locality;
pub mod oracle;
pub mod pct_msr;
pub mod pm_mbr;
pub mod poly_crt;
pub mod tamo_barg;

mod subsets;

pub use code_model::{Family, LocalityStructure, VectorCode, VectorCodeword};
pub use error::{Error, Result};
pub use gf::{GfContext, GfElement};
pub use gf_linalg::GfMatrix;
pub use poly_crt::{CosetStructure, Poly};
