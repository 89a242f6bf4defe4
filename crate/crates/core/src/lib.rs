//! Perfect self-isometries of the block of the cyclic group `C_p`.
//!
//! The crate works entirely in exact arithmetic over `Z[ζ_p]`:
//!
//! - [`cyclotomic`]: the ring `Z[ζ_p]` and the `pO` membership test.
//! - [`characters`]: the character table of `C_p`, class functions and the
//!   two index actions on `Irr(B)`.
//! - [`isometry`]: signed isometries, the generalized character `μ_I`, the
//!   maps `I_μ`/`R_μ` and two independent perfectness checks.
//! - [`pigroup`]: generators, enumeration, affine decomposition and the
//!   structure checks of the perfect isometry group.

pub mod characters;
pub mod cyclotomic;
pub mod error;
pub mod isometry;
pub mod pigroup;

pub use characters::{inner_product, CharTable, ClassFunction};
pub use cyclotomic::{CycInt, Prime};
pub use error::{Error, Result};
pub use isometry::{
    build_mu, check_perfect_via_spaces, is_perfect, MuMatrix, Sign, SignProfile, SignedIsometry,
    Verdict,
};
pub use pigroup::{
    decompose, enumerate_pi, gen_aut, gen_linear, gen_negid, verify_structure, AffineCoords, Mode,
    PIGroupReport,
};
