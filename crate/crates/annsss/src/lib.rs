//! Annular filtered Khovanov-Szabó complexes of braid closures over F2, and the
//! two-parameter family of filtration invariants `s_{r,t}`.
//!
//! Conventions used throughout:
//! - the 0-smoothing of a positive crossing is the braid-like one, of a negative crossing
//!   the cup-cap;
//! - a label bit 1 marks a circle labeled `-` (the variable `x` appears in the monomial);
//! - gradings are `h = |u| - n_-`, `q = |u| + #(+) - #(-) + n_+ - 2 n_-` and
//!   `k = #(nontrivial +) - #(nontrivial -)`.

pub mod braid_diagram;
pub mod chain_complex;
pub mod differentials;
pub mod error;
pub mod f2_linalg;
pub mod invariants;

pub use braid_diagram::{parse_braid, BraidWord, ClosureDiagram, Resolution};
pub use chain_complex::{Chain, Cube, Generator, GradingTriple, Orientation};
pub use error::{ComputeError, LinalgError, ParseError};
pub use f2_linalg::{BitMatrix, BitVec};
pub use invariants::{braid_complex, kappa, report, s_profile, s_rt, tensor_union, PLProfile, RationalParams, Q};
