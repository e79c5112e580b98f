//! Exact computation of relative differential invariants of parameterized
//! surfaces, the symmetric product `⊙` of multi-index matrices, invariant
//! frames and the commuting invariant derivations built from them.
//!
//! All arithmetic is over arbitrary-precision rationals. Surfaces are
//! truncated power series ([`jet::SurfaceJet`]) centred at the origin of the
//! parameter domain; every routine tracks the order to which its result is
//! valid and refuses to go further.

pub mod decomp;
pub mod error;
pub mod frame;
pub mod invariant;
pub mod jet;
pub mod jet_linalg;
pub mod matrix;
pub mod multiindex;
pub mod random;
pub mod rational;
pub mod suite;
pub mod symalg;
pub mod trials;

pub use error::{Error, Result};
pub use frame::{
    build_frame, build_frame_with, chain_blocks, commutator_residual, delta_apply, frame_equivariance_check,
    closed_form_chain_row, ChainBlockMatrix, Frame, FrameKind, Normalization,
};
pub use invariant::{
    build_stacked_matrix, check_square, equivariance_check, invariant_as_jet, relative_invariant, weights,
    RepresentationChoice, Weights,
};
pub use jet::{ReparamJet, ScalarJet, SurfaceJet};
pub use matrix::Matrix;
pub use multiindex::MultiIndex;
pub use rational::Rational;
pub use symalg::{odot, odot_pow, scaled_sym_power, sym_det, IndexSpace, SymMatrix};
