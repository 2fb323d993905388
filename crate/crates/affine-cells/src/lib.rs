//! Exact computational algebra for the extended affine Weyl group of
//! type A: window-notation permutations, Kazhdan-Lusztig polynomials and
//! canonical-basis structure constants, Greene cell invariants, the
//! bijection from the canonical left-cell intersection onto dominant
//! weights of a product of general linear groups, and a brute-force
//! verification harness matching based-ring structure constants against
//! Littlewood-Richardson multiplicities.

pub mod error;
pub mod perm;
pub mod word;
pub mod laurent;
pub mod bruhat;
pub mod kl;
pub mod cells;
pub mod hecke;
pub mod canonical;
pub mod repring;
pub mod basedring;
pub mod par;

pub use error::{Error, Result};
pub use perm::AffinePerm;
pub use word::{reduced_word, Word};
pub use laurent::{KlPoly, Laurent};
pub use cells::Partition;
pub use canonical::{CanonicalElement, DominantWeight};
