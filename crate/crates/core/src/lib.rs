//! Exact combinatorics of Serre weights for tame `n`-dimensional mod `p`
//! Galois representations.
//!
//! The crate is organised bottom-up:
//!
//! * [`lattice`]: weights, the Weyl group, the dot action, alcoves and the
//!   strong linkage order `↑`.
//! * [`characters`]: formal characters, Weyl characters and Brauer's formula.
//! * [`modreps`]: Serre weight labels, Steinberg factorisation, the operator
//!   `R`, and decomposition of Weyl modules into irreducible `GL_n(F_p)`
//!   representations (`n <= 3`).
//! * [`tametypes`]: tame inertial types and the pairs `(w, mu)` describing them.
//! * [`jantzen`]: the Hulsurkar matrix and Jantzen's reduction formula for
//!   Deligne-Lusztig representations.
//! * [`weightsets`]: the predicted weight sets `W?(tau)` along several routes.
//! * [`bdj2`]: the `GL_2` over `F_{p^f}` recipe and its comparison with `R_ext`.

pub mod bdj2;
pub mod characters;
pub mod jantzen;
pub mod lattice;
pub mod modreps;
pub mod tametypes;
pub mod weightsets;

mod util;

pub use lattice::{Perm, RootCtx, Weight};

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("degenerate characteristic: p = {p} must exceed n = {n}")]
    Degenerate { n: usize, p: i64 },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("consistency failure: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;
