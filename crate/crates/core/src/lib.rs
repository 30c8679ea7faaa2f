//! Exact computation with cyclic `p^n`-covers in characteristic `p`.
//!
//! [`polyring`] has the polynomials, Laurent in the uniformizer `pi`.
//! [`witt`] does truncated Witt vector arithmetic. [`asw`] builds
//! Artin-Schreier-Witt towers and [`intmodel`] their integral models.
//! [`alphap`] decides `alpha_p`-torsor questions on special fibres, and
//! [`obstruction`] compares unshifted and shifted models.

pub mod alphap;
pub mod asw;
pub mod error;
pub mod intmodel;
pub mod obstruction;
pub mod polyring;
pub mod witt;

pub use error::{Error, Result};
pub use polyring::{CoeffRing, Monomial, Poly, Substitution, Valuation, Var, PI};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/overview.md")]
    mod overview {}
    #[doc = include_str!("../../../book/src/polynomials.md")]
    mod polynomials {}
    #[doc = include_str!("../../../book/src/witt.md")]
    mod witt {}
    #[doc = include_str!("../../../book/src/towers.md")]
    mod towers {}
    #[doc = include_str!("../../../book/src/models.md")]
    mod models {}
    #[doc = include_str!("../../../book/src/alphap.md")]
    mod alphap {}
    #[doc = include_str!("../../../book/src/example.md")]
    mod example {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
