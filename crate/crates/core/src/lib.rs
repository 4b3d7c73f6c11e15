//! Large-scale isoperimetry on metric measure graphs.
//!
//! Spaces are graphs with integer edge lengths and vertex measures, finite
//! or given by a neighbor oracle. The modules cover distances and
//! boundaries ([`space`]), isoperimetric profiles and their comparison
//! ([`profiles`]), generated counterexample spaces ([`generators`]), coarse
//! maps ([`coarse`]) and the experiment harness ([`harness`]). The guide
//! under `book/` walks through each of them.

pub mod coarse;
pub mod error;
pub mod generators;
pub mod harness;
pub mod profiles;
pub mod space;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/spaces.md")]
    mod spaces {}
    #[doc = include_str!("../../../book/src/profiles.md")]
    mod profiles {}
    #[doc = include_str!("../../../book/src/compare.md")]
    mod compare {}
    #[doc = include_str!("../../../book/src/generators.md")]
    mod generators {}
    #[doc = include_str!("../../../book/src/coarse.md")]
    mod coarse {}
    #[doc = include_str!("../../../book/src/experiments.md")]
    mod experiments {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
