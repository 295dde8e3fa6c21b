//! Enumeration and cross-checking engine for the hyperplane arrangements
//! `A^k_n` (`2 <= k <= n`) interpolating between the Shi arrangement
//! (`k = 2`) and the Ish arrangement (`k = n`).
//!
//! * [`word`]: words in `[n]^n`, permutations, labels.
//! * [`parking`]: the parking process, centre, `a↑k` and the parking-function
//!   predicates (classical, Ish, `k`-partial, permutation witness).
//! * [`graphs`]: `G^k_n`, the rooted graph with ordered neighbour lists,
//!   dfs-burning and its inverse, and the subset G-parking test.
//! * [`arrangement`]: hyperplanes, region enumeration, Pak-Stanley labels by
//!   three routes, region descriptions and arc diagrams.
//! * [`verify`]: the cross-validation harness and reproduction reports.

pub mod arrangement;
pub mod error;
pub mod graphs;
pub mod parking;
pub mod verify;
pub mod word;

pub use error::{Error, Result};
pub use word::{all_words, compose, Label, Permutation, Word};
