//! Exact counting of f-derangements and a simulator for the matching-attachment
//! heuristic that splits 5-regular bipartite graphs into paths with five edges.
//!
//! An *f-derangement* of a (possibly partial, possibly non-injective) map
//! `f: {1..n} -> {1..n}` is a permutation `g` with `g(i) != f(i)` wherever `f`
//! is defined. The [`count`] module computes these numbers four independent
//! ways, [`table`] builds the `D[A,B,C]` tables for 2-max maps, and
//! [`experiments`] checks the limiting behaviour against `1/e`.
//!
//! The [`graph`] and [`trial`] modules implement the decomposition pipeline:
//! perfect matching, directed `P4` decomposition of the remaining 4-regular
//! graph, matching attachment and verification, plus a Monte Carlo harness.

pub mod count;
pub mod error;
pub mod experiments;
pub mod function;
pub mod graph;
pub mod par;
pub mod sampling;
pub mod seed;
pub mod table;
pub mod trial;

pub use count::{
    classical_derangement_count, count_brute_force, count_by_inclusion_exclusion, count_recursion1, count_recursion2,
    factorial, Count, RecursionMemo, BRUTE_FORCE_CAP,
};
pub use error::{CountError, GraphError};
pub use function::{
    build_partial_function, is_f_derangement, multiplicity_profile, two_max_profile, MultiplicityProfile,
    PartialFunctionSpec, Permutation, Profile,
};
pub use par::Exec;
pub use table::{derangement_table, CountTable};
