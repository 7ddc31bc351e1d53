//! Representations of topological spaces built from numbered subbases with
//! strong inclusion relations, realized on lazily evaluated names.
//!
//! A [`kernel::Name`] is an infinite sequence of naturals produced on demand.
//! Partial computations run under a [`kernel::Fuel`] budget and report
//! exhaustion instead of looping.

pub mod basis;
pub mod cli;
pub mod equivalence;
pub mod kernel;
pub mod metric;
pub mod repr;
pub mod worlds;
