//! Exact computations on inverse limits of piecewise-linear Markov maps of
//! finite graphs.
//!
//! The pipeline runs from a [`graph::FiniteGraph`] and a
//! [`map::PLGraphMap`] through the Markov partition ([`markov`]) to
//! graph-chains and their pull-backs ([`chain`], [`fhat`], [`refinement`]),
//! and ends in point classification and space comparison ([`classify`]).
//! All arithmetic is exact over the rationals.

pub mod catalog;
pub mod chain;
pub mod classify;
pub mod cli;
pub mod fhat;
pub mod graph;
pub mod input;
pub mod itinerary;
pub mod json;
pub mod map;
pub mod markov;
pub mod orbits;
pub mod path;
pub mod rational;
pub mod refinement;

#[cfg(test)]
mod fixtures;
