//! Combinatorial toolkit for touching families of Jordan regions and curves.
//!
//! A family is stored as a laminar containment forest plus a list of
//! contact points. On top of that representation the crate provides
//! validation and distance statistics, the bipartite contact graph of a
//! region family with its rotation system, an exact discharging engine,
//! coloring algorithms (including the `k + 1` peeling algorithm for simple
//! region families), sparsification experiments, instance generators and
//! exact integral/fractional directed cycle packing.

pub mod cli;
pub mod coloring;
pub mod cyclepack;
pub mod discharging;
pub mod error;
pub mod family;
pub mod generators;
pub mod graph;
pub mod lp;
pub mod rational;
pub mod region_graph;
pub mod scan;

pub use error::{Error, Result};
pub use family::{ContactFamily, ContactPoint, CurveId, FamilyKind};
pub use graph::Graph;
pub use rational::Rational;
