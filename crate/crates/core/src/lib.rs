//! Planted random-graph colorings and single-vertex recoloring walks.
//!
//! The main entry point is [`greedy::greedy_recolor`], which moves every
//! vertex of a properly colored graph onto a fresh palette one color class at
//! a time and finishes the leftover vertices with a degeneracy-ordered pass.
//! [`transform`] chains two such walks into a path between arbitrary proper
//! colorings, and [`oracle`] enumerates the full recoloring graph of small
//! instances for cross-checking.

// `!(x > y)` is used on purpose so NaN inputs fail range checks.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod coloring;
pub mod error;
pub mod experiments;
pub mod generate;
pub mod graph;
pub mod greedy;
pub mod io;
pub mod oracle;
pub mod params;
pub mod residual;
pub mod transform;

pub use coloring::{verify_trace, Coloring, Move, Trace, TraceFault};
pub use error::{Error, Result};
pub use generate::{Partition, PlantedInstance, PlantedParams};
pub use graph::Graph;
pub use greedy::{greedy_recolor, GreedyOptions, GreedyReport, Selector};
pub use transform::{connect_pair, reverse_trace, transform_to_target, Threshold, TransformOptions};
