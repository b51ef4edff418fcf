//! Short homologically independent loops on hyperelliptic hyperbolic surfaces.
//!
//! The crate simulates the disk-growth process on the quotient cone sphere of a
//! hyperelliptic surface, prunes the resulting arc graph into a subgraph whose
//! lifts are homologically independent, checks that independence on an explicit
//! combinatorial branched double cover, and evaluates the closed-form length and
//! energy bounds attached to each step.
//!
//! Module map:
//!
//! - [`bounds`]: closed-form length bounds and constants.
//! - [`hypmodel`]: metric models of the cone sphere (regular doubled polygon, synthetic).
//! - [`growth`]: the event-driven disk-growth simulation.
//! - [`spheremap`]: rotation-system maps on the sphere, regions, levels, odd-separation.
//! - [`cover`]: the branched double cover and its homology oracle.
//! - [`prune`]: preliminary steps and the level-wise pruning algorithm.
//! - [`jacobian`]: collar widths and energy bounds.
//! - [`pipeline`]: the end-to-end composition used by the command line tool.

pub mod bounds;
pub mod canonical;
pub mod cover;
mod error;
pub mod gf2;
pub mod growth;
pub mod hypmodel;
pub mod jacobian;
pub mod pipeline;
pub mod prune;
pub mod spheremap;
pub mod synth;

pub use error::{Error, Result};
pub use growth::{GrowthEvent, GrowthLog, TouchKind};
pub use hypmodel::{MetricModel, RegularDoubledPolygonModel, SyntheticModel};
pub use prune::{Block, PruneResult};
pub use spheremap::{ArcKind, ComponentKind, SphereMap, Subgraph};
pub use cover::CoverComplex;
