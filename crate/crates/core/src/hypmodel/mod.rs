//! Metric models of the cone sphere: the distance data the growth simulation consumes,
//! plus enough combinatorial placement data to draw the resulting arcs on the sphere.

mod hyperboloid;
mod regular;
mod synthetic;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::growth::GrowthEvent;
use crate::spheremap::{ArcId, ArcKind, SphereMap};

pub use hyperboloid::Point;
pub use regular::RegularDoubledPolygonModel;
pub use synthetic::{SyntheticArc, SyntheticModel, SyntheticModelJson};

/// Cone points are labelled `1..=2g+2` throughout.
pub trait MetricModel {
    fn genus(&self) -> u32;

    fn n_points(&self) -> usize {
        2 * self.genus() as usize + 2
    }

    /// Short identifier recorded in growth logs and reports.
    fn name(&self) -> String;

    fn pair_distance(&self, i: usize, j: usize) -> f64;

    /// Half the length of the shortest geodesic loop based at cone point `i`.
    fn loop_radius(&self, i: usize) -> f64;

    fn area(&self) -> f64;

    /// Placement of the arc drawn by each event, in event order.
    fn realize_arcs(&self, events: &[GrowthEvent]) -> Result<Vec<ArcEmbedding>>;

    /// The sphere map holding one arc per event (arc id = event index), plus any
    /// scaffolding the model needs to fix relative positions.
    fn arc_map(&self, events: &[GrowthEvent]) -> Result<SphereMap>;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sheet {
    Top,
    Bottom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Placement {
    /// Along a polygon side, which lies on the seam between the two sheets.
    Side,
    /// Through the interior of one polygon copy.
    Diagonal { sheet: Sheet },
    /// A copy of a prescribed arc of the synthetic scaffold map.
    Scaffold { arc: ArcId },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArcEmbedding {
    pub arc: ArcId,
    pub kind: ArcKind,
    pub i: usize,
    pub j: usize,
    pub placement: Placement,
}
