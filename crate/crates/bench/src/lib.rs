//! Shared inputs for the benchmarks.

use hyperbasis_core::growth::{arc_graph, simulate};
use hyperbasis_core::{RegularDoubledPolygonModel, SphereMap};

pub const GENERA: [u32; 4] = [2, 4, 8, 12];

/// Arc graph of the regular model at genus `g`.
pub fn regular_arc_graph(g: u32) -> SphereMap {
    let model = RegularDoubledPolygonModel::new(g).expect("genus at least 2");
    arc_graph(&simulate(&model).expect("regular model grows"), &model).expect("arc graph embeds")
}
