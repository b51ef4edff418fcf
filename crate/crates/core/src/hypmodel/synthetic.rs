use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{ArcEmbedding, MetricModel, Placement};
use crate::bounds::sphere_area;
use crate::error::{Error, Result};
use crate::growth::{GrowthEvent, TouchKind};
use crate::spheremap::{ArcId, ArcJson, ArcKind, MapJson, SphereMap};

/// One drawable arc: an edge `i–j` or a loop at `i`, realized by scaffold arc `placement`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SyntheticArc {
    pub kind: ArcKind,
    pub i: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j: Option<usize>,
    pub placement: ArcId,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticModelJson {
    pub genus: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub distances: Vec<Vec<f64>>,
    pub loop_radii: Vec<f64>,
    pub arcs: Vec<SyntheticArc>,
    /// Scaffold map: every candidate arc plus aux arcs, cone points labelled `1..=2g+2`.
    pub map: MapJson,
}

/// Distances and loop radii read from a table, with arc placements taken from a scaffold map.
#[derive(Debug, Clone)]
pub struct SyntheticModel {
    desc: SyntheticModelJson,
    scaffold: SphereMap,
}

fn input<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Input(msg.into()))
}

impl SyntheticModel {
    pub fn from_json(text: &str) -> Result<Self> {
        let desc: SyntheticModelJson =
            serde_json::from_str(text).map_err(|e| Error::Input(format!("synthetic model JSON: {e}")))?;
        Self::new(desc)
    }

    pub fn new(desc: SyntheticModelJson) -> Result<Self> {
        let g = desc.genus;
        if g < 2 {
            return input(format!("synthetic model needs genus at least 2, got {g}"));
        }
        let n = 2 * g as usize + 2;
        if desc.distances.len() != n || desc.distances.iter().any(|row| row.len() != n) {
            return input(format!("distance matrix must be {n}x{n}"));
        }
        for a in 0..n {
            for b in 0..n {
                let d = desc.distances[a][b];
                if !d.is_finite() {
                    return input(format!("distance ({}, {}) is not finite", a + 1, b + 1));
                }
                if a == b && d != 0.0 {
                    return input(format!("distance ({0}, {0}) must be zero", a + 1));
                }
                if a != b && d <= 0.0 {
                    return input(format!("distance ({}, {}) must be positive", a + 1, b + 1));
                }
                if (d - desc.distances[b][a]).abs() > 1e-9 * d.abs().max(1.0) {
                    return input(format!("distance matrix is not symmetric at ({}, {})", a + 1, b + 1));
                }
            }
        }
        if desc.loop_radii.len() != n || desc.loop_radii.iter().any(|r| !(r.is_finite() && *r > 0.0)) {
            return input(format!("need {n} positive loop radii"));
        }
        let scaffold = SphereMap::from_description(&desc.map)?;
        if scaffold.genus() != g {
            return input("scaffold map genus differs from model genus");
        }
        let cone_ids: Vec<u32> = scaffold.cone_vertices().map(|v| scaffold.vertices()[v].id).collect();
        if cone_ids != (1..=n as u32).collect::<Vec<_>>() {
            return input(format!("scaffold cone points must be labelled 1..={n}"));
        }
        for a in &desc.arcs {
            let j = match (a.kind, a.j) {
                (ArcKind::Edge, Some(j)) if j != a.i => j,
                (ArcKind::Loop, None) => a.i,
                (ArcKind::Loop, Some(j)) if j == a.i => j,
                _ => return input(format!("malformed arc entry at point {}", a.i)),
            };
            if !(1..=n).contains(&a.i) || !(1..=n).contains(&j) {
                return input(format!("arc entry {}-{j} out of range", a.i));
            }
            let Some(ai) = scaffold.arc_index(a.placement) else {
                return input(format!("placement arc {} not in scaffold", a.placement));
            };
            let (u, w) = scaffold.arc_endpoints(ai);
            let (u, w) = (scaffold.vertices()[u].id as usize, scaffold.vertices()[w].id as usize);
            if scaffold.arcs()[ai].kind != a.kind || !((u, w) == (a.i, j) || (u, w) == (j, a.i)) {
                return input(format!("placement arc {} does not match entry {}-{j}", a.placement, a.i));
            }
        }
        Ok(Self { desc, scaffold })
    }

    pub fn description(&self) -> &SyntheticModelJson {
        &self.desc
    }

    pub fn scaffold(&self) -> &SphereMap {
        &self.scaffold
    }

    fn entry_for(&self, e: &GrowthEvent) -> Result<&SyntheticArc> {
        let (kind, i, j) = match e.touch() {
            TouchKind::SelfTouch => (ArcKind::Loop, e.i, e.i),
            TouchKind::PairTouch => (ArcKind::Edge, e.i, e.j.unwrap_or(e.i)),
        };
        self.desc
            .arcs
            .iter()
            .find(|a| {
                let aj = a.j.unwrap_or(a.i);
                a.kind == kind && ((a.i, aj) == (i, j) || (a.i, aj) == (j, i))
            })
            .ok_or_else(|| Error::Embedding(format!("event {}: no arc placement for {i}-{j}", e.m)))
    }
}

impl MetricModel for SyntheticModel {
    fn genus(&self) -> u32 {
        self.desc.genus
    }

    fn name(&self) -> String {
        self.desc.name.clone().unwrap_or_else(|| "synthetic".to_string())
    }

    fn pair_distance(&self, i: usize, j: usize) -> f64 {
        self.desc.distances[i - 1][j - 1]
    }

    fn loop_radius(&self, i: usize) -> f64 {
        self.desc.loop_radii[i - 1]
    }

    fn area(&self) -> f64 {
        sphere_area(self.desc.genus).expect("genus validated on load")
    }

    fn realize_arcs(&self, events: &[GrowthEvent]) -> Result<Vec<ArcEmbedding>> {
        events
            .iter()
            .map(|e| {
                let a = self.entry_for(e)?;
                Ok(ArcEmbedding {
                    arc: e.m as ArcId,
                    kind: a.kind,
                    i: a.i,
                    j: a.j.unwrap_or(a.i),
                    placement: Placement::Scaffold { arc: a.placement },
                })
            })
            .collect()
    }

    fn arc_map(&self, events: &[GrowthEvent]) -> Result<SphereMap> {
        let placed = self.realize_arcs(events)?;
        let mut relabel: BTreeMap<ArcId, (ArcId, ArcKind)> = BTreeMap::new();
        for p in &placed {
            let Placement::Scaffold { arc } = p.placement else { unreachable!() };
            if relabel.insert(arc, (p.arc, p.kind)).is_some() {
                return Err(Error::Embedding(format!("scaffold arc {arc} realized twice")));
            }
        }
        let mut next_aux = events.len() as ArcId + 1;
        let mut desc = self.desc.map.clone();
        desc.arcs.sort_by_key(|a| a.id);
        desc.arcs = desc
            .arcs
            .into_iter()
            .map(|a| {
                let (id, kind) = relabel.get(&a.id).copied().unwrap_or_else(|| {
                    next_aux += 1;
                    (next_aux - 1, ArcKind::Aux)
                });
                ArcJson { id, darts: a.darts, kind }
            })
            .collect();
        SphereMap::from_description(&desc)
    }
}
