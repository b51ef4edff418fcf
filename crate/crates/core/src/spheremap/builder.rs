use std::collections::BTreeMap;

use super::{ArcId, ArcJson, ArcKind, DartId, MapJson, SphereMap, VertexId, VertexJson};
use crate::error::Result;

/// A slot between two consecutive darts at a vertex: new darts go right after `after`.
/// `after == None` addresses the single corner of a vertex with no darts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Corner {
    pub vertex: VertexId,
    pub after: Option<DartId>,
}

/// Incremental construction of planar maps by inserting arcs into corners.
///
/// Inserting an arc between two corners of the same face keeps the map planar.
#[derive(Debug, Clone, Default)]
pub struct MapBuilder {
    vertices: BTreeMap<VertexId, (bool, Vec<DartId>)>,
    arcs: BTreeMap<ArcId, ArcJson>,
    next_dart: DartId,
    next_arc: ArcId,
}

impl MapBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_map(map: &SphereMap) -> Self {
        let desc = map.to_description();
        let mut b = Self::new();
        for v in desc.vertices {
            b.vertices.insert(v.id, (v.cone, v.rotation));
        }
        for a in desc.arcs {
            b.next_dart = b.next_dart.max(a.darts[0] + 1).max(a.darts[1] + 1);
            b.next_arc = b.next_arc.max(a.id + 1);
            b.arcs.insert(a.id, a);
        }
        b
    }

    pub fn add_vertex(&mut self, id: VertexId, cone: bool) {
        self.vertices.insert(id, (cone, Vec::new()));
    }

    pub fn has_vertex(&self, id: VertexId) -> bool {
        self.vertices.contains_key(&id)
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.vertices.get(&v).map_or(0, |(_, r)| r.len())
    }

    /// The corner following the smallest dart at `v`.
    pub fn corner_after_smallest(&self, v: VertexId) -> Corner {
        Corner { vertex: v, after: self.vertices[&v].1.iter().copied().min() }
    }

    /// Inserts an arc with the next free id and returns that id.
    pub fn insert_arc(&mut self, kind: ArcKind, a: Corner, b: Corner) -> ArcId {
        let id = self.next_arc;
        self.insert_arc_with_id(id, kind, a, b);
        id
    }

    /// Inserts an arc from corner `a` to corner `b`. If both name the same corner the
    /// second dart lands right after the first, so the new arc bounds an empty face.
    pub fn insert_arc_with_id(&mut self, id: ArcId, kind: ArcKind, a: Corner, b: Corner) {
        assert!(!self.arcs.contains_key(&id), "arc id {id} already present");
        let x = self.next_dart;
        let y = x + 1;
        self.next_dart += 2;
        self.next_arc = self.next_arc.max(id + 1);
        Self::place(&mut self.vertices.get_mut(&a.vertex).expect("unknown vertex").1, a.after, x);
        let after_b = if a == b { Some(x) } else { b.after };
        let rot_b = &mut self.vertices.get_mut(&b.vertex).expect("unknown vertex").1;
        // An isolated vertex's only corner becomes the corner after `x` once `x` is placed.
        let after_b = if after_b.is_none() && !rot_b.is_empty() { Some(x) } else { after_b };
        Self::place(rot_b, after_b, y);
        self.arcs.insert(id, ArcJson { id, darts: [x, y], kind });
    }

    fn place(rot: &mut Vec<DartId>, after: Option<DartId>, d: DartId) {
        match after {
            None => {
                assert!(rot.is_empty(), "corner without a predecessor on a vertex with darts");
                rot.push(d);
            }
            Some(p) => {
                let i = rot.iter().position(|&e| e == p).expect("corner dart not at this vertex");
                rot.insert(i + 1, d);
            }
        }
    }

    pub fn description(&self, genus: u32) -> MapJson {
        MapJson {
            genus,
            vertices: self
                .vertices
                .iter()
                .map(|(&id, (cone, rot))| VertexJson { id, cone: *cone, rotation: rot.clone() })
                .collect(),
            arcs: self.arcs.values().cloned().collect(),
        }
    }

    pub fn build(&self, genus: u32) -> Result<SphereMap> {
        SphereMap::from_description(&self.description(genus))
    }

    pub(crate) fn build_unchecked(&self, genus: u32) -> Result<SphereMap> {
        SphereMap::from_description_unchecked(&self.description(genus))
    }

    /// Corners grouped by face of the current map; an isolated vertex is one face with
    /// a single corner. Faces follow the map's face order, isolated vertices come last.
    pub fn faces_with_corners(&self) -> Vec<Vec<Corner>> {
        let map = self.build_unchecked(0).expect("builder state is structurally valid");
        let mut out: Vec<Vec<Corner>> = map
            .faces()
            .iter()
            .map(|face| {
                face.iter()
                    .map(|&d| Corner {
                        vertex: map.vertices()[map.dart_vertex(d)].id,
                        after: Some(map.dart_id(map.prev(d))),
                    })
                    .collect()
            })
            .collect();
        for (&id, (_, rot)) in &self.vertices {
            if rot.is_empty() {
                out.push(vec![Corner { vertex: id, after: None }]);
            }
        }
        out
    }
}
