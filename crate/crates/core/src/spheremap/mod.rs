//! Embedded multigraphs on the sphere, stored as rotation systems over darts.
//!
//! A map carries three kinds of arcs: `edge` and `loop` arcs form the arc graph
//! produced by disk growth, while `aux` arcs are scaffolding that fixes how the
//! components of the arc graph sit relative to each other on the sphere. Faces are
//! the orbits of `σ∘α`, where `σ` is the counter-clockwise rotation at each vertex
//! and `α` swaps the two darts of an arc.

mod builder;
mod regions;

use std::collections::{BTreeMap, BTreeSet};

use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use builder::{Corner, MapBuilder};
pub use regions::{RegionNode, RegionTree, Regions, Unit};

pub type VertexId = u32;
pub type ArcId = u32;
pub type DartId = u32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ArcKind {
    Edge,
    Loop,
    Aux,
}

impl ArcKind {
    /// Edges and loops belong to the arc graph; aux arcs do not.
    pub fn is_graph_arc(self) -> bool {
        !matches!(self, ArcKind::Aux)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vertex {
    pub id: VertexId,
    pub cone: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arc {
    pub id: ArcId,
    pub kind: ArcKind,
    /// Internal dart indices; `darts[0]` sits at the first endpoint.
    pub darts: [usize; 2],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Census {
    pub vertices: usize,
    pub arcs: usize,
    pub faces: usize,
    pub components: usize,
}

impl Census {
    pub fn euler_ok(&self) -> bool {
        self.vertices as i64 - self.arcs as i64 + self.faces as i64 == 1 + self.components as i64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ComponentKind {
    IsolatedVertex,
    Loop,
    Tree,
    LoopedTree,
    Invalid,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    pub kind: ComponentKind,
    pub vertices: Vec<VertexId>,
    pub arcs: Vec<ArcId>,
}

/// A set of graph arcs (edges and loops) of a map; all cone vertices are implicitly kept.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Subgraph(pub BTreeSet<ArcId>);

impl Subgraph {
    pub fn new(arcs: impl IntoIterator<Item = ArcId>) -> Self {
        Self(arcs.into_iter().collect())
    }

    pub fn contains(&self, a: ArcId) -> bool {
        self.0.contains(&a)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = ArcId> + '_ {
        self.0.iter().copied()
    }
}

#[derive(Debug, Clone)]
pub struct SphereMap {
    genus: u32,
    vertices: Vec<Vertex>,
    arcs: Vec<Arc>,
    dart_ids: Vec<DartId>,
    dart_vertex: Vec<usize>,
    dart_arc: Vec<usize>,
    next: Vec<usize>,
    prev: Vec<usize>,
    rotations: Vec<Vec<usize>>,
    face_of: Vec<usize>,
    faces: Vec<Vec<usize>>,
    vertex_index: BTreeMap<VertexId, usize>,
    arc_index: BTreeMap<ArcId, usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexJson {
    pub id: VertexId,
    pub cone: bool,
    #[serde(default)]
    pub rotation: Vec<DartId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArcJson {
    pub id: ArcId,
    pub darts: [DartId; 2],
    pub kind: ArcKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapJson {
    pub genus: u32,
    pub vertices: Vec<VertexJson>,
    pub arcs: Vec<ArcJson>,
}

fn embedding<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Embedding(msg.into()))
}

impl SphereMap {
    /// Builds and fully validates a map (structure, kinds, cone count, genus 0).
    pub fn from_description(desc: &MapJson) -> Result<Self> {
        let map = Self::from_description_unchecked(desc)?;
        map.validate()?;
        Ok(map)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let desc: MapJson = serde_json::from_str(text).map_err(|e| Error::Input(format!("map JSON: {e}")))?;
        Self::from_description(&desc)
    }

    pub fn to_description(&self) -> MapJson {
        MapJson {
            genus: self.genus,
            vertices: self
                .vertices
                .iter()
                .enumerate()
                .map(|(v, vx)| VertexJson {
                    id: vx.id,
                    cone: vx.cone,
                    rotation: self.rotations[v].iter().map(|&d| self.dart_ids[d]).collect(),
                })
                .collect(),
            arcs: self
                .arcs
                .iter()
                .map(|a| ArcJson { id: a.id, darts: [self.dart_ids[a.darts[0]], self.dart_ids[a.darts[1]]], kind: a.kind })
                .collect(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        crate::canonical::to_string_pretty(&self.to_description())
    }

    /// Structural checks only: every dart in one rotation and one arc.
    pub(crate) fn from_description_unchecked(desc: &MapJson) -> Result<Self> {
        let mut vertices: Vec<&VertexJson> = desc.vertices.iter().collect();
        vertices.sort_by_key(|v| v.id);
        let mut arcs_in: Vec<&ArcJson> = desc.arcs.iter().collect();
        arcs_in.sort_by_key(|a| a.id);

        let mut vertex_index = BTreeMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if vertex_index.insert(v.id, i).is_some() {
                return embedding(format!("duplicate vertex id {}", v.id));
            }
        }
        let mut arc_index = BTreeMap::new();
        let mut dart_set = BTreeSet::new();
        for (i, a) in arcs_in.iter().enumerate() {
            if arc_index.insert(a.id, i).is_some() {
                return embedding(format!("duplicate arc id {}", a.id));
            }
            for d in a.darts {
                if !dart_set.insert(d) {
                    return embedding(format!("dart {d} used by more than one arc"));
                }
            }
        }
        let dart_ids: Vec<DartId> = dart_set.into_iter().collect();
        let dart_pos: BTreeMap<DartId, usize> = dart_ids.iter().enumerate().map(|(i, &d)| (d, i)).collect();
        let n = dart_ids.len();

        let mut dart_vertex = vec![usize::MAX; n];
        let mut rotations = Vec::with_capacity(vertices.len());
        let mut next = vec![usize::MAX; n];
        let mut prev = vec![usize::MAX; n];
        for (vi, v) in vertices.iter().enumerate() {
            let mut rot = Vec::with_capacity(v.rotation.len());
            for d in &v.rotation {
                let Some(&di) = dart_pos.get(d) else {
                    return embedding(format!("vertex {} lists dart {d} which belongs to no arc", v.id));
                };
                if dart_vertex[di] != usize::MAX {
                    return embedding(format!("dart {d} appears in more than one rotation"));
                }
                dart_vertex[di] = vi;
                rot.push(di);
            }
            for (k, &d) in rot.iter().enumerate() {
                let nx = rot[(k + 1) % rot.len()];
                next[d] = nx;
                prev[nx] = d;
            }
            rotations.push(rot);
        }
        if let Some(d) = dart_vertex.iter().position(|&v| v == usize::MAX) {
            return embedding(format!("dart {} is not in any rotation", dart_ids[d]));
        }

        let mut dart_arc = vec![0; n];
        let arcs: Vec<Arc> = arcs_in
            .iter()
            .enumerate()
            .map(|(ai, a)| {
                let ds = [dart_pos[&a.darts[0]], dart_pos[&a.darts[1]]];
                dart_arc[ds[0]] = ai;
                dart_arc[ds[1]] = ai;
                Arc { id: a.id, kind: a.kind, darts: ds }
            })
            .collect();

        let mut map = SphereMap {
            genus: desc.genus,
            vertices: vertices.iter().map(|v| Vertex { id: v.id, cone: v.cone }).collect(),
            arcs,
            dart_ids,
            dart_vertex,
            dart_arc,
            next,
            prev,
            rotations,
            face_of: Vec::new(),
            faces: Vec::new(),
            vertex_index,
            arc_index,
        };
        map.trace_faces();
        Ok(map)
    }

    fn trace_faces(&mut self) {
        let n = self.dart_ids.len();
        self.face_of = vec![usize::MAX; n];
        self.faces.clear();
        for start in 0..n {
            if self.face_of[start] != usize::MAX {
                continue;
            }
            let f = self.faces.len();
            let mut orbit = Vec::new();
            let mut d = start;
            loop {
                self.face_of[d] = f;
                orbit.push(d);
                d = self.phi(d);
                if d == start {
                    break;
                }
            }
            self.faces.push(orbit);
        }
    }

    /// Full validation: arc kinds, cone vertex count, and genus 0 for every component.
    pub fn validate(&self) -> Result<()> {
        for a in &self.arcs {
            let u = self.dart_vertex[a.darts[0]];
            let w = self.dart_vertex[a.darts[1]];
            match a.kind {
                ArcKind::Loop if u != w => return embedding(format!("arc {} tagged loop joins distinct vertices", a.id)),
                ArcKind::Edge if u == w => return embedding(format!("arc {} tagged edge is a loop", a.id)),
                _ => {}
            }
            if a.kind.is_graph_arc() && !(self.vertices[u].cone && self.vertices[w].cone) {
                return embedding(format!("graph arc {} must join cone vertices", a.id));
            }
        }
        let cones = self.vertices.iter().filter(|v| v.cone).count();
        if cones != 2 * self.genus as usize + 2 {
            return embedding(format!("expected {} cone vertices, found {cones}", 2 * self.genus + 2));
        }
        let comp = self.vertex_components();
        let c = comp.iter().copied().max().map_or(0, |m| m + 1);
        let mut v = vec![0i64; c];
        let mut e = vec![0i64; c];
        let mut f = vec![0i64; c];
        for (vi, rot) in self.rotations.iter().enumerate() {
            v[comp[vi]] += 1;
            if rot.is_empty() {
                f[comp[vi]] += 1;
            }
        }
        for a in &self.arcs {
            e[comp[self.dart_vertex[a.darts[0]]]] += 1;
        }
        for face in &self.faces {
            f[comp[self.dart_vertex[face[0]]]] += 1;
        }
        for k in 0..c {
            let chi = v[k] - e[k] + f[k];
            if chi != 2 {
                return embedding(format!("component has Euler characteristic {chi}; the rotation system is not planar"));
            }
        }
        Ok(())
    }

    pub(crate) fn vertex_components(&self) -> Vec<usize> {
        let mut uf = UnionFind::<usize>::new(self.vertices.len());
        for a in &self.arcs {
            uf.union(self.dart_vertex[a.darts[0]], self.dart_vertex[a.darts[1]]);
        }
        let mut label = BTreeMap::new();
        (0..self.vertices.len())
            .map(|v| {
                let r = uf.find(v);
                let n = label.len();
                *label.entry(r).or_insert(n)
            })
            .collect()
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn dart_count(&self) -> usize {
        self.dart_ids.len()
    }

    pub fn faces(&self) -> &[Vec<usize>] {
        &self.faces
    }

    pub fn face_of(&self, dart: usize) -> usize {
        self.face_of[dart]
    }

    pub fn twin(&self, d: usize) -> usize {
        let a = &self.arcs[self.dart_arc[d]];
        if a.darts[0] == d {
            a.darts[1]
        } else {
            a.darts[0]
        }
    }

    /// Counter-clockwise successor around the dart's vertex.
    pub fn next(&self, d: usize) -> usize {
        self.next[d]
    }

    pub fn prev(&self, d: usize) -> usize {
        self.prev[d]
    }

    /// Face permutation `σ∘α`.
    pub fn phi(&self, d: usize) -> usize {
        self.next[self.twin(d)]
    }

    pub fn dart_vertex(&self, d: usize) -> usize {
        self.dart_vertex[d]
    }

    pub fn dart_arc(&self, d: usize) -> usize {
        self.dart_arc[d]
    }

    pub fn dart_id(&self, d: usize) -> DartId {
        self.dart_ids[d]
    }

    pub fn rotation(&self, v: usize) -> &[usize] {
        &self.rotations[v]
    }

    pub fn vertex_index(&self, id: VertexId) -> Option<usize> {
        self.vertex_index.get(&id).copied()
    }

    pub fn arc_index(&self, id: ArcId) -> Option<usize> {
        self.arc_index.get(&id).copied()
    }

    pub fn arc(&self, id: ArcId) -> Option<&Arc> {
        self.arc_index(id).map(|i| &self.arcs[i])
    }

    pub fn arc_endpoints(&self, ai: usize) -> (usize, usize) {
        let a = &self.arcs[ai];
        (self.dart_vertex[a.darts[0]], self.dart_vertex[a.darts[1]])
    }

    pub fn is_cone(&self, v: usize) -> bool {
        self.vertices[v].cone
    }

    pub fn cone_vertices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.vertices.len()).filter(|&v| self.vertices[v].cone)
    }

    /// Ids of all edge and loop arcs.
    pub fn graph_arcs(&self) -> Subgraph {
        Subgraph::new(self.arcs.iter().filter(|a| a.kind.is_graph_arc()).map(|a| a.id))
    }

    pub fn check_subgraph(&self, h: &Subgraph) -> Result<()> {
        for a in h.iter() {
            match self.arc(a) {
                Some(arc) if arc.kind.is_graph_arc() => {}
                Some(_) => return Err(Error::Input(format!("arc {a} is scaffolding, not a graph arc"))),
                None => return Err(Error::Input(format!("arc {a} does not exist"))),
            }
        }
        Ok(())
    }

    /// Vertex, arc, face and component counts. Faces are faces of the sphere, so a
    /// map with `C` components has `V − E + F = 1 + C`.
    pub fn census(&self) -> Census {
        let comps = self.vertex_components().into_iter().max().map_or(0, |m| m + 1);
        let isolated = self.rotations.iter().filter(|r| r.is_empty()).count();
        let traced = self.faces.len() + isolated;
        Census {
            vertices: self.vertices.len(),
            arcs: self.arcs.len(),
            faces: traced + 1 - comps.max(1),
            components: comps,
        }
    }

    pub fn is_connected(&self) -> bool {
        self.census().components <= 1
    }

    /// Sub-map on the given arcs, keeping every vertex and the induced rotation.
    pub fn restrict(&self, keep: impl Fn(&Arc) -> bool) -> SphereMap {
        let mut desc = self.to_description();
        let kept: BTreeSet<ArcId> = self.arcs.iter().filter(|a| keep(a)).map(|a| a.id).collect();
        desc.arcs.retain(|a| kept.contains(&a.id));
        let darts: BTreeSet<DartId> = desc.arcs.iter().flat_map(|a| a.darts).collect();
        for v in &mut desc.vertices {
            v.rotation.retain(|d| darts.contains(d));
        }
        Self::from_description_unchecked(&desc).expect("restriction of a valid map is structurally valid")
    }

    /// The arc graph alone (edges and loops, all vertices).
    pub fn graph_part(&self) -> SphereMap {
        self.restrict(|a| a.kind.is_graph_arc())
    }

    /// Connected version of this map.
    ///
    /// Components are ordered by their smallest vertex id. Every further component is
    /// joined to the first one by an aux arc from the corner after the smallest dart
    /// of the first component's smallest vertex to the corner after the smallest dart
    /// of its own smallest vertex, so all of them sit side by side in one face.
    pub fn completed(&self) -> SphereMap {
        if self.is_connected() {
            return self.clone();
        }
        let comp = self.vertex_components();
        let mut reps: BTreeMap<usize, usize> = BTreeMap::new();
        for v in 0..self.vertices.len() {
            reps.entry(comp[v]).or_insert(v);
        }
        let mut b = MapBuilder::from_map(self);
        let anchor_vertex = self.vertices[reps[&comp[0]]].id;
        for (&c, &v) in &reps {
            if c == comp[0] {
                continue;
            }
            let anchor = b.corner_after_smallest(anchor_vertex);
            let other = b.corner_after_smallest(self.vertices[v].id);
            b.insert_arc(ArcKind::Aux, anchor, other);
        }
        b.build_unchecked(self.genus).expect("completion keeps the map structurally valid")
    }

    /// Components of the arc graph restricted to `h`, classified by shape.
    pub fn classify_subgraph(&self, h: &Subgraph) -> Vec<Component> {
        let cones: Vec<usize> = self.cone_vertices().collect();
        let mut uf = UnionFind::<usize>::new(self.vertices.len());
        for a in h.iter() {
            if let Some(ai) = self.arc_index(a) {
                let (u, w) = self.arc_endpoints(ai);
                uf.union(u, w);
            }
        }
        let mut groups: BTreeMap<usize, Component> = BTreeMap::new();
        for &v in &cones {
            groups
                .entry(uf.find(v))
                .or_insert_with(|| Component { kind: ComponentKind::Invalid, vertices: Vec::new(), arcs: Vec::new() })
                .vertices
                .push(self.vertices[v].id);
        }
        for a in h.iter() {
            if let Some(ai) = self.arc_index(a) {
                let (u, _) = self.arc_endpoints(ai);
                if let Some(g) = groups.get_mut(&uf.find(u)) {
                    g.arcs.push(a);
                }
            }
        }
        let mut out: Vec<Component> = groups.into_values().collect();
        for c in &mut out {
            let loops = c
                .arcs
                .iter()
                .filter(|&&a| self.arc(a).map(|x| x.kind) == Some(ArcKind::Loop))
                .count();
            let edges = c.arcs.len() - loops;
            let nv = c.vertices.len();
            c.kind = match (edges, loops) {
                (0, 0) if nv == 1 => ComponentKind::IsolatedVertex,
                (0, 1) if nv == 1 => ComponentKind::Loop,
                (e, 0) if e >= 1 && e + 1 == nv => ComponentKind::Tree,
                (e, 1) if e >= 1 && e + 1 == nv => ComponentKind::LoopedTree,
                _ => ComponentKind::Invalid,
            };
        }
        out.sort_by_key(|c| c.vertices[0]);
        out
    }

    /// Shape of every component of the arc graph.
    pub fn classify_components(&self) -> Vec<Component> {
        self.classify_subgraph(&self.graph_arcs())
    }
}
