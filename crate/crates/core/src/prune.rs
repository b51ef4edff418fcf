//! Pruning the arc graph down to a subgraph whose lifts stay homologically independent.
//!
//! Two preliminary steps strip loops off looped trees and a leaf edge off every larger
//! tree. The level-wise pass then walks the regions cut out by the remaining loops,
//! from the lowest level up, deleting loops (or, on a loopless sphere, one bone) until
//! every region holds an isolated vertex. Arc counts are tracked through blocks: each
//! kept arc belongs to a paired block (component plus an isolated vertex) or is a
//! singleton bone or loop.

use std::collections::{BTreeMap, BTreeSet};

use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};

use crate::bounds::kappa;
use crate::cover::{is_partial_basis, PartialBasisReport};
use crate::error::{Error, Result};
use crate::spheremap::{ArcId, ArcKind, ComponentKind, SphereMap, Subgraph, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Block {
    /// A tree, bone or loop grouped with an isolated vertex.
    Paired { component: Vec<ArcId>, vertex: VertexId },
    Bone { arc: ArcId },
    Loop { arc: ArcId },
}

impl Block {
    pub fn arcs(&self) -> Vec<ArcId> {
        match self {
            Block::Paired { component, .. } => component.clone(),
            Block::Bone { arc } | Block::Loop { arc } => vec![*arc],
        }
    }

    /// Arcs per cone point covered by the block.
    pub fn ratio(&self, map: &SphereMap) -> f64 {
        match self {
            Block::Paired { component, .. } => {
                let mut vs = BTreeSet::new();
                for &a in component {
                    let (u, w) = map.arc_endpoints(map.arc_index(a).expect("block arc exists"));
                    vs.insert(u);
                    vs.insert(w);
                }
                component.len() as f64 / (vs.len() + 1) as f64
            }
            Block::Bone { .. } => 0.5,
            Block::Loop { .. } => 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "action", rename_all = "snake_case")]
pub enum Action {
    DropLoop { arc: ArcId },
    DropLeafEdge { arc: ArcId, leaf: VertexId },
    Case { case: u8, level: u32, deleted: Option<ArcId>, freed: Vec<VertexId> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PruneResult {
    pub genus: u32,
    pub kept: Vec<ArcId>,
    pub deleted: Vec<ArcId>,
    pub blocks: Vec<Block>,
    pub trace: Vec<Action>,
}

impl PruneResult {
    pub fn subgraph(&self) -> Subgraph {
        Subgraph::new(self.kept.iter().copied())
    }

    /// The fired cases as `(case, level)` pairs, in order.
    pub fn cases(&self) -> Vec<(u8, u32)> {
        self.trace
            .iter()
            .filter_map(|a| match a {
                Action::Case { case, level, .. } => Some((*case, *level)),
                _ => None,
            })
            .collect()
    }

    pub fn to_json(&self) -> Result<String> {
        crate::canonical::to_string_pretty(self)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PruneReport {
    pub kept: usize,
    pub kappa: u32,
    pub regions: usize,
    pub cover: PartialBasisReport,
}

/// Outcome of the two preliminary steps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Preliminary {
    pub kept: BTreeSet<ArcId>,
    pub deleted: Vec<ArcId>,
    pub blocks: Vec<Block>,
    pub trace: Vec<Action>,
}

fn violated<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::GeometricAssumptionViolated(msg.into()))
}

pub fn preliminary_steps(map: &SphereMap) -> Result<Preliminary> {
    let mut kept: BTreeSet<ArcId> = map.graph_arcs().0;
    let mut deleted = Vec::new();
    let mut blocks = Vec::new();
    let mut trace = Vec::new();
    for c in map.classify_components() {
        if c.kind == ComponentKind::Invalid {
            return Err(Error::Input(format!(
                "component through vertex {} is neither a loop, a tree nor a looped tree",
                c.vertices[0]
            )));
        }
        if c.kind == ComponentKind::LoopedTree {
            let l = *c.arcs.iter().find(|&&a| map.arc(a).map(|x| x.kind) == Some(ArcKind::Loop)).expect("looped tree has a loop");
            kept.remove(&l);
            deleted.push(l);
            trace.push(Action::DropLoop { arc: l });
        }
    }
    for c in map.classify_subgraph(&Subgraph(kept.clone())) {
        if c.kind != ComponentKind::Tree || c.arcs.len() < 2 {
            continue;
        }
        let mut degree: BTreeMap<VertexId, usize> = BTreeMap::new();
        let mut edge_at: BTreeMap<VertexId, ArcId> = BTreeMap::new();
        for &a in &c.arcs {
            let (u, w) = map.arc_endpoints(map.arc_index(a).expect("arc exists"));
            for v in [u, w] {
                let id = map.vertices()[v].id;
                *degree.entry(id).or_default() += 1;
                edge_at.insert(id, a);
            }
        }
        let leaf = *degree.iter().filter(|(_, &d)| d == 1).map(|(v, _)| v).max().expect("a tree has leaves");
        let e = edge_at[&leaf];
        kept.remove(&e);
        deleted.push(e);
        trace.push(Action::DropLeafEdge { arc: e, leaf });
        blocks.push(Block::Paired { component: c.arcs.iter().copied().filter(|&a| a != e).collect(), vertex: leaf });
    }
    Ok(Preliminary { kept, deleted, blocks, trace })
}

struct State<'a> {
    k: &'a SphereMap,
    kept: BTreeSet<ArcId>,
    deleted: Vec<ArcId>,
    blocks: Vec<Block>,
    trace: Vec<Action>,
    paired_arcs: BTreeSet<ArcId>,
    uf: UnionFind<usize>,
    class_level: BTreeMap<usize, u32>,
    done: BTreeSet<usize>,
    /// Original region of each cone vertex (for loop bases: the loop's lower side).
    home: BTreeMap<usize, usize>,
    /// For each loop still in play: (lower side, higher side) original regions.
    loops: BTreeMap<ArcId, (usize, usize)>,
}

impl State<'_> {
    fn class(&mut self, r: usize) -> usize {
        self.uf.find(r)
    }

    fn base(&self, a: ArcId) -> VertexId {
        let ai = self.k.arc_index(a).expect("arc exists");
        self.k.vertices()[self.k.arc_endpoints(ai).0].id
    }

    fn endpoints(&self, a: ArcId) -> (usize, usize) {
        self.k.arc_endpoints(self.k.arc_index(a).expect("arc exists"))
    }

    fn degree(&self, v: usize) -> usize {
        self.kept
            .iter()
            .filter(|&&a| {
                let (u, w) = self.endpoints(a);
                u == v || w == v
            })
            .count()
    }

    fn inner_loops(&mut self, c: usize) -> Vec<ArcId> {
        let loops: Vec<(ArcId, usize)> = self.loops.iter().map(|(&a, &(_, hi))| (a, hi)).collect();
        let mut out: Vec<ArcId> = loops.into_iter().filter(|&(_, hi)| self.class(hi) == c).map(|(a, _)| a).collect();
        out.sort_by_key(|&a| (self.base(a), a));
        out
    }

    fn outer_loop(&mut self, c: usize) -> Option<ArcId> {
        let loops: Vec<(ArcId, usize)> = self.loops.iter().map(|(&a, &(lo, _))| (a, lo)).collect();
        loops.into_iter().find(|&(_, lo)| self.class(lo) == c).map(|(a, _)| a)
    }

    fn has_isolated_vertex(&mut self, c: usize) -> bool {
        let homes: Vec<(usize, usize)> = self.home.iter().map(|(&v, &r)| (v, r)).collect();
        homes.into_iter().any(|(v, r)| self.class(r) == c && self.degree(v) == 0)
    }

    /// Singleton bones with both endpoints in class `c`, by arc id.
    fn bones(&mut self, c: usize) -> Vec<ArcId> {
        let cands: Vec<ArcId> = self
            .kept
            .iter()
            .copied()
            .filter(|a| !self.paired_arcs.contains(a) && self.k.arc(*a).map(|x| x.kind) == Some(ArcKind::Edge))
            .collect();
        cands
            .into_iter()
            .filter(|&a| {
                let (u, _) = self.endpoints(a);
                let r = self.home[&u];
                self.class(r) == c
            })
            .collect()
    }

    fn delete_loop(&mut self, a: ArcId) -> VertexId {
        let (lo, hi) = self.loops.remove(&a).expect("loop in play");
        self.kept.remove(&a);
        self.deleted.push(a);
        let (clo, chi) = (self.class(lo), self.class(hi));
        let level = self.class_level[&clo].max(self.class_level[&chi]);
        self.uf.union(clo, chi);
        let root = self.class(lo);
        for stale in [clo, chi] {
            if stale != root {
                self.class_level.remove(&stale);
            }
        }
        self.class_level.insert(root, level);
        self.base(a)
    }

    fn pair(&mut self, component: ArcId, vertex: VertexId) -> Result<()> {
        if !self.paired_arcs.insert(component) {
            return violated(format!("arc {component} already belongs to a paired block"));
        }
        self.blocks.push(Block::Paired { component: vec![component], vertex });
        Ok(())
    }

    fn sort_key(&mut self, c: usize) -> (u32, VertexId, usize) {
        let loops: Vec<(ArcId, usize, usize)> = self.loops.iter().map(|(&a, &(lo, hi))| (a, lo, hi)).collect();
        let mut key = VertexId::MAX;
        for (a, lo, hi) in loops {
            if self.class(lo) == c || self.class(hi) == c {
                key = key.min(self.base(a));
            }
        }
        (self.class_level[&c], key, c)
    }
}

/// Runs the preliminary steps and the level-wise algorithm on an arc graph.
pub fn prune(map: &SphereMap) -> Result<PruneResult> {
    let pre = preliminary_steps(map)?;
    let k = map.completed();
    let loop_set = Subgraph::new(pre.kept.iter().copied().filter(|&a| k.arc(a).map(|x| x.kind) == Some(ArcKind::Loop)));
    let tree = k.region_tree(&loop_set)?;
    let n = tree.nodes.len();

    let mut home = BTreeMap::new();
    for (r, node) in tree.nodes.iter().enumerate() {
        for &v in &node.cones {
            home.insert(k.vertex_index(v).expect("cone exists"), r);
        }
    }
    let mut loops = BTreeMap::new();
    for (&a, &(lo, hi)) in &tree.loop_sides {
        let (u, _) = k.arc_endpoints(k.arc_index(a).expect("loop exists"));
        home.insert(u, lo);
        loops.insert(a, (lo, hi));
    }
    let paired_arcs = pre.blocks.iter().flat_map(Block::arcs).collect();
    let mut st = State {
        k: &k,
        kept: pre.kept,
        deleted: pre.deleted,
        blocks: pre.blocks,
        trace: pre.trace,
        paired_arcs,
        uf: UnionFind::new(n),
        class_level: (0..n).map(|r| (r, tree.nodes[r].level)).collect(),
        done: BTreeSet::new(),
        home,
        loops,
    };

    let max_steps = map.arcs().len() + n + 1;
    for _ in 0..=max_steps {
        let pending: Vec<usize> = st.class_level.keys().copied().filter(|c| !st.done.contains(c)).collect();
        let Some(c) = pending.into_iter().min_by_key(|&c| st.sort_key(c)) else {
            let kept: Vec<ArcId> = st.kept.iter().copied().collect();
            let mut blocks = st.blocks;
            for &a in &kept {
                if !st.paired_arcs.contains(&a) {
                    blocks.push(match k.arc(a).expect("arc exists").kind {
                        ArcKind::Loop => Block::Loop { arc: a },
                        _ => Block::Bone { arc: a },
                    });
                }
            }
            return Ok(PruneResult { genus: map.genus(), kept, deleted: st.deleted, blocks, trace: st.trace });
        };
        let level = st.class_level[&c];
        let inner = st.inner_loops(c);
        let action = if st.has_isolated_vertex(c) {
            st.done.insert(c);
            Action::Case { case: 1, level, deleted: None, freed: vec![] }
        } else if inner.len() >= 2 {
            let a = *inner.iter().find(|a| !st.paired_arcs.contains(a)).expect("some inner loop is unpaired");
            let p = st.delete_loop(a);
            let partner = *inner.iter().find(|&&b| b != a).expect("another inner loop remains");
            st.pair(partner, p)?;
            let c = st.class(c);
            st.done.insert(c);
            Action::Case { case: 2, level, deleted: Some(a), freed: vec![p] }
        } else if inner.len() == 1 && !st.bones(c).is_empty() {
            let a = inner[0];
            let bone = st.bones(c)[0];
            let p = st.delete_loop(a);
            st.pair(bone, p)?;
            let c = st.class(c);
            st.done.insert(c);
            Action::Case { case: 3, level, deleted: Some(a), freed: vec![p] }
        } else if inner.len() == 1 {
            let Some(outer) = st.outer_loop(c) else {
                return violated(format!("region at level {level} is a disk with one inner loop and nothing else"));
            };
            if st.paired_arcs.contains(&outer) {
                return violated(format!("outer loop {outer} already belongs to a paired block"));
            }
            let p = st.delete_loop(outer);
            st.pair(inner[0], p)?;
            Action::Case { case: 4, level, deleted: Some(outer), freed: vec![p] }
        } else if let Some(outer) = st.outer_loop(c) {
            let Some(&bone) = st.bones(c).first() else {
                return violated(format!("region at level {level} bounded by loop {outer} holds no cone points"));
            };
            if st.paired_arcs.contains(&outer) {
                return violated(format!("outer loop {outer} already belongs to a paired block"));
            }
            let p = st.delete_loop(outer);
            st.pair(bone, p)?;
            Action::Case { case: 5, level, deleted: Some(outer), freed: vec![p] }
        } else {
            let bones = st.bones(c);
            let only_bones = st.kept.iter().all(|a| bones.contains(a));
            if !only_bones || bones.len() < 3 {
                return violated("loopless sphere without isolated vertices is not a union of at least three bones");
            }
            let a = bones[0];
            st.kept.remove(&a);
            st.deleted.push(a);
            let (u, w) = st.endpoints(a);
            let freed = vec![k.vertices()[u].id, k.vertices()[w].id];
            st.pair(bones[1], freed[0])?;
            st.pair(bones[2], freed[1])?;
            st.done.insert(c);
            Action::Case { case: 6, level, deleted: Some(a), freed }
        };
        st.trace.push(action);
    }
    Err(Error::GeometricAssumptionViolated("pruning did not terminate".into()))
}

/// Checks the pruning invariants and the homological verdict of the cover.
pub fn verify(result: &PruneResult, map: &SphereMap) -> Result<PruneReport> {
    let fail = |msg: String| Err(Error::VerificationFailure(msg));
    let h = result.subgraph();
    map.check_subgraph(&h)?;
    let k = map.completed();
    let regions = k.complement_regions(&h);
    let mut has_isolated = vec![false; regions.count];
    for v in k.cone_vertices() {
        let touched = h.iter().any(|a| {
            let (x, y) = k.arc_endpoints(k.arc_index(a).expect("checked"));
            x == v || y == v
        });
        if !touched {
            if let Some(&d) = k.rotation(v).first() {
                has_isolated[regions.face_region[k.face_of(d)]] = true;
            }
        }
    }
    if let Some(r) = has_isolated.iter().position(|&x| !x) {
        return fail(format!("region {r} of the complement holds no isolated vertex"));
    }
    let kap = kappa(result.genus)?;
    if (h.len() as u32) < kap {
        return fail(format!("{} arcs kept, fewer than {kap}", h.len()));
    }
    let mut covered = BTreeSet::new();
    let mut paired_vertices = BTreeSet::new();
    for b in &result.blocks {
        for a in b.arcs() {
            if !covered.insert(a) {
                return fail(format!("arc {a} lies in two blocks"));
            }
        }
        if let Block::Paired { vertex, .. } = b {
            if !paired_vertices.insert(*vertex) {
                return fail(format!("vertex {vertex} lies in two paired blocks"));
            }
            let v = map.vertex_index(*vertex).expect("paired vertex exists");
            if h.iter().any(|a| {
                let (x, y) = map.arc_endpoints(map.arc_index(a).expect("checked"));
                x == v || y == v
            }) {
                return fail(format!("paired vertex {vertex} is not isolated"));
            }
        }
        if b.ratio(map) < 1.0 / 3.0 - 1e-12 {
            return fail(format!("block {b:?} has fewer than one arc per three vertices"));
        }
    }
    if covered != h.0 {
        return fail("blocks do not cover the kept arcs exactly".into());
    }
    let cover = is_partial_basis(map, &h)?;
    if !cover.partial_basis {
        return fail(format!("lift of the kept arcs separates the surface into {} pieces", cover.complement_components));
    }
    Ok(PruneReport { kept: h.len(), kappa: kap, regions: regions.count, cover })
}
