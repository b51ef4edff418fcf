//! Explicit two-sheeted cover of the sphere branched over the cone points.
//!
//! The base complex is the star subdivision of the (completed) map: every face gets a
//! centre vertex joined by a spoke to each of its corners. Branch cuts are a set `B`
//! of spokes whose odd-degree vertices are exactly the cone points. Each base cell has
//! two copies labelled by a sheet bit, except cone vertices, which have one; crossing
//! an arc of `B` swaps sheets.

mod walk;

use std::collections::VecDeque;
use std::sync::OnceLock;

use petgraph::unionfind::UnionFind;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf2::{BitVector, EchelonBasis};
use crate::spheremap::{ArcId, ArcKind, Corner, MapBuilder, MapJson, SphereMap, Subgraph, VertexId};

pub use walk::{Walk, WalkStep};

#[derive(Debug)]
pub struct CoverComplex {
    genus: u32,
    base: SphereMap,
    subgraph: Subgraph,
    branch: Vec<bool>,
    /// Sheet offset of the corner just before each dart, relative to the first corner at its vertex.
    corner_offset: Vec<u8>,
    vertex_start: Vec<usize>,
    n_vertices: usize,
    boundaries: OnceLock<EchelonBasis>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CoverCensus {
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub euler_characteristic: i64,
    pub connected: bool,
    pub fixed_vertices: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PartialBasisReport {
    pub curves: usize,
    pub complement_components: usize,
    pub rank: usize,
    pub partial_basis: bool,
}

/// Star subdivision: a centre vertex per face with one spoke per corner.
fn star_subdivision(k: &SphereMap) -> Result<SphereMap> {
    let mut b = MapBuilder::from_map(k);
    let max_vertex = k.vertices().iter().map(|v| v.id).max().unwrap_or(0);
    for (f, face) in k.faces().iter().enumerate() {
        let centre: VertexId = max_vertex + 1 + f as VertexId;
        b.add_vertex(centre, false);
        let mut first: Option<u32> = None;
        for &d in face {
            let corner = Corner { vertex: k.vertices()[k.dart_vertex(d)].id, after: Some(k.dart_id(k.prev(d))) };
            // Each new spoke goes right after the first one, so the centre's rotation is
            // the reverse of the face order.
            let at_centre = Corner { vertex: centre, after: first };
            b.insert_arc(ArcKind::Aux, at_centre, corner);
            if first.is_none() {
                first = Some(b.corner_after_smallest(centre).after.expect("spoke just inserted"));
            }
        }
    }
    let map = b.build_unchecked(k.genus())?;
    map.validate()
        .map_err(|e| Error::Construction(format!("star subdivision is not planar: {e}")))?;
    Ok(map)
}

impl CoverComplex {
    /// Builds the cover for `map`; `h` is remembered for lifting and must consist of graph arcs.
    pub fn build(map: &SphereMap, h: &Subgraph) -> Result<Self> {
        map.check_subgraph(h)?;
        let k = map.completed();
        let base = star_subdivision(&k)?;
        let na = base.arcs().len();
        let nv = base.vertices().len();
        let last_arc = k.arcs().iter().map(|a| a.id).max();
        let is_spoke = |ai: usize| Some(base.arcs()[ai].id) > last_arc;

        // Spanning tree of the spoke graph, then the T-join by subtree parity.
        let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); nv];
        for ai in (0..na).filter(|&ai| is_spoke(ai)) {
            let (u, w) = base.arc_endpoints(ai);
            adj[u].push((w, ai));
            adj[w].push((u, ai));
        }
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; nv];
        let mut seen = vec![false; nv];
        let mut order = Vec::with_capacity(nv);
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(u) = queue.pop_front() {
            order.push(u);
            for &(w, ai) in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some((u, ai));
                    queue.push_back(w);
                }
            }
        }
        if order.len() != nv {
            return Err(Error::Construction("spoke graph is disconnected".into()));
        }
        let mut odd: Vec<bool> = (0..nv).map(|v| base.is_cone(v)).collect();
        let mut branch = vec![false; na];
        for &v in order.iter().rev() {
            if let Some((p, ai)) = parent[v] {
                if odd[v] {
                    branch[ai] = true;
                    odd[p] = !odd[p];
                }
            }
        }
        if odd[0] {
            return Err(Error::Construction("odd number of cone points; no branch set exists".into()));
        }

        let mut corner_offset = vec![0u8; base.dart_count()];
        let mut vertex_start = Vec::with_capacity(nv);
        let mut n_vertices = 0;
        for v in 0..nv {
            let rot = base.rotation(v);
            let mut o = 0u8;
            for &x in rot {
                corner_offset[x] = o;
                o ^= branch[base.dart_arc(x)] as u8;
            }
            if (o == 1) != base.is_cone(v) {
                return Err(Error::Construction(format!("branch parity wrong at vertex {}", base.vertices()[v].id)));
            }
            vertex_start.push(n_vertices);
            n_vertices += if base.is_cone(v) { 1 } else { 2 };
        }
        Ok(Self {
            genus: map.genus(),
            base,
            subgraph: h.clone(),
            branch,
            corner_offset,
            vertex_start,
            n_vertices,
            boundaries: OnceLock::new(),
        })
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    /// The subdivided base complex.
    pub fn base(&self) -> &SphereMap {
        &self.base
    }

    pub fn is_branch_arc(&self, ai: usize) -> bool {
        self.branch[ai]
    }

    pub fn branch_arcs(&self) -> Vec<ArcId> {
        (0..self.branch.len()).filter(|&ai| self.branch[ai]).map(|ai| self.base.arcs()[ai].id).collect()
    }

    pub fn vertex_count(&self) -> usize {
        self.n_vertices
    }

    pub fn edge_count(&self) -> usize {
        2 * self.base.arcs().len()
    }

    pub fn face_count(&self) -> usize {
        2 * self.base.faces().len()
    }

    /// Cover vertex over base vertex `v` in the sheet of the corner before dart `d`, seen from face sheet `s`.
    fn vertex_at_corner(&self, d: usize, s: u8) -> usize {
        let v = self.base.dart_vertex(d);
        if self.base.is_cone(v) {
            self.vertex_start[v]
        } else {
            self.vertex_start[v] + (s ^ self.corner_offset[d]) as usize
        }
    }

    /// Cover edge `(arc, sheet)`; its sheet is the sheet of the face on the reference dart's side.
    pub fn edge_cell(&self, ai: usize, sheet: u8) -> usize {
        2 * ai + sheet as usize
    }

    pub fn face_cell(&self, f: usize, sheet: u8) -> usize {
        2 * f + sheet as usize
    }

    pub fn edge_endpoints(&self, e: usize) -> (usize, usize) {
        let (ai, s) = (e / 2, (e % 2) as u8);
        let d = self.base.arcs()[ai].darts[0];
        let t = self.base.twin(d);
        (self.vertex_at_corner(d, s), self.vertex_at_corner(self.base.next(t), s))
    }

    /// The two face cells on either side of edge `e`.
    pub fn edge_faces(&self, e: usize) -> (usize, usize) {
        let (ai, s) = (e / 2, (e % 2) as u8);
        let [d0, d1] = self.base.arcs()[ai].darts;
        let b = self.branch[ai] as u8;
        (self.face_cell(self.base.face_of(d0), s), self.face_cell(self.base.face_of(d1), s ^ b))
    }

    pub fn face_boundary(&self, fc: usize) -> Vec<usize> {
        let (f, s) = (fc / 2, (fc % 2) as u8);
        self.base.faces()[f]
            .iter()
            .map(|&d| {
                let ai = self.base.dart_arc(d);
                let reference = self.base.arcs()[ai].darts[0] == d;
                let sheet = if reference { s } else { s ^ self.branch[ai] as u8 };
                self.edge_cell(ai, sheet)
            })
            .collect()
    }

    /// Base arc under a cover edge.
    pub fn project_edge(&self, e: usize) -> ArcId {
        self.base.arcs()[e / 2].id
    }

    pub fn deck_vertex(&self, v: usize) -> usize {
        let bv = self.vertex_start.partition_point(|&s| s <= v) - 1;
        if self.base.is_cone(bv) {
            v
        } else {
            self.vertex_start[bv] + (1 - (v - self.vertex_start[bv]))
        }
    }

    pub fn deck_edge(&self, e: usize) -> usize {
        e ^ 1
    }

    pub fn deck_face(&self, f: usize) -> usize {
        f ^ 1
    }

    pub fn census(&self) -> CoverCensus {
        let (v, e, f) = (self.vertex_count(), self.edge_count(), self.face_count());
        CoverCensus {
            vertices: v,
            edges: e,
            faces: f,
            euler_characteristic: v as i64 - e as i64 + f as i64,
            connected: self.complement_components(&[]) == 1,
            fixed_vertices: (0..v).filter(|&x| self.deck_vertex(x) == x).count(),
        }
    }

    /// Lift of a graph arc: one closed cycle for an edge, two closed cycles sharing the
    /// branch vertex for a loop. Cycles are lists of cover edges.
    pub fn lift(&self, arc: ArcId) -> Result<Vec<Vec<usize>>> {
        let ai = self.base.arc_index(arc).ok_or_else(|| Error::Input(format!("arc {arc} not in the base")))?;
        match self.base.arcs()[ai].kind {
            ArcKind::Edge => Ok(vec![vec![self.edge_cell(ai, 0), self.edge_cell(ai, 1)]]),
            ArcKind::Loop => Ok(vec![vec![self.edge_cell(ai, 0)], vec![self.edge_cell(ai, 1)]]),
            ArcKind::Aux => Err(Error::Input(format!("arc {arc} is not a graph arc"))),
        }
    }

    /// One closed curve per arc of the remembered subgraph; for a loop the copy on sheet 0 is kept.
    pub fn sharp_system(&self) -> Vec<Vec<usize>> {
        self.subgraph
            .iter()
            .map(|a| self.lift(a).expect("subgraph checked at construction").swap_remove(0))
            .collect()
    }

    pub fn chain(&self, edges: &[usize]) -> BitVector {
        let mut v = BitVector::zeros(self.edge_count());
        for &e in edges {
            v.flip(e);
        }
        v
    }

    /// Number of connected components of the cover with the given edges cut open.
    pub fn complement_components(&self, removed: &[usize]) -> usize {
        let nf = self.face_count();
        let mut cut = vec![false; self.edge_count()];
        for &e in removed {
            cut[e] = true;
        }
        let mut uf = UnionFind::<usize>::new(nf);
        for e in (0..self.edge_count()).filter(|&e| !cut[e]) {
            let (a, b) = self.edge_faces(e);
            uf.union(a, b);
        }
        let mut roots: Vec<usize> = (0..nf).map(|f| uf.find(f)).collect();
        roots.sort_unstable();
        roots.dedup();
        roots.len()
    }

    fn boundary_basis(&self) -> &EchelonBasis {
        self.boundaries.get_or_init(|| {
            let mut basis = EchelonBasis::new();
            for f in 0..self.face_count() {
                basis.insert(&self.chain(&self.face_boundary(f)));
            }
            basis
        })
    }

    pub fn is_cycle(&self, c: &BitVector) -> bool {
        let mut deg = vec![0u8; self.vertex_count()];
        for e in c.ones() {
            let (a, b) = self.edge_endpoints(e);
            deg[a] ^= 1;
            deg[b] ^= 1;
        }
        deg.iter().all(|&x| x == 0)
    }

    /// Rank of the span of `cycles` in first homology with two-element coefficients.
    pub fn z2_cycle_rank(&self, cycles: &[BitVector]) -> Result<usize> {
        let mut basis = self.boundary_basis().clone();
        let base_rank = basis.rank();
        for (i, c) in cycles.iter().enumerate() {
            if c.len() != self.edge_count() || !self.is_cycle(c) {
                return Err(Error::NotACycle(format!("chain {i} has nonzero boundary")));
            }
            basis.insert(c);
        }
        Ok(basis.rank() - base_rank)
    }

    /// Connectivity of the complement of the sharp system, and the rank of its classes.
    pub fn partial_basis_report(&self) -> Result<PartialBasisReport> {
        let system = self.sharp_system();
        let removed: Vec<usize> = system.iter().flatten().copied().collect();
        let complement_components = self.complement_components(&removed);
        let chains: Vec<BitVector> = system.iter().map(|c| self.chain(c)).collect();
        let rank = self.z2_cycle_rank(&chains)?;
        let partial_basis = complement_components == 1;
        if partial_basis && rank != system.len() {
            return Err(Error::VerificationFailure(format!(
                "complement is connected but {} curves span rank {rank}",
                system.len()
            )));
        }
        Ok(PartialBasisReport { curves: system.len(), complement_components, rank, partial_basis })
    }

    pub fn debug_json(&self) -> CoverDebug {
        let base_faces = self.base.faces().len();
        CoverDebug {
            genus: self.genus,
            base: self.base.to_description(),
            branch_arcs: self.branch_arcs(),
            subgraph: self.subgraph.iter().collect(),
            vertices: (0..self.vertex_count())
                .map(|v| {
                    let bv = self.vertex_start.partition_point(|&s| s <= v) - 1;
                    CellJson {
                        cell: v,
                        base: self.base.vertices()[bv].id as usize,
                        sheet: (v - self.vertex_start[bv]) as u8,
                        boundary: Vec::new(),
                        involution: self.deck_vertex(v),
                    }
                })
                .collect(),
            edges: (0..self.edge_count())
                .map(|e| {
                    let (a, b) = self.edge_endpoints(e);
                    CellJson {
                        cell: e,
                        base: self.project_edge(e) as usize,
                        sheet: (e % 2) as u8,
                        boundary: vec![a, b],
                        involution: self.deck_edge(e),
                    }
                })
                .collect(),
            faces: (0..2 * base_faces)
                .map(|f| CellJson {
                    cell: f,
                    base: f / 2,
                    sheet: (f % 2) as u8,
                    boundary: self.face_boundary(f),
                    involution: self.deck_face(f),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CellJson {
    pub cell: usize,
    pub base: usize,
    pub sheet: u8,
    pub boundary: Vec<usize>,
    pub involution: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct CoverDebug {
    pub genus: u32,
    pub base: MapJson,
    pub branch_arcs: Vec<ArcId>,
    pub subgraph: Vec<ArcId>,
    pub vertices: Vec<CellJson>,
    pub edges: Vec<CellJson>,
    pub faces: Vec<CellJson>,
}

/// Builds the cover of `map` and checks whether the lift of `h` is a partial homology basis.
pub fn is_partial_basis(map: &SphereMap, h: &Subgraph) -> Result<PartialBasisReport> {
    CoverComplex::build(map, h)?.partial_basis_report()
}
