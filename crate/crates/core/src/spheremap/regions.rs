//! Regions cut out of the sphere by a subgraph, and the tree of regions cut out by loops.

use std::collections::{BTreeMap, VecDeque};

use petgraph::unionfind::UnionFind;
use serde::Serialize;

use super::{ArcId, ArcKind, SphereMap, Subgraph, VertexId};
use crate::error::{Error, Result};

/// Partition of the faces of a connected map into regions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Regions {
    pub face_region: Vec<usize>,
    pub count: usize,
}

/// One connected piece of the complement of a region, summarised by the cone points it holds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Unit {
    pub cones: Vec<VertexId>,
}

impl Unit {
    pub fn is_odd(&self) -> bool {
        self.cones.len() % 2 == 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RegionNode {
    pub faces: Vec<usize>,
    /// Loops on the boundary, ascending by id.
    pub loops: Vec<ArcId>,
    /// Cone vertices in the interior (not on any cutting loop).
    pub cones: Vec<VertexId>,
    pub parent: Option<usize>,
    pub depth: u32,
    pub level: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RegionTree {
    pub nodes: Vec<RegionNode>,
    pub root: usize,
    pub height: u32,
    pub face_region: Vec<usize>,
    /// For each loop, the region on its lower-level side and the one on its higher-level side.
    pub loop_sides: BTreeMap<ArcId, (usize, usize)>,
}

impl SphereMap {
    /// Faces glued across every arc for which `wall` is false. The map must be connected.
    pub fn regions_by(&self, wall: impl Fn(usize) -> bool) -> Regions {
        assert!(self.is_connected(), "regions require a connected map; use completed()");
        let nf = self.faces().len();
        let mut uf = UnionFind::<usize>::new(nf);
        for (ai, a) in self.arcs().iter().enumerate() {
            if !wall(ai) {
                uf.union(self.face_of(a.darts[0]), self.face_of(a.darts[1]));
            }
        }
        let mut label = BTreeMap::new();
        let face_region = (0..nf)
            .map(|f| {
                let r = uf.find(f);
                let n = label.len();
                *label.entry(r).or_insert(n)
            })
            .collect();
        Regions { face_region, count: label.len() }
    }

    /// Regions of the sphere minus `h` (arcs of `h` together with all cone points).
    pub fn complement_regions(&self, h: &Subgraph) -> Regions {
        self.regions_by(|ai| h.contains(self.arcs()[ai].id))
    }

    /// Connected pieces of the sphere minus region `omega`, where the removed set is `h`.
    pub fn units(&self, h: &Subgraph, regions: &Regions, omega: usize) -> Vec<Unit> {
        let nr = regions.count;
        let nv = self.vertices().len();
        let na = self.arcs().len();
        // Nodes: regions, then vertices, then arcs.
        let mut uf = UnionFind::<usize>::new(nr + nv + na);
        let mut present = vec![false; nr + nv + na];
        for (r, p) in present.iter_mut().enumerate().take(nr) {
            *p = r != omega;
        }
        for (ai, a) in self.arcs().iter().enumerate() {
            if !h.contains(a.id) {
                continue;
            }
            let node = nr + nv + ai;
            present[node] = true;
            let (u, w) = self.arc_endpoints(ai);
            uf.union(node, nr + u);
            uf.union(node, nr + w);
            for d in a.darts {
                let r = regions.face_region[self.face_of(d)];
                if r != omega {
                    uf.union(node, r);
                }
            }
        }
        for v in self.cone_vertices() {
            present[nr + v] = true;
            for &d in self.rotation(v) {
                let r = regions.face_region[self.face_of(d)];
                if r != omega {
                    uf.union(nr + v, r);
                }
            }
        }
        let mut groups: BTreeMap<usize, Vec<VertexId>> = BTreeMap::new();
        for (node, _) in present.iter().enumerate().filter(|(_, &p)| p) {
            groups.entry(uf.find(node)).or_default();
        }
        for v in self.cone_vertices() {
            groups.get_mut(&uf.find(nr + v)).expect("cone node present").push(self.vertices()[v].id);
        }
        let mut units: Vec<Unit> = groups.into_values().map(|cones| Unit { cones }).collect();
        units.sort_by(|a, b| a.cones.first().cmp(&b.cones.first()));
        units
    }

    /// Whether region `omega` contains a simple closed curve enclosing an odd number of cone points.
    pub fn region_admits_odd_curve(&self, h: &Subgraph, regions: &Regions, omega: usize) -> bool {
        self.units(h, regions, omega).iter().any(Unit::is_odd)
    }

    /// True when every region of the complement of `h` admits an odd curve, which is
    /// exactly when the lift of the complement to the double cover stays connected.
    pub fn is_nonseparating(&self, h: &Subgraph) -> bool {
        let map = self.completed();
        let regions = map.complement_regions(h);
        (0..regions.count).all(|r| map.region_admits_odd_curve(h, &regions, r))
    }

    /// Tree of regions of the sphere cut along the loops in `loops`. The map must be connected.
    ///
    /// The root is the disk region bounded by the loop with the smallest base vertex
    /// (ties go to the region holding the smallest dart id); levels count down from the
    /// root's eccentricity, so the root has the top level and far leaves sit at level 0.
    pub fn region_tree(&self, loops: &Subgraph) -> Result<RegionTree> {
        for a in loops.iter() {
            match self.arc(a) {
                Some(arc) if arc.kind == ArcKind::Loop => {}
                _ => return Err(Error::Input(format!("arc {a} is not a loop of the map"))),
            }
        }
        let regions = self.regions_by(|ai| loops.contains(self.arcs()[ai].id));
        let n = regions.count;
        if n != loops.len() + 1 {
            return Err(Error::Embedding(format!("{} loops cut the sphere into {n} regions", loops.len())));
        }
        let mut nodes: Vec<RegionNode> = (0..n)
            .map(|_| RegionNode { faces: Vec::new(), loops: Vec::new(), cones: Vec::new(), parent: None, depth: 0, level: 0 })
            .collect();
        for (f, &r) in regions.face_region.iter().enumerate() {
            nodes[r].faces.push(f);
        }
        let mut adj: Vec<Vec<(usize, ArcId)>> = vec![Vec::new(); n];
        let mut sides = BTreeMap::new();
        let mut on_loop = vec![false; self.vertices().len()];
        for a in loops.iter() {
            let ai = self.arc_index(a).expect("checked above");
            let arc = &self.arcs()[ai];
            let r0 = regions.face_region[self.face_of(arc.darts[0])];
            let r1 = regions.face_region[self.face_of(arc.darts[1])];
            if r0 == r1 {
                return Err(Error::Embedding(format!("loop {a} does not separate the sphere")));
            }
            adj[r0].push((r1, a));
            adj[r1].push((r0, a));
            nodes[r0].loops.push(a);
            nodes[r1].loops.push(a);
            sides.insert(a, (r0, r1));
            on_loop[self.dart_vertex(arc.darts[0])] = true;
        }
        for v in self.cone_vertices().filter(|&v| !on_loop[v]) {
            let r = match self.rotation(v).first() {
                Some(&d) => regions.face_region[self.face_of(d)],
                None => return Err(Error::Embedding("region tree requires a connected map".into())),
            };
            nodes[r].cones.push(self.vertices()[v].id);
        }

        let base = |a: ArcId| {
            let ai = self.arc_index(a).expect("loop exists");
            self.vertices()[self.arc_endpoints(ai).0].id
        };
        let smallest_dart = |r: usize| {
            nodes[r]
                .faces
                .iter()
                .flat_map(|&f| self.faces()[f].iter().map(|&d| self.dart_id(d)))
                .min()
                .unwrap_or(u32::MAX)
        };
        let root = (0..n)
            .filter(|&r| nodes[r].loops.len() == 1)
            .min_by_key(|&r| (base(nodes[r].loops[0]), smallest_dart(r)))
            .unwrap_or(0);

        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([root]);
        seen[root] = true;
        while let Some(r) = queue.pop_front() {
            let mut next: Vec<(usize, ArcId)> = adj[r].clone();
            next.sort_by_key(|&(_, a)| a);
            for (s, _) in next {
                if !seen[s] {
                    seen[s] = true;
                    nodes[s].parent = Some(r);
                    nodes[s].depth = nodes[r].depth + 1;
                    queue.push_back(s);
                }
            }
        }
        if seen.iter().any(|&s| !s) {
            return Err(Error::Embedding("region adjacency graph is disconnected".into()));
        }
        let height = nodes.iter().map(|x| x.depth).max().unwrap_or(0);
        for node in &mut nodes {
            node.level = height - node.depth;
            node.loops.sort_unstable();
        }
        let loop_sides = sides
            .into_iter()
            .map(|(a, (r0, r1))| if nodes[r0].level < nodes[r1].level { (a, (r0, r1)) } else { (a, (r1, r0)) })
            .collect();
        Ok(RegionTree { nodes, root, height, face_region: regions.face_region, loop_sides })
    }
}
