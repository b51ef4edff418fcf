//! Synthetic inputs: the loop-around-bone family, a non-geometric failure case, and
//! seeded random maps whose graph arcs obey the growth rule.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{domain, Result};
use crate::hypmodel::{SyntheticArc, SyntheticModel, SyntheticModelJson};
use crate::spheremap::{ArcKind, Corner, MapBuilder, SphereMap, Subgraph, VertexId};

fn matrix(n: usize, far: f64, near: &[(usize, usize, f64)]) -> Vec<Vec<f64>> {
    let mut d = vec![vec![far; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0.0;
    }
    for &(i, j, x) in near {
        d[i - 1][j - 1] = x;
        d[j - 1][i - 1] = x;
    }
    d
}

/// `n` blocks, each a loop at `3b−2` surrounding the bone `(3b−1, 3b)`; `n` must be even.
///
/// Bones touch first (pairwise distance 0.6), then every loop base self-touches at 0.5.
pub fn loop_around_bone_family(n: usize) -> Result<SyntheticModel> {
    if n < 2 || n % 2 != 0 {
        return domain(format!("the family needs an even number of blocks, at least 2; got {n}"));
    }
    let points = 3 * n;
    let genus = (points / 2 - 1) as u32;
    let hub: VertexId = points as VertexId + 1;
    let mut b = MapBuilder::new();
    for v in 1..=points as VertexId {
        b.add_vertex(v, true);
    }
    b.add_vertex(hub, false);
    let mut arcs = Vec::new();
    let mut near = Vec::new();
    let mut radii = vec![2.0; points];
    for blk in 1..=n {
        let (base, x, y) = (3 * blk - 2, 3 * blk - 1, 3 * blk);
        let (bv, xv, yv) = (base as VertexId, x as VertexId, y as VertexId);
        b.insert_arc(ArcKind::Aux, b.corner_after_smallest(hub), Corner { vertex: bv, after: None });
        let after_spoke = b.corner_after_smallest(bv);
        let lp = b.insert_arc(ArcKind::Loop, after_spoke, after_spoke);
        let inside = Corner { vertex: bv, after: Some(loop_first_dart(&b, bv)) };
        b.insert_arc(ArcKind::Aux, inside, Corner { vertex: xv, after: None });
        let bone = b.insert_arc(ArcKind::Edge, b.corner_after_smallest(xv), Corner { vertex: yv, after: None });
        arcs.push(SyntheticArc { kind: ArcKind::Loop, i: base, j: None, placement: lp });
        arcs.push(SyntheticArc { kind: ArcKind::Edge, i: x, j: Some(y), placement: bone });
        near.push((x, y, 0.6));
        radii[base - 1] = 0.5;
    }
    SyntheticModel::new(SyntheticModelJson {
        genus,
        name: Some(format!("loop-around-bone-{n}")),
        distances: matrix(points, 3.0, &near),
        loop_radii: radii,
        arcs,
        map: b.description(genus),
    })
}

/// The first dart of the loop at `v`. The loop was inserted into a single corner, so its
/// darts are consecutive and the corner between them lies on the empty side.
fn loop_first_dart(b: &MapBuilder, v: VertexId) -> u32 {
    let desc = b.description(0);
    let rot = &desc.vertices.iter().find(|x| x.id == v).expect("vertex exists").rotation;
    let loop_arc = desc.arcs.iter().find(|a| a.kind == ArcKind::Loop && rot.contains(&a.darts[0])).expect("loop at v");
    let i = rot.iter().position(|&d| d == loop_arc.darts[0]).expect("dart in rotation");
    let j = rot.iter().position(|&d| d == loop_arc.darts[1]).expect("dart in rotation");
    if (i + 1) % rot.len() == j {
        rot[i]
    } else {
        rot[j]
    }
}

/// Genus 3, eight cone points each carrying an empty loop. The growth process draws
/// all eight loops, but no hyperbolic cone metric produces this picture, and pruning
/// reports it.
pub fn sibling_empty_loops() -> SyntheticModel {
    let points = 8;
    let genus = 3;
    let hub: VertexId = points as VertexId + 1;
    let mut b = MapBuilder::new();
    for v in 1..=points as VertexId {
        b.add_vertex(v, true);
    }
    b.add_vertex(hub, false);
    let mut arcs = Vec::new();
    for v in 1..=points as VertexId {
        b.insert_arc(ArcKind::Aux, b.corner_after_smallest(hub), Corner { vertex: v, after: None });
        let c = b.corner_after_smallest(v);
        let lp = b.insert_arc(ArcKind::Loop, c, c);
        arcs.push(SyntheticArc { kind: ArcKind::Loop, i: v as usize, j: None, placement: lp });
    }
    SyntheticModel::new(SyntheticModelJson {
        genus,
        name: Some("sibling-empty-loops".into()),
        distances: matrix(points, 2.0, &[]),
        loop_radii: (0..points).map(|i| 0.3 + 0.01 * i as f64).collect(),
        arcs,
        map: b.description(genus),
    })
    .expect("hand-built model is well formed")
}

/// A random planar map on `2g+2` cone points (plus up to three plain vertices) whose
/// graph arcs follow the growth rule, with a random subgraph of them.
#[derive(Debug, Clone)]
pub struct RandomInstance {
    pub map: SphereMap,
    pub subgraph: Subgraph,
}

pub fn random_growth_instance(genus: u32, seed: u64) -> RandomInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = 2 * genus + 2;
    let extra = rng.gen_range(0..=3u32);
    let mut b = MapBuilder::new();
    for v in 1..=n {
        b.add_vertex(v, true);
    }
    for v in n + 1..=n + extra {
        b.add_vertex(v, false);
    }
    let all: Vec<VertexId> = (1..=n + extra).collect();

    // Random scaffold tree: attach vertices one by one to an earlier one.
    let mut order = all.clone();
    order.shuffle(&mut rng);
    for k in 1..order.len() {
        if rng.gen_bool(0.3) {
            continue;
        }
        let u = order[rng.gen_range(0..k)];
        let w = order[k];
        let cu = random_corner(&b, u, &mut rng);
        let cw = random_corner(&b, w, &mut rng);
        if connected(&b, u, w) {
            continue;
        }
        b.insert_arc(ArcKind::Aux, cu, cw);
    }

    // Growth-rule arcs: each new arc starts at a still-active cone point.
    let mut active: Vec<VertexId> = (1..=n).collect();
    let mut graph_arcs = Vec::new();
    while !active.is_empty() {
        let p = active.swap_remove(rng.gen_range(0..active.len()));
        let faces = b.faces_with_corners();
        let want_loop = rng.gen_bool(0.3);
        let mut placed = None;
        if !want_loop {
            let mut targets: Vec<VertexId> = (1..=n).filter(|&q| q != p).collect();
            targets.shuffle(&mut rng);
            for q in targets {
                let shared: Vec<(Corner, Corner)> = faces
                    .iter()
                    .flat_map(|f| {
                        let ps: Vec<Corner> = f.iter().copied().filter(|c| c.vertex == p).collect();
                        let qs: Vec<Corner> = f.iter().copied().filter(|c| c.vertex == q).collect();
                        ps.into_iter().flat_map(move |a| qs.clone().into_iter().map(move |c| (a, c)))
                    })
                    .collect();
                if let Some(&(cp, cq)) = shared.choose(&mut rng) {
                    placed = Some((ArcKind::Edge, cp, cq, q));
                    break;
                }
            }
        }
        let (kind, cp, cq, q) = placed.unwrap_or_else(|| {
            let f: Vec<&Vec<Corner>> = faces.iter().filter(|f| f.iter().any(|c| c.vertex == p)).collect();
            let face = f.choose(&mut rng).expect("every vertex has a corner");
            let ps: Vec<Corner> = face.iter().copied().filter(|c| c.vertex == p).collect();
            (ArcKind::Loop, *ps.choose(&mut rng).unwrap(), *ps.choose(&mut rng).unwrap(), p)
        });
        graph_arcs.push(b.insert_arc(kind, cp, cq));
        // a touched active disk freezes too, so frozen points never start arcs
        if let Some(i) = active.iter().position(|&x| x == q) {
            active.swap_remove(i);
        }
    }

    // A few more scaffolding chords inside faces.
    for _ in 0..rng.gen_range(0..=4) {
        let faces = b.faces_with_corners();
        let face = faces.choose(&mut rng).expect("map has a face");
        let (x, y) = (*face.choose(&mut rng).unwrap(), *face.choose(&mut rng).unwrap());
        if x.vertex != y.vertex {
            b.insert_arc(ArcKind::Aux, x, y);
        }
    }

    let map = b.build(genus).expect("growth-rule insertion keeps the map planar");
    let subgraph = Subgraph::new(graph_arcs.into_iter().filter(|_| rng.gen_bool(0.5)));
    RandomInstance { map, subgraph }
}

fn random_corner(b: &MapBuilder, v: VertexId, rng: &mut ChaCha8Rng) -> Corner {
    let faces = b.faces_with_corners();
    let corners: Vec<Corner> = faces.into_iter().flatten().filter(|c| c.vertex == v).collect();
    *corners.choose(rng).expect("every vertex has a corner")
}

fn connected(b: &MapBuilder, u: VertexId, w: VertexId) -> bool {
    let m = b.build_unchecked(0).expect("builder state is structurally valid");
    let comp = m.vertex_components();
    comp[m.vertex_index(u).unwrap()] == comp[m.vertex_index(w).unwrap()]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::growth::{arc_graph, simulate};
    use crate::hypmodel::MetricModel;
    use crate::spheremap::ComponentKind;

    #[test]
    fn family_simulates_to_loops_around_bones() {
        for n in [2, 4, 6] {
            let model = loop_around_bone_family(n).unwrap();
            let log = simulate(&model).unwrap();
            log.check_termination().unwrap();
            assert_eq!(log.len(), 2 * n);
            let map = arc_graph(&log, &model).unwrap();
            let kinds: Vec<ComponentKind> = map.classify_components().iter().map(|c| c.kind).collect();
            assert_eq!(kinds.iter().filter(|&&k| k == ComponentKind::Loop).count(), n);
            assert_eq!(kinds.iter().filter(|&&k| k == ComponentKind::Tree).count(), n);
            assert_eq!(model.genus() as usize, 3 * n / 2 - 1);
        }
        assert!(loop_around_bone_family(3).is_err());
    }

    #[test]
    fn loops_surround_their_bones() {
        let model = loop_around_bone_family(2).unwrap();
        let map = arc_graph(&simulate(&model).unwrap(), &model).unwrap();
        let loops = Subgraph::new(
            map.arcs().iter().filter(|a| a.kind == ArcKind::Loop).map(|a| a.id),
        );
        let tree = map.completed().region_tree(&loops).unwrap();
        assert_eq!(tree.nodes.len(), 3);
        assert_eq!(tree.height, 2);
        let mut cone_counts: Vec<usize> = tree.nodes.iter().map(|r| r.cones.len()).collect();
        cone_counts.sort_unstable();
        assert_eq!(cone_counts, vec![0, 2, 2]);
    }

    #[test]
    fn sibling_loops_simulate() {
        let model = sibling_empty_loops();
        let log = simulate(&model).unwrap();
        log.check_termination().unwrap();
        assert!(log.events.iter().all(|e| e.kind == crate::growth::TouchKind::SelfTouch));
        arc_graph(&log, &model).unwrap();
    }

    #[test]
    fn random_instances_are_valid_and_deterministic() {
        for seed in 0..50 {
            let g = 1 + (seed % 5) as u32;
            let a = random_growth_instance(g, seed);
            let b = random_growth_instance(g, seed);
            assert_eq!(a.map.to_description(), b.map.to_description());
            assert!(a.map.classify_components().iter().all(|c| c.kind != ComponentKind::Invalid));
        }
    }
}
