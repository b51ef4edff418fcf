use proptest::prelude::*;
use serde_json::json;

use hyperbasis_core::cover::is_partial_basis;
use hyperbasis_core::prune::{prune, verify};
use hyperbasis_core::synth::random_growth_instance;
use hyperbasis_core::{ComponentKind, Error, SphereMap};

/// Map description with cone vertices `1..=cones`; each arc `(id, u, v, kind)` has darts
/// `2id` at `u` and `2id+1` at `v`, and rotations list the darts in the given order.
fn describe(genus: u32, cones: u32, arcs: &[(u32, u32, u32, &str)], rotations: &[(u32, Vec<u32>)]) -> String {
    let vertices: Vec<_> = (1..=cones)
        .map(|v| {
            let rot = rotations.iter().find(|(w, _)| *w == v).map(|(_, r)| r.clone()).unwrap_or_default();
            json!({ "id": v, "cone": true, "rotation": rot })
        })
        .collect();
    let arcs: Vec<_> = arcs.iter().map(|&(id, _, _, kind)| json!({ "id": id, "darts": [2 * id, 2 * id + 1], "kind": kind })).collect();
    json!({ "genus": genus, "vertices": vertices, "arcs": arcs }).to_string()
}

#[test]
fn two_disjoint_loops_census() {
    let text = describe(1, 4, &[(1, 1, 1, "loop"), (2, 2, 2, "loop")], &[(1, vec![2, 3]), (2, vec![4, 5])]);
    let m = SphereMap::from_json(&text).unwrap();
    let c = m.census();
    // the two looped vertices contribute V=2, E=2, F=3, C=2; vertices 3 and 4 are isolated
    assert_eq!((c.vertices, c.arcs, c.faces, c.components), (4, 2, 3, 4));
    assert!(c.euler_ok());
    assert_eq!(c.vertices as i64 - c.arcs as i64 + c.faces as i64, 1 + c.components as i64);
    let kinds: Vec<_> = m.classify_components().into_iter().map(|c| c.kind).collect();
    assert_eq!(kinds, [ComponentKind::Loop, ComponentKind::Loop, ComponentKind::IsolatedVertex, ComponentKind::IsolatedVertex]);
}

#[test]
fn k5_is_not_planar() {
    let mut arcs = Vec::new();
    let mut rot: Vec<(u32, Vec<u32>)> = (1..=5).map(|v| (v, Vec::new())).collect();
    let mut id = 1;
    for u in 1..=5u32 {
        for v in u + 1..=5 {
            arcs.push((id, u, v, "edge"));
            rot[u as usize - 1].1.push(2 * id);
            rot[v as usize - 1].1.push(2 * id + 1);
            id += 1;
        }
    }
    let text = describe(2, 6, &arcs, &rot);
    assert!(matches!(SphereMap::from_json(&text), Err(Error::Embedding(_))));
}

#[test]
fn theta_graph_is_invalid() {
    let arcs = [(1, 1, 2, "edge"), (2, 1, 2, "edge"), (3, 1, 2, "edge")];
    let text = describe(1, 4, &arcs, &[(1, vec![2, 4, 6]), (2, vec![7, 5, 3])]);
    let m = SphereMap::from_json(&text).unwrap();
    assert_eq!(m.census().faces, 3);
    let comps = m.classify_components();
    assert_eq!(comps[0].kind, ComponentKind::Invalid);
    assert_eq!(comps[0].vertices, [1, 2]);
}

#[test]
fn malformed_descriptions_rejected() {
    // dart 3 is never placed in a rotation
    let text = describe(1, 4, &[(1, 1, 2, "edge")], &[(1, vec![2])]);
    assert!(SphereMap::from_json(&text).is_err());
    // an edge may not join a vertex to itself
    let text = describe(1, 4, &[(1, 1, 1, "edge")], &[(1, vec![2, 3])]);
    assert!(SphereMap::from_json(&text).is_err());
    assert!(SphereMap::from_json("{\"genus\": 1").is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_maps_round_trip(g in 1u32..=5, seed in any::<u64>()) {
        let inst = random_growth_instance(g, seed);
        prop_assert!(inst.map.census().euler_ok());
        let again = SphereMap::from_json(&inst.map.to_json().unwrap()).unwrap();
        prop_assert_eq!(again.to_json().unwrap(), inst.map.to_json().unwrap());
        let k = inst.map.completed();
        prop_assert!(k.is_connected());
        prop_assert_eq!(k.graph_arcs(), inst.map.graph_arcs());
    }

    #[test]
    fn parity_test_agrees_with_cover(g in 1u32..=5, seed in any::<u64>()) {
        let inst = random_growth_instance(g, seed);
        let report = is_partial_basis(&inst.map, &inst.subgraph).unwrap();
        prop_assert_eq!(inst.map.is_nonseparating(&inst.subgraph), report.complement_components == 1);
        prop_assert!(report.rank <= inst.subgraph.len());
    }

    #[test]
    fn prune_verifies_or_reports_violation(g in 2u32..=5, seed in any::<u64>()) {
        let inst = random_growth_instance(g, seed);
        match prune(&inst.map) {
            Ok(result) => {
                let report = verify(&result, &inst.map);
                prop_assert!(report.is_ok(), "{:?}", report.err());
            }
            Err(e) => prop_assert!(matches!(e, Error::GeometricAssumptionViolated(_)), "{}", e),
        }
    }
}
