use std::path::Path;
use std::process::{Command, Output};

use hyperbasis_core::spheremap::{Corner, MapBuilder};
use hyperbasis_core::synth::{loop_around_bone_family, sibling_empty_loops};
use hyperbasis_core::ArcKind;

fn hyperbasis(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperbasis")).args(args).output().unwrap()
}

fn bones_map(dir: &Path, pairs: &[(u32, u32)]) -> String {
    let mut b = MapBuilder::new();
    for v in 1..=6 {
        b.add_vertex(v, true);
    }
    for &(u, w) in pairs {
        b.insert_arc(ArcKind::Edge, Corner { vertex: u, after: None }, Corner { vertex: w, after: None });
    }
    let path = dir.join(format!("bones{}.json", pairs.len()));
    std::fs::write(&path, b.build(2).unwrap().to_json().unwrap()).unwrap();
    path.to_str().unwrap().to_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn bounds_csv_and_json() {
    let o = hyperbasis(&["bounds", "--genus", "3", "--lambda", "0.5"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("k,j,radius_bound,alpha_bound,theorem_bound"));
    assert_eq!(text.lines().filter(|l| l.starts_with(|c: char| c.is_ascii_digit())).count(), 3 + 1);
    assert!(text.contains("\nlambda,count,N,w,D\n"));

    let o = hyperbasis(&["bounds", "--genus", "3", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 3);
}

#[test]
fn invalid_arguments_exit_2() {
    assert_eq!(hyperbasis(&["bounds", "--genus", "1"]).status.code(), Some(2));
    assert_eq!(hyperbasis(&["bounds"]).status.code(), Some(2));
    assert_eq!(hyperbasis(&["simulate"]).status.code(), Some(2));
    assert_eq!(hyperbasis(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn truncated_map_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let full = std::fs::read_to_string(bones_map(dir.path(), &[(1, 2)])).unwrap();
    let cut = dir.path().join("cut.json");
    std::fs::write(&cut, &full[..full.len() / 2]).unwrap();
    let o = hyperbasis(&["verify", "--map", cut.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
}

#[test]
fn verify_three_bones_separates() {
    let dir = tempfile::tempdir().unwrap();
    let three = bones_map(dir.path(), &[(1, 2), (3, 4), (5, 6)]);
    let o = hyperbasis(&["verify", "--map", &three]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("separating"));
    assert!(stdout(&o).contains("cover complement components: 2"));

    let o = hyperbasis(&["verify", "--map", &three, "--subset", "1,2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("rank: 2"));

    assert_eq!(hyperbasis(&["verify", "--map", &three, "--subset", "9"]).status.code(), Some(2));
}

#[test]
fn prune_three_bones_keeps_two() {
    let dir = tempfile::tempdir().unwrap();
    let three = bones_map(dir.path(), &[(1, 2), (3, 4), (5, 6)]);
    let o = hyperbasis(&["prune", "--map", &three]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["kept"].as_array().unwrap().len(), 2);
}

#[test]
fn bad_model_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, serde_json::to_string(sibling_empty_loops().description()).unwrap()).unwrap();
    let out = dir.path().join("report.json");
    let o = hyperbasis(&["pipeline", "--model", path.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn synthetic_model_through_simulate_and_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("family.json");
    let model = loop_around_bone_family(4).unwrap();
    std::fs::write(&path, serde_json::to_string(model.description()).unwrap()).unwrap();
    let model_arg = path.to_str().unwrap();

    let log = dir.path().join("log.json");
    let map = dir.path().join("map.json");
    let o = hyperbasis(&[
        "simulate",
        "--model",
        model_arg,
        "--out",
        log.to_str().unwrap(),
        "--map-out",
        map.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(hyperbasis(&["prune", "--map", map.to_str().unwrap()]).status.code(), Some(0));

    let report = dir.path().join("report.json");
    let o = hyperbasis(&["pipeline", "--model", model_arg, "--lambda", "0.5", "--out", report.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["kept"], 4);
    assert!(v["jacobian"].is_array());

    let o = hyperbasis(&["pipeline", "--genus", "3", "--model", model_arg, "--out", report.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}
