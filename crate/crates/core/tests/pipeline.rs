use plumb_core::diagram::SymbolicDiagram;
use plumb_core::graph::{parse_graph, PlumbingGraph};
use plumb_core::linalg::H1Summary;
use plumb_core::planner::{optimize_cocycle, plan_drills};
use plumb_core::verify::{verify_diagram, verify_graph};
use serde_json::Value;

const FIXTURES: [&str; 12] = [
    "a2",
    "a3",
    "a4",
    "a5",
    "a6",
    "a7",
    "a8",
    "a9",
    "l52",
    "e8",
    "non_seifert",
    "running",
];

fn fixture(name: &str) -> PlumbingGraph {
    let path = format!("{}/../../fixtures/{name}.plumb", env!("CARGO_MANIFEST_DIR"));
    parse_graph(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn every_fixture_verifies_with_both_cocycles() {
    for name in FIXTURES {
        for g in [fixture(name), optimize_cocycle(&fixture(name))] {
            let (d, r) = verify_graph(&g, &plan_drills(&g)).unwrap();
            assert!(r.passed(), "{name}: {r:?}");
            assert_eq!(
                d.curves_of(plumb_core::diagram::Color::Red).count(),
                r.genus_predicted
            );
        }
    }
}

#[test]
fn tree_fixtures_match_the_homology_oracle() {
    for name in FIXTURES.iter().filter(|n| **n != "running") {
        let g = fixture(name);
        let (_, r) = verify_graph(&g, &plan_drills(&g)).unwrap();
        assert!(r.h1_authoritative && r.h1_match, "{name}");
    }
}

#[test]
fn chain_diagrams_are_small() {
    for n in 2..=9 {
        let g = optimize_cocycle(&fixture(&format!("a{n}")));
        let (_, r) = verify_graph(&g, &plan_drills(&g)).unwrap();
        assert_eq!(r.genus_predicted, 1);
        assert_eq!(r.crossings, n);
        assert_eq!(r.h1_diagram, Some(H1Summary::new(0, &[n as i64])));
    }
}

#[test]
fn json_is_deterministic_and_round_trips() {
    for name in FIXTURES {
        let g = fixture(name);
        let plan = plan_drills(&g);
        let (d1, _) = verify_graph(&g, &plan).unwrap();
        let (d2, _) = verify_graph(&g, &plan).unwrap();
        let text = d1.to_json();
        assert_eq!(text, d2.to_json(), "{name}");
        let back = SymbolicDiagram::from_json(&text).unwrap();
        assert_eq!(back.to_json(), text, "{name}");
        assert!(verify_diagram(&back, &g, &plan).unwrap().passed(), "{name}");
    }
}

fn corrupt(name: &str, edit: impl Fn(&mut Value)) -> bool {
    let g = fixture(name);
    let plan = plan_drills(&g);
    let (d, _) = verify_graph(&g, &plan).unwrap();
    let mut doc: Value = serde_json::from_str(&d.to_json()).unwrap();
    edit(&mut doc);
    match SymbolicDiagram::from_json(&doc.to_string()) {
        Err(_) => true,
        Ok(bad) => !verify_diagram(&bad, &g, &plan)
            .map(|r| r.passed())
            .unwrap_or(false),
    }
}

fn first_pass_of<'a>(doc: &'a mut Value, color: &str) -> &'a mut Value {
    doc["curves"]
        .as_array_mut()
        .unwrap()
        .iter_mut()
        .find(|c| c["color"] == color)
        .unwrap()["segments"]
        .as_array_mut()
        .unwrap()
        .iter_mut()
        .find(|s| s["type"] == "tube_pass")
        .unwrap()
}

#[test]
fn corrupted_documents_are_rejected() {
    for name in ["a3", "l52", "running"] {
        assert!(corrupt(name, |d| {
            let p = first_pass_of(d, "blue");
            p["twist"] = Value::from(p["twist"].as_i64().unwrap() + 2);
        }));
        assert!(corrupt(name, |d| {
            let p = first_pass_of(d, "red");
            p["twist"] = Value::from(1);
        }));
        assert!(corrupt(name, |d| {
            let s = d["tubes"][0]["stations"][0].as_array_mut().unwrap();
            s.reverse();
            s.rotate_left(1);
        }));
        assert!(corrupt(name, |d| d["genus"] = Value::from(99)));
        assert!(corrupt(name, |d| {
            d["curves"].as_array_mut().unwrap().pop();
        }));
    }
    assert!(SymbolicDiagram::from_json("{").is_err());
    assert!(SymbolicDiagram::from_json("{\"format\": \"other\"}").is_err());
}

#[test]
fn single_vertices_verify() {
    for genus in 0..=2 {
        for euler in -4i64..=4 {
            let g = parse_graph(&format!("vertex x genus={genus} euler={euler}\n")).unwrap();
            let (_, r) = verify_graph(&g, &plan_drills(&g)).unwrap();
            assert!(r.passed() && r.h1_match, "g={genus} e={euler}");
            // a lone vertex with euler 0 still needs a cancelling pair of drills
            let cylinders = if euler == 0 {
                2
            } else {
                euler.unsigned_abs() as usize
            };
            let expected_genus = 2 * genus as usize + cylinders - 1;
            assert_eq!(r.genus_predicted, expected_genus, "g={genus} e={euler}");
        }
    }
}
