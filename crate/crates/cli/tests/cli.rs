use std::path::{Path, PathBuf};
use std::process::{Command, Output};

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

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join(format!("../../fixtures/{name}.plumb"))
}

fn plumb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_plumb"))
        .args(args)
        .env("PLUMB_NO_COLOR", "1")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("plumb-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn verify_passes_on_every_fixture() {
    for name in FIXTURES {
        let f = fixture(name);
        for extra in [None, Some("--optimize-cocycle")] {
            let mut args = vec!["verify", path_str(&f)];
            args.extend(extra);
            let o = plumb(&args);
            assert_eq!(
                o.status.code(),
                Some(0),
                "{name} {extra:?}: {}",
                String::from_utf8_lossy(&o.stderr)
            );
            let report: Value = serde_json::from_str(&stdout(&o)).unwrap();
            for key in [
                "genus_predicted",
                "genus_compiled",
                "red_cut_ok",
                "blue_cut_ok",
                "relation_snf",
                "oracle_snf",
                "h1_match",
            ] {
                assert!(report.get(key).is_some(), "{name}: missing {key}");
            }
        }
    }
}

#[test]
fn plan_reports_drills_and_genus() {
    let o = plumb(&["plan", path_str(&fixture("e8")), "--optimize-cocycle"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("genus 3"), "{out}");
    assert!(out.contains("drills: -,-,-,+ (main: +)"), "{out}");

    let single = temp_file("e0.plumb", "vertex v genus=0 euler=0\n");
    let out = stdout(&plumb(&["plan", path_str(&single)]));
    assert!(out.ends_with("genus 1\n"), "{out}");
}

#[test]
fn parse_errors_exit_2_with_line_numbers() {
    let bad = temp_file("bad.plumb", "vertex a\nvertex b\nedge a\n");
    for cmd in ["plan", "build", "verify", "homology", "render"] {
        let o = plumb(&[cmd, path_str(&bad)]);
        assert_eq!(o.status.code(), Some(2), "{cmd}");
        assert!(
            String::from_utf8_lossy(&o.stderr).contains("line 3"),
            "{cmd}"
        );
    }
    let o = plumb(&["plan", "/nonexistent/graph.plumb"]);
    assert_eq!(o.status.code(), Some(2));
    let o = plumb(&["plan", path_str(&fixture("a3")), "--drills", "v1=+,x"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn plan_violations_exit_3() {
    let o = plumb(&["build", path_str(&fixture("a3")), "--drills", "v1=+"]);
    assert_eq!(o.status.code(), Some(3));
    // a valid override is accepted and changes the genus
    let o = plumb(&["plan", path_str(&fixture("a3")), "--drills", "v1=-,-,+,-,-"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("drills: +,-,-,+,-,-"));
}

#[test]
fn build_emits_expected_documents() {
    let o = plumb(&["build", path_str(&fixture("a5")), "--optimize-cocycle"]);
    let doc: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["genus"], 1);
    let curves = doc["curves"].as_array().unwrap();
    assert_eq!(curves.iter().filter(|c| c["color"] == "red").count(), 1);
    assert_eq!(curves.iter().filter(|c| c["color"] == "blue").count(), 1);

    let o = plumb(&["build", path_str(&fixture("running"))]);
    let doc: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["genus"], 4);
    let curves = doc["curves"].as_array().unwrap();
    assert_eq!(curves.iter().filter(|c| c["color"] == "red").count(), 4);
    assert_eq!(curves.iter().filter(|c| c["color"] == "blue").count(), 4);
}

#[test]
fn outputs_are_deterministic() {
    for name in ["l52", "running", "e8"] {
        let f = fixture(name);
        for args in [
            vec!["build", path_str(&f)],
            vec!["render", path_str(&f)],
            vec!["render", path_str(&f), "--format", "tikz"],
            vec!["verify", path_str(&f)],
            vec!["plan", path_str(&f), "--optimize-cocycle"],
        ] {
            assert_eq!(plumb(&args).stdout, plumb(&args).stdout, "{args:?}");
        }
    }
}

#[test]
fn verify_reports_homology() {
    let o = plumb(&["verify", path_str(&fixture("l52")), "--optimize-cocycle"]);
    let report: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["h1_diagram"]["torsion"], serde_json::json!([5]));
    assert_eq!(report["h1_match"], true);

    let o = plumb(&["verify", path_str(&fixture("e8")), "--optimize-cocycle"]);
    assert_eq!(o.status.code(), Some(0));
    let report: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["h1_match"], true);
    assert_eq!(report["h1_diagram"]["torsion"], serde_json::json!([]));

    let o = plumb(&["homology", path_str(&fixture("running"))]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("informative"));
}

#[test]
fn check_diagram_detects_corruption() {
    let f = fixture("l52");
    let good = stdout(&plumb(&["build", path_str(&f)]));
    let good_path = temp_file("good.json", &good);
    let o = plumb(&[
        "verify",
        path_str(&f),
        "--check-diagram",
        path_str(&good_path),
    ]);
    assert_eq!(o.status.code(), Some(0));

    let mut doc: Value = serde_json::from_str(&good).unwrap();
    let blue = doc["curves"]
        .as_array_mut()
        .unwrap()
        .iter_mut()
        .find(|c| c["color"] == "blue")
        .unwrap();
    let pass = blue["segments"]
        .as_array_mut()
        .unwrap()
        .iter_mut()
        .find(|s| s["type"] == "tube_pass")
        .unwrap();
    pass["twist"] = Value::from(pass["twist"].as_i64().unwrap() + 3);
    let bad_path = temp_file("bad.json", &doc.to_string());
    let o = plumb(&[
        "verify",
        path_str(&f),
        "--check-diagram",
        path_str(&bad_path),
    ]);
    assert_eq!(o.status.code(), Some(1));

    let garbage = temp_file("garbage.json", "{\"format\": \"plumb-diagram\"");
    let o = plumb(&[
        "verify",
        path_str(&f),
        "--check-diagram",
        path_str(&garbage),
    ]);
    assert_eq!(o.status.code(), Some(1));
}

fn svg_of(args: &[&str]) -> String {
    let mut all = vec!["render"];
    all.extend(args);
    let o = plumb(&all);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    stdout(&o)
}

fn texts(doc: &roxmltree::Document) -> Vec<String> {
    doc.descendants()
        .filter(|n| n.has_tag_name("text"))
        .map(|n| n.text().unwrap_or("").to_string())
        .collect()
}

#[test]
fn svg_is_well_formed_and_labelled() {
    for name in FIXTURES {
        let f = fixture(name);
        let svg = svg_of(&[path_str(&f)]);
        let doc = roxmltree::Document::parse(&svg).unwrap_or_else(|e| panic!("{name}: {e}"));
        let labels = texts(&doc);
        let built: Value = serde_json::from_str(&stdout(&plumb(&["build", path_str(&f)]))).unwrap();
        for c in built["curves"].as_array().unwrap() {
            let letter = if c["color"] == "red" { "r" } else { "b" };
            let label = format!("{letter}{}", c["id"]);
            assert_eq!(
                labels.iter().filter(|t| **t == label).count(),
                1,
                "{name}: {label}"
            );
        }
        for t in built["tubes"].as_array().unwrap() {
            let sign = match t["sign"].as_i64().unwrap() {
                1 => "+",
                -1 => "-",
                _ => "0",
            };
            assert!(
                labels.iter().any(|l| l.starts_with(sign)),
                "{name}: sign {sign}"
            );
        }
    }
}

fn count(doc: &roxmltree::Document, tag: &str, attr: Option<(&str, &str)>) -> usize {
    doc.descendants()
        .filter(|n| n.has_tag_name(tag))
        .filter(|n| attr.is_none_or(|(k, v)| n.attribute(k) == Some(v)))
        .count()
}

#[test]
fn svg_shapes_match_the_diagram() {
    let e3 = temp_file("e3.plumb", "vertex v genus=0 euler=3\n");
    let svg = svg_of(&[path_str(&e3)]);
    let doc = roxmltree::Document::parse(&svg).unwrap();
    assert_eq!(count(&doc, "polyline", None), 3, "tubes");
    assert_eq!(count(&doc, "polygon", Some(("stroke", "#c0392b"))), 2);
    assert_eq!(count(&doc, "polygon", Some(("stroke", "#1f5aa6"))), 2);

    let svg = svg_of(&[path_str(&fixture("e8")), "--optimize-cocycle"]);
    let doc = roxmltree::Document::parse(&svg).unwrap();
    assert_eq!(count(&doc, "rect", None), 16, "panels");

    let empty = temp_file("sphere.plumb", "vertex v genus=0 euler=1\n");
    let svg = svg_of(&[path_str(&empty)]);
    let doc = roxmltree::Document::parse(&svg).unwrap();
    assert_eq!(count(&doc, "polygon", None), 0);
    assert_eq!(count(&doc, "rect", None), 2);
    assert_eq!(count(&doc, "polyline", None), 1);
}

#[test]
fn tikz_and_out_flag() {
    let out = std::env::temp_dir().join(format!("plumb-cli-{}.tex", std::process::id()));
    let o = plumb(&[
        "render",
        path_str(&fixture("running")),
        "--format",
        "tikz",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let tex = std::fs::read_to_string(&out).unwrap();
    assert!(tex.contains("\\begin{tikzpicture}") && tex.trim_end().ends_with("\\end{tikzpicture}"));
    assert_eq!(tex.matches('{').count(), tex.matches('}').count());
}

#[test]
fn no_color_when_disabled() {
    let o = plumb(&["verify", path_str(&fixture("a3"))]);
    assert!(!o.stderr.contains(&0x1b));
    assert!(String::from_utf8_lossy(&o.stderr).contains("red cut system .. ok"));
}
