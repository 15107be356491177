//! One pass/fail line per acceptance criterion; exits nonzero on any failure.

mod common;

use std::process::ExitCode;

use common::oracle::oracle_snf;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use plumb_core::graph::{parse_graph, PlumbingGraph, Sign};
use plumb_core::linalg::{oracle_h1, smith_normal_form, H1Summary, IntMatrix};
use plumb_core::map::{compile, h1_from_diagram, relation_matrix};
use plumb_core::planner::{optimize_cocycle, plan_drills, DrillPlan};
use plumb_core::verify::{verify_graph, VerificationReport};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn fixture(name: &str) -> PlumbingGraph {
    let path = format!("{}/../../fixtures/{name}.plumb", env!("CARGO_MANIFEST_DIR"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"));
    parse_graph(&text).unwrap_or_else(|e| panic!("{path}: {e}"))
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Genus from the per-vertex cylinder counts, independent of the planner's own count.
fn genus_by_hand(g: &PlumbingGraph, plan: &DrillPlan) -> usize {
    let total: i64 = plan
        .vertices
        .iter()
        .map(|vd| {
            let v = &g.vertices()[vd.vertex];
            2 * v.genus as i64 + (vd.edge_drills.len() + vd.extras.len()) as i64 - 1
        })
        .sum();
    (total - (g.vertex_count() as i64 - 1)) as usize
}

fn run(
    g: &PlumbingGraph,
) -> Result<(plumb_core::diagram::SymbolicDiagram, VerificationReport), String> {
    let plan = plan_drills(g);
    verify_graph(g, &plan).map_err(|e| e.to_string())
}

fn big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

fn chains() -> Check {
    for n in 2..=9i64 {
        let g = optimize_cocycle(&fixture(&format!("a{n}")));
        let (d, r) = run(&g)?;
        ensure(d.genus() == 1, || format!("A_{n}: genus {}", d.genus()))?;
        ensure(r.crossings == n as usize, || {
            format!("A_{n}: {} crossings", r.crossings)
        })?;
        let rel = relation_matrix(&d).map_err(|e| e.to_string())?;
        let entry = if rel.rows() == 1 && rel.cols() == 1 {
            rel.get(0, 0).clone()
        } else {
            BigInt::zero()
        };
        ensure(
            entry == BigInt::from(n) || entry == BigInt::from(-n),
            || format!("A_{n}: relation matrix {rel}"),
        )?;
        let expected = H1Summary::new(0, &[n]);
        let h = h1_from_diagram(&d).map_err(|e| e.to_string())?;
        ensure(h == expected && oracle_h1(&g) == expected, || {
            format!("A_{n}: H1 {h} vs {}", oracle_h1(&g))
        })?;
    }
    Ok("genus 1, n crossings, relation [n], H1 = Z/n for n = 2..9".into())
}

fn single_vertices() -> Check {
    for genus in 0..=2u32 {
        for e in -3..=3i64 {
            let g = parse_graph(&format!("vertex v genus={genus} euler={e}\n"))
                .map_err(|x| x.to_string())?;
            let (d, r) = run(&g)?;
            let g2 = 2 * genus as usize;
            let (want_genus, want_h1) = if e == 0 {
                (g2 + 1, H1Summary::new(g2 + 1, &[]))
            } else {
                (
                    g2 + e.unsigned_abs() as usize - 1,
                    H1Summary::new(g2, &[e.abs()]),
                )
            };
            ensure(d.genus() == want_genus && r.passed(), || {
                format!("g={genus} e={e}: genus {} expected {want_genus}", d.genus())
            })?;
            ensure(r.h1_diagram.as_ref() == Some(&want_h1), || {
                format!(
                    "g={genus} e={e}: H1 {:?} expected {want_h1}",
                    r.h1_diagram.as_ref().map(|h| h.to_string())
                )
            })?;
        }
    }
    Ok("21 bundles: genus formula and H1 exact".into())
}

fn lens() -> Check {
    let g = optimize_cocycle(&fixture("l52"));
    let (d, r) = run(&g)?;
    ensure(d.genus() == 2, || format!("genus {}", d.genus()))?;
    ensure(r.relation_snf.0 == big(&[1, 5]), || {
        format!("relation SNF {:?}", r.relation_snf.0)
    })?;
    ensure(r.passed() && r.h1_match, || "oracle mismatch".into())?;
    Ok("genus 2, relation SNF [1, 5], matches oracle".into())
}

fn e8() -> Check {
    let g = optimize_cocycle(&fixture("e8"));
    let plan = plan_drills(&g);
    let branch = plan
        .vertices
        .iter()
        .find(|vd| g.degree(vd.vertex) == 3)
        .ok_or("no branch vertex")?;
    let signs = branch.all_signs();
    let negative = signs.iter().filter(|&&s| s == Sign::Minus).count();
    ensure(signs.len() == 4 && negative == 3, || {
        format!("branch drills {signs:?}")
    })?;
    let (d, r) = run(&g)?;
    ensure(d.genus() == 3, || format!("genus {}", d.genus()))?;
    ensure(r.relation_snf.0.iter().all(|x| x.is_one()), || {
        format!("relation SNF {:?}", r.relation_snf.0)
    })?;
    ensure(
        r.passed() && r.h1_diagram.as_ref().is_some_and(|h| h.is_trivial()),
        || "H1 not trivial".into(),
    )?;
    Ok("branch vertex 4 drills (3 negative), genus 3, H1 trivial".into())
}

fn non_seifert() -> Check {
    let g = optimize_cocycle(&fixture("non_seifert"));
    let (d, r) = run(&g)?;
    ensure(d.genus() == 5, || format!("genus {}", d.genus()))?;
    ensure(r.passed() && r.h1_match, || {
        format!("H1 {:?} vs {}", r.h1_diagram, r.h1_oracle)
    })?;
    Ok(format!("genus 5, H1 = {} from both pipelines", r.h1_oracle))
}

fn running_example() -> Check {
    let g = fixture("running");
    let plan = plan_drills(&g);
    let (d, r) = run(&g)?;
    let by_hand = genus_by_hand(&g, &plan);
    ensure(
        by_hand == 4 && d.genus() == 4 && r.genus_predicted == 4,
        || {
            format!(
                "genus {} predicted {} by hand {by_hand}",
                d.genus(),
                r.genus_predicted
            )
        },
    )?;
    ensure(r.genus_compiled == Some(4), || {
        format!("compiled genus {:?}", r.genus_compiled)
    })?;
    ensure(r.red_cut_ok && r.blue_cut_ok, || {
        format!("cuts {:?} {:?}", r.red_cut, r.blue_cut)
    })?;
    let floor = 2 * g.vertices().iter().map(|v| v.genus as usize).sum::<usize>() + g.betti1();
    let free = r.h1_diagram.as_ref().map_or(0, |h| h.free_rank);
    ensure(free >= floor, || format!("free rank {free} < {floor}"))?;
    Ok(format!(
        "genus 4, both cut systems valid, free rank {free} >= {floor}"
    ))
}

fn random_tree(rng: &mut StdRng) -> PlumbingGraph {
    let n = rng.gen_range(1..=8);
    let mut text = String::new();
    for i in 0..n {
        text += &format!(
            "vertex v{i} genus={} euler={}\n",
            rng.gen_range(0..=2),
            rng.gen_range(-4..=4)
        );
    }
    for i in 1..n {
        let sign = if rng.gen_bool(0.5) { "+" } else { "-" };
        text += &format!("edge v{} v{i} sign={sign}\n", rng.gen_range(0..i));
    }
    parse_graph(&text).expect("generated tree parses")
}

fn tree_holds(g: &PlumbingGraph) -> Result<H1Summary, String> {
    let plan = plan_drills(g);
    let (d, r) = verify_graph(g, &plan).map_err(|e| e.to_string())?;
    let text = g.to_text();
    ensure(
        r.genus_compiled == Some(d.genus()) && d.genus() == genus_by_hand(g, &plan),
        || {
            format!(
                "genus mismatch {:?} {} for\n{text}",
                r.genus_compiled,
                d.genus()
            )
        },
    )?;
    ensure(r.red_cut_ok && r.blue_cut_ok, || {
        format!("cut system invalid for\n{text}")
    })?;
    let h = r.h1_diagram.clone().ok_or("no diagram homology")?;
    ensure(h == oracle_h1(g), || {
        format!("H1 {h} vs {} for\n{text}", oracle_h1(g))
    })?;
    compile(&d).map_err(|e| e.to_string())?;
    Ok(h)
}

fn random_trees() -> Check {
    let mut rng = StdRng::seed_from_u64(20_240_517);
    for _ in 0..200 {
        let g = random_tree(&mut rng);
        let h = tree_holds(&g)?;
        let mut flipped = g.clone();
        for v in g.vertices() {
            if rng.gen_bool(0.5) {
                flipped = flipped.flip_vertex(&v.id).map_err(|e| e.to_string())?;
            }
        }
        let hf = tree_holds(&flipped)?;
        ensure(hf == h, || format!("flips changed H1 {h} -> {hf}"))?;
    }
    Ok("200 trees: genus, cut systems, H1 and flip invariance".into())
}

fn snf_suite() -> Check {
    let mut rng = StdRng::seed_from_u64(8_128);
    for case in 0..1000 {
        let (r, c) = (rng.gen_range(1..=5), rng.gen_range(1..=5));
        let rows: Vec<Vec<i64>> = (0..r)
            .map(|_| (0..c).map(|_| rng.gen_range(-9..=9)).collect())
            .collect();
        let snf = smith_normal_form(&IntMatrix::from_rows(&rows));
        for w in snf.windows(2) {
            ensure(
                w[1].is_zero() || (!w[0].is_zero() && (&w[1] % &w[0]).is_zero()),
                || format!("case {case}: chain broken {snf:?}"),
            )?;
        }
        let expected: Vec<BigInt> = oracle_snf(&rows).into_iter().map(BigInt::from).collect();
        ensure(snf == expected, || {
            format!("case {case}: {snf:?} vs minors {expected:?}")
        })?;
    }
    Ok("1000 random matrices agree with the minor-gcd oracle".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("A_n family", chains),
        ("single-vertex bundles", single_vertices),
        ("L(5,2)", lens),
        ("E8", e8),
        ("non-Seifert graph", non_seifert),
        ("running example", running_example),
        ("random trees", random_trees),
        ("Smith normal form", snf_suite),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("[PASS] {} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("[FAIL] {} {name}: {why}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
