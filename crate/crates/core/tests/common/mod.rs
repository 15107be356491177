//! Random plumbing graph strategies shared by the integration tests.
#![allow(dead_code)]

pub mod oracle;

use plumb_core::graph::{parse_graph, PlumbingGraph};
use proptest::prelude::*;

#[derive(Debug, Clone)]
pub struct Spec {
    pub vertices: Vec<(u32, i64)>,
    pub edges: Vec<(usize, usize, bool)>,
}

impl Spec {
    pub fn text(&self) -> String {
        let mut s = String::new();
        for (i, (g, e)) in self.vertices.iter().enumerate() {
            s += &format!("vertex v{i} genus={g} euler={e}\n");
        }
        for (a, b, plus) in &self.edges {
            s += &format!("edge v{a} v{b} sign={}\n", if *plus { "+" } else { "-" });
        }
        s
    }

    pub fn graph(&self) -> PlumbingGraph {
        parse_graph(&self.text()).unwrap()
    }
}

pub fn tree(max: usize) -> impl Strategy<Value = Spec> {
    (1..=max)
        .prop_flat_map(|n| {
            (
                prop::collection::vec((0u32..=2, -4i64..=4), n),
                prop::collection::vec((any::<prop::sample::Index>(), any::<bool>()), n - 1),
            )
        })
        .prop_map(|(vertices, parents)| Spec {
            edges: parents
                .iter()
                .enumerate()
                .map(|(i, (p, s))| (p.index(i + 1), i + 1, *s))
                .collect(),
            vertices,
        })
}

pub fn cyclic(max: usize) -> impl Strategy<Value = Spec> {
    (
        tree(max),
        prop::collection::vec(
            (
                any::<prop::sample::Index>(),
                any::<prop::sample::Index>(),
                any::<bool>(),
            ),
            1..=2,
        ),
    )
        .prop_filter_map("needs two vertices", |(mut t, extra)| {
            let n = t.vertices.len();
            if n < 2 {
                return None;
            }
            for (a, b, s) in extra {
                let (a, b) = (a.index(n), b.index(n));
                if a != b {
                    t.edges.push((a, b, s));
                }
            }
            Some(t)
        })
}
