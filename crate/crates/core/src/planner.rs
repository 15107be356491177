//! Per-vertex drill inventories and the genus they produce.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::graph::{PlumbingGraph, Sign};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VertexDrills {
    pub vertex: usize,
    /// (edge index, sign) for each incident edge, file order.
    pub edge_drills: Vec<(usize, Sign)>,
    pub extras: Vec<Sign>,
    /// Index into `extras`; `None` only for the degree-two exception.
    pub main: Option<usize>,
}

impl VertexDrills {
    pub fn cylinder_count(&self) -> usize {
        self.edge_drills.len() + self.extras.len()
    }

    /// Every cylinder sign: edge drills first, then extras.
    pub fn all_signs(&self) -> Vec<Sign> {
        self.edge_drills
            .iter()
            .map(|&(_, s)| s)
            .chain(self.extras.iter().copied())
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DrillPlan {
    pub vertices: Vec<VertexDrills>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PlanError {
    #[error("plan covers {found} vertices, graph has {expected}")]
    VertexCount { expected: usize, found: usize },
    #[error("vertex `{vertex}`: drill signs sum to {sum}, euler number is {euler}")]
    SumCondition {
        vertex: String,
        sum: i64,
        euler: i64,
    },
    #[error("vertex `{vertex}`: edge drills do not match the incident edges")]
    EdgeDrills { vertex: String },
    #[error("vertex `{vertex}`: a main cylinder is required")]
    MissingMain { vertex: String },
    #[error("vertex `{vertex}`: main index out of range")]
    BadMain { vertex: String },
    #[error("vertex `{vertex}`: no cylinders")]
    NoCylinders { vertex: String },
    #[error("every vertex lies on the single cycle without a main cylinder; give one of them extra drills")]
    BareCycle,
    #[error("unknown vertex `{0}` in drill override")]
    UnknownVertex(String),
    #[error("malformed drill override `{0}`")]
    Override(String),
}

fn residual(graph: &PlumbingGraph, v: usize) -> i64 {
    let edge_sum: i64 = graph
        .edges()
        .iter()
        .filter(|e| e.touches(v))
        .map(|e| e.sign.value())
        .sum();
    graph.vertices()[v].euler - edge_sum
}

fn edge_drills(graph: &PlumbingGraph, v: usize) -> Vec<(usize, Sign)> {
    graph
        .incident_edges(v)
        .into_iter()
        .map(|i| (i, graph.edges()[i].sign))
        .collect()
}

fn exception_allowed(graph: &PlumbingGraph, v: usize) -> bool {
    graph.vertices()[v].genus == 0 && graph.degree(v) == 2
}

/// The whole graph is one cycle and every vertex would skip its main cylinder.
/// Gluing the cycle edge would then need two distinct curves where only one exists.
fn is_bare_cycle(graph: &PlumbingGraph, bare: impl Fn(usize) -> bool) -> bool {
    graph.edges().len() == graph.vertex_count() && (0..graph.vertex_count()).all(bare)
}

pub fn plan_drills(graph: &PlumbingGraph) -> DrillPlan {
    let n = graph.vertex_count();
    let bare_cycle = is_bare_cycle(graph, |v| {
        exception_allowed(graph, v) && residual(graph, v) == 0
    });
    // in that case the first endpoint of the cycle edge keeps a main cylinder
    let keep_main = if bare_cycle {
        graph
            .cycle_edges()
            .first()
            .map(|&e| graph.edges()[e].ends.0)
    } else {
        None
    };
    let vertices = (0..n)
        .map(|v| {
            let r = residual(graph, v);
            let extras = if r != 0 {
                let s = if r > 0 { Sign::Plus } else { Sign::Minus };
                vec![s; r.unsigned_abs() as usize]
            } else if exception_allowed(graph, v) && keep_main != Some(v) {
                Vec::new()
            } else {
                vec![Sign::Plus, Sign::Minus]
            };
            let main = if extras.is_empty() { None } else { Some(0) };
            VertexDrills {
                vertex: v,
                edge_drills: edge_drills(graph, v),
                extras,
                main,
            }
        })
        .collect();
    DrillPlan { vertices }
}

impl DrillPlan {
    pub fn validate(&self, graph: &PlumbingGraph) -> Result<(), PlanError> {
        if self.vertices.len() != graph.vertex_count() {
            return Err(PlanError::VertexCount {
                expected: graph.vertex_count(),
                found: self.vertices.len(),
            });
        }
        for (v, vd) in self.vertices.iter().enumerate() {
            let data = &graph.vertices()[v];
            let name = || data.id.clone();
            if vd.vertex != v || vd.edge_drills != edge_drills(graph, v) {
                return Err(PlanError::EdgeDrills { vertex: name() });
            }
            let sum: i64 = vd.all_signs().iter().map(|s| s.value()).sum();
            if sum != data.euler {
                return Err(PlanError::SumCondition {
                    vertex: name(),
                    sum,
                    euler: data.euler,
                });
            }
            if vd.cylinder_count() == 0 {
                return Err(PlanError::NoCylinders { vertex: name() });
            }
            match vd.main {
                Some(i) if i >= vd.extras.len() => {
                    return Err(PlanError::BadMain { vertex: name() })
                }
                Some(_) => {}
                None => {
                    if !(exception_allowed(graph, v) && vd.extras.is_empty()) {
                        return Err(PlanError::MissingMain { vertex: name() });
                    }
                }
            }
        }
        if is_bare_cycle(graph, |v| self.vertices[v].main.is_none()) {
            return Err(PlanError::BareCycle);
        }
        Ok(())
    }

    /// Replace the extras of selected vertices; main becomes the first extra.
    pub fn with_overrides(
        mut self,
        graph: &PlumbingGraph,
        overrides: &[(String, Vec<Sign>)],
    ) -> Result<DrillPlan, PlanError> {
        for (id, signs) in overrides {
            let v = graph
                .index_of(id)
                .ok_or_else(|| PlanError::UnknownVertex(id.clone()))?;
            let vd = &mut self.vertices[v];
            vd.extras = signs.clone();
            vd.main = if signs.is_empty() { None } else { Some(0) };
        }
        self.validate(graph)?;
        Ok(self)
    }
}

/// Parse `v=+,-,-`; several assignments may be separated by `;`. `v=` means no extras.
pub fn parse_drill_overrides(text: &str) -> Result<Vec<(String, Vec<Sign>)>, PlanError> {
    let mut out = Vec::new();
    for part in text.split(';').map(str::trim).filter(|p| !p.is_empty()) {
        let (id, rest) = part
            .split_once('=')
            .ok_or_else(|| PlanError::Override(part.to_string()))?;
        let id = id.trim();
        if id.is_empty() {
            return Err(PlanError::Override(part.to_string()));
        }
        let mut signs = Vec::new();
        for s in rest.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            signs.push(match s {
                "+" | "+1" => Sign::Plus,
                "-" | "-1" => Sign::Minus,
                _ => return Err(PlanError::Override(part.to_string())),
            });
        }
        out.push((id.to_string(), signs));
    }
    Ok(out)
}

pub fn predicted_genus(graph: &PlumbingGraph, plan: &DrillPlan) -> Result<usize, PlanError> {
    plan.validate(graph)?;
    let total: usize = plan
        .vertices
        .iter()
        .map(|vd| {
            let g = graph.vertices()[vd.vertex].genus as usize;
            2 * g + vd.cylinder_count() - 1
        })
        .sum();
    Ok(total - (graph.vertex_count() - 1))
}

fn default_genus(graph: &PlumbingGraph) -> usize {
    predicted_genus(graph, &plan_drills(graph)).expect("default plan is valid")
}

fn apply_flips(graph: &PlumbingGraph, mask: u64) -> PlumbingGraph {
    let signs: Vec<Sign> = graph
        .edges()
        .iter()
        .map(|e| {
            let flips = ((mask >> e.ends.0) & 1) ^ ((mask >> e.ends.1) & 1);
            if flips == 1 {
                e.sign.negate()
            } else {
                e.sign
            }
        })
        .collect();
    graph.with_signs(&signs)
}

/// Flip sets compare lexicographically as sorted vertex-index lists.
fn flip_key(mask: u64) -> Vec<u32> {
    (0..64).filter(|b| mask >> b & 1 == 1).collect()
}

const EXHAUSTIVE_LIMIT: usize = 16;

/// Re-gauge the edge signs to minimize the default plan's genus.
pub fn optimize_cocycle(graph: &PlumbingGraph) -> PlumbingGraph {
    let n = graph.vertex_count();
    if n <= EXHAUSTIVE_LIMIT {
        // vertex 0 stays fixed: flipping every vertex changes nothing
        let mut best = (default_genus(graph), Vec::new(), 0u64);
        for half in 1..(1u64 << (n - 1)) {
            let mask = half << 1;
            let genus = default_genus(&apply_flips(graph, mask));
            let key = flip_key(mask);
            if (genus, &key) < (best.0, &best.1) {
                best = (genus, key, mask);
            }
        }
        return apply_flips(graph, best.2);
    }
    let mut current = graph.clone();
    let mut genus = default_genus(&current);
    loop {
        let mut improved: Option<(usize, usize)> = None;
        for v in 1..n {
            let g = default_genus(&current.flip_index(v));
            if g < improved.map_or(genus, |(best, _)| best) {
                improved = Some((g, v));
            }
        }
        match improved {
            Some((g, v)) => {
                current = current.flip_index(v);
                genus = g;
            }
            None => return current,
        }
    }
}

/// Plan summary keyed by vertex id, for reports.
pub fn plan_table(graph: &PlumbingGraph, plan: &DrillPlan) -> BTreeMap<String, Vec<Sign>> {
    plan.vertices
        .iter()
        .map(|vd| (graph.vertices()[vd.vertex].id.clone(), vd.all_signs()))
        .collect()
}
