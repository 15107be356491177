//! End-to-end checks of a built diagram against independent invariants.

use serde::Serialize;

use crate::diagram::{build, Color, DiagramError, SymbolicDiagram};
use crate::graph::PlumbingGraph;
use crate::linalg::{oracle_h1, smith_normal_form, BigList, H1Summary};
use crate::map::{
    compile, h1_from_diagram, relation_matrix, surface_genus, validate_cut_system, CutReport,
};
use crate::planner::{predicted_genus, DrillPlan};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub genus_predicted: usize,
    pub genus_declared: usize,
    pub genus_compiled: Option<usize>,
    pub crossings: usize,
    pub red_cut_ok: bool,
    pub blue_cut_ok: bool,
    pub red_cut: Option<CutReport>,
    pub blue_cut: Option<CutReport>,
    pub relation_snf: BigList,
    pub oracle_snf: BigList,
    pub h1_diagram: Option<H1Summary>,
    pub h1_oracle: H1Summary,
    pub h1_match: bool,
    /// False for graphs with cycles, where the oracle is only indicative.
    pub h1_authoritative: bool,
    pub errors: Vec<String>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.errors.is_empty()
            && self.genus_compiled == Some(self.genus_predicted)
            && self.genus_declared == self.genus_predicted
            && self.red_cut_ok
            && self.blue_cut_ok
            && (self.h1_match || !self.h1_authoritative)
    }
}

/// Build with the given plan, then verify.
pub fn verify_graph(
    graph: &PlumbingGraph,
    plan: &DrillPlan,
) -> Result<(SymbolicDiagram, VerificationReport), DiagramError> {
    let d = build(graph, plan)?;
    let report = verify_diagram(&d, graph, plan)?;
    Ok((d, report))
}

/// Verify an existing diagram against the graph it claims to present.
pub fn verify_diagram(
    d: &SymbolicDiagram,
    graph: &PlumbingGraph,
    plan: &DrillPlan,
) -> Result<VerificationReport, DiagramError> {
    let genus_predicted = predicted_genus(graph, plan)?;
    let h1_oracle = oracle_h1(graph);
    let oracle_snf = BigList(smith_normal_form(&graph.intersection_matrix()));
    let mut report = VerificationReport {
        genus_predicted,
        genus_declared: d.genus(),
        genus_compiled: None,
        crossings: 0,
        red_cut_ok: false,
        blue_cut_ok: false,
        red_cut: None,
        blue_cut: None,
        relation_snf: BigList(Vec::new()),
        oracle_snf,
        h1_diagram: None,
        h1_oracle,
        h1_match: false,
        h1_authoritative: graph.betti1() == 0,
        errors: Vec::new(),
    };
    match relation_matrix(d) {
        Ok(r) => {
            report.relation_snf = BigList(smith_normal_form(&r));
        }
        Err(e) => report.errors.push(e.to_string()),
    }
    if let Ok(h) = h1_from_diagram(d) {
        report.h1_match = h == report.h1_oracle;
        report.h1_diagram = Some(h);
    }
    match compile(d) {
        Ok(m) => {
            report.crossings = m.crossings().len();
            match surface_genus(&m) {
                Ok(g) => report.genus_compiled = Some(g),
                Err(e) => report.errors.push(e.to_string()),
            }
            let g = report.genus_declared;
            let red = validate_cut_system(&m, Color::Red);
            let blue = validate_cut_system(&m, Color::Blue);
            report.red_cut_ok = red.valid_for(g);
            report.blue_cut_ok = blue.valid_for(g);
            report.red_cut = Some(red);
            report.blue_cut = Some(blue);
        }
        Err(e) => report.errors.push(e.to_string()),
    }
    Ok(report)
}
