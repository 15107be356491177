//! Per-vertex diagrams and the tree and cycle gluings.

use super::*;
use crate::graph::{PlumbingGraph, Sign};
use crate::planner::{predicted_genus, DrillPlan, VertexDrills};

impl SymbolicDiagram {
    fn new_panel(&mut self, vertex: usize, side: Side) -> PanelId {
        let id = self.panels.len();
        self.panels.push(Panel {
            id,
            vertex,
            side,
            ports: Vec::new(),
        });
        id
    }

    fn new_port(&mut self, panel: PanelId) -> PortId {
        let id = self.ports.len();
        self.ports.push(Port {
            panel,
            tube: usize::MAX,
            end: 0,
        });
        self.panels[panel].ports.push(id);
        id
    }

    fn new_tube(
        &mut self,
        kind: TubeKind,
        sign: i64,
        ports: [PortId; 2],
        edge: Option<usize>,
        vertex: Option<usize>,
    ) -> TubeId {
        let id = self.next_tube;
        self.next_tube += 1;
        for (end, &p) in ports.iter().enumerate() {
            self.ports[p].tube = id;
            self.ports[p].end = end;
        }
        self.tubes.insert(
            id,
            Tube {
                id,
                kind,
                sign,
                ports,
                slots: Vec::new(),
                edge,
                vertex,
            },
        );
        id
    }

    fn new_strand(&mut self) -> StrandId {
        self.next_strand += 1;
        self.next_strand - 1
    }

    fn new_curve(&mut self, color: Color, kind: CurveKind, passes: Vec<Pass>) -> CurveId {
        let id = self.next_curve;
        self.next_curve += 1;
        self.curves.insert(
            id,
            Curve {
                id,
                color,
                kind,
                passes,
                twin: None,
            },
        );
        id
    }

    fn pair_twins(&mut self, red: CurveId, blue: CurveId) {
        self.curves.get_mut(&red).unwrap().twin = Some(blue);
        self.curves.get_mut(&blue).unwrap().twin = Some(red);
    }

    /// Slot index at which a push-off of the strands `lo..=hi` lands on the
    /// left of a traversal in `dir` (lower theta when going forward).
    fn insert_beside(
        &mut self,
        tube: TubeId,
        lo: usize,
        hi: usize,
        dir: Direction,
        left: bool,
    ) -> StrandId {
        let s = self.new_strand();
        let at = if (dir == Direction::Forward) == left {
            lo
        } else {
            hi + 1
        };
        self.tubes.get_mut(&tube).unwrap().slots.insert(at, s);
        s
    }

    /// Blue push-off of a red curve: twist = tube sign on vertical tubes.
    fn add_blue_twin(&mut self, red: CurveId) -> CurveId {
        let passes = self.curves[&red].passes.clone();
        let kind = self.curves[&red].kind;
        let mut blue = Vec::with_capacity(passes.len());
        for p in passes {
            let k = self.tubes[&p.tube].slot_of(p.strand).unwrap();
            let s = self.insert_beside(p.tube, k, k, p.direction, true);
            let t = &self.tubes[&p.tube];
            let twist = if t.kind.is_vertical() { t.sign } else { 0 };
            blue.push(Pass {
                tube: p.tube,
                strand: s,
                direction: p.direction,
                twist,
            });
        }
        let b = self.new_curve(Color::Blue, kind, blue);
        self.pair_twins(red, b);
        b
    }

    /// Drill tube of a vertex tagged with an edge, if still unglued.
    fn edge_tube(&self, edge: usize, vertex: usize) -> Option<TubeId> {
        self.tubes
            .values()
            .find(|t| t.kind == TubeKind::Drill && t.edge == Some(edge) && t.vertex == Some(vertex))
            .map(|t| t.id)
    }

    fn has_vertex(&self, v: usize) -> bool {
        self.panels.iter().any(|p| p.vertex == v)
    }

    pub(crate) fn add_vertex(
        &mut self,
        name: &str,
        genus: u32,
        vd: &VertexDrills,
    ) -> Result<(), DiagramError> {
        let v = vd.vertex;
        if self.has_vertex(v) {
            return Err(DiagramError::VertexBuilt(v));
        }
        if vd.cylinder_count() == 0 {
            return Err(DiagramError::Invalid(format!(
                "vertex {name} has no cylinders"
            )));
        }
        if vd.main.is_none() && (genus != 0 || !vd.extras.is_empty() || vd.edge_drills.len() != 2) {
            return Err(DiagramError::Invalid(format!(
                "vertex {name} needs a main cylinder"
            )));
        }
        if self.vertex_names.len() <= v {
            self.vertex_names.resize(v + 1, String::new());
        }
        self.vertex_names[v] = name.to_string();

        let before = self.genus();
        let top = self.new_panel(v, Side::Top);
        let bottom = self.new_panel(v, Side::Bottom);

        // vertical tubes: edge drills then extras, each from top to bottom
        let mut vertical = Vec::new();
        for &(edge, sign) in &vd.edge_drills {
            let (pt, pb) = (self.new_port(top), self.new_port(bottom));
            vertical.push(self.new_tube(
                TubeKind::Drill,
                sign.value(),
                [pt, pb],
                Some(edge),
                Some(v),
            ));
        }
        let mut main_tube = None;
        for (j, &sign) in vd.extras.iter().enumerate() {
            let (pt, pb) = (self.new_port(top), self.new_port(bottom));
            let kind = if vd.main == Some(j) {
                TubeKind::Main
            } else {
                TubeKind::Drill
            };
            let t = self.new_tube(kind, sign.value(), [pt, pb], None, Some(v));
            if vd.main == Some(j) {
                main_tube = Some(t);
            }
            vertical.push(t);
        }
        let hub = main_tube.unwrap_or(vertical[0]);

        // handle i: top tube f_i -> f'_i, bottom tube is its mirror
        let mut handles = Vec::new();
        for _ in 0..genus {
            let (f, f2) = (self.new_port(top), self.new_port(top));
            let ht = self.new_tube(TubeKind::Handle, 0, [f, f2], None, Some(v));
            let (g, g2) = (self.new_port(bottom), self.new_port(bottom));
            let hb = self.new_tube(TubeKind::Handle, 0, [g2, g], None, Some(v));
            handles.push((ht, hb));
        }

        // ccw ring of the hub on the top panel: y1 z1 y2 z2 per handle, then drill strands
        let mut top_ring = Vec::new();
        let mut reds: Vec<(CurveKind, Vec<Pass>)> = Vec::new();
        let pass = |tube, strand, direction| Pass {
            tube,
            strand,
            direction,
            twist: 0,
        };
        for &(ht, hb) in &handles {
            let [y1, z1, y2, z2] = [0; 4].map(|_| self.new_strand());
            top_ring.extend([y1, z1, y2, z2]);
            reds.push((
                CurveKind::HandleMeridian,
                vec![
                    pass(hub, y2, Direction::Forward),
                    pass(hub, y1, Direction::Backward),
                ],
            ));
            let (h1, h2) = (self.new_strand(), self.new_strand());
            self.tubes.get_mut(&ht).unwrap().slots.push(h1);
            self.tubes.get_mut(&hb).unwrap().slots.push(h2);
            reds.push((
                CurveKind::HandleLongitude,
                vec![
                    pass(ht, h1, Direction::Forward),
                    pass(hub, z2, Direction::Forward),
                    pass(hb, h2, Direction::Forward),
                    pass(hub, z1, Direction::Backward),
                ],
            ));
        }
        for &t in vertical.iter().filter(|&&t| t != hub) {
            let (x, own) = (self.new_strand(), self.new_strand());
            top_ring.push(x);
            self.tubes.get_mut(&t).unwrap().slots.push(own);
            reds.push((
                CurveKind::Drill,
                vec![
                    pass(hub, x, Direction::Forward),
                    pass(t, own, Direction::Backward),
                ],
            ));
        }
        top_ring.reverse();
        self.tubes.get_mut(&hub).unwrap().slots = top_ring;

        for (kind, passes) in reds {
            let r = self.new_curve(Color::Red, kind, passes);
            self.add_blue_twin(r);
        }

        let expected = before + 2 * genus as usize + vd.cylinder_count() - 1;
        self.expect_genus(expected)
    }

    fn expect_genus(&self, expected: usize) -> Result<(), DiagramError> {
        let found = self.genus();
        if found != expected {
            return Err(DiagramError::Genus { expected, found });
        }
        Ok(())
    }

    fn components_of(&self, a: TubeId, b: TubeId) -> (usize, usize) {
        let comps = self.panel_components();
        let pa = self.ports[self.tubes[&a].ports[0]].panel;
        let pb = self.ports[self.tubes[&b].ports[0]].panel;
        (comps[pa], comps[pb])
    }

    fn occupant(&self, tube: TubeId, color: Color) -> Vec<CurveId> {
        self.passes_in(tube)
            .filter(|(c, _)| c.color == color)
            .map(|(c, _)| c.id)
            .collect()
    }

    /// Red and blue curve through an unglued drill tube.
    fn drill_pair(&self, edge: usize, tube: TubeId) -> Result<(CurveId, CurveId), DiagramError> {
        let r = self.occupant(tube, Color::Red);
        let b = self.occupant(tube, Color::Blue);
        if r.len() != 1 || b.len() != 1 || self.tubes[&tube].slots.len() != 2 {
            return Err(DiagramError::DrillOccupancy(edge));
        }
        Ok((r[0], b[0]))
    }

    /// Passes after the one through `tube`, in order, ending just before it.
    fn route_after(&self, curve: CurveId, tube: TubeId) -> (Vec<Pass>, PortId, PortId) {
        let passes = &self.curves[&curve].passes;
        let i = passes
            .iter()
            .position(|p| p.tube == tube)
            .expect("curve passes tube");
        let k = passes.len();
        let route: Vec<Pass> = (1..k).map(|j| passes[(i + j) % k]).collect();
        let p0 = &passes[i];
        (route, self.exit_port(p0), self.entry_port(p0))
    }

    fn tube_locate(&self, edge: usize) -> Result<(TubeId, TubeId), DiagramError> {
        let ends = self
            .tubes
            .values()
            .filter(|t| t.kind == TubeKind::Drill && t.edge == Some(edge))
            .map(|t| (t.vertex, t.id))
            .collect::<Vec<_>>();
        if ends.len() != 2 {
            return Err(DiagramError::MissingEdgeTube(edge));
        }
        Ok((ends[0].1, ends[1].1))
    }

    /// Merge the drill pairs at both ends of `edge` through fresh edge tubes.
    /// The first tube joins the port where u's route ends to the port where
    /// v's route starts, the second closes the loop, so both routes keep their
    /// direction and each twin stays on the left of its red curve.
    /// Returns the new red/blue pair.
    fn merge_drills(
        &mut self,
        edge: usize,
        sign: Sign,
        tu: TubeId,
        tv: TubeId,
    ) -> Result<(CurveId, CurveId), DiagramError> {
        let (du, dbu) = self.drill_pair(edge, tu)?;
        let (gv, gbv) = self.drill_pair(edge, tv)?;
        if du == gv {
            return Err(DiagramError::DegenerateCycle(edge));
        }
        let (ru, start_u, end_u) = self.route_after(du, tu);
        let (rv, start_v, end_v) = self.route_after(gv, tv);
        let (rbu, sbu, ebu) = self.route_after(dbu, tu);
        let (rbv, sbv, ebv) = self.route_after(gbv, tv);
        if (sbu, ebu, sbv, ebv) != (start_u, end_u, start_v, end_v) {
            return Err(DiagramError::Invalid(format!(
                "drill pairs of edge {edge} are not parallel"
            )));
        }
        let top_u = self.tubes[&tu].ports[0];
        self.tubes.remove(&tu);
        self.tubes.remove(&tv);
        let kind = |p: PortId| {
            if p == top_u {
                TubeKind::EdgeTop
            } else {
                TubeKind::EdgeBottom
            }
        };
        let t1 = self.new_tube(
            kind(end_u),
            sign.value(),
            [end_u, start_v],
            Some(edge),
            None,
        );
        let t2 = self.new_tube(
            kind(start_u),
            sign.value(),
            [start_u, end_v],
            Some(edge),
            None,
        );
        let strands: Vec<StrandId> = (0..4).map(|_| self.new_strand()).collect();
        let (r1, b1, r2, b2) = (strands[0], strands[1], strands[2], strands[3]);
        // left of a forward pass is the lower slot, of a backward pass the higher
        self.tubes.get_mut(&t1).unwrap().slots = vec![b1, r1];
        self.tubes.get_mut(&t2).unwrap().slots = vec![r2, b2];
        let blue_twist = |t: TubeId| {
            if self.tubes[&t].kind == TubeKind::EdgeBottom {
                sign.value()
            } else {
                0
            }
        };
        let (bt1, bt2) = (blue_twist(t1), blue_twist(t2));
        let join = |mut a: Vec<Pass>, b: Vec<Pass>, s1, s2, w1, w2| {
            a.push(Pass {
                tube: t1,
                strand: s1,
                direction: Direction::Forward,
                twist: w1,
            });
            a.extend(b);
            a.push(Pass {
                tube: t2,
                strand: s2,
                direction: Direction::Backward,
                twist: w2,
            });
            a
        };
        let red = join(ru, rv, r1, r2, 0, 0);
        let blue = join(rbu, rbv, b1, b2, bt1, bt2);
        for c in [du, dbu, gv, gbv] {
            self.curves.remove(&c);
        }
        let r = self.new_curve(Color::Red, CurveKind::Drill, red);
        let b = self.new_curve(Color::Blue, CurveKind::Drill, blue);
        self.pair_twins(r, b);
        Ok((r, b))
    }

    pub fn glue_tree_edge(&mut self, edge: usize, sign: Sign) -> Result<(), DiagramError> {
        let (tu, tv) = self.tube_locate(edge)?;
        let (cu, cv) = self.components_of(tu, tv);
        if cu == cv {
            return Err(DiagramError::SameComponent(edge));
        }
        let before = self.genus();
        self.merge_drills(edge, sign, tu, tv)?;
        self.expect_genus(before - 1)
    }

    pub fn glue_cycle_edge(&mut self, edge: usize, sign: Sign) -> Result<(), DiagramError> {
        let (tu, tv) = self.tube_locate(edge)?;
        let (cu, cv) = self.components_of(tu, tv);
        if cu != cv {
            return Err(DiagramError::DifferentComponents(edge));
        }
        let before = self.genus();
        let (du, dbu) = self.drill_pair(edge, tu)?;
        let (gv, gbv) = self.drill_pair(edge, tv)?;
        if du == gv {
            return Err(DiagramError::DegenerateCycle(edge));
        }
        let (rho, rho_b, t_rho) = if du < gv {
            (du, dbu, tu)
        } else {
            (gv, gbv, tv)
        };

        // parallel copies of rho's route on both sides of the {rho, twin} family
        let (route, _, _) = self.route_after(rho, t_rho);
        let (route_b, _, _) = self.route_after(rho_b, t_rho);
        let mut left = Vec::new();
        let mut right = Vec::new();
        let mut left_b = Vec::new();
        let mut right_b = Vec::new();
        for (p, pb) in route.iter().zip(&route_b) {
            if p.tube != pb.tube || p.direction != pb.direction {
                return Err(DiagramError::Invalid(format!(
                    "curves {rho} and {rho_b} are not parallel"
                )));
            }
            let span = |d: &SymbolicDiagram, strands: &[StrandId]| {
                let t = &d.tubes[&p.tube];
                let idx: Vec<usize> = strands.iter().map(|&s| t.slot_of(s).unwrap()).collect();
                let (lo, hi) = (*idx.iter().min().unwrap(), *idx.iter().max().unwrap());
                debug_assert_eq!(hi - lo + 1, strands.len());
                (lo, hi)
            };
            let (lo, hi) = span(self, &[p.strand, pb.strand]);
            let l = self.insert_beside(p.tube, lo, hi, p.direction, true);
            let (lo, hi) = span(self, &[p.strand, pb.strand, l]);
            let r = self.insert_beside(p.tube, lo, hi, p.direction, false);
            let (lo, hi) = span(self, &[p.strand, pb.strand, l, r]);
            let lb = self.insert_beside(p.tube, lo, hi, p.direction, true);
            let (lo, hi) = span(self, &[p.strand, pb.strand, l, r, lb]);
            let rb = self.insert_beside(p.tube, lo, hi, p.direction, false);
            let copy = |strand, twist| Pass {
                tube: p.tube,
                strand,
                direction: p.direction,
                twist,
            };
            left.push(copy(l, 0));
            right.push(copy(r, 0));
            left_b.push(copy(lb, pb.twist));
            right_b.push(copy(rb, pb.twist));
        }
        let around = |l: Vec<Pass>, r: Vec<Pass>| -> Vec<Pass> {
            l.into_iter()
                .chain(r.into_iter().rev().map(Pass::reversed))
                .collect()
        };
        let beta = around(left, right);
        let kappa = around(left_b, right_b);

        let before_curves = self.curves.len();
        self.merge_drills(edge, sign, tu, tv)?;
        let r = self.new_curve(Color::Red, CurveKind::CycleCommutator, beta);
        let b = self.new_curve(Color::Blue, CurveKind::CycleCommutator, kappa);
        self.pair_twins(r, b);
        debug_assert_eq!(self.curves.len(), before_curves);
        self.expect_genus(before)
    }
}

/// Incremental builder over a graph and a validated plan.
pub struct DiagramBuilder<'a> {
    graph: &'a PlumbingGraph,
    plan: &'a DrillPlan,
    diagram: SymbolicDiagram,
}

impl<'a> DiagramBuilder<'a> {
    pub fn new(graph: &'a PlumbingGraph, plan: &'a DrillPlan) -> Result<Self, DiagramError> {
        plan.validate(graph)?;
        let diagram = SymbolicDiagram {
            vertex_names: graph.vertices().iter().map(|v| v.id.clone()).collect(),
            ..SymbolicDiagram::default()
        };
        Ok(DiagramBuilder {
            graph,
            plan,
            diagram,
        })
    }

    pub fn add_vertex(&mut self, v: usize) -> Result<(), DiagramError> {
        let data = &self.graph.vertices()[v];
        self.diagram
            .add_vertex(&data.id, data.genus, &self.plan.vertices[v])
    }

    fn endpoints_built(&self, edge: usize) -> Result<(), DiagramError> {
        let (a, b) = self.graph.edges()[edge].ends;
        for v in [a, b] {
            if !self.diagram.has_vertex(v) {
                return Err(DiagramError::VertexMissing(v));
            }
            if self.diagram.edge_tube(edge, v).is_none() {
                return Err(DiagramError::MissingEdgeTube(edge));
            }
        }
        Ok(())
    }

    pub fn glue_tree_edge(&mut self, edge: usize) -> Result<(), DiagramError> {
        self.endpoints_built(edge)?;
        self.diagram
            .glue_tree_edge(edge, self.graph.edges()[edge].sign)
    }

    pub fn glue_cycle_edge(&mut self, edge: usize) -> Result<(), DiagramError> {
        self.endpoints_built(edge)?;
        self.diagram
            .glue_cycle_edge(edge, self.graph.edges()[edge].sign)
    }

    pub fn diagram(&self) -> &SymbolicDiagram {
        &self.diagram
    }

    pub fn finish(self) -> SymbolicDiagram {
        self.diagram
    }
}

/// Diagram of one vertex, with its edge drills left as unglued stubs.
pub fn build_vertex_diagram(
    graph: &PlumbingGraph,
    plan: &DrillPlan,
    v: usize,
) -> Result<SymbolicDiagram, DiagramError> {
    let mut b = DiagramBuilder::new(graph, plan)?;
    b.add_vertex(v)?;
    Ok(b.finish())
}

pub fn build(graph: &PlumbingGraph, plan: &DrillPlan) -> Result<SymbolicDiagram, DiagramError> {
    let mut b = DiagramBuilder::new(graph, plan)?;
    for v in 0..graph.vertex_count() {
        b.add_vertex(v)?;
    }
    for e in graph.spanning_tree() {
        b.glue_tree_edge(e)?;
    }
    for e in graph.cycle_edges() {
        b.glue_cycle_edge(e)?;
    }
    let d = b.finish();
    let expected = predicted_genus(graph, plan)?;
    d.expect_genus(expected)?;
    d.check_invariants()?;
    Ok(d)
}
