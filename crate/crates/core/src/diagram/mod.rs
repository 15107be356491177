//! Symbolic Heegaard diagrams: planar panels joined by tubes, curves as tube passes.
//!
//! A tube is an annulus with coordinates (theta, s), s running from end 0 to end 1.
//! Its slot list orders strands by theta. The station ring at end 1 is the slot
//! list itself and at end 0 its reverse, both read with the panel on the left.

mod builder;
mod json;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::UnionFind;

pub use builder::{build, build_vertex_diagram, DiagramBuilder};

pub type PanelId = usize;
pub type PortId = usize;
pub type TubeId = usize;
pub type CurveId = usize;
pub type StrandId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Top,
    Bottom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TubeKind {
    Main,
    Drill,
    EdgeTop,
    EdgeBottom,
    Handle,
}

impl TubeKind {
    pub fn is_vertical(self) -> bool {
        matches!(self, TubeKind::Main | TubeKind::Drill)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Color {
    Red,
    Blue,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveKind {
    HandleMeridian,
    HandleLongitude,
    Drill,
    CycleCommutator,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Forward,
    Backward,
}

impl Direction {
    pub fn reversed(self) -> Direction {
        match self {
            Direction::Forward => Direction::Backward,
            Direction::Backward => Direction::Forward,
        }
    }

    pub fn epsilon(self) -> i64 {
        match self {
            Direction::Forward => 1,
            Direction::Backward => -1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Panel {
    pub id: PanelId,
    pub vertex: usize,
    pub side: Side,
    pub ports: Vec<PortId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Port {
    pub panel: PanelId,
    pub tube: TubeId,
    pub end: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tube {
    pub id: TubeId,
    pub kind: TubeKind,
    /// +1 or -1, 0 for handle tubes.
    pub sign: i64,
    pub ports: [PortId; 2],
    pub slots: Vec<StrandId>,
    pub edge: Option<usize>,
    pub vertex: Option<usize>,
}

impl Tube {
    /// Station ring at the given end, panel on the left.
    pub fn ring(&self, end: usize) -> Vec<StrandId> {
        if end == 1 {
            self.slots.clone()
        } else {
            self.slots.iter().rev().copied().collect()
        }
    }

    pub fn slot_of(&self, strand: StrandId) -> Option<usize> {
        self.slots.iter().position(|&s| s == strand)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pass {
    pub tube: TubeId,
    pub strand: StrandId,
    pub direction: Direction,
    pub twist: i64,
}

impl Pass {
    pub fn reversed(self) -> Pass {
        Pass {
            direction: self.direction.reversed(),
            ..self
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Curve {
    pub id: CurveId,
    pub color: Color,
    pub kind: CurveKind,
    pub passes: Vec<Pass>,
    pub twin: Option<CurveId>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Station {
    pub port: PortId,
    pub strand: StrandId,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Segment {
    PanelArc {
        panel: PanelId,
        from: Station,
        to: Station,
    },
    TubePass(Pass),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagramError {
    #[error(transparent)]
    Plan(#[from] crate::planner::PlanError),
    #[error("edge {0} has no unglued drill tube at both endpoints")]
    MissingEdgeTube(usize),
    #[error("vertex {0} has not been built")]
    VertexMissing(usize),
    #[error("vertex {0} is already built")]
    VertexBuilt(usize),
    #[error("edge {0}: endpoints lie in different components; glue the tree edges first")]
    DifferentComponents(usize),
    #[error("edge {0}: endpoints already connected; use a cycle gluing")]
    SameComponent(usize),
    #[error("edge {0}: drill tube must carry exactly one red and one blue strand")]
    DrillOccupancy(usize),
    #[error("edge {0}: both drill tubes lie on the same red curve")]
    DegenerateCycle(usize),
    #[error("genus bookkeeping failed: expected {expected}, found {found}")]
    Genus { expected: usize, found: usize },
    #[error("invalid diagram: {0}")]
    Invalid(String),
    #[error("malformed diagram document: {0}")]
    Json(String),
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SymbolicDiagram {
    pub(crate) vertex_names: Vec<String>,
    pub(crate) panels: Vec<Panel>,
    pub(crate) ports: Vec<Port>,
    pub(crate) tubes: BTreeMap<TubeId, Tube>,
    pub(crate) curves: BTreeMap<CurveId, Curve>,
    pub(crate) next_tube: TubeId,
    pub(crate) next_curve: CurveId,
    pub(crate) next_strand: StrandId,
}

impl SymbolicDiagram {
    pub fn panels(&self) -> &[Panel] {
        &self.panels
    }

    pub fn port(&self, id: PortId) -> &Port {
        &self.ports[id]
    }

    pub fn port_count(&self) -> usize {
        self.ports.len()
    }

    pub fn tubes(&self) -> impl Iterator<Item = &Tube> {
        self.tubes.values()
    }

    pub fn tube(&self, id: TubeId) -> &Tube {
        &self.tubes[&id]
    }

    pub fn curves(&self) -> impl Iterator<Item = &Curve> {
        self.curves.values()
    }

    pub fn curve(&self, id: CurveId) -> &Curve {
        &self.curves[&id]
    }

    pub fn curves_of(&self, color: Color) -> impl Iterator<Item = &Curve> {
        self.curves.values().filter(move |c| c.color == color)
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        &self.vertex_names[v]
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertex_names
    }

    /// Mutable access for tests and tools that perturb a diagram on purpose.
    pub fn curve_passes_mut(&mut self, id: CurveId) -> &mut Vec<Pass> {
        &mut self.curves.get_mut(&id).expect("curve exists").passes
    }

    pub fn tube_slots_mut(&mut self, id: TubeId) -> &mut Vec<StrandId> {
        &mut self.tubes.get_mut(&id).expect("tube exists").slots
    }

    pub fn entry_port(&self, pass: &Pass) -> PortId {
        let t = self.tube(pass.tube);
        match pass.direction {
            Direction::Forward => t.ports[0],
            Direction::Backward => t.ports[1],
        }
    }

    pub fn exit_port(&self, pass: &Pass) -> PortId {
        let t = self.tube(pass.tube);
        match pass.direction {
            Direction::Forward => t.ports[1],
            Direction::Backward => t.ports[0],
        }
    }

    /// Alternating panel arcs and tube passes; arc i leads into pass i.
    pub fn segments(&self, curve: &Curve) -> Vec<Segment> {
        let k = curve.passes.len();
        let mut out = Vec::with_capacity(2 * k);
        for i in 0..k {
            let prev = &curve.passes[(i + k - 1) % k];
            let cur = &curve.passes[i];
            let from = Station {
                port: self.exit_port(prev),
                strand: prev.strand,
            };
            let to = Station {
                port: self.entry_port(cur),
                strand: cur.strand,
            };
            out.push(Segment::PanelArc {
                panel: self.ports[from.port].panel,
                from,
                to,
            });
            out.push(Segment::TubePass(*cur));
        }
        out
    }

    /// Connected components of panels, as a panel -> representative table.
    pub(crate) fn panel_components(&self) -> Vec<usize> {
        let mut uf = UnionFind::new(self.panels.len());
        for t in self.tubes.values() {
            uf.union(self.ports[t.ports[0]].panel, self.ports[t.ports[1]].panel);
        }
        (0..self.panels.len()).map(|p| uf.find(p)).collect()
    }

    pub fn component_count(&self) -> usize {
        let comps = self.panel_components();
        let mut reps: Vec<usize> = comps.clone();
        reps.sort_unstable();
        reps.dedup();
        reps.len()
    }

    /// Euler count: each panel is a sphere minus its ports, tubes are annuli.
    pub fn genus(&self) -> usize {
        // sum over components of 1 - chi/2 with chi = sum(2 - ports)
        let chi: i64 = self.panels.iter().map(|p| 2 - p.ports.len() as i64).sum();
        let comps = self.component_count() as i64;
        let g = comps - chi / 2;
        debug_assert!(chi % 2 == 0 && g >= 0);
        g.max(0) as usize
    }

    pub fn check_invariants(&self) -> Result<(), DiagramError> {
        let bad = |m: String| Err(DiagramError::Invalid(m));
        // ports
        for (pid, port) in self.ports.iter().enumerate() {
            let Some(panel) = self.panels.get(port.panel) else {
                return bad(format!("port {pid} names missing panel {}", port.panel));
            };
            if panel.ports.iter().filter(|&&p| p == pid).count() != 1 {
                return bad(format!(
                    "port {pid} not listed once on panel {}",
                    port.panel
                ));
            }
            let Some(tube) = self.tubes.get(&port.tube) else {
                return bad(format!("port {pid} names missing tube {}", port.tube));
            };
            if port.end > 1 || tube.ports[port.end] != pid {
                return bad(format!("port {pid} disagrees with tube {}", tube.id));
            }
        }
        for panel in &self.panels {
            for &p in &panel.ports {
                if self.ports.get(p).map(|x| x.panel) != Some(panel.id) {
                    return bad(format!("panel {} lists foreign port {p}", panel.id));
                }
            }
        }
        // tube geometry
        for t in self.tubes.values() {
            let p0 = &self.panels[self.ports[t.ports[0]].panel];
            let p1 = &self.panels[self.ports[t.ports[1]].panel];
            let ok = match t.kind {
                TubeKind::Main | TubeKind::Drill => {
                    p0.side == Side::Top && p1.side == Side::Bottom && p0.vertex == p1.vertex
                }
                TubeKind::EdgeTop => p0.side == Side::Top && p0.vertex != p1.vertex,
                TubeKind::EdgeBottom => p0.side == Side::Bottom && p0.vertex != p1.vertex,
                TubeKind::Handle => p0.id == p1.id,
            };
            if !ok {
                return bad(format!("tube {} joins the wrong panels for its kind", t.id));
            }
            let sign_ok = if t.kind == TubeKind::Handle {
                t.sign == 0
            } else {
                t.sign == 1 || t.sign == -1
            };
            if !sign_ok {
                return bad(format!("tube {} has sign {}", t.id, t.sign));
            }
            let mut sorted = t.slots.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != t.slots.len() {
                return bad(format!("tube {} repeats a strand", t.id));
            }
        }
        // strands: each slot used by exactly one pass
        let mut owner: BTreeMap<StrandId, (TubeId, CurveId)> = BTreeMap::new();
        for c in self.curves.values() {
            if c.passes.is_empty() {
                return bad(format!("curve {} is empty", c.id));
            }
            for p in &c.passes {
                let Some(t) = self.tubes.get(&p.tube) else {
                    return bad(format!("curve {} passes missing tube {}", c.id, p.tube));
                };
                if t.slot_of(p.strand).is_none() {
                    return bad(format!(
                        "curve {} strand {} not in tube {}",
                        c.id, p.strand, t.id
                    ));
                }
                if owner.insert(p.strand, (p.tube, c.id)).is_some() {
                    return bad(format!("strand {} used twice", p.strand));
                }
                if c.color == Color::Red && p.twist != 0 {
                    return bad(format!("red curve {} twists in tube {}", c.id, t.id));
                }
            }
            let k = c.passes.len();
            for i in 0..k {
                let a = self.exit_port(&c.passes[i]);
                let b = self.entry_port(&c.passes[(i + 1) % k]);
                if self.ports[a].panel != self.ports[b].panel {
                    return bad(format!("curve {} jumps between panels", c.id));
                }
            }
        }
        for t in self.tubes.values() {
            if t.slots.iter().any(|s| !owner.contains_key(s)) {
                return bad(format!("tube {} has an orphan slot", t.id));
            }
            for color in [Color::Red, Color::Blue] {
                let twists: Vec<i64> = self
                    .passes_in(t.id)
                    .filter(|(c, _)| c.color == color)
                    .map(|(_, p)| p.twist)
                    .collect();
                if twists.windows(2).any(|w| w[0] != w[1]) {
                    return bad(format!("tube {} has unequal {color:?} twists", t.id));
                }
            }
            if t.kind == TubeKind::Drill || t.kind == TubeKind::Handle {
                let reds = self
                    .passes_in(t.id)
                    .filter(|(c, _)| c.color == Color::Red)
                    .count();
                let blues = self
                    .passes_in(t.id)
                    .filter(|(c, _)| c.color == Color::Blue)
                    .count();
                if reds != 1 || blues != 1 {
                    return bad(format!(
                        "tube {} carries {reds} red and {blues} blue strands",
                        t.id
                    ));
                }
            }
        }
        let reds = self.curves_of(Color::Red).count();
        let blues = self.curves_of(Color::Blue).count();
        let g = self.genus();
        if self.component_count() == 1 && (reds != g || blues != g) {
            return bad(format!("genus {g} but {reds} red and {blues} blue curves"));
        }
        Ok(())
    }

    /// Every (curve, pass) through a tube.
    pub fn passes_in(&self, tube: TubeId) -> impl Iterator<Item = (&Curve, &Pass)> {
        self.curves.values().flat_map(move |c| {
            c.passes
                .iter()
                .filter(move |p| p.tube == tube)
                .map(move |p| (c, p))
        })
    }
}
