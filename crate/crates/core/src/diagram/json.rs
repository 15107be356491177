//! Versioned JSON form of a symbolic diagram.

use serde::{Deserialize, Serialize};

use super::*;

pub const FORMAT: &str = "plumb-diagram";
pub const VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DiagramDoc {
    format: String,
    version: u32,
    genus: usize,
    vertices: Vec<String>,
    panels: Vec<PanelDoc>,
    tubes: Vec<TubeDoc>,
    curves: Vec<CurveDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PanelDoc {
    id: PanelId,
    vertex: String,
    side: Side,
    ports: Vec<PortId>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TubeDoc {
    id: TubeId,
    kind: TubeKind,
    sign: i64,
    ports: [PortId; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    edge: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    vertex: Option<String>,
    /// Station rings at port 0 and port 1.
    stations: [Vec<StrandId>; 2],
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CurveDoc {
    id: CurveId,
    color: Color,
    kind: CurveKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    twin: Option<CurveId>,
    segments: Vec<SegmentDoc>,
}

#[derive(Serialize, Deserialize, Clone, Copy, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
struct StationDoc {
    port: PortId,
    strand: StrandId,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
enum SegmentDoc {
    PanelArc {
        panel: PanelId,
        from: StationDoc,
        to: StationDoc,
    },
    TubePass {
        tube: TubeId,
        strand: StrandId,
        direction: Direction,
        twist: i64,
    },
}

impl From<Station> for StationDoc {
    fn from(s: Station) -> Self {
        StationDoc {
            port: s.port,
            strand: s.strand,
        }
    }
}

impl SymbolicDiagram {
    fn to_doc(&self) -> DiagramDoc {
        let name = |v: usize| self.vertex_names[v].clone();
        DiagramDoc {
            format: FORMAT.into(),
            version: VERSION,
            genus: self.genus(),
            vertices: self.vertex_names.clone(),
            panels: self
                .panels
                .iter()
                .map(|p| PanelDoc {
                    id: p.id,
                    vertex: name(p.vertex),
                    side: p.side,
                    ports: p.ports.clone(),
                })
                .collect(),
            tubes: self
                .tubes
                .values()
                .map(|t| TubeDoc {
                    id: t.id,
                    kind: t.kind,
                    sign: t.sign,
                    ports: t.ports,
                    edge: t.edge,
                    vertex: t.vertex.map(name),
                    stations: [t.ring(0), t.ring(1)],
                })
                .collect(),
            curves: self
                .curves
                .values()
                .map(|c| CurveDoc {
                    id: c.id,
                    color: c.color,
                    kind: c.kind,
                    twin: c.twin,
                    segments: self
                        .segments(c)
                        .into_iter()
                        .map(|s| match s {
                            Segment::PanelArc { panel, from, to } => SegmentDoc::PanelArc {
                                panel,
                                from: from.into(),
                                to: to.into(),
                            },
                            Segment::TubePass(p) => SegmentDoc::TubePass {
                                tube: p.tube,
                                strand: p.strand,
                                direction: p.direction,
                                twist: p.twist,
                            },
                        })
                        .collect(),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_doc()).expect("diagram serializes");
        s.push('\n');
        s
    }

    /// Parse and fully validate a diagram document.
    pub fn from_json(text: &str) -> Result<SymbolicDiagram, DiagramError> {
        let doc: DiagramDoc =
            serde_json::from_str(text).map_err(|e| DiagramError::Json(e.to_string()))?;
        let bad = |m: String| Err(DiagramError::Invalid(m));
        if doc.format != FORMAT || doc.version != VERSION {
            return bad(format!(
                "unsupported format {} v{}",
                doc.format, doc.version
            ));
        }
        let vertex_index = |name: &str| -> Result<usize, DiagramError> {
            doc.vertices
                .iter()
                .position(|v| v == name)
                .ok_or_else(|| DiagramError::Invalid(format!("unknown vertex {name}")))
        };

        let mut d = SymbolicDiagram {
            vertex_names: doc.vertices.clone(),
            ..SymbolicDiagram::default()
        };
        let port_count = doc.panels.iter().map(|p| p.ports.len()).sum::<usize>();
        d.ports = vec![
            Port {
                panel: usize::MAX,
                tube: usize::MAX,
                end: 0
            };
            port_count
        ];
        for (i, p) in doc.panels.iter().enumerate() {
            if p.id != i {
                return bad(format!("panel ids must be 0..n in order, found {}", p.id));
            }
            for &port in &p.ports {
                match d.ports.get_mut(port) {
                    Some(slot) if slot.panel == usize::MAX => slot.panel = i,
                    _ => return bad(format!("port {port} invalid or listed twice")),
                }
            }
            d.panels.push(Panel {
                id: i,
                vertex: vertex_index(&p.vertex)?,
                side: p.side,
                ports: p.ports.clone(),
            });
        }
        for t in &doc.tubes {
            let [r0, r1] = &t.stations;
            let rev: Vec<StrandId> = r1.iter().rev().copied().collect();
            if *r0 != rev {
                return bad(format!(
                    "tube {}: station rings are not mirror images",
                    t.id
                ));
            }
            for (end, &port) in t.ports.iter().enumerate() {
                match d.ports.get_mut(port) {
                    Some(slot) if slot.tube == usize::MAX => {
                        slot.tube = t.id;
                        slot.end = end;
                    }
                    _ => return bad(format!("tube {}: port {port} invalid or reused", t.id)),
                }
            }
            let vertex = match &t.vertex {
                Some(v) => Some(vertex_index(v)?),
                None => None,
            };
            if d.tubes.contains_key(&t.id) {
                return bad(format!("tube id {} repeated", t.id));
            }
            d.tubes.insert(
                t.id,
                Tube {
                    id: t.id,
                    kind: t.kind,
                    sign: t.sign,
                    ports: t.ports,
                    slots: r1.clone(),
                    edge: t.edge,
                    vertex,
                },
            );
        }
        if d.ports.iter().any(|p| p.tube == usize::MAX) {
            return bad("a port is not attached to any tube".into());
        }
        for c in &doc.curves {
            if c.segments.len() % 2 != 0 || c.segments.is_empty() {
                return bad(format!(
                    "curve {}: segments must alternate arc and pass",
                    c.id
                ));
            }
            let mut passes = Vec::new();
            for (i, s) in c.segments.iter().enumerate() {
                match (i % 2, s) {
                    (0, SegmentDoc::PanelArc { .. }) => {}
                    (
                        1,
                        SegmentDoc::TubePass {
                            tube,
                            strand,
                            direction,
                            twist,
                        },
                    ) => {
                        if !d.tubes.contains_key(tube) {
                            return bad(format!("curve {}: unknown tube {tube}", c.id));
                        }
                        passes.push(Pass {
                            tube: *tube,
                            strand: *strand,
                            direction: *direction,
                            twist: *twist,
                        });
                    }
                    _ => {
                        return bad(format!(
                            "curve {}: segments must alternate arc and pass",
                            c.id
                        ))
                    }
                }
            }
            if d.curves.contains_key(&c.id) {
                return bad(format!("curve id {} repeated", c.id));
            }
            d.curves.insert(
                c.id,
                Curve {
                    id: c.id,
                    color: c.color,
                    kind: c.kind,
                    passes,
                    twin: c.twin,
                },
            );
        }
        // panel arcs must be the ones implied by the passes
        for c in &doc.curves {
            let derived = d.segments(&d.curves[&c.id]);
            for (s, e) in c.segments.iter().zip(&derived) {
                if let (
                    SegmentDoc::PanelArc { panel, from, to },
                    Segment::PanelArc {
                        panel: p2,
                        from: f2,
                        to: t2,
                    },
                ) = (s, e)
                {
                    if *panel != *p2
                        || *from != StationDoc::from(*f2)
                        || *to != StationDoc::from(*t2)
                    {
                        return bad(format!(
                            "curve {}: panel arc disagrees with its passes",
                            c.id
                        ));
                    }
                }
            }
        }
        d.next_tube = d.tubes.keys().max().map_or(0, |m| m + 1);
        d.next_curve = d.curves.keys().max().map_or(0, |m| m + 1);
        d.next_strand = d
            .tubes
            .values()
            .flat_map(|t| t.slots.iter())
            .max()
            .map_or(0, |m| m + 1);
        d.check_invariants()?;
        if d.genus() != doc.genus {
            return bad(format!(
                "declared genus {} but panels give {}",
                doc.genus,
                d.genus()
            ));
        }
        Ok(d)
    }
}
