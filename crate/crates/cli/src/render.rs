//! Schematic SVG and TikZ drawings of a symbolic diagram.
//!
//! Each vertex gets a column with its top panel above its bottom panel.
//! Vertical tubes run between the two panels, edge tubes and handles leave
//! from the outer rims. Curves are polylines through their stations.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write;

use plumb_core::diagram::{
    Color, Direction, PortId, Segment, Side, SymbolicDiagram, TubeId, TubeKind,
};
use plumb_core::map::compile;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Svg,
    Tikz,
}

#[derive(Debug, Clone)]
pub struct RenderSpec {
    pub format: Format,
    pub column_gap: f64,
    pub tube_width: f64,
    pub red: &'static str,
    pub blue: &'static str,
}

impl RenderSpec {
    pub fn new(format: Format) -> Self {
        RenderSpec {
            format,
            column_gap: 90.0,
            tube_width: 30.0,
            red: "#c0392b",
            blue: "#1f5aa6",
        }
    }
}

const PANEL_H: f64 = 80.0;
const TOP_Y: f64 = 90.0;
const BOTTOM_Y: f64 = 330.0;
const SLOT: f64 = 44.0;
const MARGIN: f64 = 40.0;

type Pt = (f64, f64);

enum Shape {
    Panel {
        x: f64,
        y: f64,
        w: f64,
        h: f64,
    },
    Tube {
        path: Vec<Pt>,
        width: f64,
    },
    Port {
        at: Pt,
        rx: f64,
    },
    Curve {
        path: Vec<Pt>,
        color: Color,
    },
    Marker {
        at: Pt,
        color: Color,
    },
    Text {
        at: Pt,
        text: String,
        class: &'static str,
    },
}

struct Layout {
    port_at: HashMap<PortId, Pt>,
    /// Unit vector pointing out of the panel into the tube.
    port_out: HashMap<PortId, Pt>,
    /// Right edge of each vertex column.
    col_right: Vec<f64>,
    width: f64,
    height: f64,
}

fn layout(d: &SymbolicDiagram, spec: &RenderSpec) -> Layout {
    let mut port_at = HashMap::new();
    let mut port_out = HashMap::new();
    let mut x0 = MARGIN;
    let mut col_right = Vec::new();
    for v in 0..d.vertex_names().len() {
        let panels: Vec<_> = d.panels().iter().filter(|p| p.vertex == v).collect();
        let mut inner: Vec<TubeId> = Vec::new();
        let mut outer: BTreeMap<bool, Vec<PortId>> = BTreeMap::new();
        for p in &panels {
            for &port in &p.ports {
                let t = d.tube(d.port(port).tube);
                if t.kind.is_vertical() {
                    if !inner.contains(&t.id) {
                        inner.push(t.id);
                    }
                } else {
                    outer.entry(p.side == Side::Top).or_default().push(port);
                }
            }
        }
        inner.sort_unstable();
        let slots = inner
            .len()
            .max(outer.get(&true).map_or(0, Vec::len))
            .max(outer.get(&false).map_or(0, Vec::len))
            .max(1);
        let w = slots as f64 * SLOT + 40.0;
        let spread = |i: usize, n: usize| x0 + 20.0 + (i as f64 + 0.5) * (w - 40.0) / n as f64;
        for (i, &t) in inner.iter().enumerate() {
            let x = spread(i, inner.len());
            let [p0, p1] = d.tube(t).ports;
            port_at.insert(p0, (x, TOP_Y + PANEL_H));
            port_out.insert(p0, (0.0, 1.0));
            port_at.insert(p1, (x, BOTTOM_Y));
            port_out.insert(p1, (0.0, -1.0));
        }
        for (top, ports) in &outer {
            for (i, &p) in ports.iter().enumerate() {
                let x = spread(i, ports.len());
                if *top {
                    port_at.insert(p, (x, TOP_Y));
                    port_out.insert(p, (0.0, -1.0));
                } else {
                    port_at.insert(p, (x, BOTTOM_Y + PANEL_H));
                    port_out.insert(p, (0.0, 1.0));
                }
            }
        }
        col_right.push(x0 + w);
        x0 += w + spec.column_gap;
    }
    Layout {
        port_at,
        port_out,
        col_right,
        width: x0 - spec.column_gap + MARGIN,
        height: BOTTOM_Y + PANEL_H + 90.0,
    }
}

fn panel_rect(d: &SymbolicDiagram, l: &Layout, v: usize) -> (f64, f64) {
    let xs: Vec<f64> = d
        .panels()
        .iter()
        .filter(|p| p.vertex == v)
        .flat_map(|p| p.ports.iter().map(|q| l.port_at[q].0))
        .collect();
    let lo = xs.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if xs.is_empty() {
        (MARGIN, MARGIN + SLOT + 40.0)
    } else {
        (lo - SLOT / 2.0 - 20.0, hi + SLOT / 2.0 + 20.0)
    }
}

/// Centre line of a tube, from the end-0 port to the end-1 port.
fn tube_path(d: &SymbolicDiagram, l: &Layout, t: TubeId) -> Vec<Pt> {
    let tube = d.tube(t);
    let (a, b) = (l.port_at[&tube.ports[0]], l.port_at[&tube.ports[1]]);
    let (oa, ob) = (l.port_out[&tube.ports[0]], l.port_out[&tube.ports[1]]);
    if tube.kind.is_vertical() {
        return vec![a, b];
    }
    let reach = if tube.kind == TubeKind::Handle {
        35.0
    } else {
        55.0
    };
    let ca = (a.0 + oa.0 * reach, a.1 + oa.1 * reach);
    let cb = (b.0 + ob.0 * reach, b.1 + ob.1 * reach);
    if oa == ob {
        vec![a, ca, cb, b]
    } else {
        // rims face opposite ways: pass through the gap right of the leftmost end
        let column = |p: PortId| d.panels()[d.port(p).panel].vertex;
        let left = column(tube.ports[0]).min(column(tube.ports[1]));
        let gap = l.col_right[left] + 45.0 + ((t % 5) as f64 - 2.0) * 6.0;
        vec![a, ca, (gap, ca.1), (gap, cb.1), cb, b]
    }
}

fn along(path: &[Pt], shift: Pt) -> Vec<Pt> {
    path.iter()
        .map(|p| (p.0 + shift.0, p.1 + shift.1))
        .collect()
}

fn midpoint(path: &[Pt]) -> Pt {
    if path.len().is_multiple_of(2) {
        let (a, b) = (path[path.len() / 2 - 1], path[path.len() / 2]);
        ((a.0 + b.0) / 2.0, (a.1 + b.1) / 2.0)
    } else {
        path[path.len() / 2]
    }
}

fn shapes(d: &SymbolicDiagram, spec: &RenderSpec) -> (Layout, Vec<Shape>) {
    let l = layout(d, spec);
    let mut out = Vec::new();
    for (v, name) in d.vertex_names().iter().enumerate() {
        let (x0, x1) = panel_rect(d, &l, v);
        for y in [TOP_Y, BOTTOM_Y] {
            out.push(Shape::Panel {
                x: x0,
                y,
                w: x1 - x0,
                h: PANEL_H,
            });
        }
        out.push(Shape::Text {
            at: ((x0 + x1) / 2.0, TOP_Y + PANEL_H / 2.0 + 5.0),
            text: name.clone(),
            class: "vertex",
        });
    }

    let mut crossings: HashMap<TubeId, usize> = HashMap::new();
    if let Ok(m) = compile(d) {
        for c in m.crossings() {
            *crossings.entry(c.tube).or_default() += 1;
        }
    }
    // labels already placed, to keep new ones from overlapping
    let mut placed: Vec<Pt> = Vec::new();
    let free_spot = |mut at: Pt, placed: &mut Vec<Pt>| {
        while placed
            .iter()
            .any(|p| (p.0 - at.0).abs() < 30.0 && (p.1 - at.1).abs() < 11.0)
        {
            at.1 += 12.0;
        }
        placed.push(at);
        at
    };
    let step = |n: usize| (spec.tube_width - 8.0) / n.max(1) as f64;
    for t in d.tubes() {
        let path = tube_path(d, &l, t.id);
        out.push(Shape::Tube {
            path: path.clone(),
            width: spec.tube_width,
        });
        let sign = match t.sign {
            1 => "+",
            -1 => "-",
            _ => "0",
        };
        let (mx, my) = midpoint(&path);
        out.push(Shape::Text {
            at: free_spot((mx + spec.tube_width / 2.0 + 14.0, my + 4.0), &mut placed),
            text: format!("{sign} ({})", crossings.get(&t.id).copied().unwrap_or(0)),
            class: "tube",
        });
        for p in t.ports {
            out.push(Shape::Port {
                at: l.port_at[&p],
                rx: spec.tube_width / 2.0,
            });
        }
    }

    // station offset across the tube, by slot
    let offset = |tube: TubeId, strand: usize| {
        let t = d.tube(tube);
        let n = t.slots.len();
        let k = t.slot_of(strand).unwrap_or(0) as f64;
        (k - (n as f64 - 1.0) / 2.0) * step(n)
    };
    let station = |port: PortId, strand: usize| {
        let (x, y) = l.port_at[&port];
        (x + offset(d.port(port).tube, strand), y)
    };
    for c in d.curves() {
        let mut path: Vec<Pt> = Vec::new();
        let mut markers = Vec::new();
        for seg in d.segments(c) {
            match seg {
                Segment::PanelArc { from, to, .. } => {
                    path.push(station(from.port, from.strand));
                    path.push(station(to.port, to.strand));
                }
                Segment::TubePass(p) => {
                    let mut centre =
                        along(&tube_path(d, &l, p.tube), (offset(p.tube, p.strand), 0.0));
                    if p.direction == Direction::Backward {
                        centre.reverse();
                    }
                    if p.twist != 0 {
                        markers.push(midpoint(&centre));
                    }
                    path.extend(centre.into_iter().skip(1));
                }
            }
        }
        path.dedup();
        let first = path.first().copied().unwrap_or((MARGIN, MARGIN));
        let label_at = free_spot((first.0 + 3.0, first.1 + 14.0), &mut placed);
        let letter = if c.color == Color::Red { 'r' } else { 'b' };
        out.push(Shape::Curve {
            path,
            color: c.color,
        });
        for at in markers {
            out.push(Shape::Marker { at, color: c.color });
        }
        out.push(Shape::Text {
            at: label_at,
            text: format!("{letter}{}", c.id),
            class: if c.color == Color::Red { "red" } else { "blue" },
        });
    }
    // labels on top
    out.sort_by_key(|s| matches!(s, Shape::Text { .. }));
    (l, out)
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn svg_points(path: &[Pt]) -> String {
    path.iter()
        .map(|(x, y)| format!("{x:.1},{y:.1}"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn to_svg(l: &Layout, shapes: &[Shape], spec: &RenderSpec) -> String {
    let mut s = String::new();
    let (w, h) = (l.width, l.height);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.0} {h:.0}">"#
    );
    let _ = writeln!(
        s,
        "<style>text{{font-family:sans-serif;font-size:11px}} .vertex{{font-size:14px;font-weight:bold}} .red{{fill:{}}} .blue{{fill:{}}}</style>",
        spec.red, spec.blue
    );
    let colour = |c: Color| if c == Color::Red { spec.red } else { spec.blue };
    for sh in shapes {
        match sh {
            Shape::Panel { x, y, w, h } => {
                let _ = writeln!(
                    s,
                    r##"<rect x="{x:.1}" y="{y:.1}" width="{w:.1}" height="{h:.1}" rx="18" fill="#f5f1e8" stroke="#555"/>"##
                );
            }
            Shape::Tube { path, width } => {
                let _ = writeln!(
                    s,
                    r##"<polyline points="{}" fill="none" stroke="#bbb" stroke-opacity="0.6" stroke-width="{width:.1}" stroke-linejoin="round"/>"##,
                    svg_points(path)
                );
            }
            Shape::Port { at, rx } => {
                let _ = writeln!(
                    s,
                    r##"<ellipse cx="{:.1}" cy="{:.1}" rx="{rx:.1}" ry="5" fill="#fff" stroke="#555"/>"##,
                    at.0, at.1
                );
            }
            Shape::Curve { path, color } => {
                let _ = writeln!(
                    s,
                    r#"<polygon points="{}" fill="none" stroke="{}" stroke-width="1.5"/>"#,
                    svg_points(path),
                    colour(*color)
                );
            }
            Shape::Marker { at, color } => {
                let _ = writeln!(
                    s,
                    r##"<circle cx="{:.1}" cy="{:.1}" r="3" fill="{}"/>"##,
                    at.0,
                    at.1,
                    colour(*color)
                );
            }
            Shape::Text { at, text, class } => {
                let _ = writeln!(
                    s,
                    r#"<text x="{:.1}" y="{:.1}" class="{class}" text-anchor="middle">{}</text>"#,
                    at.0,
                    at.1,
                    xml_escape(text)
                );
            }
        }
    }
    s.push_str("</svg>\n");
    s
}

fn tikz_escape(s: &str) -> String {
    s.replace('_', "\\_")
}

fn tikz_path(path: &[Pt]) -> String {
    path.iter()
        .map(|(x, y)| format!("({x:.1},{y:.1})"))
        .collect::<Vec<_>>()
        .join(" -- ")
}

fn to_tikz(shapes: &[Shape], spec: &RenderSpec) -> String {
    let mut s = String::new();
    let hex = |c: &str| c.trim_start_matches('#').to_uppercase();
    let _ = writeln!(s, "\\definecolor{{plumbred}}{{HTML}}{{{}}}", hex(spec.red));
    let _ = writeln!(
        s,
        "\\definecolor{{plumbblue}}{{HTML}}{{{}}}",
        hex(spec.blue)
    );
    s.push_str("\\begin{tikzpicture}[x=0.02cm,y=-0.02cm]\n");
    let colour = |c: Color| {
        if c == Color::Red {
            "plumbred"
        } else {
            "plumbblue"
        }
    };
    for sh in shapes {
        match sh {
            Shape::Panel { x, y, w, h } => {
                let _ = writeln!(
                    s,
                    "  \\draw[rounded corners=6pt, fill=black!4] ({x:.1},{y:.1}) rectangle ({:.1},{:.1});",
                    x + w,
                    y + h
                );
            }
            Shape::Tube { path, width } => {
                let _ = writeln!(
                    s,
                    "  \\draw[black!25, line width={:.1}pt, line join=round] {};",
                    width * 0.5,
                    tikz_path(path)
                );
            }
            Shape::Port { at, rx } => {
                let _ = writeln!(
                    s,
                    "  \\draw[fill=white] ({:.1},{:.1}) ellipse [x radius={rx:.1}, y radius=5];",
                    at.0, at.1
                );
            }
            Shape::Curve { path, color } => {
                let _ = writeln!(
                    s,
                    "  \\draw[{}, thick] {} -- cycle;",
                    colour(*color),
                    tikz_path(path)
                );
            }
            Shape::Marker { at, color } => {
                let _ = writeln!(
                    s,
                    "  \\fill[{}] ({:.1},{:.1}) circle [radius=3];",
                    colour(*color),
                    at.0,
                    at.1
                );
            }
            Shape::Text { at, text, class } => {
                let style = match *class {
                    "red" => "text=plumbred, font=\\scriptsize",
                    "blue" => "text=plumbblue, font=\\scriptsize",
                    "vertex" => "font=\\bfseries",
                    _ => "font=\\scriptsize",
                };
                let _ = writeln!(
                    s,
                    "  \\node[{style}] at ({:.1},{:.1}) {{{}}};",
                    at.0,
                    at.1,
                    tikz_escape(text)
                );
            }
        }
    }
    s.push_str("\\end{tikzpicture}\n");
    s
}

pub fn render(d: &SymbolicDiagram, spec: &RenderSpec) -> String {
    let (l, sh) = shapes(d, spec);
    match spec.format {
        Format::Svg => to_svg(&l, &sh, spec),
        Format::Tikz => to_tikz(&sh, spec),
    }
}
