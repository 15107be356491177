//! Symbolic diagram to combinatorial map, with every crossing materialized.
//!
//! Station vertices have rotation [ring next, panel arc, ring prev, tube strand].
//! A tube is drawn with theta to the right and s upward, so a strand of slope w
//! leaves a crossing upward at angle atan2(1, w).

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};

use super::crossing::tube_strands;
use super::*;
use crate::diagram::{PortId, SymbolicDiagram};

const NEXT: usize = 0;
const ARC: usize = 1;
const PREV: usize = 2;
const STRAND: usize = 3;

#[derive(Default)]
struct Builder {
    opposite: Vec<usize>,
    labels: Vec<DartLabel>,
    /// Ccw dart lists, one per vertex.
    vertices: Vec<Vec<usize>>,
}

impl Builder {
    fn edge(&mut self, kind: EdgeKind, curve: Option<(Color, CurveId)>) -> (usize, usize) {
        let a = self.opposite.len();
        self.opposite.extend([a + 1, a]);
        let label = DartLabel { kind, curve };
        self.labels.extend([label, label]);
        (a, a + 1)
    }

    fn finish(
        self,
        crossings: Vec<CrossingRecord>,
        walks: Vec<CurveWalk>,
    ) -> Result<CombinatorialMap, MapError> {
        let mut rotation = vec![usize::MAX; self.opposite.len()];
        for darts in &self.vertices {
            for (i, &d) in darts.iter().enumerate() {
                rotation[d] = darts[(i + 1) % darts.len()];
            }
        }
        CombinatorialMap::with_labels(self.opposite, rotation, self.labels, crossings, walks)
    }
}

/// Exact fraction p/q with q > 0.
#[derive(Clone, Copy, Debug)]
struct Frac(i64, i64);

impl Frac {
    fn new(p: i64, q: i64) -> Frac {
        if q < 0 {
            Frac(-p, -q)
        } else {
            Frac(p, q)
        }
    }

    fn cmp(&self, o: &Frac) -> Ordering {
        (self.0 as i128 * o.1 as i128).cmp(&(o.0 as i128 * self.1 as i128))
    }
}

struct Cross {
    slopes: [i64; 2],
    darts: [[usize; 2]; 2],
}

pub fn compile(d: &SymbolicDiagram) -> Result<CombinatorialMap, MapError> {
    d.check_invariants()?;
    let mut b = Builder::default();
    // dart slots of each station vertex
    let mut station: HashMap<(PortId, StrandId), [usize; 4]> = HashMap::new();
    let mut anchors: HashMap<PortId, Vec<usize>> = HashMap::new();
    // (panel, dart) for every edge drawn inside a panel
    let mut panel_edges: Vec<(usize, usize)> = Vec::new();

    for port in 0..d.port_count() {
        let info = d.port(port);
        let ring = d.tube(info.tube).ring(info.end);
        if ring.is_empty() {
            let (x, y) = b.edge(EdgeKind::Anchor, None);
            panel_edges.push((info.panel, x));
            anchors.insert(port, vec![x, y]);
            continue;
        }
        for (i, &s) in ring.iter().enumerate() {
            let t = ring[(i + 1) % ring.len()];
            let (x, y) = b.edge(EdgeKind::Ring, None);
            panel_edges.push((info.panel, x));
            station.entry((port, s)).or_insert([usize::MAX; 4])[NEXT] = x;
            station.entry((port, t)).or_insert([usize::MAX; 4])[PREV] = y;
        }
    }

    // panel arcs; remember the dart leaving each arc's start
    let mut arc_dart: HashMap<(CurveId, usize), usize> = HashMap::new();
    for c in d.curves() {
        let k = c.passes.len();
        for i in 0..k {
            let prev = &c.passes[(i + k - 1) % k];
            let cur = &c.passes[i];
            let from = (d.exit_port(prev), prev.strand);
            let to = (d.entry_port(cur), cur.strand);
            let (x, y) = b.edge(EdgeKind::Arc, Some((c.color, c.id)));
            panel_edges.push((d.port(from.0).panel, x));
            station.get_mut(&from).expect("arc start is a station")[ARC] = x;
            station.get_mut(&to).expect("arc end is a station")[ARC] = y;
            arc_dart.insert((c.id, i), x);
        }
    }

    // strands in tubes, cut at crossings
    let mut crossings = Vec::new();
    let mut cross_vertices: Vec<Cross> = Vec::new();
    // per strand, upward darts leaving each point from end 0 to end 1
    let mut chain_up: HashMap<StrandId, Vec<usize>> = HashMap::new();
    for t in d.tubes() {
        let strands = tube_strands(d, t.id);
        let n = t.slots.len();
        if strands.is_empty() {
            let (x, y) = b.edge(EdgeKind::Scaffold, None);
            anchors.get_mut(&t.ports[0]).expect("anchor").push(x);
            anchors.get_mut(&t.ports[1]).expect("anchor").push(y);
            continue;
        }
        // points on each strand: (height, crossing index, which side)
        let mut points: BTreeMap<StrandId, Vec<(Frac, usize, usize)>> = BTreeMap::new();
        for (ia, a) in strands.iter().enumerate() {
            for bb in &strands[ia + 1..] {
                let (sa, ca, cida, ga) = a;
                let (sb, cb, cidb, gb) = bb;
                let count = annulus_crossings(t.id, n, ga, gb)?;
                let dw = ga.twist - gb.twist;
                if dw == 0 {
                    continue;
                }
                if ca == cb {
                    return Err(MapError::SameColorCrossing {
                        tube: t.id,
                        a: *sa,
                        b: *sb,
                    });
                }
                // theta units 1/(2n): u = 2(ka - kb); lifts m with m*2n strictly between u and v
                let n2 = 2 * n as i64;
                let u = 2 * (ga.slot_in as i64 - gb.slot_in as i64);
                let v = u + n2 * dw;
                let (lo, hi) = if u < v { (u, v) } else { (v, u) };
                let first = lo.div_euclid(n2) + 1;
                let last = (hi - 1).div_euclid(n2);
                debug_assert_eq!((last - first + 1).abs(), count.abs());
                for m in first..=last {
                    let s = Frac::new(m * n2 - u, n2 * dw);
                    let idx = cross_vertices.len();
                    cross_vertices.push(Cross {
                        slopes: [ga.twist, gb.twist],
                        darts: [[usize::MAX; 2]; 2],
                    });
                    points.entry(*sa).or_default().push((s, idx, 0));
                    points.entry(*sb).or_default().push((s, idx, 1));
                    let (red, blue, rc, bc, gr, gbl) = if *ca == Color::Red {
                        (*sa, *sb, *cida, *cidb, ga, gb)
                    } else {
                        (*sb, *sa, *cidb, *cida, gb, ga)
                    };
                    let dwb = gbl.twist - gr.twist;
                    crossings.push(CrossingRecord {
                        tube: t.id,
                        red_strand: red,
                        blue_strand: blue,
                        red_curve: rc,
                        blue_curve: bc,
                        position: (s.0, s.1),
                        sign: gr.epsilon * gbl.epsilon * dwb.signum(),
                    });
                }
            }
        }
        for (s, color, cid, _) in &strands {
            let mut pts = points.remove(s).unwrap_or_default();
            pts.sort_by(|x, y| x.0.cmp(&y.0));
            let mut ups = Vec::with_capacity(pts.len() + 1);
            let seg = |b: &mut Builder| b.edge(EdgeKind::Strand, Some((*color, *cid)));
            // end 0 station to first point, between points, last point to end 1
            let (x, y) = seg(&mut b);
            station.get_mut(&(t.ports[0], *s)).expect("station")[STRAND] = x;
            ups.push(x);
            let mut pending_down = y;
            for &(_, idx, side) in &pts {
                cross_vertices[idx].darts[side][1] = pending_down;
                let (x, y) = seg(&mut b);
                cross_vertices[idx].darts[side][0] = x;
                ups.push(x);
                pending_down = y;
            }
            station.get_mut(&(t.ports[1], *s)).expect("station")[STRAND] = pending_down;
            chain_up.insert(*s, ups);
        }
    }

    for (_, darts) in station {
        debug_assert!(darts.iter().all(|&x| x != usize::MAX));
        b.vertices.push(darts.to_vec());
    }
    for (_, darts) in anchors {
        b.vertices.push(darts);
    }
    for c in &cross_vertices {
        let [[a_up, a_down], [b_up, b_down]] = c.darts;
        let order = if c.slopes[0] > c.slopes[1] {
            [a_up, b_up, a_down, b_down]
        } else {
            [b_up, a_up, b_down, a_down]
        };
        b.vertices.push(order.to_vec());
    }
    // deterministic vertex order does not matter for the rotation, but keep it stable
    b.vertices.sort_by_key(|v| v[0]);

    let mut walks = Vec::new();
    for c in d.curves() {
        let mut darts = Vec::new();
        for (i, p) in c.passes.iter().enumerate() {
            darts.push(arc_dart[&(c.id, i)]);
            let ups = &chain_up[&p.strand];
            match p.direction {
                crate::diagram::Direction::Forward => darts.extend(ups.iter().copied()),
                crate::diagram::Direction::Backward => {
                    darts.extend(ups.iter().rev().map(|&x| b.opposite[x]))
                }
            }
        }
        walks.push(CurveWalk {
            curve: c.id,
            color: c.color,
            darts,
        });
    }

    let map = b.finish(crossings, walks)?;
    check_panels(&map, &panel_edges)?;
    if map.component_count() != 1 {
        return Err(MapError::Disconnected);
    }
    Ok(map)
}

/// Each panel's ring and arc edges must form one connected graph, otherwise
/// faces would not be disks and the Euler count would be meaningless.
fn check_panels(map: &CombinatorialMap, panel_edges: &[(usize, usize)]) -> Result<(), MapError> {
    let (vid, nv) = map.vertex_ids();
    let mut uf = UnionFind::new(nv);
    for &(_, dart) in panel_edges {
        uf.union(vid[dart], vid[map.opposite(dart)]);
    }
    let mut root_of_panel: HashMap<usize, usize> = HashMap::new();
    for &(panel, dart) in panel_edges {
        let r = uf.find(vid[dart]);
        if *root_of_panel.entry(panel).or_insert(r) != r {
            return Err(MapError::PanelDisconnected(panel));
        }
    }
    Ok(())
}
