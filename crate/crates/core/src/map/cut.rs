//! Cutting a map along the curves of one colour.
//!
//! Every vertex on a curve splits into a left and a right copy and every curve
//! edge is doubled. The hole left by each curve becomes two new faces, so the
//! result is the cut surface with its boundary circles capped off.

use std::collections::HashMap;

use serde::Serialize;

use super::*;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CutReport {
    pub disjoint: bool,
    pub count: usize,
    pub complement_connected: bool,
    pub complement_genus: usize,
    pub boundary_circles: usize,
}

impl CutReport {
    /// A cut system of a genus-`genus` surface.
    pub fn valid_for(&self, genus: usize) -> bool {
        self.disjoint
            && self.count == genus
            && self.complement_connected
            && self.complement_genus == 0
    }
}

pub fn validate_cut_system(m: &CombinatorialMap, color: Color) -> CutReport {
    let walks: Vec<&CurveWalk> = m.walks().iter().filter(|w| w.color == color).collect();
    let (vid, nv) = m.vertex_ids();

    // each vertex may be visited once by the whole family
    let mut visits = vec![0usize; nv];
    for w in &walks {
        for &d in &w.darts {
            visits[vid[d]] += 1;
        }
    }
    let disjoint = visits.iter().all(|&v| v <= 1);
    if !disjoint {
        return CutReport {
            disjoint,
            count: walks.len(),
            complement_connected: false,
            complement_genus: 0,
            boundary_circles: 0,
        };
    }

    let n = m.dart_count();
    // new darts: old indices for untouched darts, two copies for each curve dart
    let mut copy: HashMap<usize, (usize, usize)> = HashMap::new();
    let mut next = n;
    for w in &walks {
        for &d in &w.darts {
            for x in [d, m.opposite(d)] {
                copy.insert(x, (next, next + 1));
                next += 2;
            }
        }
    }
    let total = next;
    let left = |d: usize| copy[&d].0;
    let right = |d: usize| copy[&d].1;

    let mut opposite: Vec<usize> = (0..total).collect();
    for d in 0..n {
        if let Some(&(l, r)) = copy.get(&d) {
            let o = m.opposite(d);
            opposite[l] = left(o);
            opposite[r] = right(o);
        } else {
            opposite[d] = m.opposite(d);
        }
    }
    // retired darts become isolated 2-cycles so they count separately and are removed below
    let mut rotation: Vec<usize> = (0..total).collect();
    let mut on_curve = vec![None::<(usize, usize)>; nv];
    for w in &walks {
        let k = w.darts.len();
        for i in 0..k {
            let dn = w.darts[i];
            let dp = m.opposite(w.darts[(i + k - 1) % k]);
            on_curve[vid[dn]] = Some((dn, dp));
        }
    }
    let mut vertex_lists: Vec<Vec<usize>> = Vec::new();
    let mut seen = vec![false; nv];
    for (start, &v) in vid.iter().enumerate().take(n) {
        if seen[v] {
            continue;
        }
        seen[v] = true;
        match on_curve[v] {
            None => {
                let mut cyc = vec![start];
                let mut d = m.rotate(start);
                while d != start {
                    cyc.push(d);
                    d = m.rotate(d);
                }
                vertex_lists.push(cyc);
            }
            Some((dn, dp)) => {
                let mut l = vec![left(dn)];
                let mut d = m.rotate(dn);
                while d != dp {
                    l.push(d);
                    d = m.rotate(d);
                }
                l.push(left(dp));
                let mut r = vec![right(dp)];
                let mut d = m.rotate(dp);
                while d != dn {
                    r.push(d);
                    d = m.rotate(d);
                }
                r.push(right(dn));
                vertex_lists.push(l);
                vertex_lists.push(r);
            }
        }
    }
    for cyc in &vertex_lists {
        for (i, &d) in cyc.iter().enumerate() {
            rotation[d] = cyc[(i + 1) % cyc.len()];
        }
    }

    // compact away the retired curve darts
    let live: Vec<usize> = (0..total).filter(|d| !copy.contains_key(d)).collect();
    let mut index = vec![usize::MAX; total];
    for (i, &d) in live.iter().enumerate() {
        index[d] = i;
    }
    let opp: Vec<usize> = live.iter().map(|&d| index[opposite[d]]).collect();
    let rot: Vec<usize> = live.iter().map(|&d| index[rotation[d]]).collect();

    let components = component_count(&opp, &rot);
    let v = vertex_lists.len() as i64;
    let e = (live.len() / 2) as i64;
    let (face_of, f) = orbit_ids(live.len(), |d| rot[opp[d]]);
    let chi = v - e + f as i64;
    // faces made only of copied darts are the boundary circles
    let mut pure = vec![true; f];
    for (i, &d) in live.iter().enumerate() {
        if d < n {
            pure[face_of[i]] = false;
        }
    }
    let boundary_circles = pure.iter().filter(|&&p| p).count();
    let complement_connected = components == 1;
    let complement_genus = if complement_connected {
        ((2 - chi) / 2).max(0) as usize
    } else {
        0
    };
    CutReport {
        disjoint,
        count: walks.len(),
        complement_connected,
        complement_genus,
        boundary_circles,
    }
}
