//! Crossings of strands in an annulus and the algebraic intersection matrix.

use super::MapError;
use crate::diagram::{Color, SymbolicDiagram, TubeId};
use crate::linalg::{cokernel, H1Summary, IntMatrix};

/// A strand normalized to the tube direction: slots at both ends of a ring of
/// size `ring`, integer twist, and epsilon = +1 when traversed end 0 to end 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StrandGeom {
    pub slot_in: usize,
    pub slot_out: usize,
    pub twist: i64,
    pub epsilon: i64,
}

impl StrandGeom {
    /// Total theta displacement in units of 1/(2 ring).
    fn displacement(&self, ring: i64) -> i64 {
        2 * ring * self.twist + 2 * (self.slot_out as i64 - self.slot_in as i64)
    }
}

/// Signed crossing count: eps1 eps2 (floor v - floor u) with
/// u = theta_in(1) - theta_in(2) and v = u + (w1 - w2).
pub fn annulus_crossings(
    tube: TubeId,
    ring: usize,
    a: &StrandGeom,
    b: &StrandGeom,
) -> Result<i64, MapError> {
    if a.slot_in == b.slot_in || a.slot_out == b.slot_out {
        return Err(MapError::CoincidentStations(tube));
    }
    let n2 = 2 * ring as i64;
    // theta = (2k + 1) / 2n, so differences are 2 dk / 2n
    let u = 2 * (a.slot_in as i64 - b.slot_in as i64);
    let v = u + a.displacement(ring as i64) - b.displacement(ring as i64);
    Ok(a.epsilon * b.epsilon * (v.div_euclid(n2) - u.div_euclid(n2)))
}

/// Per tube, every strand with its curve, colour and geometry.
pub(crate) fn tube_strands(
    d: &SymbolicDiagram,
    tube: TubeId,
) -> Vec<(usize, Color, usize, StrandGeom)> {
    let t = d.tube(tube);
    d.passes_in(tube)
        .map(|(c, p)| {
            let k = t.slot_of(p.strand).expect("strand in tube");
            (
                p.strand,
                c.color,
                c.id,
                StrandGeom {
                    slot_in: k,
                    slot_out: k,
                    twist: p.twist,
                    epsilon: p.direction.epsilon(),
                },
            )
        })
        .collect()
}

/// R[j][i] sums crossings of blue curve j over red curve i, curves in id order.
pub fn relation_matrix(d: &SymbolicDiagram) -> Result<IntMatrix, MapError> {
    let reds: Vec<usize> = d.curves_of(Color::Red).map(|c| c.id).collect();
    let blues: Vec<usize> = d.curves_of(Color::Blue).map(|c| c.id).collect();
    let mut r = IntMatrix::zeros(blues.len(), reds.len());
    for t in d.tubes() {
        let strands = tube_strands(d, t.id);
        let n = t.slots.len();
        for (_, cb, idb, gb) in strands.iter().filter(|s| s.1 == Color::Blue) {
            debug_assert_eq!(*cb, Color::Blue);
            let j = blues.binary_search(idb).expect("blue curve");
            for (_, _, idr, gr) in strands.iter().filter(|s| s.1 == Color::Red) {
                let i = reds.binary_search(idr).expect("red curve");
                let x = annulus_crossings(t.id, n, gb, gr)?;
                if x != 0 {
                    r.add_to(j, i, x);
                }
            }
        }
    }
    Ok(r)
}

pub fn h1_from_diagram(d: &SymbolicDiagram) -> Result<H1Summary, MapError> {
    Ok(cokernel(&relation_matrix(d)?))
}
