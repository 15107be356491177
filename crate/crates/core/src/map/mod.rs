//! Combinatorial maps: darts with an opposite involution and a rotation.

mod compile;
mod crossing;
mod cut;

use serde::Serialize;
use thiserror::Error;

use crate::diagram::{Color, CurveId, StrandId, TubeId};
use crate::graph::UnionFind;

pub use compile::compile;
pub use crossing::{annulus_crossings, h1_from_diagram, relation_matrix, StrandGeom};
pub use cut::{validate_cut_system, CutReport};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MapError {
    #[error("opposite is not a fixed-point-free involution")]
    BadOpposite,
    #[error("rotation is not a permutation")]
    BadRotation,
    #[error("map is not connected")]
    Disconnected,
    #[error("tube {tube}: same-colour strands {a} and {b} cross")]
    SameColorCrossing {
        tube: TubeId,
        a: StrandId,
        b: StrandId,
    },
    #[error("tube {0}: coincident stations")]
    CoincidentStations(TubeId),
    #[error("panel {0} does not carry a connected graph")]
    PanelDisconnected(usize),
    #[error(transparent)]
    Diagram(#[from] crate::diagram::DiagramError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeKind {
    Ring,
    Arc,
    Strand,
    Anchor,
    Scaffold,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DartLabel {
    pub kind: EdgeKind,
    pub curve: Option<(Color, CurveId)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CrossingRecord {
    pub tube: TubeId,
    pub red_strand: StrandId,
    pub blue_strand: StrandId,
    pub red_curve: CurveId,
    pub blue_curve: CurveId,
    /// Height in the tube as an exact fraction (numerator, denominator).
    pub position: (i64, i64),
    pub sign: i64,
}

/// Darts of one curve, each leaving a vertex in the curve's direction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveWalk {
    pub curve: CurveId,
    pub color: Color,
    pub darts: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CombinatorialMap {
    opposite: Vec<usize>,
    rotation: Vec<usize>,
    labels: Vec<DartLabel>,
    crossings: Vec<CrossingRecord>,
    walks: Vec<CurveWalk>,
}

impl CombinatorialMap {
    /// Bare map from an involution and a rotation permutation.
    pub fn new(opposite: Vec<usize>, rotation: Vec<usize>) -> Result<Self, MapError> {
        let n = opposite.len();
        let labels = vec![
            DartLabel {
                kind: EdgeKind::Scaffold,
                curve: None
            };
            n
        ];
        Self::with_labels(opposite, rotation, labels, Vec::new(), Vec::new())
    }

    pub(crate) fn with_labels(
        opposite: Vec<usize>,
        rotation: Vec<usize>,
        labels: Vec<DartLabel>,
        crossings: Vec<CrossingRecord>,
        walks: Vec<CurveWalk>,
    ) -> Result<Self, MapError> {
        let n = opposite.len();
        if rotation.len() != n || labels.len() != n {
            return Err(MapError::BadRotation);
        }
        for (d, &o) in opposite.iter().enumerate() {
            if o >= n || o == d || opposite[o] != d {
                return Err(MapError::BadOpposite);
            }
        }
        let mut hit = vec![false; n];
        for &r in &rotation {
            if r >= n || hit[r] {
                return Err(MapError::BadRotation);
            }
            hit[r] = true;
        }
        Ok(CombinatorialMap {
            opposite,
            rotation,
            labels,
            crossings,
            walks,
        })
    }

    /// Add a curve walk to a bare map (used to pose cutting problems directly).
    pub fn with_walk(mut self, curve: CurveId, color: Color, darts: Vec<usize>) -> Self {
        for w in darts.iter().flat_map(|&d| [d, self.opposite[d]]) {
            self.labels[w].curve = Some((color, curve));
        }
        self.walks.push(CurveWalk {
            curve,
            color,
            darts,
        });
        self
    }

    pub fn dart_count(&self) -> usize {
        self.opposite.len()
    }

    pub fn opposite(&self, d: usize) -> usize {
        self.opposite[d]
    }

    pub fn rotate(&self, d: usize) -> usize {
        self.rotation[d]
    }

    pub fn label(&self, d: usize) -> DartLabel {
        self.labels[d]
    }

    pub fn crossings(&self) -> &[CrossingRecord] {
        &self.crossings
    }

    pub fn walks(&self) -> &[CurveWalk] {
        &self.walks
    }

    /// Vertex index of each dart and the number of vertices.
    pub fn vertex_ids(&self) -> (Vec<usize>, usize) {
        orbit_ids(self.dart_count(), |d| self.rotation[d])
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_ids().1
    }

    pub fn edge_count(&self) -> usize {
        self.dart_count() / 2
    }

    pub fn face_count(&self) -> usize {
        orbit_ids(self.dart_count(), |d| self.rotation[self.opposite[d]]).1
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertex_count() as i64 - self.edge_count() as i64 + self.face_count() as i64
    }

    pub fn component_count(&self) -> usize {
        component_count(&self.opposite, &self.rotation)
    }
}

/// Orbit index of every element under a permutation.
pub(crate) fn orbit_ids(n: usize, next: impl Fn(usize) -> usize) -> (Vec<usize>, usize) {
    let mut id = vec![usize::MAX; n];
    let mut count = 0;
    for start in 0..n {
        if id[start] != usize::MAX {
            continue;
        }
        let mut d = start;
        while id[d] == usize::MAX {
            id[d] = count;
            d = next(d);
        }
        count += 1;
    }
    (id, count)
}

pub(crate) fn component_count(opposite: &[usize], rotation: &[usize]) -> usize {
    let n = opposite.len();
    let mut uf = UnionFind::new(n);
    let mut count = n;
    for d in 0..n {
        for e in [opposite[d], rotation[d]] {
            if uf.union(d, e) {
                count -= 1;
            }
        }
    }
    count
}

/// Genus of a connected closed map from V - E + F = 2 - 2G.
pub fn surface_genus(m: &CombinatorialMap) -> Result<usize, MapError> {
    if m.component_count() != 1 {
        return Err(MapError::Disconnected);
    }
    let chi = m.euler_characteristic();
    Ok(((2 - chi) / 2) as usize)
}
