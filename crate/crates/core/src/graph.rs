//! Plumbing graphs: vertices with genus and Euler number, signed edges.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::IntMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn from_value(v: i64) -> Option<Sign> {
        match v {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }

    pub fn negate(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexData {
    pub id: String,
    pub genus: u32,
    pub euler: i64,
}

/// Endpoints are indices into the vertex list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeData {
    pub ends: (usize, usize),
    pub sign: Sign,
}

impl EdgeData {
    pub fn touches(&self, v: usize) -> bool {
        self.ends.0 == v || self.ends.1 == v
    }

    pub fn other(&self, v: usize) -> usize {
        if self.ends.0 == v {
            self.ends.1
        } else {
            self.ends.0
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("self-loop at vertex `{0}`")]
    SelfLoop(String),
    #[error("graph is not connected")]
    Disconnected,
    #[error("graph has no vertices")]
    Empty,
    #[error("invalid vertex id `{0}`")]
    InvalidId(String),
    #[error("underlying graphs differ")]
    UnderlyingMismatch,
}

/// A validated plumbing graph. Vertex and edge order follow the input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlumbingGraph {
    vertices: Vec<VertexData>,
    edges: Vec<EdgeData>,
}

fn valid_id(id: &str) -> bool {
    !id.is_empty() && id.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl PlumbingGraph {
    pub fn new(vertices: Vec<VertexData>, edges: Vec<EdgeData>) -> Result<Self, GraphError> {
        if vertices.is_empty() {
            return Err(GraphError::Empty);
        }
        let mut seen = HashMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if !valid_id(&v.id) {
                return Err(GraphError::InvalidId(v.id.clone()));
            }
            if seen.insert(v.id.as_str(), i).is_some() {
                return Err(GraphError::DuplicateVertex(v.id.clone()));
            }
        }
        for e in &edges {
            let (a, b) = e.ends;
            if a >= vertices.len() || b >= vertices.len() {
                return Err(GraphError::UnknownVertex(format!("#{}", a.max(b))));
            }
            if a == b {
                return Err(GraphError::SelfLoop(vertices[a].id.clone()));
            }
        }
        let g = PlumbingGraph { vertices, edges };
        if !g.is_connected() {
            return Err(GraphError::Disconnected);
        }
        Ok(g)
    }

    pub fn vertices(&self) -> &[VertexData] {
        &self.vertices
    }

    pub fn edges(&self) -> &[EdgeData] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v.id == id)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.touches(v)).count()
    }

    /// Indices of edges incident to `v`, in file order.
    pub fn incident_edges(&self, v: usize) -> Vec<usize> {
        (0..self.edges.len())
            .filter(|&i| self.edges[i].touches(v))
            .collect()
    }

    fn is_connected(&self) -> bool {
        let n = self.vertices.len();
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(v) = queue.pop_front() {
            for e in self.edges.iter().filter(|e| e.touches(v)) {
                let w = e.other(v);
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn flip_vertex(&self, id: &str) -> Result<PlumbingGraph, GraphError> {
        let v = self
            .index_of(id)
            .ok_or_else(|| GraphError::UnknownVertex(id.to_string()))?;
        Ok(self.flip_index(v))
    }

    pub(crate) fn flip_index(&self, v: usize) -> PlumbingGraph {
        let mut g = self.clone();
        for e in g.edges.iter_mut().filter(|e| e.touches(v)) {
            e.sign = e.sign.negate();
        }
        g
    }

    /// Copy with the given edge signs, same order as `edges()`.
    pub fn with_signs(&self, signs: &[Sign]) -> PlumbingGraph {
        assert_eq!(signs.len(), self.edges.len());
        let mut g = self.clone();
        for (e, &s) in g.edges.iter_mut().zip(signs) {
            e.sign = s;
        }
        g
    }

    pub fn intersection_matrix(&self) -> IntMatrix {
        let n = self.vertices.len();
        let mut a = vec![0i64; n * n];
        for (i, v) in self.vertices.iter().enumerate() {
            a[i * n + i] = v.euler;
        }
        for e in &self.edges {
            let (x, y) = e.ends;
            a[x * n + y] += e.sign.value();
            a[y * n + x] += e.sign.value();
        }
        IntMatrix::from_i64(n, n, &a)
    }

    pub fn betti1(&self) -> usize {
        self.edges.len() + 1 - self.vertices.len()
    }

    /// Edges kept by a union-find scan in file order.
    pub fn spanning_tree(&self) -> Vec<usize> {
        let mut uf = UnionFind::new(self.vertices.len());
        let mut tree = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            if uf.union(e.ends.0, e.ends.1) {
                tree.push(i);
            }
        }
        tree
    }

    pub fn cycle_edges(&self) -> Vec<usize> {
        let tree = self.spanning_tree();
        (0..self.edges.len())
            .filter(|i| !tree.contains(i))
            .collect()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for v in &self.vertices {
            out.push_str(&format!(
                "vertex {} genus={} euler={}\n",
                v.id, v.genus, v.euler
            ));
        }
        for e in &self.edges {
            out.push_str(&format!(
                "edge {} {} sign={}\n",
                self.vertices[e.ends.0].id, self.vertices[e.ends.1].id, e.sign
            ));
        }
        out
    }
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut c = x;
        while self.parent[c] != r {
            let next = self.parent[c];
            self.parent[c] = r;
            c = next;
        }
        r
    }

    /// False when already joined.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}

/// Whether the sign assignments differ by vertex flips. Edges are matched by position.
pub fn same_orientation_class(g1: &PlumbingGraph, g2: &PlumbingGraph) -> Result<bool, GraphError> {
    let ids1: Vec<&str> = g1.vertices.iter().map(|v| v.id.as_str()).collect();
    let ids2: Vec<&str> = g2.vertices.iter().map(|v| v.id.as_str()).collect();
    if ids1 != ids2 || g1.edges.len() != g2.edges.len() {
        return Err(GraphError::UnderlyingMismatch);
    }
    for (e1, e2) in g1.edges.iter().zip(&g2.edges) {
        let same = e1.ends == e2.ends || e1.ends == (e2.ends.1, e2.ends.0);
        if !same {
            return Err(GraphError::UnderlyingMismatch);
        }
    }
    // look for x: V -> ±1 with x_a x_b = σ1 σ2 on every edge
    let n = g1.vertices.len();
    let mut x: Vec<Option<i64>> = vec![None; n];
    x[0] = Some(1);
    let mut queue = VecDeque::from([0usize]);
    while let Some(v) = queue.pop_front() {
        let xv = x[v].unwrap();
        for (e1, e2) in g1.edges.iter().zip(&g2.edges) {
            if !e1.touches(v) {
                continue;
            }
            let w = e1.other(v);
            let want = xv * e1.sign.value() * e2.sign.value();
            match x[w] {
                None => {
                    x[w] = Some(want);
                    queue.push_back(w);
                }
                Some(xw) if xw != want => return Ok(false),
                Some(_) => {}
            }
        }
    }
    Ok(true)
}

pub fn parse_graph(text: &str) -> Result<PlumbingGraph, GraphError> {
    let mut vertices: Vec<VertexData> = Vec::new();
    let mut index: BTreeMap<String, usize> = BTreeMap::new();
    let mut pending_edges: Vec<(usize, usize, String, String, Sign)> = Vec::new();

    for (ln, raw) in text.lines().enumerate() {
        let line_no = ln + 1;
        let line = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        };
        let tokens = tokenize(line);
        let Some(&(col0, head)) = tokens.first() else {
            continue;
        };
        let syntax = |column: usize, message: String| GraphError::Syntax {
            line: line_no,
            column,
            message,
        };
        match head {
            "vertex" => {
                let &(col, id) = tokens
                    .get(1)
                    .ok_or_else(|| syntax(col0 + head.len(), "expected vertex id".into()))?;
                if !valid_id(id) {
                    return Err(syntax(col, format!("invalid vertex id `{id}`")));
                }
                let mut genus = None;
                let mut euler = None;
                for &(c, tok) in &tokens[2..] {
                    let (key, val) = split_kv(tok)
                        .ok_or_else(|| syntax(c, format!("expected key=value, found `{tok}`")))?;
                    let vcol = c + key.len() + 1;
                    match key {
                        "genus" if genus.is_none() => {
                            genus = Some(val.parse::<u32>().map_err(|_| {
                                syntax(
                                    vcol,
                                    format!("genus must be a nonnegative integer, found `{val}`"),
                                )
                            })?);
                        }
                        "euler" if euler.is_none() => {
                            euler = Some(val.parse::<i64>().map_err(|_| {
                                syntax(vcol, format!("euler must be an integer, found `{val}`"))
                            })?);
                        }
                        "genus" | "euler" => {
                            return Err(syntax(c, format!("repeated key `{key}`")));
                        }
                        _ => return Err(syntax(c, format!("unknown vertex attribute `{key}`"))),
                    }
                }
                if index.contains_key(id) {
                    return Err(GraphError::DuplicateVertex(id.to_string()));
                }
                index.insert(id.to_string(), vertices.len());
                vertices.push(VertexData {
                    id: id.to_string(),
                    genus: genus.unwrap_or(0),
                    euler: euler.unwrap_or(0),
                });
            }
            "edge" => {
                let mut ends = Vec::new();
                for k in 1..3 {
                    let &(col, id) = tokens.get(k).ok_or_else(|| {
                        let end = tokens.last().map(|&(c, t)| c + t.len()).unwrap_or(col0);
                        syntax(end, "expected two vertex ids".into())
                    })?;
                    if !valid_id(id) {
                        return Err(syntax(col, format!("invalid vertex id `{id}`")));
                    }
                    ends.push(id);
                }
                let mut sign = None;
                for &(c, tok) in &tokens[3..] {
                    let (key, val) = split_kv(tok)
                        .ok_or_else(|| syntax(c, format!("expected key=value, found `{tok}`")))?;
                    let vcol = c + key.len() + 1;
                    match key {
                        "sign" if sign.is_none() => {
                            sign = Some(match val {
                                "+" | "+1" => Sign::Plus,
                                "-" | "-1" => Sign::Minus,
                                _ => {
                                    return Err(syntax(
                                        vcol,
                                        format!("sign must be + or -, found `{val}`"),
                                    ))
                                }
                            });
                        }
                        "sign" => return Err(syntax(c, "repeated key `sign`".into())),
                        _ => return Err(syntax(c, format!("unknown edge attribute `{key}`"))),
                    }
                }
                pending_edges.push((
                    line_no,
                    tokens[1].0,
                    ends[0].to_string(),
                    ends[1].to_string(),
                    sign.unwrap_or(Sign::Plus),
                ));
            }
            other => {
                return Err(syntax(
                    col0,
                    format!("expected `vertex` or `edge`, found `{other}`"),
                ));
            }
        }
    }

    let mut edges = Vec::new();
    for (_, _, a, b, sign) in pending_edges {
        let ia = *index.get(&a).ok_or(GraphError::UnknownVertex(a.clone()))?;
        let ib = *index.get(&b).ok_or(GraphError::UnknownVertex(b.clone()))?;
        if ia == ib {
            return Err(GraphError::SelfLoop(a));
        }
        edges.push(EdgeData {
            ends: (ia, ib),
            sign,
        });
    }
    PlumbingGraph::new(vertices, edges)
}

/// Whitespace tokens with 1-based columns.
fn tokenize(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s, &line[s..]));
    }
    out.into_iter()
        .map(|(s, t)| (line[..s].chars().count() + 1, t))
        .collect()
}

fn split_kv(tok: &str) -> Option<(&str, &str)> {
    let (k, v) = tok.split_once('=')?;
    if k.is_empty() || v.is_empty() {
        return None;
    }
    Some((k, v))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle(s: [Sign; 3]) -> PlumbingGraph {
        let text = format!(
            "vertex a\nvertex b\nvertex c\nedge a b sign={}\nedge b c sign={}\nedge a c sign={}\n",
            s[0], s[1], s[2]
        );
        parse_graph(&text).unwrap()
    }

    use Sign::{Minus as M, Plus as P};

    #[test]
    fn parses_defaults_and_comments() {
        let g =
            parse_graph("# header\nvertex a euler=-2 # trailing\n\nvertex b genus=1\nedge a b\n")
                .unwrap();
        assert_eq!(g.vertices()[0].euler, -2);
        assert_eq!(g.vertices()[0].genus, 0);
        assert_eq!(g.vertices()[1].genus, 1);
        assert_eq!(g.vertices()[1].euler, 0);
        assert_eq!(g.edges()[0].sign, P);
    }

    #[test]
    fn parse_errors() {
        match parse_graph("vertex a\nedge a\n") {
            Err(GraphError::Syntax { line: 2, .. }) => {}
            other => panic!("{other:?}"),
        }
        match parse_graph("vertex a euler=x\n") {
            Err(GraphError::Syntax {
                line: 1,
                column: 16,
                ..
            }) => {}
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_graph("vertex a\nvertex a\n"),
            Err(GraphError::DuplicateVertex(_))
        ));
        assert!(matches!(
            parse_graph("vertex a\nedge a b\n"),
            Err(GraphError::UnknownVertex(_))
        ));
        assert!(matches!(
            parse_graph("vertex a\nedge a a\n"),
            Err(GraphError::SelfLoop(_))
        ));
        assert!(matches!(
            parse_graph("vertex a\nvertex b\n"),
            Err(GraphError::Disconnected)
        ));
        assert!(matches!(parse_graph("# nothing\n"), Err(GraphError::Empty)));
        assert!(matches!(
            parse_graph("vertex a\nedge a b sign=*\n"),
            Err(GraphError::Syntax { .. })
        ));
        assert!(matches!(
            parse_graph("vertex a genus=-1\n"),
            Err(GraphError::Syntax { .. })
        ));
        assert!(matches!(
            parse_graph("node a\n"),
            Err(GraphError::Syntax {
                line: 1,
                column: 1,
                ..
            })
        ));
    }

    #[test]
    fn flip_examples() {
        let g = triangle([P, M, P]);
        // b is shared by the first two edges
        let f = g.flip_vertex("b").unwrap();
        let signs: Vec<Sign> = f.edges().iter().map(|e| e.sign).collect();
        assert_eq!(signs, vec![M, P, P]);
        assert_eq!(f.flip_vertex("b").unwrap(), g);
        assert!(g.flip_vertex("zz").is_err());

        let path = parse_graph("vertex a\nvertex b\nvertex c\nedge a b\nedge b c\n").unwrap();
        let f = path.flip_vertex("b").unwrap();
        assert!(f.edges().iter().all(|e| e.sign == M));
    }

    #[test]
    fn orientation_classes() {
        assert!(same_orientation_class(&triangle([P, P, P]), &triangle([P, M, M])).unwrap());
        assert!(!same_orientation_class(&triangle([P, P, P]), &triangle([P, P, M])).unwrap());
        let path = parse_graph("vertex a\nvertex b\nvertex c\nedge a b\nedge b c\n").unwrap();
        let other = path.with_signs(&[M, P]);
        assert!(same_orientation_class(&path, &other).unwrap());
        assert!(same_orientation_class(&path, &triangle([P, P, P])).is_err());
    }

    #[test]
    fn intersection_matrices() {
        let g = parse_graph("vertex a euler=-2\n").unwrap();
        assert_eq!(g.intersection_matrix(), IntMatrix::from_i64(1, 1, &[-2]));
        let g = parse_graph("vertex a euler=-2\nvertex b euler=-3\nedge a b\n").unwrap();
        assert_eq!(
            g.intersection_matrix(),
            IntMatrix::from_i64(2, 2, &[-2, 1, 1, -3])
        );
        let g = parse_graph("vertex a\nvertex b\nedge a b\nedge a b sign=-\nedge b a\n").unwrap();
        assert_eq!(
            g.intersection_matrix(),
            IntMatrix::from_i64(2, 2, &[0, 1, 1, 0])
        );
    }

    #[test]
    fn spanning_tree_and_betti() {
        let g = parse_graph(
            "vertex a genus=0 euler=2\nvertex b genus=1 euler=-1\nvertex c\nedge a b\nedge b c sign=-\nedge a c\n",
        )
        .unwrap();
        assert_eq!(g.betti1(), 1);
        assert_eq!(g.spanning_tree(), vec![0, 1]);
        assert_eq!(g.cycle_edges(), vec![2]);

        let g = parse_graph("vertex a\nvertex b\nedge a b\nedge a b\n").unwrap();
        assert_eq!(g.betti1(), 1);
        assert_eq!(g.spanning_tree(), vec![0]);
    }

    #[test]
    fn text_round_trip() {
        let g = triangle([P, M, P]);
        assert_eq!(parse_graph(&g.to_text()).unwrap(), g);
    }
}
