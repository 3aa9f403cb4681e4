//! Finite planar cell complexes: vertices with exact positions, edges,
//! filled cycles and ribbons (nested cycle pairs joined by bridge edges).
//!
//! A [`CellComplex`] is assembled through the checked `add_*` methods, which
//! reject malformed cells as they are inserted. [`CellComplex::from_parts`]
//! skips those checks; run [`CellComplex::cw_check`] on such complexes to
//! list containment and intersection violations.

pub mod geometry;

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;

use serde::Serialize;

pub use geometry::Point2;
use geometry::{
    first_self_intersection, locate, segments_intersect, segments_meet_beyond_endpoint, Location,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ComplexError {
    #[error("duplicate vertex id `{0}`")]
    DuplicateVertex(String),
    #[error("vertex `{0}` has the same position as vertex `{1}`")]
    DuplicatePosition(String, String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("edge endpoints must be distinct (got `{0}` twice)")]
    LoopEdge(String),
    #[error("duplicate edge {0}")]
    DuplicateEdge(Edge),
    #[error("a cycle needs at least 3 vertices, got {0}")]
    TooShort(usize),
    #[error("vertex `{0}` appears more than once in the cycle")]
    RepeatedVertex(String),
    #[error("consecutive cycle vertices `{0}` and `{1}` are not joined by an edge")]
    MissingEdge(String, String),
    #[error("cycle polygon is not simple: edge {0} meets edge {1}")]
    SelfIntersecting(usize, usize),
    #[error("duplicate cycle name `{0}`")]
    DuplicateCycle(String),
    #[error("unknown cycle `{0}`")]
    UnknownCycle(String),
    #[error("cycle `{inner}` is not nested inside cycle `{outer}`")]
    NotNested { outer: String, inner: String },
    #[error("bridge {bridge} must join a vertex only on the outer cycle to a vertex only on the inner cycle")]
    BadBridge { bridge: Edge },
    #[error("bridge {0} is also a cycle edge")]
    BridgeIsCycleEdge(Edge),
    #[error("duplicate bridge {0}")]
    DuplicateBridge(Edge),
    #[error("vertex `{0}` is an endpoint of more than one bridge")]
    SharedBridgeEndpoint(String),
    #[error("bridge {0} is not an edge of the complex")]
    BridgeNotAnEdge(Edge),
    #[error("duplicate ribbon name `{0}`")]
    DuplicateRibbon(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vertex {
    pub id: String,
    pub position: Point2,
}

/// An undirected edge; endpoints are stored in sorted order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Edge {
    a: String,
    b: String,
}

impl Edge {
    pub fn new(a: impl Into<String>, b: impl Into<String>) -> Result<Self, ComplexError> {
        let (a, b) = (a.into(), b.into());
        match a.cmp(&b) {
            std::cmp::Ordering::Equal => Err(ComplexError::LoopEdge(a)),
            std::cmp::Ordering::Less => Ok(Edge { a, b }),
            std::cmp::Ordering::Greater => Ok(Edge { a: b, b: a }),
        }
    }

    pub fn endpoints(&self) -> (&str, &str) {
        (&self.a, &self.b)
    }

    pub fn has_endpoint(&self, v: &str) -> bool {
        self.a == v || self.b == v
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.a, self.b)
    }
}

/// A filled cycle: a cyclically ordered list of vertex ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cycle {
    pub name: String,
    vertices: Vec<String>,
    pub filled: bool,
}

impl Cycle {
    /// A cycle that has not been validated against any complex.
    pub fn new_unchecked(name: impl Into<String>, vertices: Vec<String>) -> Self {
        Cycle {
            name: name.into(),
            vertices,
            filled: true,
        }
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn contains(&self, v: &str) -> bool {
        self.vertices.iter().any(|x| x == v)
    }

    /// Edges joining consecutive vertices, including the closing edge.
    pub fn edges(&self) -> impl Iterator<Item = (&str, &str)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| {
            (
                self.vertices[i].as_str(),
                self.vertices[(i + 1) % n].as_str(),
            )
        })
    }
}

/// Vertex ids present in both cycles.
pub fn cycle_intersection(a: &Cycle, b: &Cycle) -> BTreeSet<String> {
    let bs: HashSet<&str> = b.vertices.iter().map(String::as_str).collect();
    a.vertices
        .iter()
        .filter(|v| bs.contains(v.as_str()))
        .cloned()
        .collect()
}

/// A nested pair of filled cycles plus bridge edges between them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ribbon {
    pub name: String,
    pub outer: Cycle,
    pub inner: Cycle,
    bridges: Vec<Edge>,
    shared: Vec<String>,
}

impl Ribbon {
    pub fn new_unchecked(
        name: impl Into<String>,
        outer: Cycle,
        inner: Cycle,
        bridges: Vec<Edge>,
    ) -> Self {
        let shared = cycle_intersection(&outer, &inner).into_iter().collect();
        Ribbon {
            name: name.into(),
            outer,
            inner,
            bridges,
            shared,
        }
    }

    pub fn bridges(&self) -> &[Edge] {
        &self.bridges
    }

    /// Vertices common to both cycles, sorted.
    pub fn shared_vertices(&self) -> &[String] {
        &self.shared
    }

    /// Number of vertices in the intersection of the two cycles.
    pub fn intersection_count(&self) -> usize {
        self.shared.len()
    }

    pub fn bridge_count(&self) -> usize {
        self.bridges.len()
    }

    /// All vertices on either cycle, sorted.
    pub fn vertex_ids(&self) -> BTreeSet<String> {
        self.outer
            .vertices
            .iter()
            .chain(&self.inner.vertices)
            .cloned()
            .collect()
    }

    /// Adjacency lists of the ribbon graph (both cycles and the bridges).
    pub fn graph(&self) -> HashMap<&str, Vec<&str>> {
        let mut adj: HashMap<&str, Vec<&str>> = HashMap::new();
        let mut seen: HashSet<(&str, &str)> = HashSet::new();
        let pairs = self
            .outer
            .edges()
            .chain(self.inner.edges())
            .chain(self.bridges.iter().map(|e| e.endpoints()));
        for (a, b) in pairs {
            let key = if a < b { (a, b) } else { (b, a) };
            if seen.insert(key) {
                adj.entry(a).or_default().push(b);
                adj.entry(b).or_default().push(a);
            }
        }
        for list in adj.values_mut() {
            list.sort_unstable();
        }
        adj
    }

    /// Breadth-first move counts from `source` to every reachable ribbon vertex.
    pub fn distances_from(&self, source: &str) -> HashMap<String, usize> {
        let adj = self.graph();
        let mut dist = HashMap::new();
        if !adj.contains_key(source) {
            return dist;
        }
        let mut queue = VecDeque::from([source]);
        dist.insert(source.to_string(), 0usize);
        while let Some(v) = queue.pop_front() {
            let d = dist[v];
            for &w in &adj[v] {
                if !dist.contains_key(w) {
                    dist.insert(w.to_string(), d + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }
}

/// A single violation of the closure-finite cell conditions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CwViolation {
    /// A cell refers to a face that is not itself a cell of the complex.
    Containment { cell: String, missing: String },
    /// Two cells meet in a set that is not a cell of the complex.
    Intersection {
        first: String,
        second: String,
        detail: String,
    },
}

impl fmt::Display for CwViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CwViolation::Containment { cell, missing } => {
                write!(f, "containment: {cell} refers to missing {missing}")
            }
            CwViolation::Intersection {
                first,
                second,
                detail,
            } => {
                write!(f, "intersection: {first} and {second}: {detail}")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct CwReport {
    pub violations: Vec<CwViolation>,
}

impl CwReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }
}

/// A finite planar cell complex.
#[derive(Debug, Clone, Default)]
pub struct CellComplex {
    pub name: String,
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    cycles: Vec<Cycle>,
    ribbons: Vec<Ribbon>,
    vertex_index: HashMap<String, usize>,
    edge_set: HashSet<Edge>,
}

impl CellComplex {
    pub fn new(name: impl Into<String>) -> Self {
        CellComplex {
            name: name.into(),
            ..Default::default()
        }
    }

    /// Assembles a complex without validating any cell.
    pub fn from_parts(
        name: impl Into<String>,
        vertices: Vec<Vertex>,
        edges: Vec<Edge>,
        cycles: Vec<Cycle>,
        ribbons: Vec<Ribbon>,
    ) -> Self {
        let vertex_index = vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.id.clone(), i))
            .collect();
        let edge_set = edges.iter().cloned().collect();
        CellComplex {
            name: name.into(),
            vertices,
            edges,
            cycles,
            ribbons,
            vertex_index,
            edge_set,
        }
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn cycles(&self) -> &[Cycle] {
        &self.cycles
    }

    pub fn ribbons(&self) -> &[Ribbon] {
        &self.ribbons
    }

    pub fn vertex(&self, id: &str) -> Option<&Vertex> {
        self.vertex_index.get(id).map(|&i| &self.vertices[i])
    }

    pub fn cycle(&self, name: &str) -> Option<&Cycle> {
        self.cycles.iter().find(|c| c.name == name)
    }

    pub fn ribbon(&self, name: &str) -> Option<&Ribbon> {
        self.ribbons.iter().find(|r| r.name == name)
    }

    pub fn has_edge(&self, a: &str, b: &str) -> bool {
        Edge::new(a, b).is_ok_and(|e| self.edge_set.contains(&e))
    }

    pub fn add_vertex(
        &mut self,
        id: impl Into<String>,
        position: Point2,
    ) -> Result<(), ComplexError> {
        let id = id.into();
        if self.vertex_index.contains_key(&id) {
            return Err(ComplexError::DuplicateVertex(id));
        }
        if let Some(other) = self.vertices.iter().find(|v| v.position == position) {
            return Err(ComplexError::DuplicatePosition(id, other.id.clone()));
        }
        self.vertex_index.insert(id.clone(), self.vertices.len());
        self.vertices.push(Vertex { id, position });
        Ok(())
    }

    pub fn add_edge(&mut self, a: &str, b: &str) -> Result<(), ComplexError> {
        let edge = Edge::new(a, b)?;
        for v in [a, b] {
            if !self.vertex_index.contains_key(v) {
                return Err(ComplexError::UnknownVertex(v.to_string()));
            }
        }
        if !self.edge_set.insert(edge.clone()) {
            return Err(ComplexError::DuplicateEdge(edge));
        }
        self.edges.push(edge);
        Ok(())
    }

    fn position(&self, id: &str) -> Result<&Point2, ComplexError> {
        self.vertex(id)
            .map(|v| &v.position)
            .ok_or_else(|| ComplexError::UnknownVertex(id.to_string()))
    }

    /// Polygon of a cycle's vertex positions.
    pub fn polygon(&self, cycle: &Cycle) -> Result<Vec<Point2>, ComplexError> {
        cycle
            .vertices
            .iter()
            .map(|v| self.position(v).cloned())
            .collect()
    }

    /// Validates `ids` as a simple filled cycle of this complex.
    pub fn build_cycle<S: AsRef<str>>(&self, name: &str, ids: &[S]) -> Result<Cycle, ComplexError> {
        let ids: Vec<String> = ids.iter().map(|s| s.as_ref().to_string()).collect();
        let mut seen = HashSet::new();
        for id in &ids {
            if !seen.insert(id.as_str()) {
                return Err(ComplexError::RepeatedVertex(id.clone()));
            }
            self.position(id)?;
        }
        if ids.len() < 3 {
            return Err(ComplexError::TooShort(ids.len()));
        }
        let cycle = Cycle::new_unchecked(name, ids);
        for (a, b) in cycle.edges() {
            if !self.has_edge(a, b) {
                return Err(ComplexError::MissingEdge(a.to_string(), b.to_string()));
            }
        }
        let poly = self.polygon(&cycle)?;
        if let Some((i, j)) = first_self_intersection(&poly) {
            return Err(ComplexError::SelfIntersecting(i, j));
        }
        Ok(cycle)
    }

    pub fn add_cycle<S: AsRef<str>>(
        &mut self,
        name: &str,
        ids: &[S],
    ) -> Result<&Cycle, ComplexError> {
        if self.cycle(name).is_some() {
            return Err(ComplexError::DuplicateCycle(name.to_string()));
        }
        let cycle = self.build_cycle(name, ids)?;
        self.cycles.push(cycle);
        Ok(self.cycles.last().expect("just pushed"))
    }

    /// `inner` lies inside `outer`: every inner vertex is strictly interior to
    /// the outer polygon or is a vertex of both cycles, at least one inner
    /// vertex is strictly interior, and inner edges touch outer edges only at
    /// shared vertices.
    pub fn is_nested(&self, outer: &Cycle, inner: &Cycle) -> bool {
        let (Ok(outer_poly), Ok(inner_poly)) = (self.polygon(outer), self.polygon(inner)) else {
            return false;
        };
        let mut strictly_inside = 0;
        for (id, p) in inner.vertices.iter().zip(&inner_poly) {
            if outer.contains(id) {
                continue;
            }
            match locate(p, &outer_poly) {
                Location::Inside => strictly_inside += 1,
                Location::Boundary | Location::Outside => return false,
            }
        }
        if strictly_inside == 0 {
            return false;
        }
        let n_out = outer_poly.len();
        let n_in = inner_poly.len();
        for i in 0..n_in {
            let (a, b) = (&inner_poly[i], &inner_poly[(i + 1) % n_in]);
            for j in 0..n_out {
                let (c, d) = (&outer_poly[j], &outer_poly[(j + 1) % n_out]);
                let same_edge = (a == c && b == d) || (a == d && b == c);
                if same_edge {
                    continue;
                }
                let touching = a == c || a == d || b == c || b == d;
                let meets = if touching {
                    segments_meet_beyond_endpoint(a, b, c, d)
                } else {
                    segments_intersect(a, b, c, d)
                };
                if meets {
                    return false;
                }
            }
        }
        true
    }

    /// Validates a ribbon made of `outer`, `inner` and the given bridges.
    pub fn build_ribbon(
        &self,
        name: &str,
        outer: &Cycle,
        inner: &Cycle,
        bridges: &[Edge],
    ) -> Result<Ribbon, ComplexError> {
        if !self.is_nested(outer, inner) {
            return Err(ComplexError::NotNested {
                outer: outer.name.clone(),
                inner: inner.name.clone(),
            });
        }
        let cycle_edges: HashSet<Edge> = outer
            .edges()
            .chain(inner.edges())
            .filter_map(|(a, b)| Edge::new(a, b).ok())
            .collect();
        let mut seen = HashSet::new();
        let mut endpoints = HashSet::new();
        for bridge in bridges {
            if !seen.insert(bridge.clone()) {
                return Err(ComplexError::DuplicateBridge(bridge.clone()));
            }
            if cycle_edges.contains(bridge) {
                return Err(ComplexError::BridgeIsCycleEdge(bridge.clone()));
            }
            let (a, b) = bridge.endpoints();
            let only_outer = |v: &str| outer.contains(v) && !inner.contains(v);
            let only_inner = |v: &str| inner.contains(v) && !outer.contains(v);
            let ok = (only_outer(a) && only_inner(b)) || (only_outer(b) && only_inner(a));
            if !ok {
                return Err(ComplexError::BadBridge {
                    bridge: bridge.clone(),
                });
            }
            if !self.edge_set.contains(bridge) {
                return Err(ComplexError::BridgeNotAnEdge(bridge.clone()));
            }
            for v in [a, b] {
                if !endpoints.insert(v.to_string()) {
                    return Err(ComplexError::SharedBridgeEndpoint(v.to_string()));
                }
            }
        }
        Ok(Ribbon::new_unchecked(
            name,
            outer.clone(),
            inner.clone(),
            bridges.to_vec(),
        ))
    }

    pub fn add_ribbon(
        &mut self,
        name: &str,
        outer: &str,
        inner: &str,
        bridges: &[Edge],
    ) -> Result<&Ribbon, ComplexError> {
        if self.ribbon(name).is_some() {
            return Err(ComplexError::DuplicateRibbon(name.to_string()));
        }
        let outer = self
            .cycle(outer)
            .ok_or_else(|| ComplexError::UnknownCycle(outer.to_string()))?;
        let inner = self
            .cycle(inner)
            .ok_or_else(|| ComplexError::UnknownCycle(inner.to_string()))?;
        let ribbon = self.build_ribbon(name, outer, inner, bridges)?;
        self.ribbons.push(ribbon);
        Ok(self.ribbons.last().expect("just pushed"))
    }

    /// Checks closure containment and closedness under intersection.
    ///
    /// Containment: every vertex, edge or cycle referenced by a cell is a
    /// cell of the complex. Intersection: the common vertices and edges of
    /// any two cells are cells of the complex, and no two cells meet
    /// geometrically except in a common vertex.
    pub fn cw_check(&self) -> CwReport {
        let mut violations = Vec::new();
        let has_vertex = |v: &str| self.vertex_index.contains_key(v);

        // Closure of each cell, as (vertex ids, edges).
        let mut closures: Vec<(String, BTreeSet<String>, BTreeSet<Edge>)> = Vec::new();

        for e in &self.edges {
            let (a, b) = e.endpoints();
            for v in [a, b] {
                if !has_vertex(v) {
                    violations.push(CwViolation::Containment {
                        cell: format!("edge {e}"),
                        missing: format!("vertex {v}"),
                    });
                }
            }
            closures.push((
                format!("edge {e}"),
                [a.to_string(), b.to_string()].into(),
                [e.clone()].into(),
            ));
        }

        let cycle_closure = |c: &Cycle, label: &str, violations: &mut Vec<CwViolation>| {
            let mut vs = BTreeSet::new();
            let mut es = BTreeSet::new();
            for v in &c.vertices {
                if !has_vertex(v) {
                    violations.push(CwViolation::Containment {
                        cell: label.to_string(),
                        missing: format!("vertex {v}"),
                    });
                }
                vs.insert(v.clone());
            }
            for (a, b) in c.edges() {
                if let Ok(e) = Edge::new(a, b) {
                    if !self.edge_set.contains(&e) {
                        violations.push(CwViolation::Containment {
                            cell: label.to_string(),
                            missing: format!("edge {e}"),
                        });
                    }
                    es.insert(e);
                }
            }
            (vs, es)
        };

        for c in &self.cycles {
            let label = format!("cycle {}", c.name);
            let (vs, es) = cycle_closure(c, &label, &mut violations);
            closures.push((label, vs, es));
        }

        for r in &self.ribbons {
            let label = format!("ribbon {}", r.name);
            let mut vs = BTreeSet::new();
            let mut es = BTreeSet::new();
            for c in [&r.outer, &r.inner] {
                if self.cycle(&c.name).is_none_or(|k| k.vertices != c.vertices) {
                    violations.push(CwViolation::Containment {
                        cell: label.clone(),
                        missing: format!("cycle {}", c.name),
                    });
                }
                let (cv, ce) = cycle_closure(c, &label, &mut violations);
                vs.extend(cv);
                es.extend(ce);
            }
            for b in &r.bridges {
                if !self.edge_set.contains(b) {
                    violations.push(CwViolation::Containment {
                        cell: label.clone(),
                        missing: format!("edge {b}"),
                    });
                }
                let (a, c) = b.endpoints();
                vs.insert(a.to_string());
                vs.insert(c.to_string());
                es.insert(b.clone());
            }
            closures.push((label, vs, es));
        }

        // Combinatorial intersections.
        for i in 0..closures.len() {
            for j in i + 1..closures.len() {
                let (ref l1, ref v1, ref e1) = closures[i];
                let (ref l2, ref v2, ref e2) = closures[j];
                for v in v1.intersection(v2) {
                    if !has_vertex(v) {
                        violations.push(CwViolation::Intersection {
                            first: l1.clone(),
                            second: l2.clone(),
                            detail: format!("common vertex {v} is not a cell"),
                        });
                    }
                }
                for e in e1.intersection(e2) {
                    if !self.edge_set.contains(e) {
                        violations.push(CwViolation::Intersection {
                            first: l1.clone(),
                            second: l2.clone(),
                            detail: format!("common edge {e} is not a cell"),
                        });
                    }
                }
            }
        }

        // Geometric intersections between vertices and edges.
        for i in 0..self.vertices.len() {
            for j in i + 1..self.vertices.len() {
                if self.vertices[i].position == self.vertices[j].position {
                    violations.push(CwViolation::Intersection {
                        first: format!("vertex {}", self.vertices[i].id),
                        second: format!("vertex {}", self.vertices[j].id),
                        detail: "vertices share a position".into(),
                    });
                }
            }
        }
        let segs: Vec<(&Edge, &Point2, &Point2)> = self
            .edges
            .iter()
            .filter_map(|e| {
                let (a, b) = e.endpoints();
                Some((e, self.position(a).ok()?, self.position(b).ok()?))
            })
            .collect();
        for (e, a, b) in &segs {
            for v in &self.vertices {
                if e.has_endpoint(&v.id) {
                    continue;
                }
                if geometry::on_segment(&v.position, a, b) {
                    violations.push(CwViolation::Intersection {
                        first: format!("edge {e}"),
                        second: format!("vertex {}", v.id),
                        detail: "vertex lies inside the edge".into(),
                    });
                }
            }
        }
        for i in 0..segs.len() {
            for j in i + 1..segs.len() {
                let (e1, a, b) = segs[i];
                let (e2, c, d) = segs[j];
                let (p, q) = e1.endpoints();
                let touching = e2.has_endpoint(p) || e2.has_endpoint(q);
                let meets = if touching {
                    segments_meet_beyond_endpoint(a, b, c, d)
                } else {
                    segments_intersect(a, b, c, d)
                };
                if meets {
                    violations.push(CwViolation::Intersection {
                        first: format!("edge {e1}"),
                        second: format!("edge {e2}"),
                        detail: "edges cross away from a common vertex".into(),
                    });
                }
            }
        }

        CwReport { violations }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Square `[a,b,c,d]` with side 1 at the origin plus all four edges.
    fn square() -> CellComplex {
        let mut k = CellComplex::new("sq");
        for (id, x, y) in [("a", 0, 0), ("b", 1, 0), ("c", 1, 1), ("d", 0, 1)] {
            k.add_vertex(id, Point2::int(x, y)).unwrap();
        }
        for (p, q) in [("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")] {
            k.add_edge(p, q).unwrap();
        }
        k
    }

    /// Square of side `outer` at the origin and a unit square at (1, 1).
    fn nested_squares() -> CellComplex {
        let mut k = CellComplex::new("nest");
        let pts = [
            ("o0", 0, 0),
            ("o1", 3, 0),
            ("o2", 3, 3),
            ("o3", 0, 3),
            ("i0", 1, 1),
            ("i1", 2, 1),
            ("i2", 2, 2),
            ("i3", 1, 2),
        ];
        for (id, x, y) in pts {
            k.add_vertex(id, Point2::int(x, y)).unwrap();
        }
        for c in [["o0", "o1", "o2", "o3"], ["i0", "i1", "i2", "i3"]] {
            for i in 0..4 {
                k.add_edge(c[i], c[(i + 1) % 4]).unwrap();
            }
        }
        k.add_cycle("outer", &["o0", "o1", "o2", "o3"]).unwrap();
        k.add_cycle("inner", &["i0", "i1", "i2", "i3"]).unwrap();
        k
    }

    #[test]
    fn square_cycle_builds() {
        let k = square();
        let c = k.build_cycle("s", &["a", "b", "c", "d"]).unwrap();
        assert_eq!(c.len(), 4);
        assert!(c.filled);
    }

    #[test]
    fn repeated_vertex_rejected() {
        let k = square();
        assert_eq!(
            k.build_cycle("s", &["a", "b", "a"]).unwrap_err(),
            ComplexError::RepeatedVertex("a".into())
        );
    }

    #[test]
    fn missing_edge_and_short_cycles_rejected() {
        let k = square();
        assert!(matches!(
            k.build_cycle("s", &["a", "b", "d"]),
            Err(ComplexError::MissingEdge(_, _))
        ));
        assert_eq!(
            k.build_cycle("s", &["a", "b"]).unwrap_err(),
            ComplexError::TooShort(2)
        );
        assert!(matches!(
            k.build_cycle("s", &["a", "b", "zz"]),
            Err(ComplexError::UnknownVertex(_))
        ));
    }

    #[test]
    fn bow_tie_rejected() {
        let mut k = square();
        k.add_edge("a", "c").unwrap();
        k.add_edge("b", "d").unwrap();
        // a-c and b-d are the crossing diagonals
        assert!(matches!(
            k.build_cycle("bow", &["a", "c", "b", "d"]),
            Err(ComplexError::SelfIntersecting(_, _))
        ));
    }

    #[test]
    fn cycle_intersection_identity_and_empty() {
        let k = nested_squares();
        let (o, i) = (k.cycle("outer").unwrap(), k.cycle("inner").unwrap());
        assert!(cycle_intersection(o, i).is_empty());
        assert_eq!(cycle_intersection(o, o).len(), 4);
    }

    #[test]
    fn nesting_is_directional() {
        let k = nested_squares();
        let (o, i) = (k.cycle("outer").unwrap(), k.cycle("inner").unwrap());
        assert!(k.is_nested(o, i));
        assert!(!k.is_nested(i, o));
        assert!(!k.is_nested(o, o));
    }

    #[test]
    fn side_by_side_squares_are_not_nested() {
        let mut k = CellComplex::new("pair");
        for (id, x, y) in [
            ("a", 0, 0),
            ("b", 1, 0),
            ("c", 1, 1),
            ("d", 0, 1),
            ("e", 2, 0),
            ("f", 3, 0),
            ("g", 3, 1),
            ("h", 2, 1),
        ] {
            k.add_vertex(id, Point2::int(x, y)).unwrap();
        }
        for c in [["a", "b", "c", "d"], ["e", "f", "g", "h"]] {
            for i in 0..4 {
                k.add_edge(c[i], c[(i + 1) % 4]).unwrap();
            }
        }
        let l = k.build_cycle("l", &["a", "b", "c", "d"]).unwrap();
        let r = k.build_cycle("r", &["e", "f", "g", "h"]).unwrap();
        assert!(!k.is_nested(&l, &r));
        assert!(!k.is_nested(&r, &l));
        assert!(matches!(
            k.build_ribbon("x", &l, &r, &[]),
            Err(ComplexError::NotNested { .. })
        ));
    }

    #[test]
    fn ribbon_bridge_validation() {
        let mut k = nested_squares();
        k.add_edge("o0", "i0").unwrap();
        k.add_edge("o1", "i1").unwrap();
        let r = k
            .add_ribbon("r", "outer", "inner", &[Edge::new("o0", "i0").unwrap()])
            .unwrap();
        assert_eq!((r.intersection_count(), r.bridge_count()), (0, 1));

        let b = Edge::new("o0", "o1").unwrap();
        assert!(matches!(
            k.add_ribbon("r2", "outer", "inner", &[b]),
            Err(ComplexError::BridgeIsCycleEdge(_))
        ));
        let b = Edge::new("o0", "i0").unwrap();
        assert!(matches!(
            k.add_ribbon("r3", "outer", "inner", &[b.clone(), b]),
            Err(ComplexError::DuplicateBridge(_))
        ));
        let b = Edge::new("o0", "i2").unwrap();
        assert!(matches!(
            k.add_ribbon("r4", "outer", "inner", &[b]),
            Err(ComplexError::BridgeNotAnEdge(_))
        ));
        let b = Edge::new("i0", "i2").unwrap();
        assert!(matches!(
            k.add_ribbon("r5", "outer", "inner", &[b]),
            Err(ComplexError::BadBridge { .. })
        ));
    }

    #[test]
    fn cw_check_clean_and_containment() {
        let k = nested_squares();
        assert!(k.cw_check().is_empty());

        let bad = CellComplex::from_parts(
            "bad",
            vec![Vertex {
                id: "a".into(),
                position: Point2::int(0, 0),
            }],
            vec![Edge::new("a", "ghost").unwrap()],
            vec![],
            vec![],
        );
        let report = bad.cw_check();
        assert!(report.violations.iter().any(|v| matches!(
            v,
            CwViolation::Containment { missing, .. } if missing == "vertex ghost"
        )));
    }

    #[test]
    fn cw_check_crossing_edges() {
        let mut k = square();
        k.add_edge("a", "c").unwrap();
        k.add_edge("b", "d").unwrap();
        let report = k.cw_check();
        assert_eq!(report.violations.len(), 1);
        assert!(matches!(
            report.violations[0],
            CwViolation::Intersection { .. }
        ));
    }
}
