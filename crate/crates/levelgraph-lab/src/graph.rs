//! Enhanced level graphs: the universal input object.
//!
//! A graph carries vertices with genus and a normalized level in
//! {0, -1, ..., -N}, legs with integer orders, and edges with enhancements
//! kappa (zero exactly for horizontal edges). All operations are pure:
//! they return new graphs and never mutate their input.

use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};
use thiserror::Error;

pub type VertexId = u32;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vertex {
    pub id: VertexId,
    pub genus: u32,
    pub level: i64,
    /// Two-valent bookkeeping vertex inserted by long-edge subdivision;
    /// exempt from the stability check.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub semistable: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Leg {
    pub vertex: VertexId,
    pub marking: u32,
    pub order: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub id: String,
    pub upper: VertexId,
    pub lower: VertexId,
    pub kappa: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnhancedLevelGraph {
    pub vertices: Vec<Vertex>,
    pub legs: Vec<Leg>,
    pub edges: Vec<Edge>,
}

/// Malformed graph data: dangling references, duplicate ids. Distinct from
/// admissibility failures, which are reported by [`EnhancedLevelGraph::validate`].
#[derive(Debug, Error, PartialEq, Eq)]
pub enum StructuralError {
    #[error("duplicate vertex id {0}")]
    DuplicateVertex(VertexId),
    #[error("duplicate edge id {0:?}")]
    DuplicateEdge(String),
    #[error("edge {edge:?} references unknown vertex {vertex}")]
    UnknownEdgeVertex { edge: String, vertex: VertexId },
    #[error("leg with marking {marking} references unknown vertex {vertex}")]
    UnknownLegVertex { marking: u32, vertex: VertexId },
    #[error("graph has no vertices")]
    Empty,
}

/// One admissibility violation found by `validate`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Violation {
    NotConnected,
    UnstableVertex { vertex: VertexId },
    LevelsNotNormalized { levels: Vec<i64> },
    HorizontalKappaNonzero { edge: String },
    VerticalKappaZero { edge: String },
    EdgeUpsideDown { edge: String },
    MarkingsNotPermutation,
    TotalOrderMismatch { sum: i64, expected: i64 },
    DegreeEquality { vertex: VertexId, lhs: i64, rhs: i64 },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::NotConnected => write!(f, "graph is not connected"),
            Violation::UnstableVertex { vertex } => {
                write!(f, "vertex {vertex} is unstable (2g-2+valence <= 0)")
            }
            Violation::LevelsNotNormalized { levels } => {
                write!(f, "levels {levels:?} are not of the form {{0,-1,...,-N}}")
            }
            Violation::HorizontalKappaNonzero { edge } => {
                write!(f, "horizontal edge {edge} has nonzero enhancement")
            }
            Violation::VerticalKappaZero { edge } => {
                write!(f, "vertical edge {edge} has zero enhancement")
            }
            Violation::EdgeUpsideDown { edge } => {
                write!(f, "edge {edge} has its upper end below its lower end")
            }
            Violation::MarkingsNotPermutation => {
                write!(f, "marking indices are not a permutation of 1..n")
            }
            Violation::TotalOrderMismatch { sum, expected } => {
                write!(f, "sum of orders is {sum}, expected 2g-2 = {expected}")
            }
            Violation::DegreeEquality { vertex, lhs, rhs } => {
                write!(f, "degree equality fails at vertex {vertex}: {lhs} != 2g-2 = {rhs}")
            }
        }
    }
}

impl EnhancedLevelGraph {
    pub fn vertex(&self, id: VertexId) -> Option<&Vertex> {
        self.vertices.iter().find(|v| v.id == id)
    }

    pub fn level(&self, id: VertexId) -> i64 {
        self.vertex(id).expect("unknown vertex").level
    }

    pub fn is_horizontal(&self, e: &Edge) -> bool {
        self.level(e.upper) == self.level(e.lower)
    }

    /// Levels below zero, i.e. {-1, ..., -N}, in descending order.
    pub fn passages(&self) -> Vec<i64> {
        let min = self.vertices.iter().map(|v| v.level).min().unwrap_or(0);
        (min..0).rev().collect()
    }

    /// Level passages crossed by an edge: all i with l(lower) <= i < l(upper).
    pub fn crossed_passages(&self, e: &Edge) -> Vec<i64> {
        let lo = self.level(e.lower);
        let hi = self.level(e.upper);
        (lo..hi).collect()
    }

    pub fn vertical_edges(&self) -> impl Iterator<Item = &Edge> {
        self.edges.iter().filter(|e| !self.is_horizontal(e))
    }

    pub fn horizontal_edges(&self) -> impl Iterator<Item = &Edge> {
        self.edges.iter().filter(|e| self.is_horizontal(e))
    }

    /// Number of non-leg half-edges at v (loops count twice).
    pub fn edge_valence(&self, v: VertexId) -> usize {
        self.edges
            .iter()
            .map(|e| (e.upper == v) as usize + (e.lower == v) as usize)
            .sum()
    }

    /// Legs and edge-ends together.
    pub fn valence(&self, v: VertexId) -> usize {
        self.edge_valence(v) + self.legs.iter().filter(|l| l.vertex == v).count()
    }

    pub fn first_betti(&self) -> usize {
        self.edges.len() + 1 - self.vertices.len()
    }

    /// Total arithmetic genus: sum of vertex genera plus b1.
    pub fn genus(&self) -> i64 {
        self.vertices.iter().map(|v| v.genus as i64).sum::<i64>()
            + self.first_betti() as i64
    }

    pub fn check_structure(&self) -> Result<(), StructuralError> {
        if self.vertices.is_empty() {
            return Err(StructuralError::Empty);
        }
        let mut ids = HashSet::new();
        for v in &self.vertices {
            if !ids.insert(v.id) {
                return Err(StructuralError::DuplicateVertex(v.id));
            }
        }
        let mut eids = HashSet::new();
        for e in &self.edges {
            if !eids.insert(&e.id) {
                return Err(StructuralError::DuplicateEdge(e.id.clone()));
            }
            for end in [e.upper, e.lower] {
                if !ids.contains(&end) {
                    return Err(StructuralError::UnknownEdgeVertex {
                        edge: e.id.clone(),
                        vertex: end,
                    });
                }
            }
        }
        for l in &self.legs {
            if !ids.contains(&l.vertex) {
                return Err(StructuralError::UnknownLegVertex {
                    marking: l.marking,
                    vertex: l.vertex,
                });
            }
        }
        Ok(())
    }

    /// Admissibility report. Empty report means the graph is valid.
    pub fn validate(&self) -> Result<Vec<Violation>, StructuralError> {
        self.check_structure()?;
        let mut out = Vec::new();

        if !self.is_connected() {
            out.push(Violation::NotConnected);
        }

        for v in &self.vertices {
            if !v.semistable && 2 * (v.genus as i64) - 2 + self.valence(v.id) as i64 <= 0 {
                out.push(Violation::UnstableVertex { vertex: v.id });
            }
        }

        let levels: BTreeSet<i64> = self.vertices.iter().map(|v| v.level).collect();
        let n = levels.len() as i64;
        let expected: BTreeSet<i64> = (1 - n..=0).collect();
        if levels != expected {
            out.push(Violation::LevelsNotNormalized { levels: levels.into_iter().collect() });
        }

        for e in &self.edges {
            let lu = self.level(e.upper);
            let ll = self.level(e.lower);
            if lu < ll {
                out.push(Violation::EdgeUpsideDown { edge: e.id.clone() });
            } else if lu == ll && e.kappa != 0 {
                out.push(Violation::HorizontalKappaNonzero { edge: e.id.clone() });
            } else if lu > ll && e.kappa == 0 {
                out.push(Violation::VerticalKappaZero { edge: e.id.clone() });
            }
        }

        let mut markings: Vec<u32> = self.legs.iter().map(|l| l.marking).collect();
        markings.sort_unstable();
        if markings != (1..=self.legs.len() as u32).collect::<Vec<_>>() {
            out.push(Violation::MarkingsNotPermutation);
        }

        let sum: i64 = self.legs.iter().map(|l| l.order).sum();
        let expected_sum = 2 * self.genus() - 2;
        if sum != expected_sum {
            out.push(Violation::TotalOrderMismatch { sum, expected: expected_sum });
        }

        for v in &self.vertices {
            let lhs = self.degree(v.id);
            let rhs = 2 * (v.genus as i64) - 2;
            if lhs != rhs {
                out.push(Violation::DegreeEquality { vertex: v.id, lhs, rhs });
            }
        }

        Ok(out)
    }

    pub fn is_valid(&self) -> bool {
        matches!(self.validate(), Ok(v) if v.is_empty())
    }

    /// Left-hand side of the degree equality at v:
    /// sum of leg orders + sum over upper ends (kappa - 1)
    /// - sum over lower ends (1 + kappa) - #horizontal half-edges.
    pub fn degree(&self, v: VertexId) -> i64 {
        let legs: i64 = self.legs.iter().filter(|l| l.vertex == v).map(|l| l.order).sum();
        let mut acc = legs;
        for e in &self.edges {
            if self.is_horizontal(e) {
                acc -= (e.upper == v) as i64 + (e.lower == v) as i64;
            } else {
                if e.upper == v {
                    acc += e.kappa as i64 - 1;
                }
                if e.lower == v {
                    acc -= 1 + e.kappa as i64;
                }
            }
        }
        acc
    }

    /// Signed slope on each non-leg half-edge: +kappa on the upper half,
    /// -kappa on the lower half, 0 on both halves of a horizontal edge.
    /// Keys are (edge id, vertex-at-that-half); for loops and horizontal
    /// edges both halves carry the value stated above.
    pub fn half_edge_slopes(&self) -> BTreeMap<(String, VertexId), i64> {
        let mut out = BTreeMap::new();
        for e in &self.edges {
            if self.is_horizontal(e) {
                out.insert((e.id.clone(), e.upper), 0);
                out.insert((e.id.clone(), e.lower), 0);
            } else {
                out.insert((e.id.clone(), e.upper), e.kappa as i64);
                out.insert((e.id.clone(), e.lower), -(e.kappa as i64));
            }
        }
        out
    }

    fn is_connected(&self) -> bool {
        if self.vertices.is_empty() {
            return false;
        }
        let mut adj: HashMap<VertexId, Vec<VertexId>> = HashMap::new();
        for e in &self.edges {
            adj.entry(e.upper).or_default().push(e.lower);
            adj.entry(e.lower).or_default().push(e.upper);
        }
        let mut seen = HashSet::new();
        let mut queue = VecDeque::from([self.vertices[0].id]);
        seen.insert(self.vertices[0].id);
        while let Some(v) = queue.pop_front() {
            for &w in adj.get(&v).into_iter().flatten() {
                if seen.insert(w) {
                    queue.push_back(w);
                }
            }
        }
        seen.len() == self.vertices.len()
    }

    /// Contract all vertical edges except those crossing a passage in `keep`,
    /// then renormalize levels onto {0, ..., -|image|+1}.
    pub fn undegenerate_vertical(&self, keep: &BTreeSet<i64>) -> Result<Self, OpError> {
        let passages: BTreeSet<i64> = self.passages().into_iter().collect();
        if let Some(&bad) = keep.iter().find(|i| !passages.contains(i)) {
            return Err(OpError::NotALevelPassage(bad));
        }
        let contracted: Vec<&Edge> = self
            .vertical_edges()
            .filter(|e| !self.crossed_passages(e).iter().any(|i| keep.contains(i)))
            .collect();
        Ok(self.contract_edges(&contracted.iter().map(|e| e.id.clone()).collect::<HashSet<_>>()))
    }

    /// Contract all horizontal edges outside `keep`.
    pub fn undegenerate_horizontal(&self, keep: &BTreeSet<String>) -> Result<Self, OpError> {
        let horizontal: HashSet<String> =
            self.horizontal_edges().map(|e| e.id.clone()).collect();
        if let Some(bad) = keep.iter().find(|s| !horizontal.contains(*s)) {
            return Err(OpError::NotAHorizontalEdge(bad.clone()));
        }
        let contracted: HashSet<String> =
            horizontal.into_iter().filter(|id| !keep.contains(id)).collect();
        Ok(self.contract_edges(&contracted))
    }

    /// Contract a set of edges (by id), merging vertices. Genus adds under
    /// a merge; contracting a loop adds one to the genus instead.
    pub fn contract_edges(&self, ids: &HashSet<String>) -> Self {
        let mut dsu = Dsu::new(&self.vertices);
        let mut extra_genus: HashMap<VertexId, u32> = HashMap::new();
        for e in &self.edges {
            if ids.contains(&e.id) {
                let (ru, rl) = (dsu.find(e.upper), dsu.find(e.lower));
                if ru == rl {
                    *extra_genus.entry(ru).or_default() += 1;
                } else {
                    let r = dsu.union(ru, rl);
                    let merged = extra_genus.remove(&ru).unwrap_or(0)
                        + extra_genus.remove(&rl).unwrap_or(0);
                    if merged > 0 {
                        *extra_genus.entry(r).or_default() += merged;
                    }
                }
            }
        }

        // merged vertex: genus adds, level = max of members (the level only
        // matters up to renormalization), semistable only if all members are
        let mut grouped: BTreeMap<VertexId, (u32, i64, bool)> = BTreeMap::new();
        for v in &self.vertices {
            let r = dsu.find(v.id);
            let entry = grouped.entry(r).or_insert((0, i64::MIN, true));
            entry.0 += v.genus;
            entry.1 = entry.1.max(v.level);
            entry.2 &= v.semistable;
        }
        for (r, g) in &extra_genus {
            grouped.get_mut(&dsu.find(*r)).unwrap().0 += g;
        }

        // order-preserving renormalization of the surviving levels
        let mut levels: Vec<i64> = grouped.values().map(|&(_, l, _)| l).collect();
        levels.sort_unstable();
        levels.dedup();
        let relabel: HashMap<i64, i64> = levels
            .iter()
            .rev()
            .enumerate()
            .map(|(i, &l)| (l, -(i as i64)))
            .collect();

        let vertices = grouped
            .iter()
            .map(|(&id, &(genus, level, semistable))| Vertex {
                id,
                genus,
                level: relabel[&level],
                semistable,
            })
            .collect();
        let legs = self
            .legs
            .iter()
            .map(|l| Leg { vertex: dsu.find(l.vertex), ..*l })
            .collect();
        let edges = self
            .edges
            .iter()
            .filter(|e| !ids.contains(&e.id))
            .map(|e| {
                let (mut upper, mut lower) = (dsu.find(e.upper), dsu.find(e.lower));
                let (lu, ll) = (grouped[&upper].1, grouped[&lower].1);
                if relabel[&lu] < relabel[&ll] {
                    std::mem::swap(&mut upper, &mut lower);
                }
                Edge { id: e.id.clone(), upper, lower, kappa: e.kappa }
            })
            .collect();
        EnhancedLevelGraph { vertices, legs, edges }
    }

    /// Replace every vertical edge crossing k > 1 passages by a chain of k
    /// edges with the same enhancement, through k-1 new semistable genus-0
    /// vertices at the intermediate levels.
    pub fn subdivide_long_edges(&self) -> Self {
        let mut next_id = self.vertices.iter().map(|v| v.id).max().unwrap_or(0) + 1;
        let mut vertices = self.vertices.clone();
        let mut edges = Vec::new();
        for e in &self.edges {
            let span = self.level(e.upper) - self.level(e.lower);
            if span <= 1 {
                edges.push(e.clone());
                continue;
            }
            let mut prev = e.upper;
            for (step, level) in (self.level(e.lower) + 1..self.level(e.upper)).rev().enumerate() {
                let mid = next_id;
                next_id += 1;
                vertices.push(Vertex { id: mid, genus: 0, level, semistable: true });
                edges.push(Edge {
                    id: format!("{}.{}", e.id, step),
                    upper: prev,
                    lower: mid,
                    kappa: e.kappa,
                });
                prev = mid;
            }
            edges.push(Edge {
                id: format!("{}.{}", e.id, span - 1),
                upper: prev,
                lower: e.lower,
                kappa: e.kappa,
            });
        }
        EnhancedLevelGraph { vertices, legs: self.legs.clone(), edges }
    }

    /// Canonical encoding for isomorphism testing and corpus deduplication.
    /// Two graphs are isomorphic (respecting levels, genera, enhancements,
    /// and markings) iff their canonical forms are equal.
    pub fn canonical_form(&self) -> Vec<u8> {
        // invariant key per vertex; markings pin most of the symmetry
        let key = |v: &Vertex| {
            let mut legs: Vec<(u32, i64)> = self
                .legs
                .iter()
                .filter(|l| l.vertex == v.id)
                .map(|l| (l.marking, l.order))
                .collect();
            legs.sort_unstable();
            (v.level, v.genus, v.semistable, legs, self.edge_valence(v.id))
        };
        let mut order: Vec<&Vertex> = self.vertices.iter().collect();
        order.sort_by_key(|v| key(v));

        // group vertices with identical keys; backtrack over permutations
        // within each group, taking the lexicographically smallest encoding
        let mut groups: Vec<Vec<VertexId>> = Vec::new();
        let mut prev_key = None;
        for v in &order {
            let k = key(v);
            if prev_key.as_ref() == Some(&k) {
                groups.last_mut().unwrap().push(v.id);
            } else {
                groups.push(vec![v.id]);
                prev_key = Some(k);
            }
        }
        let mut best: Option<Vec<u8>> = None;
        let mut assignment: Vec<VertexId> = Vec::new();
        self.canonical_search(&groups, 0, &mut assignment, &mut best);
        best.unwrap()
    }

    fn canonical_search(
        &self,
        groups: &[Vec<VertexId>],
        gi: usize,
        assignment: &mut Vec<VertexId>,
        best: &mut Option<Vec<u8>>,
    ) {
        if gi == groups.len() {
            let enc = self.encode_with(assignment);
            if best.as_ref().map_or(true, |b| enc < *b) {
                *best = Some(enc);
            }
            return;
        }
        let mut perm = groups[gi].clone();
        permute_all(&mut perm, 0, &mut |p| {
            let len = assignment.len();
            assignment.extend_from_slice(p);
            self.canonical_search(groups, gi + 1, assignment, best);
            assignment.truncate(len);
        });
    }

    fn encode_with(&self, order: &[VertexId]) -> Vec<u8> {
        let pos: HashMap<VertexId, usize> =
            order.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut enc = String::new();
        for &id in order {
            let v = self.vertex(id).unwrap();
            let mut legs: Vec<(u32, i64)> = self
                .legs
                .iter()
                .filter(|l| l.vertex == id)
                .map(|l| (l.marking, l.order))
                .collect();
            legs.sort_unstable();
            enc.push_str(&format!("v{},{},{},{:?};", v.level, v.genus, v.semistable, legs));
        }
        let mut edges: Vec<(usize, usize, u64, bool)> = self
            .edges
            .iter()
            .map(|e| {
                let (a, b) = (pos[&e.upper], pos[&e.lower]);
                if self.is_horizontal(e) {
                    (a.min(b), a.max(b), e.kappa, true)
                } else {
                    (a, b, e.kappa, false)
                }
            })
            .collect();
        edges.sort_unstable();
        enc.push_str(&format!("{edges:?}"));
        enc.into_bytes()
    }
}

fn permute_all<T: Clone>(items: &mut Vec<T>, k: usize, f: &mut impl FnMut(&[T])) {
    if k == items.len() {
        f(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute_all(items, k + 1, f);
        items.swap(k, i);
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OpError {
    #[error("{0} is not a level passage of the graph")]
    NotALevelPassage(i64),
    #[error("edge {0:?} is not a horizontal edge")]
    NotAHorizontalEdge(String),
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("graph is not a tree (or has positive genus)")]
    NotATree,
    #[error("vertex {vertex} has non-positive weight {weight}")]
    NonPositiveWeight { vertex: VertexId, weight: i64 },
}

struct Dsu {
    parent: HashMap<VertexId, VertexId>,
}

impl Dsu {
    fn new(vertices: &[Vertex]) -> Self {
        Dsu { parent: vertices.iter().map(|v| (v.id, v.id)).collect() }
    }

    fn find(&self, mut v: VertexId) -> VertexId {
        while self.parent[&v] != v {
            v = self.parent[&v];
        }
        v
    }

    fn union(&mut self, a: VertexId, b: VertexId) -> VertexId {
        let (ra, rb) = (self.find(a), self.find(b));
        // keep the smaller id as representative, for determinism
        let (keep, drop) = if ra <= rb { (ra, rb) } else { (rb, ra) };
        self.parent.insert(drop, keep);
        keep
    }
}
