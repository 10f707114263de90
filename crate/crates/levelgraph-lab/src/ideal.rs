//! Monomial ideals attached to genus-zero trees with slopes: the path
//! monomials I(v, v'), the blowup ideal J, Nguyen's ideal N, localization,
//! and the arbitrary-genus variants over adjusting parameters h_v.

use crate::graph::{EnhancedLevelGraph, VertexId};
use crate::slopes::SlopeAssignment;
use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;
use std::collections::HashMap;
use thiserror::Error;

/// Monomial as an exponent vector over the ideal's ordered variable set.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Monomial {
    pub exponents: Vec<BigUint>,
}

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial { exponents: vec![BigUint::zero(); nvars] }
    }

    pub fn is_one(&self) -> bool {
        self.exponents.iter().all(|e| e.is_zero())
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial {
            exponents: self
                .exponents
                .iter()
                .zip(&other.exponents)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.exponents.iter().zip(&other.exponents).all(|(a, b)| a <= b)
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        Monomial {
            exponents: self
                .exponents
                .iter()
                .zip(&other.exponents)
                .map(|(a, b)| a.min(b).clone())
                .collect(),
        }
    }

    /// Exact division; caller must ensure divisibility.
    pub fn div(&self, other: &Monomial) -> Monomial {
        Monomial {
            exponents: self
                .exponents
                .iter()
                .zip(&other.exponents)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn pow(&self, k: u64) -> Monomial {
        Monomial { exponents: self.exponents.iter().map(|e| e * k).collect() }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum IdealError {
    #[error("ideals live over different variable sets")]
    VarMismatch,
    #[error("unknown variable {0}")]
    UnknownVariable(String),
    #[error("vertex {0} has non-positive weight; the graph is not stable enough")]
    NonPositiveWeight(VertexId),
    #[error("an ideal needs at least one generator")]
    Empty,
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("graph is not a genus-zero tree")]
    NotATree,
}

/// A monomial ideal kept in normal form: no generator divides another.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MonomialIdeal {
    /// variable ids, sorted lexicographically
    pub vars: Vec<String>,
    /// minimal generators, sorted
    pub gens: Vec<Monomial>,
}

impl MonomialIdeal {
    pub fn new(vars: Vec<String>, gens: Vec<Monomial>) -> Self {
        let mut ideal = MonomialIdeal { vars, gens };
        ideal.minimalize();
        ideal
    }

    pub fn unit(vars: Vec<String>) -> Self {
        let n = vars.len();
        MonomialIdeal { vars, gens: vec![Monomial::one(n)] }
    }

    pub fn principal(vars: Vec<String>, m: Monomial) -> Self {
        MonomialIdeal { vars, gens: vec![m] }
    }

    pub fn is_unit(&self) -> bool {
        self.gens.len() == 1 && self.gens[0].is_one()
    }

    pub fn is_principal(&self) -> bool {
        self.gens.len() == 1
    }

    fn minimalize(&mut self) {
        self.gens.sort();
        self.gens.dedup();
        let gens = std::mem::take(&mut self.gens);
        for (i, g) in gens.iter().enumerate() {
            if !gens
                .iter()
                .enumerate()
                .any(|(j, h)| j != i && h.divides(g) && (h != g || j < i))
            {
                self.gens.push(g.clone());
            }
        }
    }

    pub fn sum(&self, other: &MonomialIdeal) -> Result<MonomialIdeal, IdealError> {
        if self.vars != other.vars {
            return Err(IdealError::VarMismatch);
        }
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        Ok(MonomialIdeal::new(self.vars.clone(), gens))
    }

    pub fn product(&self, other: &MonomialIdeal) -> Result<MonomialIdeal, IdealError> {
        if self.vars != other.vars {
            return Err(IdealError::VarMismatch);
        }
        let gens = self
            .gens
            .iter()
            .flat_map(|a| other.gens.iter().map(move |b| a.mul(b)))
            .collect();
        Ok(MonomialIdeal::new(self.vars.clone(), gens))
    }

    pub fn power(&self, k: u64) -> MonomialIdeal {
        let mut out = MonomialIdeal::unit(self.vars.clone());
        for _ in 0..k {
            out = out.product(self).unwrap();
        }
        out
    }

    /// Invert the variable: set its exponent to 0 in every generator.
    pub fn localize(&self, var: &str) -> Result<MonomialIdeal, IdealError> {
        let idx = self
            .vars
            .iter()
            .position(|v| v == var)
            .ok_or_else(|| IdealError::UnknownVariable(var.to_string()))?;
        let gens = self
            .gens
            .iter()
            .map(|g| {
                let mut e = g.exponents.clone();
                e[idx] = BigUint::zero();
                Monomial { exponents: e }
            })
            .collect();
        Ok(MonomialIdeal::new(self.vars.clone(), gens))
    }

    /// Re-express the ideal over a superset of its variables.
    pub fn extend_vars(&self, vars: &[String]) -> Result<MonomialIdeal, IdealError> {
        let positions: Vec<usize> = self
            .vars
            .iter()
            .map(|v| {
                vars.iter()
                    .position(|w| w == v)
                    .ok_or_else(|| IdealError::UnknownVariable(v.clone()))
            })
            .collect::<Result<_, _>>()?;
        let gens = self
            .gens
            .iter()
            .map(|g| {
                let mut e = vec![BigUint::zero(); vars.len()];
                for (src, &dst) in positions.iter().enumerate() {
                    e[dst] = g.exponents[src].clone();
                }
                Monomial { exponents: e }
            })
            .collect();
        Ok(MonomialIdeal::new(vars.to_vec(), gens))
    }

    /// Monomial gcd of all generators.
    pub fn content(&self) -> Monomial {
        self.gens
            .iter()
            .skip(1)
            .fold(self.gens[0].clone(), |acc, g| acc.gcd(g))
    }
}

/// Equal after dividing both ideals by the gcd of their generators; ideals
/// differing by a principal monomial factor have the same normalized blowup.
pub fn equal_up_to_principal(a: &MonomialIdeal, b: &MonomialIdeal) -> Result<bool, IdealError> {
    if a.vars != b.vars {
        return Err(IdealError::VarMismatch);
    }
    if a.gens.is_empty() || b.gens.is_empty() {
        return Err(IdealError::Empty);
    }
    let strip = |i: &MonomialIdeal| {
        let c = i.content();
        let gens = i.gens.iter().map(|g| g.div(&c)).collect();
        MonomialIdeal::new(i.vars.clone(), gens)
    };
    Ok(strip(a) == strip(b))
}

fn edge_vars(graph: &EnhancedLevelGraph) -> Vec<String> {
    let mut vars: Vec<String> = graph.edges.iter().map(|e| e.id.clone()).collect();
    vars.sort();
    vars
}

/// The unique path between two vertices of a tree, as (vertex, edge-index)
/// steps: at each listed vertex the path departs along the listed edge.
pub(crate) fn tree_path(
    graph: &EnhancedLevelGraph,
    from: VertexId,
    to: VertexId,
) -> Result<Vec<(VertexId, usize)>, IdealError> {
    for v in [from, to] {
        if graph.vertex(v).is_none() {
            return Err(IdealError::UnknownVertex(v));
        }
    }
    // DFS recording the parent edge
    let mut parent: HashMap<VertexId, (VertexId, usize)> = HashMap::new();
    let mut stack = vec![from];
    let mut seen = vec![from];
    while let Some(v) = stack.pop() {
        if v == to {
            break;
        }
        for (i, e) in graph.edges.iter().enumerate() {
            for (a, b) in [(e.upper, e.lower), (e.lower, e.upper)] {
                if a == v && !seen.contains(&b) {
                    parent.insert(b, (v, i));
                    seen.push(b);
                    stack.push(b);
                }
            }
        }
    }
    if from != to && !parent.contains_key(&to) {
        return Err(IdealError::NotATree);
    }
    let mut path = Vec::new();
    let mut cur = to;
    while cur != from {
        let (prev, edge) = parent[&cur];
        path.push((prev, edge));
        cur = prev;
    }
    path.reverse();
    Ok(path)
}

/// I(v, v'): the product over the path from v to v' of delta_e raised to
/// max(slope of the departing half-edge, 0).
pub fn path_ideal_i(
    graph: &EnhancedLevelGraph,
    slopes: &SlopeAssignment,
    v: VertexId,
    v_prime: VertexId,
) -> Result<Monomial, IdealError> {
    let vars = edge_vars(graph);
    let mut m = Monomial::one(vars.len());
    for (at, edge_idx) in tree_path(graph, v, v_prime)? {
        let e = &graph.edges[edge_idx];
        let s = slopes.outgoing(e, at);
        if s > 0 {
            let var = vars.iter().position(|w| *w == e.id).unwrap();
            m.exponents[var] += BigUint::from(s as u64);
        }
    }
    Ok(m)
}

fn tree_weight(graph: &EnhancedLevelGraph, v: VertexId) -> i64 {
    graph.valence(v) as i64 - 2
}

/// J(Gamma): product over ordered pairs of distinct vertices of
/// (I(v,v') + I(v',v))^{w(v) w(v')} with w(v) = valence(v) - 2.
pub fn j_ideal(
    graph: &EnhancedLevelGraph,
    slopes: &SlopeAssignment,
) -> Result<MonomialIdeal, IdealError> {
    let vars = edge_vars(graph);
    for v in &graph.vertices {
        if tree_weight(graph, v.id) <= 0 {
            return Err(IdealError::NonPositiveWeight(v.id));
        }
    }
    let mut out = MonomialIdeal::unit(vars.clone());
    for a in &graph.vertices {
        for b in &graph.vertices {
            if a.id == b.id {
                continue;
            }
            let i_ab = path_ideal_i(graph, slopes, a.id, b.id)?;
            let i_ba = path_ideal_i(graph, slopes, b.id, a.id)?;
            let pair = MonomialIdeal::new(vars.clone(), vec![i_ab, i_ba]);
            let w = (tree_weight(graph, a.id) * tree_weight(graph, b.id)) as u64;
            out = out.product(&pair.power(w))?;
        }
    }
    Ok(out)
}

/// Nguyen's generator delta_v: product over all edges e of delta_e raised
/// to max(slope of the half-edge of e on the far side from v, 0).
pub fn nguyen_generator(
    graph: &EnhancedLevelGraph,
    slopes: &SlopeAssignment,
    v: VertexId,
) -> Result<Monomial, IdealError> {
    if graph.vertex(v).is_none() {
        return Err(IdealError::UnknownVertex(v));
    }
    let vars = edge_vars(graph);
    let mut m = Monomial::one(vars.len());
    for e in &graph.edges {
        // the far endpoint: the one whose removal of e separates it from v
        let path_u = tree_path(graph, v, e.upper)?;
        let far = if path_u.iter().any(|&(_, i)| graph.edges[i].id == e.id) {
            e.upper
        } else {
            e.lower
        };
        let s = slopes.outgoing(e, far);
        if s > 0 {
            let var = vars.iter().position(|w| *w == e.id).unwrap();
            m.exponents[var] += BigUint::from(s as u64);
        }
    }
    Ok(m)
}

/// N(Gamma) = (delta_v : v a vertex), minimalized.
pub fn nguyen_ideal(
    graph: &EnhancedLevelGraph,
    slopes: &SlopeAssignment,
) -> Result<MonomialIdeal, IdealError> {
    let vars = edge_vars(graph);
    let gens = graph
        .vertices
        .iter()
        .map(|v| nguyen_generator(graph, slopes, v.id))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(MonomialIdeal::new(vars, gens))
}

fn h_vars(graph: &EnhancedLevelGraph) -> Vec<String> {
    let mut vars: Vec<String> = graph.vertices.iter().map(|v| format!("h{}", v.id)).collect();
    vars.sort();
    vars
}

/// Arbitrary-genus J over adjusting parameters h_v: product over all
/// ordered pairs, including the diagonal, of (h_v, h_{v'})^{w(v) w(v')}
/// with w(v) = 2g(v) - 2 + valence(v).
pub fn general_genus_j(graph: &EnhancedLevelGraph) -> Result<MonomialIdeal, IdealError> {
    let vars = h_vars(graph);
    let weight = |v: &crate::graph::Vertex| {
        2 * (v.genus as i64) - 2 + graph.valence(v.id) as i64
    };
    for v in &graph.vertices {
        if weight(v) <= 0 {
            return Err(IdealError::NonPositiveWeight(v.id));
        }
    }
    let var_of = |id: VertexId| vars.iter().position(|w| *w == format!("h{id}")).unwrap();
    let mut out = MonomialIdeal::unit(vars.clone());
    for a in &graph.vertices {
        for b in &graph.vertices {
            let mut ma = Monomial::one(vars.len());
            ma.exponents[var_of(a.id)] = BigUint::one();
            let mut mb = Monomial::one(vars.len());
            mb.exponents[var_of(b.id)] = BigUint::one();
            let pair = MonomialIdeal::new(vars.clone(), vec![ma, mb]);
            let w = (weight(a) * weight(b)) as u64;
            out = out.product(&pair.power(w))?;
        }
    }
    Ok(out)
}

/// (h_v : v is a local maximum, i.e. has no edge going up from it).
pub fn local_maxima_ideal(graph: &EnhancedLevelGraph) -> MonomialIdeal {
    let vars = h_vars(graph);
    let gens = graph
        .vertices
        .iter()
        .filter(|v| {
            !graph.edges.iter().any(|e| {
                e.lower == v.id && graph.level(e.upper) > graph.level(e.lower)
            })
        })
        .map(|v| {
            let mut m = Monomial::one(vars.len());
            let idx = vars.iter().position(|w| *w == format!("h{}", v.id)).unwrap();
            m.exponents[idx] = BigUint::one();
            m
        })
        .collect();
    MonomialIdeal::new(vars, gens)
}
