//! Basic (minimal) log monoid presentations: the level generators p_i, the
//! edge map g, beta-values, PL-function validation, and relative inertia.

use crate::graph::{EnhancedLevelGraph, VertexId};
use crate::matrix::{cokernel_torsion, IntMat};
use crate::torus::{level_lcms, FiniteAbelianGroup, TorusError};
use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;
use std::collections::BTreeMap;

/// Presentation of the basic monoid of a level graph. Vectors are exponent
/// vectors over the level generators p_{-1}, ..., p_{-N} (in that order);
/// horizontal edges contribute free generators that never mix with these.
#[derive(Debug, Clone, Serialize)]
pub struct BasicMonoidPresentation {
    /// column order -1, -2, ..., -N
    pub passages: Vec<i64>,
    /// one free generator per horizontal edge
    pub horizontal_generators: Vec<String>,
    /// vertical edge ids, in input order, indexing g_matrix columns
    pub vertical_edge_ids: Vec<String>,
    /// rows = passages, columns = vertical edges; entry a_i / kappa_e on
    /// crossed passages
    pub g_matrix: IntMat,
    /// beta(v) = -sum_{j=level(v)}^{-1} a_j p_j, over the passage generators
    pub beta: BTreeMap<VertexId, Vec<BigInt>>,
    /// psi sends p_i to sigma_i / a_i; this records the denominators a_i
    pub psi_denominators: BTreeMap<i64, u64>,
}

impl BasicMonoidPresentation {
    /// Column of the g matrix for the vertical edge with the given id.
    pub fn g_column(&self, edge_id: &str) -> Option<Vec<BigInt>> {
        let c = self.vertical_edge_ids.iter().position(|e| e == edge_id)?;
        Some((0..self.g_matrix.nrows()).map(|r| self.g_matrix.get(r, c).clone()).collect())
    }
}

/// Build the basic monoid presentation of a valid graph.
pub fn basic_monoid(graph: &EnhancedLevelGraph) -> Result<BasicMonoidPresentation, TorusError> {
    let a = level_lcms(graph)?;
    let passages = graph.passages();
    let verticals: Vec<_> = graph.vertical_edges().collect();
    let mut g_matrix = IntMat::zeros(passages.len(), verticals.len());
    for (c, e) in verticals.iter().enumerate() {
        for (r, &i) in passages.iter().enumerate() {
            if graph.level(e.lower) <= i && i < graph.level(e.upper) {
                assert_eq!(a[&i] % e.kappa, 0, "a_i must be divisible by kappa_e");
                g_matrix.set(r, c, BigInt::from(a[&i] / e.kappa));
            }
        }
    }
    let beta = graph
        .vertices
        .iter()
        .map(|v| {
            let vec = passages
                .iter()
                .map(|&i| {
                    if i >= v.level {
                        -BigInt::from(a[&i])
                    } else {
                        BigInt::zero()
                    }
                })
                .collect();
            (v.id, vec)
        })
        .collect();
    Ok(BasicMonoidPresentation {
        passages: passages.clone(),
        horizontal_generators: graph.horizontal_edges().map(|e| e.id.clone()).collect(),
        vertical_edge_ids: verticals.iter().map(|e| e.id.clone()).collect(),
        g_matrix,
        beta,
        psi_denominators: a,
    })
}

/// Check symbolically that psi(g(e)) equals the beta-gap of e divided by
/// kappa_e, i.e. kappa_e * g(e) = beta(e+) - beta(e-) as integer vectors.
/// Returns the first failing edge id, if any.
pub fn check_presentation(
    graph: &EnhancedLevelGraph,
    pres: &BasicMonoidPresentation,
) -> Result<(), String> {
    for e in graph.vertical_edges() {
        let g = pres
            .g_column(&e.id)
            .ok_or_else(|| format!("edge {} missing from presentation", e.id))?;
        let upper = &pres.beta[&e.upper];
        let lower = &pres.beta[&e.lower];
        let kappa = BigInt::from(e.kappa);
        let ok = (0..g.len()).all(|r| &kappa * &g[r] == &upper[r] - &lower[r]);
        if !ok {
            return Err(e.id.clone());
        }
    }
    Ok(())
}

/// psi . g = delta for the basic presentation; a failure here is an
/// implementation bug, not a property of the graph.
pub fn check_psi_g_commutes(graph: &EnhancedLevelGraph) -> Result<(), String> {
    let pres = basic_monoid(graph).map_err(|e| e.to_string())?;
    check_presentation(graph, &pres)
}

/// A combinatorial PL function: beta-values in an ambient free abelian
/// group (one coordinate per monoid generator) and integer slopes per edge.
#[derive(Debug, Clone, Serialize)]
pub struct CombinatorialPLFunction {
    pub values: BTreeMap<VertexId, Vec<BigInt>>,
    /// edge id -> slope on the half-edge at the lower end
    pub slopes: BTreeMap<String, u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum PlViolation {
    /// beta-gap across the edge is not slope * length
    SlopeMismatch { edge: String },
    /// two image values are incomparable coordinate-wise
    NotTotallyOrdered { vertex_a: VertexId, vertex_b: VertexId },
    /// the largest image value is not zero
    MaxNotZero,
    /// (y - beta(e-)) / kappa_e has a non-integral coordinate for an image
    /// value y strictly between the endpoints of e
    NotInMonoid { edge: String, value: Vec<BigInt> },
}

/// Check the three conditions of the PL-function criterion:
/// (1) beta(e+) - beta(e-) = kappa_e * length(e) per vertical edge;
/// (2) the image of beta is totally ordered coordinate-wise with maximum 0;
/// (3) for each edge and each image value y strictly between its endpoint
///     values, (y - beta(e-)) / kappa_e lies in the free monoid.
pub fn validate_pl(
    graph: &EnhancedLevelGraph,
    pl: &CombinatorialPLFunction,
    lengths: &BTreeMap<String, Vec<BigInt>>,
) -> Vec<PlViolation> {
    let mut out = Vec::new();

    // (1)
    for e in graph.vertical_edges() {
        let slope = BigInt::from(pl.slopes[&e.id]);
        let len = &lengths[&e.id];
        let upper = &pl.values[&e.upper];
        let lower = &pl.values[&e.lower];
        let ok = (0..len.len()).all(|r| &upper[r] - &lower[r] == &slope * &len[r]);
        if !ok {
            out.push(PlViolation::SlopeMismatch { edge: e.id.clone() });
        }
    }

    // (2)
    let ids: Vec<VertexId> = pl.values.keys().copied().collect();
    for (ai, &a) in ids.iter().enumerate() {
        for &b in &ids[ai + 1..] {
            if compare(&pl.values[&a], &pl.values[&b]).is_none() {
                out.push(PlViolation::NotTotallyOrdered { vertex_a: a, vertex_b: b });
            }
        }
    }
    let has_max_zero = pl
        .values
        .values()
        .all(|v| v.iter().all(|x| x <= &BigInt::zero()))
        && pl.values.values().any(|v| v.iter().all(|x| x.is_zero()));
    if !has_max_zero {
        out.push(PlViolation::MaxNotZero);
    }

    // (3)
    for e in graph.vertical_edges() {
        let kappa = BigInt::from(pl.slopes[&e.id]);
        let top = &pl.values[&e.upper];
        let bot = &pl.values[&e.lower];
        for y in pl.values.values() {
            let strictly_between = compare(bot, y) == Some(std::cmp::Ordering::Less)
                && compare(y, top) == Some(std::cmp::Ordering::Less);
            if !strictly_between {
                continue;
            }
            let divisible = (0..y.len()).all(|r| {
                let diff = &y[r] - &bot[r];
                (&diff % &kappa).is_zero()
            });
            if !divisible && !out.contains(&PlViolation::NotInMonoid {
                edge: e.id.clone(),
                value: y.clone(),
            }) {
                out.push(PlViolation::NotInMonoid { edge: e.id.clone(), value: y.clone() });
            }
        }
    }
    out
}

/// Coordinate-wise partial order; None when incomparable.
fn compare(a: &[BigInt], b: &[BigInt]) -> Option<std::cmp::Ordering> {
    use std::cmp::Ordering::*;
    let mut ord = Equal;
    for (x, y) in a.iter().zip(b) {
        match (ord, x.cmp(y)) {
            (_, Equal) => {}
            (Equal, o) => ord = o,
            (Less, Less) | (Greater, Greater) => {}
            _ => return None,
        }
    }
    Some(ord)
}

/// The PL function of the basic presentation itself, with lengths g(e);
/// feeding this back through validate_pl must always pass.
pub fn basic_pl(
    graph: &EnhancedLevelGraph,
    pres: &BasicMonoidPresentation,
) -> (CombinatorialPLFunction, BTreeMap<String, Vec<BigInt>>) {
    let values = pres.beta.clone();
    let mut slopes = BTreeMap::new();
    let mut lengths = BTreeMap::new();
    for e in graph.vertical_edges() {
        slopes.insert(e.id.clone(), e.kappa);
        lengths.insert(e.id.clone(), pres.g_column(&e.id).unwrap());
    }
    (CombinatorialPLFunction { values, slopes }, lengths)
}

/// Torsion part of the cokernel of g : Z^{E^v} -> Z^{L(Gamma)}.
pub fn relative_inertia(graph: &EnhancedLevelGraph) -> Result<FiniteAbelianGroup, TorusError> {
    let pres = basic_monoid(graph)?;
    let factors = cokernel_torsion(&pres.g_matrix);
    Ok(FiniteAbelianGroup {
        invariant_factors: factors.into_iter().map(|d| d.to_biguint().unwrap()).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::graph::{Edge, EnhancedLevelGraph, Leg, Vertex};
    use num_bigint::BigUint;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn triangle_g_matrix_and_beta() {
        let n = 5i64;
        let pres = basic_monoid(&fixtures::triangle(n as u64)).unwrap();
        assert_eq!(pres.passages, vec![-1, -2]);
        assert_eq!(pres.g_column("e1").unwrap(), big(&[n, 0]));
        assert_eq!(pres.g_column("e2").unwrap(), big(&[0, n]));
        assert_eq!(pres.g_column("e3").unwrap(), big(&[1, 1]));
        assert_eq!(pres.beta[&0], big(&[0, 0]));
        assert_eq!(pres.beta[&1], big(&[-n, 0]));
        assert_eq!(pres.beta[&2], big(&[-n, -n]));
    }

    #[test]
    fn horizontal_only_graph() {
        let g = EnhancedLevelGraph {
            vertices: vec![
                Vertex { id: 0, genus: 1, level: 0, semistable: false },
                Vertex { id: 1, genus: 1, level: 0, semistable: false },
            ],
            legs: vec![
                Leg { vertex: 0, marking: 1, order: 1 },
                Leg { vertex: 1, marking: 2, order: 1 },
            ],
            edges: vec![Edge { id: "h".into(), upper: 0, lower: 1, kappa: 0 }],
        };
        let pres = basic_monoid(&g).unwrap();
        assert!(pres.passages.is_empty());
        assert_eq!(pres.horizontal_generators, vec!["h".to_string()]);
        assert!(pres.beta.values().all(|v| v.is_empty()));
    }

    #[test]
    fn psi_g_commutes_on_fixtures() {
        for g in [
            fixtures::triangle(1),
            fixtures::triangle(4),
            fixtures::fig71(),
            fixtures::two_level(&[2, 3]),
            fixtures::two_edge_slope_1_2(),
        ] {
            assert_eq!(check_psi_g_commutes(&g), Ok(()));
        }
    }

    #[test]
    fn corrupted_g_matrix_is_caught() {
        let g = fixtures::triangle(3);
        let mut pres = basic_monoid(&g).unwrap();
        // bump one entry of e2's column
        pres.g_matrix.set(1, 1, BigInt::from(4));
        assert_eq!(check_presentation(&g, &pres), Err("e2".to_string()));
    }

    #[test]
    fn basic_pl_passes_validation() {
        for g in [fixtures::triangle(3), fixtures::fig71(), fixtures::two_level(&[4, 6])] {
            let pres = basic_monoid(&g).unwrap();
            let (pl, lengths) = basic_pl(&g, &pres);
            assert_eq!(validate_pl(&g, &pl, &lengths), vec![]);
        }
    }

    /// Chain with slopes 1 and 2 and unit integer lengths: the divisibility
    /// condition (3) fails at the intermediate value.
    #[test]
    fn unit_length_slope_2_fails_condition_3() {
        let g = EnhancedLevelGraph {
            vertices: vec![
                Vertex { id: 0, genus: 0, level: 0, semistable: false },
                Vertex { id: 1, genus: 0, level: -1, semistable: false },
                Vertex { id: 2, genus: 0, level: -2, semistable: false },
            ],
            legs: vec![
                Leg { vertex: 0, marking: 1, order: -1 },
                Leg { vertex: 0, marking: 2, order: -2 },
                Leg { vertex: 1, marking: 3, order: 1 },
                Leg { vertex: 1, marking: 4, order: -1 },
                Leg { vertex: 2, marking: 5, order: 1 },
                Leg { vertex: 2, marking: 6, order: 0 },
            ],
            edges: vec![
                Edge { id: "e1".into(), upper: 0, lower: 1, kappa: 1 },
                Edge { id: "e2".into(), upper: 0, lower: 2, kappa: 2 },
            ],
        };
        assert_eq!(g.validate().unwrap(), vec![]);
        let pl = CombinatorialPLFunction {
            values: BTreeMap::from([(0, big(&[0])), (1, big(&[-1])), (2, big(&[-2]))]),
            slopes: BTreeMap::from([("e1".into(), 1), ("e2".into(), 2)]),
        };
        let lengths = BTreeMap::from([("e1".into(), big(&[1])), ("e2".into(), big(&[1]))]);
        let report = validate_pl(&g, &pl, &lengths);
        assert_eq!(
            report,
            vec![PlViolation::NotInMonoid { edge: "e2".into(), value: big(&[-1]) }]
        );
    }

    #[test]
    fn single_vertex_pl_passes() {
        let g = EnhancedLevelGraph {
            vertices: vec![Vertex { id: 0, genus: 1, level: 0, semistable: false }],
            legs: vec![Leg { vertex: 0, marking: 1, order: 0 }],
            edges: vec![],
        };
        let pl = CombinatorialPLFunction {
            values: BTreeMap::from([(0, big(&[0]))]),
            slopes: BTreeMap::new(),
        };
        assert_eq!(validate_pl(&g, &pl, &BTreeMap::new()), vec![]);
    }

    #[test]
    fn triangle_relative_inertia() {
        for n in [2u64, 3, 5, 7] {
            let inertia = relative_inertia(&fixtures::triangle(n)).unwrap();
            assert_eq!(inertia.invariant_factors, vec![BigUint::from(n)]);
        }
    }

    #[test]
    fn two_level_inertia_trivial() {
        for kappas in [vec![2u64, 3], vec![2, 2], vec![1], vec![4, 6, 3]] {
            let inertia = relative_inertia(&fixtures::two_level(&kappas)).unwrap();
            assert!(inertia.is_trivial());
        }
    }

    #[test]
    fn inertia_matches_twist_quotient() {
        for g in [
            fixtures::triangle(2),
            fixtures::triangle(6),
            fixtures::fig71(),
            fixtures::two_level(&[2, 4]),
            fixtures::triangle(5).subdivide_long_edges(),
        ] {
            let inertia = relative_inertia(&g).unwrap();
            let tw = crate::torus::twist_groups(&g).unwrap();
            assert_eq!(inertia.invariant_factors, tw.quotient.invariant_factors);
        }
    }
}
