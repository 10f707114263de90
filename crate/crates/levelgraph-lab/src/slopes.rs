//! Multidegrees and the unique admissible slope function on genus-zero
//! trees, plus the level structure a slope assignment induces.

use crate::graph::{Edge, EnhancedLevelGraph, OpError, Vertex, VertexId};
use serde::Serialize;
use std::collections::{BTreeMap, HashMap};

/// Slopes on the edges of a tree, recorded on the half-edge at the vertex
/// stored in the edge's `upper` field (which need not be the actual upper
/// end until a level structure exists).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SlopeAssignment {
    /// edge id -> slope of the half-edge at the edge's `upper` field vertex
    pub slopes: BTreeMap<String, i64>,
    /// vertex id -> multidegree d(v)
    pub multidegrees: BTreeMap<VertexId, i64>,
}

impl SlopeAssignment {
    /// Slope of the half-edge of `e` at vertex `v` (the slope "leaving" v).
    pub fn outgoing(&self, e: &Edge, v: VertexId) -> i64 {
        let s = self.slopes[&e.id];
        if e.upper == v {
            s
        } else {
            debug_assert_eq!(e.lower, v);
            -s
        }
    }
}

/// Multidegree of the twisted canonical bundle on the component of v:
/// 2g(v) - 2 + #H'(v) - sum of leg orders at v.
pub fn multidegree(graph: &EnhancedLevelGraph, v: VertexId) -> Result<i64, OpError> {
    let vert = graph.vertex(v).ok_or(OpError::UnknownVertex(v))?;
    let legs: i64 = graph.legs.iter().filter(|l| l.vertex == v).map(|l| l.order).sum();
    Ok(2 * (vert.genus as i64) - 2 + graph.edge_valence(v) as i64 - legs)
}

/// The unique admissible slope function on a genus-zero tree: for each edge,
/// the slope leaving a component equals the sum of multidegrees over that
/// component. Levels on the input are ignored.
pub fn tree_slopes(graph: &EnhancedLevelGraph) -> Result<SlopeAssignment, OpError> {
    if graph.check_structure().is_err()
        || graph.first_betti() != 0
        || graph.vertices.iter().any(|v| v.genus != 0)
    {
        return Err(OpError::NotATree);
    }
    let mut multidegrees = BTreeMap::new();
    for v in &graph.vertices {
        multidegrees.insert(v.id, multidegree(graph, v.id)?);
    }

    let mut slopes = BTreeMap::new();
    for e in &graph.edges {
        // slope leaving a component through e equals the sum of
        // multidegrees over that component; record the half at `upper`
        let comp = component_without(graph, e, e.upper);
        let leaving: i64 = comp.iter().map(|v| multidegrees[v]).sum();
        slopes.insert(e.id.clone(), leaving);
    }
    let out = SlopeAssignment { slopes, multidegrees };
    debug_assert!(slopes_are_admissible(graph, &out));
    Ok(out)
}

fn component_without(graph: &EnhancedLevelGraph, cut: &Edge, start: VertexId) -> Vec<VertexId> {
    let mut adj: HashMap<VertexId, Vec<(&Edge, VertexId)>> = HashMap::new();
    for e in &graph.edges {
        adj.entry(e.upper).or_default().push((e, e.lower));
        adj.entry(e.lower).or_default().push((e, e.upper));
    }
    let mut seen = vec![start];
    let mut stack = vec![start];
    while let Some(v) = stack.pop() {
        for &(e, w) in adj.get(&v).into_iter().flatten() {
            if e.id != cut.id && !seen.contains(&w) {
                seen.push(w);
                stack.push(w);
            }
        }
    }
    seen
}

/// Per-vertex flow condition: outgoing slopes sum to the multidegree.
pub fn slopes_are_admissible(graph: &EnhancedLevelGraph, s: &SlopeAssignment) -> bool {
    graph.vertices.iter().all(|v| {
        let total: i64 = graph
            .edges
            .iter()
            .filter(|e| e.upper == v.id || e.lower == v.id)
            .map(|e| s.outgoing(e, v.id))
            .sum();
        total == s.multidegrees[&v.id]
    }) && s.multidegrees.values().sum::<i64>() == 0
}

/// Integrate slopes (with unit edge lengths) into beta-values, sort the
/// distinct values descending onto {0, ..., -N}, and orient edges by the
/// resulting levels; kappa becomes |slope|, slope-0 edges become horizontal.
pub fn level_structure_from_slopes(
    graph: &EnhancedLevelGraph,
    s: &SlopeAssignment,
) -> Result<EnhancedLevelGraph, OpError> {
    if graph.first_betti() != 0 {
        return Err(OpError::NotATree);
    }
    let anchor = graph.vertices[0].id;
    let mut beta: HashMap<VertexId, i64> = HashMap::from([(anchor, 0)]);
    let mut stack = vec![anchor];
    while let Some(v) = stack.pop() {
        for e in &graph.edges {
            for (here, there) in [(e.upper, e.lower), (e.lower, e.upper)] {
                if here == v && !beta.contains_key(&there) {
                    // crossing in the direction of positive outgoing slope
                    // decreases beta
                    beta.insert(there, beta[&v] - s.outgoing(e, v));
                    stack.push(there);
                }
            }
        }
    }

    let mut values: Vec<i64> = beta.values().copied().collect();
    values.sort_unstable();
    values.dedup();
    let level_of: HashMap<i64, i64> =
        values.iter().rev().enumerate().map(|(i, &b)| (b, -(i as i64))).collect();

    let vertices: Vec<Vertex> = graph
        .vertices
        .iter()
        .map(|v| Vertex { level: level_of[&beta[&v.id]], ..v.clone() })
        .collect();
    let lvl = |id: VertexId| vertices.iter().find(|v| v.id == id).unwrap().level;
    let edges = graph
        .edges
        .iter()
        .map(|e| {
            let (mut upper, mut lower) = (e.upper, e.lower);
            if lvl(upper) < lvl(lower) {
                std::mem::swap(&mut upper, &mut lower);
            }
            Edge { id: e.id.clone(), upper, lower, kappa: s.slopes[&e.id].unsigned_abs() }
        })
        .collect();
    Ok(EnhancedLevelGraph { vertices, legs: graph.legs.clone(), edges })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::graph::{Edge, EnhancedLevelGraph, Leg, Vertex};

    #[test]
    fn fig71_multidegrees() {
        let g = fixtures::fig71();
        assert_eq!(multidegree(&g, 0).unwrap(), -3);
        assert_eq!(multidegree(&g, 1).unwrap(), 1);
        assert_eq!(multidegree(&g, 2).unwrap(), 1);
        assert_eq!(multidegree(&g, 3).unwrap(), 1);
        assert!(matches!(multidegree(&g, 42), Err(OpError::UnknownVertex(42))));
    }

    #[test]
    fn isolated_genus1_multidegree() {
        let g = EnhancedLevelGraph {
            vertices: vec![Vertex { id: 0, genus: 1, level: 0, semistable: false }],
            legs: vec![Leg { vertex: 0, marking: 1, order: 0 }],
            edges: vec![],
        };
        assert_eq!(multidegree(&g, 0).unwrap(), 0);
        let s = tree_slopes(&g).unwrap_err();
        // positive genus is rejected even for a single vertex
        assert_eq!(s, OpError::NotATree);
    }

    #[test]
    fn fig71_slopes_all_one_toward_center() {
        let g = fixtures::fig71();
        let s = tree_slopes(&g).unwrap();
        for e in &g.edges {
            // each top vertex is the positive end
            assert_eq!(s.outgoing(e, e.upper), 1);
        }
        assert!(slopes_are_admissible(&g, &s));
    }

    #[test]
    fn single_vertex_tree_has_empty_assignment() {
        let g = EnhancedLevelGraph {
            vertices: vec![Vertex { id: 0, genus: 0, level: 0, semistable: false }],
            legs: vec![
                Leg { vertex: 0, marking: 1, order: -1 },
                Leg { vertex: 0, marking: 2, order: -1 },
                Leg { vertex: 0, marking: 3, order: 0 },
            ],
            edges: vec![],
        };
        let s = tree_slopes(&g).unwrap();
        assert!(s.slopes.is_empty());
    }

    #[test]
    fn two_vertex_tree_slope() {
        // mu = (-1,-1,3,-3): d(v_a) = 1, d(v_b) = -1
        let g = EnhancedLevelGraph {
            vertices: vec![
                Vertex { id: 0, genus: 0, level: 0, semistable: false },
                Vertex { id: 1, genus: 0, level: 0, semistable: false },
            ],
            legs: vec![
                Leg { vertex: 0, marking: 1, order: -1 },
                Leg { vertex: 0, marking: 2, order: -1 },
                Leg { vertex: 1, marking: 3, order: 3 },
                Leg { vertex: 1, marking: 4, order: -3 },
            ],
            edges: vec![Edge { id: "e".into(), upper: 0, lower: 1, kappa: 0 }],
        };
        let s = tree_slopes(&g).unwrap();
        assert_eq!(s.multidegrees[&0], 1);
        assert_eq!(s.multidegrees[&1], -1);
        assert_eq!(s.outgoing(&g.edges[0], 0), 1);
    }

    #[test]
    fn fig71_level_structure() {
        let g = fixtures::fig71();
        let s = tree_slopes(&g).unwrap();
        let leveled = level_structure_from_slopes(&g, &s).unwrap();
        assert_eq!(leveled.level(0), -1);
        for v in [1, 2, 3] {
            assert_eq!(leveled.level(v), 0);
        }
        assert_eq!(leveled.validate().unwrap(), vec![]);
    }

    #[test]
    fn zero_slope_edge_becomes_horizontal() {
        // two vertices with d = 0 on both sides
        let g = EnhancedLevelGraph {
            vertices: vec![
                Vertex { id: 0, genus: 0, level: 0, semistable: false },
                Vertex { id: 1, genus: 0, level: 0, semistable: false },
            ],
            legs: vec![
                Leg { vertex: 0, marking: 1, order: -1 },
                Leg { vertex: 0, marking: 2, order: 0 },
                Leg { vertex: 1, marking: 3, order: -1 },
                Leg { vertex: 1, marking: 4, order: 0 },
            ],
            edges: vec![Edge { id: "e".into(), upper: 0, lower: 1, kappa: 0 }],
        };
        let s = tree_slopes(&g).unwrap();
        assert_eq!(s.slopes["e"], 0);
        let leveled = level_structure_from_slopes(&g, &s).unwrap();
        assert_eq!(leveled.level(0), 0);
        assert_eq!(leveled.level(1), 0);
        assert_eq!(leveled.edges[0].kappa, 0);
        assert_eq!(leveled.validate().unwrap(), vec![]);
    }

    #[test]
    fn path_with_descending_slopes() {
        // chain v0 - v1 - v2 with slopes 1, 1 downward
        let g = EnhancedLevelGraph {
            vertices: vec![
                Vertex { id: 0, genus: 0, level: 0, semistable: false },
                Vertex { id: 1, genus: 0, level: 0, semistable: false },
                Vertex { id: 2, genus: 0, level: 0, semistable: false },
            ],
            legs: vec![
                Leg { vertex: 0, marking: 1, order: -1 },
                Leg { vertex: 0, marking: 2, order: -1 },
                Leg { vertex: 1, marking: 3, order: 0 },
                Leg { vertex: 2, marking: 4, order: 0 },
                Leg { vertex: 2, marking: 5, order: 0 },
            ],
            edges: vec![
                Edge { id: "a".into(), upper: 0, lower: 1, kappa: 0 },
                Edge { id: "b".into(), upper: 1, lower: 2, kappa: 0 },
            ],
        };
        let s = tree_slopes(&g).unwrap();
        assert_eq!(s.outgoing(&g.edges[0], 0), 1);
        assert_eq!(s.outgoing(&g.edges[1], 1), 1);
        let leveled = level_structure_from_slopes(&g, &s).unwrap();
        assert_eq!(
            (leveled.level(0), leveled.level(1), leveled.level(2)),
            (0, -1, -2)
        );
    }
}
