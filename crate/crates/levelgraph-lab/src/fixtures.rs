//! Small worked graphs used across tests, examples, and the docs.

use crate::graph::{Edge, EnhancedLevelGraph, Leg, Vertex};

/// Three-level triangle: one vertex per level, edges e1 (0 -> -1, kappa 1),
/// e2 (-1 -> -2, kappa 1), and the long edge e3 (0 -> -2, kappa n).
/// Legs are chosen to make the graph admissible.
pub fn triangle(n: u64) -> EnhancedLevelGraph {
    let n = n as i64;
    EnhancedLevelGraph {
        vertices: vec![
            Vertex { id: 0, genus: 0, level: 0, semistable: false },
            Vertex { id: 1, genus: 0, level: -1, semistable: false },
            Vertex { id: 2, genus: 0, level: -2, semistable: false },
        ],
        legs: vec![
            Leg { vertex: 0, marking: 1, order: -n - 1 },
            Leg { vertex: 1, marking: 2, order: 0 },
            Leg { vertex: 2, marking: 3, order: n + 1 },
        ],
        edges: vec![
            Edge { id: "e1".into(), upper: 0, lower: 1, kappa: 1 },
            Edge { id: "e2".into(), upper: 1, lower: 2, kappa: 1 },
            Edge { id: "e3".into(), upper: 0, lower: 2, kappa: n as u64 },
        ],
    }
}

/// Star graph with mu = (-1^6, 4): three top-level vertices v1..v3 carrying
/// two simple poles each, one bottom vertex v0 carrying the order-4 zero,
/// and three edges of enhancement 1.
pub fn fig71() -> EnhancedLevelGraph {
    EnhancedLevelGraph {
        vertices: vec![
            Vertex { id: 0, genus: 0, level: -1, semistable: false },
            Vertex { id: 1, genus: 0, level: 0, semistable: false },
            Vertex { id: 2, genus: 0, level: 0, semistable: false },
            Vertex { id: 3, genus: 0, level: 0, semistable: false },
        ],
        legs: vec![
            Leg { vertex: 1, marking: 1, order: -1 },
            Leg { vertex: 1, marking: 2, order: -1 },
            Leg { vertex: 2, marking: 3, order: -1 },
            Leg { vertex: 2, marking: 4, order: -1 },
            Leg { vertex: 3, marking: 5, order: -1 },
            Leg { vertex: 3, marking: 6, order: -1 },
            Leg { vertex: 0, marking: 7, order: 4 },
        ],
        edges: vec![
            Edge { id: "e1".into(), upper: 1, lower: 0, kappa: 1 },
            Edge { id: "e2".into(), upper: 2, lower: 0, kappa: 1 },
            Edge { id: "e3".into(), upper: 3, lower: 0, kappa: 1 },
        ],
    }
}

/// Two-level graph with one top and one bottom vertex joined by the given
/// prongs, padded with one pair of legs per vertex to be admissible.
pub fn two_level(kappas: &[u64]) -> EnhancedLevelGraph {
    let s = kappas.len() as i64;
    let ksum: i64 = kappas.iter().map(|&k| k as i64).sum();
    let top_order = -2 - (ksum - s);
    let bottom_order = -2 + s + ksum;
    EnhancedLevelGraph {
        vertices: vec![
            Vertex { id: 0, genus: 0, level: 0, semistable: false },
            Vertex { id: 1, genus: 0, level: -1, semistable: false },
        ],
        legs: vec![
            Leg { vertex: 0, marking: 1, order: 0 },
            Leg { vertex: 0, marking: 2, order: top_order },
            Leg { vertex: 1, marking: 3, order: 0 },
            Leg { vertex: 1, marking: 4, order: bottom_order },
        ],
        edges: kappas
            .iter()
            .enumerate()
            .map(|(i, &k)| Edge { id: format!("e{}", i + 1), upper: 0, lower: 1, kappa: k })
            .collect(),
    }
}

/// Two top-level vertices over a common bottom vertex, with slopes 1 and 2:
/// the graph behind the quadrant subdivision at the ray (2, 1).
pub fn two_edge_slope_1_2() -> EnhancedLevelGraph {
    EnhancedLevelGraph {
        vertices: vec![
            Vertex { id: 0, genus: 0, level: 0, semistable: false },
            Vertex { id: 1, genus: 0, level: 0, semistable: false },
            Vertex { id: 2, genus: 0, level: -1, semistable: false },
        ],
        legs: vec![
            Leg { vertex: 0, marking: 1, order: -1 },
            Leg { vertex: 0, marking: 2, order: -1 },
            Leg { vertex: 1, marking: 3, order: -1 },
            Leg { vertex: 1, marking: 4, order: -2 },
            Leg { vertex: 2, marking: 5, order: 3 },
        ],
        edges: vec![
            Edge { id: "e1".into(), upper: 0, lower: 2, kappa: 1 },
            Edge { id: "e2".into(), upper: 1, lower: 2, kappa: 2 },
        ],
    }
}
