//! Deterministic enumeration of stable genus-zero marked trees for a given
//! order vector, each equipped with its level structure.

use crate::graph::{Edge, EnhancedLevelGraph, Leg, Vertex};
use crate::slopes::{level_structure_from_slopes, tree_slopes};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CorpusSpec {
    /// number of marked legs; mu must have this length
    pub n: usize,
    /// leg orders; must sum to -2 (genus zero)
    pub mu: Vec<i64>,
    /// cap on the number of edges (vertices - 1)
    pub max_edges: usize,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CorpusError {
    #[error("mu has {0} entries, expected {1}")]
    MuLength(usize, usize),
    #[error("sum of mu is {0}, expected -2 for genus zero")]
    MuSum(i64),
}

/// All isomorphism classes of stable trees with n labeled legs distributed
/// per mu, leveled by their unique admissible slope function. The output
/// order is deterministic (sorted by canonical form).
pub fn enumerate_genus0_graphs(
    spec: &CorpusSpec,
) -> Result<Vec<EnhancedLevelGraph>, CorpusError> {
    if spec.mu.len() != spec.n {
        return Err(CorpusError::MuLength(spec.mu.len(), spec.n));
    }
    let total: i64 = spec.mu.iter().sum();
    if total != -2 {
        return Err(CorpusError::MuSum(total));
    }

    let mut seen = std::collections::BTreeMap::new();
    // summing valence >= 3 over vertices: 2(k-1) + n >= 3k, so k <= n - 2
    let max_vertices = (spec.max_edges + 1).min(spec.n.saturating_sub(2).max(1));
    for k in 1..=max_vertices {
        for edges in labeled_trees(k) {
            let mut degree = vec![0usize; k];
            for &(a, b) in &edges {
                degree[a] += 1;
                degree[b] += 1;
            }
            for assignment in leg_assignments(spec.n, k) {
                let mut legs = vec![0usize; k];
                for &v in &assignment {
                    legs[v] += 1;
                }
                // stability: every vertex needs valence >= 3
                if (0..k).any(|v| degree[v] + legs[v] < 3) {
                    continue;
                }
                let flat = build_flat(spec, k, &assignment, &edges);
                let Ok(slopes) = tree_slopes(&flat) else { continue };
                let Ok(leveled) = level_structure_from_slopes(&flat, &slopes) else {
                    continue;
                };
                if !matches!(leveled.validate(), Ok(ref v) if v.is_empty()) {
                    continue;
                }
                seen.entry(leveled.canonical_form()).or_insert(leveled);
            }
        }
    }
    Ok(seen.into_values().collect())
}

fn build_flat(
    spec: &CorpusSpec,
    k: usize,
    assignment: &[usize],
    edges: &[(usize, usize)],
) -> EnhancedLevelGraph {
    EnhancedLevelGraph {
        vertices: (0..k as u32)
            .map(|id| Vertex { id, genus: 0, level: 0, semistable: false })
            .collect(),
        legs: assignment
            .iter()
            .enumerate()
            .map(|(leg, &v)| Leg {
                vertex: v as u32,
                marking: leg as u32 + 1,
                order: spec.mu[leg],
            })
            .collect(),
        edges: edges
            .iter()
            .enumerate()
            .map(|(i, &(a, b))| Edge {
                id: format!("e{}", i + 1),
                upper: a as u32,
                lower: b as u32,
                kappa: 0,
            })
            .collect(),
    }
}

/// All maps {0..n-1} -> {0..k-1}; blocks may be empty (an internal vertex
/// can carry no leg).
fn leg_assignments(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|a| {
                (0..k).map(move |v| {
                    let mut b = a.clone();
                    b.push(v);
                    b
                })
            })
            .collect();
    }
    out
}

/// All labeled trees on k vertices via Pruefer sequences.
fn labeled_trees(k: usize) -> Vec<Vec<(usize, usize)>> {
    if k == 1 {
        return vec![vec![]];
    }
    if k == 2 {
        return vec![vec![(0, 1)]];
    }
    let mut out = Vec::new();
    let mut seq = vec![0usize; k - 2];
    loop {
        out.push(pruefer_to_tree(&seq, k));
        // odometer over {0..k-1}^{k-2}
        let mut i = seq.len();
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            seq[i] += 1;
            if seq[i] < k {
                break;
            }
            seq[i] = 0;
        }
    }
}

fn pruefer_to_tree(seq: &[usize], k: usize) -> Vec<(usize, usize)> {
    let mut degree = vec![1usize; k];
    for &s in seq {
        degree[s] += 1;
    }
    let mut edges = Vec::with_capacity(k - 1);
    let mut used = vec![false; k];
    for &s in seq {
        let leaf = (0..k).find(|&v| degree[v] == 1 && !used[v]).unwrap();
        edges.push((leaf.min(s), leaf.max(s)));
        used[leaf] = true;
        degree[s] -= 1;
    }
    let rest: Vec<usize> = (0..k).filter(|&v| !used[v] && degree[v] == 1).collect();
    edges.push((rest[0], rest[1]));
    edges
}

/// A fixed family of admissible genus-zero order vectors used by the
/// property suites.
pub fn standard_mu_vectors() -> Vec<Vec<i64>> {
    vec![
        vec![-1, -1, -1, 1],
        vec![-1, -1, 0, 0],
        vec![-2, -1, 1, 0],
        vec![-1, -1, -1, -1, 2],
        vec![-2, -2, 1, 1, 0],
        vec![-1, -1, -1, -1, -1, 3],
        vec![-3, -1, -1, 1, 1, 1],
    ]
}
