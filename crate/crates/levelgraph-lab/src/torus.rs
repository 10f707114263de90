//! Lattice algebra of level rotation tori: the per-passage lcms a_i, the
//! twist group Tw and its simple subgroup sTw inside Z^{L(Gamma)}, the
//! finite quotient K_Gamma, prong-matching orbit counts, and the exponent
//! matrix of the torus quotient map.

use crate::graph::{EnhancedLevelGraph, OpError};
use crate::matrix::{elementary_divisors, hnf_row_basis, integer_kernel, IntMat};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use std::collections::BTreeMap;
use thiserror::Error;

/// Invariant-factor presentation of a finite abelian group; the empty list
/// is the trivial group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiniteAbelianGroup {
    /// d_1 | d_2 | ... | d_k, each >= 2
    pub invariant_factors: Vec<BigUint>,
}

impl FiniteAbelianGroup {
    pub fn trivial() -> Self {
        FiniteAbelianGroup { invariant_factors: Vec::new() }
    }

    pub fn from_divisors(divisors: Vec<BigInt>) -> Self {
        FiniteAbelianGroup {
            invariant_factors: divisors
                .into_iter()
                .filter(|d| *d > BigInt::one())
                .map(|d| d.to_biguint().unwrap())
                .collect(),
        }
    }

    pub fn order(&self) -> BigUint {
        self.invariant_factors.iter().product()
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TwistGroupData {
    /// passage i -> a_i, the lcm of enhancements of edges crossing i
    pub a: BTreeMap<i64, u64>,
    /// rows span Tw inside Z^{L(Gamma)}; coordinates ordered -1, -2, ...
    pub tw_basis: Vec<Vec<BigInt>>,
    /// diag(a_i), a basis of sTw
    pub stw_basis: Vec<Vec<BigInt>>,
    /// K_Gamma = Tw / sTw
    pub quotient: FiniteAbelianGroup,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TorusError {
    #[error("level passage {0} is crossed by no edge; the graph is malformed")]
    UncrossedPassage(i64),
    #[error(transparent)]
    Graph(#[from] OpError),
}

/// a_i = lcm of the enhancements of edges crossing passage i, for each
/// passage i in {-1, ..., -N}.
pub fn level_lcms(graph: &EnhancedLevelGraph) -> Result<BTreeMap<i64, u64>, TorusError> {
    let mut out = BTreeMap::new();
    for i in graph.passages() {
        let mut a: u64 = 0;
        for e in graph.vertical_edges() {
            if graph.level(e.lower) <= i && i < graph.level(e.upper) {
                a = if a == 0 { e.kappa } else { a.lcm(&e.kappa) };
            }
        }
        if a == 0 {
            return Err(TorusError::UncrossedPassage(i));
        }
        out.insert(i, a);
    }
    Ok(out)
}

/// Incidence matrix of vertical edges against passages: one row per
/// vertical edge (in input order), one column per passage (-1, -2, ...),
/// entry 1 when the edge crosses the passage.
fn passage_incidence(graph: &EnhancedLevelGraph) -> (IntMat, Vec<u64>) {
    let passages = graph.passages();
    let verticals: Vec<_> = graph.vertical_edges().collect();
    let mut m = IntMat::zeros(verticals.len(), passages.len());
    for (r, e) in verticals.iter().enumerate() {
        for (c, &i) in passages.iter().enumerate() {
            if graph.level(e.lower) <= i && i < graph.level(e.upper) {
                m.set(r, c, BigInt::one());
            }
        }
    }
    (m, verticals.iter().map(|e| e.kappa).collect())
}

/// Tw, sTw and their quotient K_Gamma.
pub fn twist_groups(graph: &EnhancedLevelGraph) -> Result<TwistGroupData, TorusError> {
    let a = level_lcms(graph)?;
    let n = a.len();
    let (incidence, kappas) = passage_incidence(graph);

    // Tw = {n in Z^L : kappa_e | sum of n_i over passages crossed by e}
    //    = projection to the first L coordinates of ker [M | -diag(kappa)]
    let mut stacked = IntMat::zeros(incidence.nrows(), n + kappas.len());
    for r in 0..incidence.nrows() {
        for c in 0..n {
            stacked.set(r, c, incidence.get(r, c).clone());
        }
        stacked.set(r, n + r, -BigInt::from(kappas[r]));
    }
    let tw_gens: Vec<Vec<BigInt>> = if incidence.nrows() == 0 {
        // no vertical edges: Tw is all of Z^L
        (0..n)
            .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
            .collect()
    } else {
        integer_kernel(&stacked).into_iter().map(|row| row[..n].to_vec()).collect()
    };
    let tw_basis = hnf_row_basis(&tw_gens);
    assert_eq!(tw_basis.len(), n, "twist group must have full rank");

    // sTw = direct sum of a_i Z, one summand per passage
    let a_desc: Vec<u64> = graph.passages().iter().map(|i| a[i]).collect();
    let stw_basis: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::from(a_desc[i]) } else { BigInt::zero() })
                .collect()
        })
        .collect();

    let quotient = lattice_quotient(&tw_basis, &stw_basis);
    Ok(TwistGroupData { a, tw_basis, stw_basis, quotient })
}

/// Quotient of two full-rank lattices sub ⊆ sup in Z^n, given by basis rows.
fn lattice_quotient(sup: &[Vec<BigInt>], sub: &[Vec<BigInt>]) -> FiniteAbelianGroup {
    let n = sup.len();
    if n == 0 {
        return FiniteAbelianGroup::trivial();
    }
    // express each sub basis vector in sup coordinates (exact rational solve,
    // result must be integral)
    let coords: Vec<Vec<BigInt>> = sub
        .iter()
        .map(|v| solve_in_basis(sup, v).expect("sTw must be contained in Tw"))
        .collect();
    let m = IntMat::from_rows(coords).transpose();
    FiniteAbelianGroup::from_divisors(elementary_divisors(&m))
}

/// Solve x * B = v for integer x, where B's rows are a lattice basis.
fn solve_in_basis(basis_rows: &[Vec<BigInt>], v: &[BigInt]) -> Option<Vec<BigInt>> {
    use num_rational::BigRational;
    let n = basis_rows.len();
    // Gaussian elimination over Q on the transposed system
    let mut aug: Vec<Vec<BigRational>> = (0..v.len())
        .map(|col| {
            let mut row: Vec<BigRational> = (0..n)
                .map(|r| BigRational::from(basis_rows[r][col].clone()))
                .collect();
            row.push(BigRational::from(v[col].clone()));
            row
        })
        .collect();
    let rows = aug.len();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..rows).find(|&i| !aug[i][c].is_zero()) else { continue };
        aug.swap(r, p);
        let inv = aug[r][c].clone();
        for x in aug[r].iter_mut() {
            *x = &*x / &inv;
        }
        for i in 0..rows {
            if i != r && !aug[i][c].is_zero() {
                let f = aug[i][c].clone();
                for j in 0..=n {
                    let v = &aug[i][j] - &f * &aug[r][j];
                    aug[i][j] = v;
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    // consistency
    for i in r..rows {
        if !aug[i][n].is_zero() {
            return None;
        }
    }
    let mut x = vec![BigInt::zero(); n];
    for (row, &c) in pivot_cols.iter().enumerate() {
        let val = &aug[row][n];
        if !val.is_integer() {
            return None;
        }
        x[c] = val.to_integer();
    }
    Some(x)
}

/// Number of orbits of the level rotation group acting on the product of
/// Z/kappa_e: the order of the cokernel of [M | diag(kappa)].
pub fn count_prong_matching_classes(
    graph: &EnhancedLevelGraph,
) -> Result<BigUint, TorusError> {
    let (incidence, kappas) = passage_incidence(graph);
    if kappas.is_empty() {
        return Ok(BigUint::one());
    }
    let n = incidence.ncols();
    let mut m = IntMat::zeros(kappas.len(), n + kappas.len());
    for r in 0..kappas.len() {
        for c in 0..n {
            m.set(r, c, incidence.get(r, c).clone());
        }
        m.set(r, n + r, BigInt::from(kappas[r]));
    }
    let order: BigInt = elementary_divisors(&m).iter().product();
    Ok(order.abs().to_biguint().unwrap())
}

/// Brute-force orbit count over the explicit action, for cross-checking.
/// Returns `None` when the state space exceeds `max_states`.
pub fn brute_force_prong_orbits(
    graph: &EnhancedLevelGraph,
    max_states: u64,
) -> Option<BigUint> {
    let (incidence, kappas) = passage_incidence(graph);
    if kappas.is_empty() {
        return Some(BigUint::one());
    }
    let mut total: u64 = 1;
    for &k in &kappas {
        total = total.checked_mul(k)?;
        if total > max_states {
            return None;
        }
    }
    let total = total as usize;
    let dims: Vec<u64> = kappas.clone();
    let index_of = |state: &[u64]| -> usize {
        let mut idx = 0usize;
        for (s, d) in state.iter().zip(&dims) {
            idx = idx * (*d as usize) + *s as usize;
        }
        idx
    };
    let mut parent: Vec<usize> = (0..total).collect();
    fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    // enumerate all states; union each with its image under every generator
    let mut state = vec![0u64; dims.len()];
    loop {
        let from = index_of(&state);
        for col in 0..incidence.ncols() {
            let mut next = state.clone();
            for (row, d) in dims.iter().enumerate() {
                if incidence.get(row, col).is_one() {
                    next[row] = (next[row] + 1) % d;
                }
            }
            let to = index_of(&next);
            let (ra, rb) = (find(&mut parent, from), find(&mut parent, to));
            if ra != rb {
                parent[ra] = rb;
            }
        }
        // odometer
        let mut i = dims.len();
        loop {
            if i == 0 {
                let roots = (0..total)
                    .filter(|&x| find(&mut parent, x) == x)
                    .count();
                return Some(BigUint::from(roots));
            }
            i -= 1;
            state[i] += 1;
            if state[i] < dims[i] {
                break;
            }
            state[i] = 0;
        }
    }
}

/// Exponent data of the torus quotient map (q_i) -> (r_i, rho_e).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuotientMapExponents {
    /// passages in column order (-1, -2, ...)
    pub passages: Vec<i64>,
    /// rows r_i: exponent a_i on the diagonal
    pub level_rows: Vec<Vec<BigInt>>,
    /// rows rho_e, one per vertical edge in input order: a_i / kappa_e on
    /// crossed passages
    pub edge_rows: Vec<(String, Vec<BigInt>)>,
    /// relations f_e^{kappa_e} = product of s_i over crossed passages
    pub relations: Vec<(String, u64, Vec<i64>)>,
}

pub fn quotient_map_exponents(
    graph: &EnhancedLevelGraph,
) -> Result<QuotientMapExponents, TorusError> {
    let a = level_lcms(graph)?;
    let passages = graph.passages();
    let level_rows = passages
        .iter()
        .enumerate()
        .map(|(c, i)| {
            let mut row = vec![BigInt::zero(); passages.len()];
            row[c] = BigInt::from(a[i]);
            row
        })
        .collect();
    let mut edge_rows = Vec::new();
    let mut relations = Vec::new();
    for e in graph.vertical_edges() {
        let crossed = graph.crossed_passages(e);
        let row = passages
            .iter()
            .map(|i| {
                if crossed.contains(i) {
                    assert_eq!(a[i] % e.kappa, 0, "a_i must be divisible by kappa_e");
                    BigInt::from(a[i] / e.kappa)
                } else {
                    BigInt::zero()
                }
            })
            .collect();
        edge_rows.push((e.id.clone(), row));
        relations.push((e.id.clone(), e.kappa, crossed));
    }
    Ok(QuotientMapExponents { passages, level_rows, edge_rows, relations })
}

/// Remark-style closed form for two-level graphs: prod kappa / lcm kappa.
pub fn two_level_class_formula(kappas: &[u64]) -> BigUint {
    let prod: BigUint = kappas.iter().map(|&k| BigUint::from(k)).product();
    let lcm = kappas.iter().fold(1u64, |acc, &k| acc.lcm(&k));
    prod / BigUint::from(lcm)
}

impl TwistGroupData {
    /// Index [Tw : sTw] computed from covolumes, as a consistency check.
    pub fn index_from_covolumes(&self) -> BigUint {
        let stw_det: BigInt = (0..self.stw_basis.len())
            .map(|i| self.stw_basis[i][i].clone())
            .product();
        let tw = IntMat::from_rows(self.tw_basis.clone());
        let tw_det = crate::matrix::determinant(&tw).abs();
        (stw_det / tw_det).to_biguint().unwrap()
    }
}
