//! Exact rational cones and fans inside the positive orthant: hyperplane
//! subdivisions, Newton-polyhedron normal fans, refinement comparisons,
//! per-cone principality, and lattice indices.

use crate::graph::EnhancedLevelGraph;
use crate::ideal::{Monomial, MonomialIdeal};
use crate::matrix::{determinant, IntMat};
use crate::slopes::SlopeAssignment;
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FanError {
    #[error("ambient dimensions differ: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("an ideal needs at least one generator")]
    EmptyIdeal,
    #[error("expected {expected} independent rays, got rank {got}")]
    RankDeficientRays { expected: usize, got: usize },
    #[error("ray does not lie in the given lattice")]
    RayOutsideLattice,
}

/// A pointed rational cone inside the positive orthant, carried in both
/// representations: primitive integer rays and inequality normals
/// (half-spaces <n, x> >= 0).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Cone {
    pub dim: usize,
    /// primitive integer ray generators, sorted
    pub rays: Vec<Vec<BigInt>>,
    /// inequality normals, including the orthant coordinate half-spaces
    pub inequalities: Vec<Vec<BigInt>>,
}

/// A fan of full-dimensional cones covering the positive orthant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Fan {
    pub dim: usize,
    pub cones: Vec<Cone>,
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn primitive(v: &[BigInt]) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &g).collect()
}

fn rank(rows: &[Vec<BigInt>], dim: usize) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let m = IntMat::from_rows(rows.iter().map(|r| r.to_vec()).collect());
    let _ = dim;
    crate::matrix::row_rank(&m)
}

impl Cone {
    /// Intersection of the positive orthant with the half-spaces
    /// <n, x> >= 0, by the incremental double description method.
    pub fn in_orthant(dim: usize, extra: &[Vec<BigInt>]) -> Cone {
        let mut inequalities: Vec<Vec<BigInt>> = (0..dim)
            .map(|i| {
                (0..dim)
                    .map(|j| if i == j { BigInt::from(1) } else { BigInt::zero() })
                    .collect()
            })
            .collect();
        let mut rays: Vec<Vec<BigInt>> = inequalities.clone();
        for n in extra {
            let mut next: Vec<Vec<BigInt>> = Vec::new();
            let mut pos = Vec::new();
            let mut neg = Vec::new();
            for r in &rays {
                match dot(n, r).sign() {
                    num_bigint::Sign::Minus => neg.push(r.clone()),
                    num_bigint::Sign::NoSign => next.push(r.clone()),
                    num_bigint::Sign::Plus => {
                        pos.push(r.clone());
                        next.push(r.clone());
                    }
                }
            }
            for p in &pos {
                for q in &neg {
                    let a = dot(n, p);
                    let b = -dot(n, q);
                    let combined: Vec<BigInt> = p
                        .iter()
                        .zip(q)
                        .map(|(x, y)| &b * x + &a * y)
                        .collect();
                    if combined.iter().any(|x| !x.is_zero()) {
                        next.push(primitive(&combined));
                    }
                }
            }
            inequalities.push(n.clone());
            next.sort();
            next.dedup();
            // keep only extreme rays: tight inequalities must have rank d-1
            rays = next
                .into_iter()
                .filter(|r| {
                    let tight: Vec<Vec<BigInt>> = inequalities
                        .iter()
                        .filter(|ineq| dot(ineq, r).is_zero())
                        .cloned()
                        .collect();
                    rank(&tight, dim) >= dim - 1
                })
                .collect();
        }
        rays.sort();
        Cone { dim, rays, inequalities }
    }

    pub fn is_full_dimensional(&self) -> bool {
        rank(&self.rays, self.dim) == self.dim
    }

    /// Every ray of self satisfies every inequality of other.
    pub fn is_contained_in(&self, other: &Cone) -> bool {
        self.rays
            .iter()
            .all(|r| other.inequalities.iter().all(|n| !dot(n, r).is_negative()))
    }
}

/// Normal of the hyperplane L(v, v') attached to an ordered vertex pair:
/// the sum of slope * e(edge) over the departing half-edges of the path.
fn pair_normal(
    graph: &EnhancedLevelGraph,
    slopes: &SlopeAssignment,
    vars: &[String],
    v: u32,
    v_prime: u32,
) -> Vec<BigInt> {
    let mut n = vec![BigInt::zero(); vars.len()];
    // walk the tree path, accumulating the departing slope per edge
    let path = crate::ideal::tree_path(graph, v, v_prime).expect("vertices of a tree");
    for (at, edge_idx) in path {
        let e = &graph.edges[edge_idx];
        let s = slopes.outgoing(e, at);
        let idx = vars.iter().position(|w| *w == e.id).unwrap();
        n[idx] += BigInt::from(s);
    }
    n
}

/// Does the hyperplane with this normal cut the open orthant? It does
/// exactly when the normal has entries of both signs.
fn cuts_orthant(n: &[BigInt]) -> bool {
    n.iter().any(|x| x.is_positive()) && n.iter().any(|x| x.is_negative())
}

/// Subdivision of the positive orthant in Q^{E} by the hyperplanes L(v,v')
/// over all vertex pairs.
pub fn hyperplane_subdivision(graph: &EnhancedLevelGraph, slopes: &SlopeAssignment) -> Fan {
    let mut vars: Vec<String> = graph.edges.iter().map(|e| e.id.clone()).collect();
    vars.sort();
    let dim = vars.len();
    let mut normals: Vec<Vec<BigInt>> = Vec::new();
    for a in &graph.vertices {
        for b in &graph.vertices {
            if a.id >= b.id {
                continue;
            }
            let n = pair_normal(graph, slopes, &vars, a.id, b.id);
            if !cuts_orthant(&n) {
                continue;
            }
            // canonical sign: first nonzero entry positive
            let mut n = primitive(&n);
            if n.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
                n = n.iter().map(|x| -x).collect();
            }
            if !normals.contains(&n) {
                normals.push(n);
            }
        }
    }

    let mut cones = vec![Cone::in_orthant(dim, &[])];
    for n in &normals {
        let neg: Vec<BigInt> = n.iter().map(|x| -x).collect();
        cones = cones
            .into_iter()
            .flat_map(|c| {
                let extra: Vec<Vec<BigInt>> = c.inequalities[c.dim..].to_vec();
                let mut plus = extra.clone();
                plus.push(n.clone());
                let mut minus = extra;
                minus.push(neg.clone());
                [Cone::in_orthant(dim, &plus), Cone::in_orthant(dim, &minus)]
            })
            .filter(Cone::is_full_dimensional)
            .collect();
    }
    dedupe_cones(&mut cones);
    Fan { dim, cones }
}

fn dedupe_cones(cones: &mut Vec<Cone>) {
    cones.sort_by(|a, b| a.rays.cmp(&b.rays));
    cones.dedup_by(|a, b| a.rays == b.rays);
}

/// Normal fan of the Newton polyhedron of a monomial ideal: per generator
/// m, the region of the orthant where <m, x> is minimal.
pub fn newton_fan(ideal: &MonomialIdeal) -> Result<Fan, FanError> {
    if ideal.gens.is_empty() {
        return Err(FanError::EmptyIdeal);
    }
    let dim = ideal.vars.len();
    let as_vec = |m: &Monomial| -> Vec<BigInt> {
        m.exponents.iter().map(|e| BigInt::from(e.clone())).collect()
    };
    let mut cones = Vec::new();
    for m in &ideal.gens {
        let mv = as_vec(m);
        let extra: Vec<Vec<BigInt>> = ideal
            .gens
            .iter()
            .filter(|m2| *m2 != m)
            .map(|m2| {
                let o = as_vec(m2);
                o.iter().zip(&mv).map(|(a, b)| a - b).collect()
            })
            .collect();
        let cone = Cone::in_orthant(dim, &extra);
        if cone.is_full_dimensional() {
            cones.push(cone);
        }
    }
    dedupe_cones(&mut cones);
    Ok(Fan { dim, cones })
}

/// Every maximal cone of `fine` lies inside some maximal cone of `coarse`.
pub fn fan_refines(fine: &Fan, coarse: &Fan) -> Result<bool, FanError> {
    if fine.dim != coarse.dim {
        return Err(FanError::DimensionMismatch(fine.dim, coarse.dim));
    }
    Ok(fine
        .cones
        .iter()
        .all(|c| coarse.cones.iter().any(|d| c.is_contained_in(d))))
}

pub fn fans_equal(a: &Fan, b: &Fan) -> Result<bool, FanError> {
    Ok(fan_refines(a, b)? && fan_refines(b, a)?)
}

/// Common refinement: pairwise intersections that stay full-dimensional.
pub fn common_refinement(a: &Fan, b: &Fan) -> Result<Fan, FanError> {
    if a.dim != b.dim {
        return Err(FanError::DimensionMismatch(a.dim, b.dim));
    }
    let mut cones = Vec::new();
    for ca in &a.cones {
        for cb in &b.cones {
            let mut extra = ca.inequalities[ca.dim..].to_vec();
            extra.extend(cb.inequalities[cb.dim..].iter().cloned());
            let c = Cone::in_orthant(a.dim, &extra);
            if c.is_full_dimensional() {
                cones.push(c);
            }
        }
    }
    dedupe_cones(&mut cones);
    Ok(Fan { dim: a.dim, cones })
}

/// Per-cone minimizing generators; `None` marks a cone on which the ideal
/// fails to be principal.
pub fn is_locally_principal(
    ideal: &MonomialIdeal,
    fan: &Fan,
) -> Result<(bool, Vec<Option<Monomial>>), FanError> {
    if ideal.vars.len() != fan.dim {
        return Err(FanError::DimensionMismatch(ideal.vars.len(), fan.dim));
    }
    if ideal.gens.is_empty() {
        return Err(FanError::EmptyIdeal);
    }
    let as_vec = |m: &Monomial| -> Vec<BigInt> {
        m.exponents.iter().map(|e| BigInt::from(e.clone())).collect()
    };
    let mut witnesses = Vec::new();
    for cone in &fan.cones {
        let found = ideal.gens.iter().find(|m| {
            let mv = as_vec(m);
            cone.rays.iter().all(|r| {
                let val = dot(&mv, r);
                ideal.gens.iter().all(|m2| dot(&as_vec(m2), r) >= val)
            })
        });
        witnesses.push(found.cloned());
    }
    let ok = witnesses.iter().all(Option::is_some);
    Ok((ok, witnesses))
}

/// |det| of the rays expressed in coordinates of the given lattice basis
/// (rows). Rays are primitivized in lattice coordinates first, so the
/// result is 1 exactly for a smooth cone.
pub fn cone_lattice_index(
    rays: &[Vec<BigRational>],
    lattice: &[Vec<BigRational>],
) -> Result<BigUint, FanError> {
    let dim = lattice.len();
    if rays.len() != dim {
        return Err(FanError::RankDeficientRays { expected: dim, got: rays.len() });
    }
    let mut coord_rows = Vec::new();
    for ray in rays {
        let coords = solve_rational(lattice, ray)
            .ok_or(FanError::RayOutsideLattice)?;
        // primitive in lattice coordinates
        let denom: BigInt = coords
            .iter()
            .fold(BigInt::from(1), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = coords
            .iter()
            .map(|c| (c * BigRational::from(denom.clone())).to_integer())
            .collect();
        coord_rows.push(primitive(&ints));
    }
    let m = IntMat::from_rows(coord_rows);
    let d = determinant(&m);
    if d.is_zero() {
        return Err(FanError::RankDeficientRays {
            expected: dim,
            got: rank(&m.to_rows(), dim),
        });
    }
    Ok(d.abs().to_biguint().unwrap())
}

/// Solve x * basis = v over the rationals (basis rows must be independent).
fn solve_rational(basis: &[Vec<BigRational>], v: &[BigRational]) -> Option<Vec<BigRational>> {
    let n = basis.len();
    let cols = v.len();
    let mut aug: Vec<Vec<BigRational>> = (0..cols)
        .map(|c| {
            let mut row: Vec<BigRational> = (0..n).map(|r| basis[r][c].clone()).collect();
            row.push(v[c].clone());
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..cols).find(|&i| !aug[i][c].is_zero()) else { continue };
        aug.swap(r, p);
        let inv = aug[r][c].clone();
        for x in aug[r].iter_mut() {
            *x = &*x / &inv;
        }
        for i in 0..cols {
            if i != r && !aug[i][c].is_zero() {
                let f = aug[i][c].clone();
                for j in 0..=n {
                    let val = &aug[i][j] - &f * &aug[r][j];
                    aug[i][j] = val;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    for i in r..cols {
        if !aug[i][n].is_zero() {
            return None;
        }
    }
    let mut x = vec![BigRational::zero(); n];
    for (row, &c) in pivots.iter().enumerate() {
        x[c] = aug[row][n].clone();
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::ideal::{j_ideal, nguyen_ideal};
    use crate::slopes::tree_slopes;

    fn ray(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn rat(v: &[(i64, i64)]) -> Vec<BigRational> {
        v.iter()
            .map(|&(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d)))
            .collect()
    }

    #[test]
    fn orthant_cone() {
        let c = Cone::in_orthant(3, &[]);
        assert_eq!(c.rays, vec![ray(&[0, 0, 1]), ray(&[0, 1, 0]), ray(&[1, 0, 0])]);
        assert!(c.is_full_dimensional());
    }

    #[test]
    fn half_space_cut() {
        // x >= y in the quadrant
        let c = Cone::in_orthant(2, &[ray(&[1, -1])]);
        assert_eq!(c.rays, vec![ray(&[1, 0]), ray(&[1, 1])]);
    }

    #[test]
    fn fig71_subdivision_has_six_cones() {
        let g = fixtures::fig71();
        let s = tree_slopes(&g).unwrap();
        let fan = hyperplane_subdivision(&g, &s);
        assert_eq!(fan.dim, 3);
        assert_eq!(fan.cones.len(), 6);
        // each cone is an ordering chamber x_a >= x_b >= x_c
        for c in &fan.cones {
            assert!(c.is_full_dimensional());
        }
    }

    #[test]
    fn single_edge_tree_no_subdivision() {
        let g = fixtures::two_level(&[3]);
        // a two-level graph is not a slope-tree fixture, so build slopes
        // directly from the flat version
        let flat = crate::graph::EnhancedLevelGraph {
            vertices: g
                .vertices
                .iter()
                .map(|v| crate::graph::Vertex { level: 0, ..v.clone() })
                .collect(),
            legs: vec![
                crate::graph::Leg { vertex: 0, marking: 1, order: -1 },
                crate::graph::Leg { vertex: 0, marking: 2, order: -2 },
                crate::graph::Leg { vertex: 1, marking: 3, order: 1 },
                crate::graph::Leg { vertex: 1, marking: 4, order: 0 },
            ],
            edges: g.edges.clone(),
        };
        let s = tree_slopes(&flat).unwrap();
        let fan = hyperplane_subdivision(&flat, &s);
        assert_eq!(fan.cones.len(), 1);
        assert_eq!(fan.cones[0].rays, vec![ray(&[1])]);
    }

    #[test]
    fn fig1_subdivision_at_ray_2_1() {
        let g = fixtures::two_edge_slope_1_2();
        let s = tree_slopes(&g).unwrap();
        let fan = hyperplane_subdivision(&g, &s);
        assert_eq!(fan.cones.len(), 2);
        let mut all_rays: Vec<Vec<BigInt>> =
            fan.cones.iter().flat_map(|c| c.rays.clone()).collect();
        all_rays.sort();
        all_rays.dedup();
        assert_eq!(all_rays, vec![ray(&[0, 1]), ray(&[1, 0]), ray(&[2, 1])]);
    }

    #[test]
    fn newton_fan_of_x_y() {
        let vars = vec!["x".to_string(), "y".to_string()];
        let gens = vec![
            Monomial { exponents: vec![1u32.into(), 0u32.into()] },
            Monomial { exponents: vec![0u32.into(), 1u32.into()] },
        ];
        let fan = newton_fan(&MonomialIdeal::new(vars, gens)).unwrap();
        assert_eq!(fan.cones.len(), 2);
        let mut rays: Vec<_> = fan.cones.iter().flat_map(|c| c.rays.clone()).collect();
        rays.sort();
        rays.dedup();
        assert_eq!(rays, vec![ray(&[0, 1]), ray(&[1, 0]), ray(&[1, 1])]);
    }

    #[test]
    fn newton_fan_of_principal_is_orthant() {
        let vars = vec!["x".to_string(), "y".to_string()];
        let gens = vec![Monomial { exponents: vec![3u32.into(), 1u32.into()] }];
        let fan = newton_fan(&MonomialIdeal::new(vars, gens)).unwrap();
        assert_eq!(fan.cones.len(), 1);
        assert_eq!(fan.cones[0].rays, vec![ray(&[0, 1]), ray(&[1, 0])]);
    }

    #[test]
    fn lemma_73_at_desk_scale() {
        let g = fixtures::fig71();
        let s = tree_slopes(&g).unwrap();
        let newton = newton_fan(&j_ideal(&g, &s).unwrap()).unwrap();
        let hyper = hyperplane_subdivision(&g, &s);
        assert!(fans_equal(&newton, &hyper).unwrap());
    }

    #[test]
    fn refinement_directions() {
        let g = fixtures::fig71();
        let s = tree_slopes(&g).unwrap();
        let braid = hyperplane_subdivision(&g, &s);
        let orthant = Fan { dim: 3, cones: vec![Cone::in_orthant(3, &[])] };
        assert!(fan_refines(&braid, &orthant).unwrap());
        assert!(!fan_refines(&orthant, &braid).unwrap());
        assert!(fans_equal(&braid, &braid).unwrap());
    }

    #[test]
    fn nguyen_principal_on_blowup_fan() {
        let g = fixtures::fig71();
        let s = tree_slopes(&g).unwrap();
        let n = nguyen_ideal(&g, &s).unwrap();
        let fan = newton_fan(&j_ideal(&g, &s).unwrap()).unwrap();
        let (ok, witnesses) = is_locally_principal(&n, &fan).unwrap();
        assert!(ok);
        // on the chamber x3 >= x2 >= x1 the minimizer is d1 d2
        let chamber = fan
            .cones
            .iter()
            .position(|c| {
                c.rays.iter().all(|r| r[2] >= r[1] && r[1] >= r[0])
            })
            .unwrap();
        assert_eq!(
            witnesses[chamber].as_ref().unwrap().exponents,
            vec![1u32.into(), 1u32.into(), 0u32.into()]
        );
        // on the bare orthant the ideal is not principal
        let orthant = Fan { dim: 3, cones: vec![Cone::in_orthant(3, &[])] };
        let (ok, _) = is_locally_principal(&n, &orthant).unwrap();
        assert!(!ok);
    }

    #[test]
    fn principal_ideal_is_locally_principal_anywhere() {
        let vars = vec!["x".to_string(), "y".to_string(), "z".to_string()];
        let i = MonomialIdeal::new(
            vars,
            vec![Monomial { exponents: vec![2u32.into(), 0u32.into(), 5u32.into()] }],
        );
        let g = fixtures::fig71();
        let s = tree_slopes(&g).unwrap();
        let fan = hyperplane_subdivision(&g, &s);
        assert!(is_locally_principal(&i, &fan).unwrap().0);
    }

    #[test]
    fn newton_fan_translation_invariance() {
        let vars = vec!["x".to_string(), "y".to_string()];
        let i = MonomialIdeal::new(
            vars.clone(),
            vec![
                Monomial { exponents: vec![2u32.into(), 0u32.into()] },
                Monomial { exponents: vec![0u32.into(), 3u32.into()] },
            ],
        );
        let shifted = i
            .product(&MonomialIdeal::principal(
                vars,
                Monomial { exponents: vec![5u32.into(), 7u32.into()] },
            ))
            .unwrap();
        assert!(fans_equal(&newton_fan(&i).unwrap(), &newton_fan(&shifted).unwrap()).unwrap());
    }

    #[test]
    fn minkowski_refinement_law() {
        let vars = vec!["x".to_string(), "y".to_string()];
        let a = MonomialIdeal::new(
            vars.clone(),
            vec![
                Monomial { exponents: vec![1u32.into(), 0u32.into()] },
                Monomial { exponents: vec![0u32.into(), 1u32.into()] },
            ],
        );
        let b = MonomialIdeal::new(
            vars,
            vec![
                Monomial { exponents: vec![2u32.into(), 0u32.into()] },
                Monomial { exponents: vec![0u32.into(), 3u32.into()] },
            ],
        );
        let product_fan = newton_fan(&a.product(&b).unwrap()).unwrap();
        let refined = common_refinement(&newton_fan(&a).unwrap(), &newton_fan(&b).unwrap()).unwrap();
        assert!(fans_equal(&product_fan, &refined).unwrap());
    }

    #[test]
    fn fig1_lattice_indices() {
        let std_lattice = vec![rat(&[(1, 1), (0, 1)]), rat(&[(0, 1), (1, 1)])];
        let idx = cone_lattice_index(
            &[rat(&[(0, 1), (1, 1)]), rat(&[(2, 1), (1, 1)])],
            &std_lattice,
        )
        .unwrap();
        assert_eq!(idx, BigUint::from(2u32));

        // refined lattice Z + (1/2)Z with the stated primitive generators
        let refined = vec![rat(&[(1, 1), (0, 1)]), rat(&[(0, 1), (1, 2)])];
        let idx = cone_lattice_index(
            &[rat(&[(0, 1), (1, 2)]), rat(&[(1, 1), (1, 2)])],
            &refined,
        )
        .unwrap();
        assert_eq!(idx, BigUint::from(1u32));

        let idx = cone_lattice_index(
            &[rat(&[(1, 1), (0, 1)]), rat(&[(2, 1), (1, 1)])],
            &std_lattice,
        )
        .unwrap();
        assert_eq!(idx, BigUint::from(1u32));
    }

    #[test]
    fn degenerate_rays_are_rejected() {
        let std_lattice = vec![rat(&[(1, 1), (0, 1)]), rat(&[(0, 1), (1, 1)])];
        let err = cone_lattice_index(
            &[rat(&[(1, 1), (1, 1)]), rat(&[(2, 1), (2, 1)])],
            &std_lattice,
        )
        .unwrap_err();
        assert!(matches!(err, FanError::RankDeficientRays { .. }));
    }
}
