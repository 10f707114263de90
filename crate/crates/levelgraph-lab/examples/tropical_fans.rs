//! Fans: the hyperplane subdivision of the orthant, the Newton fan of the
//! blowup ideal, their equality, and lattice indices of the Figure-1 cone.

use levelgraph_lab::fan::{
    cone_lattice_index, fans_equal, hyperplane_subdivision, is_locally_principal, newton_fan,
};
use levelgraph_lab::fixtures;
use levelgraph_lab::ideal::{j_ideal, nguyen_ideal};
use levelgraph_lab::slopes::tree_slopes;
use num_bigint::BigInt;
use num_rational::BigRational;

fn main() {
    let g = fixtures::fig71();
    let s = tree_slopes(&g).unwrap();
    let hyper = hyperplane_subdivision(&g, &s);
    println!("hyperplane subdivision: {} maximal cones", hyper.cones.len());
    let newton = newton_fan(&j_ideal(&g, &s).unwrap()).unwrap();
    println!("newton fan of J:        {} maximal cones", newton.cones.len());
    println!("fans equal: {}", fans_equal(&hyper, &newton).unwrap());

    let n = nguyen_ideal(&g, &s).unwrap();
    let (principal, _) = is_locally_principal(&n, &newton).unwrap();
    println!("N locally principal on the blowup fan: {principal}");

    // the quadrant split at (2, 1) and its lattice indices
    let g = fixtures::two_edge_slope_1_2();
    let s = tree_slopes(&g).unwrap();
    let fan = hyperplane_subdivision(&g, &s);
    for c in &fan.cones {
        println!("cone rays: {:?}", c.rays);
    }
    let rat = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
    let std_lattice = vec![vec![rat(1, 1), rat(0, 1)], vec![rat(0, 1), rat(1, 1)]];
    let idx = cone_lattice_index(
        &[vec![rat(0, 1), rat(1, 1)], vec![rat(2, 1), rat(1, 1)]],
        &std_lattice,
    )
    .unwrap();
    println!("index of cone (0,1),(2,1) in Z^2: {idx}");
    let refined = vec![vec![rat(1, 1), rat(0, 1)], vec![rat(0, 1), rat(1, 2)]];
    let idx = cone_lattice_index(
        &[vec![rat(0, 1), rat(1, 2)], vec![rat(1, 1), rat(1, 2)]],
        &refined,
    )
    .unwrap();
    println!("index after refining the lattice: {idx}");
}
