//! Count prong-matching classes two ways: the Smith-normal-form cokernel
//! order and a brute-force orbit enumeration.

use levelgraph_lab::fixtures;
use levelgraph_lab::torus::{
    brute_force_prong_orbits, count_prong_matching_classes, two_level_class_formula,
};

fn main() {
    for kappas in [vec![2u64, 2], vec![2, 3], vec![4, 6], vec![2, 4, 6]] {
        let g = fixtures::two_level(&kappas);
        let fast = count_prong_matching_classes(&g).unwrap();
        let slow = brute_force_prong_orbits(&g, 1_000_000).unwrap();
        let formula = two_level_class_formula(&kappas);
        println!(
            "two-level {kappas:?}: cokernel {fast}, orbits {slow}, prod/lcm {formula}"
        );
        assert_eq!(fast, slow);
        assert_eq!(fast, formula);
    }

    let g = fixtures::triangle(5);
    println!(
        "triangle(5): {} class(es)",
        count_prong_matching_classes(&g).unwrap()
    );
}
