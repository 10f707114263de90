//! Twist group, simple twist group, and the finite quotient K for the
//! three-level triangle graph, for several enhancements n.

use levelgraph_lab::fixtures;
use levelgraph_lab::torus::{quotient_map_exponents, twist_groups};

fn main() {
    for n in [2u64, 3, 5] {
        let g = fixtures::triangle(n);
        let tw = twist_groups(&g).unwrap();
        println!("triangle({n}):");
        println!("  per-passage lcms a = {:?}", tw.a);
        println!("  Tw basis  = {:?}", tw.tw_basis);
        println!("  sTw basis = {:?}", tw.stw_basis);
        println!("  K = Tw/sTw invariant factors = {:?}", tw.quotient.invariant_factors);
    }

    // the monomial exponents of the quotient map (t, t') -> (s_i, f_e)
    let q = quotient_map_exponents(&fixtures::triangle(3)).unwrap();
    println!("\nquotient map for n = 3 (rows over passages {:?}):", q.passages);
    for (row, p) in q.level_rows.iter().zip(&q.passages) {
        println!("  s_{p} exponents {row:?}");
    }
    for (id, row) in &q.edge_rows {
        println!("  f_{id} exponents {row:?}");
    }
}
