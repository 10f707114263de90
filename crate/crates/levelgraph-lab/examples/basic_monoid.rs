//! The basic monoid presentation of a level graph: the edge map g, the
//! beta-values, the PL-function checks, and the relative inertia group.

use levelgraph_lab::fixtures;
use levelgraph_lab::monoid::{basic_monoid, basic_pl, relative_inertia, validate_pl};

fn main() {
    let g = fixtures::triangle(3);
    let pres = basic_monoid(&g).unwrap();
    println!("passages: {:?}", pres.passages);
    for id in &pres.vertical_edge_ids {
        println!("g({id}) = {:?}", pres.g_column(id).unwrap());
    }
    for (v, beta) in &pres.beta {
        println!("beta(v{v}) = {beta:?}");
    }

    // the presentation's own beta is a valid PL function with lengths g(e)
    let (pl, lengths) = basic_pl(&g, &pres);
    println!("PL violations: {:?}", validate_pl(&g, &pl, &lengths));

    println!(
        "relative inertia: {:?}",
        relative_inertia(&g).unwrap().invariant_factors
    );
}
