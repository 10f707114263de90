//! The monomial ideals of the star graph with six simple poles: the blowup
//! ideal J, Nguyen's ideal N, and their behaviour under localization.

use levelgraph_lab::fixtures;
use levelgraph_lab::ideal::{equal_up_to_principal, j_ideal, nguyen_ideal};
use levelgraph_lab::slopes::tree_slopes;
use std::collections::HashSet;

fn main() {
    let g = fixtures::fig71();
    let s = tree_slopes(&g).unwrap();

    let j = j_ideal(&g, &s).unwrap();
    println!("J generators over {:?}:", j.vars);
    for m in &j.gens {
        println!("  {:?}", m.exponents);
    }

    let n = nguyen_ideal(&g, &s).unwrap();
    println!("N generators:");
    for m in &n.gens {
        println!("  {:?}", m.exponents);
    }

    // gluing: localizing at an edge matches the ideal of the contraction
    let contracted = g.contract_edges(&HashSet::from(["e3".to_string()]));
    let s2 = tree_slopes(&contracted).unwrap();
    let j2 = j_ideal(&contracted, &s2).unwrap().extend_vars(&j.vars).unwrap();
    println!(
        "localize(J, e3) ~ J(contracted): {}",
        equal_up_to_principal(&j.localize("e3").unwrap(), &j2).unwrap()
    );
}
