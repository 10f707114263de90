//! Build an enhanced level graph by hand, run the admissibility checks,
//! and show what a violation report looks like.

use levelgraph_lab::fixtures;

fn main() {
    let graph = fixtures::triangle(3);
    println!("triangle(3): {}", serde_json::to_string_pretty(&graph).unwrap());
    println!("violations: {:?}", graph.validate().unwrap());

    // breaking one enhancement breaks the degree equality at both ends
    let mut broken = graph.clone();
    broken.edges[2].kappa += 1;
    for v in broken.validate().unwrap() {
        println!("after bumping kappa(e3): {v}");
    }
}
