//! Enumerate all stable genus-zero leveled trees for an order vector and
//! summarize them.

use levelgraph_lab::corpus::{enumerate_genus0_graphs, CorpusSpec};

fn main() {
    for mu in [vec![-1i64, -1, -1, 1], vec![-1, -1, -1, -1, 2]] {
        let spec = CorpusSpec { n: mu.len(), mu: mu.clone(), max_edges: 5 };
        let graphs = enumerate_genus0_graphs(&spec).unwrap();
        println!("mu = {mu:?}: {} graphs", graphs.len());
        for g in &graphs {
            let levels = 1 - g.vertices.iter().map(|v| v.level).min().unwrap();
            println!(
                "  {} vertices, {} edges, {} level(s), kappas {:?}",
                g.vertices.len(),
                g.edges.len(),
                levels,
                g.edges.iter().map(|e| e.kappa).collect::<Vec<_>>()
            );
        }
    }
}
