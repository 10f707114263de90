use clap::{Parser, Subcommand, ValueEnum};
use levelgraph_lab::cli::{
    self, max_states, parse_graph_file, parse_valid_graph_file, suite_corpus, CliError, FanLemma,
};
use levelgraph_lab::corpus::CorpusSpec;
use levelgraph_lab::fan::{hyperplane_subdivision, newton_fan, Fan};
use levelgraph_lab::ideal::{general_genus_j, j_ideal, local_maxima_ideal, nguyen_ideal};
use levelgraph_lab::monoid::{basic_monoid, relative_inertia};
use levelgraph_lab::slopes::tree_slopes;
use levelgraph_lab::torus::{
    brute_force_prong_orbits, count_prong_matching_classes, quotient_map_exponents, twist_groups,
};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use serde_json::json;

#[derive(Parser)]
#[command(name = "levelgraph-lab", version, about = "Exact combinatorics of enhanced level graphs")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Output::Json)]
    output: Output,
    /// Worker threads for batch commands
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// Seed for corpus subsampling (--sample)
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Output {
    Json,
    Table,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum IdealScheme {
    J,
    Nguyen,
    GeneralJ,
    LocalMaxima,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FanMethod {
    Newton,
    Hyperplane,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Lemma {
    Equality,
    Principal,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check a graph against the admissibility conditions
    Validate { graph: String },
    /// Multidegrees and the unique admissible slope function of a tree
    Slopes { graph: String },
    /// Twist group, its simple subgroup, and the quotient K
    Twist { graph: String },
    /// Number of prong-matching classes, with a brute-force cross-check
    Prongs { graph: String },
    /// Basic monoid presentation and relative inertia
    Monoid { graph: String },
    /// Monomial ideals attached to the graph
    Ideal {
        #[arg(long, value_enum)]
        scheme: IdealScheme,
        graph: String,
    },
    /// Fan of the graph: blowup (newton) or hyperplane subdivision
    Fan {
        #[arg(long, value_enum)]
        method: FanMethod,
        graph: String,
    },
    /// Lemma 7.2-style gluing property over an enumerated corpus
    CheckGluing {
        /// Explicit order vector; default runs the standard family
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        mu: Option<Vec<i64>>,
        #[arg(long, default_value_t = 5)]
        max_edges: usize,
        /// Randomly subsample this many graphs per mu (seeded)
        #[arg(long)]
        sample: Option<usize>,
    },
    /// Fan comparison or principality property over an enumerated corpus
    FanCheck {
        #[arg(long, value_enum)]
        lemma: Lemma,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        mu: Option<Vec<i64>>,
        #[arg(long, default_value_t = 4)]
        max_edges: usize,
        #[arg(long)]
        sample: Option<usize>,
    },
    /// Enumerate stable genus-zero leveled trees for an order vector
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        mu: Vec<i64>,
        #[arg(long, default_value_t = 5)]
        max_edges: usize,
    },
}

fn main() {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(2);
        }
    }
}

fn emit(output: Output, value: &serde_json::Value) {
    match output {
        Output::Json => println!("{}", serde_json::to_string_pretty(value).unwrap()),
        Output::Table => {
            let mut lines = Vec::new();
            flatten("", value, &mut lines);
            for (k, v) in lines {
                println!("{k} = {v}");
            }
        }
    }
}

fn flatten(prefix: &str, value: &serde_json::Value, out: &mut Vec<(String, String)>) {
    match value {
        serde_json::Value::Object(map) => {
            for (k, v) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, v, out);
            }
        }
        serde_json::Value::Array(items)
            if items.iter().any(|i| i.is_object() || i.is_array()) =>
        {
            for (i, v) in items.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), v, out);
            }
        }
        other => out.push((prefix.to_string(), other.to_string())),
    }
}

fn fan_json(fan: &Fan) -> serde_json::Value {
    let identity: Vec<Vec<String>> = (0..fan.dim)
        .map(|i| (0..fan.dim).map(|j| if i == j { "1".into() } else { "0".into() }).collect())
        .collect();
    json!({
        "dim": fan.dim,
        "lattice": identity,
        "cones": fan
            .cones
            .iter()
            .map(|c| {
                json!({
                    "rays": c
                        .rays
                        .iter()
                        .map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>())
                        .collect::<Vec<_>>()
                })
            })
            .collect::<Vec<_>>(),
    })
}

fn subsample(
    corpus: Vec<(Vec<i64>, Vec<levelgraph_lab::graph::EnhancedLevelGraph>)>,
    sample: Option<usize>,
    seed: u64,
) -> Vec<(Vec<i64>, Vec<levelgraph_lab::graph::EnhancedLevelGraph>)> {
    let Some(k) = sample else { return corpus };
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    corpus
        .into_iter()
        .map(|(mu, mut graphs)| {
            graphs.shuffle(&mut rng);
            graphs.truncate(k);
            // restore a deterministic order after sampling
            graphs.sort_by_key(|g| g.canonical_form());
            (mu, graphs)
        })
        .collect()
}

fn suite_exit(output: Output, lines: &[cli::ReportLine]) -> i32 {
    let mut all_pass = true;
    for line in lines {
        all_pass &= line.pass;
        match output {
            Output::Json => {
                println!("{}", serde_json::to_string(line).unwrap());
            }
            Output::Table => {
                println!(
                    "{} mu={:?} graph={} {}",
                    if line.pass { "PASS" } else { "FAIL" },
                    line.mu,
                    line.graph,
                    line.check
                );
            }
        }
    }
    i32::from(!all_pass)
}

fn run(cli: &Cli) -> Result<i32, CliError> {
    match &cli.cmd {
        Cmd::Validate { graph } => {
            let (_, violations) = parse_graph_file(graph)?;
            let ok = violations.is_empty();
            emit(cli.output, &json!({
                "valid": ok,
                "violations": violations.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
            }));
            Ok(i32::from(!ok))
        }
        Cmd::Slopes { graph } => {
            let (g, _) = parse_graph_file(graph)?;
            let s = tree_slopes(&g).map_err(|e| CliError::Other(e.to_string()))?;
            emit(cli.output, &serde_json::to_value(&s).unwrap());
            Ok(0)
        }
        Cmd::Twist { graph } => {
            let g = parse_valid_graph_file(graph)?;
            let tw = twist_groups(&g).map_err(|e| CliError::Other(e.to_string()))?;
            let q = quotient_map_exponents(&g).map_err(|e| CliError::Other(e.to_string()))?;
            let rows = |m: &Vec<Vec<num_bigint::BigInt>>| -> Vec<Vec<String>> {
                m.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect()
            };
            emit(cli.output, &json!({
                "a": tw.a,
                "tw_basis": rows(&tw.tw_basis),
                "stw_basis": rows(&tw.stw_basis),
                "K": tw.quotient.invariant_factors.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
                "quotient_map": {
                    "passages": q.passages,
                    "level_rows": rows(&q.level_rows),
                    "edge_rows": q
                        .edge_rows
                        .iter()
                        .map(|(id, r)| {
                            json!({"edge": id, "exponents": r.iter().map(|x| x.to_string()).collect::<Vec<_>>()})
                        })
                        .collect::<Vec<_>>(),
                },
            }));
            Ok(0)
        }
        Cmd::Prongs { graph } => {
            let g = parse_valid_graph_file(graph)?;
            let count = count_prong_matching_classes(&g).map_err(|e| CliError::Other(e.to_string()))?;
            let tw = twist_groups(&g).map_err(|e| CliError::Other(e.to_string()))?;
            let brute = brute_force_prong_orbits(&g, max_states());
            if let Some(b) = &brute {
                if *b != count {
                    return Err(CliError::Other(format!(
                        "brute-force orbit count {b} disagrees with cokernel order {count}"
                    )));
                }
            }
            emit(cli.output, &json!({
                "pm_classes": count.to_string(),
                "K": tw.quotient.invariant_factors.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
                "brute_force_checked": brute.is_some(),
            }));
            Ok(0)
        }
        Cmd::Monoid { graph } => {
            let g = parse_valid_graph_file(graph)?;
            let pres = basic_monoid(&g).map_err(|e| CliError::Other(e.to_string()))?;
            let inertia = relative_inertia(&g).map_err(|e| CliError::Other(e.to_string()))?;
            let g_rows: Vec<Vec<String>> = (0..pres.g_matrix.nrows())
                .map(|r| {
                    (0..pres.g_matrix.ncols())
                        .map(|c| pres.g_matrix.get(r, c).to_string())
                        .collect()
                })
                .collect();
            emit(cli.output, &json!({
                "passages": pres.passages,
                "vertical_edges": pres.vertical_edge_ids,
                "horizontal_generators": pres.horizontal_generators,
                "g_matrix": g_rows,
                "beta": pres
                    .beta
                    .iter()
                    .map(|(v, vec)| {
                        (v.to_string(), vec.iter().map(|x| x.to_string()).collect::<Vec<_>>())
                    })
                    .collect::<std::collections::BTreeMap<_, _>>(),
                "relative_inertia": inertia.invariant_factors.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
            }));
            Ok(0)
        }
        Cmd::Ideal { scheme, graph } => {
            let g = parse_valid_graph_file(graph)?;
            let ideal = match scheme {
                IdealScheme::J | IdealScheme::Nguyen => {
                    let s = tree_slopes(&g).map_err(|e| CliError::Other(e.to_string()))?;
                    match scheme {
                        IdealScheme::J => j_ideal(&g, &s),
                        _ => nguyen_ideal(&g, &s),
                    }
                    .map_err(|e| CliError::Other(e.to_string()))?
                }
                IdealScheme::GeneralJ => {
                    general_genus_j(&g).map_err(|e| CliError::Other(e.to_string()))?
                }
                IdealScheme::LocalMaxima => local_maxima_ideal(&g),
            };
            emit(cli.output, &json!({
                "vars": ideal.vars,
                "generators": ideal
                    .gens
                    .iter()
                    .map(|m| m.exponents.iter().map(|e| e.to_string()).collect::<Vec<_>>())
                    .collect::<Vec<_>>(),
            }));
            Ok(0)
        }
        Cmd::Fan { method, graph } => {
            let g = parse_valid_graph_file(graph)?;
            let s = tree_slopes(&g).map_err(|e| CliError::Other(e.to_string()))?;
            let fan = match method {
                FanMethod::Hyperplane => hyperplane_subdivision(&g, &s),
                FanMethod::Newton => {
                    let j = j_ideal(&g, &s).map_err(|e| CliError::Other(e.to_string()))?;
                    newton_fan(&j).map_err(|e| CliError::Other(e.to_string()))?
                }
            };
            emit(cli.output, &fan_json(&fan));
            Ok(0)
        }
        Cmd::CheckGluing { mu, max_edges, sample } => {
            let corpus = subsample(suite_corpus(mu.clone(), *max_edges)?, *sample, cli.seed);
            let lines = cli::run_check_gluing(&corpus, cli.jobs)?;
            Ok(suite_exit(cli.output, &lines))
        }
        Cmd::FanCheck { lemma, mu, max_edges, sample } => {
            let corpus = subsample(suite_corpus(mu.clone(), *max_edges)?, *sample, cli.seed);
            let lemma = match lemma {
                Lemma::Equality => FanLemma::Equality,
                Lemma::Principal => FanLemma::Principal,
            };
            let lines = cli::run_fan_check(&corpus, lemma, cli.jobs)?;
            Ok(suite_exit(cli.output, &lines))
        }
        Cmd::Enumerate { n, mu, max_edges } => {
            let spec = CorpusSpec { n: *n, mu: mu.clone(), max_edges: *max_edges };
            let graphs = levelgraph_lab::corpus::enumerate_genus0_graphs(&spec)?;
            for g in &graphs {
                println!("{}", serde_json::to_string(g).unwrap());
            }
            eprintln!("{} graphs", graphs.len());
            Ok(0)
        }
    }
}
