//! Reusable plumbing behind the command-line binary: JSON graph ingestion
//! with structured errors, report types, and the batch property runs.

use crate::corpus::{enumerate_genus0_graphs, standard_mu_vectors, CorpusSpec};
use crate::fan::{fans_equal, hyperplane_subdivision, is_locally_principal, newton_fan};
use crate::graph::{EnhancedLevelGraph, StructuralError, Violation};
use crate::ideal::{equal_up_to_principal, j_ideal, nguyen_ideal};
use crate::slopes::tree_slopes;
use serde::Serialize;
use std::collections::HashSet;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed JSON at line {line}, column {column}: {message}")]
    Json { line: usize, column: usize, message: String },
    #[error(transparent)]
    Structure(#[from] StructuralError),
    #[error("graph violates admissibility: {0:?}")]
    Invalid(Vec<Violation>),
    #[error(transparent)]
    Corpus(#[from] crate::corpus::CorpusError),
    #[error("{0}")]
    Other(String),
}

/// Parse a graph from JSON text and run the structural checks. Validation
/// violations are reported separately so `validate` can print them all.
pub fn parse_graph(text: &str) -> Result<(EnhancedLevelGraph, Vec<Violation>), CliError> {
    let graph: EnhancedLevelGraph = serde_json::from_str(text).map_err(|e| CliError::Json {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let violations = graph.validate()?;
    Ok((graph, violations))
}

pub fn parse_graph_file(path: &str) -> Result<(EnhancedLevelGraph, Vec<Violation>), CliError> {
    let text = if path == "-" {
        use std::io::Read;
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|source| CliError::Io { path: path.into(), source })?;
        buf
    } else {
        std::fs::read_to_string(path)
            .map_err(|source| CliError::Io { path: path.into(), source })?
    };
    parse_graph(&text)
}

/// A parsed graph that passed all admissibility checks.
pub fn parse_valid_graph_file(path: &str) -> Result<EnhancedLevelGraph, CliError> {
    let (graph, violations) = parse_graph_file(path)?;
    if violations.is_empty() {
        Ok(graph)
    } else {
        Err(CliError::Invalid(violations))
    }
}

/// Brute-force state cap from the environment, default one million.
pub fn max_states() -> u64 {
    std::env::var("LEVELGRAPH_LAB_MAX_STATES")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(1_000_000)
}

/// One line of a property-suite report.
#[derive(Debug, Clone, Serialize)]
pub struct ReportLine {
    pub mu: Vec<i64>,
    pub graph: usize,
    pub edges: usize,
    pub check: String,
    pub pass: bool,
    /// JSON of the offending graph when the check fails
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<EnhancedLevelGraph>,
}

fn report(mu: &[i64], graph: usize, edges: usize, check: &str, pass: bool, g: &EnhancedLevelGraph) -> ReportLine {
    ReportLine {
        mu: mu.to_vec(),
        graph,
        edges,
        check: check.to_string(),
        pass,
        witness: if pass { None } else { Some(g.clone()) },
    }
}

/// The corpus a suite runs over: either one explicit mu vector or the
/// standard family, capped by edge count.
pub fn suite_corpus(
    mu: Option<Vec<i64>>,
    max_edges: usize,
) -> Result<Vec<(Vec<i64>, Vec<EnhancedLevelGraph>)>, CliError> {
    let mus = match mu {
        Some(m) => vec![m],
        None => standard_mu_vectors(),
    };
    let mut out = Vec::new();
    for mu in mus {
        let spec = CorpusSpec { n: mu.len(), mu: mu.clone(), max_edges };
        out.push((mu, enumerate_genus0_graphs(&spec)?));
    }
    Ok(out)
}

/// Lemma 7.2 suite: localizing the blowup ideal at an edge matches the
/// ideal of the contracted graph (up to a principal factor for J, exactly
/// for N).
pub fn run_check_gluing(
    corpus: &[(Vec<i64>, Vec<EnhancedLevelGraph>)],
    jobs: usize,
) -> Result<Vec<ReportLine>, CliError> {
    run_parallel(corpus, jobs, check_gluing_one)
}

fn check_gluing_one(mu: &[i64], idx: usize, g: &EnhancedLevelGraph) -> Result<Vec<ReportLine>, CliError> {
    let mut lines = Vec::new();
    let slopes = tree_slopes(g).map_err(|e| CliError::Other(e.to_string()))?;
    let j = j_ideal(g, &slopes).map_err(|e| CliError::Other(e.to_string()))?;
    let n = nguyen_ideal(g, &slopes).map_err(|e| CliError::Other(e.to_string()))?;
    for e in &g.edges {
        let contracted = g.contract_edges(&HashSet::from([e.id.clone()]));
        let s2 = tree_slopes(&contracted).map_err(|er| CliError::Other(er.to_string()))?;
        let j2 = j_ideal(&contracted, &s2)
            .and_then(|i| i.extend_vars(&j.vars))
            .map_err(|er| CliError::Other(er.to_string()))?;
        let ok = equal_up_to_principal(&j.localize(&e.id).unwrap(), &j2)
            .map_err(|er| CliError::Other(er.to_string()))?;
        lines.push(report(mu, idx, g.edges.len(), &format!("j-gluing/{}", e.id), ok, g));

        let n2 = nguyen_ideal(&contracted, &s2)
            .and_then(|i| i.extend_vars(&n.vars))
            .map_err(|er| CliError::Other(er.to_string()))?;
        let ok = n.localize(&e.id).unwrap() == n2;
        lines.push(report(mu, idx, g.edges.len(), &format!("nguyen-gluing/{}", e.id), ok, g));
    }
    Ok(lines)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FanLemma {
    /// Lemma 7.3: newton fan of J equals the hyperplane subdivision
    Equality,
    /// Prop. 7.4: N is locally principal on the blowup fan
    Principal,
}

pub fn run_fan_check(
    corpus: &[(Vec<i64>, Vec<EnhancedLevelGraph>)],
    lemma: FanLemma,
    jobs: usize,
) -> Result<Vec<ReportLine>, CliError> {
    run_parallel(corpus, jobs, move |mu, idx, g| fan_check_one(mu, idx, g, lemma))
}

fn fan_check_one(
    mu: &[i64],
    idx: usize,
    g: &EnhancedLevelGraph,
    lemma: FanLemma,
) -> Result<Vec<ReportLine>, CliError> {
    if g.edges.is_empty() {
        return Ok(vec![]);
    }
    let slopes = tree_slopes(g).map_err(|e| CliError::Other(e.to_string()))?;
    let j = j_ideal(g, &slopes).map_err(|e| CliError::Other(e.to_string()))?;
    let blowup = newton_fan(&j).map_err(|e| CliError::Other(e.to_string()))?;
    let (check, pass) = match lemma {
        FanLemma::Equality => {
            let hyper = hyperplane_subdivision(g, &slopes);
            ("fan-equality", fans_equal(&blowup, &hyper).map_err(|e| CliError::Other(e.to_string()))?)
        }
        FanLemma::Principal => {
            let n = nguyen_ideal(g, &slopes).map_err(|e| CliError::Other(e.to_string()))?;
            let (ok, _) =
                is_locally_principal(&n, &blowup).map_err(|e| CliError::Other(e.to_string()))?;
            ("local-principality", ok)
        }
    };
    Ok(vec![report(mu, idx, g.edges.len(), check, pass, g)])
}

/// Map a per-graph check over the corpus, optionally with worker threads;
/// results come back in corpus order either way.
fn run_parallel<F>(
    corpus: &[(Vec<i64>, Vec<EnhancedLevelGraph>)],
    jobs: usize,
    f: F,
) -> Result<Vec<ReportLine>, CliError>
where
    F: Fn(&[i64], usize, &EnhancedLevelGraph) -> Result<Vec<ReportLine>, CliError> + Sync,
{
    let tasks: Vec<(&Vec<i64>, usize, &EnhancedLevelGraph)> = corpus
        .iter()
        .flat_map(|(mu, graphs)| graphs.iter().enumerate().map(move |(i, g)| (mu, i, g)))
        .collect();
    let jobs = jobs.max(1);
    if jobs == 1 || tasks.len() < 2 {
        let mut out = Vec::new();
        for (mu, i, g) in tasks {
            out.extend(f(mu, i, g)?);
        }
        return Ok(out);
    }
    let results: Vec<Result<Vec<ReportLine>, CliError>> = std::thread::scope(|scope| {
        let chunk = tasks.len().div_ceil(jobs);
        let handles: Vec<_> = tasks
            .chunks(chunk)
            .map(|slice| {
                let f = &f;
                scope.spawn(move || {
                    slice
                        .iter()
                        .map(|(mu, i, g)| f(mu, *i, g))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().unwrap()).collect()
    });
    let mut out = Vec::new();
    for r in results {
        out.extend(r?);
    }
    Ok(out)
}
