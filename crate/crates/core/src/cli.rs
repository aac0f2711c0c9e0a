//! Command-line surface: load graph files, run the computations, emit
//! machine-readable (JSON) and human-readable results.
//!
//! Exit codes: 0 success, 1 validation/parse error, 2 internal
//! inconsistency.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde_json::{json, Map, Value};

use crate::gkmgraph::{GkmGraph, Severity};
use crate::graphcohomology::{
    cohomology_slice, cohomology_slices, extract_generators, rational_dimension, span_slice,
    GradedSubmodule,
};
use crate::intlinalg::quotient_with_lifts;
use crate::recursion::{exactness_report, hhat, run_pipeline, Memo};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Text,
}

#[derive(Clone, Debug)]
pub struct RunOptions {
    pub hhat: bool,
    pub mod_n: u64,
    /// cohomological degree bound (even); defaults to 2·max valence
    pub max_degree: Option<u32>,
    pub format: OutputFormat,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            hhat: false,
            mod_n: 1,
            max_degree: None,
            format: OutputFormat::Json,
        }
    }
}

pub struct CommandOutput {
    pub exit_code: i32,
    pub document: String,
}

pub fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::Parse(_) | Error::Validation(_) => 1,
        _ => 2,
    }
}

fn poly_degree_bound(g: &GkmGraph, opts: &RunOptions) -> Result<u32> {
    match opts.max_degree {
        Some(deg) => {
            if deg % 2 != 0 {
                return Err(Error::Validation(format!(
                    "--max-degree must be even (cohomological degree), got {}",
                    deg
                )));
            }
            Ok(deg / 2)
        }
        None => Ok(g.max_valence() as u32),
    }
}

fn validation_failure(g: &GkmGraph) -> Option<CommandOutput> {
    let diags = g.validate();
    if diags.iter().any(|d| d.severity == Severity::Error) {
        let doc = serde_json::to_string_pretty(&json!({
            "error": "validation failed",
            "diagnostics": diags,
        }))
        .expect("diagnostics serialize");
        Some(CommandOutput {
            exit_code: 1,
            document: doc,
        })
    } else {
        None
    }
}

fn coeff_value(c: &BigInt) -> Value {
    match c.to_i64() {
        Some(v) => json!(v),
        None => json!(c.to_string()),
    }
}

fn generators_json(g: &GkmGraph, m: &GradedSubmodule) -> Value {
    let gens: Vec<Value> = m
        .generators
        .iter()
        .map(|(gv, d)| {
            let mut verts = Map::new();
            for (v, poly) in gv.values.iter().enumerate() {
                if poly.is_zero() {
                    continue;
                }
                let mut terms = Map::new();
                for (mono, c) in &poly.0 {
                    let key = mono
                        .0
                        .iter()
                        .map(|e| e.to_string())
                        .collect::<Vec<_>>()
                        .join(" ");
                    terms.insert(key, coeff_value(c));
                }
                verts.insert(g.vertices[v].clone(), Value::Object(terms));
            }
            json!({ "degree": 2 * d, "vertices": Value::Object(verts) })
        })
        .collect();
    Value::Array(gens)
}

fn generators_text(g: &GkmGraph, m: &GradedSubmodule, out: &mut String) {
    for (gv, d) in &m.generators {
        let _ = writeln!(out, "generator (cohomological degree {}):", 2 * d);
        for (v, poly) in gv.values.iter().enumerate() {
            if poly.is_zero() {
                continue;
            }
            let terms: Vec<String> = poly
                .0
                .iter()
                .map(|(mono, c)| format!("{}·{}", c, mono))
                .collect();
            let _ = writeln!(out, "  {}: {}", g.vertices[v], terms.join(" + "));
        }
    }
}

/// `compute`: emit the minimal graded generators of H*_{T/T_n}(Γ_n) or,
/// with the hhat flag, of the modified module at node n.
pub fn cmd_compute(g: &GkmGraph, opts: &RunOptions) -> Result<CommandOutput> {
    if let Some(fail) = validation_failure(g) {
        return Ok(fail);
    }
    let max_d = poly_degree_bound(g, opts)?;
    let (slices, module) = if opts.hhat {
        let mut memo = Memo::new();
        let module = hhat(g, opts.mod_n, max_d, &mut memo)?;
        let (slices, _) = memo
            .get(&opts.mod_n)
            .cloned()
            .ok_or_else(|| Error::Internal("memo missing computed node".into()))?;
        (slices, module)
    } else {
        let slices = cohomology_slices(g, opts.mod_n, max_d)?;
        let module = extract_generators(&slices, opts.mod_n, g)?;
        (slices, module)
    };
    let cert = slices
        .iter()
        .enumerate()
        .all(|(d, s)| s.rank() as u64 == module.hilbert_rank(d as u32));
    let mut warnings: Vec<String> = g
        .validate()
        .iter()
        .filter(|d| d.severity == Severity::Warning)
        .map(|d| d.message.clone())
        .collect();
    if !cert {
        warnings.push(format!(
            "slice ranks disagree with the free-module prediction at the degree \
             bound {}; generators may be incomplete",
            2 * max_d
        ));
    }
    for d in &module.torsion_degrees {
        warnings.push(format!(
            "torsion quotient at cohomological degree {} — module not free",
            2 * d
        ));
    }
    let document = match opts.format {
        OutputFormat::Json => serde_json::to_string_pretty(&json!({
            "ring_modulus": opts.mod_n,
            "modified": opts.hhat,
            "max_degree": 2 * max_d,
            "generators": generators_json(g, &module),
            "freeness": module.freeness,
            "hilbert_certificate": cert,
            "warnings": warnings,
        }))
        .expect("document serializes"),
        OutputFormat::Text => {
            let mut out = String::new();
            let _ = writeln!(
                out,
                "{} over R_{} up to cohomological degree {}",
                if opts.hhat {
                    "modified graph cohomology"
                } else {
                    "graph cohomology"
                },
                opts.mod_n,
                2 * max_d
            );
            generators_text(g, &module, &mut out);
            let _ = writeln!(out, "hilbert certificate: {}", cert);
            for w in &warnings {
                let _ = writeln!(out, "warning: {}", w);
            }
            out
        }
    };
    Ok(CommandOutput {
        exit_code: 0,
        document,
    })
}

/// `report`: exactness verdict, divisor tree and per-degree indices.
pub fn cmd_report(g: &GkmGraph, opts: &RunOptions) -> Result<CommandOutput> {
    if let Some(fail) = validation_failure(g) {
        return Ok(fail);
    }
    let max_d = poly_degree_bound(g, opts)?;
    let rep = exactness_report(g, max_d)?;
    let warnings: Vec<String> = g
        .validate()
        .iter()
        .filter(|d| d.severity == Severity::Warning)
        .map(|d| d.message.clone())
        .chain(rep.result.warnings.iter().cloned())
        .collect();
    let tree: Vec<Value> = rep
        .tree
        .iter()
        .map(|n| {
            json!({
                "n": n.n,
                "relevant_primes": n.relevant_primes.iter().collect::<Vec<_>>(),
            })
        })
        .collect();
    let degrees: Vec<Value> = rep
        .degrees
        .iter()
        .map(|d| {
            json!({
                "degree": d.degree,
                "equal": d.equal,
                "index": d.index.as_ref().map(coeff_value).unwrap_or(Value::Null),
            })
        })
        .collect();
    let document = serde_json::to_string_pretty(&json!({
        "exact": rep.exact,
        "first_disagreement_degree": rep.first_disagreement,
        "divisor_tree": tree,
        "degrees": degrees,
        "warnings": warnings,
    }))
    .expect("document serializes");
    Ok(CommandOutput {
        exit_code: 0,
        document,
    })
}

#[derive(Clone, Debug)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &str, passed: bool, detail: String) -> Check {
    Check {
        name: name.to_string(),
        passed,
        detail,
    }
}

/// The full invariant suite on one graph, used by `check` and exposed for
/// the test harness.
pub fn run_checks(g: &GkmGraph, max_d: u32) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let res = run_pipeline(g, max_d)?;
    let tree_primes: Vec<u64> = res
        .tree
        .iter()
        .flat_map(|n| n.relevant_primes.iter().copied())
        .collect();

    // rank of every integral slice equals the rational dimension
    let mut rank_ok = true;
    let mut rank_detail = String::new();
    for node in &res.tree {
        for d in 0..=max_d.min(5) {
            let lat = cohomology_slice(g, node.n, d)?;
            let dim = rational_dimension(g, node.n, d)?;
            if lat.rank() != dim {
                rank_ok = false;
                let _ = write!(rank_detail, "n={} d={}: {} vs {}; ", node.n, d, lat.rank(), dim);
            }
        }
    }
    out.push(check("rational-rank-equality", rank_ok, rank_detail));

    // Ĥ ⊆ H with equal rank, and index supported on divisor-tree primes
    let mut cont_ok = true;
    let mut cont_detail = String::new();
    for node in &res.nodes {
        for d in 0..=max_d {
            let h = span_slice(&node.h, node.n, d)?;
            let hh = span_slice(&node.hhat, node.n, d)?;
            if !h.contains(&hh)? || h.rank() != hh.rank() {
                cont_ok = false;
                let _ = write!(cont_detail, "containment/rank at n={} d={}; ", node.n, d);
                continue;
            }
            let (_, factors) = quotient_with_lifts(&hh, &h)?;
            for f in factors {
                let mut rem = f;
                for &p in &tree_primes {
                    let bp = BigInt::from(p);
                    while (&rem % &bp).is_zero() {
                        rem /= &bp;
                    }
                }
                if !rem.is_one() {
                    cont_ok = false;
                    let _ = write!(
                        cont_detail,
                        "index factor off the divisor-tree primes at n={} d={}; ",
                        node.n, d
                    );
                }
            }
        }
    }
    out.push(check("hhat-containment-and-index", cont_ok, cont_detail));

    // Hilbert certificate per node
    let cert_ok = res.nodes.iter().all(|n| n.hilbert_certificate);
    out.push(check(
        "hilbert-certificate",
        cert_ok,
        res.nodes
            .iter()
            .filter(|n| !n.hilbert_certificate)
            .map(|n| format!("n={}; ", n.n))
            .collect(),
    ));

    // extraction self-consistency: generator spans reproduce the slices
    let mut span_ok = true;
    let mut span_detail = String::new();
    for node in &res.nodes {
        let slices = cohomology_slices(g, node.n, max_d)?;
        for (d, slice) in slices.iter().enumerate() {
            let rebuilt = span_slice(&node.h, node.n, d as u32)?;
            if rebuilt != *slice {
                span_ok = false;
                let _ = write!(span_detail, "n={} d={}; ", node.n, d);
            }
        }
    }
    out.push(check("extraction-self-consistency", span_ok, span_detail));

    // brute-force oracle where it applies: two vertices, monomial weights
    let monomial_weights = g
        .edges
        .iter()
        .all(|e| e.weight.entries().iter().filter(|&&x| x != 0).count() == 1);
    if g.vertex_count() == 2 && !g.edges.is_empty() && monomial_weights {
        let mut oracle_ok = true;
        let mut oracle_detail = String::new();
        for node in &res.tree {
            for d in 1..=max_d.min(4) {
                let lat = cohomology_slice(g, node.n, d)?;
                let expected = crate::graphcohomology::oracle::two_vertex_oracle(g, node.n, d);
                if lat != expected {
                    oracle_ok = false;
                    let _ = write!(oracle_detail, "n={} d={}; ", node.n, d);
                }
            }
        }
        out.push(check("two-vertex-lcm-oracle", oracle_ok, oracle_detail));
    }
    Ok(out)
}

/// `check`: run the invariant suite; exit 0 iff everything passes.
pub fn cmd_check(g: &GkmGraph, opts: &RunOptions) -> Result<CommandOutput> {
    let diags = g.validate();
    let mut out = String::new();
    let mut failed = false;
    for d in &diags {
        match d.severity {
            Severity::Error => {
                failed = true;
                let _ = writeln!(out, "FAIL validation: {}", d.message);
            }
            Severity::Warning => {
                let _ = writeln!(out, "warning: {}", d.message);
            }
            Severity::Info => {
                let _ = writeln!(out, "note: {}", d.message);
            }
        }
    }
    if failed {
        return Ok(CommandOutput {
            exit_code: 1,
            document: out,
        });
    }
    let max_d = poly_degree_bound(g, opts)?;
    for c in run_checks(g, max_d)? {
        if c.passed {
            let _ = writeln!(out, "ok {}", c.name);
        } else {
            failed = true;
            let _ = writeln!(out, "FAIL {}: {}", c.name, c.detail);
        }
    }
    Ok(CommandOutput {
        exit_code: if failed { 1 } else { 0 },
        document: out,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gkmgraph::{Edge, Weight};

    fn s2() -> GkmGraph {
        GkmGraph::new(
            1,
            vec!["N".into(), "S".into()],
            vec![Edge {
                a: 0,
                b: 1,
                weight: Weight::new(vec![1]),
            }],
        )
    }

    fn s6() -> GkmGraph {
        GkmGraph::new(
            3,
            vec!["N".into(), "S".into()],
            vec![
                Edge { a: 0, b: 1, weight: Weight::new(vec![4, 0, 0]) },
                Edge { a: 0, b: 1, weight: Weight::new(vec![0, 4, 0]) },
                Edge { a: 0, b: 1, weight: Weight::new(vec![0, 0, 6]) },
            ],
        )
    }

    #[test]
    fn compute_s2_hhat() {
        let opts = RunOptions {
            hhat: true,
            max_degree: Some(2),
            ..Default::default()
        };
        let out = cmd_compute(&s2(), &opts).unwrap();
        assert_eq!(out.exit_code, 0);
        let doc: serde_json::Value = serde_json::from_str(&out.document).unwrap();
        let gens = doc["generators"].as_array().unwrap();
        assert_eq!(gens.len(), 2);
        assert_eq!(gens[0]["degree"], 0);
        assert_eq!(gens[1]["degree"], 2);
        assert_eq!(gens[1]["vertices"]["S"]["1"], 1);
    }

    #[test]
    fn compute_s6_hhat() {
        let opts = RunOptions {
            hhat: true,
            max_degree: Some(8),
            ..Default::default()
        };
        let out = cmd_compute(&s6(), &opts).unwrap();
        let doc: serde_json::Value = serde_json::from_str(&out.document).unwrap();
        let gens = doc["generators"].as_array().unwrap();
        assert_eq!(gens.len(), 2);
        assert_eq!(gens[1]["degree"], 6);
        assert_eq!(gens[1]["vertices"]["S"]["1 1 1"], 96);
    }

    #[test]
    fn compute_mod_n_leaf() {
        let opts = RunOptions {
            mod_n: 4,
            max_degree: Some(4),
            ..Default::default()
        };
        let out = cmd_compute(&s6(), &opts).unwrap();
        let doc: serde_json::Value = serde_json::from_str(&out.document).unwrap();
        let gens = doc["generators"].as_array().unwrap();
        assert_eq!(gens.len(), 2);
        assert_eq!(gens[1]["degree"], 4);
        assert_eq!(gens[1]["vertices"]["S"]["1 1 0"], 16);
    }

    #[test]
    fn report_s6() {
        let opts = RunOptions {
            max_degree: Some(8),
            ..Default::default()
        };
        let out = cmd_report(&s6(), &opts).unwrap();
        let doc: serde_json::Value = serde_json::from_str(&out.document).unwrap();
        assert_eq!(doc["exact"], false);
        assert_eq!(doc["first_disagreement_degree"], 6);
        let tree: Vec<u64> = doc["divisor_tree"]
            .as_array()
            .unwrap()
            .iter()
            .map(|n| n["n"].as_u64().unwrap())
            .collect();
        assert_eq!(tree, vec![1, 2, 4]);
        assert_eq!(doc["degrees"][3]["index"], 8);
    }

    #[test]
    fn check_zero_weight_fails() {
        let g = GkmGraph::new(
            1,
            vec!["a".into(), "b".into()],
            vec![Edge {
                a: 0,
                b: 1,
                weight: Weight::new(vec![0]),
            }],
        );
        let out = cmd_check(&g, &RunOptions::default()).unwrap();
        assert_eq!(out.exit_code, 1);
        assert!(out.document.contains("zero weight"));
    }

    #[test]
    fn check_fixture_passes() {
        let out = cmd_check(&s6(), &RunOptions { max_degree: Some(8), ..Default::default() })
            .unwrap();
        assert_eq!(out.exit_code, 0, "{}", out.document);
    }

    #[test]
    fn odd_max_degree_rejected() {
        let opts = RunOptions {
            max_degree: Some(3),
            ..Default::default()
        };
        assert!(cmd_compute(&s2(), &opts).is_err());
    }
}
