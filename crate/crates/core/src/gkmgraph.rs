//! The combinatorial input object (Γ, α): parsing, validation, the
//! subgraphs Γ_n and the divisor bookkeeping that drives the recursion.

use std::collections::BTreeSet;

use num_integer::Integer;
use serde::Deserialize;

use crate::{Error, Result};

/// An edge weight: an integer vector in ℤ^r, defined up to global sign.
/// Stored sign-normalized (first nonzero entry positive) so that equal
/// weights compare equal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Weight(Vec<i64>);

impl Weight {
    pub fn new(mut v: Vec<i64>) -> Self {
        if let Some(first) = v.iter().find(|&&x| x != 0) {
            if *first < 0 {
                for x in v.iter_mut() {
                    *x = -*x;
                }
            }
        }
        Weight(v)
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    /// gcd of the entries; 0 for the zero vector.
    pub fn content(&self) -> u64 {
        self.0
            .iter()
            .fold(0u64, |acc, &x| acc.gcd(&x.unsigned_abs()))
    }
}

#[derive(Clone, Debug)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    pub weight: Weight,
}

#[derive(Clone, Debug)]
pub struct GkmGraph {
    pub rank: usize,
    pub vertices: Vec<String>,
    pub edges: Vec<Edge>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
    Info,
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub message: String,
}

/// A node of the divisor tree: modulus n and the primes p for which np
/// divides the weights of two distinct adjacent edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorNode {
    pub n: u64,
    pub relevant_primes: BTreeSet<u64>,
}

#[derive(Deserialize)]
struct GraphFile {
    rank: usize,
    vertices: Vec<String>,
    edges: Vec<EdgeFile>,
}

#[derive(Deserialize)]
struct EdgeFile {
    ends: [String; 2],
    weight: Vec<i64>,
}

impl GkmGraph {
    pub fn new(rank: usize, vertices: Vec<String>, edges: Vec<Edge>) -> Self {
        GkmGraph {
            rank,
            vertices,
            edges,
        }
    }

    /// Parse the stable JSON graph format. Errors cite the offending field
    /// or the line/column reported by the JSON parser.
    pub fn from_json(text: &str) -> Result<GkmGraph> {
        let file: GraphFile = serde_json::from_str(text).map_err(|e| {
            Error::Parse(format!(
                "line {}, column {}: {}",
                e.line(),
                e.column(),
                e
            ))
        })?;
        let mut seen = BTreeSet::new();
        for v in &file.vertices {
            if !seen.insert(v.clone()) {
                return Err(Error::Parse(format!(
                    "field \"vertices\": duplicate vertex name {:?}",
                    v
                )));
            }
        }
        let lookup = |name: &str, idx: usize| -> Result<usize> {
            file.vertices
                .iter()
                .position(|v| v == name)
                .ok_or_else(|| {
                    Error::Parse(format!(
                        "field \"edges[{}].ends\": unknown vertex {:?}",
                        idx, name
                    ))
                })
        };
        let mut edges = Vec::with_capacity(file.edges.len());
        for (idx, e) in file.edges.iter().enumerate() {
            let a = lookup(&e.ends[0], idx)?;
            let b = lookup(&e.ends[1], idx)?;
            if e.weight.len() != file.rank {
                return Err(Error::Parse(format!(
                    "field \"edges[{}].weight\": expected {} entries, got {}",
                    idx,
                    file.rank,
                    e.weight.len()
                )));
            }
            edges.push(Edge {
                a,
                b,
                weight: Weight::new(e.weight.clone()),
            });
        }
        Ok(GkmGraph {
            rank: file.rank,
            vertices: file.vertices,
            edges,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn max_valence(&self) -> usize {
        let mut val = vec![0usize; self.vertex_count()];
        for e in &self.edges {
            val[e.a] += 1;
            val[e.b] += 1;
        }
        val.into_iter().max().unwrap_or(0)
    }

    /// Structural checks. Errors make the graph unusable; warnings flag
    /// departures from the classical GKM conventions.
    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        if self.rank == 0 {
            out.push(Diagnostic {
                severity: Severity::Error,
                message: "torus rank must be at least 1".into(),
            });
        }
        for (i, e) in self.edges.iter().enumerate() {
            if e.weight.len() != self.rank {
                out.push(Diagnostic {
                    severity: Severity::Error,
                    message: format!(
                        "edge {} weight has {} entries, expected rank {}",
                        i,
                        e.weight.len(),
                        self.rank
                    ),
                });
            }
            if e.weight.is_zero() {
                out.push(Diagnostic {
                    severity: Severity::Error,
                    message: format!("edge {}: zero weight", i),
                });
            }
            if e.a == e.b {
                out.push(Diagnostic {
                    severity: Severity::Error,
                    message: format!("edge {}: self-loop at vertex {:?}", i, self.vertices[e.a]),
                });
            }
        }
        let mut dependent_pairs = Vec::new();
        let mut all_coprime = true;
        for (i, j) in self.adjacent_pairs() {
            let (wi, wj) = (&self.edges[i].weight, &self.edges[j].weight);
            if wi.len() == wj.len() && linearly_dependent(wi.entries(), wj.entries()) {
                dependent_pairs.push((i, j));
            }
            if wi.content().gcd(&wj.content()) > 1 {
                all_coprime = false;
            }
        }
        for (i, j) in dependent_pairs {
            out.push(Diagnostic {
                severity: Severity::Warning,
                message: format!(
                    "edges {} and {} are adjacent with linearly dependent weights",
                    i, j
                ),
            });
        }
        out.push(Diagnostic {
            severity: Severity::Info,
            message: if all_coprime {
                "all adjacent weight pairs are coprime: the classical integral GKM \
                 formula applies and the modified invariant agrees with graph cohomology"
                    .into()
            } else {
                "adjacent weights with a common prime factor present: the modified \
                 invariant may differ from graph cohomology"
                    .into()
            },
        });
        out
    }

    pub fn all_adjacent_pairs_coprime(&self) -> bool {
        self.adjacent_pairs().into_iter().all(|(i, j)| {
            self.edges[i]
                .weight
                .content()
                .gcd(&self.edges[j].weight.content())
                == 1
        })
    }

    /// Pairs of distinct edges sharing at least one vertex; parallel edges
    /// count as distinct adjacent edges.
    fn adjacent_pairs(&self) -> Vec<(usize, usize)> {
        let mut pairs = BTreeSet::new();
        let mut incident: Vec<Vec<usize>> = vec![Vec::new(); self.vertex_count()];
        for (i, e) in self.edges.iter().enumerate() {
            incident[e.a].push(i);
            if e.b != e.a {
                incident[e.b].push(i);
            }
        }
        for edges in &incident {
            for (k, &i) in edges.iter().enumerate() {
                for &j in &edges[k + 1..] {
                    pairs.insert((i.min(j), i.max(j)));
                }
            }
        }
        pairs.into_iter().collect()
    }

    /// Γ_n: same vertices, only the edges whose weight is divisible by n.
    pub fn subgraph_mod_n(&self, n: u64) -> GkmGraph {
        assert!(n >= 1);
        GkmGraph {
            rank: self.rank,
            vertices: self.vertices.clone(),
            edges: self
                .edges
                .iter()
                .filter(|e| e.weight.content() % n == 0)
                .cloned()
                .collect(),
        }
    }

    /// Primes p such that np divides the contents of two distinct adjacent
    /// edges.
    pub fn relevant_primes(&self, n: u64) -> BTreeSet<u64> {
        assert!(n >= 1);
        let mut primes = BTreeSet::new();
        for (i, j) in self.adjacent_pairs() {
            let g = self.edges[i]
                .weight
                .content()
                .gcd(&self.edges[j].weight.content());
            if g == 0 || g % n != 0 {
                continue;
            }
            primes.extend(prime_factors(g / n));
        }
        primes
    }

    /// The finite recursion tree: moduli reachable from 1 by multiplying
    /// relevant primes, sorted by n.
    pub fn divisor_tree(&self) -> Vec<DivisorNode> {
        let mut seen = BTreeSet::new();
        let mut queue = vec![1u64];
        let mut nodes = Vec::new();
        while let Some(n) = queue.pop() {
            if !seen.insert(n) {
                continue;
            }
            let primes = self.relevant_primes(n);
            for &p in &primes {
                queue.push(n * p);
            }
            nodes.push(DivisorNode {
                n,
                relevant_primes: primes,
            });
        }
        nodes.sort_by_key(|d| d.n);
        nodes
    }
}

fn linearly_dependent(a: &[i64], b: &[i64]) -> bool {
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            let cross = a[i] as i128 * b[j] as i128 - a[j] as i128 * b[i] as i128;
            if cross != 0 {
                return false;
            }
        }
    }
    true
}

fn prime_factors(mut m: u64) -> BTreeSet<u64> {
    let mut out = BTreeSet::new();
    let mut p = 2u64;
    while p * p <= m {
        if m % p == 0 {
            out.insert(p);
            while m % p == 0 {
                m /= p;
            }
        }
        p += 1;
    }
    if m > 1 {
        out.insert(m);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

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

    fn s6_p2q3() -> GkmGraph {
        GkmGraph::new(
            3,
            vec!["N".into(), "S".into()],
            vec![
                Edge {
                    a: 0,
                    b: 1,
                    weight: Weight::new(vec![4, 0, 0]),
                },
                Edge {
                    a: 0,
                    b: 1,
                    weight: Weight::new(vec![0, 4, 0]),
                },
                Edge {
                    a: 0,
                    b: 1,
                    weight: Weight::new(vec![0, 0, 6]),
                },
            ],
        )
    }

    #[test]
    fn validate_s2() {
        let diags = s2().validate();
        assert!(diags.iter().all(|d| d.severity != Severity::Error));
        assert!(s2().all_adjacent_pairs_coprime());
    }

    #[test]
    fn validate_s6_fixture() {
        let g = s6_p2q3();
        let diags = g.validate();
        assert!(diags.iter().all(|d| d.severity != Severity::Error));
        assert!(!g.all_adjacent_pairs_coprime());
    }

    #[test]
    fn validate_zero_weight() {
        let g = GkmGraph::new(
            2,
            vec!["a".into(), "b".into()],
            vec![Edge {
                a: 0,
                b: 1,
                weight: Weight::new(vec![0, 0]),
            }],
        );
        assert!(g
            .validate()
            .iter()
            .any(|d| d.severity == Severity::Error && d.message.contains("zero weight")));
    }

    #[test]
    fn validate_self_loop() {
        let g = GkmGraph::new(
            1,
            vec!["a".into()],
            vec![Edge {
                a: 0,
                b: 0,
                weight: Weight::new(vec![1]),
            }],
        );
        assert!(g
            .validate()
            .iter()
            .any(|d| d.severity == Severity::Error && d.message.contains("self-loop")));
    }

    #[test]
    fn subgraph_mod_n_fixture() {
        let g = s6_p2q3();
        assert_eq!(g.subgraph_mod_n(2).edges.len(), 3);
        let g4 = g.subgraph_mod_n(4);
        assert_eq!(g4.edges.len(), 2);
        assert_eq!(g4.edges[0].weight.entries(), &[4, 0, 0]);
        assert_eq!(g4.edges[1].weight.entries(), &[0, 4, 0]);
        assert_eq!(g.subgraph_mod_n(5).edges.len(), 0);
    }

    #[test]
    fn relevant_primes_fixture() {
        let g = s6_p2q3();
        assert_eq!(g.relevant_primes(1), BTreeSet::from([2]));
        assert_eq!(g.relevant_primes(2), BTreeSet::from([2]));
        assert!(g.relevant_primes(4).is_empty());
    }

    #[test]
    fn divisor_tree_s2() {
        let tree = s2().divisor_tree();
        assert_eq!(tree.len(), 1);
        assert_eq!(tree[0].n, 1);
        assert!(tree[0].relevant_primes.is_empty());
    }

    #[test]
    fn divisor_tree_fixture() {
        let tree = s6_p2q3().divisor_tree();
        let ns: Vec<u64> = tree.iter().map(|d| d.n).collect();
        assert_eq!(ns, vec![1, 2, 4]);
        assert!(tree[2].relevant_primes.is_empty());
    }

    #[test]
    fn divisor_tree_rank_two() {
        let g = GkmGraph::new(
            2,
            vec!["a".into(), "b".into()],
            vec![
                Edge {
                    a: 0,
                    b: 1,
                    weight: Weight::new(vec![2, 0]),
                },
                Edge {
                    a: 0,
                    b: 1,
                    weight: Weight::new(vec![0, 2]),
                },
            ],
        );
        let ns: Vec<u64> = g.divisor_tree().iter().map(|d| d.n).collect();
        assert_eq!(ns, vec![1, 2]);
    }

    #[test]
    fn sign_invariance() {
        let g = s6_p2q3();
        let flipped = GkmGraph::new(
            g.rank,
            g.vertices.clone(),
            g.edges
                .iter()
                .map(|e| Edge {
                    a: e.a,
                    b: e.b,
                    weight: Weight::new(e.weight.entries().iter().map(|&x| -x).collect()),
                })
                .collect(),
        );
        assert_eq!(g.divisor_tree(), flipped.divisor_tree());
        assert_eq!(
            g.subgraph_mod_n(4).edges.len(),
            flipped.subgraph_mod_n(4).edges.len()
        );
    }

    #[test]
    fn subgraph_composition_is_lcm() {
        let g = s6_p2q3();
        let ab = g.subgraph_mod_n(2).subgraph_mod_n(3);
        let l = g.subgraph_mod_n(6);
        assert_eq!(ab.edges.len(), l.edges.len());
    }

    #[test]
    fn parse_round_trip() {
        let text = r#"{
            "rank": 2,
            "vertices": ["a", "b"],
            "edges": [ { "ends": ["a", "b"], "weight": [2, 0] } ]
        }"#;
        let g = GkmGraph::from_json(text).unwrap();
        assert_eq!(g.rank, 2);
        assert_eq!(g.edges[0].weight.entries(), &[2, 0]);
    }

    #[test]
    fn parse_unknown_vertex_cites_field() {
        let text = r#"{
            "rank": 1,
            "vertices": ["a"],
            "edges": [ { "ends": ["a", "z"], "weight": [1] } ]
        }"#;
        let err = GkmGraph::from_json(text).unwrap_err();
        assert!(err.to_string().contains("edges[0].ends"));
    }

    #[test]
    fn parse_bad_json_cites_line() {
        let err = GkmGraph::from_json("{ \"rank\": }").unwrap_err();
        assert!(err.to_string().contains("line 1"));
    }
}
