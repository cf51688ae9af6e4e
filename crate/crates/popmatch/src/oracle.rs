//! Brute-force ground truth for desk-scale instances: enumerate every
//! matching, list the popular ones, the popular edges, and the best popular
//! matching under edge costs. Deliberately naive; the point is to be
//! obviously correct.

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use num_traits::Zero;
use thiserror::Error;

use crate::model::{Instance, Matching, Rational, VertexId};
use crate::verifier;

/// Default enumeration cap; overridable per call and via the CLI.
pub const DEFAULT_CAP: u64 = 10_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("matching count exceeds the enumeration cap of {cap}")]
    ScaleLimit { cap: u64 },
}

/// Everything the oracle learns about an instance.
#[derive(Clone, Debug)]
pub struct OracleReport {
    /// All popular matchings in enumeration order.
    pub popular: Vec<Matching>,
    /// Union of the edges of all popular matchings.
    pub popular_edges: BTreeSet<(usize, usize)>,
    /// Largest cardinality among popular matchings (0 if none).
    pub max_cardinality: usize,
    /// Total number of matchings enumerated.
    pub total_enumerated: u64,
}

/// Streams every matching of the instance exactly once, in a deterministic
/// depth-first include-first order over the canonical edge list. The empty
/// matching is included.
pub fn enumerate_matchings(inst: &Instance) -> MatchingEnumerator<'_> {
    MatchingEnumerator { inst, stack: vec![Frame { next: 0, chosen: Vec::new() }] }
}

pub struct MatchingEnumerator<'a> {
    inst: &'a Instance,
    stack: Vec<Frame>,
}

struct Frame {
    next: usize,
    chosen: Vec<(usize, usize)>,
}

impl Iterator for MatchingEnumerator<'_> {
    type Item = Matching;

    fn next(&mut self) -> Option<Matching> {
        let edges = self.inst.edges();
        while let Some(frame) = self.stack.pop() {
            let mut idx = frame.next;
            // skip edges conflicting with the current choice, branching on
            // the first compatible one
            while idx < edges.len() {
                let (a, b) = edges[idx];
                let compatible =
                    !frame.chosen.iter().any(|&(ca, cb)| ca == a || cb == b);
                if compatible {
                    break;
                }
                idx += 1;
            }
            if idx == edges.len() {
                return Some(
                    Matching::new(self.inst, frame.chosen.iter().copied())
                        .expect("enumerated edges form a matching"),
                );
            }
            // exclude branch first on the stack so the include branch pops first
            self.stack.push(Frame { next: idx + 1, chosen: frame.chosen.clone() });
            let mut with = frame.chosen;
            with.push(edges[idx]);
            self.stack.push(Frame { next: idx + 1, chosen: with });
        }
        None
    }
}

/// Whether an edge could be added between two unmatched vertices.
fn is_maximal(inst: &Instance, m: &Matching) -> bool {
    !inst
        .edges()
        .iter()
        .any(|&(a, b)| !m.is_matched(VertexId::a(a)) && !m.is_matched(VertexId::b(b)))
}

fn all_weights_positive(inst: &Instance) -> bool {
    inst.vertices().all(|v| !inst.weight(v).is_zero())
}

/// Enumerates all matchings and keeps the popular ones, as decided by the
/// exact verifier. Errors with `ScaleLimit` if the matching count exceeds
/// `cap` (default [`DEFAULT_CAP`]).
pub fn popular_matchings_bruteforce(
    inst: &Instance,
    cap: Option<u64>,
) -> Result<OracleReport, OracleError> {
    let cap = cap.unwrap_or(DEFAULT_CAP);
    // With strictly positive weights every popular matching is maximal, so
    // non-maximal candidates can be skipped without consulting the verifier.
    let maximality_filter = all_weights_positive(inst);
    let mut report = OracleReport {
        popular: Vec::new(),
        popular_edges: BTreeSet::new(),
        max_cardinality: 0,
        total_enumerated: 0,
    };
    for m in enumerate_matchings(inst) {
        report.total_enumerated += 1;
        if report.total_enumerated > cap {
            return Err(OracleError::ScaleLimit { cap });
        }
        if maximality_filter && !is_maximal(inst, &m) {
            continue;
        }
        let (margin, _) = verifier::most_popular_response(inst, &m);
        if margin <= Rational::zero() {
            report.popular_edges.extend(m.edges());
            report.max_cardinality = report.max_cardinality.max(m.len());
            report.popular.push(m);
        }
    }
    Ok(report)
}

/// Returns some popular matching (the first in enumeration order), or
/// `None` if no popular matching exists.
pub fn popular_exists(inst: &Instance, cap: Option<u64>) -> Result<Option<Matching>, OracleError> {
    let cap = cap.unwrap_or(DEFAULT_CAP);
    let maximality_filter = all_weights_positive(inst);
    let mut seen = 0u64;
    for m in enumerate_matchings(inst) {
        seen += 1;
        if seen > cap {
            return Err(OracleError::ScaleLimit { cap });
        }
        if maximality_filter && !is_maximal(inst, &m) {
            continue;
        }
        let (margin, _) = verifier::most_popular_response(inst, &m);
        if margin <= Rational::zero() {
            return Ok(Some(m));
        }
    }
    Ok(None)
}

/// Maximizes `Σ_{e in M} ω(e)` over popular matchings. Edges missing from
/// `omega` count as cost 0. Returns `None` if no popular matching exists.
pub fn max_cost_popular(
    inst: &Instance,
    omega: &BTreeMap<(usize, usize), Rational>,
    cap: Option<u64>,
) -> Result<Option<(Matching, Rational)>, OracleError> {
    let report = popular_matchings_bruteforce(inst, cap)?;
    let mut best: Option<(Matching, Rational)> = None;
    for m in report.popular {
        let value: Rational = m
            .edges()
            .map(|e| omega.get(&e).cloned().unwrap_or_else(Rational::zero))
            .sum();
        let better = match &best {
            None => true,
            Some((_, bv)) => value > *bv,
        };
        if better {
            best = Some((m, value));
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::rat;

    fn fig1(weights: [i64; 5]) -> Instance {
        Instance::build(
            vec![vec![0, 1], vec![0, 1], vec![0, 1]],
            vec![vec![0, 1, 2], vec![0, 1, 2]],
            vec![rat(weights[0]), rat(weights[1]), rat(weights[2])],
            vec![rat(weights[3]), rat(weights[4])],
        )
        .unwrap()
    }

    #[test]
    fn single_edge_has_two_matchings() {
        let inst = Instance::build(vec![vec![0]], vec![vec![0]], vec![rat(1)], vec![rat(1)])
            .unwrap();
        let all: Vec<_> = enumerate_matchings(&inst).collect();
        assert_eq!(all.len(), 2);
        assert!(all.iter().any(|m| m.is_empty()));
        assert!(all.iter().any(|m| m.len() == 1));
    }

    #[test]
    fn empty_graph_has_one_matching() {
        let inst = Instance::build(vec![], vec![], vec![], vec![]).unwrap();
        assert_eq!(enumerate_matchings(&inst).count(), 1);
    }

    #[test]
    fn fig1_has_thirteen_matchings() {
        // empty + six single edges + six disjoint pairs
        let inst = fig1([1, 1, 1, 1, 1]);
        assert_eq!(enumerate_matchings(&inst).count(), 13);
    }

    #[test]
    fn enumeration_has_no_duplicates() {
        let inst = fig1([1, 1, 1, 1, 1]);
        let mut seen = BTreeSet::new();
        for m in enumerate_matchings(&inst) {
            assert!(seen.insert(m.edge_vec()));
        }
    }

    #[test]
    fn condorcet_variants_have_no_popular_matching() {
        for weights in [[1, 1, 1, 0, 0], [3, 3, 3, 1, 1]] {
            let inst = fig1(weights);
            let report = popular_matchings_bruteforce(&inst, None).unwrap();
            assert_eq!(report.total_enumerated, 13);
            assert!(report.popular.is_empty(), "weights {:?}", weights);
            assert!(popular_exists(&inst, None).unwrap().is_none());
        }
    }

    #[test]
    fn distinct_first_choices_yield_popular_matching() {
        let inst = Instance::build(
            vec![vec![0, 1], vec![1, 0]],
            vec![vec![0, 1], vec![1, 0]],
            vec![rat(5), rat(5)],
            vec![rat(1), rat(1)],
        )
        .unwrap();
        let m = popular_exists(&inst, None).unwrap().expect("exists");
        assert!(verifier::is_popular(&inst, &m).is_popular);
    }

    #[test]
    fn scale_limit_triggers() {
        let inst = fig1([1, 1, 1, 1, 1]);
        assert_eq!(
            popular_matchings_bruteforce(&inst, Some(5)).unwrap_err(),
            OracleError::ScaleLimit { cap: 5 }
        );
    }

    #[test]
    fn max_cost_zero_costs() {
        let inst = Instance::build(vec![vec![0]], vec![vec![0]], vec![rat(1)], vec![rat(1)])
            .unwrap();
        let omega = BTreeMap::new();
        let (_, value) = max_cost_popular(&inst, &omega, None).unwrap().unwrap();
        assert_eq!(value, rat(0));
    }
}
