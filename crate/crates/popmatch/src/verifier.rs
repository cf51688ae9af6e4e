//! Exact popularity verification.
//!
//! The decision reduces to one maximum-weight bipartite matching problem:
//! augment the graph with a loop at every vertex, so any challenger
//! matching becomes perfect, and fold the loop votes into modified edge
//! weights. The maximum total vote over challengers is then the popularity
//! margin; a matching is popular iff that margin is at most zero.

use num_traits::Zero;

use crate::model::{vote_edge, Instance, Matching, Rational, VertexId};
use crate::solver;

/// Outcome of a popularity check.
///
/// `margin` is `max over M' of Δ_w(M', M)`; the matching is popular iff the
/// margin is at most zero. When positive, `counterexample` is a matching
/// achieving it (the lexicographically smallest such edge set under the
/// canonical order).
#[derive(Clone, Debug)]
pub struct VerifyResult {
    pub is_popular: bool,
    pub margin: Rational,
    pub counterexample: Option<Matching>,
}

/// Modified weight of edge `e = {a, b}` against `m`: the vote of `e` plus
/// `w(a)` if `a` is matched in `m` plus `w(b)` if `b` is matched in `m`.
/// Maximizing these over matchings and subtracting the total matched weight
/// of `m` yields `max Δ_w(·, m)`.
fn challenge_weights(inst: &Instance, m: &Matching) -> Vec<(usize, usize, Rational)> {
    inst.edges()
        .iter()
        .map(|&(a, b)| {
            let va = VertexId::a(a);
            let vb = VertexId::b(b);
            let mut w = vote_edge(inst, m, va, vb).expect("instance edge");
            if m.is_matched(va) {
                w += inst.weight(va);
            }
            if m.is_matched(vb) {
                w += inst.weight(vb);
            }
            (a, b, w)
        })
        .collect()
}

fn matched_weight(inst: &Instance, m: &Matching) -> Rational {
    let mut total = Rational::zero();
    for (a, b) in m.edges() {
        total += inst.weight(VertexId::a(a));
        total += inst.weight(VertexId::b(b));
    }
    total
}

/// Returns `max over M' of Δ_w(M', m)` together with a maximizing `M'`.
pub fn most_popular_response(inst: &Instance, m: &Matching) -> (Rational, Matching) {
    let weights = challenge_weights(inst, m);
    let (best, edges) = max_weight_matching(inst.a_count(), inst.b_count(), &weights);
    let margin = best - matched_weight(inst, m);
    let response = Matching::new(inst, edges).expect("solver returns instance edges");
    (margin, response)
}

/// Decides popularity of `m`. The counterexample is populated exactly when
/// the margin is positive.
pub fn is_popular(inst: &Instance, m: &Matching) -> VerifyResult {
    let (margin, _) = most_popular_response(inst, m);
    if margin.is_zero() || margin < Rational::zero() {
        VerifyResult { is_popular: true, margin, counterexample: None }
    } else {
        let ce = lex_min_maximizer(inst, m);
        VerifyResult { is_popular: false, margin, counterexample: Some(ce) }
    }
}

/// The house-allocation popularity characterization: every vertex that is
/// somebody's f-post is matched to a vertex whose f-post it is, and every
/// `a` is matched to `f(a)` or `s(a)` (or unmatched when the corresponding
/// post does not exist).
///
/// Intended for the projection that zeroes all B-weights; the conditions
/// themselves are purely structural.
pub fn is_popular_house_allocation(inst: &Instance, m: &Matching) -> bool {
    let posts = solver::compute_posts(inst);
    for a in 0..inst.a_count() {
        if let Some(b) = posts.f[a] {
            let holder = m.partner_index(VertexId::b(b));
            match holder {
                Some(a2) if posts.f[a2] == Some(b) => {}
                _ => return false,
            }
        }
    }
    for a in 0..inst.a_count() {
        let p = m.partner_index(VertexId::a(a));
        if p != posts.f[a] && p != posts.s[a] {
            return false;
        }
    }
    true
}

/// Maximum-weight (not necessarily perfect) bipartite matching, solved
/// exactly over rationals by successive augmenting paths of maximum gain
/// (Bellman-Ford on the residual graph). Deterministic: arcs are relaxed in
/// canonical order and only strict improvements are taken.
pub(crate) fn max_weight_matching(
    na: usize,
    nb: usize,
    edges: &[(usize, usize, Rational)],
) -> (Rational, Vec<(usize, usize)>) {
    let n = na + nb;
    let mut match_a: Vec<Option<usize>> = vec![None; na];
    let mut match_b: Vec<Option<usize>> = vec![None; nb];

    loop {
        // dist in cost space; gain of a path = -dist
        let mut dist: Vec<Option<Rational>> = vec![None; n];
        let mut parent: Vec<Option<usize>> = vec![None; n];
        for a in 0..na {
            if match_a[a].is_none() {
                dist[a] = Some(Rational::zero());
            }
        }
        for _round in 0..n {
            let mut changed = false;
            for &(a, b, ref w) in edges {
                let (from, to, cost) = if match_a[a] == Some(b) {
                    (na + b, a, w.clone())
                } else {
                    (a, na + b, -w.clone())
                };
                if let Some(df) = dist[from].clone() {
                    let cand = df + cost;
                    let better = match &dist[to] {
                        None => true,
                        Some(dt) => cand < *dt,
                    };
                    if better {
                        dist[to] = Some(cand);
                        parent[to] = Some(from);
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }

        let mut best: Option<(Rational, usize)> = None;
        for b in 0..nb {
            if match_b[b].is_none() {
                if let Some(d) = &dist[na + b] {
                    if d < &Rational::zero() {
                        let replace = match &best {
                            None => true,
                            Some((bd, _)) => d < bd,
                        };
                        if replace {
                            best = Some((d.clone(), b));
                        }
                    }
                }
            }
        }
        let Some((_, end_b)) = best else { break };

        // walk parents back to an unmatched a, flipping edges
        let mut node = na + end_b;
        let mut steps = 0;
        while let Some(prev) = parent[node] {
            if node >= na {
                // prev is an A node matched to this B by the augmentation
                match_a[prev] = Some(node - na);
                match_b[node - na] = Some(prev);
            }
            node = prev;
            steps += 1;
            assert!(steps <= n, "augmenting path walk exceeded node count");
        }
    }

    let mut total = Rational::zero();
    let mut out = Vec::new();
    for &(a, b, ref w) in edges {
        if match_a[a] == Some(b) {
            total += w;
            out.push((a, b));
        }
    }
    out.sort_unstable();
    (total, out)
}

/// Maximum achievable modified weight when the edges in `forced` are fixed
/// (their endpoints removed from the residual problem), or `None` if
/// `forced` is not a matching.
fn max_weight_given(
    na: usize,
    nb: usize,
    edges: &[(usize, usize, Rational)],
    forced: &[(usize, usize)],
) -> Option<Rational> {
    let mut used_a = vec![false; na];
    let mut used_b = vec![false; nb];
    let mut fixed = Rational::zero();
    for &(a, b) in forced {
        if used_a[a] || used_b[b] {
            return None;
        }
        used_a[a] = true;
        used_b[b] = true;
        let w = edges
            .iter()
            .find(|&&(ea, eb, _)| ea == a && eb == b)
            .map(|(_, _, w)| w.clone())?;
        fixed += w;
    }
    let rest: Vec<(usize, usize, Rational)> = edges
        .iter()
        .filter(|&&(a, b, _)| !used_a[a] && !used_b[b])
        .cloned()
        .collect();
    let (best, _) = max_weight_matching(na, nb, &rest);
    Some(fixed + best)
}

/// The lexicographically smallest edge set among the maximizers of the
/// challenge weight, built greedily edge by edge in canonical order.
fn lex_min_maximizer(inst: &Instance, m: &Matching) -> Matching {
    let na = inst.a_count();
    let nb = inst.b_count();
    let weights = challenge_weights(inst, m);
    let (target, _) = max_weight_matching(na, nb, &weights);
    let mut chosen: Vec<(usize, usize)> = Vec::new();
    let mut used_a = vec![false; na];
    let mut used_b = vec![false; nb];
    for &(a, b, _) in &weights {
        if used_a[a] || used_b[b] {
            continue;
        }
        chosen.push((a, b));
        match max_weight_given(na, nb, &weights, &chosen) {
            Some(w) if w == target => {
                used_a[a] = true;
                used_b[b] = true;
            }
            _ => {
                chosen.pop();
            }
        }
    }
    Matching::new(inst, chosen).expect("greedy keeps a valid matching")
}
