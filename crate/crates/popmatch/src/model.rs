//! Exact data model: bipartite preference instances with rational vertex
//! weights, matchings, and the weighted vote functions.
//!
//! All arithmetic is exact. Weights, votes, and margins are
//! arbitrary-precision rationals; no rounding ever occurs.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Exact rational scalar used for weights, votes, and witness values.
///
/// Always stored in lowest terms with a positive denominator.
pub type Rational = BigRational;

/// `n` as a rational.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `n/d` in lowest terms. Panics if `d == 0`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p"` or `"p/q"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational, ModelError> {
    let bad = || ModelError::InvalidRational(s.to_string());
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let num: BigInt = num.trim().parse().map_err(|_| bad())?;
    let den: BigInt = den.trim().parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

/// Canonical text form: `"p/q"`, or plain `"p"` when the denominator is 1.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Which side of the bipartition a vertex lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    A,
    B,
}

/// A vertex, identified by side and 0-based index within that side.
///
/// The derived order (all of `A` before all of `B`, then by index) is the
/// canonical vertex order used wherever a deterministic tie-break is needed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId {
    pub side: Side,
    pub index: usize,
}

impl VertexId {
    pub fn a(index: usize) -> Self {
        VertexId { side: Side::A, index }
    }

    pub fn b(index: usize) -> Self {
        VertexId { side: Side::B, index }
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.side {
            Side::A => write!(f, "a{}", self.index + 1),
            Side::B => write!(f, "b{}", self.index + 1),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("adjacency is not symmetric: {vertex} lists {neighbor} but {neighbor} does not list {vertex}")]
    AsymmetricAdjacency { vertex: VertexId, neighbor: VertexId },
    #[error("duplicate preference entry: {vertex} lists {neighbor} more than once")]
    DuplicatePreference { vertex: VertexId, neighbor: VertexId },
    #[error("negative weight at {vertex}")]
    NegativeWeight { vertex: VertexId },
    #[error("preference entry out of range: {vertex} lists opposite-side index {index}")]
    BadIndex { vertex: VertexId, index: usize },
    #[error("{u} and {v} are not adjacent")]
    NotAdjacent { u: VertexId, v: VertexId },
    #[error("edge (a{}, b{}) is not in the graph", a + 1, b + 1)]
    EdgeNotInGraph { a: usize, b: usize },
    #[error("matching edges overlap at {vertex}")]
    OverlappingEdges { vertex: VertexId },
    #[error("malformed rational {0:?}")]
    InvalidRational(String),
    #[error("{0}")]
    ShapeMismatch(String),
}

/// A bipartite preference system with rational vertex weights.
///
/// Each vertex carries a strict preference list over its neighbors (best
/// first). Adjacency is symmetric and all edges cross the bipartition.
/// Instances are immutable after construction and safe to share across
/// threads.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    a_prefs: Vec<Vec<usize>>,
    b_prefs: Vec<Vec<usize>>,
    a_weights: Vec<Rational>,
    b_weights: Vec<Rational>,
    // rank[v][u] = position of u in v's list (0 = best), None if not adjacent
    a_rank: Vec<Vec<Option<u32>>>,
    b_rank: Vec<Vec<Option<u32>>>,
    edges: Vec<(usize, usize)>,
}

impl Instance {
    /// Builds and validates an instance from per-side preference lists and
    /// weights. Adjacency is derived from the preference lists.
    pub fn build(
        a_prefs: Vec<Vec<usize>>,
        b_prefs: Vec<Vec<usize>>,
        a_weights: Vec<Rational>,
        b_weights: Vec<Rational>,
    ) -> Result<Self, ModelError> {
        let na = a_prefs.len();
        let nb = b_prefs.len();
        if a_weights.len() != na || b_weights.len() != nb {
            return Err(ModelError::ShapeMismatch(format!(
                "expected {} A-weights and {} B-weights, got {} and {}",
                na,
                nb,
                a_weights.len(),
                b_weights.len()
            )));
        }
        for (i, w) in a_weights.iter().enumerate() {
            if w.is_negative() {
                return Err(ModelError::NegativeWeight { vertex: VertexId::a(i) });
            }
        }
        for (j, w) in b_weights.iter().enumerate() {
            if w.is_negative() {
                return Err(ModelError::NegativeWeight { vertex: VertexId::b(j) });
            }
        }

        let mut a_rank = vec![vec![None; nb]; na];
        for (i, prefs) in a_prefs.iter().enumerate() {
            for (pos, &j) in prefs.iter().enumerate() {
                if j >= nb {
                    return Err(ModelError::BadIndex { vertex: VertexId::a(i), index: j });
                }
                if a_rank[i][j].is_some() {
                    return Err(ModelError::DuplicatePreference {
                        vertex: VertexId::a(i),
                        neighbor: VertexId::b(j),
                    });
                }
                a_rank[i][j] = Some(pos as u32);
            }
        }
        let mut b_rank = vec![vec![None; na]; nb];
        for (j, prefs) in b_prefs.iter().enumerate() {
            for (pos, &i) in prefs.iter().enumerate() {
                if i >= na {
                    return Err(ModelError::BadIndex { vertex: VertexId::b(j), index: i });
                }
                if b_rank[j][i].is_some() {
                    return Err(ModelError::DuplicatePreference {
                        vertex: VertexId::b(j),
                        neighbor: VertexId::a(i),
                    });
                }
                b_rank[j][i] = Some(pos as u32);
            }
        }
        for i in 0..na {
            for j in 0..nb {
                match (a_rank[i][j].is_some(), b_rank[j][i].is_some()) {
                    (true, false) => {
                        return Err(ModelError::AsymmetricAdjacency {
                            vertex: VertexId::a(i),
                            neighbor: VertexId::b(j),
                        })
                    }
                    (false, true) => {
                        return Err(ModelError::AsymmetricAdjacency {
                            vertex: VertexId::b(j),
                            neighbor: VertexId::a(i),
                        })
                    }
                    _ => {}
                }
            }
        }

        let mut edges = Vec::new();
        for (i, prefs) in a_prefs.iter().enumerate() {
            for &j in prefs {
                edges.push((i, j));
            }
        }
        edges.sort_unstable();

        Ok(Instance { a_prefs, b_prefs, a_weights, b_weights, a_rank, b_rank, edges })
    }

    pub fn a_count(&self) -> usize {
        self.a_prefs.len()
    }

    pub fn b_count(&self) -> usize {
        self.b_prefs.len()
    }

    pub fn n_vertices(&self) -> usize {
        self.a_count() + self.b_count()
    }

    /// All edges as `(a_index, b_index)` pairs in canonical lexicographic order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn is_edge(&self, a: usize, b: usize) -> bool {
        self.a_rank[a][b].is_some()
    }

    /// The preference list of `v` as opposite-side indices, best first.
    pub fn prefs(&self, v: VertexId) -> &[usize] {
        match v.side {
            Side::A => &self.a_prefs[v.index],
            Side::B => &self.b_prefs[v.index],
        }
    }

    /// Position of `u` in `v`'s list (0 = best), or `None` if not adjacent.
    pub fn rank(&self, v: VertexId, u: usize) -> Option<u32> {
        match v.side {
            Side::A => self.a_rank[v.index][u],
            Side::B => self.b_rank[v.index][u],
        }
    }

    pub fn weight(&self, v: VertexId) -> &Rational {
        match v.side {
            Side::A => &self.a_weights[v.index],
            Side::B => &self.b_weights[v.index],
        }
    }

    pub fn a_weight(&self, i: usize) -> &Rational {
        &self.a_weights[i]
    }

    pub fn b_weight(&self, j: usize) -> &Rational {
        &self.b_weights[j]
    }

    /// All vertices in canonical order (A side first, then B).
    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.a_count())
            .map(VertexId::a)
            .chain((0..self.b_count()).map(VertexId::b))
    }

    /// Compares two potential partners of `v` (`None` = unmatched).
    ///
    /// `Greater` means `v` strictly prefers `p` to `q`. Being matched to any
    /// neighbor beats staying unmatched. Panics if a partner is not a
    /// neighbor of `v`.
    pub fn compare_partners(&self, v: VertexId, p: Option<usize>, q: Option<usize>) -> Ordering {
        let rank_of = |u: Option<usize>| u.map(|u| self.rank(v, u).expect("partner must be a neighbor"));
        match (rank_of(p), rank_of(q)) {
            (None, None) => Ordering::Equal,
            (Some(_), None) => Ordering::Greater,
            (None, Some(_)) => Ordering::Less,
            // smaller rank = better
            (Some(rp), Some(rq)) => rq.cmp(&rp),
        }
    }

    /// Restricts the instance to the sub-instance spanned by `edges`.
    ///
    /// Keeps exactly the endpoints of the given edges, with preference lists
    /// filtered in order and weights copied.
    pub fn restrict_to_edges(&self, edges: &BTreeSet<(usize, usize)>) -> Restriction {
        let mut a_back: Vec<usize> = edges.iter().map(|&(a, _)| a).collect();
        let mut b_back: Vec<usize> = edges.iter().map(|&(_, b)| b).collect();
        a_back.sort_unstable();
        a_back.dedup();
        b_back.sort_unstable();
        b_back.dedup();
        let a_fwd = |old: usize| a_back.binary_search(&old).ok();
        let b_fwd = |old: usize| b_back.binary_search(&old).ok();

        let a_prefs: Vec<Vec<usize>> = a_back
            .iter()
            .map(|&a| {
                self.a_prefs[a]
                    .iter()
                    .filter(|&&b| edges.contains(&(a, b)))
                    .map(|&b| b_fwd(b).unwrap())
                    .collect()
            })
            .collect();
        let b_prefs: Vec<Vec<usize>> = b_back
            .iter()
            .map(|&b| {
                self.b_prefs[b]
                    .iter()
                    .filter(|&&a| edges.contains(&(a, b)))
                    .map(|&a| a_fwd(a).unwrap())
                    .collect()
            })
            .collect();
        let a_weights = a_back.iter().map(|&a| self.a_weights[a].clone()).collect();
        let b_weights = b_back.iter().map(|&b| self.b_weights[b].clone()).collect();
        let instance = Instance::build(a_prefs, b_prefs, a_weights, b_weights)
            .expect("restriction of a valid instance is valid");
        Restriction { instance, a_back, b_back }
    }
}

/// A sub-instance together with maps back to the original vertex indices.
#[derive(Clone, Debug)]
pub struct Restriction {
    pub instance: Instance,
    /// `a_back[new_index] = old_index`
    pub a_back: Vec<usize>,
    /// `b_back[new_index] = old_index`
    pub b_back: Vec<usize>,
}

impl Restriction {
    pub fn a_new(&self, old: usize) -> Option<usize> {
        self.a_back.binary_search(&old).ok()
    }

    pub fn b_new(&self, old: usize) -> Option<usize> {
        self.b_back.binary_search(&old).ok()
    }

    /// Maps a matching of the sub-instance back to original edge indices.
    pub fn edges_back(&self, m: &Matching) -> Vec<(usize, usize)> {
        m.edges().map(|(a, b)| (self.a_back[a], self.b_back[b])).collect()
    }
}

/// A set of pairwise disjoint edges with partner lookup.
///
/// `partner(v)` returns `None` for an unmatched vertex (the □ of the
/// matching literature).
#[derive(Clone, Debug)]
pub struct Matching {
    edges: BTreeSet<(usize, usize)>,
    a_partner: Vec<Option<usize>>,
    b_partner: Vec<Option<usize>>,
}

impl Matching {
    pub fn new(
        inst: &Instance,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, ModelError> {
        let mut set = BTreeSet::new();
        let mut a_partner = vec![None; inst.a_count()];
        let mut b_partner = vec![None; inst.b_count()];
        for (a, b) in edges {
            if a >= inst.a_count() || b >= inst.b_count() || !inst.is_edge(a, b) {
                return Err(ModelError::EdgeNotInGraph { a, b });
            }
            if !set.insert((a, b)) {
                continue;
            }
            if a_partner[a].is_some() {
                return Err(ModelError::OverlappingEdges { vertex: VertexId::a(a) });
            }
            if b_partner[b].is_some() {
                return Err(ModelError::OverlappingEdges { vertex: VertexId::b(b) });
            }
            a_partner[a] = Some(b);
            b_partner[b] = Some(a);
        }
        Ok(Matching { edges: set, a_partner, b_partner })
    }

    pub fn empty(inst: &Instance) -> Self {
        Matching {
            edges: BTreeSet::new(),
            a_partner: vec![None; inst.a_count()],
            b_partner: vec![None; inst.b_count()],
        }
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn contains(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a, b))
    }

    /// Edges in canonical order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_vec(&self) -> Vec<(usize, usize)> {
        self.edges.iter().copied().collect()
    }

    /// `M(v)`: the matched partner of `v`, or `None` if unmatched.
    pub fn partner(&self, v: VertexId) -> Option<VertexId> {
        match v.side {
            Side::A => self.a_partner[v.index].map(VertexId::b),
            Side::B => self.b_partner[v.index].map(VertexId::a),
        }
    }

    /// Partner of `v` as an opposite-side index.
    pub fn partner_index(&self, v: VertexId) -> Option<usize> {
        match v.side {
            Side::A => self.a_partner[v.index],
            Side::B => self.b_partner[v.index],
        }
    }

    pub fn is_matched(&self, v: VertexId) -> bool {
        self.partner_index(v).is_some()
    }
}

impl PartialEq for Matching {
    fn eq(&self, other: &Self) -> bool {
        self.edges == other.edges
    }
}

impl Eq for Matching {}

impl PartialOrd for Matching {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Matching {
    fn cmp(&self, other: &Self) -> Ordering {
        self.edges.iter().cmp(other.edges.iter())
    }
}

/// The weighted vote of `u` for `v`: `0` if `{u, v}` is matched, `+w(u)` if
/// `u` is unmatched or prefers `v` to its partner, `-w(u)` otherwise.
pub fn vote(inst: &Instance, m: &Matching, u: VertexId, v: VertexId) -> Result<Rational, ModelError> {
    if u.side == v.side || inst.rank(u, v.index).is_none() {
        return Err(ModelError::NotAdjacent { u, v });
    }
    match m.partner_index(u) {
        Some(p) if p == v.index => Ok(Rational::zero()),
        other => match inst.compare_partners(u, Some(v.index), other) {
            Ordering::Greater => Ok(inst.weight(u).clone()),
            _ => Ok(-inst.weight(u).clone()),
        },
    }
}

/// The vote of an edge: the sum of its endpoint votes.
///
/// A loop (`u == v`) votes `-w(v)` if `v` is matched and `0` otherwise.
pub fn vote_edge(
    inst: &Instance,
    m: &Matching,
    u: VertexId,
    v: VertexId,
) -> Result<Rational, ModelError> {
    if u == v {
        return Ok(if m.is_matched(u) { -inst.weight(u).clone() } else { Rational::zero() });
    }
    Ok(vote(inst, m, u, v)? + vote(inst, m, v, u)?)
}

/// `Δ_w(M, M')`: total weight of vertices preferring `M` minus total weight
/// of vertices preferring `M'`. `M` is popular iff `Δ_w(M, M') ≥ 0` for
/// every `M'`.
pub fn delta_w(inst: &Instance, m: &Matching, m_prime: &Matching) -> Rational {
    let mut delta = Rational::zero();
    for v in inst.vertices() {
        match inst.compare_partners(v, m.partner_index(v), m_prime.partner_index(v)) {
            Ordering::Greater => delta += inst.weight(v),
            Ordering::Less => delta -= inst.weight(v),
            Ordering::Equal => {}
        }
    }
    delta
}

/// Whether the vertex set `xs` prefers `M` to `M'`: the weighted margin
/// restricted to `xs` is strictly positive.
pub fn set_prefers(inst: &Instance, xs: &[VertexId], m: &Matching, m_prime: &Matching) -> bool {
    let mut delta = Rational::zero();
    for &v in xs {
        match inst.compare_partners(v, m.partner_index(v), m_prime.partner_index(v)) {
            Ordering::Greater => delta += inst.weight(v),
            Ordering::Less => delta -= inst.weight(v),
            Ordering::Equal => {}
        }
    }
    delta.is_positive()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// The Condorcet-style instance: three A-vertices all preferring b1 to
    /// b2, both B-vertices ranking a1 > a2 > a3.
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
    fn builds_fig1_with_six_edges() {
        let inst = fig1([3, 3, 3, 1, 1]);
        assert_eq!(inst.edges().len(), 6);
        assert_eq!(inst.a_count(), 3);
        assert_eq!(inst.b_count(), 2);
    }

    #[test]
    fn empty_instance_is_valid() {
        let inst = Instance::build(vec![], vec![], vec![], vec![]).unwrap();
        assert_eq!(inst.n_vertices(), 0);
        assert!(inst.edges().is_empty());
    }

    #[test]
    fn asymmetric_adjacency_is_rejected() {
        let err = Instance::build(
            vec![vec![0]],
            vec![vec![]],
            vec![rat(1)],
            vec![rat(1)],
        )
        .unwrap_err();
        assert_eq!(
            err,
            ModelError::AsymmetricAdjacency { vertex: VertexId::a(0), neighbor: VertexId::b(0) }
        );
    }

    #[test]
    fn duplicate_preference_is_rejected() {
        let err = Instance::build(
            vec![vec![0, 0]],
            vec![vec![0]],
            vec![rat(1)],
            vec![rat(1)],
        )
        .unwrap_err();
        assert!(matches!(err, ModelError::DuplicatePreference { .. }));
    }

    #[test]
    fn negative_weight_is_rejected() {
        let err =
            Instance::build(vec![vec![]], vec![], vec![rat(-1)], vec![]).unwrap_err();
        assert_eq!(err, ModelError::NegativeWeight { vertex: VertexId::a(0) });
    }

    #[test]
    fn bad_index_is_rejected() {
        let err = Instance::build(vec![vec![3]], vec![vec![0]], vec![rat(1)], vec![rat(1)])
            .unwrap_err();
        assert_eq!(err, ModelError::BadIndex { vertex: VertexId::a(0), index: 3 });
    }

    #[test]
    fn vote_cases_on_fig1() {
        let inst = fig1([3, 3, 3, 1, 1]);
        let m = Matching::new(&inst, [(0, 0)]).unwrap();
        // matched pair votes 0
        assert_eq!(vote(&inst, &m, VertexId::a(0), VertexId::b(0)).unwrap(), rat(0));
        // a2 is unmatched: +w(a2)
        assert_eq!(vote(&inst, &m, VertexId::a(1), VertexId::b(0)).unwrap(), rat(3));
        // b1 holds its first choice a1: -w(b1)
        assert_eq!(vote(&inst, &m, VertexId::b(0), VertexId::a(1)).unwrap(), rat(-1));
        assert_eq!(
            vote(&inst, &m, VertexId::a(0), VertexId::a(1)).unwrap_err(),
            ModelError::NotAdjacent { u: VertexId::a(0), v: VertexId::a(1) }
        );
    }

    #[test]
    fn vote_edge_cases_on_fig1() {
        let inst = fig1([3, 3, 3, 1, 1]);
        let m = Matching::new(&inst, [(0, 0), (1, 1)]).unwrap();
        // e in M
        assert_eq!(vote_edge(&inst, &m, VertexId::a(0), VertexId::b(0)).unwrap(), rat(0));
        // {a2, b1}: a2 prefers b1 to its partner b2 (+3), b1 holds a1 (-1)
        assert_eq!(vote_edge(&inst, &m, VertexId::a(1), VertexId::b(0)).unwrap(), rat(2));
        // loop at matched vertex
        assert_eq!(vote_edge(&inst, &m, VertexId::a(0), VertexId::a(0)).unwrap(), rat(-3));
        // loop at unmatched vertex
        assert_eq!(vote_edge(&inst, &m, VertexId::a(2), VertexId::a(2)).unwrap(), rat(0));
    }

    #[test]
    fn delta_w_on_fig1_three_one() {
        let inst = fig1([3, 3, 3, 1, 1]);
        let m1 = Matching::new(&inst, [(0, 0), (1, 1)]).unwrap();
        let m2 = Matching::new(&inst, [(1, 0), (0, 1)]).unwrap();
        assert_eq!(delta_w(&inst, &m1, &m1), rat(0));
        // a1, b1 prefer m1 (3 + 1); a2, b2 prefer m2 (3 + 1)
        assert_eq!(delta_w(&inst, &m1, &m2), rat(0));
        assert_eq!(delta_w(&inst, &m2, &m1), rat(0));
    }

    #[test]
    fn set_prefers_cases() {
        let inst = fig1([3, 3, 3, 1, 1]);
        let m1 = Matching::new(&inst, [(0, 0), (1, 1)]).unwrap();
        let m2 = Matching::new(&inst, [(1, 0), (0, 1)]).unwrap();
        assert!(!set_prefers(&inst, &[], &m1, &m2));
        assert!(set_prefers(&inst, &[VertexId::a(0), VertexId::b(0)], &m1, &m2));
        let all: Vec<_> = inst.vertices().collect();
        assert!(!set_prefers(&inst, &all, &m1, &m2));
    }

    #[test]
    fn matching_validation() {
        let inst = fig1([1, 1, 1, 1, 1]);
        assert!(matches!(
            Matching::new(&inst, [(0, 0), (0, 1)]).unwrap_err(),
            ModelError::OverlappingEdges { .. }
        ));
        // (a1, b1) and (a2, b1) overlap at b1
        assert!(matches!(
            Matching::new(&inst, [(0, 0), (1, 0)]).unwrap_err(),
            ModelError::OverlappingEdges { .. }
        ));
    }

    #[test]
    fn rational_parse_format() {
        assert_eq!(parse_rational("7/2").unwrap(), ratio(7, 2));
        assert_eq!(parse_rational("-3").unwrap(), rat(-3));
        assert_eq!(format_rational(&ratio(6, 4)), "3/2");
        assert_eq!(format_rational(&rat(5)), "5");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn restriction_preserves_order() {
        let inst = fig1([3, 3, 3, 1, 1]);
        let edges: BTreeSet<_> = [(0, 0), (0, 1), (2, 1)].into_iter().collect();
        let r = inst.restrict_to_edges(&edges);
        assert_eq!(r.instance.a_count(), 2);
        assert_eq!(r.instance.b_count(), 2);
        assert_eq!(r.a_back, vec![0, 2]);
        // a1 keeps both neighbors in original order
        assert_eq!(r.instance.prefs(VertexId::a(0)), &[0, 1]);
        // b2 keeps a1 before a3
        assert_eq!(r.instance.prefs(VertexId::b(1)), &[0, 1]);
    }
}
