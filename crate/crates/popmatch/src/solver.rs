//! Polynomial-time popular matching solver for the restricted weight
//! pattern `w(a) = c > 3` for all of `A` and `w(b) = 1` for all of `B`.
//!
//! The pipeline has two phases. First the edge set is pruned down to a
//! disjoint union of paths and cycles that still contains every popular
//! edge: keep only f-post/s-post edges (`H^{deg(A)<=2}`), isolate cycles
//! (`H^{C+T}`), then per component keep exactly the edges lying in some
//! popular matching of that component (`H^{C+P}`). Second, each component
//! gets an ordered list of at most four candidate witnesses; a dismissal
//! loop driven by conflicting edges walks down these lists until a global
//! witness assembles or some component runs out of candidates, which proves
//! that no popular matching exists.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;
use thiserror::Error;

use crate::model::{
    rat, vote_edge, Instance, Matching, ModelError, Rational, Side, VertexId,
};
use crate::verifier;
use crate::witness::{
    check_witness, parity_on_component, weakly_dominates, NiceValueSets, Parity, Witness,
};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SolverError {
    #[error("weight pattern violation at {vertex}: expected uniform weight c on A and 1 on B")]
    WeightPatternViolation { vertex: VertexId },
    #[error("common A-weight must exceed 3, got {c}")]
    CNotGreaterThanThree { c: String },
    #[error("forced edges do not form a matching")]
    ForcedNotAMatching,
    #[error("edge (a{}, b{}) is not in the graph", .0 + 1, .1 + 1)]
    EdgeNotInGraph(usize, usize),
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
}

impl From<ModelError> for SolverError {
    fn from(e: ModelError) -> Self {
        SolverError::InternalInconsistency(e.to_string())
    }
}

/// Checks the `(c, 1)` weight pattern and returns the common A-weight.
///
/// An instance with no A-vertices is vacuously valid; `c` defaults to 4.
pub fn validate_weights(inst: &Instance) -> Result<Rational, SolverError> {
    for j in 0..inst.b_count() {
        if *inst.b_weight(j) != rat(1) {
            return Err(SolverError::WeightPatternViolation { vertex: VertexId::b(j) });
        }
    }
    if inst.a_count() == 0 {
        return Ok(rat(4));
    }
    let c = inst.a_weight(0).clone();
    for i in 1..inst.a_count() {
        if *inst.a_weight(i) != c {
            return Err(SolverError::WeightPatternViolation { vertex: VertexId::a(i) });
        }
    }
    if c <= rat(3) {
        return Err(SolverError::CNotGreaterThanThree { c: crate::model::format_rational(&c) });
    }
    Ok(c)
}

/// f-post and s-post of every A-vertex.
///
/// `f(a)` is the head of `a`'s preference list; `s(a)` is the best-ranked
/// neighbor of `a` that is nobody's f-post. Either may be absent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PostMap {
    pub f: Vec<Option<usize>>,
    pub s: Vec<Option<usize>>,
}

pub fn compute_posts(inst: &Instance) -> PostMap {
    let f: Vec<Option<usize>> =
        (0..inst.a_count()).map(|a| inst.prefs(VertexId::a(a)).first().copied()).collect();
    let f_posts: BTreeSet<usize> = f.iter().flatten().copied().collect();
    let s = (0..inst.a_count())
        .map(|a| inst.prefs(VertexId::a(a)).iter().copied().find(|b| !f_posts.contains(b)))
        .collect();
    PostMap { f, s }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stage {
    HDegA2,
    HCT,
    HCP,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ComponentKind {
    Isolated,
    Edge,
    Path,
    Cycle,
    /// A tree that is not a path; occurs only before the `H^{C+P}` stage.
    Tree,
}

/// A connected component of a pruned graph.
///
/// Vertex order is canonical per kind: cycles start at their smallest
/// vertex and turn toward the smaller neighbor; paths run end to end
/// starting from the A-side endpoint when the ends lie on different sides.
#[derive(Clone, Debug)]
pub struct CpComponent {
    pub kind: ComponentKind,
    pub vertices: Vec<VertexId>,
    pub edges: Vec<(usize, usize)>,
}

/// A staged pruned subgraph with its component decomposition. Components
/// partition every vertex of the instance; isolated vertices form their own
/// components.
#[derive(Clone, Debug)]
pub struct PrunedGraph {
    pub stage: Stage,
    pub edges: BTreeSet<(usize, usize)>,
    pub components: Vec<CpComponent>,
    n_a: usize,
    n_b: usize,
}

impl PrunedGraph {
    fn new(stage: Stage, n_a: usize, n_b: usize, edges: BTreeSet<(usize, usize)>) -> Self {
        let components = components_of(n_a, n_b, &edges);
        PrunedGraph { stage, edges, components, n_a, n_b }
    }

    pub fn component_index_of(&self, v: VertexId) -> usize {
        self.components
            .iter()
            .position(|c| c.vertices.contains(&v))
            .expect("components partition the vertices")
    }
}

fn neighbors_in(edges: &BTreeSet<(usize, usize)>, v: VertexId) -> Vec<VertexId> {
    let mut out: Vec<VertexId> = match v.side {
        Side::A => edges
            .iter()
            .filter(|&&(a, _)| a == v.index)
            .map(|&(_, b)| VertexId::b(b))
            .collect(),
        Side::B => edges
            .iter()
            .filter(|&&(_, b)| b == v.index)
            .map(|&(a, _)| VertexId::a(a))
            .collect(),
    };
    out.sort_unstable();
    out
}

fn components_of(n_a: usize, n_b: usize, edges: &BTreeSet<(usize, usize)>) -> Vec<CpComponent> {
    let mut seen: BTreeSet<VertexId> = BTreeSet::new();
    let mut comps = Vec::new();
    let all: Vec<VertexId> =
        (0..n_a).map(VertexId::a).chain((0..n_b).map(VertexId::b)).collect();
    for &start in &all {
        if seen.contains(&start) {
            continue;
        }
        let mut stack = vec![start];
        let mut vertices = BTreeSet::new();
        vertices.insert(start);
        while let Some(v) = stack.pop() {
            for w in neighbors_in(edges, v) {
                if vertices.insert(w) {
                    stack.push(w);
                }
            }
        }
        seen.extend(vertices.iter().copied());
        let comp_edges: Vec<(usize, usize)> = edges
            .iter()
            .copied()
            .filter(|&(a, _)| vertices.contains(&VertexId::a(a)))
            .collect();
        comps.push(classify_component(vertices, comp_edges, edges));
    }
    comps
}

fn classify_component(
    vertices: BTreeSet<VertexId>,
    comp_edges: Vec<(usize, usize)>,
    all_edges: &BTreeSet<(usize, usize)>,
) -> CpComponent {
    let nv = vertices.len();
    let ne = comp_edges.len();
    let deg = |v: VertexId| neighbors_in(all_edges, v).len();
    let max_deg = vertices.iter().map(|&v| deg(v)).max().unwrap_or(0);
    let sorted: Vec<VertexId> = vertices.iter().copied().collect();

    if ne == 0 {
        return CpComponent { kind: ComponentKind::Isolated, vertices: sorted, edges: comp_edges };
    }
    if max_deg == 2 && ne == nv {
        // cycle: start at the smallest vertex, turn toward the smaller neighbor
        let start = sorted[0];
        let mut order = vec![start];
        let mut prev = start;
        let mut cur = neighbors_in(all_edges, start)[0];
        while cur != start {
            order.push(cur);
            let ns = neighbors_in(all_edges, cur);
            let next = if ns[0] == prev { ns[1] } else { ns[0] };
            prev = cur;
            cur = next;
        }
        return CpComponent { kind: ComponentKind::Cycle, vertices: order, edges: comp_edges };
    }
    if max_deg <= 2 {
        // path (possibly a single edge)
        let ends: Vec<VertexId> =
            sorted.iter().copied().filter(|&v| deg(v) == 1).collect();
        debug_assert_eq!(ends.len(), 2);
        let start = match (ends[0].side, ends[1].side) {
            (Side::A, Side::B) => ends[0],
            (Side::B, Side::A) => ends[1],
            _ => ends[0].min(ends[1]),
        };
        let mut order = vec![start];
        let mut prev = start;
        let mut cur = neighbors_in(all_edges, start)[0];
        loop {
            order.push(cur);
            let ns = neighbors_in(all_edges, cur);
            match ns.iter().copied().find(|&w| w != prev) {
                Some(next) => {
                    prev = cur;
                    cur = next;
                }
                None => break,
            }
        }
        let kind = if nv == 2 { ComponentKind::Edge } else { ComponentKind::Path };
        return CpComponent { kind, vertices: order, edges: comp_edges };
    }
    CpComponent { kind: ComponentKind::Tree, vertices: sorted, edges: comp_edges }
}

/// `H^{deg(A)<=2}`: exactly the edges `{a, f(a)}` and `{a, s(a)}`.
pub fn build_h_deg_a2(inst: &Instance, posts: &PostMap) -> PrunedGraph {
    let mut edges = BTreeSet::new();
    for a in 0..inst.a_count() {
        if let Some(b) = posts.f[a] {
            edges.insert((a, b));
        }
        if let Some(b) = posts.s[a] {
            edges.insert((a, b));
        }
    }
    PrunedGraph::new(Stage::HDegA2, inst.a_count(), inst.b_count(), edges)
}

/// All simple cycles of the graph, as (cyclic vertex order, edge set)
/// pairs, discovered in canonical DFS order.
fn find_cycles(
    edges: &BTreeSet<(usize, usize)>,
) -> Vec<(Vec<VertexId>, BTreeSet<(usize, usize)>)> {
    let mut touched: BTreeSet<VertexId> = BTreeSet::new();
    for &(a, b) in edges {
        touched.insert(VertexId::a(a));
        touched.insert(VertexId::b(b));
    }
    let edge_of = |u: VertexId, v: VertexId| -> (usize, usize) {
        match u.side {
            Side::A => (u.index, v.index),
            Side::B => (v.index, u.index),
        }
    };
    let mut found = Vec::new();
    let mut seen: BTreeSet<Vec<(usize, usize)>> = BTreeSet::new();

    fn dfs(
        s: VertexId,
        u: VertexId,
        edges: &BTreeSet<(usize, usize)>,
        path: &mut Vec<VertexId>,
        on_path: &mut BTreeSet<VertexId>,
        edge_of: &dyn Fn(VertexId, VertexId) -> (usize, usize),
        seen: &mut BTreeSet<Vec<(usize, usize)>>,
        found: &mut Vec<(Vec<VertexId>, BTreeSet<(usize, usize)>)>,
    ) {
        for w in neighbors_in(edges, u) {
            if w == s && path.len() >= 4 {
                let mut es: Vec<(usize, usize)> = path
                    .windows(2)
                    .map(|p| edge_of(p[0], p[1]))
                    .collect();
                es.push(edge_of(*path.last().unwrap(), s));
                es.sort_unstable();
                if seen.insert(es.clone()) {
                    found.push((path.clone(), es.into_iter().collect()));
                }
            } else if w > s && !on_path.contains(&w) {
                path.push(w);
                on_path.insert(w);
                dfs(s, w, edges, path, on_path, edge_of, seen, found);
                path.pop();
                on_path.remove(&w);
            }
        }
    }

    for &s in &touched {
        let mut path = vec![s];
        let mut on_path: BTreeSet<VertexId> = [s].into_iter().collect();
        dfs(s, s, edges, &mut path, &mut on_path, &edge_of, &mut seen, &mut found);
    }
    found
}

/// `H^{C+T}`: exhaustively deletes every edge that touches a cycle without
/// lying on it. Cycles of the current graph are processed in canonical
/// discovery order until none has an incident non-cycle edge; the result is
/// a disjoint union of cycles and trees.
pub fn prune_cycle_incident(h: &PrunedGraph) -> PrunedGraph {
    let mut edges = h.edges.clone();
    loop {
        let cycles = find_cycles(&edges);
        let mut deleted = false;
        for (cyc_vertices, cyc_edges) in &cycles {
            let on_cycle: BTreeSet<VertexId> = cyc_vertices.iter().copied().collect();
            let extras: Vec<(usize, usize)> = edges
                .iter()
                .copied()
                .filter(|&(a, b)| {
                    !cyc_edges.contains(&(a, b))
                        && (on_cycle.contains(&VertexId::a(a))
                            || on_cycle.contains(&VertexId::b(b)))
                })
                .collect();
            if !extras.is_empty() {
                for e in extras {
                    edges.remove(&e);
                }
                deleted = true;
                break;
            }
        }
        if !deleted {
            break;
        }
    }
    PrunedGraph::new(Stage::HCT, h.n_a, h.n_b, edges)
}

/// Vote of `from` for `to` when `from` is matched to `matched` (an
/// opposite-side index) or unmatched.
fn vote_given(
    inst: &Instance,
    from: VertexId,
    to: VertexId,
    matched: Option<usize>,
) -> Rational {
    if matched == Some(to.index) {
        return Rational::zero();
    }
    match inst.compare_partners(from, Some(to.index), matched) {
        std::cmp::Ordering::Greater => inst.weight(from).clone(),
        _ => -inst.weight(from).clone(),
    }
}

type DpEntry = Option<BTreeSet<(usize, usize)>>;

/// The bottom-up table of the tree dynamic program: for each vertex `v`,
/// interface edge `e` (or `None` for unmatched) and nice-value index `x`,
/// the set of edges extendable into a popular matching of the subtree with
/// a witness assigning that value at `v`, or `None` if no such matching
/// exists.
pub struct DpTable {
    root: VertexId,
    entries: BTreeMap<(VertexId, Option<(usize, usize)>, usize), DpEntry>,
}

impl DpTable {
    /// Union of all feasible root entries: exactly the edges lying in at
    /// least one popular matching of the tree.
    pub fn popular_edges(&self) -> BTreeSet<(usize, usize)> {
        let mut out = BTreeSet::new();
        for ((v, _, _), entry) in &self.entries {
            if *v == self.root {
                if let Some(set) = entry {
                    out.extend(set.iter().copied());
                }
            }
        }
        out
    }
}

fn side_values(sets: &NiceValueSets, v: VertexId) -> &[Rational; 6] {
    sets.side_values(v.side)
}

fn value_index(sets: &NiceValueSets, v: VertexId, value: &Rational) -> Option<usize> {
    side_values(sets, v).iter().position(|x| x == value)
}

fn tree_dp(inst: &Instance, component: &CpComponent, c: &Rational) -> DpTable {
    let sets = NiceValueSets::new(c);
    let comp_edges: BTreeSet<(usize, usize)> = component.edges.iter().copied().collect();
    let root = *component.vertices.iter().min().expect("nonempty component");

    // BFS orientation from the root
    let mut parent: BTreeMap<VertexId, VertexId> = BTreeMap::new();
    let mut order = vec![root];
    let mut queue = std::collections::VecDeque::from([root]);
    let mut visited: BTreeSet<VertexId> = [root].into_iter().collect();
    while let Some(v) = queue.pop_front() {
        for w in neighbors_in(&comp_edges, v) {
            if visited.insert(w) {
                parent.insert(w, v);
                order.push(w);
                queue.push_back(w);
            }
        }
    }
    let mut children: BTreeMap<VertexId, Vec<VertexId>> = BTreeMap::new();
    for (&child, &par) in &parent {
        children.entry(par).or_default().push(child);
    }

    let edge_between = |u: VertexId, v: VertexId| -> (usize, usize) {
        match u.side {
            Side::A => (u.index, v.index),
            Side::B => (v.index, u.index),
        }
    };

    let mut entries: BTreeMap<(VertexId, Option<(usize, usize)>, usize), DpEntry> =
        BTreeMap::new();

    for &v in order.iter().rev() {
        let incident: Vec<(usize, usize)> = neighbors_in(&comp_edges, v)
            .into_iter()
            .map(|w| edge_between(v, w))
            .collect();
        let my_values = side_values(&sets, v).clone();
        let kids: Vec<VertexId> = children.get(&v).cloned().unwrap_or_default();

        let mut slots: Vec<Option<(usize, usize)>> = vec![None];
        slots.extend(incident.iter().copied().map(Some));

        for slot in slots {
            for (xi, x) in my_values.iter().enumerate() {
                // unmatched vertices carry witness value 0
                if slot.is_none() && !x.is_zero() {
                    entries.insert((v, slot, xi), None);
                    continue;
                }
                let matched_to: Option<usize> = slot.map(|(a, b)| match v.side {
                    Side::A => b,
                    Side::B => a,
                });
                let mut acc: BTreeSet<(usize, usize)> = BTreeSet::new();
                if let Some(e) = slot {
                    acc.insert(e);
                }
                let mut feasible = true;
                for &child in &kids {
                    let child_edge = edge_between(v, child);
                    if slot == Some(child_edge) {
                        // the child is matched to v; its value is forced to -x
                        let cx = value_index(&sets, child, &-x.clone());
                        let ok = cx.and_then(|cx| {
                            entries
                                .get(&(child, Some(child_edge), cx))
                                .cloned()
                                .flatten()
                        });
                        match ok {
                            Some(set) => acc.extend(set),
                            None => {
                                feasible = false;
                                break;
                            }
                        }
                        continue;
                    }
                    // the child is matched inside its own subtree or unmatched;
                    // the tree edge {v, child} must be covered
                    let child_incident: Vec<Option<(usize, usize)>> =
                        std::iter::once(None)
                            .chain(
                                neighbors_in(&comp_edges, child)
                                    .into_iter()
                                    .map(|w| edge_between(child, w))
                                    .filter(|&e| e != child_edge)
                                    .map(Some),
                            )
                            .collect();
                    let mut any = false;
                    for ce in child_incident {
                        let child_matched: Option<usize> = ce.map(|(a, b)| match child.side {
                            Side::A => b,
                            Side::B => a,
                        });
                        let need = vote_given(inst, child, v, child_matched)
                            + vote_given(inst, v, child, matched_to);
                        for (ci, cx) in side_values(&sets, child).iter().enumerate() {
                            if need > x + cx {
                                continue;
                            }
                            if let Some(Some(set)) = entries.get(&(child, ce, ci)) {
                                acc.extend(set.iter().copied());
                                any = true;
                            }
                        }
                    }
                    if !any {
                        feasible = false;
                        break;
                    }
                }
                entries.insert((v, slot, xi), if feasible { Some(acc) } else { None });
            }
        }
    }

    DpTable { root, entries }
}

/// The edges of a tree component contained in at least one popular matching
/// of the component taken as its own instance.
///
/// Precondition: the instance satisfies the `(c, 1)` weight pattern.
pub fn tree_popular_edges(inst: &Instance, component: &CpComponent) -> BTreeSet<(usize, usize)> {
    let c = validate_weights(inst).expect("solver requires the (c, 1) weight pattern");
    tree_dp(inst, component, &c).popular_edges()
}

fn cycle_alternating_matchings(component: &CpComponent) -> [Vec<(usize, usize)>; 2] {
    let vs = &component.vertices;
    let n = vs.len();
    let as_edge = |u: VertexId, v: VertexId| match u.side {
        Side::A => (u.index, v.index),
        Side::B => (v.index, u.index),
    };
    let mut m0 = Vec::new();
    let mut m1 = Vec::new();
    for i in (0..n).step_by(2) {
        m0.push(as_edge(vs[i], vs[(i + 1) % n]));
        m1.push(as_edge(vs[(i + 1) % n], vs[(i + 2) % n]));
    }
    m0.sort_unstable();
    m1.sort_unstable();
    [m0, m1]
}

/// `H^{C+P}`: per component, exhaustively keep only edges contained in a
/// popular matching of the component (tree components via the dynamic
/// program, cycle components by checking both alternating matchings with
/// the verifier on the restricted instance).
pub fn build_h_cp(inst: &Instance, h: &PrunedGraph) -> Result<PrunedGraph, SolverError> {
    let c = validate_weights(inst)?;
    let mut edges = h.edges.clone();
    loop {
        let comps = components_of(h.n_a, h.n_b, &edges);
        let mut removed = false;
        for comp in &comps {
            let keep: BTreeSet<(usize, usize)> = match comp.kind {
                ComponentKind::Isolated => continue,
                ComponentKind::Cycle => {
                    let comp_edges: BTreeSet<(usize, usize)> =
                        comp.edges.iter().copied().collect();
                    let r = inst.restrict_to_edges(&comp_edges);
                    let mut keep = BTreeSet::new();
                    for m in cycle_alternating_matchings(comp) {
                        let local: Vec<(usize, usize)> = m
                            .iter()
                            .map(|&(a, b)| (r.a_new(a).unwrap(), r.b_new(b).unwrap()))
                            .collect();
                        let local_m = Matching::new(&r.instance, local)?;
                        if verifier::is_popular(&r.instance, &local_m).is_popular {
                            keep.extend(m.iter().copied());
                        }
                    }
                    keep
                }
                ComponentKind::Edge | ComponentKind::Path | ComponentKind::Tree => {
                    tree_dp(inst, comp, &c).popular_edges()
                }
            };
            for &e in &comp.edges {
                if !keep.contains(&e) {
                    edges.remove(&e);
                    removed = true;
                }
            }
        }
        if !removed {
            break;
        }
    }
    let out = PrunedGraph::new(Stage::HCP, h.n_a, h.n_b, edges);
    for comp in &out.components {
        if comp.kind == ComponentKind::Tree {
            return Err(SolverError::InternalInconsistency(
                "H^{C+P} contains a non-path tree component".into(),
            ));
        }
    }
    Ok(out)
}

/// One candidate witness of a component: values on the component's
/// vertices, the matching whose popularity it certifies, and its parity.
#[derive(Clone, Debug)]
pub struct CandidateWitness {
    pub values: BTreeMap<VertexId, Rational>,
    pub matching: Vec<(usize, usize)>,
    pub parity: Parity,
}

/// The ordered candidate witnesses of one component. The list is a weak
/// dominance chain: every candidate weakly dominates all later ones, and an
/// even candidate (at most one) comes last.
#[derive(Clone, Debug)]
pub struct ComponentWitnessSet {
    pub component: usize,
    pub candidates: Vec<CandidateWitness>,
    pub dismissed: Vec<bool>,
    pub active: usize,
}

impl ComponentWitnessSet {
    fn first_undismissed(&self) -> Option<usize> {
        self.dismissed.iter().position(|&d| !d)
    }
}

fn candidate_full_forms(
    inst: &Instance,
    cand: &CandidateWitness,
) -> Result<(Witness, Matching), SolverError> {
    let mut w = Witness::zero(inst);
    for (&v, val) in &cand.values {
        w.set(v, val.clone());
    }
    let m = Matching::new(inst, cand.matching.iter().copied())?;
    Ok((w, m))
}

fn edge_component_candidates(
    posts: &PostMap,
    comp: &CpComponent,
    c: &Rational,
) -> Result<Vec<CandidateWitness>, SolverError> {
    let (a, b) = comp.edges[0];
    let one = rat(1);
    let two = rat(2);
    let f_case = posts.f[a] == Some(b);
    if !f_case && posts.s[a] != Some(b) {
        return Err(SolverError::InternalInconsistency(format!(
            "edge component (a{}, b{}) is neither an f-edge nor an s-edge",
            a + 1,
            b + 1
        )));
    }
    let pairs: [(Rational, Rational); 3] = if f_case {
        [
            (-c.clone(), c.clone()),
            (&two - c, c - &two),
            (&one - c, c - &one),
        ]
    } else {
        [(-one.clone(), one.clone()), (one.clone(), -one.clone()), (rat(0), rat(0))]
    };
    let parities = [Parity::Odd, Parity::Odd, Parity::Even];
    Ok(pairs
        .into_iter()
        .zip(parities)
        .map(|((ya, yb), parity)| CandidateWitness {
            values: [(VertexId::a(a), ya), (VertexId::b(b), yb)].into_iter().collect(),
            matching: vec![(a, b)],
            parity,
        })
        .collect())
}

fn path_component_candidates(
    comp: &CpComponent,
    c: &Rational,
) -> Result<Vec<CandidateWitness>, SolverError> {
    let vs = &comp.vertices;
    if vs.len() % 2 != 0 || vs[0].side != Side::A || vs[vs.len() - 1].side != Side::B {
        return Err(SolverError::InternalInconsistency(
            "path component does not run from an A-end to a B-end".into(),
        ));
    }
    let one = rat(1);
    let mut odd_values = BTreeMap::new();
    let mut even_values = BTreeMap::new();
    for (i, &v) in vs.iter().enumerate() {
        let pos = i / 2; // 0-based pair position
        let (odd_v, even_v) = match (v.side, pos % 2 == 0) {
            (Side::A, true) => (-c.clone(), rat(0)),
            (Side::A, false) => (one.clone(), &one - c),
            (Side::B, true) => (c.clone(), c - &one),
            (Side::B, false) => (-one.clone(), rat(0)),
        };
        odd_values.insert(v, odd_v);
        even_values.insert(v, even_v);
    }
    let as_edge = |u: VertexId, v: VertexId| match u.side {
        Side::A => (u.index, v.index),
        Side::B => (v.index, u.index),
    };
    let mut m_odd = Vec::new();
    let mut m_even = Vec::new();
    for i in (0..vs.len() - 1).step_by(2) {
        m_odd.push(as_edge(vs[i], vs[i + 1]));
    }
    for i in (1..vs.len() - 1).step_by(2) {
        m_even.push(as_edge(vs[i], vs[i + 1]));
    }
    m_odd.sort_unstable();
    m_even.sort_unstable();
    Ok(vec![
        CandidateWitness { values: odd_values, matching: m_odd, parity: Parity::Odd },
        CandidateWitness { values: even_values, matching: m_even, parity: Parity::Even },
    ])
}

fn cycle_component_candidates(
    inst: &Instance,
    comp: &CpComponent,
    c: &Rational,
) -> Result<Vec<CandidateWitness>, SolverError> {
    let sets = NiceValueSets::new(c);
    let vs = &comp.vertices;
    let n = vs.len();
    let mut raw: Vec<CandidateWitness> = Vec::new();
    for m_edges in cycle_alternating_matchings(comp) {
        let m = Matching::new(inst, m_edges.iter().copied())?;
        'seed: for seed in side_values(&sets, vs[0]) {
            let mut values: BTreeMap<VertexId, Rational> = BTreeMap::new();
            values.insert(vs[0], seed.clone());
            for i in 0..n {
                let u = vs[i];
                let v = vs[(i + 1) % n];
                let target = vote_edge(inst, &m, u, v).expect("cycle edge");
                let next = target - values.get(&u).unwrap();
                if i + 1 < n {
                    if !sets.contains(v.side, &next) {
                        continue 'seed;
                    }
                    values.insert(v, next);
                } else if next != *seed {
                    // wrap-around mismatch
                    continue 'seed;
                }
            }
            let sum: Rational = values.values().sum();
            if !sum.is_zero() {
                return Err(SolverError::InternalInconsistency(
                    "cycle candidate does not sum to zero".into(),
                ));
            }
            raw.push(CandidateWitness {
                values,
                matching: m_edges.clone(),
                parity: Parity::Mixed, // classified below
            });
        }
    }
    if raw.is_empty() {
        return Err(SolverError::InternalInconsistency(
            "cycle component admits no nice witness".into(),
        ));
    }
    Ok(raw)
}

fn order_candidates(
    inst: &Instance,
    comp: &CpComponent,
    mut cands: Vec<CandidateWitness>,
    c: &Rational,
) -> Result<Vec<CandidateWitness>, SolverError> {
    // classify parity and reject mixed candidates
    for cand in &mut cands {
        let (w, _) = candidate_full_forms(inst, cand)?;
        cand.parity = parity_on_component(&w, &comp.vertices, c);
        if cand.parity == Parity::Mixed {
            return Err(SolverError::InternalInconsistency(
                "candidate witness has mixed parity".into(),
            ));
        }
    }
    let full: Vec<(Witness, Matching)> = cands
        .iter()
        .map(|cand| candidate_full_forms(inst, cand))
        .collect::<Result<_, _>>()?;
    let dominates = |i: usize, j: usize| {
        weakly_dominates(
            inst,
            &full[i].0,
            &full[i].1,
            &full[j].0,
            &full[j].1,
            &comp.vertices,
            c,
        )
    };
    // odd candidates are tried first, ordered by dominance among
    // themselves; the even candidate (at most one) always comes last
    let evens: Vec<usize> =
        (0..cands.len()).filter(|&i| cands[i].parity == Parity::Even).collect();
    if evens.len() > 1 {
        return Err(SolverError::InternalInconsistency(
            "component has more than one even candidate witness".into(),
        ));
    }
    let mut order: Vec<usize> = Vec::new();
    let mut remaining: Vec<usize> =
        (0..cands.len()).filter(|&i| cands[i].parity == Parity::Odd).collect();
    while !remaining.is_empty() {
        let pick = remaining
            .iter()
            .position(|&i| remaining.iter().all(|&j| j == i || dominates(i, j)))
            .ok_or_else(|| {
                SolverError::InternalInconsistency(
                    "odd candidate witnesses do not form a dominance chain".into(),
                )
            })?;
        order.push(remaining.remove(pick));
    }
    order.extend(evens);
    for i in 0..order.len() {
        for j in i + 1..order.len() {
            if !dominates(order[i], order[j]) {
                return Err(SolverError::InternalInconsistency(
                    "candidate order is not a weak dominance chain".into(),
                ));
            }
        }
    }
    Ok(order.into_iter().map(|i| cands[i].clone()).collect())
}

/// Builds the ordered candidate witness list for every component of
/// `H^{C+P}`: three candidates per single-edge component, two per longer
/// path, two or four per cycle, and the zero witness for isolated vertices.
pub fn component_witness_sets(
    inst: &Instance,
    h_cp: &PrunedGraph,
    c: &Rational,
) -> Result<Vec<ComponentWitnessSet>, SolverError> {
    let posts = compute_posts(inst);
    let mut out = Vec::new();
    for (idx, comp) in h_cp.components.iter().enumerate() {
        let cands = match comp.kind {
            ComponentKind::Isolated => vec![CandidateWitness {
                values: [(comp.vertices[0], rat(0))].into_iter().collect(),
                matching: Vec::new(),
                parity: Parity::Even,
            }],
            ComponentKind::Edge => {
                order_candidates(inst, comp, edge_component_candidates(&posts, comp, c)?, c)?
            }
            ComponentKind::Path => {
                order_candidates(inst, comp, path_component_candidates(comp, c)?, c)?
            }
            ComponentKind::Cycle => {
                let raw = cycle_component_candidates(inst, comp, c)?;
                let ordered = order_candidates(inst, comp, raw, c)?;
                if ordered.len() != 2 && ordered.len() != 4 {
                    return Err(SolverError::InternalInconsistency(format!(
                        "cycle component has {} candidate witnesses",
                        ordered.len()
                    )));
                }
                ordered
            }
            ComponentKind::Tree => {
                return Err(SolverError::InternalInconsistency(
                    "tree component at stage H^{C+P}".into(),
                ))
            }
        };
        let n = cands.len();
        out.push(ComponentWitnessSet {
            component: idx,
            candidates: cands,
            dismissed: vec![false; n],
            active: 0,
        });
    }
    Ok(out)
}

/// One dismissal step: the conflicting edge that triggered it, the
/// component whose witness was dismissed, and the newly assigned candidate
/// index (`None` when the component ran out of candidates).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub conflict: (usize, usize),
    pub dismissed_component: usize,
    pub new_active: Option<usize>,
}

#[derive(Clone, Debug)]
pub enum SolveOutcome {
    Found { matching: Matching, witness: Witness },
    NoPopularMatching,
}

#[derive(Clone, Debug)]
pub struct SolveResult {
    pub outcome: SolveOutcome,
    pub trace: Vec<TraceStep>,
}

impl SolveResult {
    pub fn found(&self) -> Option<(&Matching, &Witness)> {
        match &self.outcome {
            SolveOutcome::Found { matching, witness } => Some((matching, witness)),
            SolveOutcome::NoPopularMatching => None,
        }
    }
}

/// Runs the full pipeline and the dismissal loop. `forced` edges must all
/// appear in the output matching; `forbidden` edges must not.
pub fn solve(
    inst: &Instance,
    forced: &[(usize, usize)],
    forbidden: &[(usize, usize)],
) -> Result<SolveResult, SolverError> {
    let c = validate_weights(inst)?;
    for &(a, b) in forced.iter().chain(forbidden) {
        if a >= inst.a_count() || b >= inst.b_count() || !inst.is_edge(a, b) {
            return Err(SolverError::EdgeNotInGraph(a, b));
        }
    }
    {
        let mut used_a = BTreeSet::new();
        let mut used_b = BTreeSet::new();
        for &(a, b) in forced {
            if !used_a.insert(a) || !used_b.insert(b) {
                return Err(SolverError::ForcedNotAMatching);
            }
        }
    }

    let posts = compute_posts(inst);
    let h0 = build_h_deg_a2(inst, &posts);
    let h1 = prune_cycle_incident(&h0);
    let h_cp = build_h_cp(inst, &h1)?;
    let mut sets = component_witness_sets(inst, &h_cp, &c)?;

    let no_popular = |trace: Vec<TraceStep>| SolveResult {
        outcome: SolveOutcome::NoPopularMatching,
        trace,
    };

    // forced and forbidden edges translate into pre-dismissals
    for &q in forced {
        if !h_cp.edges.contains(&q) {
            // H^{C+P} contains every popular edge
            return Ok(no_popular(Vec::new()));
        }
        let cid = h_cp.component_index_of(VertexId::a(q.0));
        for i in 0..sets[cid].candidates.len() {
            if !sets[cid].candidates[i].matching.contains(&q) {
                sets[cid].dismissed[i] = true;
            }
        }
    }
    for &p in forbidden {
        if h_cp.edges.contains(&p) {
            let cid = h_cp.component_index_of(VertexId::a(p.0));
            for i in 0..sets[cid].candidates.len() {
                if sets[cid].candidates[i].matching.contains(&p) {
                    sets[cid].dismissed[i] = true;
                }
            }
        }
    }
    for set in &mut sets {
        match set.first_undismissed() {
            Some(i) => set.active = i,
            None => return Ok(no_popular(Vec::new())),
        }
    }

    let comp_of = |v: VertexId| h_cp.component_index_of(v);
    let total_candidates: usize = sets.iter().map(|s| s.candidates.len()).sum();
    let mut trace = Vec::new();

    for _ in 0..=total_candidates {
        let mut witness = Witness::zero(inst);
        let mut edges: Vec<(usize, usize)> = Vec::new();
        for set in &sets {
            let cand = &set.candidates[set.active];
            for (&v, val) in &cand.values {
                witness.set(v, val.clone());
            }
            edges.extend(cand.matching.iter().copied());
        }
        let matching = Matching::new(inst, edges)?;

        let conflict = inst.edges().iter().copied().find(|&(a, b)| {
            let va = VertexId::a(a);
            let vb = VertexId::b(b);
            witness.get(va) + witness.get(vb)
                < vote_edge(inst, &matching, va, vb).expect("instance edge")
        });

        let Some((a, b)) = conflict else {
            debug_assert!(check_witness(inst, &matching, &witness).unwrap_or(false));
            return Ok(SolveResult {
                outcome: SolveOutcome::Found { matching, witness },
                trace,
            });
        };

        let ca = comp_of(VertexId::a(a));
        let cb = comp_of(VertexId::b(b));
        let a_parity = sets[ca].candidates[sets[ca].active].parity;
        let target = if a_parity == Parity::Even { cb } else { ca };

        let active = sets[target].active;
        sets[target].dismissed[active] = true;
        match sets[target].first_undismissed() {
            Some(next) => {
                sets[target].active = next;
                trace.push(TraceStep {
                    conflict: (a, b),
                    dismissed_component: target,
                    new_active: Some(next),
                });
            }
            None => {
                trace.push(TraceStep {
                    conflict: (a, b),
                    dismissed_component: target,
                    new_active: None,
                });
                return Ok(no_popular(trace));
            }
        }
    }
    Err(SolverError::InternalInconsistency(
        "dismissal loop exceeded the candidate budget".into(),
    ))
}
