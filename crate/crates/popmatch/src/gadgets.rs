//! Instance generators for the hardness-construction families: the
//! Condorcet example, the forced-edge gadget reduction, the 3-SAT
//! reduction, and the independent-set reduction with 0/1 edge costs.
//! Together they form the structured test corpus.
//!
//! Every bracketed "arbitrary" preference order in the constructions is
//! fixed ascending by index, so generated instances are stable across runs.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::model::{rat, Instance, Matching, ModelError, Rational, VertexId};
use crate::witness::Witness;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GadgetError {
    #[error("forced edges must form a matching")]
    FNotMatching,
    #[error("expected exactly 2 forced edges, got {0}")]
    FWrongSize(usize),
    #[error("base instance must have unit weights; {0} does not")]
    UnitWeightsRequired(VertexId),
    #[error("forced edge ({0}, {1}) is not an edge of the base instance")]
    ForcedEdgeMissing(String, String),
    #[error("c = {c} is out of range ({requirement})")]
    COutOfRange { c: String, requirement: &'static str },
    #[error("assignment has {got} values but the formula has {expected} variables")]
    AssignmentDomainMismatch { expected: usize, got: usize },
    #[error("clause {0} has no satisfied literal; k_C is undefined")]
    KCUndefined(usize),
    #[error("variable gadget for {0} is not resolved by the matching")]
    VariableGadgetUnresolved(String),
    #[error("bad CNF formula: {0}")]
    BadCnf(String),
    #[error("bad digraph: {0}")]
    BadDigraph(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// An instance together with stable vertex names and optional 0/1 edge
/// costs, as emitted by the generators and consumed by the CLI formats.
#[derive(Clone, Debug)]
pub struct NamedInstance {
    pub instance: Instance,
    pub a_names: Vec<String>,
    pub b_names: Vec<String>,
    /// Sparse edge cost map; edges not listed cost 0.
    pub omega: Option<BTreeMap<(usize, usize), Rational>>,
}

impl NamedInstance {
    pub fn name_of(&self, v: VertexId) -> &str {
        match v.side {
            crate::model::Side::A => &self.a_names[v.index],
            crate::model::Side::B => &self.b_names[v.index],
        }
    }

    pub fn vertex_by_name(&self, name: &str) -> Option<VertexId> {
        if let Some(i) = self.a_names.iter().position(|n| n == name) {
            return Some(VertexId::a(i));
        }
        self.b_names.iter().position(|n| n == name).map(VertexId::b)
    }
}

/// Incremental construction of a named instance; names are resolved to
/// indices when finished.
struct Builder {
    a_names: Vec<String>,
    b_names: Vec<String>,
    a_weights: Vec<Rational>,
    b_weights: Vec<Rational>,
    a_prefs: Vec<Vec<String>>,
    b_prefs: Vec<Vec<String>>,
}

impl Builder {
    fn new() -> Self {
        Builder {
            a_names: Vec::new(),
            b_names: Vec::new(),
            a_weights: Vec::new(),
            b_weights: Vec::new(),
            a_prefs: Vec::new(),
            b_prefs: Vec::new(),
        }
    }

    fn add_a(&mut self, name: impl Into<String>, weight: Rational) -> usize {
        self.a_names.push(name.into());
        self.a_weights.push(weight);
        self.a_prefs.push(Vec::new());
        self.a_names.len() - 1
    }

    fn add_b(&mut self, name: impl Into<String>, weight: Rational) -> usize {
        self.b_names.push(name.into());
        self.b_weights.push(weight);
        self.b_prefs.push(Vec::new());
        self.b_names.len() - 1
    }

    fn finish(self, omega: Option<BTreeMap<(usize, usize), Rational>>) -> NamedInstance {
        let b_index: BTreeMap<&str, usize> =
            self.b_names.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
        let a_index: BTreeMap<&str, usize> =
            self.a_names.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
        let a_prefs: Vec<Vec<usize>> = self
            .a_prefs
            .iter()
            .map(|ps| ps.iter().map(|n| b_index[n.as_str()]).collect())
            .collect();
        let b_prefs: Vec<Vec<usize>> = self
            .b_prefs
            .iter()
            .map(|ps| ps.iter().map(|n| a_index[n.as_str()]).collect())
            .collect();
        let instance = Instance::build(a_prefs, b_prefs, self.a_weights, self.b_weights)
            .expect("generated instances are well-formed");
        NamedInstance {
            instance,
            a_names: self.a_names,
            b_names: self.b_names,
            omega,
        }
    }
}

/// Weight variants of the Condorcet example: three A-vertices with a
/// common first and second choice, two B-vertices ranking a1 > a2 > a3.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CondorcetVariant {
    /// Weights (1, 1, 1, 0, 0): the classic paradox with silent houses.
    ZeroB,
    /// Weights (3, 3, 3, 1, 1): the paradox without zero weights.
    ThreeOne,
    /// Any custom weights (a1, a2, a3, b1, b2).
    Custom([Rational; 5]),
}

pub fn condorcet_instance(variant: CondorcetVariant) -> NamedInstance {
    let w = match variant {
        CondorcetVariant::ZeroB => [rat(1), rat(1), rat(1), rat(0), rat(0)],
        CondorcetVariant::ThreeOne => [rat(3), rat(3), rat(3), rat(1), rat(1)],
        CondorcetVariant::Custom(w) => w,
    };
    let mut bld = Builder::new();
    for (i, wi) in w[..3].iter().enumerate() {
        bld.add_a(format!("a{}", i + 1), wi.clone());
    }
    for (j, wj) in w[3..].iter().enumerate() {
        bld.add_b(format!("b{}", j + 1), wj.clone());
    }
    for prefs in &mut bld.a_prefs {
        *prefs = vec!["b1".into(), "b2".into()];
    }
    for prefs in &mut bld.b_prefs {
        *prefs = vec!["a1".into(), "a2".into(), "a3".into()];
    }
    bld.finish(None)
}

/// The standalone 6-path gadget with A-weights `c` and unit B-weights:
/// a1: b1; a2: b1 > b2; a3: b2 > b3. It admits a popular matching exactly
/// when `c <= 3`.
pub fn six_path_instance(c: &Rational) -> NamedInstance {
    let mut bld = Builder::new();
    for i in 1..=3 {
        bld.add_a(format!("a{i}"), c.clone());
        bld.add_b(format!("b{i}"), rat(1));
    }
    bld.a_prefs[0] = vec!["b1".into()];
    bld.a_prefs[1] = vec!["b1".into(), "b2".into()];
    bld.a_prefs[2] = vec!["b2".into(), "b3".into()];
    bld.b_prefs[0] = vec!["a1".into(), "a2".into()];
    bld.b_prefs[1] = vec!["a2".into(), "a3".into()];
    bld.b_prefs[2] = vec!["a3".into()];
    bld.finish(None)
}

// ---------------------------------------------------------------------------
// Forced-edge gadget reduction
// ---------------------------------------------------------------------------

/// Per-forced-edge bookkeeping: indices of the ten gadget vertices in the
/// reduced instance.
#[derive(Clone, Debug)]
struct EdgeGadget {
    u: usize,
    z: usize,
    bu: [usize; 3],
    au: [usize; 2],
    az: [usize; 3],
    bz: [usize; 2],
}

/// Replaces each of two forced edges of a unit-weight instance by an edge
/// gadget, so that the reduced instance has a popular matching iff the
/// original has one containing both forced edges. All but 14 vertices keep
/// weight one; the rest get weight two or four.
#[derive(Clone, Debug)]
pub struct ForcedEdgeReduction {
    pub base: NamedInstance,
    pub reduced: NamedInstance,
    pub forced: Vec<(usize, usize)>,
    gadgets: Vec<EdgeGadget>,
}

pub fn forced_edges_reduce(
    base: &NamedInstance,
    forced: &[(usize, usize)],
) -> Result<ForcedEdgeReduction, GadgetError> {
    if forced.len() != 2 {
        return Err(GadgetError::FWrongSize(forced.len()));
    }
    let inst = &base.instance;
    for v in inst.vertices() {
        if *inst.weight(v) != rat(1) {
            return Err(GadgetError::UnitWeightsRequired(v));
        }
    }
    let mut used_a = BTreeSet::new();
    let mut used_b = BTreeSet::new();
    for &(u, z) in forced {
        if u >= inst.a_count() || z >= inst.b_count() || !inst.is_edge(u, z) {
            return Err(GadgetError::ForcedEdgeMissing(
                base.a_names.get(u).cloned().unwrap_or_else(|| format!("a{}", u + 1)),
                base.b_names.get(z).cloned().unwrap_or_else(|| format!("b{}", z + 1)),
            ));
        }
        if !used_a.insert(u) || !used_b.insert(z) {
            return Err(GadgetError::FNotMatching);
        }
    }

    let mut bld = Builder::new();
    for (i, name) in base.a_names.iter().enumerate() {
        bld.add_a(name.clone(), rat(1));
        bld.a_prefs[i] = inst
            .prefs(VertexId::a(i))
            .iter()
            .map(|&b| base.b_names[b].clone())
            .collect();
    }
    for (j, name) in base.b_names.iter().enumerate() {
        bld.add_b(name.clone(), rat(1));
        bld.b_prefs[j] = inst
            .prefs(VertexId::b(j))
            .iter()
            .map(|&a| base.a_names[a].clone())
            .collect();
    }

    let mut gadgets = Vec::new();
    for &(u, z) in forced {
        let un = base.a_names[u].clone();
        let zn = base.b_names[z].clone();
        let bu = [
            bld.add_b(format!("b1_{un}"), rat(4)),
            bld.add_b(format!("b2_{un}"), rat(4)),
            bld.add_b(format!("b3_{un}"), rat(4)),
        ];
        let au = [bld.add_a(format!("a1_{un}"), rat(1)), bld.add_a(format!("a2_{un}"), rat(2))];
        let az = [
            bld.add_a(format!("a1_{zn}"), rat(4)),
            bld.add_a(format!("a2_{zn}"), rat(4)),
            bld.add_a(format!("a3_{zn}"), rat(4)),
        ];
        let bz = [bld.add_b(format!("b1_{zn}"), rat(1)), bld.add_b(format!("b2_{zn}"), rat(1))];

        // the forced edge is replaced: u gets b_u^1 at z's position, z gets
        // a_z^1 at u's position
        let pos_u = bld.a_prefs[u].iter().position(|n| *n == zn).expect("forced edge");
        bld.a_prefs[u][pos_u] = format!("b1_{un}");
        let pos_z = bld.b_prefs[z].iter().position(|n| *n == un).expect("forced edge");
        bld.b_prefs[z][pos_z] = format!("a1_{zn}");

        for &i in &au {
            bld.a_prefs[i] =
                vec![format!("b1_{un}"), format!("b2_{un}"), format!("b3_{un}")];
        }
        bld.a_prefs[az[0]] = vec![
            format!("b1_{un}"),
            zn.clone(),
            format!("b1_{zn}"),
            format!("b2_{zn}"),
        ];
        for &i in &az[1..] {
            bld.a_prefs[i] = vec![format!("b1_{zn}"), format!("b2_{zn}")];
        }
        bld.b_prefs[bu[0]] = vec![
            un.clone(),
            format!("a1_{un}"),
            format!("a2_{un}"),
            format!("a1_{zn}"),
        ];
        for &j in &bu[1..] {
            bld.b_prefs[j] = vec![format!("a1_{un}"), format!("a2_{un}")];
        }
        for &j in &bz {
            bld.b_prefs[j] =
                vec![format!("a1_{zn}"), format!("a2_{zn}"), format!("a3_{zn}")];
        }

        gadgets.push(EdgeGadget { u, z, bu, au, az, bz });
    }

    Ok(ForcedEdgeReduction {
        base: base.clone(),
        reduced: bld.finish(None),
        forced: forced.to_vec(),
        gadgets,
    })
}

impl ForcedEdgeReduction {
    /// Projects a matching of the base instance to an equivalent matching
    /// of the reduced instance.
    pub fn project_pi(&self, m: &Matching) -> Matching {
        let mut edges: Vec<(usize, usize)> = m
            .edges()
            .filter(|e| !self.forced.contains(e))
            .collect();
        for g in &self.gadgets {
            edges.push((g.au[1], g.bu[1]));
            edges.push((g.au[0], g.bu[2]));
            edges.push((g.az[1], g.bz[1]));
            edges.push((g.az[2], g.bz[0]));
            if m.contains(g.u, g.z) {
                edges.push((g.u, g.bu[0]));
                edges.push((g.az[0], g.z));
            } else {
                edges.push((g.az[0], g.bu[0]));
            }
        }
        Matching::new(&self.reduced.instance, edges).expect("projection is a matching")
    }

    /// Projects a matching of the reduced instance back to the base
    /// instance; the inverse of `project_pi`.
    pub fn project_rho(&self, m: &Matching) -> Matching {
        let na = self.base.instance.a_count();
        let nb = self.base.instance.b_count();
        let mut edges: Vec<(usize, usize)> = m
            .edges()
            .filter(|&(a, b)| a < na && b < nb)
            .collect();
        for g in &self.gadgets {
            if m.contains(g.u, g.bu[0]) && m.contains(g.az[0], g.z) {
                edges.push((g.u, g.z));
            }
        }
        Matching::new(&self.base.instance, edges).expect("projection is a matching")
    }
}

// ---------------------------------------------------------------------------
// 3-SAT reduction
// ---------------------------------------------------------------------------

/// A signed literal: variable index plus polarity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Literal {
    pub var: usize,
    pub negated: bool,
}

/// A 3-CNF formula: every clause has exactly three literals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CnfFormula {
    pub var_names: Vec<String>,
    pub clauses: Vec<[Literal; 3]>,
}

impl CnfFormula {
    pub fn num_vars(&self) -> usize {
        self.var_names.len()
    }

    /// Parses formulas like `(x|y|!z)&(!x|w|z)`. Variables are named by
    /// identifiers and indexed in order of first appearance; `!` negates.
    pub fn parse(text: &str) -> Result<Self, GadgetError> {
        let bad = |msg: &str| GadgetError::BadCnf(msg.to_string());
        let mut var_names: Vec<String> = Vec::new();
        let mut clauses = Vec::new();
        for clause_text in text.split('&') {
            let clause_text = clause_text.trim().trim_start_matches('(').trim_end_matches(')');
            let mut lits = Vec::new();
            for lit_text in clause_text.split('|') {
                let lit_text = lit_text.trim();
                let (negated, name) = match lit_text.strip_prefix('!') {
                    Some(rest) => (true, rest.trim()),
                    None => (false, lit_text),
                };
                if name.is_empty() || !name.chars().all(|ch| ch.is_alphanumeric() || ch == '_') {
                    return Err(bad(&format!("bad literal {lit_text:?}")));
                }
                let var = match var_names.iter().position(|n| n == name) {
                    Some(i) => i,
                    None => {
                        var_names.push(name.to_string());
                        var_names.len() - 1
                    }
                };
                lits.push(Literal { var, negated });
            }
            let lits: [Literal; 3] = lits
                .try_into()
                .map_err(|_| bad("every clause must have exactly three literals"))?;
            clauses.push(lits);
        }
        if clauses.is_empty() {
            return Err(bad("empty formula"));
        }
        Ok(CnfFormula { var_names, clauses })
    }

    pub fn evaluate(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().all(|clause| {
            clause.iter().any(|lit| assignment[lit.var] != lit.negated)
        })
    }
}

/// The 3-SAT reduction for `1 < c <= 2`: a 6-path gadget, one variable
/// gadget per variable, one clause gadget per clause, and the literal
/// connection edges. The constructed instance has a popular matching iff
/// the formula is satisfiable.
#[derive(Clone, Debug)]
pub struct SatReduction {
    pub formula: CnfFormula,
    pub c: Rational,
    pub instance: NamedInstance,
    a_path: [usize; 3],
    b_path: [usize; 3],
    a_var: Vec<usize>,
    a_bar: Vec<usize>,
    b_true: Vec<usize>,
    b_false: Vec<usize>,
    a_pos: Vec<[usize; 3]>,
    a_hat: Vec<[usize; 3]>,
    b_pos: Vec<[usize; 3]>,
    b_hat: Vec<[usize; 3]>,
}

pub fn sat_to_instance(formula: &CnfFormula, c: &Rational) -> Result<SatReduction, GadgetError> {
    if *c <= rat(1) || *c > rat(2) {
        return Err(GadgetError::COutOfRange {
            c: crate::model::format_rational(c),
            requirement: "1 < c <= 2",
        });
    }
    let mut bld = Builder::new();

    let a_path = [
        bld.add_a("a1", c.clone()),
        bld.add_a("a2", c.clone()),
        bld.add_a("a3", c.clone()),
    ];
    let b_path =
        [bld.add_b("b1", rat(1)), bld.add_b("b2", rat(1)), bld.add_b("b3", rat(1))];
    bld.a_prefs[a_path[0]] = vec!["b1".into()];
    bld.a_prefs[a_path[1]] = vec!["b1".into(), "b2".into()];
    bld.a_prefs[a_path[2]] = vec!["b2".into(), "b3".into()];
    bld.b_prefs[b_path[0]] = vec!["a1".into(), "a2".into()];
    bld.b_prefs[b_path[1]] = vec!["a2".into(), "a3".into()];
    // b3 ranks the a_x ascending by variable index, then a3
    bld.b_prefs[b_path[2]] = formula
        .var_names
        .iter()
        .map(|x| format!("a_{x}"))
        .chain(std::iter::once("a3".into()))
        .collect();

    let mut a_var = Vec::new();
    let mut a_bar = Vec::new();
    let mut b_true = Vec::new();
    let mut b_false = Vec::new();
    for x in &formula.var_names {
        let ax = bld.add_a(format!("a_{x}"), c.clone());
        let abar = bld.add_a(format!("abar_{x}"), c.clone());
        let bt = bld.add_b(format!("bt_{x}"), rat(1));
        let bf = bld.add_b(format!("bf_{x}"), rat(1));
        bld.a_prefs[ax] = vec![format!("bt_{x}"), format!("bf_{x}"), "b3".into()];
        bld.a_prefs[abar] = vec![format!("bt_{x}"), format!("bf_{x}")];
        bld.b_prefs[bt] = vec![format!("a_{x}"), format!("abar_{x}")];
        bld.b_prefs[bf] = vec![format!("a_{x}"), format!("abar_{x}")];
        a_var.push(ax);
        a_bar.push(abar);
        b_true.push(bt);
        b_false.push(bf);
    }

    let mut a_pos = Vec::new();
    let mut a_hat = Vec::new();
    let mut b_pos = Vec::new();
    let mut b_hat = Vec::new();
    for (j, _) in formula.clauses.iter().enumerate() {
        let jj = j + 1;
        let ap = [
            bld.add_a(format!("aC{jj}_1"), c.clone()),
            bld.add_a(format!("aC{jj}_2"), c.clone()),
            bld.add_a(format!("aC{jj}_3"), c.clone()),
        ];
        let ah = [
            bld.add_a(format!("aC{jj}_1_hat"), c.clone()),
            bld.add_a(format!("aC{jj}_2_hat"), c.clone()),
            bld.add_a(format!("aC{jj}_3_hat"), c.clone()),
        ];
        let bp = [
            bld.add_b(format!("bC{jj}_1"), rat(1)),
            bld.add_b(format!("bC{jj}_2"), rat(1)),
            bld.add_b(format!("bC{jj}_3"), rat(1)),
        ];
        let bh = [
            bld.add_b(format!("bC{jj}_1_hat"), rat(1)),
            bld.add_b(format!("bC{jj}_2_hat"), rat(1)),
            bld.add_b(format!("bC{jj}_3_hat"), rat(1)),
        ];
        for k in 0..3 {
            let next = (k + 1) % 3;
            bld.a_prefs[ah[k]] = vec![
                format!("bC{jj}_{}", k + 1),
                format!("bC{jj}_{}", next + 1),
                format!("bC{jj}_{}_hat", k + 1),
            ];
            bld.a_prefs[ap[k]] =
                vec![format!("bC{jj}_{}", k + 1), format!("bC{jj}_{}_hat", k + 1)];
            bld.b_prefs[bh[k]] =
                vec![format!("aC{jj}_{}", k + 1), format!("aC{jj}_{}_hat", k + 1)];
            // b^C_k: own a first (except b^C_2 ranks ahat^C_1 first), then
            // the hat vertex with an edge into it
            let prev = (k + 2) % 3;
            if k == 1 {
                bld.b_prefs[bp[k]] = vec![
                    format!("aC{jj}_{}_hat", prev + 1),
                    format!("aC{jj}_{}", k + 1),
                    format!("aC{jj}_{}_hat", k + 1),
                ];
            } else {
                bld.b_prefs[bp[k]] = vec![
                    format!("aC{jj}_{}", k + 1),
                    format!("aC{jj}_{}_hat", k + 1),
                    format!("aC{jj}_{}_hat", prev + 1),
                ];
            }
        }
        a_pos.push(ap);
        a_hat.push(ah);
        b_pos.push(bp);
        b_hat.push(bh);
    }

    // literal connections
    for (j, clause) in formula.clauses.iter().enumerate() {
        let jj = j + 1;
        for (k, lit) in clause.iter().enumerate() {
            let x = &formula.var_names[lit.var];
            if !lit.negated {
                // a^C_k gains bf_x between b^C_k and bhat^C_k; bf_x appends a^C_k
                let ap = a_pos[j][k];
                let hat_name = format!("bC{jj}_{}_hat", k + 1);
                let pos = bld.a_prefs[ap].iter().position(|n| *n == hat_name).unwrap();
                bld.a_prefs[ap].insert(pos, format!("bf_{x}"));
                bld.b_prefs[b_false[lit.var]].push(format!("aC{jj}_{}", k + 1));
            } else {
                // ahat^C_k appends bf_x; bf_x inserts ahat^C_k between a_x and abar_x
                let ah = a_hat[j][k];
                bld.a_prefs[ah].push(format!("bf_{x}"));
                let abar_name = format!("abar_{x}");
                let pos = bld.b_prefs[b_false[lit.var]]
                    .iter()
                    .position(|n| *n == abar_name)
                    .unwrap();
                bld.b_prefs[b_false[lit.var]].insert(pos, format!("aC{jj}_{}_hat", k + 1));
            }
        }
    }

    Ok(SatReduction {
        formula: formula.clone(),
        c: c.clone(),
        instance: bld.finish(None),
        a_path,
        b_path,
        a_var,
        a_bar,
        b_true,
        b_false,
        a_pos,
        a_hat,
        b_pos,
        b_hat,
    })
}

impl SatReduction {
    fn check_assignment(&self, assignment: &[bool]) -> Result<(), GadgetError> {
        if assignment.len() != self.formula.num_vars() {
            return Err(GadgetError::AssignmentDomainMismatch {
                expected: self.formula.num_vars(),
                got: assignment.len(),
            });
        }
        Ok(())
    }

    /// Smallest satisfied literal position of clause `j` (0-based), the
    /// deterministic choice for `k_C`.
    fn k_c(&self, assignment: &[bool], j: usize) -> Result<usize, GadgetError> {
        self.formula.clauses[j]
            .iter()
            .position(|lit| assignment[lit.var] != lit.negated)
            .ok_or(GadgetError::KCUndefined(j + 1))
    }

    /// The canonical popular matching built from a satisfying assignment.
    pub fn assignment_to_matching(&self, assignment: &[bool]) -> Result<Matching, GadgetError> {
        self.check_assignment(assignment)?;
        let mut edges = Vec::new();
        for i in 0..3 {
            edges.push((self.a_path[i], self.b_path[i]));
        }
        for x in 0..self.formula.num_vars() {
            if assignment[x] {
                edges.push((self.a_var[x], self.b_true[x]));
                edges.push((self.a_bar[x], self.b_false[x]));
            } else {
                edges.push((self.a_var[x], self.b_false[x]));
                edges.push((self.a_bar[x], self.b_true[x]));
            }
        }
        for j in 0..self.formula.clauses.len() {
            let k = self.k_c(assignment, j)?;
            for i in 0..3 {
                if i == k {
                    edges.push((self.a_pos[j][i], self.b_hat[j][i]));
                    edges.push((self.a_hat[j][i], self.b_pos[j][i]));
                } else {
                    edges.push((self.a_pos[j][i], self.b_pos[j][i]));
                    edges.push((self.a_hat[j][i], self.b_hat[j][i]));
                }
            }
        }
        Ok(Matching::new(&self.instance.instance, edges)?)
    }

    /// The published witness table for the matching of a satisfying
    /// assignment.
    pub fn table1_witness(&self, assignment: &[bool]) -> Result<Witness, GadgetError> {
        self.check_assignment(assignment)?;
        let c = &self.c;
        let one = rat(1);
        let two = rat(2);
        let mut y = Witness::zero(&self.instance.instance);
        let path_a = [-c.clone(), -one.clone(), c - &two];
        let path_b = [c.clone(), one.clone(), &two - c];
        for i in 0..3 {
            y.set(VertexId::a(self.a_path[i]), path_a[i].clone());
            y.set(VertexId::b(self.b_path[i]), path_b[i].clone());
        }
        for x in 0..self.formula.num_vars() {
            if assignment[x] {
                y.set(VertexId::a(self.a_var[x]), -one.clone());
                y.set(VertexId::b(self.b_true[x]), one.clone());
                y.set(VertexId::a(self.a_bar[x]), c - &two);
                y.set(VertexId::b(self.b_false[x]), &two - c);
            } else {
                y.set(VertexId::a(self.a_var[x]), one.clone());
                y.set(VertexId::b(self.b_true[x]), c.clone());
                y.set(VertexId::a(self.a_bar[x]), -c.clone());
                y.set(VertexId::b(self.b_false[x]), -one.clone());
            }
        }
        for j in 0..self.formula.clauses.len() {
            let k = self.k_c(assignment, j)?;
            // The published table has two off-k row patterns; which one a
            // position gets depends on (k, i) exactly as printed.
            let x_pattern = |_: ()| (-c.clone(), -one.clone(), c.clone(), one.clone());
            let y_pattern = |_: ()| (&two - c, one.clone(), c - &two, -one.clone());
            for i in 0..3 {
                let (ap, ah, bp, bh) = if i == k {
                    (one.clone(), -c.clone(), c.clone(), -one.clone())
                } else {
                    match (k, i) {
                        (0, _) => x_pattern(()),
                        (1, _) => y_pattern(()),
                        (2, 0) => y_pattern(()),
                        (2, 1) => x_pattern(()),
                        _ => unreachable!("positions are 0..3"),
                    }
                };
                y.set(VertexId::a(self.a_pos[j][i]), ap);
                y.set(VertexId::a(self.a_hat[j][i]), ah);
                y.set(VertexId::b(self.b_pos[j][i]), bp);
                y.set(VertexId::b(self.b_hat[j][i]), bh);
            }
        }
        Ok(y)
    }

    /// Reads the variable assignment off a matching that resolves every
    /// variable gadget.
    pub fn matching_to_assignment(&self, m: &Matching) -> Result<Vec<bool>, GadgetError> {
        let mut assignment = Vec::new();
        for x in 0..self.formula.num_vars() {
            let true_pair =
                m.contains(self.a_var[x], self.b_true[x]) && m.contains(self.a_bar[x], self.b_false[x]);
            let false_pair =
                m.contains(self.a_var[x], self.b_false[x]) && m.contains(self.a_bar[x], self.b_true[x]);
            match (true_pair, false_pair) {
                (true, false) => assignment.push(true),
                (false, true) => assignment.push(false),
                _ => {
                    return Err(GadgetError::VariableGadgetUnresolved(
                        self.formula.var_names[x].clone(),
                    ))
                }
            }
        }
        Ok(assignment)
    }
}

// ---------------------------------------------------------------------------
// Independent-set reduction
// ---------------------------------------------------------------------------

/// A digraph given by a fixed orientation of a simple graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DigraphInput {
    pub vertex_names: Vec<String>,
    pub arcs: Vec<(usize, usize)>,
}

impl DigraphInput {
    pub fn new(vertex_names: Vec<String>, arcs: Vec<(usize, usize)>) -> Result<Self, GadgetError> {
        let n = vertex_names.len();
        let mut seen = BTreeSet::new();
        for &(u, z) in &arcs {
            if u >= n || z >= n {
                return Err(GadgetError::BadDigraph(format!("arc ({u}, {z}) out of range")));
            }
            if u == z {
                return Err(GadgetError::BadDigraph(format!("self-loop at {u}")));
            }
            if !seen.insert((u.min(z), u.max(z))) {
                return Err(GadgetError::BadDigraph(format!(
                    "duplicate edge between {u} and {z}"
                )));
            }
        }
        Ok(DigraphInput { vertex_names, arcs })
    }

    pub fn numbered(n: usize, arcs: Vec<(usize, usize)>) -> Result<Self, GadgetError> {
        Self::new((1..=n).map(|i| format!("v{i}")).collect(), arcs)
    }

    pub fn n(&self) -> usize {
        self.vertex_names.len()
    }

    /// Size of a largest independent set, by brute force over subsets.
    pub fn independence_number(&self) -> usize {
        let n = self.n();
        (0u32..(1 << n))
            .filter(|mask| {
                self.arcs
                    .iter()
                    .all(|&(u, z)| mask & (1 << u) == 0 || mask & (1 << z) == 0)
            })
            .map(|mask| mask.count_ones() as usize)
            .max()
            .unwrap_or(0)
    }
}

/// The independent-set reduction for `c > 3`: a 4-cycle per graph vertex
/// plus one cross edge per arc, with edge costs 1 on the `{a_v, bhat_v}`
/// edges and 0 elsewhere. The best cost over popular matchings equals the
/// independence number.
#[derive(Clone, Debug)]
pub struct IsReduction {
    pub digraph: DigraphInput,
    pub c: Rational,
    pub instance: NamedInstance,
    a_v: Vec<usize>,
    a_hat: Vec<usize>,
    b_v: Vec<usize>,
    b_hat: Vec<usize>,
}

pub fn is_to_instance(g: &DigraphInput, c: &Rational) -> Result<IsReduction, GadgetError> {
    if *c <= rat(3) {
        return Err(GadgetError::COutOfRange {
            c: crate::model::format_rational(c),
            requirement: "c > 3",
        });
    }
    let n = g.n();
    let mut bld = Builder::new();
    let mut a_v = Vec::new();
    let mut a_hat = Vec::new();
    let mut b_v = Vec::new();
    let mut b_hat = Vec::new();
    for name in &g.vertex_names {
        a_v.push(bld.add_a(format!("a_{name}"), c.clone()));
        a_hat.push(bld.add_a(format!("ahat_{name}"), c.clone()));
        b_v.push(bld.add_b(format!("b_{name}"), rat(1)));
        b_hat.push(bld.add_b(format!("bhat_{name}"), rat(1)));
    }
    for v in 0..n {
        let name = &g.vertex_names[v];
        bld.a_prefs[a_v[v]] = vec![format!("b_{name}"), format!("bhat_{name}")];
        // ahat_v: b_v > bhat_v > incoming cross edges, ascending by tail
        let mut hat_prefs = vec![format!("b_{name}"), format!("bhat_{name}")];
        let mut tails: Vec<usize> =
            g.arcs.iter().filter(|&&(_, z)| z == v).map(|&(u, _)| u).collect();
        tails.sort_unstable();
        hat_prefs.extend(tails.iter().map(|&u| format!("bhat_{}", g.vertex_names[u])));
        bld.a_prefs[a_hat[v]] = hat_prefs;
        bld.b_prefs[b_v[v]] = vec![format!("a_{name}"), format!("ahat_{name}")];
        // bhat_v: outgoing cross edges first, ascending by head, then a_v, ahat_v
        let mut heads: Vec<usize> =
            g.arcs.iter().filter(|&&(u, _)| u == v).map(|&(_, z)| z).collect();
        heads.sort_unstable();
        let mut bhat_prefs: Vec<String> =
            heads.iter().map(|&z| format!("ahat_{}", g.vertex_names[z])).collect();
        bhat_prefs.push(format!("a_{name}"));
        bhat_prefs.push(format!("ahat_{name}"));
        bld.b_prefs[b_hat[v]] = bhat_prefs;
    }
    let omega: BTreeMap<(usize, usize), Rational> =
        (0..n).map(|v| ((a_v[v], b_hat[v]), rat(1))).collect();
    Ok(IsReduction {
        digraph: g.clone(),
        c: c.clone(),
        instance: bld.finish(Some(omega)),
        a_v,
        a_hat,
        b_v,
        b_hat,
    })
}

impl IsReduction {
    /// Straight pairs outside `xs`, swapped pairs inside `xs`.
    pub fn independent_set_to_matching(&self, xs: &BTreeSet<usize>) -> Matching {
        let mut edges = Vec::new();
        for v in 0..self.digraph.n() {
            if xs.contains(&v) {
                edges.push((self.a_v[v], self.b_hat[v]));
                edges.push((self.a_hat[v], self.b_v[v]));
            } else {
                edges.push((self.a_v[v], self.b_v[v]));
                edges.push((self.a_hat[v], self.b_hat[v]));
            }
        }
        Matching::new(&self.instance.instance, edges).expect("gadget matching")
    }

    /// The published witness table for the matching of an independent set.
    pub fn table2_witness(&self, xs: &BTreeSet<usize>) -> Witness {
        let c = &self.c;
        let one = rat(1);
        let mut y = Witness::zero(&self.instance.instance);
        for v in 0..self.digraph.n() {
            if xs.contains(&v) {
                y.set(VertexId::a(self.a_v[v]), one.clone());
                y.set(VertexId::b(self.b_v[v]), c.clone());
                y.set(VertexId::a(self.a_hat[v]), -c.clone());
                y.set(VertexId::b(self.b_hat[v]), -one.clone());
            } else {
                y.set(VertexId::a(self.a_v[v]), -c.clone());
                y.set(VertexId::b(self.b_v[v]), c.clone());
                y.set(VertexId::a(self.a_hat[v]), -one.clone());
                y.set(VertexId::b(self.b_hat[v]), one.clone());
            }
        }
        y
    }

    /// The vertices whose gadget is matched in the swapped orientation.
    pub fn matching_to_independent_set(&self, m: &Matching) -> BTreeSet<usize> {
        (0..self.digraph.n())
            .filter(|&v| m.contains(self.a_v[v], self.b_hat[v]))
            .collect()
    }

    /// Total omega-cost of a matching.
    pub fn omega_value(&self, m: &Matching) -> Rational {
        let omega = self.instance.omega.as_ref().expect("costed instance");
        m.edges()
            .map(|e| omega.get(&e).cloned().unwrap_or_else(|| rat(0)))
            .sum()
    }
}

/// The triangle with its canonical cyclic orientation.
pub fn triangle() -> DigraphInput {
    DigraphInput::numbered(3, vec![(0, 1), (1, 2), (2, 0)]).unwrap()
}

/// The path on three vertices, oriented left to right.
pub fn path3() -> DigraphInput {
    DigraphInput::numbered(3, vec![(0, 1), (1, 2)]).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ratio;
    use crate::witness::check_witness;

    #[test]
    fn condorcet_weights() {
        let zero_b = condorcet_instance(CondorcetVariant::ZeroB);
        assert_eq!(*zero_b.instance.weight(VertexId::b(0)), rat(0));
        let three_one = condorcet_instance(CondorcetVariant::ThreeOne);
        assert_eq!(*three_one.instance.weight(VertexId::a(2)), rat(3));
        assert_eq!(three_one.instance.edges().len(), 6);
        let custom = condorcet_instance(CondorcetVariant::Custom([
            rat(4),
            rat(4),
            rat(4),
            rat(1),
            rat(1),
        ]));
        assert_eq!(*custom.instance.weight(VertexId::a(0)), rat(4));
    }

    #[test]
    fn forced_edges_shape() {
        // base: K_{2,2}-ish unit instance with two disjoint edges to force
        let mut bld_names = condorcet_instance(CondorcetVariant::Custom([
            rat(1),
            rat(1),
            rat(1),
            rat(1),
            rat(1),
        ]));
        bld_names.omega = None;
        let red = forced_edges_reduce(&bld_names, &[(0, 0), (1, 1)]).unwrap();
        let j = &red.reduced.instance;
        assert_eq!(j.n_vertices(), bld_names.instance.n_vertices() + 20);
        // exactly 14 vertices of non-unit weight: per gadget six of weight 4
        // and one of weight 2
        let mut non_unit = 0;
        let mut weight4 = 0;
        let mut weight2 = 0;
        for v in j.vertices() {
            let w = j.weight(v);
            if *w != rat(1) {
                non_unit += 1;
                if *w == rat(4) {
                    weight4 += 1;
                } else if *w == rat(2) {
                    weight2 += 1;
                }
            }
        }
        assert_eq!(non_unit, 14);
        assert_eq!(weight4, 12);
        assert_eq!(weight2, 2);
    }

    #[test]
    fn pi_rho_round_trip() {
        let base = condorcet_instance(CondorcetVariant::Custom([
            rat(1),
            rat(1),
            rat(1),
            rat(1),
            rat(1),
        ]));
        let red = forced_edges_reduce(&base, &[(0, 0), (1, 1)]).unwrap();
        for m in crate::oracle::enumerate_matchings(&base.instance) {
            let projected = red.project_pi(&m);
            assert_eq!(red.project_rho(&projected), m);
        }
    }

    #[test]
    fn forced_edge_validation() {
        let base = condorcet_instance(CondorcetVariant::Custom([
            rat(1),
            rat(1),
            rat(1),
            rat(1),
            rat(1),
        ]));
        assert_eq!(
            forced_edges_reduce(&base, &[(0, 0)]).unwrap_err(),
            GadgetError::FWrongSize(1)
        );
        assert_eq!(
            forced_edges_reduce(&base, &[(0, 0), (1, 0)]).unwrap_err(),
            GadgetError::FNotMatching
        );
        let weighted = condorcet_instance(CondorcetVariant::ThreeOne);
        assert!(matches!(
            forced_edges_reduce(&weighted, &[(0, 0), (1, 1)]).unwrap_err(),
            GadgetError::UnitWeightsRequired(_)
        ));
    }

    #[test]
    fn cnf_parsing() {
        let f = CnfFormula::parse("(x|y|!z)&(!x|y|z)").unwrap();
        assert_eq!(f.num_vars(), 3);
        assert_eq!(f.clauses.len(), 2);
        assert!(f.evaluate(&[true, true, true]));
        assert!(CnfFormula::parse("(x|y)").is_err());
    }

    #[test]
    fn sat_instance_size() {
        let f = CnfFormula::parse("(x|y|z)").unwrap();
        let red = sat_to_instance(&f, &rat(2)).unwrap();
        // 6 + 4*3 + 12*1 = 30 vertices
        assert_eq!(red.instance.instance.n_vertices(), 30);
        assert!(sat_to_instance(&f, &rat(3)).is_err());
        assert!(sat_to_instance(&f, &rat(1)).is_err());
    }

    #[test]
    fn satisfying_assignment_yields_checked_witness() {
        let f = CnfFormula::parse("(x|y|z)").unwrap();
        let red = sat_to_instance(&f, &rat(2)).unwrap();
        let sigma = [true, false, false];
        let m = red.assignment_to_matching(&sigma).unwrap();
        // x true selects k_C = 1: swap pair at position 1
        assert!(m.contains(red.a_var[0], red.b_true[0]));
        assert!(m.contains(red.a_pos[0][0], red.b_hat[0][0]));
        assert!(m.contains(red.a_hat[0][0], red.b_pos[0][0]));
        let y = red.table1_witness(&sigma).unwrap();
        assert!(check_witness(&red.instance.instance, &m, &y).unwrap());
        assert_eq!(red.matching_to_assignment(&m).unwrap(), sigma.to_vec());
    }

    #[test]
    fn half_integral_c_works() {
        let f = CnfFormula::parse("(x|!y|z)&(!x|y|!z)").unwrap();
        let red = sat_to_instance(&f, &ratio(3, 2)).unwrap();
        let sigma = [true, true, false];
        assert!(red.formula.evaluate(&sigma));
        let m = red.assignment_to_matching(&sigma).unwrap();
        let y = red.table1_witness(&sigma).unwrap();
        assert!(check_witness(&red.instance.instance, &m, &y).unwrap());
    }

    #[test]
    fn unsatisfied_assignment_has_no_k_c() {
        let f = CnfFormula::parse("(x|y|z)").unwrap();
        let red = sat_to_instance(&f, &rat(2)).unwrap();
        assert_eq!(
            red.assignment_to_matching(&[false, false, false]).unwrap_err(),
            GadgetError::KCUndefined(1)
        );
    }

    #[test]
    fn is_reduction_shape_and_witness() {
        let red = is_to_instance(&triangle(), &rat(4)).unwrap();
        assert_eq!(red.instance.instance.n_vertices(), 12);
        // 4 gadget edges per vertex plus one cross edge per arc
        assert_eq!(red.instance.instance.edges().len(), 15);
        let xs: BTreeSet<usize> = [1].into_iter().collect();
        let m = red.independent_set_to_matching(&xs);
        let y = red.table2_witness(&xs);
        assert!(check_witness(&red.instance.instance, &m, &y).unwrap());
        assert_eq!(red.omega_value(&m), rat(1));
        assert_eq!(red.matching_to_independent_set(&m), xs);
        assert!(is_to_instance(&triangle(), &rat(3)).is_err());
    }

    #[test]
    fn empty_independent_set_has_value_zero() {
        let red = is_to_instance(&triangle(), &rat(4)).unwrap();
        let xs = BTreeSet::new();
        let m = red.independent_set_to_matching(&xs);
        assert_eq!(red.omega_value(&m), rat(0));
        let y = red.table2_witness(&xs);
        assert!(check_witness(&red.instance.instance, &m, &y).unwrap());
    }

    #[test]
    fn independence_numbers() {
        assert_eq!(triangle().independence_number(), 1);
        assert_eq!(path3().independence_number(), 2);
    }
}
