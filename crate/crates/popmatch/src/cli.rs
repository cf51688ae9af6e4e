//! Command-line surface and the text file formats tying the modules
//! together.
//!
//! All formats are line-based, versioned by a header line, and canonical:
//! parsing a formatted document and formatting it again reproduces it byte
//! for byte. Rationals are serialized as `p/q` strings so exactness
//! survives the round trip. Results go to stdout; diagnostics go to stderr.
//!
//! Exit codes: 0 success/positive outcome, 2 input error, 3 negative
//! outcome (no popular matching, unpopular, witness invalid), 4 enumeration
//! cap exceeded.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use thiserror::Error;

use crate::gadgets::{
    self, CnfFormula, CondorcetVariant, DigraphInput, GadgetError, NamedInstance,
};
use crate::model::{
    format_rational, parse_rational, Matching, ModelError, Rational, Side, VertexId,
};
use crate::oracle::{self, OracleError};
use crate::solver::{self, SolveOutcome, SolverError};
use crate::verifier;
use crate::witness::{self, Witness, WitnessError};

pub const INSTANCE_HEADER: &str = "popmatch instance v1";
pub const MATCHING_HEADER: &str = "popmatch matching v1";
pub const WITNESS_HEADER: &str = "popmatch witness v1";
pub const RESULT_HEADER: &str = "popmatch result v1";

/// Environment variable overriding the default enumeration cap.
pub const CAP_ENV_VAR: &str = "POPMATCH_CAP";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("unknown vertex name {0:?}")]
    UnknownVertex(String),
    #[error("duplicate vertex name {0:?}")]
    DuplicateName(String),
    #[error("vertex {0:?} is on the wrong side here")]
    WrongSide(String),
    #[error("the instance file carries no omega section")]
    MissingOmega,
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Witness(#[from] WitnessError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Gadget(#[from] GadgetError),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Oracle(OracleError::ScaleLimit { .. }) => 4,
            _ => 2,
        }
    }
}

// ---------------------------------------------------------------------------
// File formats
// ---------------------------------------------------------------------------

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_err(line: usize, msg: impl Into<String>) -> CliError {
    CliError::Parse { line, msg: msg.into() }
}

fn expect_header<'a>(
    mut lines: impl Iterator<Item = (usize, &'a str)>,
    header: &str,
) -> Result<(), CliError> {
    match lines.next() {
        Some((_, l)) if l == header => Ok(()),
        Some((n, l)) => Err(parse_err(n, format!("expected header {header:?}, got {l:?}"))),
        None => Err(parse_err(1, format!("empty document, expected header {header:?}"))),
    }
}

/// Serializes an instance in canonical form.
pub fn format_instance(ni: &NamedInstance) -> String {
    let inst = &ni.instance;
    let mut out = String::new();
    writeln!(out, "{INSTANCE_HEADER}").unwrap();
    for i in 0..inst.a_count() {
        writeln!(out, "a {} {}", ni.a_names[i], format_rational(inst.a_weight(i))).unwrap();
    }
    for j in 0..inst.b_count() {
        writeln!(out, "b {} {}", ni.b_names[j], format_rational(inst.b_weight(j))).unwrap();
    }
    for v in inst.vertices() {
        let mut line = format!("prefs {}", ni.name_of(v));
        for &u in inst.prefs(v) {
            let name = match v.side {
                Side::A => &ni.b_names[u],
                Side::B => &ni.a_names[u],
            };
            line.push(' ');
            line.push_str(name);
        }
        writeln!(out, "{line}").unwrap();
    }
    if let Some(omega) = &ni.omega {
        for ((a, b), cost) in omega {
            writeln!(
                out,
                "omega {} {} {}",
                ni.a_names[*a],
                ni.b_names[*b],
                format_rational(cost)
            )
            .unwrap();
        }
    }
    out
}

/// Parses the canonical instance format (blank lines and `#` comments are
/// tolerated on input).
pub fn parse_instance(text: &str) -> Result<NamedInstance, CliError> {
    let mut lines = content_lines(text).peekable();
    expect_header(&mut lines, INSTANCE_HEADER)?;

    let mut a_names: Vec<String> = Vec::new();
    let mut b_names: Vec<String> = Vec::new();
    let mut a_weights = Vec::new();
    let mut b_weights = Vec::new();
    let mut pref_lines: Vec<(usize, String, Vec<String>)> = Vec::new();
    let mut omega_lines: Vec<(usize, String, String, String)> = Vec::new();

    for (n, line) in lines {
        let mut tok = line.split_whitespace();
        let kind = tok.next().unwrap();
        match kind {
            "a" | "b" => {
                let name = tok.next().ok_or_else(|| parse_err(n, "missing vertex name"))?;
                let w = tok.next().ok_or_else(|| parse_err(n, "missing weight"))?;
                if tok.next().is_some() {
                    return Err(parse_err(n, "trailing tokens after weight"));
                }
                let w = parse_rational(w)?;
                if a_names.iter().chain(b_names.iter()).any(|x| x == name) {
                    return Err(CliError::DuplicateName(name.to_string()));
                }
                if kind == "a" {
                    a_names.push(name.to_string());
                    a_weights.push(w);
                } else {
                    b_names.push(name.to_string());
                    b_weights.push(w);
                }
            }
            "prefs" => {
                let name = tok.next().ok_or_else(|| parse_err(n, "missing vertex name"))?;
                pref_lines.push((
                    n,
                    name.to_string(),
                    tok.map(|s| s.to_string()).collect(),
                ));
            }
            "omega" => {
                let a = tok.next().ok_or_else(|| parse_err(n, "missing A name"))?;
                let b = tok.next().ok_or_else(|| parse_err(n, "missing B name"))?;
                let cost = tok.next().ok_or_else(|| parse_err(n, "missing cost"))?;
                omega_lines.push((n, a.to_string(), b.to_string(), cost.to_string()));
            }
            _ => return Err(parse_err(n, format!("unknown line kind {kind:?}"))),
        }
    }

    let a_index: BTreeMap<&str, usize> =
        a_names.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
    let b_index: BTreeMap<&str, usize> =
        b_names.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();

    let mut a_prefs: Vec<Vec<usize>> = vec![Vec::new(); a_names.len()];
    let mut b_prefs: Vec<Vec<usize>> = vec![Vec::new(); b_names.len()];
    for (n, name, prefs) in pref_lines {
        if let Some(&i) = a_index.get(name.as_str()) {
            a_prefs[i] = prefs
                .iter()
                .map(|p| {
                    b_index
                        .get(p.as_str())
                        .copied()
                        .ok_or_else(|| CliError::UnknownVertex(p.clone()))
                })
                .collect::<Result<_, _>>()?;
        } else if let Some(&j) = b_index.get(name.as_str()) {
            b_prefs[j] = prefs
                .iter()
                .map(|p| {
                    a_index
                        .get(p.as_str())
                        .copied()
                        .ok_or_else(|| CliError::UnknownVertex(p.clone()))
                })
                .collect::<Result<_, _>>()?;
        } else {
            return Err(parse_err(n, format!("prefs for unknown vertex {name:?}")));
        }
    }

    let instance = crate::model::Instance::build(a_prefs, b_prefs, a_weights, b_weights)?;

    let mut omega: Option<BTreeMap<(usize, usize), Rational>> = None;
    for (n, a, b, cost) in omega_lines {
        let &ai = a_index
            .get(a.as_str())
            .ok_or_else(|| CliError::UnknownVertex(a.clone()))?;
        let &bj = b_index
            .get(b.as_str())
            .ok_or_else(|| CliError::UnknownVertex(b.clone()))?;
        if !instance.is_edge(ai, bj) {
            return Err(parse_err(n, format!("omega on non-edge ({a}, {b})")));
        }
        omega
            .get_or_insert_with(BTreeMap::new)
            .insert((ai, bj), parse_rational(&cost)?);
    }

    Ok(NamedInstance { instance, a_names, b_names, omega })
}

pub fn format_matching(ni: &NamedInstance, m: &Matching) -> String {
    let mut out = String::new();
    writeln!(out, "{MATCHING_HEADER}").unwrap();
    for (a, b) in m.edges() {
        writeln!(out, "pair {} {}", ni.a_names[a], ni.b_names[b]).unwrap();
    }
    out
}

pub fn parse_matching(ni: &NamedInstance, text: &str) -> Result<Matching, CliError> {
    let mut lines = content_lines(text).peekable();
    expect_header(&mut lines, MATCHING_HEADER)?;
    let mut edges = Vec::new();
    for (n, line) in lines {
        let mut tok = line.split_whitespace();
        if tok.next() != Some("pair") {
            return Err(parse_err(n, "expected a `pair` line"));
        }
        let a = tok.next().ok_or_else(|| parse_err(n, "missing A name"))?;
        let b = tok.next().ok_or_else(|| parse_err(n, "missing B name"))?;
        let va = ni
            .vertex_by_name(a)
            .ok_or_else(|| CliError::UnknownVertex(a.to_string()))?;
        let vb = ni
            .vertex_by_name(b)
            .ok_or_else(|| CliError::UnknownVertex(b.to_string()))?;
        if va.side != Side::A {
            return Err(CliError::WrongSide(a.to_string()));
        }
        if vb.side != Side::B {
            return Err(CliError::WrongSide(b.to_string()));
        }
        edges.push((va.index, vb.index));
    }
    Ok(Matching::new(&ni.instance, edges)?)
}

pub fn format_witness(ni: &NamedInstance, y: &Witness) -> String {
    let mut out = String::new();
    writeln!(out, "{WITNESS_HEADER}").unwrap();
    for v in ni.instance.vertices() {
        writeln!(out, "y {} {}", ni.name_of(v), format_rational(y.get(v))).unwrap();
    }
    out
}

pub fn parse_witness(ni: &NamedInstance, text: &str) -> Result<Witness, CliError> {
    let mut lines = content_lines(text).peekable();
    expect_header(&mut lines, WITNESS_HEADER)?;
    let mut seen: BTreeMap<VertexId, Rational> = BTreeMap::new();
    for (n, line) in lines {
        let mut tok = line.split_whitespace();
        if tok.next() != Some("y") {
            return Err(parse_err(n, "expected a `y` line"));
        }
        let name = tok.next().ok_or_else(|| parse_err(n, "missing vertex name"))?;
        let value = tok.next().ok_or_else(|| parse_err(n, "missing value"))?;
        let v = ni
            .vertex_by_name(name)
            .ok_or_else(|| CliError::UnknownVertex(name.to_string()))?;
        if seen.insert(v, parse_rational(value)?).is_some() {
            return Err(parse_err(n, format!("duplicate value for {name}")));
        }
    }
    let missing = ni.instance.vertices().find(|v| !seen.contains_key(v));
    if let Some(v) = missing {
        return Err(CliError::UnknownVertex(format!(
            "{} (missing from the witness file)",
            ni.name_of(v)
        )));
    }
    Ok(Witness::from_fn(&ni.instance, |v| seen[&v].clone()))
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

#[derive(Parser)]
#[command(
    name = "popmatch",
    about = "Popular matchings with weighted voters: solve, verify, enumerate, generate"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a (c, 1)-weighted instance: popular matching + witness, or a
    /// non-existence verdict (exit 3).
    Solve {
        instance: PathBuf,
        /// Edges that must be in the matching, e.g. `a1:b2,a3:b1`.
        #[arg(long)]
        forced: Option<String>,
        /// Edges that must not be in the matching.
        #[arg(long)]
        forbidden: Option<String>,
        /// Only validate the weight pattern and report c.
        #[arg(long)]
        c_check: bool,
        /// Also write the result document to this path.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Verify popularity of a matching; reports margin and counterexample.
    Verify {
        instance: PathBuf,
        matching: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Print the exact vote margin between two matchings.
    Compare {
        instance: PathBuf,
        m1: PathBuf,
        m2: PathBuf,
    },
    /// Brute-force report: all popular matchings, popular edges, and
    /// optionally the best matching under the omega edge costs.
    Enumerate {
        instance: PathBuf,
        /// Enumeration cap (also settable via POPMATCH_CAP).
        #[arg(long)]
        cap: Option<u64>,
        /// Maximize the instance file's omega edge costs over popular matchings.
        #[arg(long)]
        omega: bool,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Check a witness certificate against an instance and matching.
    CheckWitness {
        instance: PathBuf,
        matching: PathBuf,
        witness: PathBuf,
    },
    /// Generate one of the built-in instance families.
    Gen {
        #[command(subcommand)]
        gadget: GenCommand,
        #[arg(short, long, global = true)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum GenCommand {
    /// The Condorcet example on 3+2 vertices.
    Condorcet {
        /// `zero-b`, `three-one`, or `custom`.
        #[arg(long, default_value = "three-one")]
        variant: String,
        /// Five weights for `custom`, e.g. `4,4,4,1,1`.
        #[arg(long)]
        weights: Option<String>,
    },
    /// Replace two forced edges of a unit-weight instance by edge gadgets.
    ForcedEdges {
        #[arg(long)]
        instance: PathBuf,
        /// Exactly two disjoint edges, e.g. `a1:b1,a2:b2`.
        #[arg(long)]
        forced: String,
    },
    /// The 3-SAT reduction (requires 1 < c <= 2).
    Sat {
        /// Formula such as `(x|y|!z)&(!x|y|z)`.
        #[arg(long)]
        cnf: String,
        #[arg(long, default_value = "2")]
        c: String,
    },
    /// The independent-set reduction with 0/1 edge costs (requires c > 3).
    IndependentSet {
        /// Preset graph: `triangle` or `path3`.
        #[arg(long)]
        graph: Option<String>,
        /// Vertex count for a custom graph.
        #[arg(long)]
        n: Option<usize>,
        /// Arcs of a custom graph, e.g. `1>2,2>3,3>1` (1-based).
        #[arg(long)]
        arcs: Option<String>,
        #[arg(long, default_value = "4")]
        c: String,
    },
    /// The standalone 6-path gadget (any positive c).
    SixPath {
        #[arg(long, default_value = "4")]
        c: String,
    },
}

fn parse_edge_list(ni: &NamedInstance, text: &str) -> Result<Vec<(usize, usize)>, CliError> {
    let mut edges = Vec::new();
    for part in text.split(',').filter(|p| !p.trim().is_empty()) {
        let (a, b) = part
            .trim()
            .split_once(':')
            .ok_or_else(|| parse_err(0, format!("edge {part:?} must look like aName:bName")))?;
        let va = ni
            .vertex_by_name(a.trim())
            .ok_or_else(|| CliError::UnknownVertex(a.trim().to_string()))?;
        let vb = ni
            .vertex_by_name(b.trim())
            .ok_or_else(|| CliError::UnknownVertex(b.trim().to_string()))?;
        if va.side != Side::A {
            return Err(CliError::WrongSide(a.trim().to_string()));
        }
        if vb.side != Side::B {
            return Err(CliError::WrongSide(b.trim().to_string()));
        }
        edges.push((va.index, vb.index));
    }
    Ok(edges)
}

fn effective_cap(flag: Option<u64>) -> Option<u64> {
    flag.or_else(|| std::env::var(CAP_ENV_VAR).ok().and_then(|v| v.parse().ok()))
}

fn cmd_solve(
    ni: &NamedInstance,
    forced: &[(usize, usize)],
    forbidden: &[(usize, usize)],
    c_check: bool,
) -> Result<(String, u8), CliError> {
    let mut out = String::new();
    writeln!(out, "{RESULT_HEADER}").unwrap();
    if c_check {
        let c = solver::validate_weights(&ni.instance)?;
        writeln!(out, "command c-check").unwrap();
        writeln!(out, "c {}", format_rational(&c)).unwrap();
        return Ok((out, 0));
    }
    let c = solver::validate_weights(&ni.instance)?;
    let result = solver::solve(&ni.instance, forced, forbidden)?;
    writeln!(out, "command solve").unwrap();
    writeln!(out, "c {}", format_rational(&c)).unwrap();
    let code = match &result.outcome {
        SolveOutcome::Found { matching, witness } => {
            writeln!(out, "outcome found").unwrap();
            for (a, b) in matching.edges() {
                writeln!(out, "matching {} {}", ni.a_names[a], ni.b_names[b]).unwrap();
            }
            for v in ni.instance.vertices() {
                writeln!(out, "witness {} {}", ni.name_of(v), format_rational(witness.get(v)))
                    .unwrap();
            }
            0
        }
        SolveOutcome::NoPopularMatching => {
            writeln!(out, "outcome no-popular-matching").unwrap();
            3
        }
    };
    for step in &result.trace {
        writeln!(
            out,
            "trace {} {} {} {}",
            ni.a_names[step.conflict.0],
            ni.b_names[step.conflict.1],
            step.dismissed_component,
            step.new_active.map_or("none".to_string(), |i| i.to_string())
        )
        .unwrap();
    }
    Ok((out, code))
}

fn cmd_verify(ni: &NamedInstance, m: &Matching) -> Result<(String, u8), CliError> {
    let result = verifier::is_popular(&ni.instance, m);
    let mut out = String::new();
    writeln!(out, "{RESULT_HEADER}").unwrap();
    writeln!(out, "command verify").unwrap();
    writeln!(out, "outcome {}", if result.is_popular { "popular" } else { "unpopular" })
        .unwrap();
    writeln!(out, "margin {}", format_rational(&result.margin)).unwrap();
    if let Some(ce) = &result.counterexample {
        for (a, b) in ce.edges() {
            writeln!(out, "counterexample {} {}", ni.a_names[a], ni.b_names[b]).unwrap();
        }
    }
    Ok((out, if result.is_popular { 0 } else { 3 }))
}

fn cmd_compare(ni: &NamedInstance, m1: &Matching, m2: &Matching) -> (String, u8) {
    let delta = crate::model::delta_w(&ni.instance, m1, m2);
    let mut out = String::new();
    writeln!(out, "{RESULT_HEADER}").unwrap();
    writeln!(out, "command compare").unwrap();
    writeln!(out, "delta {}", format_rational(&delta)).unwrap();
    (out, 0)
}

fn cmd_enumerate(
    ni: &NamedInstance,
    cap: Option<u64>,
    use_omega: bool,
) -> Result<(String, u8), CliError> {
    let report = oracle::popular_matchings_bruteforce(&ni.instance, cap)?;
    let mut out = String::new();
    writeln!(out, "{RESULT_HEADER}").unwrap();
    writeln!(out, "command enumerate").unwrap();
    writeln!(out, "total {}", report.total_enumerated).unwrap();
    writeln!(out, "popular-count {}", report.popular.len()).unwrap();
    writeln!(out, "max-cardinality {}", report.max_cardinality).unwrap();
    for &(a, b) in &report.popular_edges {
        writeln!(out, "popular-edge {} {}", ni.a_names[a], ni.b_names[b]).unwrap();
    }
    for (i, m) in report.popular.iter().enumerate() {
        for (a, b) in m.edges() {
            writeln!(out, "popular {} {} {}", i + 1, ni.a_names[a], ni.b_names[b]).unwrap();
        }
    }
    if use_omega {
        let omega = ni.omega.as_ref().ok_or(CliError::MissingOmega)?;
        match oracle::max_cost_popular(&ni.instance, omega, cap)? {
            Some((m, value)) => {
                writeln!(out, "max-omega {}", format_rational(&value)).unwrap();
                for (a, b) in m.edges() {
                    writeln!(out, "omega-matching {} {}", ni.a_names[a], ni.b_names[b])
                        .unwrap();
                }
            }
            None => {
                writeln!(out, "max-omega none").unwrap();
            }
        }
    }
    Ok((out, 0))
}

fn cmd_check_witness(ni: &NamedInstance, m: &Matching, y: &Witness) -> Result<(String, u8), CliError> {
    let ok = witness::check_witness(&ni.instance, m, y)?;
    let mut out = String::new();
    writeln!(out, "{RESULT_HEADER}").unwrap();
    writeln!(out, "command check-witness").unwrap();
    writeln!(out, "outcome {}", if ok { "ok" } else { "invalid" }).unwrap();
    if !ok {
        let sum = y.sum();
        if !num_traits::Zero::is_zero(&sum) {
            writeln!(out, "sum {}", format_rational(&sum)).unwrap();
        }
        for v in ni.instance.vertices() {
            let bound = if m.is_matched(v) {
                -ni.instance.weight(v).clone()
            } else {
                Rational::from_integer(0.into())
            };
            if *y.get(v) < bound {
                writeln!(out, "bound {}", ni.name_of(v)).unwrap();
            }
        }
        for (a, b) in witness::conflicting_edges(&ni.instance, m, y) {
            writeln!(out, "conflict {} {}", ni.a_names[a], ni.b_names[b]).unwrap();
        }
    }
    Ok((out, if ok { 0 } else { 3 }))
}

fn cmd_gen(gadget: &GenCommand) -> Result<(String, u8), CliError> {
    let ni = match gadget {
        GenCommand::Condorcet { variant, weights } => {
            let v = match (variant.as_str(), weights) {
                ("zero-b", None) => CondorcetVariant::ZeroB,
                ("three-one", None) => CondorcetVariant::ThreeOne,
                ("custom", Some(w)) => {
                    let parts: Vec<Rational> = w
                        .split(',')
                        .map(|p| parse_rational(p.trim()))
                        .collect::<Result<_, _>>()?;
                    let arr: [Rational; 5] = parts.try_into().map_err(|_| {
                        parse_err(0, "custom variant needs exactly five weights")
                    })?;
                    CondorcetVariant::Custom(arr)
                }
                _ => {
                    return Err(parse_err(
                        0,
                        "variant must be zero-b, three-one, or custom with --weights",
                    ))
                }
            };
            gadgets::condorcet_instance(v)
        }
        GenCommand::ForcedEdges { instance, forced } => {
            let base = parse_instance(&std::fs::read_to_string(instance)?)?;
            let edges = parse_edge_list(&base, forced)?;
            gadgets::forced_edges_reduce(&base, &edges)?.reduced
        }
        GenCommand::Sat { cnf, c } => {
            let formula = CnfFormula::parse(cnf)?;
            let c = parse_rational(c)?;
            gadgets::sat_to_instance(&formula, &c)?.instance
        }
        GenCommand::IndependentSet { graph, n, arcs, c } => {
            let c = parse_rational(c)?;
            let g = match (graph.as_deref(), n, arcs) {
                (Some("triangle"), None, None) => gadgets::triangle(),
                (Some("path3"), None, None) => gadgets::path3(),
                (None, Some(n), Some(arcs)) => {
                    let parsed: Vec<(usize, usize)> = arcs
                        .split(',')
                        .filter(|p| !p.trim().is_empty())
                        .map(|p| {
                            let (u, z) = p.trim().split_once('>').ok_or_else(|| {
                                parse_err(0, format!("arc {p:?} must look like u>z"))
                            })?;
                            let u: usize = u
                                .trim()
                                .parse()
                                .map_err(|_| parse_err(0, format!("bad vertex {u:?}")))?;
                            let z: usize = z
                                .trim()
                                .parse()
                                .map_err(|_| parse_err(0, format!("bad vertex {z:?}")))?;
                            if u == 0 || z == 0 {
                                return Err(parse_err(0, "vertices are numbered from 1"));
                            }
                            Ok((u - 1, z - 1))
                        })
                        .collect::<Result<_, CliError>>()?;
                    DigraphInput::numbered(*n, parsed)?
                }
                _ => {
                    return Err(parse_err(
                        0,
                        "use --graph triangle|path3, or --n with --arcs",
                    ))
                }
            };
            gadgets::is_to_instance(&g, &c)?.instance
        }
        GenCommand::SixPath { c } => {
            let c = parse_rational(c)?;
            gadgets::six_path_instance(&c)
        }
    };
    Ok((format_instance(&ni), 0))
}

fn read_instance(path: &PathBuf) -> Result<NamedInstance, CliError> {
    parse_instance(&std::fs::read_to_string(path)?)
}

fn dispatch(cli: Cli) -> Result<(String, u8, Option<PathBuf>), CliError> {
    match cli.command {
        Command::Solve { instance, forced, forbidden, c_check, out } => {
            let ni = read_instance(&instance)?;
            let forced = forced.map(|s| parse_edge_list(&ni, &s)).transpose()?.unwrap_or_default();
            let forbidden =
                forbidden.map(|s| parse_edge_list(&ni, &s)).transpose()?.unwrap_or_default();
            let (doc, code) = cmd_solve(&ni, &forced, &forbidden, c_check)?;
            Ok((doc, code, out))
        }
        Command::Verify { instance, matching, out } => {
            let ni = read_instance(&instance)?;
            let m = parse_matching(&ni, &std::fs::read_to_string(matching)?)?;
            let (doc, code) = cmd_verify(&ni, &m)?;
            Ok((doc, code, out))
        }
        Command::Compare { instance, m1, m2 } => {
            let ni = read_instance(&instance)?;
            let m1 = parse_matching(&ni, &std::fs::read_to_string(m1)?)?;
            let m2 = parse_matching(&ni, &std::fs::read_to_string(m2)?)?;
            let (doc, code) = cmd_compare(&ni, &m1, &m2);
            Ok((doc, code, None))
        }
        Command::Enumerate { instance, cap, omega, out } => {
            let ni = read_instance(&instance)?;
            let (doc, code) = cmd_enumerate(&ni, effective_cap(cap), omega)?;
            Ok((doc, code, out))
        }
        Command::CheckWitness { instance, matching, witness } => {
            let ni = read_instance(&instance)?;
            let m = parse_matching(&ni, &std::fs::read_to_string(matching)?)?;
            let y = parse_witness(&ni, &std::fs::read_to_string(witness)?)?;
            let (doc, code) = cmd_check_witness(&ni, &m, &y)?;
            Ok((doc, code, None))
        }
        Command::Gen { gadget, out } => {
            let (doc, code) = cmd_gen(&gadget)?;
            Ok((doc, code, out))
        }
    }
}

/// Entry point used by the `popmatch` binary.
pub fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok((doc, code, out)) => {
            if let Some(path) = out {
                if let Err(e) = std::fs::write(&path, &doc) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            }
            print!("{doc}");
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::rat;

    fn sample() -> NamedInstance {
        gadgets::condorcet_instance(CondorcetVariant::ThreeOne)
    }

    #[test]
    fn instance_round_trip_is_canonical() {
        let ni = sample();
        let text = format_instance(&ni);
        let parsed = parse_instance(&text).unwrap();
        assert_eq!(parsed.instance, ni.instance);
        assert_eq!(parsed.a_names, ni.a_names);
        assert_eq!(format_instance(&parsed), text);
    }

    #[test]
    fn omega_round_trip() {
        let red = gadgets::is_to_instance(&gadgets::triangle(), &rat(4)).unwrap();
        let text = format_instance(&red.instance);
        let parsed = parse_instance(&text).unwrap();
        assert_eq!(parsed.omega, red.instance.omega);
        assert_eq!(format_instance(&parsed), text);
    }

    #[test]
    fn matching_and_witness_round_trip() {
        let ni = sample();
        let m = Matching::new(&ni.instance, [(0, 0), (1, 1)]).unwrap();
        let mt = format_matching(&ni, &m);
        assert_eq!(parse_matching(&ni, &mt).unwrap(), m);

        let y = Witness::from_fn(&ni.instance, |v| match v.side {
            Side::A => rat(-1),
            Side::B => rat(1),
        });
        let yt = format_witness(&ni, &y);
        let parsed = parse_witness(&ni, &yt).unwrap();
        assert_eq!(format_witness(&ni, &parsed), yt);
    }

    #[test]
    fn malformed_inputs_are_rejected() {
        assert!(parse_instance("nonsense").is_err());
        let bad_weight = format!("{INSTANCE_HEADER}\na a1 1/0\n");
        assert!(parse_instance(&bad_weight).is_err());
        let dup = format!("{INSTANCE_HEADER}\na x 1\nb x 1\n");
        assert!(matches!(parse_instance(&dup), Err(CliError::DuplicateName(_))));
        let ni = sample();
        assert!(parse_matching(&ni, "popmatch matching v1\npair a1 a2\n").is_err());
        // missing vertices in a witness file
        assert!(parse_witness(&ni, "popmatch witness v1\ny a1 0\n").is_err());
    }

    #[test]
    fn comments_and_blank_lines_are_tolerated() {
        let ni = sample();
        let mut text = String::from("# a comment\n\n");
        text.push_str(&format_instance(&ni));
        let parsed = parse_instance(&text).unwrap();
        assert_eq!(parsed.instance, ni.instance);
    }
}
