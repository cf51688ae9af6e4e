//! Acceptance suite: one test per criterion, each printing a single
//! pass/fail line (run with `--nocapture` to see them). All comparisons are
//! exact; the only tolerances are the per-criterion wall-clock budgets.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use popmatch::gadgets;
use popmatch::model::{delta_w, rat, ratio, Instance, Matching, Rational, VertexId};
use rand::Rng;
use popmatch::oracle;
use popmatch::solver::{self, SolveOutcome};
use popmatch::verifier;
use popmatch::witness::{check_witness, Witness};

use common::{all_graphs, appendix_instance, fig1, is_stable, random_instance, rng};

fn report(criterion: &str, start: Instant, budget: Duration, detail: &str) {
    let elapsed = start.elapsed();
    println!(
        "criterion {criterion}: PASS ({elapsed:.2?} of {budget:.2?} budget) — {detail}"
    );
    assert!(
        elapsed < budget,
        "criterion {criterion} exceeded its time budget: {elapsed:.2?} >= {budget:.2?}"
    );
}

/// Figure-1 non-existence: both weight variants admit no popular matching
/// among all 13 matchings, via the enumerate command end to end.
#[test]
fn criterion_01_condorcet_nonexistence() {
    let start = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    for variant in [gadgets::CondorcetVariant::ZeroB, gadgets::CondorcetVariant::ThreeOne] {
        let ni = gadgets::condorcet_instance(variant);
        let path = dir.path().join("fig1.pm");
        std::fs::write(&path, popmatch::cli::format_instance(&ni)).unwrap();
        let out = std::process::Command::new(env!("CARGO_BIN_EXE_popmatch"))
            .arg("enumerate")
            .arg(&path)
            .output()
            .unwrap();
        assert!(out.status.success(), "enumerate failed: {out:?}");
        let stdout = String::from_utf8(out.stdout).unwrap();
        assert!(stdout.contains("total 13"), "expected 13 matchings:\n{stdout}");
        assert!(stdout.contains("popular-count 0"), "expected none popular:\n{stdout}");
    }
    report("1", start, Duration::from_secs(1), "13 matchings enumerated, zero popular in both weight variants");
}

fn candidate_rows(
    sets: &[solver::ComponentWitnessSet],
    comps: &[solver::CpComponent],
    member: VertexId,
) -> Vec<(BTreeMap<VertexId, Rational>, BTreeSet<(usize, usize)>)> {
    let idx = comps.iter().position(|c| c.vertices.contains(&member)).unwrap();
    sets[idx]
        .candidates
        .iter()
        .map(|c| (c.values.clone(), c.matching.iter().copied().collect()))
        .collect()
}

fn vals(pairs: &[(VertexId, Rational)]) -> BTreeMap<VertexId, Rational> {
    pairs.iter().cloned().collect()
}

/// The appendix golden run: pruning stages reproduce the published edge
/// sets, the component witness tables match symbolically in c (pinned by
/// two evaluation points), and the solver's output is the expected
/// verified 8-edge popular matching.
#[test]
fn criterion_02_appendix_golden_run() {
    let start = Instant::now();
    let a = VertexId::a;
    let b = VertexId::b;

    let fig8: BTreeSet<(usize, usize)> = [
        (0, 0), (0, 1), (1, 0), (1, 1), (2, 2), (2, 5), (3, 2), (3, 3), (4, 3),
        (4, 4), (5, 4), (5, 5), (6, 7), (7, 6), (7, 7), (8, 6), (8, 8), (9, 2),
    ]
    .into_iter()
    .collect();
    let mut fig9 = fig8.clone();
    fig9.remove(&(9, 2));
    let mut fig10 = fig9.clone();
    fig10.remove(&(8, 6));

    // a linear form in c is pinned exactly by two evaluation points
    for c in [rat(4), ratio(7, 2)] {
        let inst = appendix_instance(&c);
        let posts = solver::compute_posts(&inst);
        let h0 = solver::build_h_deg_a2(&inst, &posts);
        assert_eq!(h0.edges, fig8, "H^deg(A)<=2 edge set");
        let h1 = solver::prune_cycle_incident(&h0);
        assert_eq!(h1.edges, fig9, "H^C+T edge set");
        let h_cp = solver::build_h_cp(&inst, &h1).unwrap();
        assert_eq!(h_cp.edges, fig10, "H^C+P edge set");

        let sets = solver::component_witness_sets(&inst, &h_cp, &c).unwrap();
        let one = rat(1);
        let two = rat(2);

        // 4-cycle on a1, a2, b1, b2
        let c1_straight: BTreeSet<(usize, usize)> = [(0, 0), (1, 1)].into_iter().collect();
        let c1_swap: BTreeSet<(usize, usize)> = [(0, 1), (1, 0)].into_iter().collect();
        assert_eq!(
            candidate_rows(&sets, &h_cp.components, a(0)),
            vec![
                (vals(&[(a(1), -c.clone()), (a(0), -one.clone()), (b(1), c.clone()), (b(0), one.clone())]), c1_straight.clone()),
                (vals(&[(a(1), one.clone()), (a(0), -c.clone()), (b(1), c.clone()), (b(0), -one.clone())]), c1_swap),
                (vals(&[(a(1), &two - &c), (a(0), one.clone()), (b(1), &c - &two), (b(0), -one.clone())]), c1_straight.clone()),
                (vals(&[(a(1), &one - &c), (a(0), rat(0)), (b(1), &c - &one), (b(0), rat(0))]), c1_straight),
            ],
            "witness table rows for the 4-cycle"
        );

        // 8-cycle on a3..a6, b3..b6
        let c2_first: BTreeSet<(usize, usize)> =
            [(3, 2), (2, 5), (5, 4), (4, 3)].into_iter().collect();
        let c2_second: BTreeSet<(usize, usize)> =
            [(2, 2), (3, 3), (4, 4), (5, 5)].into_iter().collect();
        assert_eq!(
            candidate_rows(&sets, &h_cp.components, a(2)),
            vec![
                (
                    vals(&[
                        (a(3), -c.clone()), (b(3), -one.clone()),
                        (a(2), -one.clone()), (b(2), c.clone()),
                        (a(5), -c.clone()), (b(5), one.clone()),
                        (a(4), one.clone()), (b(4), c.clone()),
                    ]),
                    c2_first
                ),
                (
                    vals(&[
                        (a(3), one.clone()), (b(3), -one.clone()),
                        (a(2), -c.clone()), (b(2), c.clone()),
                        (a(5), one.clone()), (b(5), -one.clone()),
                        (a(4), &two - &c), (b(4), &c - &two),
                    ]),
                    c2_second
                ),
            ],
            "witness table rows for the 8-cycle"
        );

        // path on a7, b8, a8, b7
        let p_odd: BTreeSet<(usize, usize)> = [(6, 7), (7, 6)].into_iter().collect();
        let p_even: BTreeSet<(usize, usize)> = [(7, 7)].into_iter().collect();
        assert_eq!(
            candidate_rows(&sets, &h_cp.components, a(6)),
            vec![
                (vals(&[(a(7), one.clone()), (b(7), c.clone()), (a(6), -c.clone()), (b(6), -one.clone())]), p_odd),
                (vals(&[(a(7), &one - &c), (b(7), &c - &one), (a(6), rat(0)), (b(6), rat(0))]), p_even),
            ],
            "witness table rows for the path"
        );

        // single edge a9-b9
        let e_m: BTreeSet<(usize, usize)> = [(8, 8)].into_iter().collect();
        assert_eq!(
            candidate_rows(&sets, &h_cp.components, a(8)),
            vec![
                (vals(&[(a(8), -c.clone()), (b(8), c.clone())]), e_m.clone()),
                (vals(&[(a(8), &two - &c), (b(8), &c - &two)]), e_m.clone()),
                (vals(&[(a(8), &one - &c), (b(8), &c - &one)]), e_m),
            ],
            "witness table rows for the edge component"
        );

        // isolated a10 and b10
        assert_eq!(
            candidate_rows(&sets, &h_cp.components, a(9)),
            vec![(vals(&[(a(9), rat(0))]), BTreeSet::new())]
        );
        assert_eq!(
            candidate_rows(&sets, &h_cp.components, b(9)),
            vec![(vals(&[(b(9), rat(0))]), BTreeSet::new())]
        );

        // the solver's verified output
        let result = solver::solve(&inst, &[], &[]).unwrap();
        let (matching, witness) = result.found().expect("appendix instance has a popular matching");
        assert_eq!(matching.len(), 8, "output matching has 8 edges");
        for e in [(1, 0), (0, 1), (7, 7), (8, 8)] {
            assert!(matching.contains(e.0, e.1), "output must contain {e:?}");
        }
        assert!(check_witness(&inst, matching, witness).unwrap());
        assert!(verifier::is_popular(&inst, matching).is_popular);
    }
    report("2", start, Duration::from_secs(1), "Figs. 8-10 edge sets, all witness table rows (symbolic in c), verified 8-edge output");
}

fn criterion_03_suite() -> Vec<(Instance, Rational)> {
    let mut r = rng(0x5eed_0003);
    let cs = [ratio(7, 2), rat(4), rat(10)];
    (0..200)
        .map(|i| {
            let c = cs[i % 3].clone();
            (random_instance(&mut r, 5, 5, 0.6, &c, &rat(1)), c)
        })
        .collect()
}

/// Solver-oracle equivalence on 200 random (c, 1) instances.
#[test]
fn criterion_03_solver_oracle_equivalence() {
    let start = Instant::now();
    let mut found = 0;
    for (inst, c) in criterion_03_suite() {
        let report = oracle::popular_matchings_bruteforce(&inst, None).unwrap();
        let result = solver::solve(&inst, &[], &[]).unwrap();
        match &result.outcome {
            SolveOutcome::Found { matching, witness } => {
                found += 1;
                assert!(
                    !report.popular.is_empty(),
                    "solver found a matching but the oracle found none (c = {c})"
                );
                assert!(verifier::is_popular(&inst, matching).is_popular);
                assert!(check_witness(&inst, matching, witness).unwrap());
                assert_eq!(
                    matching.len(),
                    report.max_cardinality,
                    "solver output must have maximum popular cardinality"
                );
            }
            SolveOutcome::NoPopularMatching => {
                assert!(
                    report.popular.is_empty(),
                    "oracle found a popular matching but the solver did not (c = {c})"
                );
            }
        }
        // the pruned graph keeps every popular edge
        let posts = solver::compute_posts(&inst);
        let h0 = solver::build_h_deg_a2(&inst, &posts);
        let h1 = solver::prune_cycle_incident(&h0);
        let h_cp = solver::build_h_cp(&inst, &h1).unwrap();
        for e in &report.popular_edges {
            assert!(h_cp.edges.contains(e), "popular edge {e:?} missing from H^C+P");
        }
    }
    report(
        "3",
        start,
        Duration::from_secs(300),
        &format!("200 instances agree with the oracle ({found} with popular matchings)"),
    );
}

/// Popular-matching count bound 2^(n/4) on the criterion-3 suite.
#[test]
fn criterion_04_count_bound() {
    let start = Instant::now();
    for (inst, _) in criterion_03_suite() {
        let report = oracle::popular_matchings_bruteforce(&inst, None).unwrap();
        let count = report.popular.len() as u128;
        let n = inst.n_vertices() as u32;
        // count <= 2^(n/4)  <=>  count^4 <= 2^n
        assert!(
            count.pow(4) <= 1u128 << n,
            "count {count} exceeds 2^({n}/4)"
        );
    }
    report("4", start, Duration::from_secs(300), "popular counts within 2^(n/4) on all 200 instances");
}

/// Witness tables: Table-1 witnesses for every satisfying assignment of
/// every small formula, Table-2 witnesses for every independent set of
/// every small graph.
#[test]
fn criterion_05_witness_tables() {
    let start = Instant::now();
    // all 3-literal clauses over 4 variables with distinct variables
    let vars = ["w", "x", "y", "z"];
    let mut clauses = Vec::new();
    for i in 0..4 {
        for j in i + 1..4 {
            for k in j + 1..4 {
                for signs in 0..8u32 {
                    let lit = |v: usize, bit: u32| {
                        format!("{}{}", if signs & (1 << bit) != 0 { "!" } else { "" }, vars[v])
                    };
                    clauses.push(format!("({}|{}|{})", lit(i, 0), lit(j, 1), lit(k, 2)));
                }
            }
        }
    }
    let mut formulas: Vec<String> = clauses.clone();
    for c1 in &clauses {
        for c2 in &clauses {
            formulas.push(format!("{c1}&{c2}"));
        }
    }
    let c2 = rat(2);
    let mut checked = 0u64;
    for text in &formulas {
        let formula = gadgets::CnfFormula::parse(text).unwrap();
        let red = gadgets::sat_to_instance(&formula, &c2).unwrap();
        let nv = formula.num_vars();
        for bits in 0..(1u32 << nv) {
            let sigma: Vec<bool> = (0..nv).map(|v| bits & (1 << v) != 0).collect();
            if !formula.evaluate(&sigma) {
                continue;
            }
            let m = red.assignment_to_matching(&sigma).unwrap();
            let y = red.table1_witness(&sigma).unwrap();
            assert!(
                check_witness(&red.instance.instance, &m, &y).unwrap(),
                "Table-1 witness rejected for {text} under {sigma:?}"
            );
            checked += 1;
        }
    }

    let c4 = rat(4);
    let mut is_checked = 0u64;
    for n in 1..=4usize {
        for arcs in all_graphs(n) {
            let g = gadgets::DigraphInput::numbered(n, arcs).unwrap();
            let red = gadgets::is_to_instance(&g, &c4).unwrap();
            for mask in 0u32..(1 << n) {
                let xs: BTreeSet<usize> = (0..n).filter(|v| mask & (1 << v) != 0).collect();
                let independent = g
                    .arcs
                    .iter()
                    .all(|&(u, z)| !(xs.contains(&u) && xs.contains(&z)));
                if !independent {
                    continue;
                }
                let m = red.independent_set_to_matching(&xs);
                let y = red.table2_witness(&xs);
                assert!(
                    check_witness(&red.instance.instance, &m, &y).unwrap(),
                    "Table-2 witness rejected for {:?} with X = {xs:?}",
                    g.arcs
                );
                is_checked += 1;
            }
        }
    }
    report(
        "5",
        start,
        Duration::from_secs(120),
        &format!("{checked} Table-1 and {is_checked} Table-2 witnesses verified"),
    );
}

/// Optimal-popular-matching value equals the independence number on all
/// small graphs.
#[test]
fn criterion_06_is_optimality() {
    let start = Instant::now();
    let c4 = rat(4);
    let mut cases: Vec<gadgets::DigraphInput> = vec![gadgets::triangle(), gadgets::path3()];
    for n in 1..=4usize {
        for arcs in all_graphs(n) {
            cases.push(gadgets::DigraphInput::numbered(n, arcs).unwrap());
        }
    }
    for g in &cases {
        let red = gadgets::is_to_instance(g, &c4).unwrap();
        let omega = red.instance.omega.as_ref().unwrap();
        let (_, value) = oracle::max_cost_popular(&red.instance.instance, omega, None)
            .unwrap()
            .expect("the straight matching is always popular");
        assert_eq!(
            value,
            rat(g.independence_number() as i64),
            "max omega != independence number for {:?}",
            g.arcs
        );
    }
    report(
        "6",
        start,
        Duration::from_secs(300),
        &format!("max omega equals alpha(G) on {} graphs", cases.len()),
    );
}

/// Projection laws of the forced-edge reduction: rho(pi(M)) = M on all
/// matchings, and exact margin preservation on random pairs.
#[test]
fn criterion_07_projection_laws() {
    let start = Instant::now();
    let mut r = rng(0x5eed_0007);
    let mut done = 0;
    while done < 50 {
        let inst = random_instance(&mut r, 3, 3, 0.7, &rat(1), &rat(1));
        if inst.a_count() != 3 || inst.b_count() != 3 {
            continue;
        }
        // first two disjoint edges in canonical order
        let mut forced: Vec<(usize, usize)> = Vec::new();
        for &(a, b) in inst.edges() {
            if !forced.iter().any(|&(fa, fb)| fa == a || fb == b) {
                forced.push((a, b));
                if forced.len() == 2 {
                    break;
                }
            }
        }
        if forced.len() < 2 {
            continue;
        }
        let named = gadgets::NamedInstance {
            instance: inst.clone(),
            a_names: (1..=3).map(|i| format!("a{i}")).collect(),
            b_names: (1..=3).map(|i| format!("b{i}")).collect(),
            omega: None,
        };
        let red = gadgets::forced_edges_reduce(&named, &forced).unwrap();
        let all: Vec<Matching> = oracle::enumerate_matchings(&inst).collect();
        for m in &all {
            assert_eq!(&red.project_rho(&red.project_pi(m)), m, "rho(pi(M)) != M");
        }
        for _ in 0..100 {
            let m1 = &all[r.gen_range(0..all.len())];
            let m2 = &all[r.gen_range(0..all.len())];
            let lhs = delta_w(&inst, m1, m2);
            let rhs = delta_w(
                &red.reduced.instance,
                &red.project_pi(m1),
                &red.project_pi(m2),
            );
            assert_eq!(lhs, rhs, "margin not preserved by the projection");
        }
        done += 1;
    }
    report("7", start, Duration::from_secs(120), "rho∘pi = id and exact margin preservation on 50 instances");
}

/// Every stable matching of a unit-weight instance is popular.
#[test]
fn criterion_08_stable_matchings_are_popular() {
    let start = Instant::now();
    let mut r = rng(0x5eed_0008);
    let mut stable_total = 0;
    for _ in 0..100 {
        let inst = random_instance(&mut r, 6, 6, 0.5, &rat(1), &rat(1));
        for m in oracle::enumerate_matchings(&inst) {
            if is_stable(&inst, &m) {
                stable_total += 1;
                assert!(
                    verifier::is_popular(&inst, &m).is_popular,
                    "stable matching {:?} is not popular",
                    m.edge_vec()
                );
            }
        }
    }
    report(
        "8",
        start,
        Duration::from_secs(120),
        &format!("{stable_total} stable matchings across 100 instances, all popular"),
    );
}

/// The 6-path gadget admits a popular matching at c = 2 but none at c = 4.
#[test]
fn criterion_09_six_path_threshold() {
    let start = Instant::now();
    let low = gadgets::six_path_instance(&rat(2));
    assert!(oracle::popular_exists(&low.instance, None).unwrap().is_some());
    let high = gadgets::six_path_instance(&rat(4));
    assert!(oracle::popular_exists(&high.instance, None).unwrap().is_none());
    report("9", start, Duration::from_secs(1), "popular matching exists at c = 2 and not at c = 4");
}

/// Forced-edge solving agrees with the oracle's filtered existence check.
#[test]
fn criterion_10_forced_edges() {
    let start = Instant::now();
    let mut r = rng(0x5eed_0010);
    let mut with_edges = 0;
    for (inst, c) in criterion_03_suite() {
        if inst.edges().is_empty() {
            continue;
        }
        with_edges += 1;
        let e = inst.edges()[r.gen_range(0..inst.edges().len())];
        let report = oracle::popular_matchings_bruteforce(&inst, None).unwrap();
        let oracle_has = report.popular.iter().any(|m| m.contains(e.0, e.1));
        let result = solver::solve(&inst, &[e], &[]).unwrap();
        match &result.outcome {
            SolveOutcome::Found { matching, .. } => {
                assert!(oracle_has, "solver found a forced matching the oracle denies (c = {c})");
                assert!(matching.contains(e.0, e.1));
                assert!(verifier::is_popular(&inst, matching).is_popular);
            }
            SolveOutcome::NoPopularMatching => {
                assert!(!oracle_has, "oracle has a popular matching through {e:?} but the solver found none");
            }
        }
    }
    report(
        "10",
        start,
        Duration::from_secs(300),
        &format!("forced-edge decisions agree on {with_edges} instances"),
    );
}
