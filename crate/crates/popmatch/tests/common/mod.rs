#![allow(dead_code)]

use popmatch::model::{rat, Instance, Matching, Rational};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// The Condorcet example: a1..a3 all prefer b1 to b2; b1, b2 rank a1 > a2 > a3.
pub fn fig1(weights: [Rational; 5]) -> Instance {
    let [w1, w2, w3, w4, w5] = weights;
    Instance::build(
        vec![vec![0, 1], vec![0, 1], vec![0, 1]],
        vec![vec![0, 1, 2], vec![0, 1, 2]],
        vec![w1, w2, w3],
        vec![w4, w5],
    )
    .unwrap()
}

/// The worked 10+10 example instance the solver walkthrough uses, with
/// A-weights `c` and unit B-weights.
pub fn appendix_instance(c: &Rational) -> Instance {
    let a_prefs = vec![
        vec![1, 7, 0],    // a1: b2 > b8 > b1
        vec![1, 0],       // a2: b2 > b1
        vec![2, 1, 5],    // a3: b3 > b2 > b6
        vec![2, 3],       // a4: b3 > b4
        vec![4, 3],       // a5: b5 > b4
        vec![4, 5],       // a6: b5 > b6
        vec![7],          // a7: b8
        vec![7, 6, 9],    // a8: b8 > b7 > b10
        vec![8, 6, 9],    // a9: b9 > b7 > b10
        vec![2, 7],       // a10: b3 > b8
    ];
    let b_prefs = vec![
        vec![1, 0],       // b1: a2 > a1
        vec![1, 2, 0],    // b2: a2 > a3 > a1
        vec![3, 2, 9],    // b3: a4 > a3 > a10
        vec![4, 3],       // b4: a5 > a4
        vec![4, 5],       // b5: a5 > a6
        vec![5, 2],       // b6: a6 > a3
        vec![7, 8],       // b7: a8 > a9
        vec![7, 9, 6, 0], // b8: a8 > a10 > a7 > a1
        vec![8],          // b9: a9
        vec![7, 8],       // b10: a8 > a9
    ];
    Instance::build(a_prefs, b_prefs, vec![c.clone(); 10], vec![rat(1); 10]).unwrap()
}

/// A random bipartite preference instance: each potential edge appears with
/// probability `edge_p`, preference lists are uniform random permutations.
pub fn random_instance(
    rng: &mut ChaCha8Rng,
    max_a: usize,
    max_b: usize,
    edge_p: f64,
    a_weight: &Rational,
    b_weight: &Rational,
) -> Instance {
    let na = rng.gen_range(1..=max_a);
    let nb = rng.gen_range(1..=max_b);
    let mut a_prefs: Vec<Vec<usize>> = vec![Vec::new(); na];
    let mut b_prefs: Vec<Vec<usize>> = vec![Vec::new(); nb];
    for a in 0..na {
        for b in 0..nb {
            if rng.gen_bool(edge_p) {
                a_prefs[a].push(b);
                b_prefs[b].push(a);
            }
        }
    }
    for prefs in a_prefs.iter_mut().chain(b_prefs.iter_mut()) {
        prefs.shuffle(rng);
    }
    Instance::build(
        a_prefs,
        b_prefs,
        vec![a_weight.clone(); na],
        vec![b_weight.clone(); nb],
    )
    .unwrap()
}

/// Whether `m` is stable: no edge outside `m` where both endpoints strictly
/// prefer each other over their current partners.
pub fn is_stable(inst: &Instance, m: &Matching) -> bool {
    use popmatch::model::VertexId;
    use std::cmp::Ordering;
    !inst.edges().iter().any(|&(a, b)| {
        if m.contains(a, b) {
            return false;
        }
        let va = VertexId::a(a);
        let vb = VertexId::b(b);
        inst.compare_partners(va, Some(b), m.partner_index(va)) == Ordering::Greater
            && inst.compare_partners(vb, Some(a), m.partner_index(vb)) == Ordering::Greater
    })
}

/// All labeled simple graphs on `n` vertices, as arc lists with the
/// canonical low-to-high orientation.
pub fn all_graphs(n: usize) -> Vec<Vec<(usize, usize)>> {
    let pairs: Vec<(usize, usize)> =
        (0..n).flat_map(|u| (u + 1..n).map(move |z| (u, z))).collect();
    let m = pairs.len();
    (0u32..(1 << m))
        .map(|mask| {
            pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, &e)| e)
                .collect()
        })
        .collect()
}
