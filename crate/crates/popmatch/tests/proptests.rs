//! Property tests over generated instances and rationals.

use popmatch::model::{
    delta_w, format_rational, parse_rational, rat, ratio, vote, Instance, Matching, VertexId,
};
use proptest::prelude::*;

/// Strategy for a small valid instance: adjacency from a bit mask,
/// preference orders from permutation seeds, unit-range rational weights.
fn small_instance() -> impl Strategy<Value = Instance> {
    (1usize..=4, 1usize..=4, any::<u16>(), any::<u64>()).prop_map(|(na, nb, mask, seed)| {
        let mut a_prefs: Vec<Vec<usize>> = vec![Vec::new(); na];
        let mut b_prefs: Vec<Vec<usize>> = vec![Vec::new(); nb];
        for a in 0..na {
            for b in 0..nb {
                if mask & (1 << (a * nb + b)) != 0 {
                    a_prefs[a].push(b);
                    b_prefs[b].push(a);
                }
            }
        }
        // deterministic pseudo-shuffle driven by the seed
        let mut state = seed | 1;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 33) as usize
        };
        for prefs in a_prefs.iter_mut().chain(b_prefs.iter_mut()) {
            for i in (1..prefs.len()).rev() {
                prefs.swap(i, next() % (i + 1));
            }
        }
        let a_w = (0..na).map(|i| ratio(1 + (i as i64 % 3), 1)).collect();
        let b_w = (0..nb).map(|j| ratio(1 + (j as i64 % 2), 2)).collect();
        Instance::build(a_prefs, b_prefs, a_w, b_w).unwrap()
    })
}

fn some_matchings(inst: &Instance, limit: usize) -> Vec<Matching> {
    popmatch::oracle::enumerate_matchings(inst).take(limit).collect()
}

proptest! {
    #[test]
    fn rational_round_trip(n in -1_000_000i64..1_000_000, d in 1i64..10_000) {
        let r = ratio(n, d);
        prop_assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
    }

    #[test]
    fn delta_antisymmetry(inst in small_instance(), i in 0usize..64, j in 0usize..64) {
        let ms = some_matchings(&inst, 64);
        let m1 = &ms[i % ms.len()];
        let m2 = &ms[j % ms.len()];
        prop_assert_eq!(delta_w(&inst, m1, m2), -delta_w(&inst, m2, m1));
        prop_assert_eq!(delta_w(&inst, m1, m1), rat(0));
    }

    #[test]
    fn votes_take_signed_weights(inst in small_instance(), i in 0usize..64) {
        let ms = some_matchings(&inst, 64);
        let m = &ms[i % ms.len()];
        for &(a, b) in inst.edges() {
            for (u, v) in [(VertexId::a(a), VertexId::b(b)), (VertexId::b(b), VertexId::a(a))] {
                let value = vote(&inst, m, u, v).unwrap();
                let w = inst.weight(u).clone();
                prop_assert!(value == rat(0) || value == w || value == -w);
            }
        }
    }
}
