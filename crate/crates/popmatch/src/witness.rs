//! Popularity witnesses: LP-dual certificates, conflicting edges, niceness
//! and parity classification, and the dominance predicates used by the
//! solver's dismissal loop.
//!
//! A witness of a matching `M` is a rational vector `y` over the vertices
//! with zero sum such that `y_a + y_b` covers the vote of every edge, every
//! unmatched vertex has `y_v ≥ 0`, and every matched vertex has
//! `y_v ≥ -w(v)`. A matching is popular exactly when it has a witness.

use std::cmp::Ordering;

use num_traits::Zero;
use thiserror::Error;

use crate::model::{vote_edge, Instance, Matching, Rational, Side, VertexId};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WitnessError {
    #[error("witness domain mismatch: expected {expected_a} A-values and {expected_b} B-values, got {got_a} and {got_b}")]
    DomainMismatch { expected_a: usize, expected_b: usize, got_a: usize, got_b: usize },
}

/// A rational vector over the vertices of an instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    a_values: Vec<Rational>,
    b_values: Vec<Rational>,
}

impl Witness {
    pub fn new(a_values: Vec<Rational>, b_values: Vec<Rational>) -> Self {
        Witness { a_values, b_values }
    }

    pub fn zero(inst: &Instance) -> Self {
        Witness {
            a_values: vec![Rational::zero(); inst.a_count()],
            b_values: vec![Rational::zero(); inst.b_count()],
        }
    }

    pub fn from_fn(inst: &Instance, mut f: impl FnMut(VertexId) -> Rational) -> Self {
        Witness {
            a_values: (0..inst.a_count()).map(|i| f(VertexId::a(i))).collect(),
            b_values: (0..inst.b_count()).map(|j| f(VertexId::b(j))).collect(),
        }
    }

    pub fn get(&self, v: VertexId) -> &Rational {
        match v.side {
            Side::A => &self.a_values[v.index],
            Side::B => &self.b_values[v.index],
        }
    }

    pub fn set(&mut self, v: VertexId, value: Rational) {
        match v.side {
            Side::A => self.a_values[v.index] = value,
            Side::B => self.b_values[v.index] = value,
        }
    }

    pub fn a_len(&self) -> usize {
        self.a_values.len()
    }

    pub fn b_len(&self) -> usize {
        self.b_values.len()
    }

    pub fn sum(&self) -> Rational {
        self.a_values.iter().chain(self.b_values.iter()).sum()
    }

    fn check_domain(&self, inst: &Instance) -> Result<(), WitnessError> {
        if self.a_values.len() != inst.a_count() || self.b_values.len() != inst.b_count() {
            return Err(WitnessError::DomainMismatch {
                expected_a: inst.a_count(),
                expected_b: inst.b_count(),
                got_a: self.a_values.len(),
                got_b: self.b_values.len(),
            });
        }
        Ok(())
    }
}

/// Checks the full witness conditions for `y` against `M`:
/// zero sum, edge covering, and the per-vertex lower bounds.
pub fn check_witness(inst: &Instance, m: &Matching, y: &Witness) -> Result<bool, WitnessError> {
    y.check_domain(inst)?;
    if !y.sum().is_zero() {
        return Ok(false);
    }
    for v in inst.vertices() {
        let bound = if m.is_matched(v) { -inst.weight(v).clone() } else { Rational::zero() };
        if *y.get(v) < bound {
            return Ok(false);
        }
    }
    for &(a, b) in inst.edges() {
        let va = VertexId::a(a);
        let vb = VertexId::b(b);
        if y.get(va) + y.get(vb) < vote_edge(inst, m, va, vb).expect("instance edge") {
            return Ok(false);
        }
    }
    Ok(true)
}

/// All edges whose covering inequality fails, in canonical order.
///
/// Precondition: `y` is defined on exactly the vertices of `inst`.
pub fn conflicting_edges(inst: &Instance, m: &Matching, y: &Witness) -> Vec<(usize, usize)> {
    assert!(y.check_domain(inst).is_ok(), "witness domain mismatch");
    inst.edges()
        .iter()
        .copied()
        .filter(|&(a, b)| {
            let va = VertexId::a(a);
            let vb = VertexId::b(b);
            y.get(va) + y.get(vb) < vote_edge(inst, m, va, vb).expect("instance edge")
        })
        .collect()
}

/// The value sets a nice witness may take on each side, for a given `c`.
///
/// `R_A = {-c, 1-c, 2-c, -1, 0, 1}` and `R_B = {-1, 0, 1, c-2, c-1, c}`;
/// for `c > 3` each set has six distinct values.
#[derive(Clone, Debug)]
pub struct NiceValueSets {
    pub c: Rational,
    pub r_a: [Rational; 6],
    pub r_b: [Rational; 6],
}

impl NiceValueSets {
    pub fn new(c: &Rational) -> Self {
        let one = Rational::from_integer(1.into());
        let two = &one + &one;
        NiceValueSets {
            c: c.clone(),
            r_a: [-c.clone(), &one - c, &two - c, -one.clone(), Rational::zero(), one.clone()],
            r_b: [-one.clone(), Rational::zero(), one.clone(), c - &two, c - &one, c.clone()],
        }
    }

    pub fn side_values(&self, side: Side) -> &[Rational; 6] {
        match side {
            Side::A => &self.r_a,
            Side::B => &self.r_b,
        }
    }

    pub fn contains(&self, side: Side, x: &Rational) -> bool {
        self.side_values(side).contains(x)
    }

    /// The odd values `{-c, 2-c, -1, 1, c-2, c}`.
    pub fn odd_values(&self) -> [Rational; 6] {
        let one = Rational::from_integer(1.into());
        let two = &one + &one;
        let c = &self.c;
        [-c.clone(), &two - c, -one.clone(), one.clone(), c - &two, c.clone()]
    }

    /// The even values `{1-c, 0, c-1}`.
    pub fn even_values(&self) -> [Rational; 3] {
        let one = Rational::from_integer(1.into());
        let c = &self.c;
        [&one - c, Rational::zero(), c - &one]
    }
}

/// Whether every `y_a` lies in `R_A` and every `y_b` in `R_B`.
pub fn is_nice(inst: &Instance, y: &Witness, c: &Rational) -> bool {
    let sets = NiceValueSets::new(c);
    inst.vertices().all(|v| sets.contains(v.side, y.get(v)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Odd,
    Even,
    Mixed,
}

/// Classifies `y` on `component`: `Odd` if all values lie in
/// `{-c, 2-c, -1, 1, c-2, c}`, `Even` if all lie in `{1-c, 0, c-1}`,
/// `Mixed` otherwise.
pub fn parity_on_component(y: &Witness, component: &[VertexId], c: &Rational) -> Parity {
    let sets = NiceValueSets::new(c);
    let odd = sets.odd_values();
    let even = sets.even_values();
    let mut saw_odd = false;
    let mut saw_even = false;
    for &v in component {
        let val = y.get(v);
        let in_odd = odd.contains(val);
        let in_even = even.contains(val);
        match (in_odd, in_even) {
            (true, false) => saw_odd = true,
            (false, true) => saw_even = true,
            _ => return Parity::Mixed,
        }
    }
    match (saw_odd, saw_even) {
        (true, true) => Parity::Mixed,
        (false, true) | (false, false) => Parity::Even,
        (true, false) => Parity::Odd,
    }
}

/// How ties between equal partners are treated in the dominance comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PartnerTie {
    /// `b` must strictly prefer its partner under `M1`.
    Strict,
    /// Equal partners (including both unmatched) count as preferring `M1`.
    /// This is the non-strict variant the solver's candidate chains use.
    NonStrict,
}

/// Whether `(y1, M1)` dominates `(y2, M2)` at the B-vertex `b`:
/// `y1_b ≥ y2_b + 2`, or `y1_b ≥ y2_b` and `b` prefers its `M1`-partner.
pub fn dominates_at(
    inst: &Instance,
    y1: &Witness,
    m1: &Matching,
    y2: &Witness,
    m2: &Matching,
    b: VertexId,
    tie: PartnerTie,
) -> bool {
    assert_eq!(b.side, Side::B, "dominance is evaluated at B-vertices");
    dominates_at_shifted(inst, y1, m1, y2, m2, b, &Rational::zero(), tie)
}

fn dominates_at_shifted(
    inst: &Instance,
    y1: &Witness,
    m1: &Matching,
    y2: &Witness,
    m2: &Matching,
    b: VertexId,
    shift: &Rational,
    tie: PartnerTie,
) -> bool {
    let lhs = y1.get(b);
    let rhs = y2.get(b) - shift;
    let two = Rational::from_integer(2.into());
    if *lhs >= &rhs + two {
        return true;
    }
    if *lhs < rhs {
        return false;
    }
    match inst.compare_partners(b, m1.partner_index(b), m2.partner_index(b)) {
        Ordering::Greater => true,
        Ordering::Equal => tie == PartnerTie::NonStrict,
        Ordering::Less => false,
    }
}

/// Whether `(y1, M1)` weakly dominates `(y2, M2)` on `component`:
/// `y1` dominates `y2` at every B-vertex of the component, or `y2` is even
/// on the component and `y1` dominates `y2 - 1` at every B-vertex.
///
/// Partner ties count as dominating here, matching the candidate chains the
/// solver relies on.
pub fn weakly_dominates(
    inst: &Instance,
    y1: &Witness,
    m1: &Matching,
    y2: &Witness,
    m2: &Matching,
    component: &[VertexId],
    c: &Rational,
) -> bool {
    let b_vertices: Vec<VertexId> =
        component.iter().copied().filter(|v| v.side == Side::B).collect();
    let zero = Rational::zero();
    if b_vertices
        .iter()
        .all(|&b| dominates_at_shifted(inst, y1, m1, y2, m2, b, &zero, PartnerTie::NonStrict))
    {
        return true;
    }
    if parity_on_component(y2, component, c) != Parity::Even {
        return false;
    }
    let one = Rational::from_integer(1.into());
    b_vertices
        .iter()
        .all(|&b| dominates_at_shifted(inst, y1, m1, y2, m2, b, &one, PartnerTie::NonStrict))
}
