//! Seeded generators of random instances for the randomized checks, the CLI
//! suites and the benchmarks.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cpx::{FreePoint, IntFunction, Point};
use crate::exact::{Basis, IntMatrix, Integer, Rational};
use crate::fgab::{FgAbelianGroup, GroupElement, Subset};
use crate::seq::{CharacterPresentation, FinSupportVector, IndexSet, IntSeq, Poly, RatFunc, TorusFn};

pub type Rng64 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng64 {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn matrix(r: &mut Rng64, max_dim: usize, bound: i64) -> IntMatrix {
    let rows = r.gen_range(0..=max_dim);
    let cols = r.gen_range(0..=max_dim);
    let entries = (0..rows * cols).map(|_| Integer::from(r.gen_range(-bound..=bound))).collect();
    IntMatrix::new(rows, cols, entries).unwrap()
}

/// Eventually periodic subset of `N`, possibly finite or empty.
pub fn index_set(r: &mut Rng64, max_prefix: usize, max_period: usize) -> IndexSet {
    let p = r.gen_range(0..=max_prefix);
    let l = r.gen_range(1..=max_period);
    let prefix = (0..p).map(|_| r.gen_bool(0.5)).collect();
    let period = (0..l).map(|_| r.gen_bool(0.5)).collect();
    IndexSet::new(prefix, period).unwrap()
}

pub fn infinite_index_set(r: &mut Rng64, max_prefix: usize, max_period: usize) -> IndexSet {
    let p = r.gen_range(0..=max_prefix);
    let l = r.gen_range(1..=max_period);
    let prefix = (0..p).map(|_| r.gen_bool(0.5)).collect();
    let mut period: Vec<bool> = (0..l).map(|_| r.gen_bool(0.5)).collect();
    let k = r.gen_range(0..l);
    period[k] = true;
    IndexSet::new(prefix, period).unwrap()
}

/// Partition of `N` into at most `max_cells` eventually periodic cells, the
/// first of which is infinite.
pub fn partition(r: &mut Rng64, max_cells: usize, max_prefix: usize, max_period: usize) -> Vec<IndexSet> {
    let k = r.gen_range(1..=max_cells);
    let p = r.gen_range(0..=max_prefix);
    let l = r.gen_range(1..=max_period);
    let mut prefix_owner: Vec<usize> = (0..p).map(|_| r.gen_range(0..k)).collect();
    let mut period_owner: Vec<usize> = (0..l).map(|_| r.gen_range(0..k)).collect();
    period_owner[r.gen_range(0..l)] = 0;
    if p > 0 && r.gen_bool(0.2) {
        prefix_owner[0] = k - 1;
    }
    (0..k)
        .map(|c| {
            IndexSet::new(
                prefix_owner.iter().map(|&o| o == c).collect(),
                period_owner.iter().map(|&o| o == c).collect(),
            )
            .unwrap()
        })
        .filter(|s| !s.is_empty())
        .collect()
}

fn poly(r: &mut Rng64, max_degree: usize, bound: i64) -> Poly {
    let d = r.gen_range(0..=max_degree);
    Poly::new((0..=d).map(|_| Integer::from(r.gen_range(-bound..=bound))).collect())
}

/// Integer sequence with integer-coefficient polynomial cells.
pub fn int_seq(r: &mut Rng64, max_degree: usize, bound: i64) -> IntSeq {
    let cells = partition(r, 3, 4, 4).into_iter().map(|s| (s, poly(r, max_degree, bound))).collect();
    IntSeq::from_polys(cells).unwrap()
}

fn basis(r: &mut Rng64, symbols: u32) -> Basis {
    match r.gen_range(0..=symbols) {
        0 => Basis::One,
        k => Basis::tau(k),
    }
}

/// A coefficient formula whose reduced denominator is a constant `≤ max_den`:
/// a constant, a polynomial over a constant, or a ratio with a common factor
/// that cancels.
fn bounded_coeff(r: &mut Rng64, max_den: i64) -> RatFunc {
    let q = r.gen_range(1..=max_den);
    match r.gen_range(0..3) {
        0 => RatFunc::constant(&Rational::new(r.gen_range(-3 * max_den..=3 * max_den).into(), q.into())),
        1 => RatFunc::new(poly(r, 2, 20), Poly::from_i64(&[q])).unwrap(),
        _ => {
            let a = r.gen_range(1..=9);
            let common = Poly::from_i64(&[a, 1]);
            RatFunc::new(poly(r, 1, 20).mul(&common), Poly::from_i64(&[q]).mul(&common)).unwrap()
        }
    }
}

/// A coefficient formula with nonconstant reduced denominator.
fn unbounded_coeff(r: &mut Rng64) -> RatFunc {
    let a = r.gen_range(1..=9);
    let den = if r.gen_bool(0.5) { Poly::from_i64(&[a, 1]) } else { Poly::from_i64(&[a, 0, 1]) };
    loop {
        let num = poly(r, 1, 9);
        if let Some(f) = RatFunc::new(num, den.clone()) {
            if !f.is_zero() && !f.den().is_constant() {
                return f;
            }
        }
    }
}

fn cell_value(r: &mut Rng64, symbols: u32, max_den: i64) -> TorusFn {
    let terms = if r.gen_bool(0.2) { 2 } else { 1 };
    let mut map = BTreeMap::new();
    for _ in 0..terms {
        map.insert(basis(r, symbols), bounded_coeff(r, max_den));
    }
    TorusFn::new(map)
}

/// A character of `Z^(N)`: every coefficient has bounded denominators.
pub fn character_in_dual(r: &mut Rng64, symbols: u32, max_den: i64) -> CharacterPresentation {
    let cells = partition(r, 4, 4, 6).into_iter().map(|s| (s, cell_value(r, symbols, max_den))).collect();
    CharacterPresentation::new(cells).unwrap()
}

/// Not a continuous character: the (infinite) first cell carries a
/// coefficient with nonconstant reduced denominator.
pub fn character_not_in_dual(r: &mut Rng64, symbols: u32, max_den: i64) -> CharacterPresentation {
    let cells: Vec<(IndexSet, TorusFn)> = partition(r, 3, 4, 4)
        .into_iter()
        .enumerate()
        .map(|(k, s)| {
            let v = if k == 0 { TorusFn::single(basis(r, symbols), unbounded_coeff(r)) } else { cell_value(r, symbols, max_den) };
            (s, v)
        })
        .collect();
    CharacterPresentation::new(cells).unwrap()
}

pub fn fin_support(r: &mut Rng64, max_support: usize, max_index: u64, bound: i64) -> FinSupportVector {
    let n = r.gen_range(0..=max_support);
    FinSupportVector::new((0..n).map(|_| (r.gen_range(0..max_index), Integer::from(r.gen_range(-bound..=bound)))))
}

pub fn cyclic_sum(r: &mut Rng64, max_order: u64) -> FgAbelianGroup {
    loop {
        let a = r.gen_range(1..=max_order);
        let b = if r.gen_bool(0.4) { r.gen_range(1..=max_order / a) } else { 1 };
        if a * b >= 2 || r.gen_bool(0.1) {
            return FgAbelianGroup::from_cyclic_orders(&[a, b]);
        }
    }
}

pub fn subset(r: &mut Rng64, g: &FgAbelianGroup) -> Subset {
    let els = g.elements().expect("finite group");
    let k = r.gen_range(0..=els.len());
    let chosen: Vec<GroupElement> = els.choose_multiple(r, k).cloned().collect();
    Subset::new(g.clone(), chosen).unwrap()
}

/// Eventually periodic `f` on `N ∪ {∞}` with values in `[-bound, bound]`.
/// With probability one half every tail value agrees with the limit mod `m`.
pub fn convergent_function(r: &mut Rng64, bound: i64, m: i64) -> IntFunction {
    let p = r.gen_range(0..=4usize);
    let l = r.gen_range(1..=4usize);
    let limit = r.gen_range(-bound..=bound);
    let tame = r.gen_bool(0.5);
    let val = |r: &mut Rng64| {
        if tame {
            let k = r.gen_range(-bound / m.max(1)..=bound / m.max(1));
            (limit.rem_euclid(m) + k * m).clamp(-bound, bound)
        } else {
            r.gen_range(-bound..=bound)
        }
    };
    let mut cells = Vec::new();
    for i in 0..p {
        cells.push((IndexSet::singleton(i as u64), Poly::from_i64(&[r.gen_range(-bound..=bound)])));
    }
    for k in 0..l {
        cells.push((IndexSet::tail_class(p, l, k), Poly::from_i64(&[val(r)])));
    }
    IntFunction::Convergent { seq: IntSeq::from_polys(cells).unwrap(), limit: Integer::from(limit) }
}

pub fn free_point(r: &mut Rng64, max_index: u64, max_terms: usize, bound: i64, with_infinity: bool) -> FreePoint {
    let n = r.gen_range(0..=max_terms);
    FreePoint::new((0..n).map(|_| {
        let p = if with_infinity && r.gen_bool(0.2) { Point::Infinity } else { Point::Index(r.gen_range(0..max_index)) };
        (p, Integer::from(r.gen_range(-bound..=bound)))
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dualgrp::{decide_membership, MembershipVerdict};

    #[test]
    fn same_seed_same_instances() {
        let a = character_in_dual(&mut rng(7), 3, 50);
        let b = character_in_dual(&mut rng(7), 3, 50);
        assert_eq!(a, b);
    }

    #[test]
    fn generated_characters_have_expected_membership() {
        let mut r = rng(1);
        for _ in 0..50 {
            assert!(matches!(decide_membership(&character_in_dual(&mut r, 3, 50)), MembershipVerdict::InDual { .. }));
            assert!(matches!(decide_membership(&character_not_in_dual(&mut r, 3, 50)), MembershipVerdict::NotInDual(_)));
        }
    }
}
