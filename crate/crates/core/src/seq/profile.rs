use std::collections::BTreeMap;

use num_integer::Integer as _;
use num_traits::{One, Signed};

use super::index_set::IndexSet;
use super::piecewise::Piecewise;
use super::poly::{Poly, RatFunc};
use crate::exact::Integer;

/// How the reduced denominators of a rational sequence behave on an index set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DenominatorProfile {
    /// Finitely many denominator values; `strata[q]` is the nonempty set of
    /// queried indices whose value has reduced denominator `q`.
    Bounded { strata: BTreeMap<Integer, IndexSet> },
    /// Cell `cell` meets the query infinitely often (on `support`) with a
    /// nonconstant reduced denominator `den`.
    Unbounded { cell: usize, support: IndexSet, num: Poly, den: Poly },
}

impl DenominatorProfile {
    pub fn is_bounded(&self) -> bool {
        matches!(self, Self::Bounded { .. })
    }

    /// For an unbounded profile, an index of its support where the reduced
    /// denominator exceeds `bound`. Probes the support at positions 0, 1, 2, 4, ...
    pub fn index_exceeding(&self, bound: &Integer) -> Option<(u64, Integer)> {
        let Self::Unbounded { support, num, den, .. } = self else {
            return None;
        };
        let f = RatFunc::new(num.clone(), den.clone())?;
        let mut n = 0u64;
        loop {
            let i = support.nth(n)?;
            let q = f.eval_at(i)?.denom().clone();
            if &q > bound {
                return Some((i, q));
            }
            n = if n == 0 { 1 } else { n.checked_mul(2)? };
        }
    }
}

fn reduced_den(f: &RatFunc, i: u64) -> Integer {
    f.eval_at(i).expect("formula defined on its support").denom().clone()
}

/// Groups the indices of `j` by the reduced denominator of `r(i)`.
pub fn denominator_profile(r: &Piecewise<RatFunc>, j: &IndexSet) -> DenominatorProfile {
    let mut strata: BTreeMap<Integer, IndexSet> = BTreeMap::new();
    let put = |q: Integer, s: IndexSet, strata: &mut BTreeMap<Integer, IndexSet>| {
        if s.is_empty() {
            return;
        }
        let e = strata.entry(q).or_insert_with(IndexSet::empty);
        *e = e.union(&s);
    };
    for (k, c) in r.cells().iter().enumerate() {
        let k_set = c.support.intersect(j);
        if k_set.is_empty() {
            continue;
        }
        let f = &c.value;
        if !f.den().is_constant() {
            if k_set.is_infinite() {
                return DenominatorProfile::Unbounded {
                    cell: k,
                    support: k_set,
                    num: f.num().clone(),
                    den: f.den().clone(),
                };
            }
            for i in k_set.iter() {
                put(reduced_den(f, i), IndexSet::singleton(i), &mut strata);
            }
            continue;
        }
        let d = f.den().leading().abs();
        if d.is_one() {
            put(Integer::one(), k_set, &mut strata);
            continue;
        }
        // num(i) mod d has period dividing d
        let dl: usize = d.clone().try_into().expect("denominator fits in usize");
        let p = k_set.prefix().len();
        let l = k_set.period().len().lcm(&dl);
        let mut by_q: BTreeMap<Integer, (Vec<bool>, Vec<bool>)> = BTreeMap::new();
        for i in 0..(p + l) {
            let iu = i as u64;
            if !k_set.contains(iu) {
                continue;
            }
            let q = &d / f.num().eval_at(iu).gcd(&d);
            let entry = by_q.entry(q).or_insert_with(|| (vec![false; p], vec![false; l]));
            if i < p {
                entry.0[i] = true;
            } else {
                entry.1[i - p] = true;
            }
        }
        for (q, (prefix, period)) in by_q {
            put(q, IndexSet::new(prefix, period).unwrap(), &mut strata);
        }
    }
    DenominatorProfile::Bounded { strata }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Rational;
    use crate::seq::{Cell, RatSeq};

    #[test]
    fn harmonic_is_unbounded() {
        let r = RatSeq::ratio(Poly::from_i64(&[1]), Poly::from_i64(&[1, 1])).unwrap();
        let p = denominator_profile(&r, &IndexSet::all());
        match &p {
            DenominatorProfile::Unbounded { den, .. } => assert_eq!(den, &Poly::from_i64(&[1, 1])),
            other => panic!("{other:?}"),
        }
        let (i, q) = p.index_exceeding(&Integer::from(1_000_000)).unwrap();
        assert_eq!(Integer::from(i + 1), q);
        assert!(q > Integer::from(1_000_000));
    }

    #[test]
    fn alternating_halves_and_thirds() {
        let r = RatSeq::new(vec![
            (IndexSet::evens(), RatFunc::constant(&Rational::new(1.into(), 2.into()))),
            (IndexSet::odds(), RatFunc::constant(&Rational::new(1.into(), 3.into()))),
        ])
        .unwrap();
        let DenominatorProfile::Bounded { strata } = denominator_profile(&r, &IndexSet::all()) else {
            panic!()
        };
        assert_eq!(strata.len(), 2);
        assert_eq!(strata[&Integer::from(2)], IndexSet::evens());
        assert_eq!(strata[&Integer::from(3)], IndexSet::odds());
    }

    #[test]
    fn cancelling_ratio_is_bounded() {
        let r = RatSeq::ratio(Poly::from_i64(&[2, 2]), Poly::from_i64(&[1, 1])).unwrap();
        let DenominatorProfile::Bounded { strata } = denominator_profile(&r, &IndexSet::all()) else {
            panic!()
        };
        assert_eq!(strata.keys().cloned().collect::<Vec<_>>(), vec![Integer::one()]);
    }

    #[test]
    fn half_index_strata() {
        let f = RatFunc::new(Poly::from_i64(&[0, 1]), Poly::from_i64(&[2])).unwrap();
        let r = Piecewise::new(vec![Cell::new(IndexSet::all(), f)]).unwrap();
        let DenominatorProfile::Bounded { strata } = denominator_profile(&r, &IndexSet::all()) else {
            panic!()
        };
        assert_eq!(strata[&Integer::one()], IndexSet::evens());
        assert_eq!(strata[&Integer::from(2)], IndexSet::odds());
    }

    #[test]
    fn finite_query_on_unbounded_cell_is_stratified() {
        let r = RatSeq::ratio(Poly::from_i64(&[1]), Poly::from_i64(&[1, 1])).unwrap();
        let DenominatorProfile::Bounded { strata } = denominator_profile(&r, &IndexSet::finite(&[0, 1, 3])) else {
            panic!()
        };
        assert_eq!(strata[&Integer::one()], IndexSet::singleton(0));
        assert_eq!(strata[&Integer::from(2)], IndexSet::singleton(1));
        assert_eq!(strata[&Integer::from(4)], IndexSet::singleton(3));
    }
}
