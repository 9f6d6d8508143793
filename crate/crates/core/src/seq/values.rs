//! Cell formulas: rational functions and torus-valued combinations of them.

use std::collections::BTreeMap;

use num_traits::Zero;

use super::index_set::IndexSet;
use super::piecewise::CellValue;
use super::poly::RatFunc;
use crate::exact::{Basis, Rational, TorusValue};

impl CellValue for RatFunc {
    type Output = Rational;

    fn eval(&self, i: u64) -> Option<Rational> {
        self.eval_at(i)
    }

    fn constant(v: &Rational) -> Self {
        RatFunc::constant(v)
    }

    fn zero() -> Self {
        RatFunc::zero()
    }

    fn defined_on(&self, support: &IndexSet) -> bool {
        self.den().natural_roots().into_iter().all(|r| !support.contains(r))
    }
}

/// `i ↦ Σ_b f_b(i) · b` over basis elements `b ∈ {1, tau1, ...}`, read mod 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct TorusFn {
    terms: BTreeMap<Basis, RatFunc>,
}

impl TorusFn {
    pub fn new(terms: BTreeMap<Basis, RatFunc>) -> Self {
        let mut f = Self { terms };
        f.terms.retain(|_, r| !r.is_zero());
        f
    }

    pub fn single(b: Basis, coeff: RatFunc) -> Self {
        Self::new(BTreeMap::from([(b, coeff)]))
    }

    pub fn terms(&self) -> &BTreeMap<Basis, RatFunc> {
        &self.terms
    }

    pub fn coeff(&self, b: Basis) -> RatFunc {
        self.terms.get(&b).cloned().unwrap_or_else(RatFunc::zero)
    }

    pub fn add(&self, other: &TorusFn) -> TorusFn {
        let mut terms = self.terms.clone();
        for (b, r) in &other.terms {
            let sum = terms.get(b).map_or_else(|| r.clone(), |x| x.add(r));
            terms.insert(*b, sum);
        }
        TorusFn::new(terms)
    }

    pub fn neg(&self) -> TorusFn {
        TorusFn::new(self.terms.iter().map(|(b, r)| (*b, r.neg())).collect())
    }

    pub fn sub(&self, other: &TorusFn) -> TorusFn {
        self.add(&other.neg())
    }

    /// Multiplies every coefficient by an integer-valued formula.
    pub fn mul_ratfunc(&self, f: &RatFunc) -> TorusFn {
        TorusFn::new(self.terms.iter().map(|(b, r)| (*b, r.mul(f))).collect())
    }
}

impl CellValue for TorusFn {
    type Output = TorusValue;

    fn eval(&self, i: u64) -> Option<TorusValue> {
        let mut rational = Rational::zero();
        let mut irr = BTreeMap::new();
        for (b, r) in &self.terms {
            let v = r.eval_at(i)?;
            match b {
                Basis::One => rational = v,
                Basis::Tau(s) => {
                    irr.insert(*s, v);
                }
            }
        }
        Some(TorusValue::new(rational, irr))
    }

    fn constant(v: &TorusValue) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Basis::One, RatFunc::constant(v.rational_part()));
        for (s, c) in v.irrational_coeffs() {
            terms.insert(Basis::Tau(*s), RatFunc::constant(c));
        }
        TorusFn::new(terms)
    }

    fn zero() -> Self {
        TorusFn::default()
    }

    fn defined_on(&self, support: &IndexSet) -> bool {
        self.terms.values().all(|r| r.defined_on(support))
    }
}
