use std::collections::{BTreeMap, BTreeSet};
use std::ops::Deref;

use num_traits::Zero;

use super::index_set::IndexSet;
use super::piecewise::{Cell, Piecewise};
use super::poly::{Poly, RatFunc};
use super::values::TorusFn;
use super::SeqError;
use crate::exact::{Basis, Integer, Rational, TorusValue};

fn check_integer_valued(cell: usize, f: &RatFunc, support: &IndexSet) -> Result<(), SeqError> {
    if !f.is_polynomial() {
        return Err(SeqError::NotPolynomial { cell });
    }
    let is_int = |i: u64| f.eval_at(i).is_some_and(|v| v.is_integer());
    let (points, classes) = support.decompose();
    if let Some(&i) = points.iter().find(|&&i| !is_int(i)) {
        return Err(SeqError::NotIntegerValued { cell, index: i });
    }
    // integer-valued at deg+1 consecutive terms of a progression => on all of it
    let deg = f.poly_degree().unwrap_or(0) as u64;
    for (a, l) in classes {
        if let Some(i) = (0..=deg).map(|k| a + l * k).find(|&i| !is_int(i)) {
            return Err(SeqError::NotIntegerValued { cell, index: i });
        }
    }
    Ok(())
}

/// Element of `Z^N`: a piecewise polynomial (rational coefficients allowed)
/// that is integer-valued on each of its cells.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntSeq(Piecewise<RatFunc>);

impl IntSeq {
    pub fn new(cells: Vec<(IndexSet, RatFunc)>) -> Result<Self, SeqError> {
        let pw = Piecewise::new(cells.into_iter().map(|(s, f)| Cell::new(s, f)).collect())?;
        Self::from_piecewise(pw)
    }

    pub fn from_piecewise(pw: Piecewise<RatFunc>) -> Result<Self, SeqError> {
        for (k, c) in pw.cells().iter().enumerate() {
            check_integer_valued(k, &c.value, &c.support)?;
        }
        Ok(Self(pw))
    }

    pub fn from_polys(cells: Vec<(IndexSet, Poly)>) -> Result<Self, SeqError> {
        Self::new(cells.into_iter().map(|(s, p)| (s, RatFunc::polynomial(p))).collect())
    }

    pub fn polynomial(p: Poly) -> Self {
        Self(Piecewise::uniform(RatFunc::polynomial(p)))
    }

    pub fn constant(c: i64) -> Self {
        Self::polynomial(Poly::from_i64(&[c]))
    }

    pub fn zero() -> Self {
        Self(Piecewise::zero())
    }

    /// `δ_J`.
    pub fn indicator(j: &IndexSet) -> Self {
        Self(Piecewise::uniform(RatFunc::polynomial(Poly::from_i64(&[1]))).restrict(j))
    }

    pub fn eval(&self, i: u64) -> Integer {
        self.0.eval(i).to_integer()
    }

    pub fn as_piecewise(&self) -> &Piecewise<RatFunc> {
        &self.0
    }

    pub fn add(&self, other: &IntSeq) -> IntSeq {
        Self(self.0.combine(&other.0, |a, b| a.add(b)))
    }

    pub fn scale(&self, k: &Integer) -> IntSeq {
        let q = Rational::from_integer(k.clone());
        Self(self.0.map(|f| f.scale(&q)))
    }

    pub fn restrict(&self, j: &IndexSet) -> IntSeq {
        Self(self.0.restrict(j))
    }

    /// Largest polynomial degree over the cells (0 for the zero sequence).
    pub fn max_degree(&self) -> usize {
        self.0.cells().iter().filter_map(|c| c.value.poly_degree()).max().unwrap_or(0)
    }
}

impl Deref for IntSeq {
    type Target = Piecewise<RatFunc>;
    fn deref(&self) -> &Piecewise<RatFunc> {
        &self.0
    }
}

/// Element of `Q^N`: a piecewise ratio of integer polynomials whose
/// denominators do not vanish on their cells.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatSeq(Piecewise<RatFunc>);

impl RatSeq {
    pub fn new(cells: Vec<(IndexSet, RatFunc)>) -> Result<Self, SeqError> {
        Ok(Self(Piecewise::new(cells.into_iter().map(|(s, f)| Cell::new(s, f)).collect())?))
    }

    /// `num(i) / den(i)` on all of `N`.
    pub fn ratio(num: Poly, den: Poly) -> Result<Self, SeqError> {
        let f = RatFunc::new(num, den).ok_or(SeqError::ZeroDenominator { cell: 0 })?;
        Self::new(vec![(IndexSet::all(), f)])
    }

    pub fn eval(&self, i: u64) -> Rational {
        self.0.eval(i)
    }

    pub fn as_piecewise(&self) -> &Piecewise<RatFunc> {
        &self.0
    }
}

impl Deref for RatSeq {
    type Target = Piecewise<RatFunc>;
    fn deref(&self) -> &Piecewise<RatFunc> {
        &self.0
    }
}

/// Finitely presented candidate `t ∈ T^N`: each cell carries a torus-valued
/// formula `Σ_b f_b(i)·b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacterPresentation(Piecewise<TorusFn>);

impl CharacterPresentation {
    pub fn new(cells: Vec<(IndexSet, TorusFn)>) -> Result<Self, SeqError> {
        Ok(Self(Piecewise::new(cells.into_iter().map(|(s, f)| Cell::new(s, f)).collect())?))
    }

    /// One basis element per cell: `t(i) = coeff(i) · symbol`.
    pub fn from_symbol_cells(cells: Vec<(IndexSet, Basis, RatFunc)>) -> Result<Self, SeqError> {
        Self::new(cells.into_iter().map(|(s, b, f)| (s, TorusFn::single(b, f))).collect())
    }

    pub fn from_piecewise(pw: Piecewise<TorusFn>) -> Self {
        Self(pw)
    }

    pub fn constant(v: &TorusValue) -> Self {
        use super::piecewise::CellValue;
        Self(Piecewise::uniform(TorusFn::constant(v)))
    }

    pub fn zero() -> Self {
        Self(Piecewise::zero())
    }

    pub fn eval(&self, i: u64) -> TorusValue {
        self.0.eval(i)
    }

    pub fn as_piecewise(&self) -> &Piecewise<TorusFn> {
        &self.0
    }

    pub fn symbols(&self) -> BTreeSet<Basis> {
        self.0.cells().iter().flat_map(|c| c.value.terms().keys().copied()).collect()
    }

    /// Coefficient sequence along one basis element.
    pub fn component(&self, b: Basis) -> RatSeq {
        RatSeq(self.0.map(|f| f.coeff(b)))
    }

    pub fn add(&self, other: &CharacterPresentation) -> CharacterPresentation {
        Self(self.0.combine(&other.0, |a, b| a.add(b)))
    }

    pub fn sub(&self, other: &CharacterPresentation) -> CharacterPresentation {
        Self(self.0.combine(&other.0, |a, b| a.sub(b)))
    }
}

impl Deref for CharacterPresentation {
    type Target = Piecewise<TorusFn>;
    fn deref(&self) -> &Piecewise<TorusFn> {
        &self.0
    }
}

/// Element `g` of `H = Z^(N)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FinSupportVector {
    entries: BTreeMap<u64, Integer>,
}

impl FinSupportVector {
    pub fn new(entries: impl IntoIterator<Item = (u64, Integer)>) -> Self {
        let mut out = Self::default();
        for (i, c) in entries {
            *out.entries.entry(i).or_insert_with(Integer::zero) += c;
        }
        out.entries.retain(|_, c| !c.is_zero());
        out
    }

    pub fn from_pairs(pairs: &[(u64, i64)]) -> Self {
        Self::new(pairs.iter().map(|&(i, c)| (i, Integer::from(c))))
    }

    pub fn unit(i: u64) -> Self {
        Self::from_pairs(&[(i, 1)])
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn entries(&self) -> &BTreeMap<u64, Integer> {
        &self.entries
    }

    pub fn get(&self, i: u64) -> Integer {
        self.entries.get(&i).cloned().unwrap_or_else(Integer::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn support(&self) -> BTreeSet<u64> {
        self.entries.keys().copied().collect()
    }

    pub fn add(&self, other: &FinSupportVector) -> FinSupportVector {
        Self::new(self.entries.iter().chain(other.entries.iter()).map(|(i, c)| (*i, c.clone())))
    }

    pub fn scale(&self, k: &Integer) -> FinSupportVector {
        Self::new(self.entries.iter().map(|(i, c)| (*i, c * k)))
    }
}

/// `⟨g, x⟩ = Σ g(i)·x(i)`.
pub fn pair(g: &FinSupportVector, x: &Piecewise<RatFunc>) -> Rational {
    g.entries
        .iter()
        .map(|(i, c)| x.eval(*i) * Rational::from_integer(c.clone()))
        .fold(Rational::zero(), |a, b| a + b)
}

/// `⟨g, t⟩ = Σ g(i)·t(i)` in `T`.
pub fn char_eval(t: &CharacterPresentation, g: &FinSupportVector) -> TorusValue {
    let mut acc = TorusValue::zero();
    for (i, c) in &g.entries {
        acc += &t.eval(*i).scale(c);
    }
    acc
}

/// `δ_J · t`.
pub fn restrict_character(t: &CharacterPresentation, j: &IndexSet) -> CharacterPresentation {
    CharacterPresentation(t.0.restrict(j))
}
