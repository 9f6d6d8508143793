use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::rational::{format_rational, window_representative, Integer, Rational};
use super::ExactError;

/// A formal irrational `tau<id>`. The family `{1, tau1, tau2, ...}` is treated
/// as linearly independent over `Q`; symbols never receive numeric values.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IrrationalSymbol {
    id: u32,
}

impl IrrationalSymbol {
    pub fn new(id: u32) -> Option<Self> {
        (id >= 1).then_some(Self { id })
    }

    pub fn id(self) -> u32 {
        self.id
    }

    pub fn label(self) -> String {
        format!("tau{}", self.id)
    }

    pub fn parse(s: &str) -> Result<Self, ExactError> {
        s.strip_prefix("tau")
            .and_then(|k| k.parse::<u32>().ok())
            .and_then(Self::new)
            .ok_or_else(|| ExactError::BadSymbol(s.to_string()))
    }
}

impl fmt::Display for IrrationalSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "tau{}", self.id)
    }
}

/// Basis element of `T` over which torus values are expanded: the rational
/// unit `1` or an irrational symbol. `One` sorts first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Basis {
    One,
    Tau(IrrationalSymbol),
}

impl Basis {
    pub fn tau(id: u32) -> Self {
        Basis::Tau(IrrationalSymbol::new(id).expect("symbol ids start at 1"))
    }

    /// `0` for `One`, the symbol id otherwise.
    pub fn id(self) -> u32 {
        match self {
            Basis::One => 0,
            Basis::Tau(s) => s.id(),
        }
    }

    pub fn label(self) -> String {
        match self {
            Basis::One => "one".to_string(),
            Basis::Tau(s) => s.label(),
        }
    }

    pub fn parse(s: &str) -> Result<Self, ExactError> {
        if s == "one" {
            Ok(Basis::One)
        } else {
            IrrationalSymbol::parse(s).map(Basis::Tau)
        }
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Exact element of `T = R/Z`: a rational part kept in `(-1/2, 1/2]` plus
/// rational multiples of formal irrational symbols.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TorusValue {
    rational: Rational,
    irrational: BTreeMap<IrrationalSymbol, Rational>,
}

impl TorusValue {
    pub fn new(rational: Rational, irrational: BTreeMap<IrrationalSymbol, Rational>) -> Self {
        let mut v = Self { rational, irrational };
        v.normalize();
        v
    }

    pub fn zero() -> Self {
        Self { rational: Rational::zero(), irrational: BTreeMap::new() }
    }

    pub fn from_rational(q: Rational) -> Self {
        Self::new(q, BTreeMap::new())
    }

    pub fn from_ratio(p: i64, q: i64) -> Self {
        Self::from_rational(Rational::new(p.into(), q.into()))
    }

    /// `coeff * tau`.
    pub fn symbol(sym: IrrationalSymbol, coeff: Rational) -> Self {
        Self::new(Rational::zero(), BTreeMap::from([(sym, coeff)]))
    }

    /// `coeff * b`, reduced mod 1 when `b` is `One`.
    pub fn basis(b: Basis, coeff: Rational) -> Self {
        match b {
            Basis::One => Self::from_rational(coeff),
            Basis::Tau(s) => Self::symbol(s, coeff),
        }
    }

    fn normalize(&mut self) {
        self.rational = window_representative(&self.rational);
        self.irrational.retain(|_, c| !c.is_zero());
    }

    pub fn rational_part(&self) -> &Rational {
        &self.rational
    }

    pub fn irrational_coeffs(&self) -> &BTreeMap<IrrationalSymbol, Rational> {
        &self.irrational
    }

    /// Coefficient along a basis element (the windowed rational part for `One`).
    pub fn coeff(&self, b: Basis) -> Rational {
        match b {
            Basis::One => self.rational.clone(),
            Basis::Tau(s) => self.irrational.get(&s).cloned().unwrap_or_else(Rational::zero),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.rational.is_zero() && self.irrational.is_empty()
    }

    pub fn is_rational(&self) -> bool {
        self.irrational.is_empty()
    }

    /// `|x|` of the window representative; `None` when irrational parts exist.
    pub fn rational_abs(&self) -> Option<Rational> {
        self.is_rational().then(|| self.rational.abs())
    }

    /// Representative of the rational part in `[0, 1)`.
    pub fn rational_lift(&self) -> Rational {
        if self.rational.is_negative() {
            &self.rational + Rational::one()
        } else {
            self.rational.clone()
        }
    }

    pub fn scale(&self, n: &Integer) -> Self {
        let k = Rational::from_integer(n.clone());
        Self::new(
            &self.rational * &k,
            self.irrational.iter().map(|(s, c)| (*s, c * &k)).collect(),
        )
    }
}

impl Default for TorusValue {
    fn default() -> Self {
        Self::zero()
    }
}

impl Add for &TorusValue {
    type Output = TorusValue;
    fn add(self, rhs: &TorusValue) -> TorusValue {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for TorusValue {
    type Output = TorusValue;
    fn add(mut self, rhs: TorusValue) -> TorusValue {
        self += &rhs;
        self
    }
}

impl AddAssign<&TorusValue> for TorusValue {
    fn add_assign(&mut self, rhs: &TorusValue) {
        self.rational += &rhs.rational;
        for (s, c) in &rhs.irrational {
            *self.irrational.entry(*s).or_insert_with(Rational::zero) += c;
        }
        self.normalize();
    }
}

impl Neg for &TorusValue {
    type Output = TorusValue;
    fn neg(self) -> TorusValue {
        TorusValue::new(-&self.rational, self.irrational.iter().map(|(s, c)| (*s, -c)).collect())
    }
}

impl Sub for &TorusValue {
    type Output = TorusValue;
    fn sub(self, rhs: &TorusValue) -> TorusValue {
        self + &(-rhs)
    }
}

impl std::iter::Sum for TorusValue {
    fn sum<I: Iterator<Item = TorusValue>>(iter: I) -> Self {
        iter.fold(TorusValue::zero(), |a, b| a + b)
    }
}

impl fmt::Display for TorusValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if !self.rational.is_zero() {
            parts.push(format_rational(&self.rational));
        }
        for (s, c) in &self.irrational {
            if c.is_one() {
                parts.push(s.label());
            } else {
                parts.push(format!("{}*{}", format_rational(c), s));
            }
        }
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

/// `Σ c_k · v_k` in `T`.
pub fn torus_combine(terms: &[(Integer, TorusValue)]) -> TorusValue {
    let mut acc = TorusValue::zero();
    for (c, v) in terms {
        acc += &v.scale(c);
    }
    acc
}
