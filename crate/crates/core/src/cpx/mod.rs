//! `C_p(X, Z)` and `A_p(X)` on two zero-dimensional spaces: a finite
//! discrete space and the convergent sequence `N ∪ {∞}`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_integer::Integer as _;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::exact::{lcm, Integer, IrrationalSymbol, Rational, TorusValue};
use crate::seq::{IndexSet, IntSeq, Poly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SpaceModel {
    /// `{0, …, n-1}` with the discrete topology.
    FiniteDiscrete(usize),
    /// `N ∪ {∞}`; neighbourhoods of `∞` are cofinite.
    ConvergentSequence,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Point {
    Index(u64),
    Infinity,
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Index(i) => write!(f, "{i}"),
            Point::Infinity => write!(f, "inf"),
        }
    }
}

impl Point {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "inf" => Some(Point::Infinity),
            _ => s.parse().ok().map(Point::Index),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CpxError {
    #[error("torus value {0} mixes a rational part with irrational symbols")]
    UnsupportedTorusValue(String),
    #[error("point {0} is not in the space")]
    PointOutOfRange(Point),
    #[error("function does not match the space model")]
    ModelMismatch,
}

/// `f ∈ Z^X`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IntFunction {
    Finite(Vec<Integer>),
    Convergent { seq: IntSeq, limit: Integer },
}

impl IntFunction {
    pub fn finite(values: &[i64]) -> Self {
        Self::Finite(values.iter().map(|&v| Integer::from(v)).collect())
    }

    /// Prefix values followed by the constant `limit`.
    pub fn eventually_constant(prefix: &[i64], limit: i64) -> Self {
        let mut cells: Vec<(IndexSet, Poly)> =
            prefix.iter().enumerate().map(|(i, &v)| (IndexSet::singleton(i as u64), Poly::from_i64(&[v]))).collect();
        cells.push((IndexSet::at_least(prefix.len()), Poly::from_i64(&[limit])));
        Self::Convergent { seq: IntSeq::from_polys(cells).expect("cells partition N"), limit: Integer::from(limit) }
    }

    pub fn fits(&self, x: SpaceModel) -> bool {
        matches!(
            (self, x),
            (IntFunction::Finite(_), SpaceModel::FiniteDiscrete(_)) | (IntFunction::Convergent { .. }, SpaceModel::ConvergentSequence)
        )
    }

    pub fn eval(&self, p: Point) -> Result<Integer, CpxError> {
        match (self, p) {
            (IntFunction::Finite(v), Point::Index(i)) => v.get(i as usize).cloned().ok_or(CpxError::PointOutOfRange(p)),
            (IntFunction::Finite(_), Point::Infinity) => Err(CpxError::PointOutOfRange(p)),
            (IntFunction::Convergent { seq, .. }, Point::Index(i)) => Ok(seq.eval(i)),
            (IntFunction::Convergent { limit, .. }, Point::Infinity) => Ok(limit.clone()),
        }
    }
}

/// `φ = Σ n_x δ_x ∈ A(X)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FreePoint {
    terms: BTreeMap<Point, Integer>,
}

impl FreePoint {
    /// Sums coefficients of repeated points and drops zeros.
    pub fn new(terms: impl IntoIterator<Item = (Point, Integer)>) -> Self {
        let mut out = BTreeMap::new();
        for (p, c) in terms {
            *out.entry(p).or_insert_with(Integer::zero) += c;
        }
        out.retain(|_, c: &mut Integer| !c.is_zero());
        Self { terms: out }
    }

    pub fn from_pairs(pairs: &[(Point, i64)]) -> Self {
        Self::new(pairs.iter().map(|&(p, c)| (p, Integer::from(c))))
    }

    pub fn terms(&self) -> &BTreeMap<Point, Integer> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `φ(f) = Σ n_x f(x)`.
    pub fn apply(&self, f: &IntFunction) -> Result<Integer, CpxError> {
        self.terms.iter().try_fold(Integer::zero(), |acc, (p, c)| Ok(acc + c * f.eval(*p)?))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Continuity {
    Continuous,
    /// Infinitely many indices where `f` differs from its value at `∞`.
    Witness(IndexSet),
}

/// Indices where `seq` differs from the constant `limit`, as an eventually
/// periodic set.
fn deviation_set(seq: &IntSeq, limit: &Integer) -> IndexSet {
    let (n0, l) = seq.frame();
    let c = Poly::constant(limit.clone());
    let mut last_root = 0u64;
    for cell in seq.cells() {
        let diff = cell.value.num().sub(&c.scale(&cell.value.den().leading()));
        for r in diff.natural_roots() {
            last_root = last_root.max(r + 1);
        }
    }
    let p = n0.max(last_root as usize);
    IndexSet::from_predicate(p, l, |i| &seq.eval(i) != limit)
}

pub fn is_continuous(x: SpaceModel, f: &IntFunction) -> Result<Continuity, CpxError> {
    if !f.fits(x) {
        return Err(CpxError::ModelMismatch);
    }
    match f {
        IntFunction::Finite(_) => Ok(Continuity::Continuous),
        IntFunction::Convergent { seq, limit } => {
            let d = deviation_set(seq, limit);
            Ok(if d.is_finite() { Continuity::Continuous } else { Continuity::Witness(d) })
        }
    }
}

/// Checks `f(F) = {0} ⇒ φ(f) = 0` on the clopen indicator basis: point
/// indicators, plus for the convergent sequence the indicator of a tail
/// `{i ≥ N} ∪ {∞}` beyond every listed point.
pub fn annihilates_off(x: SpaceModel, phi: &FreePoint, f: &BTreeSet<Point>) -> bool {
    basis_functions(x, phi, f).into_iter().all(|(vanishes, value)| !vanishes || value.is_zero())
}

fn tail_start(phi: &FreePoint, f: &BTreeSet<Point>) -> u64 {
    phi.terms
        .keys()
        .chain(f.iter())
        .filter_map(|p| match p {
            Point::Index(i) => Some(i + 1),
            Point::Infinity => None,
        })
        .max()
        .unwrap_or(0)
}

/// `(vanishes on F, φ-value)` for each basis function relevant to `φ` and `F`.
fn basis_functions(x: SpaceModel, phi: &FreePoint, f: &BTreeSet<Point>) -> Vec<(bool, Integer)> {
    let coeff = |p: &Point| phi.terms.get(p).cloned().unwrap_or_else(Integer::zero);
    let mut out = Vec::new();
    match x {
        SpaceModel::FiniteDiscrete(n) => {
            for i in 0..n as u64 {
                let p = Point::Index(i);
                out.push((!f.contains(&p), coeff(&p)));
            }
        }
        SpaceModel::ConvergentSequence => {
            let n = tail_start(phi, f);
            for i in 0..n {
                let p = Point::Index(i);
                out.push((!f.contains(&p), coeff(&p)));
            }
            let tail_hits_f = f.iter().any(|p| matches!(p, Point::Infinity) || matches!(p, Point::Index(i) if *i >= n));
            out.push((!tail_hits_f, coeff(&Point::Infinity)));
        }
    }
    out
}

/// The support of `φ`: after dropping zero coefficients, the points it
/// mentions. The defining property is checked on the indicator basis.
pub fn support_of_hom(x: SpaceModel, phi: &FreePoint) -> Result<BTreeSet<Point>, CpxError> {
    for p in phi.terms.keys() {
        let ok = match (x, p) {
            (SpaceModel::FiniteDiscrete(n), Point::Index(i)) => (*i as usize) < n,
            (SpaceModel::FiniteDiscrete(_), Point::Infinity) => false,
            (SpaceModel::ConvergentSequence, _) => true,
        };
        if !ok {
            return Err(CpxError::PointOutOfRange(*p));
        }
    }
    let s: BTreeSet<Point> = phi.terms.keys().copied().collect();
    debug_assert!(annihilates_off(x, phi, &s));
    Ok(s)
}

/// For `F'` missing some point of the support, a basis function vanishing on
/// `F'` on which `φ` is nonzero: `(point witnessed, φ-value)`.
pub fn minimality_witness(x: SpaceModel, phi: &FreePoint, smaller: &BTreeSet<Point>) -> Option<(Point, Integer)> {
    let n = tail_start(phi, smaller);
    phi.terms.iter().find(|(p, _)| !smaller.contains(p)).and_then(|(p, c)| match (x, p) {
        (SpaceModel::ConvergentSequence, Point::Infinity) => {
            // tail indicator {i ≥ n} ∪ {∞}: only ∞ contributes beyond n
            let tail_clear = smaller.iter().all(|q| matches!(q, Point::Index(i) if *i < n));
            tail_clear.then(|| (*p, c.clone()))
        }
        _ => Some((*p, c.clone())),
    })
}

/// `θ(f ⊗ t)[φ] = t · φ(f)`.
pub fn theta_eval(f: &IntFunction, t: &TorusValue, phi: &FreePoint) -> Result<TorusValue, CpxError> {
    Ok(t.scale(&phi.apply(f)?))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Reduction {
    /// `g` with `f ⊗ t = g ⊗ t`, continuous.
    Reduced(IntFunction),
    /// `f ⊗ t` is not continuous: along `indices` the relevant values (residues
    /// of `f` mod `m`, or `f` itself for irrational `t`) differ from the value at `∞`.
    NotAContinuousCharacter { modulus: Option<Integer>, indices: IndexSet },
}

/// Theorem B's constructive step: replaces `f` by a continuous `g` inducing the
/// same character `θ(· ⊗ t)`, or shows that no such `g` exists.
pub fn theorem_b_reduce(x: SpaceModel, f: &IntFunction, t: &TorusValue) -> Result<Reduction, CpxError> {
    if !f.fits(x) {
        return Err(CpxError::ModelMismatch);
    }
    if !t.is_rational() {
        if !t.rational_part().is_zero() {
            return Err(CpxError::UnsupportedTorusValue(t.to_string()));
        }
        return Ok(match is_continuous(x, f)? {
            Continuity::Continuous => Reduction::Reduced(f.clone()),
            Continuity::Witness(indices) => Reduction::NotAContinuousCharacter { modulus: None, indices },
        });
    }
    let m = t.rational_part().denom().clone();
    let res = |v: &Integer| v.mod_floor(&m);
    match f {
        IntFunction::Finite(v) => Ok(Reduction::Reduced(IntFunction::Finite(v.iter().map(res).collect()))),
        IntFunction::Convergent { seq, limit } => {
            let (n0, l) = seq.frame();
            let c = seq.cells().iter().fold(Integer::one(), |acc, cell| lcm(&acc, &cell.value.den().leading().abs()));
            let period = (&m * &c).to_usize().expect("period fits in usize").lcm(&l);
            let residue = |i: u64| res(&seq.eval(i));
            let m_usize = m.to_u64().expect("modulus fits in u64");
            let cells: Vec<(IndexSet, Poly)> = (0..m_usize)
                .map(|r| {
                    let rr = Integer::from(r);
                    (IndexSet::from_predicate(n0, period, |i| residue(i) == rr), Poly::constant(rr))
                })
                .filter(|(s, _)| !s.is_empty())
                .collect();
            let g_seq = IntSeq::from_polys(cells).expect("residue classes partition N");
            let g_limit = res(limit);
            let d = deviation_set(&g_seq, &g_limit);
            if d.is_infinite() {
                return Ok(Reduction::NotAContinuousCharacter { modulus: Some(m), indices: d });
            }
            Ok(Reduction::Reduced(IntFunction::Convergent { seq: g_seq, limit: g_limit }))
        }
    }
}

/// Lift of a finitely supported character of `C_p(X, Z)` to `C_p(X, R)`:
/// real coefficients `λ_x` with rational part in `[0, 1)` and the formal
/// irrational parts carried along.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct RealLift {
    pub lambdas: BTreeMap<Point, (Rational, BTreeMap<IrrationalSymbol, Rational>)>,
}

impl RealLift {
    /// `Σ λ_x f(x)` read in `T`.
    pub fn eval(&self, f: &IntFunction) -> Result<TorusValue, CpxError> {
        let mut rational = Rational::zero();
        let mut irr: BTreeMap<IrrationalSymbol, Rational> = BTreeMap::new();
        for (p, (r, i)) in &self.lambdas {
            let v = Rational::from_integer(f.eval(*p)?);
            rational += r * &v;
            for (s, c) in i {
                *irr.entry(*s).or_insert_with(Rational::zero) += c * &v;
            }
        }
        Ok(TorusValue::new(rational, irr))
    }
}

pub fn extend_character(chi: &BTreeMap<Point, TorusValue>) -> RealLift {
    let lambdas = chi
        .iter()
        .filter(|(_, v)| !v.is_zero())
        .map(|(p, v)| (*p, (v.rational_lift(), v.irrational_coeffs().clone())))
        .collect();
    RealLift { lambdas }
}

/// Character of `Z^X` (finite `X`) given by its values on the point indicators.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiniteCharacter {
    pub values: Vec<TorusValue>,
}

impl FiniteCharacter {
    pub fn eval(&self, f: &[Integer]) -> TorusValue {
        self.values.iter().zip(f).map(|(t, n)| t.scale(n)).sum()
    }

    /// The element of `T^(X)` presenting this character, read off on `δ_x`.
    pub fn presentation(&self) -> Vec<TorusValue> {
        let n = self.values.len();
        (0..n)
            .map(|x| {
                let delta: Vec<Integer> = (0..n).map(|y| if x == y { Integer::one() } else { Integer::zero() }).collect();
                self.eval(&delta)
            })
            .collect()
    }
}
