//! Characters of `H = Z^(N)`: membership in the dual, decomposition into
//! elementary tensors, continuity subsets and annihilator witnesses.

use std::collections::BTreeMap;

use num_integer::Integer as _;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::exact::{integer_kernel_basis, smith_normal_form, Basis, IntMatrix, Integer, Rational, TorusValue};
use crate::seq::{
    char_eval, common_frame, denominator_profile, pair, Cell, CharacterPresentation, DenominatorProfile,
    FinSupportVector, IndexSet, IntSeq, Piecewise, Poly, RatFunc, TorusFn,
};

/// `x̄ ⊗ t`, acting on `H` by `g ↦ t·⟨g, x̄⟩`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElementaryTensor {
    pub vector: IntSeq,
    pub value: TorusValue,
}

impl ElementaryTensor {
    pub fn eval(&self, g: &FinSupportVector) -> TorusValue {
        self.value.scale(&pair(g, &self.vector).to_integer())
    }

    /// The pointwise character `i ↦ x̄(i)·t`.
    pub fn to_pointwise(&self) -> CharacterPresentation {
        let mut basis = BTreeMap::new();
        basis.insert(Basis::One, self.value.rational_part().clone());
        for (s, c) in self.value.irrational_coeffs() {
            basis.insert(Basis::Tau(*s), c.clone());
        }
        CharacterPresentation::from_piecewise(self.vector.map(|f| {
            TorusFn::new(basis.iter().map(|(b, c)| (*b, f.scale(c))).collect())
        }))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct TensorSum {
    pub terms: Vec<ElementaryTensor>,
}

/// Finite `F ⊂ Z^N` whose common annihilator is killed by the character.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ContinuitySubset {
    pub vectors: Vec<IntSeq>,
}

/// A component of the character whose reduced denominators are unbounded on
/// an infinite set of indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NonMembershipCertificate {
    pub symbol: Basis,
    /// Index of the offending cell in the input presentation.
    pub cell: usize,
    pub support: IndexSet,
    pub num: Poly,
    pub den: Poly,
}

impl NonMembershipCertificate {
    pub fn profile(&self) -> DenominatorProfile {
        DenominatorProfile::Unbounded {
            cell: self.cell,
            support: self.support.clone(),
            num: self.num.clone(),
            den: self.den.clone(),
        }
    }

    /// An index of the certified support where the coefficient's reduced
    /// denominator exceeds `bound`.
    pub fn index_exceeding(&self, bound: &Integer) -> Option<(u64, Integer)> {
        self.profile().index_exceeding(bound)
    }

    /// Re-checks the certificate against `t`.
    pub fn check(&self, t: &CharacterPresentation) -> bool {
        let Some(f) = RatFunc::new(self.num.clone(), self.den.clone()) else {
            return false;
        };
        self.den.degree().unwrap_or(0) >= 1
            && f.den() == &self.den
            && self.support.is_infinite()
            && self.support.take(64).into_iter().all(|i| Some(t.eval(i).coeff(self.symbol)) == reduce_coeff(self.symbol, f.eval_at(i)))
            && self.index_exceeding(&Integer::from(1_000_000)).is_some()
    }
}

fn reduce_coeff(b: Basis, v: Option<Rational>) -> Option<Rational> {
    v.map(|v| TorusValue::basis(b, v).coeff(b))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MembershipVerdict {
    InDual { decomposition: TensorSum, witness: ContinuitySubset },
    NotInDual(NonMembershipCertificate),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ContinuityCheck {
    Holds,
    Counterexample(FinSupportVector),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CharEquality {
    Equal,
    Witness(u64),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DualError {
    #[error("character is not in the dual: reduced denominator {} is unbounded", .0.den)]
    NotInDual(NonMembershipCertificate),
    #[error("index set is finite")]
    JFinite,
}

/// `k·r` on `j` and zero elsewhere, as an integer sequence. Non-polynomial
/// cells may only meet `j` in finitely many points.
fn scaled_restriction(r: &Piecewise<RatFunc>, j: &IndexSet, k: &Integer) -> IntSeq {
    let kq = Rational::from_integer(k.clone());
    let mut cells = vec![Cell::new(j.complement(), RatFunc::zero())];
    for c in r.cells() {
        let s = c.support.intersect(j);
        if s.is_empty() {
            continue;
        }
        let f = c.value.scale(&kq);
        if f.is_polynomial() {
            cells.push(Cell::new(s, f));
        } else {
            assert!(s.is_finite(), "unbounded cell inside a bounded stratum");
            for i in s.iter() {
                cells.push(Cell::new(IndexSet::singleton(i), RatFunc::constant(&f.eval_at(i).unwrap())));
            }
        }
    }
    IntSeq::from_piecewise(Piecewise::new(cells).expect("cells partition N")).expect("scaled stratum is integer-valued")
}

struct Component {
    basis: Basis,
    seq: Piecewise<RatFunc>,
    strata: BTreeMap<Integer, IndexSet>,
}

fn components(t: &CharacterPresentation) -> Result<Vec<Component>, NonMembershipCertificate> {
    let mut out = Vec::new();
    for b in t.symbols() {
        let seq = t.component(b).as_piecewise().clone();
        match denominator_profile(&seq, &IndexSet::all()) {
            DenominatorProfile::Bounded { strata } => out.push(Component { basis: b, seq, strata }),
            DenominatorProfile::Unbounded { support, num, den, .. } => {
                let first = support.first().expect("unbounded support is infinite");
                return Err(NonMembershipCertificate { symbol: b, cell: t.cell_index(first), support, num, den });
            }
        }
    }
    Ok(out)
}

fn decompose_components(comps: &[Component]) -> (TensorSum, ContinuitySubset) {
    let mut terms = Vec::new();
    let mut vectors = Vec::new();
    for c in comps {
        if c.seq.is_zero() {
            continue;
        }
        for (q, stratum) in &c.strata {
            if c.basis == Basis::One && q.is_one() {
                continue;
            }
            let vector = scaled_restriction(&c.seq, stratum, q);
            if vector.is_zero() {
                continue;
            }
            let value = TorusValue::basis(c.basis, Rational::new(Integer::one(), q.clone()));
            terms.push(ElementaryTensor { vector, value });
        }
        let m = c.strata.keys().fold(Integer::one(), |acc, q| acc.lcm(q));
        if c.basis == Basis::One && m.is_one() {
            continue;
        }
        vectors.push(scaled_restriction(&c.seq, &IndexSet::all(), &m));
    }
    (TensorSum { terms }, ContinuitySubset { vectors })
}

/// Decides whether `t` is a continuous character of `H`. Members come with a
/// tensor decomposition and a continuity subset, non-members with an
/// unbounded-denominator certificate.
pub fn decide_membership(t: &CharacterPresentation) -> MembershipVerdict {
    match components(t) {
        Ok(comps) => {
            let (decomposition, witness) = decompose_components(&comps);
            MembershipVerdict::InDual { decomposition, witness }
        }
        Err(cert) => MembershipVerdict::NotInDual(cert),
    }
}

/// One term per (symbol, reduced denominator `q`) stratum: the numerator
/// sequence on the stratum paired with `symbol/q`.
pub fn decompose(t: &CharacterPresentation) -> Result<TensorSum, DualError> {
    components(t).map(|c| decompose_components(&c).0).map_err(DualError::NotInDual)
}

pub fn tensor_eval(s: &TensorSum, g: &FinSupportVector) -> TorusValue {
    s.terms.iter().map(|term| term.eval(g)).sum()
}

pub fn tensor_to_pointwise(s: &TensorSum) -> CharacterPresentation {
    s.terms
        .iter()
        .fold(CharacterPresentation::zero(), |acc, term| acc.add(&term.to_pointwise()))
}

fn binomial(n: usize, k: usize) -> Integer {
    (0..k).fold(Integer::one(), |acc, j| acc * Integer::from(n - j) / Integer::from(j + 1))
}

/// `Δ^order` at positions `start + step·(shift + k)`, `k = 0..=order`.
fn difference_vector(start: u64, step: u64, shift: u64, order: usize) -> FinSupportVector {
    FinSupportVector::new((0..=order).map(|k| {
        let c = binomial(order, k);
        let c = if (order - k).is_multiple_of(2) { c } else { -c };
        (start + step * (shift + k as u64), c)
    }))
}

fn kernel_vectors(a: &IntMatrix) -> Vec<Vec<Integer>> {
    if a.cols() <= 64 {
        return integer_kernel_basis(a);
    }
    let snf = smith_normal_form(a);
    (snf.rank()..a.cols()).map(|c| snf.v.column(c)).collect()
}

/// Checks that every `g` annihilating all of `F` also annihilates `t`;
/// otherwise returns such a `g` on which `t` is nonzero.
pub fn verify_continuity_subset(t: &CharacterPresentation, f: &ContinuitySubset) -> ContinuityCheck {
    let (n0, l) = common_frame(
        t.cells().iter().map(|c| &c.support).chain(f.vectors.iter().flat_map(|x| x.cells().iter().map(|c| &c.support))),
    );
    let degree_at = |i: u64| f.vectors.iter().filter_map(|x| x.value_at(i).poly_degree()).max().unwrap_or(0);

    if let Err(cert) = components(t) {
        // Higher differences kill every vector of F on one residue class but
        // never the non-polynomial coefficient of t there.
        let b = cert.symbol;
        let r = (0..l)
            .find(|&r| !t.value_at((n0 + r) as u64).coeff(b).is_polynomial())
            .expect("unbounded component has a non-polynomial tail class");
        let a = (n0 + r) as u64;
        let excess = t.value_at(a).coeff(b).degree_excess().unwrap_or(0).max(0) as usize;
        let order = degree_at(a).max(excess) + 1;
        let g = (0u64..)
            .map(|s| difference_vector(a, l as u64, s, order))
            .find(|g| !char_eval(t, g).is_zero())
            .expect("non-polynomial differences are eventually nonzero");
        return ContinuityCheck::Counterexample(g);
    }

    // Each tail class carries polynomials of degree <= dmax, so differences of
    // order dmax+1 lie in both kernels and every g reduces into a window.
    let t_degree = t
        .cells()
        .iter()
        .flat_map(|c| c.value.terms().values().filter_map(|r| r.poly_degree()))
        .max()
        .unwrap_or(0);
    let dmax = (0..l).map(|r| degree_at((n0 + r) as u64)).max().unwrap_or(0).max(t_degree);
    let window = n0 + l * (dmax + 1);
    let rows: Vec<Vec<Integer>> =
        f.vectors.iter().map(|x| (0..window as u64).map(|i| x.eval(i)).collect()).collect();
    let a = IntMatrix::from_rows(rows, window).expect("rows share length");
    for v in kernel_vectors(&a) {
        let g = FinSupportVector::new(v.into_iter().enumerate().map(|(i, c)| (i as u64, c)));
        if !char_eval(t, &g).is_zero() {
            return ContinuityCheck::Counterexample(g);
        }
    }
    ContinuityCheck::Holds
}

/// Drops vectors greedily (last first) while the subset still certifies `t`.
pub fn minimize_continuity_subset(t: &CharacterPresentation, f: &ContinuitySubset) -> ContinuitySubset {
    let mut cur = f.clone();
    let mut k = cur.vectors.len();
    while k > 0 {
        k -= 1;
        let mut trial = cur.clone();
        trial.vectors.remove(k);
        if verify_continuity_subset(t, &trial) == ContinuityCheck::Holds {
            cur = trial;
        }
    }
    cur
}

/// A nonzero `g` supported in the infinite set `j` with `⟨g, x̄⟩ = 0` for every
/// `x̄ ∈ f`, from the kernel of the values at the first `|f|+1` indices of `j`.
pub fn annihilator_witness(f: &[IntSeq], j: &IndexSet) -> Result<FinSupportVector, DualError> {
    if j.is_finite() {
        return Err(DualError::JFinite);
    }
    let idx = j.take(f.len() + 1);
    let rows: Vec<Vec<Integer>> = f.iter().map(|x| idx.iter().map(|&i| x.eval(i)).collect()).collect();
    let a = IntMatrix::from_rows(rows, idx.len()).expect("rows share length");
    let v = integer_kernel_basis(&a).into_iter().next().expect("more columns than rows");
    Ok(FinSupportVector::new(idx.into_iter().zip(v)))
}

fn first_nonzero_in(f: &RatFunc, support: &IndexSet) -> Option<u64> {
    let bound = f.num().degree().unwrap_or(0) + 1;
    support.iter().take(bound).find(|&i| !f.eval_at(i).is_some_and(|v| v.is_zero()))
}

fn first_non_integer_in(f: &RatFunc, support: &IndexSet) -> Option<u64> {
    let bad = |i: u64| !f.eval_at(i).is_some_and(|v| v.is_integer());
    let (points, classes) = support.decompose();
    let mut best = points.into_iter().find(|&i| bad(i));
    for (a, step) in classes {
        let hit = if f.is_polynomial() {
            let deg = f.poly_degree().unwrap_or(0) as u64;
            (0..=deg).map(|k| a + step * k).find(|&i| bad(i))
        } else {
            // proper fractional part tends to zero without vanishing
            (0u64..).map(|k| a + step * k).find(|&i| bad(i))
        };
        best = match (best, hit) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, y) => x.or(y),
        };
    }
    best
}

/// Equality in `T^N`, decided cell by cell on the canonical difference. On
/// inequality returns the smallest index where the two differ.
pub fn char_equal(a: &CharacterPresentation, b: &CharacterPresentation) -> CharEquality {
    let d = a.sub(b);
    let mut witness: Option<u64> = None;
    for c in d.cells() {
        for (basis, f) in c.value.terms() {
            let hit = match basis {
                Basis::One => first_non_integer_in(f, &c.support),
                Basis::Tau(_) => first_nonzero_in(f, &c.support),
            };
            if let Some(i) = hit {
                witness = Some(witness.map_or(i, |w| w.min(i)));
            }
        }
    }
    match witness {
        None => CharEquality::Equal,
        Some(w) => CharEquality::Witness((0..=w).find(|&i| !d.eval(i).is_zero()).unwrap_or(w)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::IrrationalSymbol;

    fn q(p: i64, d: i64) -> Rational {
        Rational::new(p.into(), d.into())
    }

    fn constant(p: i64, d: i64) -> CharacterPresentation {
        CharacterPresentation::constant(&TorusValue::from_ratio(p, d))
    }

    fn tau1() -> Basis {
        Basis::Tau(IrrationalSymbol::new(1).unwrap())
    }

    #[test]
    fn harmonic_not_in_dual() {
        let t = CharacterPresentation::from_symbol_cells(vec![(
            IndexSet::all(),
            Basis::One,
            RatFunc::new(Poly::from_i64(&[1]), Poly::from_i64(&[1, 1])).unwrap(),
        )])
        .unwrap();
        let MembershipVerdict::NotInDual(cert) = decide_membership(&t) else { panic!() };
        assert_eq!(cert.den, Poly::from_i64(&[1, 1]));
        assert!(cert.check(&t));
        assert!(matches!(decompose(&t), Err(DualError::NotInDual(_))));
        let any = ContinuitySubset { vectors: vec![IntSeq::constant(1), IntSeq::polynomial(Poly::index())] };
        let ContinuityCheck::Counterexample(g) = verify_continuity_subset(&t, &any) else { panic!() };
        assert!(any.vectors.iter().all(|x| pair(&g, x).is_zero()));
        assert!(!char_eval(&t, &g).is_zero());
    }

    #[test]
    fn constant_half() {
        let t = constant(1, 2);
        let MembershipVerdict::InDual { decomposition, witness } = decide_membership(&t) else { panic!() };
        assert_eq!(decomposition.terms, vec![ElementaryTensor { vector: IntSeq::constant(1), value: TorusValue::from_ratio(1, 2) }]);
        assert_eq!(witness.vectors, vec![IntSeq::constant(1)]);
        assert_eq!(verify_continuity_subset(&t, &witness), ContinuityCheck::Holds);
    }

    #[test]
    fn mixed_symbols_by_cell() {
        let t = CharacterPresentation::from_symbol_cells(vec![
            (IndexSet::evens(), tau1(), RatFunc::constant(&q(1, 2))),
            (IndexSet::odds(), Basis::One, RatFunc::constant(&q(3, 5))),
        ])
        .unwrap();
        let s = decompose(&t).unwrap();
        let ind = |j: IndexSet, k: i64| IntSeq::indicator(&j).scale(&Integer::from(k));
        assert_eq!(
            s.terms,
            vec![
                ElementaryTensor { vector: ind(IndexSet::odds(), 3), value: TorusValue::from_ratio(1, 5) },
                ElementaryTensor { vector: ind(IndexSet::evens(), 1), value: TorusValue::basis(tau1(), q(1, 2)) },
            ]
        );
        assert_eq!(char_equal(&tensor_to_pointwise(&s), &t), CharEquality::Equal);
    }

    #[test]
    fn half_index() {
        let t = CharacterPresentation::from_symbol_cells(vec![(
            IndexSet::all(),
            Basis::One,
            RatFunc::new(Poly::index(), Poly::from_i64(&[2])).unwrap(),
        )])
        .unwrap();
        let s = decompose(&t).unwrap();
        assert_eq!(s.terms.len(), 1);
        assert_eq!(s.terms[0].value, TorusValue::from_ratio(1, 2));
        let back = tensor_to_pointwise(&s);
        for i in 0..=50 {
            assert_eq!(back.eval(i), t.eval(i));
        }
        assert_eq!(char_equal(&back, &t), CharEquality::Equal);
        assert!(decompose(&CharacterPresentation::zero()).unwrap().terms.is_empty());
    }

    #[test]
    fn continuity_examples() {
        let t = constant(1, 2);
        let ones = ContinuitySubset { vectors: vec![IntSeq::constant(1)] };
        assert_eq!(verify_continuity_subset(&t, &ones), ContinuityCheck::Holds);
        let e0 = ContinuitySubset { vectors: vec![IntSeq::indicator(&IndexSet::singleton(0))] };
        assert_eq!(verify_continuity_subset(&t, &e0), ContinuityCheck::Counterexample(FinSupportVector::unit(1)));
        assert_eq!(
            verify_continuity_subset(&CharacterPresentation::zero(), &ContinuitySubset::default()),
            ContinuityCheck::Holds
        );
    }

    #[test]
    fn annihilator_examples() {
        let ones = IntSeq::constant(1);
        assert_eq!(
            annihilator_witness(std::slice::from_ref(&ones), &IndexSet::evens()).unwrap(),
            FinSupportVector::from_pairs(&[(0, 1), (2, -1)])
        );
        let f = vec![ones, IntSeq::polynomial(Poly::from_i64(&[1, 1]))];
        assert_eq!(
            annihilator_witness(&f, &IndexSet::all()).unwrap(),
            FinSupportVector::from_pairs(&[(0, 1), (1, -2), (2, 1)])
        );
        assert_eq!(annihilator_witness(&[], &IndexSet::odds()).unwrap(), FinSupportVector::unit(1));
        assert_eq!(annihilator_witness(&[], &IndexSet::singleton(3)), Err(DualError::JFinite));
    }

    #[test]
    fn tensor_eval_examples() {
        let s = TensorSum { terms: vec![ElementaryTensor { vector: IntSeq::constant(1), value: TorusValue::from_ratio(1, 2) }] };
        assert_eq!(tensor_eval(&s, &FinSupportVector::unit(0)), TorusValue::from_ratio(1, 2));
        assert!(tensor_eval(&s, &FinSupportVector::from_pairs(&[(0, 2)])).is_zero());
        let t = TensorSum {
            terms: vec![ElementaryTensor { vector: IntSeq::constant(2), value: TorusValue::basis(tau1(), q(1, 1)) }],
        };
        assert_eq!(tensor_eval(&t, &FinSupportVector::from_pairs(&[(3, 2)])), TorusValue::basis(tau1(), q(4, 1)));
    }

    #[test]
    fn pointwise_examples() {
        let ones_half = ElementaryTensor { vector: IntSeq::constant(1), value: TorusValue::from_ratio(1, 2) };
        assert_eq!(tensor_to_pointwise(&TensorSum { terms: vec![ones_half] }), constant(1, 2));
        assert_eq!(tensor_to_pointwise(&TensorSum::default()), CharacterPresentation::zero());
        let third = |j: IndexSet| ElementaryTensor { vector: IntSeq::indicator(&j), value: TorusValue::from_ratio(1, 3) };
        let s = TensorSum { terms: vec![third(IndexSet::evens()), third(IndexSet::odds())] };
        assert_eq!(tensor_to_pointwise(&s), constant(1, 3));
    }

    #[test]
    fn char_equal_examples() {
        assert_eq!(char_equal(&constant(1, 2), &constant(-1, 2)), CharEquality::Equal);
        let evens = restrict_third();
        assert_eq!(char_equal(&evens, &constant(1, 3)), CharEquality::Witness(1));
        // i ≡ 0 mod 1 on every index even though the formulas differ
        let idx = CharacterPresentation::from_symbol_cells(vec![(IndexSet::all(), Basis::One, RatFunc::polynomial(Poly::index()))])
            .unwrap();
        assert_eq!(char_equal(&idx, &CharacterPresentation::zero()), CharEquality::Equal);
    }

    fn restrict_third() -> CharacterPresentation {
        crate::seq::restrict_character(&constant(1, 3), &IndexSet::evens())
    }
}
