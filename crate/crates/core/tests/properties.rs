//! Property tests for the algebraic invariants of each module.

mod common;

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

use tensordual::cpx::{self, Continuity, FiniteCharacter, IntFunction, Point, Reduction, SpaceModel};
use tensordual::dualgrp::{self, ContinuityCheck, MembershipVerdict};
use tensordual::exact::{
    integer_kernel_basis, smith_normal_form, torus_combine, Basis, IntMatrix, IrrationalSymbol, TorusValue,
};
use tensordual::fgab;
use tensordual::gen;
use tensordual::seq::{
    char_eval, denominator_profile, pair, restrict_character, DenominatorProfile, FinSupportVector, IndexSet,
};

fn matrix() -> impl Strategy<Value = IntMatrix> {
    (0usize..=6, 0usize..=6).prop_flat_map(|(r, c)| {
        prop::collection::vec(-20i64..=20, r * c)
            .prop_map(move |v| IntMatrix::new(r, c, v.into_iter().map(BigInt::from).collect()).unwrap())
    })
}

fn torus() -> impl Strategy<Value = TorusValue> {
    (-30i64..=30, 1i64..=24, prop::collection::btree_map(1u32..=3, (-9i64..=9, 1i64..=9), 0..=2)).prop_map(|(p, q, irr)| {
        let irr = irr
            .into_iter()
            .map(|(s, (a, b))| (IrrationalSymbol::new(s).unwrap(), BigRational::new(a.into(), b.into())))
            .collect();
        TorusValue::new(BigRational::new(p.into(), q.into()), irr)
    })
}

/// A primitive integer vector in the rational null space of `a`, if nonzero.
fn sample_kernel_vector(a: &IntMatrix, r: &mut gen::Rng64) -> Option<Vec<BigInt>> {
    let cols = a.cols();
    let mut m: Vec<Vec<BigRational>> =
        a.to_rows().into_iter().map(|row| row.into_iter().map(BigRational::from_integer).collect()).collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for c in 0..cols {
        let Some(p) = (row..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(row, p);
        let inv = m[row][c].recip();
        for k in 0..cols {
            m[row][k] = &m[row][k] * &inv;
        }
        for i in 0..m.len() {
            if i != row && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for k in 0..cols {
                    let v = &f * &m[row][k];
                    m[i][k] -= v;
                }
            }
        }
        pivots.push(c);
        row += 1;
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    if free.is_empty() {
        return None;
    }
    let mut x = vec![BigRational::zero(); cols];
    for &f in &free {
        x[f] = BigRational::from_integer(BigInt::from(r.gen_range(-3i64..=3)));
    }
    for (i, &p) in pivots.iter().enumerate() {
        x[p] = -free.iter().map(|&f| &m[i][f] * &x[f]).sum::<BigRational>();
    }
    let den = x.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let v: Vec<BigInt> = x.iter().map(|q| (q * BigRational::from_integer(den.clone())).to_integer()).collect();
    let g = v.iter().fold(BigInt::zero(), |acc, e| acc.gcd(e));
    if g.is_zero() {
        return None;
    }
    Some(v.into_iter().map(|e| e / &g).collect())
}

/// Whether `v` is an integer combination of the columns of `basis`, solved through SNF.
fn in_lattice(basis: &[Vec<BigInt>], v: &[BigInt]) -> bool {
    let n = v.len();
    let rows: Vec<Vec<BigInt>> = (0..n).map(|i| basis.iter().map(|b| b[i].clone()).collect()).collect();
    let m = IntMatrix::from_rows(rows, basis.len()).unwrap();
    let s = smith_normal_form(&m);
    let y = s.u.mul_vec(v);
    let d = s.s.diagonal();
    y.iter().enumerate().all(|(i, yi)| match d.get(i) {
        Some(di) if !di.is_zero() => (yi % di).is_zero(),
        _ => yi.is_zero(),
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    // ------------------------------------------------------------ exact

    #[test]
    fn snf_is_a_unimodular_diagonalization(a in matrix()) {
        let s = smith_normal_form(&a);
        prop_assert_eq!(s.u.mul(&a).unwrap().mul(&s.v).unwrap(), s.s.clone());
        let d = s.invariant_factors();
        prop_assert!(d.windows(2).all(|w| (&w[1] % &w[0]).is_zero()));
        if a.rows() == a.cols() {
            let ds: BigInt = s.s.diagonal().iter().product();
            prop_assert_eq!(ds.abs(), common::det(&a.to_rows()).abs());
        }
    }

    #[test]
    fn kernel_basis_spans_integer_kernel(a in matrix(), seed in any::<u64>()) {
        let b = integer_kernel_basis(&a);
        for v in &b {
            prop_assert!(a.mul_vec(v).iter().all(|x| x.is_zero()));
        }
        let mut r = gen::rng(seed);
        if let Some(v) = sample_kernel_vector(&a, &mut r) {
            prop_assert!(a.mul_vec(&v).iter().all(|x| x.is_zero()));
            prop_assert!(in_lattice(&b, &v), "kernel vector {:?} outside the basis lattice", v);
        }
    }

    #[test]
    fn torus_combine_ignores_order(terms in prop::collection::vec((-50i64..=50, torus()), 0..6), seed in any::<u64>()) {
        let terms: Vec<(BigInt, TorusValue)> = terms.into_iter().map(|(c, v)| (BigInt::from(c), v)).collect();
        let mut shuffled = terms.clone();
        shuffled.shuffle(&mut gen::rng(seed));
        prop_assert_eq!(torus_combine(&terms), torus_combine(&shuffled));
    }

    #[test]
    fn torus_normalization_is_idempotent(t in torus()) {
        let again = TorusValue::new(t.rational_part().clone(), t.irrational_coeffs().clone());
        prop_assert_eq!(&again, &t);
        prop_assert!(*t.rational_part() > BigRational::new((-1).into(), 2.into()));
        prop_assert!(*t.rational_part() <= BigRational::new(1.into(), 2.into()));
    }

    // ------------------------------------------------------------ seq

    #[test]
    fn refined_presentations_normalize_identically(seed in any::<u64>()) {
        let mut r = gen::rng(seed);
        let x = gen::int_seq(&mut r, 2, 20);
        let j = gen::index_set(&mut r, 4, 5);
        let refined = x.restrict(&j).add(&x.restrict(&j.complement()));
        prop_assert_eq!(&refined, &x);
        for i in 0..500 {
            prop_assert_eq!(refined.eval(i), x.eval(i));
        }
    }

    #[test]
    fn pairing_is_bilinear(seed in any::<u64>(), n in -20i64..=20) {
        let mut r = gen::rng(seed);
        let x = gen::int_seq(&mut r, 2, 20);
        let g = gen::fin_support(&mut r, 8, 60, 30);
        let h = gen::fin_support(&mut r, 8, 60, 30);
        prop_assert_eq!(pair(&g.add(&h), &x), pair(&g, &x) + pair(&h, &x));
        let n = BigInt::from(n);
        prop_assert_eq!(pair(&g.scale(&n), &x), pair(&g, &x) * BigRational::from_integer(n));
    }

    #[test]
    fn characters_are_determined_by_deltas(seed in any::<u64>()) {
        let mut r = gen::rng(seed);
        let t = gen::character_in_dual(&mut r, 2, 30);
        for i in 0..60 {
            let e = FinSupportVector::new([(i, BigInt::one())]);
            prop_assert_eq!(char_eval(&t, &e), t.eval(i));
            prop_assert_eq!(t.eval(i), common::char_value(&t, i));
        }
    }

    #[test]
    fn restriction_agrees_on_j_and_is_idempotent(seed in any::<u64>()) {
        let mut r = gen::rng(seed);
        let t = gen::character_in_dual(&mut r, 2, 30);
        let j = gen::index_set(&mut r, 5, 6);
        let tj = restrict_character(&t, &j);
        for i in 0..200 {
            let want = if j.contains(i) { t.eval(i) } else { TorusValue::zero() };
            prop_assert_eq!(tj.eval(i), want);
        }
        prop_assert_eq!(restrict_character(&tj, &j), tj);
    }

    #[test]
    fn bounded_profiles_stratify_by_denominator(seed in any::<u64>()) {
        let mut r = gen::rng(seed);
        let t = gen::character_in_dual(&mut r, 1, 30);
        let j = gen::index_set(&mut r, 4, 6);
        for b in t.symbols() {
            let comp = t.component(b);
            let DenominatorProfile::Bounded { strata } = denominator_profile(comp.as_piecewise(), &j) else {
                return Err(TestCaseError::fail("bounded character has an unbounded profile"));
            };
            let sets: Vec<&IndexSet> = strata.values().collect();
            for (a, s) in sets.iter().enumerate() {
                for u in &sets[a + 1..] {
                    prop_assert!(s.is_disjoint(u));
                }
            }
            let union = sets.iter().fold(IndexSet::empty(), |acc, s| acc.union(s));
            prop_assert_eq!(&union, &j);
            for (q, s) in &strata {
                for i in s.take(20) {
                    prop_assert_eq!(comp.eval(i).denom().clone(), q.clone());
                }
            }
        }
    }

    // ------------------------------------------------------------ dualgrp

    #[test]
    fn membership_witnesses_are_sound(seed in any::<u64>()) {
        let mut r = gen::rng(seed);
        let t = gen::character_in_dual(&mut r, 2, 30);
        let MembershipVerdict::InDual { decomposition, witness } = dualgrp::decide_membership(&t) else {
            return Err(TestCaseError::fail("generated member rejected"));
        };
        prop_assert_eq!(dualgrp::verify_continuity_subset(&t, &witness), ContinuityCheck::Holds);
        for _ in 0..50 {
            let g = gen::fin_support(&mut r, 10, 200, 100);
            prop_assert_eq!(dualgrp::tensor_eval(&decomposition, &g), char_eval(&t, &g));
        }
        // some vector of the witness is nonzero wherever t is
        for i in 0..100 {
            if !t.eval(i).is_zero() {
                prop_assert!(witness.vectors.iter().any(|x| !x.eval(i).is_zero()), "index {} uncovered", i);
            }
        }
        let j = gen::index_set(&mut r, 5, 6);
        let restricted = dualgrp::decide_membership(&restrict_character(&t, &j));
        prop_assert!(matches!(restricted, MembershipVerdict::InDual { .. }), "restriction left the dual");
    }

    #[test]
    fn certificates_are_sound(seed in any::<u64>(), exp in 1u32..=12) {
        let mut r = gen::rng(seed);
        let t = gen::character_not_in_dual(&mut r, 2, 30);
        let MembershipVerdict::NotInDual(cert) = dualgrp::decide_membership(&t) else {
            return Err(TestCaseError::fail("generated non-member accepted"));
        };
        prop_assert!(cert.check(&t));
        prop_assert!(cert.den.degree().unwrap_or(0) >= 1);
        let bound = BigInt::from(10u64).pow(exp);
        let (i, q) = cert.index_exceeding(&bound).unwrap();
        prop_assert!(cert.support.contains(i) && q > bound);
        prop_assert_eq!(common::char_value(&t, i).coeff(cert.symbol).denom().clone(), q);
    }

    #[test]
    fn annihilator_witness_meets_its_postcondition(seed in any::<u64>()) {
        let mut r = gen::rng(seed);
        let n = r.gen_range(0..=5);
        let f: Vec<_> = (0..n).map(|_| gen::int_seq(&mut r, 2, 20)).collect();
        let j = gen::infinite_index_set(&mut r, 5, 6);
        let g = dualgrp::annihilator_witness(&f, &j).unwrap();
        prop_assert!(!g.is_zero());
        prop_assert!(g.support().iter().all(|&i| j.contains(i)));
        for x in &f {
            prop_assert!(pair(&g, x).is_zero());
        }
    }

    // ------------------------------------------------------------ fgab

    #[test]
    fn redundant_relations_change_nothing(seed in any::<u64>()) {
        let mut r = gen::rng(seed);
        let gens = r.gen_range(1..=4usize);
        let nrel = r.gen_range(1..=4usize);
        let rows: Vec<Vec<BigInt>> =
            (0..nrel).map(|_| (0..gens).map(|_| BigInt::from(r.gen_range(-12i64..=12))).collect()).collect();
        let weights: Vec<BigInt> = (0..nrel).map(|_| BigInt::from(r.gen_range(-3i64..=3))).collect();
        let combo: Vec<BigInt> = (0..gens).map(|c| rows.iter().zip(&weights).map(|(row, w)| &row[c] * w).sum()).collect();
        let base = IntMatrix::from_rows(rows.clone(), gens).unwrap();
        let extended = IntMatrix::from_rows([rows, vec![combo]].concat(), gens).unwrap();
        let (g1, _) = fgab::group_from_relations(gens, &base).unwrap();
        let (g2, p2) = fgab::group_from_relations(gens, &extended).unwrap();
        prop_assert_eq!(&g1, &g2);
        for k in 0..extended.rows() {
            let coords: Vec<i64> = extended.row(k).iter().map(|x| i64::try_from(x).unwrap()).collect();
            prop_assert_eq!(p2.apply(&fgab::GroupElement::new(coords)), g2.zero());
        }
    }

    #[test]
    fn polar_laws(seed in any::<u64>()) {
        let mut r = gen::rng(seed);
        let g = gen::cyclic_sum(&mut r, 12);
        let a = gen::subset(&mut r, &g);
        let extra = gen::subset(&mut r, &g);
        let b = fgab::Subset::new(g.clone(), a.elements.iter().chain(&extra.elements).cloned()).unwrap();
        prop_assert!(fgab::polar(&b).is_subset(&fgab::polar(&a)));
        let hull = fgab::quasiconvex_hull(&a);
        prop_assert!(a.is_subset(&hull));
        prop_assert_eq!(&fgab::quasiconvex_hull(&hull), &hull);
        prop_assert_eq!(fgab::polar(&hull), fgab::polar(&a));
        let brute: BTreeSet<Vec<i64>> = common::polar(g.torsion(), &a.elements.iter().map(|x| x.coords.clone()).collect());
        let got: BTreeSet<Vec<i64>> = fgab::polar(&a).elements.iter().map(|x| x.coords.clone()).collect();
        prop_assert_eq!(got, brute);
    }

    #[test]
    fn hom_group_counts_homomorphisms(seed in any::<u64>()) {
        let mut r = gen::rng(seed);
        let g = gen::cyclic_sum(&mut r, 8);
        let h = gen::cyclic_sum(&mut r, 8);
        let homs = fgab::enumerate_homs(&g, &h).unwrap();
        prop_assert_eq!(fgab::hom_group(&g, &h).order(), Some(homs.len() as u64));
        prop_assert_eq!(homs.len() as u64, common::tensor_order(g.torsion(), h.torsion()));
    }

    // ------------------------------------------------------------ cpx

    #[test]
    fn reduction_preserves_the_character(seed in any::<u64>()) {
        let mut r = gen::rng(seed);
        let m = r.gen_range(1..=20i64);
        let t = TorusValue::from_ratio(r.gen_range(0..m), m);
        let md = t.rational_part().denom().clone();
        let f = gen::convergent_function(&mut r, 50, m);
        let x = SpaceModel::ConvergentSequence;
        if let Reduction::Reduced(g) = cpx::theorem_b_reduce(x, &f, &t).unwrap() {
            prop_assert_eq!(cpx::is_continuous(x, &g).unwrap(), Continuity::Continuous);
            for i in (0..200).map(Point::Index).chain([Point::Infinity]) {
                let (fv, gv) = (f.eval(i).unwrap(), g.eval(i).unwrap());
                prop_assert!(!gv.is_negative() && gv < md);
                prop_assert!(((fv - &gv) % &md).is_zero());
            }
            for _ in 0..100 {
                let phi = gen::free_point(&mut r, 200, 6, 20, true);
                prop_assert_eq!(cpx::theta_eval(&f, &t, &phi).unwrap(), cpx::theta_eval(&g, &t, &phi).unwrap());
            }
        }
    }

    #[test]
    fn real_lift_evaluates_like_the_character(seed in any::<u64>()) {
        let mut r = gen::rng(seed);
        let n = r.gen_range(1..=6u64);
        let chi: BTreeMap<Point, TorusValue> = (0..n)
            .map(|i| {
                let mut v = TorusValue::from_ratio(r.gen_range(-12..=12), r.gen_range(1..=12));
                if r.gen_bool(0.3) {
                    v = v + TorusValue::basis(Basis::tau(1), BigRational::new(r.gen_range(-5i64..=5).into(), 7.into()));
                }
                (Point::Index(i), v)
            })
            .collect();
        let lift = cpx::extend_character(&chi);
        for _ in 0..20 {
            let vals: Vec<i64> = (0..n).map(|_| r.gen_range(-40..=40)).collect();
            let f = IntFunction::finite(&vals);
            let direct: TorusValue = chi.iter().map(|(p, v)| v.scale(&f.eval(*p).unwrap())).sum();
            prop_assert_eq!(lift.eval(&f).unwrap(), direct);
        }
    }

    #[test]
    fn finite_characters_match_their_presentation(seed in any::<u64>()) {
        let mut r = gen::rng(seed);
        let n = r.gen_range(1..=4usize);
        let values: Vec<TorusValue> = (0..n).map(|_| TorusValue::from_ratio(r.gen_range(0..12), r.gen_range(1..=12))).collect();
        let chi = FiniteCharacter { values: values.clone() };
        prop_assert_eq!(chi.presentation(), values.clone());
        let other: Vec<TorusValue> = (0..n).map(|_| TorusValue::from_ratio(r.gen_range(0..12), r.gen_range(1..=12))).collect();
        if other != values {
            prop_assert_ne!(FiniteCharacter { values: other }.presentation(), chi.presentation());
        }
        let f: Vec<BigInt> = (0..n).map(|_| BigInt::from(r.gen_range(-20..=20))).collect();
        let direct: TorusValue = values.iter().zip(&f).map(|(v, c)| v.scale(c)).sum();
        prop_assert_eq!(chi.eval(&f), direct);
    }
}
