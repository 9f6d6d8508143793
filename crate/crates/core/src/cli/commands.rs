use std::collections::BTreeSet;

use num_integer::Integer as _;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use super::json::*;
use super::{Command, InputError, Options, Report, EXIT_AFFIRMATIVE, EXIT_NEGATIVE, EXIT_SELF_CHECK};
use crate::cpx::{self, Continuity, IntFunction, Point, Reduction, SpaceModel};
use crate::dualgrp::{self, CharEquality, ContinuityCheck, MembershipVerdict};
use crate::exact::{smith_normal_form, IntMatrix, Integer, Rational};
use crate::fgab::{self, FgAbelianGroup, FgError, GroupElement, Subset, Verification};
use crate::gen;
use crate::par;
use crate::seq::{char_eval, pair, CharacterPresentation, IntSeq};

/// Bound used when sampling an index past which a certificate's denominators grow.
const CERT_BOUND: i64 = 1_000_000;

pub(super) fn dispatch(command: Command, doc: &Value, opts: &Options) -> Res<Report> {
    let root = Field::root(doc);
    match command {
        Command::Snf => snf(root, opts),
        Command::Group => group(root, opts),
        Command::Tensor => tensor(root, opts),
        Command::DualCheck => dual_check(root, opts),
        Command::Decompose => decompose(root, opts),
        Command::Reduce => reduce(root, opts),
        Command::Polar => polar(root, opts),
        Command::Verify => verify(root, opts),
    }
}

fn fg_err(f: &Field<'_>, e: FgError) -> InputError {
    InputError::new(f.path(), e.to_string())
}

/// Attaches the outcome of `check` when `--check-witness` is on.
fn finish(body: Value, exit_code: i32, opts: &Options, check: impl FnOnce() -> Result<(), String>) -> Report {
    let mut body = body;
    let mut exit_code = exit_code;
    if opts.check_witness {
        let status = match check() {
            Ok(()) => json!("passed"),
            Err(msg) => {
                exit_code = EXIT_SELF_CHECK;
                json!({"failed": msg})
            }
        };
        body.as_object_mut().expect("reports are objects").insert("witness_check".into(), status);
    }
    Report { body, exit_code }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn finite_group(f: Field<'_>, opts: &Options) -> Res<FgAbelianGroup> {
    let g = parse_group(f.clone())?;
    match g.order() {
        None => Err(fg_err(&f, FgError::NotFinite)),
        Some(n) if n > opts.max_order => Err(fg_err(&f, FgError::TooLarge { size: n, guard: opts.max_order })),
        Some(_) => Ok(g),
    }
}

fn opt_str<'a>(f: &Field<'a>, key: &str, default: &'a str) -> Res<&'a str> {
    match f.opt(key)? {
        Some(v) => v.str(),
        None => Ok(default),
    }
}

fn opt_u64(f: &Field<'_>, key: &str, default: u64) -> Res<u64> {
    match f.opt(key)? {
        Some(v) => v.u64(),
        None => Ok(default),
    }
}

fn unknown_op(f: &Field<'_>, key: &str, op: &str, allowed: &[&str]) -> InputError {
    InputError::new(format!("{}.{key}", f.path()), format!("unknown value \"{op}\", expected one of {allowed:?}"))
}

// ---------------------------------------------------------------- snf

fn snf(root: Field<'_>, opts: &Options) -> Res<Report> {
    let a = parse_matrix(root.get("matrix")?)?;
    let r = smith_normal_form(&a);
    let body = json!({
        "anchor": "Smith normal form U·A·V = S with U, V unimodular",
        "invariant_factors": r.invariant_factors().iter().map(int_str).collect::<Vec<_>>(),
        "rank": r.rank(),
        "u": matrix_json(&r.u),
        "s": matrix_json(&r.s),
        "v": matrix_json(&r.v),
    });
    Ok(finish(body, EXIT_AFFIRMATIVE, opts, || check_snf(&a, &r.u, &r.s, &r.v)))
}

fn check_snf(a: &IntMatrix, u: &IntMatrix, s: &IntMatrix, v: &IntMatrix) -> Result<(), String> {
    let prod = u.mul(a).and_then(|x| x.mul(v)).map_err(|e| e.to_string())?;
    ensure(&prod == s, || "U·A·V differs from S".into())?;
    for m in [u, v] {
        let d = m.determinant().map_err(|e| e.to_string())?;
        ensure(d.abs().is_one(), || format!("transform has determinant {d}"))?;
    }
    for i in 0..s.rows() {
        for j in 0..s.cols() {
            ensure(i == j || s.get(i, j).is_zero(), || format!("S has an off-diagonal entry at ({i}, {j})"))?;
        }
    }
    let diag = s.diagonal();
    for k in 0..diag.len() {
        ensure(!diag[k].is_negative(), || format!("diagonal entry {k} is negative"))?;
        if k + 1 < diag.len() {
            let (a, b) = (&diag[k], &diag[k + 1]);
            let divides = if a.is_zero() { b.is_zero() } else { (b % a).is_zero() };
            ensure(divides, || format!("diagonal entry {k} does not divide entry {}", k + 1))?;
        }
    }
    Ok(())
}

// ---------------------------------------------------------------- group

fn group(root: Field<'_>, opts: &Options) -> Res<Report> {
    let op = opt_str(&root, "op", "relations")?;
    match op {
        "relations" => group_relations(root, opts),
        "dual" => group_dual(root, opts),
        "hom" => group_hom(root, opts),
        _ => Err(unknown_op(&root, "op", op, &["relations", "dual", "hom"])),
    }
}

fn group_relations(root: Field<'_>, opts: &Options) -> Res<Report> {
    let gens = root.get("generators")?.usize()?;
    let rf = root.get("relations")?;
    let mut rel = parse_matrix(rf.clone())?;
    if rel.rows() == 0 {
        rel = IntMatrix::zeros(0, gens);
    }
    let (g, proj) = fgab::group_from_relations(gens, &rel).map_err(|e| fg_err(&rf, e))?;
    let body = json!({
        "anchor": "quotient of a free abelian group by a relation lattice",
        "group": group_json(&g),
        "invariant_factors": g.torsion(),
        "free_rank": g.free_rank(),
        "order": g.order(),
        "projection": matrix_json(proj.matrix()),
    });
    Ok(finish(body, EXIT_AFFIRMATIVE, opts, || {
        for r in 0..rel.rows() {
            let coords: Option<Vec<i64>> = rel.row(r).iter().map(|x| x.to_i64()).collect();
            if let Some(c) = coords {
                let img = proj.apply(&GroupElement::new(c));
                ensure(img == g.zero(), || format!("relation {r} maps to {img}"))?;
            }
        }
        let snf = smith_normal_form(&rel);
        let factors: Vec<u64> =
            snf.invariant_factors().iter().filter(|d| !d.is_one()).map(|d| d.to_u64().unwrap_or(0)).collect();
        ensure(factors == g.torsion(), || format!("invariant factors {factors:?} differ from the group"))?;
        ensure(gens - snf.rank() == g.free_rank(), || "free rank differs from the relation rank".into())
    }))
}

fn group_dual(root: Field<'_>, opts: &Options) -> Res<Report> {
    let gf = root.get("group")?;
    let g = parse_group(gf.clone())?;
    let dual = match fgab::dual_group(&g) {
        Ok(d) => d,
        Err(FgError::NotFinite) => {
            let body = json!({
                "anchor": "dual of a finite abelian group",
                "verdict": "not_finite",
                "group": group_json(&g),
                "free_rank": g.free_rank(),
                "reason": "a free factor Z has the circle as dual, which is not finitely enumerable",
            });
            return Ok(finish(body, EXIT_NEGATIVE, opts, || ensure(g.free_rank() > 0, || "group is finite".into())));
        }
        Err(e) => return Err(fg_err(&gf, e)),
    };
    let g = finite_group(gf, opts)?;
    let els = dual.elements().expect("finite");
    let gens: Vec<GroupElement> = (0..g.ngens()).map(|k| g.generator(k)).collect();
    let characters: Vec<Value> = els
        .iter()
        .map(|a| {
            let chi = fgab::character_of(&g, a);
            json!({"character": element_json(a), "on_generators": gens.iter().map(|b| torus_json(&chi(b))).collect::<Vec<_>>()})
        })
        .collect();
    let body = json!({
        "anchor": "characters of a finite abelian group, chi_a(b) = sum a_k b_k / d_k",
        "verdict": "finite",
        "group": group_json(&g),
        "dual": group_json(&dual),
        "characters": characters,
    });
    Ok(finish(body, EXIT_AFFIRMATIVE, opts, || {
        for a in &els {
            for (k, b) in gens.iter().enumerate() {
                let want = crate::exact::TorusValue::from_ratio(a.coords[k], g.torsion()[k] as i64);
                ensure(g.pairing(a, b) == want, || format!("character {a} is wrong on generator {k}"))?;
            }
        }
        ensure(els.len() as u64 == g.order().unwrap(), || "dual has the wrong order".into())
    }))
}

fn group_hom(root: Field<'_>, opts: &Options) -> Res<Report> {
    let g = parse_group(root.get("left")?)?;
    let h = parse_group(root.get("right")?)?;
    let hom = fgab::hom_group(&g, &h);
    let body = json!({
        "anchor": "Hom of finitely generated abelian groups",
        "left": group_json(&g),
        "right": group_json(&h),
        "hom": group_json(&hom),
        "order": hom.order(),
    });
    Ok(finish(body, EXIT_AFFIRMATIVE, opts, || match (g.order(), h.order()) {
        (Some(a), Some(b)) if a.saturating_mul(b) <= opts.max_order.max(crate::fgab::DEFAULT_GUARD) * 64 => {
            let n = fgab::enumerate_homs(&g, &h).map_err(|e| e.to_string())?.len() as u64;
            ensure(hom.order() == Some(n), || format!("{n} homomorphisms enumerated"))
        }
        _ => Ok(()),
    }))
}

// ---------------------------------------------------------------- tensor

fn tensor(root: Field<'_>, opts: &Options) -> Res<Report> {
    let (gf, hf) = (root.get("left")?, root.get("right")?);
    let g = parse_group(gf.clone())?;
    let h = parse_group(hf.clone())?;
    for (f, x) in [(&gf, &g), (&hf, &h)] {
        if !x.is_finite() {
            return Err(fg_err(f, FgError::NotFinite));
        }
    }
    let t = fgab::tensor_construct(&g, &h, opts.max_order).map_err(|e| fg_err(&root, e))?;
    let mut bimap = Vec::new();
    for i in 0..g.ngens() {
        for j in 0..h.ngens() {
            let img = t.bimap(&g.generator(i), &h.generator(j));
            bimap.push(json!({"left": i, "right": j, "image": element_json(img)}));
        }
    }
    let body = json!({
        "anchor": "tensor product as the free abelian group on G × H modulo bilinearity",
        "left": group_json(&g),
        "right": group_json(&h),
        "tensor": group_json(&t.group),
        "invariant_factors": t.group.torsion(),
        "order": t.group.order(),
        "bimap": bimap,
    });
    Ok(finish(body, EXIT_AFFIRMATIVE, opts, || check_tensor(&t)))
}

fn check_tensor(t: &fgab::TensorProduct) -> Result<(), String> {
    let (g, h, tg) = (&t.left, &t.right, &t.group);
    let g_els = g.elements().map_err(|e| e.to_string())?;
    let h_els = h.elements().map_err(|e| e.to_string())?;
    for a in &g_els {
        for b in &g_els {
            for c in &h_els {
                let lhs = t.bimap(&g.add(a, b), c);
                ensure(*lhs == tg.add(t.bimap(a, c), t.bimap(b, c)), || format!("not additive on the left at ({a}, {b}, {c})"))?;
            }
        }
    }
    for a in &g_els {
        for c in &h_els {
            for d in &h_els {
                let lhs = t.bimap(a, &h.add(c, d));
                ensure(*lhs == tg.add(t.bimap(a, c), t.bimap(a, d)), || format!("not additive on the right at ({a}, {c}, {d})"))?;
            }
        }
    }
    // the images generate: close them under addition
    let mut span: BTreeSet<GroupElement> = BTreeSet::from([tg.zero()]);
    loop {
        let next: BTreeSet<GroupElement> =
            span.iter().flat_map(|x| t.images.iter().map(move |y| tg.add(x, y))).chain(span.iter().cloned()).collect();
        if next.len() == span.len() {
            break;
        }
        span = next;
    }
    let order = tg.order().unwrap_or(0) as usize;
    ensure(span.len() == order, || format!("pure tensors span {} of {order} elements", span.len()))
}

// ---------------------------------------------------------------- dual-check / decompose

fn character_field<'a>(root: &Field<'a>) -> Res<Field<'a>> {
    Ok(root.opt("character")?.unwrap_or_else(|| root.clone()))
}

fn negative_membership(t: &CharacterPresentation, cert: &dualgrp::NonMembershipCertificate, opts: &Options) -> Report {
    let bound = Integer::from(CERT_BOUND);
    let body = json!({
        "anchor": "a continuous character has bounded denominators on every cell",
        "verdict": "not_in_dual",
        "certificate": certificate_json(cert, &bound),
    });
    finish(body, EXIT_NEGATIVE, opts, || {
        ensure(cert.check(t), || "certificate does not match the character".into())?;
        ensure(cert.den.degree().unwrap_or(0) >= 1, || "certified denominator is constant".into())?;
        let (i, q) = cert.index_exceeding(&bound).ok_or_else(|| "no index exceeds the bound".to_string())?;
        ensure(cert.support.contains(i) && q > bound, || format!("index {i} does not certify the bound"))
    })
}

fn dual_check(root: Field<'_>, opts: &Options) -> Res<Report> {
    let t = parse_character(character_field(&root)?)?;
    Ok(match dualgrp::decide_membership(&t) {
        MembershipVerdict::InDual { decomposition, witness } => {
            let body = json!({
                "anchor": "continuous characters of Z^(N) are finite sums of elementary tensors",
                "verdict": "in_dual",
                "terms": tensor_sum_json(&decomposition),
                "witness": continuity_subset_json(&witness),
            });
            finish(body, EXIT_AFFIRMATIVE, opts, || {
                if let ContinuityCheck::Counterexample(g) = dualgrp::verify_continuity_subset(&t, &witness) {
                    return Err(format!("continuity subset fails at {:?}", g.support()));
                }
                match dualgrp::char_equal(&dualgrp::tensor_to_pointwise(&decomposition), &t) {
                    CharEquality::Equal => Ok(()),
                    CharEquality::Witness(i) => Err(format!("decomposition differs at index {i}")),
                }
            })
        }
        MembershipVerdict::NotInDual(cert) => negative_membership(&t, &cert, opts),
    })
}

fn decompose(root: Field<'_>, opts: &Options) -> Res<Report> {
    let t = parse_character(character_field(&root)?)?;
    Ok(match dualgrp::decompose(&t) {
        Ok(sum) => {
            let back = dualgrp::tensor_to_pointwise(&sum);
            let body = json!({
                "anchor": "continuous characters of Z^(N) are finite sums of elementary tensors",
                "verdict": "in_dual",
                "terms": tensor_sum_json(&sum),
                "pointwise": character_json(&back),
            });
            finish(body, EXIT_AFFIRMATIVE, opts, || match dualgrp::char_equal(&back, &t) {
                CharEquality::Equal => Ok(()),
                CharEquality::Witness(i) => Err(format!("decomposition differs at index {i}")),
            })
        }
        Err(dualgrp::DualError::NotInDual(cert)) => negative_membership(&t, &cert, opts),
        Err(e) => return Err(InputError::new(root.path(), e.to_string())),
    })
}

// ---------------------------------------------------------------- reduce

fn reduce(root: Field<'_>, opts: &Options) -> Res<Report> {
    let sf = root.get("space")?;
    let convergent = match sf.str()? {
        "convergent" => true,
        "finite" => false,
        other => return Err(unknown_op(&root, "space", other, &["convergent", "finite"])),
    };
    let ff = root.get("f")?;
    let f = parse_int_function(ff.clone(), convergent)?;
    let x = match &f {
        IntFunction::Finite(v) => SpaceModel::FiniteDiscrete(v.len()),
        IntFunction::Convergent { .. } => SpaceModel::ConvergentSequence,
    };
    let tf = root.get("t")?;
    let t = parse_torus(tf.clone())?;
    let red = cpx::theorem_b_reduce(x, &f, &t).map_err(|e| InputError::new(tf.path(), e.to_string()))?;
    let modulus = (t.is_rational()).then(|| t.rational_part().denom().clone());
    Ok(match red {
        Reduction::Reduced(g) => {
            let body = json!({
                "anchor": "f ⊗ t = g ⊗ t with g continuous",
                "verdict": "reduced",
                "seed": opts.seed,
                "modulus": modulus.as_ref().map(int_str),
                "g": int_function_json(&g),
            });
            finish(body, EXIT_AFFIRMATIVE, opts, || check_reduction(x, &f, &g, &t, modulus.as_ref(), opts.seed))
        }
        Reduction::NotAContinuousCharacter { modulus, indices } => {
            let sample: Vec<u64> = indices.take(5);
            let body = json!({
                "anchor": "f ⊗ t is continuous only if f mod m is eventually constant",
                "verdict": "not_a_continuous_character",
                "modulus": modulus.as_ref().map(int_str),
                "indices": index_set_json(&indices),
                "sample": sample,
            });
            finish(body, EXIT_NEGATIVE, opts, || {
                ensure(indices.is_infinite(), || "deviation set is finite".into())?;
                let res = |v: Integer| match &modulus {
                    Some(m) => v.mod_floor(m),
                    None => v,
                };
                let at_inf = res(f.eval(Point::Infinity).map_err(|e| e.to_string())?);
                for &i in &sample {
                    let v = res(f.eval(Point::Index(i)).map_err(|e| e.to_string())?);
                    ensure(v != at_inf, || format!("index {i} agrees with the value at infinity"))?;
                }
                Ok(())
            })
        }
    })
}

pub(crate) fn check_reduction(
    x: SpaceModel,
    f: &IntFunction,
    g: &IntFunction,
    t: &crate::exact::TorusValue,
    modulus: Option<&Integer>,
    seed: u64,
) -> Result<(), String> {
    ensure(cpx::is_continuous(x, g).map_err(|e| e.to_string())? == Continuity::Continuous, || "g is not continuous".into())?;
    match (modulus, f, g) {
        (None, _, _) => ensure(f == g, || "irrational t must keep f".into())?,
        (Some(m), IntFunction::Finite(a), IntFunction::Finite(b)) => {
            ensure(a.len() == b.len(), || "length changed".into())?;
            for (k, (u, v)) in a.iter().zip(b).enumerate() {
                ensure(((u - v) % m).is_zero(), || format!("g differs from f mod m at {k}"))?;
            }
        }
        (Some(m), IntFunction::Convergent { seq: a, limit: la }, IntFunction::Convergent { seq: b, limit: lb }) => {
            let inv = Rational::new(Integer::one(), m.clone());
            let diff = a.combine(b, |p, q| p.sub(q).scale(&inv));
            ensure(IntSeq::from_piecewise(diff).is_ok(), || "(f - g)/m is not integer valued".into())?;
            ensure(((la - lb) % m).is_zero(), || "limits differ mod m".into())?;
        }
        _ => return Err("g lives on a different space".into()),
    }
    let mut r = gen::rng(seed);
    let (max_index, with_inf) = match x {
        SpaceModel::FiniteDiscrete(n) => (n as u64, false),
        SpaceModel::ConvergentSequence => (200, true),
    };
    if max_index == 0 {
        return Ok(());
    }
    for _ in 0..100 {
        let phi = gen::free_point(&mut r, max_index, 6, 20, with_inf);
        let lhs = cpx::theta_eval(f, t, &phi).map_err(|e| e.to_string())?;
        let rhs = cpx::theta_eval(g, t, &phi).map_err(|e| e.to_string())?;
        ensure(lhs == rhs, || "theta evaluations differ".into())?;
    }
    Ok(())
}

// ---------------------------------------------------------------- polar

fn polar(root: Field<'_>, opts: &Options) -> Res<Report> {
    let g = finite_group(root.get("group")?, opts)?;
    let a = parse_subset(&g, root.get("subset")?)?;
    let op = opt_str(&root, "op", "polar")?;
    let anchor = "polar A^▷ = {χ : |χ(a)| ≤ 1/4 on A}, prepolar X^◁ = {g : |χ(g)| ≤ 1/4 on X}";
    let brute_polar = |s: &Subset| -> BTreeSet<GroupElement> {
        let quarter = Rational::new(1.into(), 4.into());
        g.elements()
            .unwrap()
            .into_iter()
            .filter(|c| s.elements.iter().all(|x| g.pairing(c, x).rational_abs().unwrap() <= quarter))
            .collect()
    };
    Ok(match op {
        "polar" | "prepolar" => {
            let out = if op == "polar" { fgab::polar(&a) } else { fgab::prepolar(&a) };
            let body = json!({"anchor": anchor, "op": op, "group": group_json(&g), "result": subset_json(&out)});
            finish(body, EXIT_AFFIRMATIVE, opts, || ensure(brute_polar(&a) == out.elements, || "result disagrees with brute force".into()))
        }
        "hull" => {
            let hull = fgab::quasiconvex_hull(&a);
            let body = json!({"anchor": anchor, "op": op, "group": group_json(&g), "result": subset_json(&hull)});
            finish(body, EXIT_AFFIRMATIVE, opts, || {
                ensure(a.is_subset(&hull), || "hull misses an element of A".into())?;
                let pp = brute_polar(&Subset::new(g.clone(), brute_polar(&a)).unwrap());
                ensure(pp == hull.elements, || "hull is not A^▷◁".into())
            })
        }
        "quasiconvex" => {
            let hull = fgab::quasiconvex_hull(&a);
            let extra: Vec<&GroupElement> = hull.elements.difference(&a.elements).collect();
            match extra.first() {
                None => {
                    let body = json!({"anchor": anchor, "op": op, "group": group_json(&g), "quasi_convex": true, "polar": subset_json(&fgab::polar(&a))});
                    finish(body, EXIT_AFFIRMATIVE, opts, || {
                        let pp = brute_polar(&Subset::new(g.clone(), brute_polar(&a)).unwrap());
                        ensure(pp == a.elements, || "A differs from A^▷◁".into())
                    })
                }
                Some(&w) => {
                    let pol = fgab::polar(&a);
                    let body = json!({
                        "anchor": anchor,
                        "op": op,
                        "group": group_json(&g),
                        "quasi_convex": false,
                        "witness": element_json(w),
                        "polar": subset_json(&pol),
                    });
                    let w = w.clone();
                    finish(body, EXIT_NEGATIVE, opts, || {
                        ensure(!a.contains(&w), || "witness lies in A".into())?;
                        ensure(brute_polar(&a) == pol.elements, || "polar disagrees with brute force".into())?;
                        let quarter = Rational::new(1.into(), 4.into());
                        ensure(pol.elements.iter().all(|c| g.pairing(c, &w).rational_abs().unwrap() <= quarter), || {
                            "witness is not in the bipolar".into()
                        })
                    })
                }
            }
        }
        _ => return Err(unknown_op(&root, "op", op, &["polar", "prepolar", "hull", "quasiconvex"])),
    })
}

// ---------------------------------------------------------------- verify

fn verify(root: Field<'_>, opts: &Options) -> Res<Report> {
    let check = root.get("check")?.str()?;
    match check {
        "universal_property" => verify_universal(root, opts),
        "dual_of_tensor" => verify_dual_tensor(root, opts),
        "garling" => verify_garling(root, opts),
        "continuity_subset" => verify_continuity(root, opts),
        "roundtrip" => verify_roundtrip(root, opts),
        _ => Err(unknown_op(
            &root,
            "check",
            check,
            &["universal_property", "dual_of_tensor", "garling", "continuity_subset", "roundtrip"],
        )),
    }
}

fn group_list(root: &Field<'_>, key: &str, opts: &Options) -> Res<Vec<FgAbelianGroup>> {
    root.get(key)?.items()?.into_iter().map(|f| finite_group(f, opts)).collect()
}

/// `(left, right)` pairs from `left`/`right` or from every ordered pair of `roster`.
fn group_pairs(root: &Field<'_>, opts: &Options) -> Res<Vec<(FgAbelianGroup, FgAbelianGroup)>> {
    if root.opt("roster")?.is_some() {
        let roster = group_list(root, "roster", opts)?;
        return Ok(roster.iter().flat_map(|g| roster.iter().map(move |h| (g.clone(), h.clone()))).collect());
    }
    Ok(vec![(finite_group(root.get("left")?, opts)?, finite_group(root.get("right")?, opts)?)])
}

fn summary(anchor: &str, check: &str, cases: Vec<Value>, holds: &[bool], opts: &Options) -> Report {
    let all = holds.iter().all(|&h| h);
    let body = json!({
        "anchor": anchor,
        "check": check,
        "cases": cases,
        "all_hold": all,
        "verdict": if all { "holds" } else { "fails" },
    });
    // brute-force suites are their own witnesses
    finish(body, if all { EXIT_AFFIRMATIVE } else { EXIT_NEGATIVE }, opts, || Ok(()))
}

fn verify_universal(root: Field<'_>, opts: &Options) -> Res<Report> {
    let triples: Vec<(FgAbelianGroup, FgAbelianGroup, FgAbelianGroup)> = if root.opt("targets")?.is_some() {
        let targets = group_list(&root, "targets", opts)?;
        group_pairs(&root, opts)?
            .into_iter()
            .flat_map(|(g, h)| targets.iter().map(move |b| (g.clone(), h.clone(), b.clone())))
            .collect()
    } else {
        let (g, h) = group_pairs(&root, opts)?.remove(0);
        vec![(g, h, finite_group(root.get("target")?, opts)?)]
    };
    let mut cases = Vec::new();
    let mut holds = Vec::new();
    for (g, h, b) in &triples {
        let v = fgab::verify_universal_property(g, h, b, opts.max_order, opts.exec).map_err(|e| fg_err(&root, e))?;
        let mut case = json!({"left": group_json(g), "right": group_json(h), "target": group_json(b), "holds": v.holds()});
        match v {
            Verification::Holds(r) => {
                case["tensor"] = group_json(&r.tensor);
                case["bihomomorphisms"] = json!(r.bihomomorphisms);
                case["homomorphisms"] = json!(r.homomorphisms);
            }
            Verification::Fails(msg) => case["reason"] = json!(msg),
        }
        holds.push(case["holds"] == json!(true));
        cases.push(case);
    }
    Ok(summary("every bihomomorphism factors uniquely through the tensor product", "universal_property", cases, &holds, opts))
}

fn verify_dual_tensor(root: Field<'_>, opts: &Options) -> Res<Report> {
    let mut cases = Vec::new();
    let mut holds = Vec::new();
    for (g, h) in group_pairs(&root, opts)? {
        let v = fgab::verify_dual_of_tensor(&g, &h, opts.max_order, opts.exec).map_err(|e| fg_err(&root, e))?;
        let mut case = json!({"left": group_json(&g), "right": group_json(&h), "holds": v.holds()});
        match v {
            Verification::Holds(r) => {
                case["tensor"] = group_json(&r.tensor);
                case["order"] = json!(r.order);
                case["iso_witness"] = Value::Array(
                    r.iso_witness
                        .iter()
                        .map(|((i, j), chi)| json!({"generator": [i, j], "character": element_json(chi)}))
                        .collect(),
                );
            }
            Verification::Fails(msg) => case["reason"] = json!(msg),
        }
        holds.push(case["holds"] == json!(true));
        cases.push(case);
    }
    Ok(summary("bicharacters of G × H are the characters of G ⊗ H", "dual_of_tensor", cases, &holds, opts))
}

fn verify_garling(root: Field<'_>, opts: &Options) -> Res<Report> {
    let pairs = group_pairs(&root, opts)?;
    let results = par::map(opts.exec, &pairs, |(g, h)| fgab::verify_garling(g, h));
    let mut cases = Vec::new();
    let mut holds = Vec::new();
    for ((g, h), res) in pairs.iter().zip(results) {
        let res = res.map_err(|e| fg_err(&root, e))?;
        let mut case = json!({"left": group_json(g), "right": group_json(h), "holds": res.is_ok()});
        match res {
            Ok(r) => {
                case["bicharacters"] = json!(r.bicharacters);
                case["homomorphisms"] = json!(r.homs);
                case["hom_group"] = group_json(&r.hom_group);
            }
            Err(msg) => case["reason"] = json!(msg),
        }
        holds.push(case["holds"] == json!(true));
        cases.push(case);
    }
    Ok(summary("bicharacters correspond to homomorphisms into the dual", "garling", cases, &holds, opts))
}

fn verify_continuity(root: Field<'_>, opts: &Options) -> Res<Report> {
    let t = parse_character(root.get("character")?)?;
    let subset = parse_continuity_subset(root.get("subset")?)?;
    let anchor = "vanishing on the annihilator of a finite F ⊂ Z^N";
    Ok(match dualgrp::verify_continuity_subset(&t, &subset) {
        ContinuityCheck::Holds => {
            let body = json!({"anchor": anchor, "check": "continuity_subset", "verdict": "holds"});
            finish(body, EXIT_AFFIRMATIVE, opts, || Ok(()))
        }
        ContinuityCheck::Counterexample(g) => {
            let value = char_eval(&t, &g);
            let body = json!({
                "anchor": anchor,
                "check": "continuity_subset",
                "verdict": "fails",
                "counterexample": fin_support_json(&g),
                "character_value": torus_json(&value),
            });
            finish(body, EXIT_NEGATIVE, opts, || {
                for (k, x) in subset.vectors.iter().enumerate() {
                    ensure(pair(&g, x).is_zero(), || format!("counterexample pairs nonzero with vector {k}"))?;
                }
                ensure(!value.is_zero(), || "character vanishes on the counterexample".into())
            })
        }
    })
}

fn verify_roundtrip(root: Field<'_>, opts: &Options) -> Res<Report> {
    let count = opt_u64(&root, "count", 50)? as usize;
    let symbols = opt_u64(&root, "symbols", 2)?.min(8) as u32;
    let max_den = opt_u64(&root, "max_den", 50)?.clamp(2, 10_000) as i64;
    let samples = opt_u64(&root, "samples", 100)? as usize;
    let seed = opts.seed;
    let outcomes = par::map_range(opts.exec, count, |k| {
        let mut r = gen::rng(seed.wrapping_add(k as u64));
        let t = gen::character_in_dual(&mut r, symbols, max_den);
        let sum = match dualgrp::decompose(&t) {
            Ok(s) => s,
            Err(e) => return Err(format!("case {k}: {e}")),
        };
        if let CharEquality::Witness(i) = dualgrp::char_equal(&dualgrp::tensor_to_pointwise(&sum), &t) {
            return Err(format!("case {k}: pointwise form differs at index {i}"));
        }
        for _ in 0..samples {
            let g = gen::fin_support(&mut r, 10, 200, 100);
            if dualgrp::tensor_eval(&sum, &g) != char_eval(&t, &g) {
                return Err(format!("case {k}: evaluations differ on {:?}", g.support()));
            }
        }
        Ok(sum.terms.len())
    });
    let holds: Vec<bool> = outcomes.iter().map(|o| o.is_ok()).collect();
    let cases = outcomes
        .into_iter()
        .enumerate()
        .map(|(k, o)| match o {
            Ok(n) => json!({"case": k, "holds": true, "terms": n}),
            Err(msg) => json!({"case": k, "holds": false, "reason": msg}),
        })
        .collect();
    let mut report = summary("decompose then evaluate pointwise recovers the character", "roundtrip", cases, &holds, opts);
    report.body["seed"] = json!(seed);
    Ok(report)
}
