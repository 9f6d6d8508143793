//! JSON reading with field-path diagnostics, and the output encodings.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use crate::cpx::{FreePoint, IntFunction, Point};
use crate::dualgrp::{ContinuitySubset, ElementaryTensor, NonMembershipCertificate, TensorSum};
use crate::exact::{
    format_integer, format_rational, parse_integer, parse_rational, Basis, IntMatrix, Integer, IrrationalSymbol,
    Rational, TorusValue,
};
use crate::fgab::{FgAbelianGroup, GroupElement, Subset};
use crate::seq::{CharacterPresentation, FinSupportVector, IndexSet, IntSeq, Poly, RatFunc, TorusFn};

use super::InputError;

/// A JSON value together with its path from the document root.
#[derive(Clone)]
pub struct Field<'a> {
    pub value: &'a Value,
    path: String,
}

pub type Res<T> = Result<T, InputError>;

impl<'a> Field<'a> {
    pub fn root(value: &'a Value) -> Self {
        Self { value, path: String::new() }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Res<T> {
        Err(InputError::new(self.path(), msg))
    }

    pub fn path(&self) -> String {
        if self.path.is_empty() {
            "$".into()
        } else {
            self.path.clone()
        }
    }

    pub fn get(&self, key: &str) -> Res<Field<'a>> {
        match self.opt(key)? {
            Some(f) => Ok(f),
            None => self.err(format!("missing field \"{key}\"")),
        }
    }

    pub fn opt(&self, key: &str) -> Res<Option<Field<'a>>> {
        let Value::Object(map) = self.value else {
            return self.err("expected an object");
        };
        Ok(map.get(key).map(|v| Field { value: v, path: format!("{}.{key}", self.path()) }))
    }

    pub fn items(&self) -> Res<Vec<Field<'a>>> {
        let Value::Array(xs) = self.value else {
            return self.err("expected an array");
        };
        Ok(xs
            .iter()
            .enumerate()
            .map(|(i, v)| Field { value: v, path: format!("{}[{i}]", self.path()) })
            .collect())
    }

    pub fn str(&self) -> Res<&'a str> {
        match self.value {
            Value::String(s) => Ok(s),
            _ => self.err("expected a string"),
        }
    }

    pub fn u64(&self) -> Res<u64> {
        match self.value.as_u64() {
            Some(n) => Ok(n),
            None => self.err("expected a nonnegative integer"),
        }
    }

    pub fn usize(&self) -> Res<usize> {
        self.u64().map(|n| n as usize)
    }

    pub fn i64(&self) -> Res<i64> {
        match self.value.as_i64() {
            Some(n) => Ok(n),
            None => self.err("expected an integer"),
        }
    }

    pub fn bool(&self) -> Res<bool> {
        match self.value {
            Value::Bool(b) => Ok(*b),
            _ => self.err("expected true or false"),
        }
    }

    /// An integer given as a JSON number or a decimal string.
    pub fn integer(&self) -> Res<Integer> {
        match self.value {
            Value::Number(n) if n.is_i64() || n.is_u64() => Ok(parse_integer(&n.to_string()).unwrap()),
            Value::String(s) => parse_integer(s).or_else(|e| self.err(e.to_string())),
            _ => self.err("expected an integer (number or decimal string)"),
        }
    }

    /// A rational given as an integer or a `"p/q"` string.
    pub fn rational(&self) -> Res<Rational> {
        match self.value {
            Value::String(s) => parse_rational(s).or_else(|e| self.err(e.to_string())),
            _ => self.integer().map(Rational::from_integer),
        }
    }

    pub fn bit(&self) -> Res<bool> {
        match self.value {
            Value::Bool(b) => Ok(*b),
            Value::Number(n) if n.as_u64() == Some(0) => Ok(false),
            Value::Number(n) if n.as_u64() == Some(1) => Ok(true),
            _ => self.err("expected a bit (0, 1, true or false)"),
        }
    }
}


pub fn int_str(n: &Integer) -> Value {
    Value::String(format_integer(n))
}

pub fn rat_str(q: &Rational) -> Value {
    Value::String(format_rational(q))
}

pub fn parse_matrix(f: Field<'_>) -> Res<IntMatrix> {
    let rows = f.items()?;
    let mut out = Vec::with_capacity(rows.len());
    let mut width = None;
    for r in &rows {
        let entries: Vec<Integer> = r.items()?.iter().map(|e| e.integer()).collect::<Res<_>>()?;
        match width {
            None => width = Some(entries.len()),
            Some(w) if w != entries.len() => return r.err(format!("row has {} entries, expected {w}", entries.len())),
            _ => {}
        }
        out.push(entries);
    }
    Ok(IntMatrix::from_rows(out, width.unwrap_or(0)).expect("rows checked"))
}

pub fn matrix_json(m: &IntMatrix) -> Value {
    Value::Array(m.to_rows().iter().map(|r| Value::Array(r.iter().map(int_str).collect())).collect())
}

pub fn parse_index_set(f: Field<'_>) -> Res<IndexSet> {
    let prefix = f.get("prefix")?.items()?.iter().map(|b| b.bit()).collect::<Res<Vec<_>>>()?;
    let pf = f.get("period")?;
    let period = pf.items()?.iter().map(|b| b.bit()).collect::<Res<Vec<_>>>()?;
    IndexSet::new(prefix, period).map_or_else(|| pf.err("period must be nonempty"), Ok)
}

pub fn index_set_json(s: &IndexSet) -> Value {
    let bits = |xs: &[bool]| Value::Array(xs.iter().map(|&b| json!(b as u8)).collect());
    json!({"prefix": bits(s.prefix()), "period": bits(s.period())})
}

fn parse_poly(f: Field<'_>) -> Res<Poly> {
    Ok(Poly::new(f.items()?.iter().map(|c| c.integer()).collect::<Res<_>>()?))
}

fn poly_json(p: &Poly) -> Value {
    if p.coeffs().is_empty() {
        return json!(["0"]);
    }
    Value::Array(p.coeffs().iter().map(int_str).collect())
}

fn parse_ratfunc(cell: Field<'_>) -> Res<RatFunc> {
    let num = parse_poly(cell.get("num")?)?;
    let den = match cell.opt("den")? {
        Some(d) => parse_poly(d)?,
        None => Poly::from_i64(&[1]),
    };
    match RatFunc::new(num, den) {
        Some(r) => Ok(r),
        None => cell.err("denominator is the zero polynomial"),
    }
}

fn ratfunc_fields(r: &RatFunc, map: &mut Map<String, Value>) {
    map.insert("num".into(), poly_json(r.num()));
    if r.den() != &Poly::from_i64(&[1]) {
        map.insert("den".into(), poly_json(r.den()));
    }
}

pub fn parse_int_seq(f: Field<'_>) -> Res<IntSeq> {
    let mut cells = Vec::new();
    for c in f.get("cells")?.items()? {
        cells.push((parse_index_set(c.get("indices")?)?, parse_ratfunc(c)?));
    }
    IntSeq::new(cells).or_else(|e| f.err(e.to_string()))
}

pub fn int_seq_json(x: &IntSeq) -> Value {
    let cells = x
        .cells()
        .iter()
        .map(|c| {
            let mut m = Map::new();
            m.insert("indices".into(), index_set_json(&c.support));
            ratfunc_fields(&c.value, &mut m);
            Value::Object(m)
        })
        .collect();
    json!({ "cells": Value::Array(cells) })
}

fn parse_basis(f: Field<'_>) -> Res<Basis> {
    Basis::parse(f.str()?).or_else(|e| f.err(e.to_string()))
}

pub fn parse_character(f: Field<'_>) -> Res<CharacterPresentation> {
    let mut cells = Vec::new();
    for c in f.get("cells")?.items()? {
        let support = parse_index_set(c.get("indices")?)?;
        let value = match c.opt("terms")? {
            Some(ts) => {
                let mut map: BTreeMap<Basis, RatFunc> = BTreeMap::new();
                for t in ts.items()? {
                    let b = parse_basis(t.get("symbol")?)?;
                    let r = parse_ratfunc(t)?;
                    let sum = map.get(&b).map_or_else(|| r.clone(), |x| x.add(&r));
                    map.insert(b, sum);
                }
                TorusFn::new(map)
            }
            None => {
                let b = match c.opt("symbol")? {
                    Some(s) => parse_basis(s)?,
                    None => Basis::One,
                };
                TorusFn::single(b, parse_ratfunc(c)?)
            }
        };
        cells.push((support, value));
    }
    CharacterPresentation::new(cells).or_else(|e| f.err(e.to_string()))
}

pub fn character_json(t: &CharacterPresentation) -> Value {
    let cells = t
        .cells()
        .iter()
        .map(|c| {
            let mut m = Map::new();
            m.insert("indices".into(), index_set_json(&c.support));
            let terms = c.value.terms();
            if terms.len() <= 1 {
                let (b, r) = terms.iter().next().map_or((Basis::One, RatFunc::zero()), |(b, r)| (*b, r.clone()));
                m.insert("symbol".into(), json!(b.label()));
                ratfunc_fields(&r, &mut m);
            } else {
                let ts = terms
                    .iter()
                    .map(|(b, r)| {
                        let mut tm = Map::new();
                        tm.insert("symbol".into(), json!(b.label()));
                        ratfunc_fields(r, &mut tm);
                        Value::Object(tm)
                    })
                    .collect();
                m.insert("terms".into(), Value::Array(ts));
            }
            Value::Object(m)
        })
        .collect();
    json!({ "cells": Value::Array(cells) })
}

/// `{"rat": "p/q", "irr": {"tau1": "p/q"}}`, or a bare rational.
pub fn parse_torus(f: Field<'_>) -> Res<TorusValue> {
    if !f.value.is_object() {
        return Ok(TorusValue::from_rational(f.rational()?));
    }
    let rat = match f.opt("rat")? {
        Some(r) => r.rational()?,
        None => Rational::from_integer(0.into()),
    };
    let mut irr = BTreeMap::new();
    if let Some(i) = f.opt("irr")? {
        let Value::Object(map) = i.value else {
            return i.err("expected an object of symbol coefficients");
        };
        for key in map.keys() {
            let s = IrrationalSymbol::parse(key).or_else(|e| i.err(e.to_string()))?;
            irr.insert(s, i.get(key)?.rational()?);
        }
    }
    Ok(TorusValue::new(rat, irr))
}

pub fn torus_json(t: &TorusValue) -> Value {
    let irr: Map<String, Value> = t.irrational_coeffs().iter().map(|(s, c)| (s.label(), rat_str(c))).collect();
    json!({"rat": rat_str(t.rational_part()), "irr": Value::Object(irr)})
}

pub fn fin_support_json(g: &FinSupportVector) -> Value {
    Value::Array(g.entries().iter().map(|(i, c)| json!({"index": i, "coeff": int_str(c)})).collect())
}

pub fn tensor_sum_json(s: &TensorSum) -> Value {
    Value::Array(
        s.terms
            .iter()
            .map(|ElementaryTensor { vector, value }| json!({"vector": int_seq_json(vector), "value": torus_json(value)}))
            .collect(),
    )
}

pub fn continuity_subset_json(f: &ContinuitySubset) -> Value {
    Value::Array(f.vectors.iter().map(int_seq_json).collect())
}

pub fn parse_tensor_sum(f: Field<'_>) -> Res<TensorSum> {
    let mut terms = Vec::new();
    for t in f.items()? {
        terms.push(ElementaryTensor {
            vector: parse_int_seq(t.get("vector")?)?,
            value: parse_torus(t.get("value")?)?,
        });
    }
    Ok(TensorSum { terms })
}

pub fn parse_continuity_subset(f: Field<'_>) -> Res<ContinuitySubset> {
    Ok(ContinuitySubset { vectors: f.items()?.into_iter().map(parse_int_seq).collect::<Res<_>>()? })
}

pub fn certificate_json(c: &NonMembershipCertificate, bound: &Integer) -> Value {
    let exceed = c
        .index_exceeding(bound)
        .map(|(i, q)| json!({"bound": int_str(bound), "index": i, "denominator": int_str(&q)}))
        .unwrap_or(Value::Null);
    json!({
        "symbol": c.symbol.label(),
        "cell": c.cell,
        "support": index_set_json(&c.support),
        "numerator_poly": c.num.to_string(),
        "denominator_poly": c.den.to_string(),
        "num": poly_json(&c.num),
        "den": poly_json(&c.den),
        "index_exceeding": exceed,
    })
}

pub fn parse_group(f: Field<'_>) -> Res<FgAbelianGroup> {
    let torsion: Vec<u64> = match f.opt("torsion")? {
        Some(t) => t.items()?.iter().map(|x| x.u64()).collect::<Res<_>>()?,
        None => Vec::new(),
    };
    let free = match f.opt("free_rank")? {
        Some(r) => r.usize()?,
        None => 0,
    };
    if torsion.contains(&0) {
        return f.err("torsion orders must be positive (use free_rank for Z)");
    }
    let mut orders = torsion;
    orders.extend(std::iter::repeat_n(0, free));
    Ok(FgAbelianGroup::from_cyclic_orders(&orders))
}

pub fn group_json(g: &FgAbelianGroup) -> Value {
    json!({"free_rank": g.free_rank(), "torsion": g.torsion()})
}

pub fn element_json(x: &GroupElement) -> Value {
    json!(x.coords)
}

pub fn parse_subset(g: &FgAbelianGroup, f: Field<'_>) -> Res<Subset> {
    let mut els = Vec::new();
    for e in f.items()? {
        let coords: Vec<i64> = match e.value {
            Value::Number(_) => vec![e.i64()?],
            _ => e.items()?.iter().map(|c| c.i64()).collect::<Res<_>>()?,
        };
        let x = GroupElement::new(coords);
        if !g.contains(&x) {
            return e.err(format!("{x} is not an element of {g} in normal-form coordinates"));
        }
        els.push(x);
    }
    Subset::new(g.clone(), els).or_else(|err| f.err(err.to_string()))
}

pub fn subset_json(s: &Subset) -> Value {
    Value::Array(s.elements.iter().map(element_json).collect())
}

pub fn parse_point(f: Field<'_>) -> Res<Point> {
    let p = match f.value {
        Value::Number(_) => Some(Point::Index(f.u64()?)),
        Value::String(s) => Point::parse(s),
        _ => None,
    };
    p.map_or_else(|| f.err("expected a natural number or \"inf\""), Ok)
}

pub fn parse_free_point(f: Field<'_>) -> Res<FreePoint> {
    let mut terms = Vec::new();
    for t in f.get("terms")?.items()? {
        terms.push((parse_point(t.get("point")?)?, t.get("coeff")?.integer()?));
    }
    Ok(FreePoint::new(terms))
}

/// Finite model: `{"values": [..]}`. Convergent model: `{"values": IntSeq |
/// [prefix..], "limit": n}`; an array lists the first values, after which the
/// sequence is constantly `limit`.
pub fn parse_int_function(f: Field<'_>, convergent: bool) -> Res<IntFunction> {
    let values = f.get("values")?;
    if !convergent {
        return Ok(IntFunction::Finite(values.items()?.iter().map(|v| v.integer()).collect::<Res<_>>()?));
    }
    let limit = f.get("limit")?.integer()?;
    let seq = if values.value.is_array() {
        let prefix: Vec<Integer> = values.items()?.iter().map(|v| v.integer()).collect::<Res<_>>()?;
        let mut cells: Vec<(IndexSet, Poly)> = prefix
            .iter()
            .enumerate()
            .map(|(i, v)| (IndexSet::singleton(i as u64), Poly::constant(v.clone())))
            .collect();
        cells.push((IndexSet::at_least(prefix.len()), Poly::constant(limit.clone())));
        IntSeq::from_polys(cells).expect("cells partition N")
    } else {
        parse_int_seq(values)?
    };
    Ok(IntFunction::Convergent { seq, limit })
}

pub fn int_function_json(g: &IntFunction) -> Value {
    match g {
        IntFunction::Finite(v) => json!({"values": Value::Array(v.iter().map(int_str).collect())}),
        IntFunction::Convergent { seq, limit } => json!({"values": int_seq_json(seq), "limit": int_str(limit)}),
    }
}
