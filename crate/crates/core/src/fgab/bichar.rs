use std::collections::BTreeSet;

use num_integer::Integer as _;

use super::group::{enumerate_homs, hom_group, FgAbelianGroup, GroupElement, GroupHom};
use super::FgError;
use crate::exact::{IntMatrix, Integer, Rational, TorusValue};

/// Biadditive `β: G × H → T` on finite groups, stored by its values
/// `β(g_i, h_j)` on normal-form generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bicharacter {
    g: FgAbelianGroup,
    h: FgAbelianGroup,
    table: Vec<Vec<TorusValue>>,
}

impl Bicharacter {
    /// Checks `d_i·β(g_i, h_j) = 0 = e_j·β(g_i, h_j)`.
    pub fn new(g: FgAbelianGroup, h: FgAbelianGroup, table: Vec<Vec<TorusValue>>) -> Result<Self, FgError> {
        if !g.is_finite() || !h.is_finite() {
            return Err(FgError::NotFinite);
        }
        if table.len() != g.ngens() || table.iter().any(|r| r.len() != h.ngens()) {
            return Err(FgError::Shape(format!("bicharacter table must be {}x{}", g.ngens(), h.ngens())));
        }
        for (i, &d) in g.torsion().iter().enumerate() {
            for (j, &e) in h.torsion().iter().enumerate() {
                let v = &table[i][j];
                let killed = |n: u64| v.scale(&Integer::from(n)).is_zero();
                if !killed(d) || !killed(e) {
                    return Err(FgError::IllFormedBicharacter { row: i, col: j });
                }
            }
        }
        Ok(Self { g, h, table })
    }

    pub fn zero(g: FgAbelianGroup, h: FgAbelianGroup) -> Self {
        let table = vec![vec![TorusValue::zero(); h.ngens()]; g.ngens()];
        Self { g, h, table }
    }

    pub fn left(&self) -> &FgAbelianGroup {
        &self.g
    }

    pub fn right(&self) -> &FgAbelianGroup {
        &self.h
    }

    pub fn table(&self) -> &[Vec<TorusValue>] {
        &self.table
    }

    pub fn eval(&self, a: &GroupElement, b: &GroupElement) -> TorusValue {
        let mut acc = TorusValue::zero();
        for (i, &x) in a.coords.iter().enumerate() {
            for (j, &y) in b.coords.iter().enumerate() {
                acc += &self.table[i][j].scale(&Integer::from(x * y));
            }
        }
        acc
    }

    pub fn add(&self, other: &Bicharacter) -> Bicharacter {
        let table = self
            .table
            .iter()
            .zip(&other.table)
            .map(|(r, s)| r.iter().zip(s).map(|(a, b)| a + b).collect())
            .collect();
        Bicharacter { g: self.g.clone(), h: self.h.clone(), table }
    }
}

/// `X(G, H)`: every bicharacter, each generator value ranging over
/// `k / gcd(d_i, e_j)`, lexicographic in the table.
pub fn enumerate_bicharacters(g: &FgAbelianGroup, h: &FgAbelianGroup) -> Result<Vec<Bicharacter>, FgError> {
    if !g.is_finite() || !h.is_finite() {
        return Err(FgError::NotFinite);
    }
    let slots: Vec<u64> = g.torsion().iter().flat_map(|&d| h.torsion().iter().map(move |&e| d.gcd(&e))).collect();
    let mut out = Vec::new();
    let mut pick = vec![0u64; slots.len()];
    loop {
        let mut table = vec![vec![TorusValue::zero(); h.ngens()]; g.ngens()];
        for (k, (&p, &m)) in pick.iter().zip(&slots).enumerate() {
            let (i, j) = (k / h.ngens(), k % h.ngens());
            table[i][j] = TorusValue::from_rational(Rational::new(Integer::from(p), Integer::from(m)));
        }
        out.push(Bicharacter { g: g.clone(), h: h.clone(), table });
        let mut pos = slots.len();
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            pick[pos] += 1;
            if pick[pos] < slots[pos] {
                break;
            }
            pick[pos] = 0;
        }
    }
}

/// `β̃: G → Ĥ`, `β̃(g)[h] = β(g, h)`, with `Ĥ` realized on the factors of `H`.
pub fn garling_transpose(beta: &Bicharacter) -> Result<GroupHom, FgError> {
    let (g, h) = (beta.left(), beta.right());
    let mut m = IntMatrix::zeros(h.ngens(), g.ngens());
    for (i, row) in beta.table().iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            let e = Integer::from(h.torsion()[j]);
            let a = v.rational_lift() * Rational::from_integer(e);
            if !a.is_integer() {
                return Err(FgError::IllFormedBicharacter { row: i, col: j });
            }
            m.set(j, i, a.to_integer());
        }
    }
    GroupHom::new(g.clone(), h.clone(), m)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GarlingReport {
    pub bicharacters: usize,
    pub homs: usize,
    pub hom_group: FgAbelianGroup,
}

/// Checks that `β ↦ β̃` is a bijection `X(G, H) → Hom(G, Ĥ)` respecting
/// values: `β̃(g)[h] = β(g, h)` on every pair of elements.
pub fn verify_garling(g: &FgAbelianGroup, h: &FgAbelianGroup) -> Result<Result<GarlingReport, String>, FgError> {
    let bis = enumerate_bicharacters(g, h)?;
    let homs = enumerate_homs(g, h)?;
    let g_els = g.elements()?;
    let h_els = h.elements()?;
    let mut images = BTreeSet::new();
    for beta in &bis {
        let t = garling_transpose(beta)?;
        for a in &g_els {
            let chi = t.apply(a);
            for b in &h_els {
                if h.pairing(&chi, b) != beta.eval(a, b) {
                    return Ok(Err(format!("transpose disagrees with the bicharacter at ({a}, {b})")));
                }
            }
        }
        if !images.insert(t) {
            return Ok(Err("two bicharacters share a transpose".into()));
        }
    }
    let hg = hom_group(g, h);
    if bis.len() != homs.len() || hg.order() != Some(homs.len() as u64) {
        return Ok(Err(format!("|X(G,H)| = {} but |Hom(G, H^)| = {}", bis.len(), homs.len())));
    }
    Ok(Ok(GarlingReport { bicharacters: bis.len(), homs: homs.len(), hom_group: hg }))
}
