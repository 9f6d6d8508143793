use std::fmt;

use num_integer::Integer as _;
use num_traits::{ToPrimitive, Zero};

use super::FgError;
use crate::exact::{smith_normal_form, IntMatrix, Integer, Rational, RowEchelon, TorusValue};

/// `Z_{d_1} ⊕ … ⊕ Z_{d_k} ⊕ Z^r` with `2 ≤ d_1 | d_2 | … | d_k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FgAbelianGroup {
    torsion: Vec<u64>,
    free_rank: usize,
}

/// Coordinates with respect to the normal-form factors; torsion coordinates
/// live in `[0, d_k)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    pub coords: Vec<i64>,
}

impl GroupElement {
    pub fn new(coords: Vec<i64>) -> Self {
        Self { coords }
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl FgAbelianGroup {
    pub fn new(torsion: Vec<u64>, free_rank: usize) -> Result<Self, FgError> {
        if torsion.iter().any(|&d| d < 2) || torsion.windows(2).any(|w| w[1] % w[0] != 0) {
            return Err(FgError::InvalidFactors(torsion));
        }
        Ok(Self { torsion, free_rank })
    }

    pub fn trivial() -> Self {
        Self { torsion: Vec::new(), free_rank: 0 }
    }

    pub fn free(rank: usize) -> Self {
        Self { torsion: Vec::new(), free_rank: rank }
    }

    /// `Z_n`; `n = 0` gives `Z`, `n = 1` the trivial group.
    pub fn cyclic(n: u64) -> Self {
        Self::from_cyclic_orders(&[n])
    }

    /// `⊕ Z_{n_k}` brought to invariant-factor form (`0` stands for `Z`).
    pub fn from_cyclic_orders(orders: &[u64]) -> Self {
        let n = orders.len();
        let mut m = IntMatrix::zeros(n, n);
        for (k, &d) in orders.iter().enumerate() {
            m.set(k, k, Integer::from(d));
        }
        let free_rank = orders.iter().filter(|&&d| d == 0).count();
        let torsion = smith_normal_form(&m)
            .invariant_factors()
            .into_iter()
            .filter_map(|d| d.to_u64())
            .filter(|&d| d >= 2)
            .collect();
        Self { torsion, free_rank }
    }

    pub fn torsion(&self) -> &[u64] {
        &self.torsion
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    /// Number of normal-form factors.
    pub fn ngens(&self) -> usize {
        self.torsion.len() + self.free_rank
    }

    /// Order of each factor, `0` for `Z`.
    pub fn moduli(&self) -> Vec<u64> {
        self.torsion.iter().copied().chain(std::iter::repeat_n(0, self.free_rank)).collect()
    }

    pub fn order(&self) -> Option<u64> {
        self.is_finite().then(|| self.torsion.iter().product())
    }

    /// Largest element order (1 for the trivial group); `None` if infinite.
    pub fn exponent(&self) -> Option<u64> {
        self.is_finite().then(|| self.torsion.last().copied().unwrap_or(1))
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement::new(vec![0; self.ngens()])
    }

    pub fn generator(&self, k: usize) -> GroupElement {
        let mut c = vec![0; self.ngens()];
        c[k] = 1;
        self.reduce(GroupElement::new(c))
    }

    pub fn reduce(&self, mut x: GroupElement) -> GroupElement {
        for (c, &d) in x.coords.iter_mut().zip(self.torsion.iter()) {
            *c = c.rem_euclid(d as i64);
        }
        x
    }

    pub fn contains(&self, x: &GroupElement) -> bool {
        x.coords.len() == self.ngens() && x.coords.iter().zip(self.torsion.iter()).all(|(&c, &d)| 0 <= c && c < d as i64)
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        self.reduce(GroupElement::new(a.coords.iter().zip(&b.coords).map(|(x, y)| x + y).collect()))
    }

    pub fn neg(&self, a: &GroupElement) -> GroupElement {
        self.reduce(GroupElement::new(a.coords.iter().map(|x| -x).collect()))
    }

    pub fn scale(&self, k: i64, a: &GroupElement) -> GroupElement {
        self.reduce(GroupElement::new(a.coords.iter().map(|x| k * x).collect()))
    }

    pub fn element_order(&self, a: &GroupElement) -> Option<u64> {
        let mut o = 1u64;
        for (k, &c) in a.coords.iter().enumerate() {
            match self.torsion.get(k) {
                Some(&d) => o = o.lcm(&(d / (c.unsigned_abs()).gcd(&d))),
                None if c != 0 => return None,
                None => {}
            }
        }
        Some(o)
    }

    /// All elements, lexicographic in coordinates.
    pub fn elements(&self) -> Result<Vec<GroupElement>, FgError> {
        if !self.is_finite() {
            return Err(FgError::NotFinite);
        }
        let mut out = vec![Vec::with_capacity(self.ngens())];
        for &d in &self.torsion {
            out = out
                .into_iter()
                .flat_map(|p: Vec<i64>| {
                    (0..d as i64).map(move |c| {
                        let mut q = p.clone();
                        q.push(c);
                        q
                    })
                })
                .collect();
        }
        Ok(out.into_iter().map(GroupElement::new).collect())
    }

    /// Position of `x` in [`elements`](Self::elements).
    pub fn index_of(&self, x: &GroupElement) -> usize {
        x.coords.iter().zip(&self.torsion).fold(0usize, |acc, (&c, &d)| acc * d as usize + c as usize)
    }

    /// `χ_a(b) = Σ a_k b_k / d_k` for finite groups.
    pub fn pairing(&self, a: &GroupElement, b: &GroupElement) -> TorusValue {
        let q = self
            .torsion
            .iter()
            .zip(a.coords.iter().zip(&b.coords))
            .map(|(&d, (&x, &y))| Rational::new(Integer::from(x) * Integer::from(y), Integer::from(d)))
            .fold(Rational::zero(), |s, v| s + v);
        TorusValue::from_rational(q)
    }
}

impl fmt::Display for FgAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.torsion.iter().map(|d| format!("Z_{d}")).collect();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Homomorphism given by an integer matrix acting on coordinate columns:
/// `target.ngens() × source.ngens()`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupHom {
    source: FgAbelianGroup,
    target: FgAbelianGroup,
    matrix: IntMatrix,
}

impl GroupHom {
    pub fn new(source: FgAbelianGroup, target: FgAbelianGroup, matrix: IntMatrix) -> Result<Self, FgError> {
        if matrix.rows() != target.ngens() || matrix.cols() != source.ngens() {
            return Err(FgError::Shape(format!(
                "expected {}x{} matrix, got {}x{}",
                target.ngens(),
                source.ngens(),
                matrix.rows(),
                matrix.cols()
            )));
        }
        let moduli = target.moduli();
        let mut reduced = matrix.clone();
        for r in 0..matrix.rows() {
            for c in 0..matrix.cols() {
                if moduli[r] != 0 {
                    reduced.set(r, c, matrix.get(r, c).mod_floor(&Integer::from(moduli[r])));
                }
            }
        }
        for (c, &d) in source.moduli().iter().enumerate() {
            if d == 0 {
                continue;
            }
            for (r, &e) in moduli.iter().enumerate() {
                let v = reduced.get(r, c) * Integer::from(d);
                let ok = if e == 0 { v.is_zero() } else { v.is_multiple_of(&Integer::from(e)) };
                if !ok {
                    return Err(FgError::NotWellDefined { column: c });
                }
            }
        }
        Ok(Self { source, target, matrix: reduced })
    }

    pub fn zero(source: FgAbelianGroup, target: FgAbelianGroup) -> Self {
        let m = IntMatrix::zeros(target.ngens(), source.ngens());
        Self { source, target, matrix: m }
    }

    pub fn source(&self) -> &FgAbelianGroup {
        &self.source
    }

    pub fn target(&self) -> &FgAbelianGroup {
        &self.target
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn apply(&self, x: &GroupElement) -> GroupElement {
        let v: Vec<Integer> = x.coords.iter().map(|&c| Integer::from(c)).collect();
        let img = self.matrix.mul_vec(&v);
        let moduli = self.target.moduli();
        let coords = img
            .into_iter()
            .zip(moduli)
            .map(|(y, d)| if d == 0 { y } else { y.mod_floor(&Integer::from(d)) })
            .map(|y| y.to_i64().expect("coordinate fits in i64"))
            .collect();
        GroupElement::new(coords)
    }

    pub fn is_injective_on_elements(&self) -> Result<bool, FgError> {
        let els = self.source.elements()?;
        Ok(els.iter().filter(|x| self.apply(x) == self.target.zero()).count() == 1)
    }
}

/// `Z^generators / ⟨rows of relations⟩` in normal form together with the
/// map sending each original generator to its normal-form coordinates.
pub fn group_from_relations(generators: usize, relations: &IntMatrix) -> Result<(FgAbelianGroup, GroupHom), FgError> {
    if relations.cols() != generators {
        return Err(FgError::Shape(format!(
            "relations have {} columns for {generators} generators",
            relations.cols()
        )));
    }
    if relations.rows() <= generators {
        return Ok(quotient(relations));
    }
    let mut ech = RowEchelon::new(generators, None);
    for r in 0..relations.rows() {
        ech.insert(relations.row(r).to_vec());
    }
    Ok(quotient(&ech.into_matrix()))
}

pub(crate) fn quotient(relations: &IntMatrix) -> (FgAbelianGroup, GroupHom) {
    let n = relations.cols();
    let snf = smith_normal_form(relations);
    let diag = snf.s.diagonal();
    let d_at = |c: usize| diag.get(c).cloned().unwrap_or_else(Integer::zero);
    let mut torsion_cols = Vec::new();
    let mut free_cols = Vec::new();
    for c in 0..n {
        let d = d_at(c);
        if d.is_zero() {
            free_cols.push(c);
        } else if d > Integer::from(1) {
            torsion_cols.push(c);
        }
    }
    let torsion: Vec<u64> = torsion_cols.iter().map(|&c| d_at(c).to_u64().expect("factor fits in u64")).collect();
    let group = FgAbelianGroup { torsion, free_rank: free_cols.len() };
    let kept: Vec<usize> = torsion_cols.into_iter().chain(free_cols).collect();
    let mut m = IntMatrix::zeros(kept.len(), n);
    for (r, &c) in kept.iter().enumerate() {
        for k in 0..n {
            m.set(r, k, snf.v.get(k, c).clone());
        }
    }
    let source = FgAbelianGroup::free(n);
    let proj = GroupHom::new(source, group.clone(), m).expect("free source");
    (group, proj)
}

/// `Hom(G, H)` for finitely generated `G`, `H`.
pub fn hom_group(g: &FgAbelianGroup, h: &FgAbelianGroup) -> FgAbelianGroup {
    let mut orders = Vec::new();
    for &a in &g.moduli() {
        for &b in &h.moduli() {
            orders.push(match (a, b) {
                (0, b) => b,
                (_, 0) => 1,
                (a, b) => a.gcd(&b),
            });
        }
    }
    FgAbelianGroup::from_cyclic_orders(&orders)
}

/// All homomorphisms between finite groups, lexicographic in the images of
/// the generators.
pub fn enumerate_homs(g: &FgAbelianGroup, h: &FgAbelianGroup) -> Result<Vec<GroupHom>, FgError> {
    let h_els = h.elements()?;
    g.elements()?;
    let choices: Vec<Vec<&GroupElement>> = g
        .torsion()
        .iter()
        .map(|&d| h_els.iter().filter(|x| h.scale(d as i64, x) == h.zero()).collect())
        .collect();
    let mut out = Vec::new();
    let mut pick = vec![0usize; choices.len()];
    loop {
        let mut m = IntMatrix::zeros(h.ngens(), g.ngens());
        for (c, &k) in pick.iter().enumerate() {
            for (r, &v) in choices[c][k].coords.iter().enumerate() {
                m.set(r, c, Integer::from(v));
            }
        }
        out.push(GroupHom { source: g.clone(), target: h.clone(), matrix: m });
        let mut pos = choices.len();
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            pick[pos] += 1;
            if pick[pos] < choices[pos].len() {
                break;
            }
            pick[pos] = 0;
        }
    }
}

/// `Ĝ` for finite `G`, realized on the same factors via [`FgAbelianGroup::pairing`].
pub fn dual_group(g: &FgAbelianGroup) -> Result<FgAbelianGroup, FgError> {
    if !g.is_finite() {
        return Err(FgError::NotFinite);
    }
    Ok(g.clone())
}

/// The character `χ_a` as a function on `G`.
pub fn character_of<'a>(g: &'a FgAbelianGroup, a: &'a GroupElement) -> impl Fn(&GroupElement) -> TorusValue + 'a {
    move |b| g.pairing(a, b)
}
