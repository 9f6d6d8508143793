use std::collections::BTreeMap;

use num_integer::Integer as _;

use super::bichar::{enumerate_bicharacters, Bicharacter};
use super::group::{enumerate_homs, quotient, FgAbelianGroup, GroupElement, GroupHom};
use super::FgError;
use crate::exact::ModEchelon;
use crate::par::{self, Exec};

/// Default bound on `|G × H|` (and on each group in the brute-force checks).
pub const DEFAULT_GUARD: u64 = 64;

/// `G ⊗ H` built as the free abelian group on `G × H` modulo bilinearity,
/// with the image of every pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorProduct {
    pub left: FgAbelianGroup,
    pub right: FgAbelianGroup,
    pub group: FgAbelianGroup,
    /// `images[i·|H| + j]` is the class of `(a_i, c_j)`, elements in
    /// lexicographic order.
    pub images: Vec<GroupElement>,
}

impl TensorProduct {
    pub fn bimap(&self, a: &GroupElement, c: &GroupElement) -> &GroupElement {
        let n = self.right.order().unwrap() as usize;
        &self.images[self.left.index_of(a) * n + self.right.index_of(c)]
    }
}

fn check_size(size: u64, guard: u64) -> Result<(), FgError> {
    if size > guard {
        return Err(FgError::TooLarge { size, guard });
    }
    Ok(())
}

/// Builds `G ⊗ H` for finite `G`, `H` with `|G × H| ≤ guard`.
pub fn tensor_construct(g: &FgAbelianGroup, h: &FgAbelianGroup, guard: u64) -> Result<TensorProduct, FgError> {
    let g_els = g.elements()?;
    let h_els = h.elements()?;
    let (m, n) = (g_els.len(), h_els.len());
    check_size((m * n) as u64, guard)?;
    let idx = |i: usize, j: usize| i * n + j;
    // exp(G)·σ and exp(H)·σ vanish, so the relation lattice contains D·Z^(G×H)
    let d = g.exponent().unwrap().gcd(&h.exponent().unwrap());
    let mut ech = ModEchelon::new(m * n, d as i64);
    let mut rel = |terms: &[(usize, i64)]| {
        let mut row = vec![0i64; m * n];
        for &(k, c) in terms {
            row[k] += c;
        }
        ech.insert(row);
    };
    for (ia, a) in g_els.iter().enumerate() {
        for (ib, b) in g_els.iter().enumerate() {
            let s = g.index_of(&g.add(a, b));
            for jc in 0..n {
                rel(&[(idx(s, jc), 1), (idx(ia, jc), -1), (idx(ib, jc), -1)]);
            }
        }
    }
    for (jc, c) in h_els.iter().enumerate() {
        for (je, e) in h_els.iter().enumerate() {
            let s = h.index_of(&h.add(c, e));
            for ia in 0..m {
                rel(&[(idx(ia, s), 1), (idx(ia, jc), -1), (idx(ia, je), -1)]);
            }
        }
    }
    for (ia, a) in g_els.iter().enumerate() {
        let oa = g.element_order(a).unwrap() as i64;
        for (jc, c) in h_els.iter().enumerate() {
            let oc = h.element_order(c).unwrap() as i64;
            rel(&[(idx(ia, jc), oa)]);
            rel(&[(idx(ia, jc), oc)]);
        }
    }
    let (group, proj) = quotient(&ech.into_matrix());
    let images = (0..m * n)
        .map(|k| {
            let mut e = vec![0; m * n];
            e[k] = 1;
            proj.apply(&GroupElement::new(e))
        })
        .collect();
    Ok(TensorProduct { left: g.clone(), right: h.clone(), group, images })
}

/// Outcome of a brute-force check: success with its witness data, or a
/// description of the first failure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verification<T> {
    Holds(T),
    Fails(String),
}

impl<T> Verification<T> {
    pub fn holds(&self) -> bool {
        matches!(self, Self::Holds(_))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniversalReport {
    pub tensor: FgAbelianGroup,
    pub bihomomorphisms: usize,
    pub homomorphisms: usize,
}

/// Every bihomomorphism `G × H → B` (determined by generator values killed by
/// both orders), as a table indexed like [`TensorProduct::images`].
fn enumerate_bihoms(g: &FgAbelianGroup, h: &FgAbelianGroup, b: &FgAbelianGroup) -> Result<Vec<Vec<GroupElement>>, FgError> {
    let g_els = g.elements()?;
    let h_els = h.elements()?;
    let b_els = b.elements()?;
    let slots: Vec<Vec<&GroupElement>> = g
        .torsion()
        .iter()
        .flat_map(|&d| h.torsion().iter().map(move |&e| d.gcd(&e)))
        .map(|k| b_els.iter().filter(|x| b.scale(k as i64, x) == b.zero()).collect())
        .collect();
    let hn = h.ngens();
    let mut out = Vec::new();
    let mut pick = vec![0usize; slots.len()];
    loop {
        let table: Vec<Vec<i64>> = g_els
            .iter()
            .flat_map(|a| {
                h_els.iter().map(|c| {
                    let mut v = vec![0i64; b.ngens()];
                    for (i, &x) in a.coords.iter().enumerate() {
                        for (j, &y) in c.coords.iter().enumerate() {
                            let val = slots[i * hn + j][pick[i * hn + j]];
                            for (t, &z) in val.coords.iter().enumerate() {
                                v[t] += x * y * z;
                            }
                        }
                    }
                    v
                })
            })
            .collect();
        out.push(table.into_iter().map(|v| b.reduce(GroupElement::new(v))).collect());
        let mut pos = slots.len();
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            pick[pos] += 1;
            if pick[pos] < slots[pos].len() {
                break;
            }
            pick[pos] = 0;
        }
    }
}

/// For every bihomomorphism `b: G × H → B`, checks that exactly one
/// homomorphism `b̃: G ⊗ H → B` satisfies `b̃ ∘ ⊗ = b`.
pub fn verify_universal_property(
    g: &FgAbelianGroup,
    h: &FgAbelianGroup,
    b: &FgAbelianGroup,
    guard: u64,
    exec: Exec,
) -> Result<Verification<UniversalReport>, FgError> {
    for x in [g, h, b] {
        check_size(x.order().ok_or(FgError::NotFinite)?, guard)?;
    }
    let t = tensor_construct(g, h, guard)?;
    let bihoms = enumerate_bihoms(g, h, b)?;
    let homs = enumerate_homs(&t.group, b)?;
    let composed: Vec<Vec<GroupElement>> =
        par::map(exec, &homs, |phi: &GroupHom| t.images.iter().map(|x| phi.apply(x)).collect());
    let matches = par::map(exec, &bihoms, |bh| composed.iter().filter(|c| *c == bh).count());
    if let Some((k, &n)) = matches.iter().enumerate().find(|(_, &n)| n != 1) {
        return Ok(Verification::Fails(format!("bihomomorphism {k} factors through the tensor product {n} times")));
    }
    Ok(Verification::Holds(UniversalReport {
        tensor: t.group,
        bihomomorphisms: bihoms.len(),
        homomorphisms: homs.len(),
    }))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualTensorReport {
    pub tensor: FgAbelianGroup,
    pub order: usize,
    /// Image in `(G ⊗ H)^` of each generator `β_ij` of `X(G, H)`
    /// (value `1/gcd(d_i, e_j)` at `(i, j)`, zero elsewhere).
    pub iso_witness: BTreeMap<(usize, usize), GroupElement>,
}

/// Checks that sending a bicharacter `β` to the character `ψ` of `G ⊗ H`
/// with `ψ(a ⊗ c) = β(a, c)` is a well-defined group isomorphism
/// `X(G, H) → (G ⊗ H)^`.
pub fn verify_dual_of_tensor(
    g: &FgAbelianGroup,
    h: &FgAbelianGroup,
    guard: u64,
    exec: Exec,
) -> Result<Verification<DualTensorReport>, FgError> {
    let t = tensor_construct(g, h, guard)?;
    let bis = enumerate_bicharacters(g, h)?;
    let chars = t.group.elements()?;
    let g_els = g.elements()?;
    let h_els = h.elements()?;
    let pairs: Vec<(&GroupElement, &GroupElement)> = g_els.iter().flat_map(|a| h_els.iter().map(move |c| (a, c))).collect();
    let values = |beta: &Bicharacter| pairs.iter().map(|(a, c)| beta.eval(a, c)).collect::<Vec<_>>();
    let psi: Vec<Vec<&GroupElement>> = par::map(exec, &bis, |beta| {
        let want = values(beta);
        chars
            .iter()
            .filter(|chi| t.images.iter().zip(&want).all(|(x, v)| t.group.pairing(chi, x) == *v))
            .collect()
    });
    if let Some(k) = psi.iter().position(|c| c.len() != 1) {
        return Ok(Verification::Fails(format!("bicharacter {k} induces {} characters of the tensor product", psi[k].len())));
    }
    let psi: Vec<&GroupElement> = psi.into_iter().map(|c| c[0]).collect();
    let index: BTreeMap<&Bicharacter, usize> = bis.iter().enumerate().map(|(k, b)| (b, k)).collect();
    let additive = par::map_range(exec, bis.len(), |i| {
        (0..bis.len()).all(|j| {
            let s = bis[i].add(&bis[j]);
            psi[index[&s]] == &t.group.add(psi[i], psi[j])
        })
    });
    if additive.iter().any(|ok| !ok) {
        return Ok(Verification::Fails("the induced map is not additive".into()));
    }
    let mut seen = psi.clone();
    seen.sort();
    seen.dedup();
    if seen.len() != psi.len() || psi.len() != chars.len() {
        return Ok(Verification::Fails(format!(
            "{} bicharacters map onto {} of {} characters",
            psi.len(),
            seen.len(),
            chars.len()
        )));
    }
    let mut iso_witness = BTreeMap::new();
    for (i, &d) in g.torsion().iter().enumerate() {
        for (j, &e) in h.torsion().iter().enumerate() {
            let mut table = vec![vec![crate::exact::TorusValue::zero(); h.ngens()]; g.ngens()];
            table[i][j] = crate::exact::TorusValue::from_ratio(1, d.gcd(&e) as i64);
            let beta = Bicharacter::new(g.clone(), h.clone(), table)?;
            iso_witness.insert((i, j), psi[index[&beta]].clone());
        }
    }
    Ok(Verification::Holds(DualTensorReport { tensor: t.group, order: chars.len(), iso_witness }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(n: u64) -> FgAbelianGroup {
        FgAbelianGroup::cyclic(n)
    }

    #[test]
    fn cyclic_tensors() {
        assert_eq!(tensor_construct(&c(4), &c(6), 64).unwrap().group, c(2));
        assert_eq!(tensor_construct(&c(2), &c(3), 64).unwrap().group, FgAbelianGroup::trivial());
        assert_eq!(tensor_construct(&c(2), &c(2), 64).unwrap().group, c(2));
        assert_eq!(tensor_construct(&c(12), &c(12), 64), Err(FgError::TooLarge { size: 144, guard: 64 }));
        assert_eq!(tensor_construct(&c(12), &c(12), 144).unwrap().group, c(12));
    }

    #[test]
    fn bimap_is_bilinear() {
        let g = FgAbelianGroup::from_cyclic_orders(&[2, 4]);
        let h = c(6);
        let t = tensor_construct(&g, &h, 64).unwrap();
        assert_eq!(t.group, FgAbelianGroup::from_cyclic_orders(&[2, 2]));
        for a in g.elements().unwrap() {
            for b in g.elements().unwrap() {
                for x in h.elements().unwrap() {
                    let lhs = t.bimap(&g.add(&a, &b), &x);
                    assert_eq!(lhs, &t.group.add(t.bimap(&a, &x), t.bimap(&b, &x)));
                }
            }
        }
    }

    #[test]
    fn universal_property_examples() {
        let r = verify_universal_property(&c(2), &c(2), &c(4), 64, Exec::Sequential).unwrap();
        let Verification::Holds(rep) = r else { panic!("{r:?}") };
        assert_eq!(rep.bihomomorphisms, 2);
        let r = verify_universal_property(&c(2), &c(3), &c(6), 64, Exec::Parallel).unwrap();
        let Verification::Holds(rep) = r else { panic!("{r:?}") };
        assert_eq!(rep.bihomomorphisms, 1);
        assert!(verify_universal_property(&FgAbelianGroup::trivial(), &c(5), &c(3), 64, Exec::Sequential).unwrap().holds());
    }

    #[test]
    fn dual_of_tensor_examples() {
        for (g, h, order) in [(c(4), c(6), 2), (c(2), c(3), 1), (c(2), c(4), 2)] {
            let r = verify_dual_of_tensor(&g, &h, 64, Exec::Sequential).unwrap();
            let Verification::Holds(rep) = r else { panic!("{r:?}") };
            assert_eq!(rep.order, order);
        }
    }
}
