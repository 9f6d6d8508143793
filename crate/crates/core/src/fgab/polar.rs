use std::collections::BTreeSet;

use super::group::{FgAbelianGroup, GroupElement};
use super::FgError;
use crate::exact::Rational;

/// Explicit subset of a finite group (or of its dual, realized on the same
/// factors).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subset {
    pub group: FgAbelianGroup,
    pub elements: BTreeSet<GroupElement>,
}

impl Subset {
    pub fn new(group: FgAbelianGroup, elements: impl IntoIterator<Item = GroupElement>) -> Result<Self, FgError> {
        if !group.is_finite() {
            return Err(FgError::NotFinite);
        }
        let elements: BTreeSet<GroupElement> = elements.into_iter().collect();
        if let Some(x) = elements.iter().find(|x| !group.contains(x)) {
            return Err(FgError::NotAnElement(x.to_string()));
        }
        Ok(Self { group, elements })
    }

    pub fn full(group: &FgAbelianGroup) -> Result<Self, FgError> {
        Self::new(group.clone(), group.elements()?)
    }

    pub fn contains(&self, x: &GroupElement) -> bool {
        self.elements.contains(x)
    }

    pub fn is_subset(&self, other: &Subset) -> bool {
        self.elements.is_subset(&other.elements)
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

fn quarter() -> Rational {
    Rational::new(1.into(), 4.into())
}

fn bounded(g: &FgAbelianGroup, a: &GroupElement, b: &GroupElement) -> bool {
    let v = g.pairing(a, b).rational_abs().expect("finite groups have rational characters");
    v <= quarter()
}

/// `A^▷ = {χ : |χ(a)| ≤ 1/4 for all a ∈ A}`.
pub fn polar(a: &Subset) -> Subset {
    let g = &a.group;
    let chars = g.elements().expect("subset groups are finite");
    let elements = chars.into_iter().filter(|chi| a.elements.iter().all(|x| bounded(g, chi, x))).collect();
    Subset { group: g.clone(), elements }
}

/// `X^◁ = {g : |χ(g)| ≤ 1/4 for all χ ∈ X}`.
pub fn prepolar(x: &Subset) -> Subset {
    let g = &x.group;
    let els = g.elements().expect("subset groups are finite");
    let elements = els.into_iter().filter(|e| x.elements.iter().all(|chi| bounded(g, chi, e))).collect();
    Subset { group: g.clone(), elements }
}

/// `A^▷◁`, the smallest quasi-convex subset containing `A`.
pub fn quasiconvex_hull(a: &Subset) -> Subset {
    prepolar(&polar(a))
}
