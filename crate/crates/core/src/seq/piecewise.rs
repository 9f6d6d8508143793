//! Piecewise functions on `N` over eventually periodic partitions.

use std::fmt::Debug;

use super::index_set::{common_frame, divisors, IndexSet};
use super::SeqError;

/// Function attached to one cell of a partition of `N`.
pub trait CellValue: Clone + PartialEq + Debug {
    type Output: Clone + PartialEq + Debug;

    /// Value at `i`; `None` where the formula is undefined.
    fn eval(&self, i: u64) -> Option<Self::Output>;
    /// The constant function with value `v`. Must be canonical in `v`.
    fn constant(v: &Self::Output) -> Self;
    fn zero() -> Self;
    /// Whether `eval` is defined at every element of `support`.
    fn defined_on(&self, support: &IndexSet) -> bool;
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell<V> {
    pub support: IndexSet,
    pub value: V,
}

impl<V> Cell<V> {
    pub fn new(support: IndexSet, value: V) -> Self {
        Self { support, value }
    }
}

/// A function on `N` given by one formula per cell of a finite eventually
/// periodic partition. Kept canonical: equal values at every index imply
/// equal cell lists whenever the per-class formulas agree structurally.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Piecewise<V> {
    cells: Vec<Cell<V>>,
}

impl<V: CellValue> Piecewise<V> {
    /// Validates that the supports partition `N` and that every formula is
    /// defined on its support.
    pub fn new(cells: Vec<Cell<V>>) -> Result<Self, SeqError> {
        let (p, l) = common_frame(cells.iter().map(|c| &c.support));
        for i in 0..(p + l) as u64 {
            let covering = cells.iter().filter(|c| c.support.contains(i)).count();
            if covering != 1 {
                return Err(SeqError::PresentationInvalid { index: i, covering });
            }
        }
        if let Some(k) = cells.iter().position(|c| !c.value.defined_on(&c.support)) {
            return Err(SeqError::ZeroDenominator { cell: k });
        }
        Ok(Self::from_partition(cells))
    }

    /// Canonicalizes cells already known to partition `N`.
    pub(crate) fn from_partition(cells: Vec<Cell<V>>) -> Self {
        let cells: Vec<Cell<V>> = cells.into_iter().filter(|c| !c.support.is_empty()).collect();
        if cells.is_empty() {
            return Self::uniform(V::zero());
        }
        let (n0, l) = common_frame(cells.iter().map(|c| &c.support));
        let at = |i: u64| &cells.iter().find(|c| c.support.contains(i)).expect("cells cover N").value;
        let tails: Vec<&V> = (0..l).map(|r| at((n0 + r) as u64)).collect();
        let lmin = divisors(l)
            .into_iter()
            .find(|&d| (0..l).all(|r| tails[r] == tails[r % d]))
            .unwrap_or(l);

        let mut keys: Vec<(V, Vec<bool>, Vec<bool>)> = Vec::new();
        let slot = |v: V, keys: &mut Vec<(V, Vec<bool>, Vec<bool>)>| -> usize {
            match keys.iter().position(|(k, _, _)| *k == v) {
                Some(pos) => pos,
                None => {
                    keys.push((v, vec![false; n0], vec![false; lmin]));
                    keys.len() - 1
                }
            }
        };
        for i in 0..n0 {
            let own = at(i as u64).eval(i as u64).expect("formula defined on its support");
            let tail = tails[((i % lmin) + lmin - (n0 % lmin)) % lmin];
            let key = if tail.eval(i as u64).as_ref() == Some(&own) { tail.clone() } else { V::constant(&own) };
            let k = slot(key, &mut keys);
            keys[k].1[i] = true;
        }
        for (r, tail) in tails.iter().enumerate().take(lmin) {
            let k = slot((*tail).clone(), &mut keys);
            keys[k].2[r] = true;
        }
        let mut out: Vec<Cell<V>> = keys
            .into_iter()
            .map(|(v, prefix, period)| Cell::new(IndexSet::new(prefix, period).unwrap(), v))
            .collect();
        out.sort_by_key(|c| c.support.first());
        Self { cells: out }
    }

    /// Single cell covering `N`.
    pub fn uniform(value: V) -> Self {
        Self { cells: vec![Cell::new(IndexSet::all(), value)] }
    }

    pub fn zero() -> Self {
        Self::uniform(V::zero())
    }

    pub fn cells(&self) -> &[Cell<V>] {
        &self.cells
    }

    pub fn cell_index(&self, i: u64) -> usize {
        self.cells.iter().position(|c| c.support.contains(i)).expect("cells cover N")
    }

    pub fn value_at(&self, i: u64) -> &V {
        &self.cells[self.cell_index(i)].value
    }

    pub fn eval(&self, i: u64) -> V::Output {
        self.value_at(i).eval(i).expect("formula defined on its support")
    }

    /// `(max prefix length, lcm of period lengths)` over all cells.
    pub fn frame(&self) -> (usize, usize) {
        common_frame(self.cells.iter().map(|c| &c.support))
    }

    pub fn is_zero(&self) -> bool {
        self.cells.len() == 1 && self.cells[0].value == V::zero()
    }

    pub fn map<U: CellValue>(&self, f: impl Fn(&V) -> U) -> Piecewise<U> {
        Piecewise::from_partition(self.cells.iter().map(|c| Cell::new(c.support.clone(), f(&c.value))).collect())
    }

    /// Pointwise combination over the common refinement of both partitions.
    pub fn combine<W: CellValue, U: CellValue>(
        &self,
        other: &Piecewise<W>,
        f: impl Fn(&V, &W) -> U,
    ) -> Piecewise<U> {
        let (n0, l) = common_frame(self.cells.iter().map(|c| &c.support).chain(other.cells.iter().map(|c| &c.support)));
        let mut cells = Vec::with_capacity(n0 + l);
        for i in 0..n0 as u64 {
            cells.push(Cell::new(IndexSet::singleton(i), f(self.value_at(i), other.value_at(i))));
        }
        for r in 0..l {
            let i = (n0 + r) as u64;
            cells.push(Cell::new(IndexSet::tail_class(n0, l, r), f(self.value_at(i), other.value_at(i))));
        }
        Piecewise::from_partition(cells)
    }

    /// Equal to `self` on `j`, zero off `j`.
    pub fn restrict(&self, j: &IndexSet) -> Self {
        let mut cells = Vec::with_capacity(2 * self.cells.len());
        for c in &self.cells {
            cells.push(Cell::new(c.support.intersect(j), c.value.clone()));
            cells.push(Cell::new(c.support.difference(j), V::zero()));
        }
        Self::from_partition(cells)
    }

    /// Indices where the function is not identically the zero formula.
    pub fn support(&self) -> IndexSet {
        self.cells
            .iter()
            .filter(|c| c.value != V::zero())
            .fold(IndexSet::empty(), |acc, c| acc.union(&c.support))
    }

    /// Every index at which some cell boundary or formula change can occur
    /// lies below `prefix + period`; beyond it each residue class mod the
    /// period sits inside one cell.
    pub fn window(&self) -> usize {
        let (p, l) = self.frame();
        p + l
    }
}
