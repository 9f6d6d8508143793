use std::collections::BTreeMap;

use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMatrix;
use super::rational::Integer;

/// `U · A · V = S` with `U`, `V` unimodular and `S` diagonal with
/// nonnegative entries `d_1 | d_2 | ... | d_r`, zeros after.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfResult {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
}

impl SnfResult {
    /// Nonzero diagonal entries of `S`, in order.
    pub fn invariant_factors(&self) -> Vec<Integer> {
        self.s.diagonal().into_iter().filter(|d| !d.is_zero()).collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

type Rows = Vec<Vec<Integer>>;

fn identity_rows(n: usize) -> Rows {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Integer::one() } else { Integer::zero() }).collect())
        .collect()
}

fn rows_to_matrix(rows: Rows, cols: usize) -> IntMatrix {
    IntMatrix::from_rows(rows, cols).expect("rectangular by construction")
}

// row[dst] -= q * row[src]
fn row_sub(m: &mut Rows, dst: usize, src: usize, q: &Integer) {
    let (d, s) = if dst < src {
        let (a, b) = m.split_at_mut(src);
        (&mut a[dst], &b[0])
    } else {
        let (a, b) = m.split_at_mut(dst);
        (&mut b[0], &a[src])
    };
    for (x, y) in d.iter_mut().zip(s.iter()) {
        if !y.is_zero() {
            *x -= q * y;
        }
    }
}

// col[dst] -= q * col[src]
fn col_sub(m: &mut Rows, dst: usize, src: usize, q: &Integer) {
    for row in m.iter_mut() {
        if !row[src].is_zero() {
            let t = q * &row[src];
            row[dst] -= t;
        }
    }
}

fn swap_cols(m: &mut Rows, a: usize, b: usize) {
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

/// Smallest nonzero |entry| in the trailing block, ties to lowest row then column.
fn find_pivot(s: &Rows, t: usize, cols: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, Integer)> = None;
    for (i, row) in s.iter().enumerate().skip(t) {
        for (j, x) in row.iter().enumerate().take(cols).skip(t) {
            if x.is_zero() {
                continue;
            }
            let a = x.abs();
            if best.as_ref().is_none_or(|(_, _, b)| a < *b) {
                best = Some((i, j, a));
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

pub fn smith_normal_form(a: &IntMatrix) -> SnfResult {
    let (m, n) = (a.rows(), a.cols());
    let mut s = a.to_rows();
    let mut u = identity_rows(m);
    let mut v = identity_rows(n);

    'outer: for t in 0..m.min(n) {
        loop {
            let Some((pr, pc)) = find_pivot(&s, t, n) else {
                break 'outer;
            };
            if pr != t {
                s.swap(pr, t);
                u.swap(pr, t);
            }
            if pc != t {
                swap_cols(&mut s, pc, t);
                swap_cols(&mut v, pc, t);
            }
            let p = s[t][t].clone();
            let mut clean = true;
            for i in t + 1..m {
                if !s[i][t].is_zero() {
                    let q = &s[i][t] / &p;
                    row_sub(&mut s, i, t, &q);
                    row_sub(&mut u, i, t, &q);
                    clean &= s[i][t].is_zero();
                }
            }
            for j in t + 1..n {
                if !s[t][j].is_zero() {
                    let q = &s[t][j] / &p;
                    col_sub(&mut s, j, t, &q);
                    col_sub(&mut v, j, t, &q);
                    clean &= s[t][j].is_zero();
                }
            }
            if !clean {
                continue;
            }
            let offender = (t + 1..m).find(|&i| (t + 1..n).any(|j| !s[i][j].is_multiple_of(&p)));
            match offender {
                Some(i) => {
                    let minus_one = -Integer::one();
                    row_sub(&mut s, t, i, &minus_one);
                    row_sub(&mut u, t, i, &minus_one);
                }
                None => break,
            }
        }
        if s[t][t].is_negative() {
            for x in s[t].iter_mut() {
                *x = -&*x;
            }
            for x in u[t].iter_mut() {
                *x = -&*x;
            }
        }
    }

    SnfResult { u: rows_to_matrix(u, m), s: rows_to_matrix(s, n), v: rows_to_matrix(v, n) }
}

/// Row-style Hermite normal form: echelon, positive pivots, entries above a
/// pivot reduced into `[0, pivot)`. Zero rows are dropped.
pub fn hermite_rows(mut rows: Vec<Vec<Integer>>) -> Vec<Vec<Integer>> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut top = 0;
    for col in 0..ncols {
        if top == rows.len() {
            break;
        }
        loop {
            let best = (top..rows.len())
                .filter(|&i| !rows[i][col].is_zero())
                .min_by(|&a, &b| rows[a][col].abs().cmp(&rows[b][col].abs()).then(a.cmp(&b)));
            let Some(b) = best else { break };
            rows.swap(top, b);
            let mut done = true;
            for k in top + 1..rows.len() {
                if !rows[k][col].is_zero() {
                    let q = &rows[k][col] / &rows[top][col];
                    row_sub(&mut rows, k, top, &q);
                    done &= rows[k][col].is_zero();
                }
            }
            if done {
                break;
            }
        }
        if rows[top][col].is_zero() {
            continue;
        }
        if rows[top][col].is_negative() {
            for x in rows[top].iter_mut() {
                *x = -&*x;
            }
        }
        for k in 0..top {
            let q = rows[k][col].div_floor(&rows[top][col]);
            if !q.is_zero() {
                row_sub(&mut rows, k, top, &q);
            }
        }
        top += 1;
    }
    rows.truncate(top);
    rows
}

/// Lattice basis of `{v ∈ Z^cols : A v = 0}` in Hermite form; empty iff the
/// kernel is trivial.
pub fn integer_kernel_basis(a: &IntMatrix) -> Vec<Vec<Integer>> {
    let snf = smith_normal_form(a);
    let r = snf.rank();
    let basis: Vec<Vec<Integer>> = (r..a.cols()).map(|c| snf.v.column(c)).collect();
    hermite_rows(basis)
}

/// Incremental echelon basis for a row lattice. With a modulus `D` the lattice
/// is taken to contain `D·Z^n` and entries are kept reduced mod `D`.
pub(crate) struct RowEchelon {
    cols: usize,
    modulus: Option<Integer>,
    rows: BTreeMap<usize, Vec<Integer>>,
}

impl RowEchelon {
    pub(crate) fn new(cols: usize, modulus: Option<Integer>) -> Self {
        let mut e = Self { cols, modulus: modulus.filter(|d| !d.is_zero()).map(|d| d.abs()), rows: BTreeMap::new() };
        if let Some(d) = e.modulus.clone() {
            for c in 0..cols {
                let mut row = vec![Integer::zero(); cols];
                row[c] = d.clone();
                e.rows.insert(c, row);
            }
        }
        e
    }

    fn reduce(&self, row: &mut [Integer]) {
        if let Some(d) = &self.modulus {
            for x in row.iter_mut() {
                *x = x.mod_floor(d);
            }
        }
    }

    pub(crate) fn insert(&mut self, mut row: Vec<Integer>) {
        debug_assert_eq!(row.len(), self.cols);
        self.reduce(&mut row);
        while let Some(c) = row.iter().position(|x| !x.is_zero()) {
            let Some(p) = self.rows.get_mut(&c) else {
                self.rows.insert(c, row);
                return;
            };
            if row[c].is_multiple_of(&p[c]) {
                let q = &row[c] / &p[c];
                for (x, y) in row.iter_mut().zip(p.iter()) {
                    *x -= &q * y;
                }
            } else {
                let e = p[c].extended_gcd(&row[c]);
                let a = &p[c] / &e.gcd;
                let b = &row[c] / &e.gcd;
                let new_p: Vec<Integer> = p.iter().zip(row.iter()).map(|(x, y)| &e.x * x + &e.y * y).collect();
                let new_r: Vec<Integer> = p.iter().zip(row.iter()).map(|(x, y)| &a * y - &b * x).collect();
                *p = new_p;
                row = new_r;
                let mut pr = std::mem::take(p);
                self.reduce(&mut pr);
                if pr[c].is_zero() {
                    // gcd became a multiple of the modulus: the seeded D·e_c row is still implied
                    let mut seed = vec![Integer::zero(); self.cols];
                    seed[c] = self.modulus.clone().expect("only possible with a modulus");
                    pr = seed;
                }
                *self.rows.get_mut(&c).unwrap() = pr;
            }
            self.reduce(&mut row);
        }
    }

    pub(crate) fn into_matrix(self) -> IntMatrix {
        let cols = self.cols;
        IntMatrix::from_rows(self.rows.into_values().collect(), cols).expect("rows share length")
    }
}

/// [`RowEchelon`] with a small modulus `D` in machine integers.
pub(crate) struct ModEchelon {
    cols: usize,
    d: i64,
    rows: Vec<Option<Vec<i64>>>,
}

impl ModEchelon {
    pub(crate) fn new(cols: usize, d: i64) -> Self {
        assert!(d > 0, "modulus must be positive");
        let rows = (0..cols)
            .map(|c| {
                let mut row = vec![0; cols];
                row[c] = d;
                Some(row)
            })
            .collect();
        Self { cols, d, rows }
    }

    pub(crate) fn insert(&mut self, mut row: Vec<i64>) {
        debug_assert_eq!(row.len(), self.cols);
        let d = self.d;
        for x in row.iter_mut() {
            *x = x.rem_euclid(d);
        }
        let mut start = 0;
        while let Some(c) = (start..self.cols).find(|&c| row[c] != 0) {
            start = c;
            let p = self.rows[c].as_mut().expect("seeded pivot");
            if row[c] % p[c] == 0 {
                let q = row[c] / p[c];
                for (x, y) in row.iter_mut().zip(p.iter()).skip(c) {
                    *x = (*x - q * y).rem_euclid(d);
                }
            } else {
                let e = p[c].extended_gcd(&row[c]);
                let (a, b) = (p[c] / e.gcd, row[c] / e.gcd);
                let mut new_p = vec![0; self.cols];
                for k in c..self.cols {
                    let (x, y) = (p[k] as i128, row[k] as i128);
                    new_p[k] = ((e.x as i128 * x + e.y as i128 * y).rem_euclid(d as i128)) as i64;
                    row[k] = ((a as i128 * y - b as i128 * x).rem_euclid(d as i128)) as i64;
                }
                if new_p[c] == 0 {
                    new_p[c] = d;
                }
                *p = new_p;
            }
        }
    }

    pub(crate) fn into_matrix(self) -> IntMatrix {
        let cols = self.cols;
        let rows = self
            .rows
            .into_iter()
            .flatten()
            .map(|r| r.into_iter().map(Integer::from).collect())
            .collect();
        IntMatrix::from_rows(rows, cols).expect("rows share length")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(xs: &[i64]) -> Vec<Integer> {
        xs.iter().map(|&x| Integer::from(x)).collect()
    }

    fn check(a: &IntMatrix) -> SnfResult {
        let r = smith_normal_form(a);
        assert_eq!(r.u.mul(a).unwrap().mul(&r.v).unwrap(), r.s);
        assert!(r.u.determinant().unwrap().abs().is_one());
        assert!(r.v.determinant().unwrap().abs().is_one());
        r
    }

    #[test]
    fn snf_examples() {
        let r = check(&IntMatrix::identity(2));
        assert_eq!(r.s, IntMatrix::identity(2));

        let r = check(&IntMatrix::from_i64(&[&[2, 4], &[6, 8]]));
        assert_eq!(r.s, IntMatrix::from_i64(&[&[2, 0], &[0, 4]]));

        let r = check(&IntMatrix::from_i64(&[&[6], &[4]]));
        assert_eq!(r.s, IntMatrix::from_i64(&[&[2], &[0]]));

        let r = check(&IntMatrix::from_i64(&[&[2, 0], &[0, 3]]));
        assert_eq!(r.invariant_factors(), ints(&[1, 6]));
    }

    #[test]
    fn snf_degenerate_shapes() {
        for (rows, cols) in [(0, 0), (0, 3), (3, 0)] {
            let r = check(&IntMatrix::zeros(rows, cols));
            assert_eq!(r.rank(), 0);
        }
        let r = check(&IntMatrix::zeros(2, 3));
        assert!(r.s.is_zero());
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(integer_kernel_basis(&IntMatrix::from_i64(&[&[1, 1, 1], &[1, 2, 3]])), vec![ints(&[1, -2, 1])]);
        assert_eq!(integer_kernel_basis(&IntMatrix::from_i64(&[&[0]])), vec![ints(&[1])]);
        assert_eq!(integer_kernel_basis(&IntMatrix::from_i64(&[&[2, 4]])), vec![ints(&[2, -1])]);
        assert!(integer_kernel_basis(&IntMatrix::identity(3)).is_empty());
        assert_eq!(integer_kernel_basis(&IntMatrix::zeros(0, 1)), vec![ints(&[1])]);
    }

    #[test]
    fn hermite_is_canonical_for_same_lattice() {
        let a = hermite_rows(vec![ints(&[2, 3, 1]), ints(&[4, 1, 0])]);
        let b = hermite_rows(vec![ints(&[6, 4, 1]), ints(&[-2, -3, -1])]);
        assert_eq!(a, b);
    }

    #[test]
    fn row_echelon_spans_same_lattice() {
        let rows = vec![ints(&[4, 6]), ints(&[6, 9]), ints(&[2, 0])];
        let mut e = RowEchelon::new(2, None);
        for r in rows.clone() {
            e.insert(r);
        }
        let m = e.into_matrix();
        assert_eq!(hermite_rows(m.to_rows()), hermite_rows(rows));

        let mut e = RowEchelon::new(2, Some(Integer::from(6)));
        e.insert(ints(&[4, 2]));
        let f = smith_normal_form(&e.into_matrix()).invariant_factors();
        // <(4,2), 6Z^2>  ->  Z^2 / that has invariant factors 2, 6
        assert_eq!(f, ints(&[2, 6]));
    }

    #[test]
    fn mod_echelon_matches_big_echelon() {
        let rows: Vec<Vec<i64>> = vec![vec![4, 2, 3], vec![1, 5, 7], vec![6, 0, 9], vec![3, 3, 3]];
        for d in [1i64, 2, 6, 12] {
            let mut small = ModEchelon::new(3, d);
            let mut big = RowEchelon::new(3, Some(Integer::from(d)));
            for r in &rows {
                small.insert(r.clone());
                big.insert(r.iter().map(|&x| Integer::from(x)).collect());
            }
            let a = smith_normal_form(&small.into_matrix()).invariant_factors();
            let b = smith_normal_form(&big.into_matrix()).invariant_factors();
            assert_eq!(a, b, "modulus {d}");
        }
    }
}
