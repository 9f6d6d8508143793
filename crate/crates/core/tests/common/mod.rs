//! Shared fixtures and independent oracles for the integration tests. The
//! oracles use only plain big-number arithmetic, never the library routines
//! they are checking.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::Command;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use tensordual::exact::TorusValue;
use tensordual::seq::CharacterPresentation;

/// (golden input, command, expected exit code)
pub const CORPUS: &[(&str, &str, i32)] = &[
    ("snf_ok", "snf", 0),
    ("snf_ragged", "snf", 2),
    ("bad_syntax", "snf", 2),
    ("group_relations", "group", 0),
    ("group_dual_infinite", "group", 1),
    ("tensor_z4_z6", "tensor", 0),
    ("tensor_infinite", "tensor", 2),
    ("dual_check_half", "dual-check", 0),
    ("dual_check_harmonic", "dual-check", 1),
    ("decompose_mixed", "decompose", 0),
    ("decompose_unbounded", "decompose", 1),
    ("reduce_convergent", "reduce", 0),
    ("reduce_finite", "reduce", 0),
    ("reduce_rejected", "reduce", 1),
    ("polar_hull_z4", "polar", 0),
    ("polar_not_quasiconvex", "polar", 1),
    ("verify_universal", "verify", 0),
    ("verify_dual_of_tensor", "verify", 0),
    ("verify_roundtrip", "verify", 0),
    ("verify_continuity_fail", "verify", 1),
];

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

/// Runs the CLI binary; returns (exit code, stdout).
pub fn run_cli(cmd: &str, input: &Path, extra: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_tensordual"))
        .arg(cmd)
        .arg("--input")
        .arg(input)
        .args(extra)
        .output()
        .expect("binary runs");
    (out.status.code().expect("exit code"), String::from_utf8(out.stdout).expect("utf-8 report"))
}

pub fn horner(coeffs: &[BigInt], x: u64) -> BigInt {
    let x = BigInt::from(x);
    coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * &x + c)
}

/// `t(i)` straight from the cell formulas.
pub fn char_value(t: &CharacterPresentation, i: u64) -> TorusValue {
    let cell = t.cells().iter().find(|c| c.support.contains(i)).expect("cells cover N");
    cell.value
        .terms()
        .iter()
        .map(|(b, r)| {
            let q = BigRational::new(horner(r.num().coeffs(), i), horner(r.den().coeffs(), i));
            TorusValue::basis(*b, q)
        })
        .sum()
}

/// Rank over Q by Gaussian elimination.
pub fn rank(rows: &[Vec<BigInt>]) -> usize {
    let mut m: Vec<Vec<BigRational>> =
        rows.iter().map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect()).collect();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) else { continue };
        m.swap(rank, p);
        for r in 0..m.len() {
            if r != rank && !m[r][c].is_zero() {
                let f = &m[r][c] / &m[rank][c];
                for k in c..cols {
                    let v = &f * &m[rank][k];
                    m[r][k] -= v;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Bareiss fraction-free determinant.
pub fn det(rows: &[Vec<BigInt>]) -> BigInt {
    let n = rows.len();
    let mut m = rows.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    if n == 0 {
        return BigInt::one();
    }
    sign * &m[n - 1][n - 1]
}

/// Invariant factors of a small integer matrix by elementary row and column
/// operations on `i128`.
pub fn small_snf(mut a: Vec<Vec<i128>>) -> Vec<i128> {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut out = Vec::new();
    for t in 0..rows.min(cols) {
        // move a nonzero entry of minimal absolute value to (t, t)
        loop {
            let pivot = (t..rows)
                .flat_map(|i| (t..cols).map(move |j| (i, j)))
                .filter(|&(i, j)| a[i][j] != 0)
                .min_by_key(|&(i, j)| a[i][j].abs());
            let Some((pi, pj)) = pivot else { return out };
            a.swap(t, pi);
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
            let p = a[t][t];
            let mut clean = true;
            for i in t + 1..rows {
                let q = a[i][t].div_euclid(p);
                for j in t..cols {
                    a[i][j] -= q * a[t][j];
                }
                clean &= a[i][t] == 0;
            }
            for j in t + 1..cols {
                let q = a[t][j].div_euclid(p);
                for i in t..rows {
                    a[i][j] -= q * a[i][t];
                }
                clean &= a[t][j] == 0;
            }
            if !clean {
                continue;
            }
            // enforce divisibility of the remaining block
            if let Some(i) = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| a[i][j] % p != 0)) {
                for j in t..cols {
                    a[t][j] += a[i][j];
                }
                continue;
            }
            out.push(p.abs());
            break;
        }
    }
    out
}

/// `Σ a_k b_k / d_k` in `(-1/2, 1/2]`.
pub fn pairing(torsion: &[u64], a: &[i64], b: &[i64]) -> BigRational {
    let mut s = BigRational::zero();
    for k in 0..torsion.len() {
        s += BigRational::new(BigInt::from(a[k] * b[k]), BigInt::from(torsion[k]));
    }
    let mut y = &s - s.floor();
    if y > BigRational::new(1.into(), 2.into()) {
        y -= BigRational::one();
    }
    y
}

/// Every element of `⊕ Z_{d_k}`, lexicographic.
pub fn elements(torsion: &[u64]) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for &d in torsion {
        out = out.into_iter().flat_map(|p| (0..d as i64).map(move |x| [p.clone(), vec![x]].concat())).collect();
    }
    out
}

/// Brute-force polar (or prepolar: the pairing is symmetric).
pub fn polar(torsion: &[u64], a: &BTreeSet<Vec<i64>>) -> BTreeSet<Vec<i64>> {
    let quarter = BigRational::new(1.into(), 4.into());
    elements(torsion).into_iter().filter(|c| a.iter().all(|x| pairing(torsion, c, x).abs() <= quarter)).collect()
}

/// `|Z_{d_1} ⊕ … ⊗ Z_{e_1} ⊕ …| = Π gcd(d_i, e_j)`.
pub fn tensor_order(g: &[u64], h: &[u64]) -> u64 {
    g.iter().flat_map(|&d| h.iter().map(move |&e| d.gcd(&e))).product()
}
