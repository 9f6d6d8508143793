//! Integer polynomials in the index variable `i`, and reduced ratios of them.

use std::fmt;

use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};

use crate::exact::{Integer, Rational};

/// Integer polynomial, coefficients low → high, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Poly {
    coeffs: Vec<Integer>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Integer>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Integer::from(c)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: Integer) -> Self {
        Self::new(vec![c])
    }

    /// The polynomial `i`.
    pub fn index() -> Self {
        Self::from_i64(&[0, 1])
    }

    pub fn coeffs(&self) -> &[Integer] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> Integer {
        self.coeffs.last().cloned().unwrap_or_else(Integer::zero)
    }

    pub fn eval(&self, x: &Integer) -> Integer {
        let mut acc = Integer::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_at(&self, i: u64) -> Integer {
        self.eval(&Integer::from(i))
    }

    pub fn content(&self) -> Integer {
        self.coeffs.iter().fold(Integer::zero(), |g, c| g.gcd(c))
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = Integer::zero();
        Poly::new(
            (0..n)
                .map(|k| self.coeffs.get(k).unwrap_or(&zero) + other.coeffs.get(k).unwrap_or(&zero))
                .collect(),
        )
    }

    pub fn neg(&self) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Integer::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    pub fn scale(&self, k: &Integer) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    fn div_exact_scalar(&self, k: &Integer) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| c / k).collect())
    }

    /// `p(a + step·k)` as a polynomial in `k`.
    pub fn compose_affine(&self, a: &Integer, step: &Integer) -> Poly {
        let lin = Poly::new(vec![a.clone(), step.clone()]);
        let mut acc = Poly::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&lin).add(&Poly::constant(c.clone()));
        }
        acc
    }

    /// Natural-number roots, ascending.
    pub fn natural_roots(&self) -> Vec<u64> {
        if self.is_zero() {
            return Vec::new();
        }
        let mut roots = Vec::new();
        let low = self.coeffs.iter().position(|c| !c.is_zero()).expect("nonzero polynomial");
        if low > 0 {
            roots.push(0);
        }
        let reduced = &self.coeffs[low..];
        if reduced.len() <= 1 {
            return roots;
        }
        // nonzero integer roots divide the constant term and obey the Cauchy bound
        let a0 = reduced[0].abs();
        let lead = reduced[reduced.len() - 1].abs();
        let cauchy = reduced[..reduced.len() - 1].iter().map(|c| c.abs()).max().unwrap() / &lead + 1u32;
        let bound = a0.clone().min(cauchy);
        let mut r = Integer::one();
        while r <= bound {
            if a0.is_multiple_of(&r) && self.eval(&r).is_zero() {
                roots.push(u64::try_from(&r).expect("root fits in u64"));
            }
            r += 1u32;
        }
        roots
    }

    /// Bound `B` with `|p(x)| > 0` and strictly monotone in `|x|` sign pattern
    /// irrelevant: every real root has `|x| < B`.
    pub fn root_bound(&self) -> Integer {
        match self.degree() {
            None | Some(0) => Integer::zero(),
            Some(d) => {
                let lead = self.coeffs[d].abs();
                self.coeffs[..d].iter().map(|c| c.abs()).max().unwrap() / lead + 2u32
            }
        }
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push(if neg { '-' } else { '+' });
            }
            if k == 0 || !mag.is_one() {
                out.push_str(&mag.to_string());
            }
            match k {
                0 => {}
                1 => out.push('i'),
                _ => out.push_str(&format!("i^{k}")),
            }
        }
        f.write_str(&out)
    }
}

/// Polynomial with rational coefficients; used only for gcd computations.
#[derive(Clone, Debug, PartialEq)]
struct QPoly(Vec<Rational>);

impl QPoly {
    fn from_poly(p: &Poly) -> Self {
        QPoly(p.coeffs.iter().map(|c| Rational::from_integer(c.clone())).collect())
    }

    fn trim(mut self) -> Self {
        while self.0.last().is_some_and(Zero::is_zero) {
            self.0.pop();
        }
        self
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn rem(&self, d: &QPoly) -> QPoly {
        let mut r = self.0.clone();
        let dl = d.0.len();
        let lead = d.0.last().expect("nonzero divisor");
        while r.len() >= dl && !r.is_empty() {
            let q = r.last().unwrap() / lead;
            let shift = r.len() - dl;
            for (k, c) in d.0.iter().enumerate() {
                r[shift + k] -= &q * c;
            }
            r.pop();
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        QPoly(r).trim()
    }

    fn div_exact(&self, d: &QPoly) -> QPoly {
        if self.0.len() < d.0.len() {
            return QPoly(Vec::new());
        }
        let mut r = self.0.clone();
        let dl = d.0.len();
        let lead = d.0.last().expect("nonzero divisor").clone();
        let mut q = vec![Rational::zero(); r.len() - dl + 1];
        while r.len() >= dl && !r.is_empty() {
            let c = r.last().unwrap() / &lead;
            let shift = r.len() - dl;
            for (k, dc) in d.0.iter().enumerate() {
                r[shift + k] -= &c * dc;
            }
            q[shift] = c;
            r.pop();
        }
        QPoly(q).trim()
    }

    fn monic(self) -> QPoly {
        match self.0.last().cloned() {
            None => self,
            Some(l) => QPoly(self.0.into_iter().map(|c| c / &l).collect()),
        }
    }

    fn gcd(a: &QPoly, b: &QPoly) -> QPoly {
        let (mut x, mut y) = (a.clone(), b.clone());
        while !y.is_zero() {
            let r = x.rem(&y);
            x = y;
            y = r;
        }
        x.monic()
    }
}

/// Reduced ratio `num / den` of integer polynomials: coprime over `Q[i]`,
/// coprime integer contents, positive leading coefficient in `den`, and
/// `den = 1` when `num = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    /// `None` when `den` is the zero polynomial.
    pub fn new(num: Poly, den: Poly) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        if num.is_zero() {
            return Some(Self::zero());
        }
        let (mut n, mut d) = if den.is_constant() {
            (num, den)
        } else {
            let qn = QPoly::from_poly(&num);
            let qd = QPoly::from_poly(&den);
            let g = QPoly::gcd(&qn, &qd);
            let rn = qn.div_exact(&g);
            let rd = qd.div_exact(&g);
            let l = rn.0.iter().chain(rd.0.iter()).fold(Integer::one(), |acc, c| acc.lcm(c.denom()));
            let to_int = |q: &QPoly| {
                Poly::new(q.0.iter().map(|c| (c * Rational::from_integer(l.clone())).to_integer()).collect())
            };
            (to_int(&rn), to_int(&rd))
        };
        let g = n.content().gcd(&d.content());
        if !g.is_one() {
            n = n.div_exact_scalar(&g);
            d = d.div_exact_scalar(&g);
        }
        if d.leading().is_negative() {
            n = n.neg();
            d = d.neg();
        }
        Some(Self { num: n, den: d })
    }

    pub fn zero() -> Self {
        Self { num: Poly::zero(), den: Poly::constant(Integer::one()) }
    }

    pub fn polynomial(p: Poly) -> Self {
        Self::new(p, Poly::constant(Integer::one())).unwrap()
    }

    pub fn constant(q: &Rational) -> Self {
        Self::new(Poly::constant(q.numer().clone()), Poly::constant(q.denom().clone())).unwrap()
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Denominator is a constant, i.e. a polynomial with rational coefficients.
    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    /// Degree of the rational-coefficient polynomial; `None` if not a
    /// polynomial or zero.
    pub fn poly_degree(&self) -> Option<usize> {
        if self.is_polynomial() {
            self.num.degree()
        } else {
            None
        }
    }

    /// `deg num - deg den` (`None` for zero).
    pub fn degree_excess(&self) -> Option<i64> {
        Some(self.num.degree()? as i64 - self.den.degree().unwrap_or(0) as i64)
    }

    pub fn eval(&self, x: &Integer) -> Option<Rational> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return None;
        }
        Some(Rational::new(self.num.eval(x), d))
    }

    pub fn eval_at(&self, i: u64) -> Option<Rational> {
        self.eval(&Integer::from(i))
    }

    pub fn add(&self, o: &RatFunc) -> RatFunc {
        if self.den == o.den {
            return RatFunc::new(self.num.add(&o.num), self.den.clone()).unwrap();
        }
        RatFunc::new(self.num.mul(&o.den).add(&o.num.mul(&self.den)), self.den.mul(&o.den)).unwrap()
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, o: &RatFunc) -> RatFunc {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &RatFunc) -> RatFunc {
        RatFunc::new(self.num.mul(&o.num), self.den.mul(&o.den)).unwrap()
    }

    pub fn scale(&self, q: &Rational) -> RatFunc {
        self.mul(&RatFunc::constant(q))
    }

    /// `f(a + step·k)` as a function of `k`.
    pub fn compose_affine(&self, a: u64, step: u64) -> RatFunc {
        let (a, s) = (Integer::from(a), Integer::from(step));
        RatFunc::new(self.num.compose_affine(&a, &s), self.den.compose_affine(&a, &s)).unwrap()
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == Poly::constant(Integer::one()) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> Poly {
        Poly::from_i64(c)
    }

    #[test]
    fn display() {
        assert_eq!(p(&[1, 1]).to_string(), "i+1");
        assert_eq!(p(&[1, -3, 2]).to_string(), "2i^2-3i+1");
        assert_eq!(p(&[0, -1]).to_string(), "-i");
        assert_eq!(Poly::zero().to_string(), "0");
    }

    #[test]
    fn ratfunc_reduction() {
        // (2i+2)/(i+1) = 2
        let f = RatFunc::new(p(&[2, 2]), p(&[1, 1])).unwrap();
        assert_eq!(f, RatFunc::polynomial(p(&[2])));
        // (i^2-1)/(2i+2) = (i-1)/2
        let f = RatFunc::new(p(&[-1, 0, 1]), p(&[2, 2])).unwrap();
        assert_eq!(f.num(), &p(&[-1, 1]));
        assert_eq!(f.den(), &p(&[2]));
        // sign normalisation and content
        let f = RatFunc::new(p(&[3]), p(&[-6])).unwrap();
        assert_eq!((f.num(), f.den()), (&p(&[-1]), &p(&[2])));
        let f = RatFunc::new(p(&[2]), p(&[4, 2])).unwrap();
        assert_eq!((f.num(), f.den()), (&p(&[1]), &p(&[2, 1])));
        assert!(RatFunc::new(p(&[1]), Poly::zero()).is_none());
    }

    #[test]
    fn arithmetic_and_eval() {
        let a = RatFunc::new(p(&[1]), p(&[1, 1])).unwrap();
        let b = RatFunc::new(p(&[0, 1]), p(&[1, 1])).unwrap();
        assert_eq!(a.add(&b), RatFunc::polynomial(p(&[1])));
        assert_eq!(a.eval_at(4), Some(Rational::new(1.into(), 5.into())));
        assert_eq!(RatFunc::new(p(&[1]), p(&[-2, 1])).unwrap().eval_at(2), None);
        assert_eq!(p(&[0, 0, 1]).compose_affine(&1.into(), &2.into()), p(&[1, 4, 4]));
    }

    #[test]
    fn roots() {
        assert_eq!(p(&[-6, 1, 1]).natural_roots(), vec![2]);
        assert_eq!(p(&[0, -4, 0, 1]).natural_roots(), vec![0, 2]);
        assert_eq!(p(&[1, 1]).natural_roots(), Vec::<u64>::new());
        assert_eq!(p(&[-12, 0, 3]).natural_roots(), vec![2]);
    }
}
