use num_bigint::BigInt;
use num_integer::Integer as _;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::ExactError;

pub type Integer = BigInt;
/// Always stored reduced with a positive denominator.
pub type Rational = BigRational;

pub fn gcd(a: &Integer, b: &Integer) -> Integer {
    a.gcd(b)
}

pub fn lcm(a: &Integer, b: &Integer) -> Integer {
    if a.is_zero() || b.is_zero() {
        return Integer::zero();
    }
    a.lcm(b)
}

pub fn floor_div(a: &Integer, b: &Integer) -> Integer {
    a.div_floor(b)
}

/// Representative of `x mod 1` in the window `(-1/2, 1/2]`.
pub fn window_representative(x: &Rational) -> Rational {
    let mut y = x - x.floor();
    let half = Rational::new(Integer::one(), Integer::from(2));
    if y > half {
        y -= Rational::one();
    }
    y
}

pub fn parse_integer(s: &str) -> Result<Integer, ExactError> {
    s.trim()
        .parse::<Integer>()
        .map_err(|_| ExactError::BadInteger(s.to_string()))
}

/// Accepts `"p/q"` or a bare integer `"p"`.
pub fn parse_rational(s: &str) -> Result<Rational, ExactError> {
    let t = s.trim();
    match t.split_once('/') {
        None => Ok(Rational::from_integer(
            parse_integer(t).map_err(|_| ExactError::BadRational(s.to_string()))?,
        )),
        Some((p, q)) => {
            let p = parse_integer(p).map_err(|_| ExactError::BadRational(s.to_string()))?;
            let q = parse_integer(q).map_err(|_| ExactError::BadRational(s.to_string()))?;
            if q.is_zero() {
                return Err(ExactError::ZeroDenominator(s.to_string()));
            }
            Ok(Rational::new(p, q))
        }
    }
}

pub fn format_integer(n: &Integer) -> String {
    n.to_str_radix(10)
}

/// `"p/q"`, or `"p"` when the denominator is one.
pub fn format_rational(x: &Rational) -> String {
    if x.denom().is_one() {
        format_integer(x.numer())
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}
