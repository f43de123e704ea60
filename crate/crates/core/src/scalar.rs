//! Exact rational scalars.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Scalar = BigRational;

pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Scalar {
    Scalar::new(BigInt::from(n), BigInt::from(d))
}

pub fn zero() -> Scalar {
    Scalar::zero()
}

pub fn one() -> Scalar {
    Scalar::one()
}

/// `(-1)^k` as a scalar.
pub fn sign(odd: bool) -> Scalar {
    if odd {
        -Scalar::one()
    } else {
        Scalar::one()
    }
}

/// Parses `7`, `-3`, `2/5` or `-2/5`.
pub fn parse(s: &str) -> Option<Scalar> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = num.parse().ok()?;
    let d: BigInt = den.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(Scalar::new(n, d))
}

pub fn format(q: &Scalar) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn abs(q: &Scalar) -> Scalar {
    q.abs()
}

/// `1/k!`.
pub fn inv_factorial(k: usize) -> Scalar {
    let mut f = BigInt::one();
    for i in 2..=k {
        f *= i;
    }
    Scalar::new(BigInt::one(), f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse("-6/4"), Some(frac(-3, 2)));
        assert_eq!(format(&frac(-3, 2)), "-3/2");
        assert_eq!(format(&int(5)), "5");
        assert_eq!(parse("1/0"), None);
        assert_eq!(parse("x"), None);
    }

    #[test]
    fn factorials() {
        assert_eq!(inv_factorial(0), one());
        assert_eq!(inv_factorial(4), frac(1, 24));
    }
}
