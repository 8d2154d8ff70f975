//! Exact rational scalars.
//!
//! Every computation in this crate happens over the rationals with
//! arbitrary-precision integer numerator and denominator, kept in lowest
//! terms with a positive denominator. No floating point is used anywhere.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// The ground field: arbitrary-precision rationals.
pub type Rat = BigRational;

/// Shorthand for an integer rational.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Shorthand for the fraction `n/d`. Panics on `d == 0`.
pub fn frac(n: i64, d: i64) -> Rat {
    assert!(d != 0, "zero denominator");
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn zero() -> Rat {
    Rat::zero()
}

pub fn one() -> Rat {
    Rat::one()
}

/// Parses `"p"`, `"p/q"` or a plain integer literal.
pub fn parse_rat(s: &str) -> Result<Rat, String> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (s, None),
    };
    let n: BigInt = num
        .parse()
        .map_err(|_| format!("invalid rational numerator {num:?}"))?;
    let d: BigInt = match den {
        Some(d) => d
            .parse()
            .map_err(|_| format!("invalid rational denominator {d:?}"))?,
        None => BigInt::one(),
    };
    if d.is_zero() {
        return Err(format!("zero denominator in {s:?}"));
    }
    Ok(Rat::new(n, d))
}

/// Renders a rational as `"p"` or `"p/q"`, always in lowest terms.
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// True when the rational is a (possibly negative) integer.
pub fn is_integer(r: &Rat) -> bool {
    r.denom().is_one()
}

/// `(-1)^k` as a rational sign.
pub fn sign_pow(k: usize) -> Rat {
    if k.is_multiple_of(2) {
        one()
    } else {
        -one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rat("3").unwrap(), rat(3));
        assert_eq!(parse_rat("-7/2").unwrap(), frac(-7, 2));
        assert_eq!(parse_rat(" 4/6 ").unwrap(), frac(2, 3));
        assert_eq!(format_rat(&frac(4, 6)), "2/3");
        assert_eq!(format_rat(&rat(-5)), "-5");
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
    }

    proptest! {
        #[test]
        fn roundtrip(n in -1000i64..1000, d in 1i64..1000) {
            let r = frac(n, d);
            prop_assert_eq!(parse_rat(&format_rat(&r)).unwrap(), r);
        }

        #[test]
        fn lowest_terms(n in -1000i64..1000, d in 1i64..1000) {
            let r = frac(n, d);
            prop_assert!(num_integer::gcd(r.numer().clone(), r.denom().clone())
                <= num_bigint::BigInt::from(1));
        }
    }

    #[test]
    fn signs() {
        assert_eq!(sign_pow(0), one());
        assert_eq!(sign_pow(1), -one());
        assert_eq!(sign_pow(7), -one());
    }
}
