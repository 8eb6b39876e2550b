//! Exact rational helpers. Every probability that has a closed form is an
//! `ExactProb`; floats only appear in Monte-Carlo summaries.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type ExactProb = BigRational;

pub fn ratio(n: impl Into<BigInt>, d: impl Into<BigInt>) -> ExactProb {
    BigRational::new(n.into(), d.into())
}

pub fn int(n: impl Into<BigInt>) -> ExactProb {
    BigRational::from_integer(n.into())
}

pub fn zero() -> ExactProb {
    BigRational::zero()
}

pub fn one() -> ExactProb {
    BigRational::one()
}

/// `2^e` for any integer exponent.
pub fn pow2(e: i64) -> ExactProb {
    let p = BigInt::one() << e.unsigned_abs();
    if e >= 0 {
        int(p)
    } else {
        BigRational::new(BigInt::one(), p)
    }
}

/// `3^e` for any integer exponent.
pub fn pow3(e: i64) -> ExactProb {
    let p = num_traits::pow(BigInt::from(3), e.unsigned_abs() as usize);
    if e >= 0 {
        int(p)
    } else {
        BigRational::new(BigInt::one(), p)
    }
}

/// Serialized form `"num/den"`.
pub fn to_string(q: &ExactProb) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

pub fn parse(s: &str) -> Option<ExactProb> {
    let (n, d) = s.split_once('/').unwrap_or((s, "1"));
    let n: BigInt = n.trim().parse().ok()?;
    let d: BigInt = d.trim().parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(BigRational::new(n, d))
}

pub fn to_f64(q: &ExactProb) -> f64 {
    if let Some(f) = q.to_f64() {
        if f.is_finite() {
            return f;
        }
    }
    // numerator and denominator too large for a direct conversion
    let shift = q.numer().bits().max(q.denom().bits()) as i64 - 60;
    let n = (q.numer().abs() >> shift.max(0) as usize).to_f64().unwrap_or(0.0);
    let d = (q.denom() >> shift.max(0) as usize).to_f64().unwrap_or(1.0);
    let v = n / d;
    if q.is_negative() {
        -v
    } else {
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn powers_and_strings() {
        assert_eq!(pow2(-3), ratio(1, 8));
        assert_eq!(pow3(2), int(9));
        assert_eq!(to_string(&ratio(2, 6)), "1/3");
        assert_eq!(parse("4/12"), Some(ratio(1, 3)));
        assert_eq!(parse("5"), Some(int(5)));
        assert_eq!(parse("1/0"), None);
        let tiny = ratio(1, 3) * pow3(-800);
        assert!(to_f64(&tiny) >= 0.0);
        let big = BigRational::new(BigInt::from(1) << 2000usize, (BigInt::from(1) << 1999usize) * 3);
        assert!((to_f64(&big) - 2.0 / 3.0).abs() < 1e-12);
    }
}
