//! Exact rationals `Q` and Gaussian rationals `Q(i)`, with their text form.

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Q = BigRational;
pub type GQ = Complex<Q>;

pub fn q(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn gq(re: Q, im: Q) -> GQ {
    GQ::new(re, im)
}

pub fn gq_real(re: Q) -> GQ {
    GQ::new(re, Q::zero())
}

pub fn gq_zero() -> GQ {
    GQ::new(Q::zero(), Q::zero())
}

pub fn gq_one() -> GQ {
    GQ::new(Q::one(), Q::zero())
}

pub fn gq_is_zero(z: &GQ) -> bool {
    z.re.is_zero() && z.im.is_zero()
}

/// `|z|²`, exact.
pub fn gq_norm_sqr(z: &GQ) -> Q {
    &z.re * &z.re + &z.im * &z.im
}

pub fn half() -> Q {
    q(1, 2)
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_q(s: &str) -> Result<Q> {
    let t = s.trim();
    let parsed = match t.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| Error::Invalid(format!("bad rational '{s}'")))?;
            let d: BigInt = d.trim().parse().map_err(|_| Error::Invalid(format!("bad rational '{s}'")))?;
            if d.is_zero() {
                return Err(Error::Invalid(format!("zero denominator in '{s}'")));
            }
            Q::new(n, d)
        }
        None => Q::from_integer(t.parse().map_err(|_| Error::Invalid(format!("bad rational '{s}'")))?),
    };
    Ok(parsed)
}

/// Always `"p/q"`, including integers (`"3/1"`).
pub fn fmt_q(x: &Q) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

pub fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Floor as a rational integer.
pub fn floor(x: &Q) -> Q {
    x.floor()
}

/// The rational with the smallest denominator in the open interval
/// `(lo, hi)`; `hi = None` stands for `+∞`. Requires `lo < hi`.
pub fn simplest_between(lo: &Q, hi: Option<&Q>) -> Q {
    let fl = floor(lo);
    let next = &fl + Q::one();
    match hi {
        None => next,
        Some(hi) => {
            debug_assert!(lo < hi);
            if &next < hi {
                return next;
            }
            // lo and hi share the integer part fl, with hi ≤ fl + 1.
            if fl == *lo {
                // (fl, hi) with hi ≤ fl + 1: fl + 1/y, y ∈ (1/(hi − fl), ∞)
                let y = simplest_between(&(Q::one() / (hi - &fl)), None);
                return fl + Q::one() / y;
            }
            let y_lo = Q::one() / (hi - &fl);
            let y_hi = Q::one() / (lo - &fl);
            let y = simplest_between(&y_lo, Some(&y_hi));
            fl + Q::one() / y
        }
    }
}

pub fn abs(x: &Q) -> Q {
    x.abs()
}
