//! The numbering `c_Q` of the rationals and a few exact dyadic helpers.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::kernel::{pair, unpair, Nat};

pub type Q = BigRational;

/// Code of `q`: `⟨sign, ⟨|numerator|, denominator − 1⟩⟩` in lowest terms.
pub fn rational_code(q: &Q) -> Nat {
    let sign = if q.is_negative() { 1u32 } else { 0 };
    let num = q.numer().magnitude().clone();
    let den = q.denom().magnitude().clone();
    pair(&Nat::from(sign), &pair(&num, &(den - 1u32)))
}

/// `c_Q`: total, and the inverse of [`rational_code`] on canonical codes.
pub fn rational_of(code: &Nat) -> Q {
    let (sign, rest) = unpair(code);
    let (num, den) = unpair(&rest);
    let sign = if sign.is_odd() {
        Sign::Minus
    } else {
        Sign::Plus
    };
    Q::new(BigInt::from_biguint(sign, num), BigInt::from(den + 1u32))
}

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn q_int(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// `2^{-k}`.
pub fn pow2_neg(k: u32) -> Q {
    Q::new(BigInt::one(), BigInt::one() << k as usize)
}

/// `2^{e}` for a possibly negative exponent.
pub fn pow2(e: i64) -> Q {
    if e >= 0 {
        Q::from_integer(BigInt::one() << e as usize)
    } else {
        pow2_neg((-e) as u32)
    }
}

/// `⌊x · 2^bits⌋ / 2^bits`.
pub fn floor_dyadic(x: &Q, bits: u32) -> Q {
    let scale = BigInt::one() << bits as usize;
    let scaled = (x * Q::from_integer(scale.clone())).floor();
    Q::new(scaled.to_integer(), scale)
}

/// Smallest `k` with `2^{-k} ≤ r` for positive `r`.
pub fn bits_below(r: &Q) -> u32 {
    debug_assert!(r.is_positive());
    let mut k = 0u32;
    // Jump close using bit lengths, then settle exactly.
    let nb = r.numer().bits() as i64;
    let db = r.denom().bits() as i64;
    if db > nb + 1 {
        k = (db - nb - 1) as u32;
    }
    while pow2_neg(k) > *r {
        k += 1;
    }
    while k > 0 && pow2_neg(k - 1) <= *r {
        k -= 1;
    }
    k
}

pub fn is_positive(x: &Q) -> bool {
    x.is_positive()
}

pub fn abs(x: &Q) -> Q {
    x.abs()
}

pub fn zero() -> Q {
    Q::zero()
}

/// Parses `p`, `p/q`, or a decimal like `-0.25`.
pub fn parse_rational(s: &str) -> Option<Q> {
    let s = s.trim();
    if let Some((p, d)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Q::new(p, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let negative = int.starts_with('-');
        let int_part: BigInt = if int.is_empty() || int == "-" {
            BigInt::zero()
        } else {
            int.parse().ok()?
        };
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let frac_part: BigInt = frac.parse().ok()?;
        let mag = int_part.abs() * &scale + frac_part;
        let v = Q::new(mag, scale);
        return Some(if negative { -v } else { v });
    }
    s.parse::<BigInt>().ok().map(Q::from_integer)
}

pub fn format_rational(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}
