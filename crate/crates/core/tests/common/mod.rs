//! Reference decoders written from the coding formulas alone, without
//! calling the library's decoders, so tests compare two implementations.

#![allow(dead_code)]

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;

/// Largest `w` with `w(w+1)/2 ≤ c`, by bisection.
fn diagonal(c: &BigUint) -> BigUint {
    let tri = |w: &BigUint| (w * (w + 1u32)) >> 1usize;
    let (mut lo, mut hi) = (BigUint::zero(), BigUint::one());
    while tri(&hi) <= *c {
        hi <<= 1usize;
    }
    // tri(lo) <= c < tri(hi)
    while &hi - &lo > BigUint::one() {
        let mid = (&lo + &hi) >> 1usize;
        if tri(&mid) <= *c {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Cantor unpairing: `c = (n+m)(n+m+1)/2 + m`.
pub fn unpair(c: &BigUint) -> (BigUint, BigUint) {
    let w = diagonal(c);
    let m = c - ((&w * (&w + 1u32)) >> 1usize);
    let n = &w - &m;
    (n, m)
}

pub fn pair_u64(n: u64, m: u64) -> u128 {
    let s = n as u128 + m as u128;
    s * (s + 1) / 2 + m as u128
}

/// `c_Q(⟨sign, ⟨num, den − 1⟩⟩) = ±num/den`.
pub fn rational(code: &BigUint) -> Q {
    let (sign, rest) = unpair(code);
    let (num, den1) = unpair(&rest);
    let sign = if (&sign % 2u32).is_zero() {
        Sign::Plus
    } else {
        Sign::Minus
    };
    Q::new(BigInt::from_biguint(sign, num), BigInt::from(den1 + 1u32))
}

/// Ball code `⟨center, c_Q-code of radius⟩`.
pub fn ball(code: &BigUint) -> (BigUint, Q) {
    let (c, r) = unpair(code);
    (c, rational(&r))
}

/// Registry centers: even codes are rationals, odd codes are slots.
pub fn registry_rational(code: &BigUint) -> Option<Q> {
    (code % 2u32).is_zero().then(|| rational(&(code >> 1usize)))
}

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn pow2_neg(k: i64) -> Q {
    if k >= 0 {
        Q::new(BigInt::one(), BigInt::one() << k as usize)
    } else {
        Q::from_integer(BigInt::one() << (-k) as usize)
    }
}

pub fn abs(x: Q) -> Q {
    x.abs()
}

/// Checks `|value(p(n)) − x| < 2^{-n+1}` for every cell, returning the first
/// offending index.
pub fn cauchy_bound_violation(cells: &[Q], x: &Q) -> Option<usize> {
    cells
        .iter()
        .enumerate()
        .find(|(n, v)| abs(*v - x) >= pow2_neg(*n as i64 - 1))
        .map(|(n, _)| n)
}

/// Rational fixtures shared by the pipeline tests.
pub fn fixture_points() -> Vec<Q> {
    [
        (0, 1),
        (1, 1),
        (-1, 1),
        (1, 3),
        (-2, 7),
        (22, 7),
        (355, 113),
        (1, 1024),
        (-5, 3),
        (7, 8),
        (100, 1),
        (-1, 2),
        (3, 5),
        (13, 17),
        (2, 9),
        (-9, 11),
        (1, 6),
        (5, 12),
        (-7, 64),
        (123, 456),
    ]
    .iter()
    .map(|&(n, d)| q(n, d))
    .collect()
}

/// The fixture rendered as a point literal.
pub fn literal(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}
