//! Pairing of naturals and the numbering of finite sets.

use std::collections::BTreeSet;
use std::sync::OnceLock;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

/// Codes, names and everything in between are arbitrary-precision naturals.
pub type Nat = BigUint;

/// Cantor pairing `(n + m)(n + m + 1)/2 + m`.
pub fn pair(n: &Nat, m: &Nat) -> Nat {
    let s = n + m;
    ((&s * (&s + 1u32)) >> 1usize) + m
}

/// Inverse of [`pair`].
pub fn unpair(c: &Nat) -> (Nat, Nat) {
    let w = ((c * 8u32 + 1u32).sqrt() - 1u32) >> 1usize;
    let t = (&w * (&w + 1u32)) >> 1usize;
    let m = c - t;
    let n = w - &m;
    (n, m)
}

/// Sets whose elements all lie below this bound are coded by their bitmask.
const BITMASK_WIDTH: u32 = 8;
const BITMASK_CODES: u32 = 1 << BITMASK_WIDTH;

/// Decodes a finite-set code.
///
/// Codes below 256 are bitmasks: `Δ_n` is the set of positions of the one bits
/// of `n`, so `Δ_5 = {0, 2}`. Larger codes enumerate, in gap-list order, the
/// sets that reach past position 7. With a pure bitmask a singleton `{c}`
/// would have code `2^c`, which is out of reach once `c` is itself a ball code.
pub fn finset_decode(n: &Nat) -> BTreeSet<Nat> {
    if let Some(small) = n.to_u32().filter(|v| *v < BITMASK_CODES) {
        return (0..BITMASK_WIDTH)
            .filter(|bit| small & (1 << bit) != 0)
            .map(Nat::from)
            .collect();
    }
    let mut v = n - BITMASK_CODES;
    for e in bitmask_gap_codes() {
        if *e <= v {
            v += 1u32;
        } else {
            break;
        }
    }
    gap_decode(&v)
}

/// Inverse of [`finset_decode`].
pub fn finset_encode<'a, I>(set: I) -> Nat
where
    I: IntoIterator<Item = &'a Nat>,
{
    let set: BTreeSet<&Nat> = set.into_iter().collect();
    let fits = set
        .iter()
        .next_back()
        .is_none_or(|max| max.to_u32().is_some_and(|m| m < BITMASK_WIDTH));
    if fits {
        let mask = set
            .iter()
            .fold(0u32, |acc, e| acc | (1 << e.to_u32().unwrap_or(0)));
        return Nat::from(mask);
    }
    let code = gap_encode(set.iter().copied());
    let skipped = bitmask_gap_codes().partition_point(|e| *e < code);
    code - skipped + BITMASK_CODES
}

/// Convenience for the common case of a singleton `{c}`.
pub fn finset_singleton(c: &Nat) -> Nat {
    finset_encode([c])
}

/// Sorted gap-list codes of all subsets of `{0..7}`; these are the values the
/// bitmask range already covers.
fn bitmask_gap_codes() -> &'static [Nat] {
    static CODES: OnceLock<Vec<Nat>> = OnceLock::new();
    CODES.get_or_init(|| {
        let mut codes: Vec<Nat> = (0..BITMASK_CODES)
            .map(|mask| {
                let set: Vec<Nat> = (0..BITMASK_WIDTH)
                    .filter(|bit| mask & (1 << bit) != 0)
                    .map(Nat::from)
                    .collect();
                gap_encode(set.iter())
            })
            .collect();
        codes.sort();
        codes
    })
}

// Gap-list coding: a set `e1 < e2 < ... < ek` becomes the gaps
// `e1, e2 - e1 - 1, ...`, each written in bijective binary, joined with a
// separator and read as a bijective base-3 numeral. The empty set is 0.

const DIGIT_ZERO: u8 = 1;
const DIGIT_ONE: u8 = 2;
const DIGIT_SEP: u8 = 3;

fn gap_encode<'a, I>(sorted: I) -> Nat
where
    I: IntoIterator<Item = &'a Nat>,
{
    let mut digits: Vec<u8> = Vec::new();
    let mut prev: Option<&Nat> = None;
    let mut any = false;
    for e in sorted {
        let gap = match prev {
            None => e.clone(),
            Some(p) => e - p - 1u32,
        };
        if any {
            digits.push(DIGIT_SEP);
        }
        push_bijective_binary(&gap, &mut digits);
        prev = Some(e);
        any = true;
    }
    if !any {
        return Nat::zero();
    }
    from_bijective_base3(&digits) + 1u32
}

fn gap_decode(code: &Nat) -> BTreeSet<Nat> {
    let mut set = BTreeSet::new();
    if code.is_zero() {
        return set;
    }
    let digits = to_bijective_base3(&(code - 1u32));
    let mut current: Option<Nat> = None;
    for part in digits.split(|d| *d == DIGIT_SEP) {
        let gap = read_bijective_binary(part);
        let e = match current {
            None => gap,
            Some(ref p) => p + gap + 1u32,
        };
        set.insert(e.clone());
        current = Some(e);
    }
    set
}

fn push_bijective_binary(g: &Nat, out: &mut Vec<u8>) {
    let v = g + 1u32;
    let bits = v.bits();
    for i in (0..bits - 1).rev() {
        out.push(if v.bit(i) { DIGIT_ONE } else { DIGIT_ZERO });
    }
}

fn read_bijective_binary(digits: &[u8]) -> Nat {
    let mut v = Nat::one();
    for d in digits {
        v <<= 1usize;
        if *d == DIGIT_ONE {
            v += 1u32;
        }
    }
    v - 1u32
}

fn from_bijective_base3(digits: &[u8]) -> Nat {
    // Fold in chunks of 3^19 to keep the big-number work linear-ish.
    const CHUNK: usize = 19;
    let mut acc = Nat::zero();
    for chunk in digits.chunks(CHUNK) {
        let mut small: u64 = 0;
        for d in chunk {
            small = small * 3 + u64::from(*d);
        }
        acc = acc * 3u64.pow(chunk.len() as u32) + small;
    }
    acc
}

fn to_bijective_base3(n: &Nat) -> Vec<u8> {
    let mut digits = Vec::new();
    let mut m = n.clone();
    while !m.is_zero() {
        let d = ((&m - 1u32) % 3u32).to_u8().unwrap_or(0) + 1;
        m = (m - d) / 3u32;
        digits.push(d);
    }
    digits.reverse();
    digits
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(v: u64) -> Nat {
        Nat::from(v)
    }

    fn set(vals: &[u64]) -> BTreeSet<Nat> {
        vals.iter().copied().map(n).collect()
    }

    #[test]
    fn pairing_examples() {
        assert_eq!(pair(&n(0), &n(0)), n(0));
        assert_eq!(pair(&n(1), &n(2)), n(8));
        assert_eq!(pair(&n(2), &n(1)), n(7));
        assert_eq!(unpair(&n(0)), (n(0), n(0)));
        assert_eq!(unpair(&n(8)), (n(1), n(2)));
        assert_eq!(unpair(&n(7)), (n(2), n(1)));
        assert_eq!(pair(&n(1), &n(1)), n(4));
    }

    #[test]
    fn unpair_by_row_search() {
        // Oracle: walk the Cantor diagonals.
        let mut code = 0u64;
        for diag in 0..60u64 {
            for m in 0..=diag {
                assert_eq!(unpair(&n(code)), (n(diag - m), n(m)));
                code += 1;
            }
        }
    }

    #[test]
    fn pairing_is_exact_on_huge_codes() {
        let big = Nat::from(3u32).pow(400);
        let c = pair(&big, &(&big + 17u32));
        assert_eq!(unpair(&c), (big.clone(), big + 17u32));
    }

    #[test]
    fn finset_examples() {
        assert_eq!(finset_decode(&n(0)), set(&[]));
        assert_eq!(finset_decode(&n(5)), set(&[0, 2]));
        assert_eq!(finset_decode(&n(6)), set(&[1, 2]));
        assert_eq!(finset_encode(set(&[]).iter()), n(0));
        assert_eq!(finset_encode(set(&[0, 2]).iter()), n(5));
        assert_eq!(finset_encode(set(&[3]).iter()), n(8));
    }

    #[test]
    fn bitmask_agrees_with_sum_of_powers() {
        for mask in 0u64..256 {
            let expect: BTreeSet<Nat> = (0..8).filter(|b| mask >> b & 1 == 1).map(n).collect();
            assert_eq!(finset_decode(&n(mask)), expect);
        }
    }

    #[test]
    fn large_codes_leave_the_bitmask_range() {
        assert_eq!(finset_decode(&n(256)), set(&[8]));
        let c = finset_singleton(&n(1_000_000));
        assert!(c >= n(256));
        assert_eq!(finset_decode(&c), set(&[1_000_000]));
    }

    #[test]
    fn singleton_of_huge_element_stays_small() {
        let huge = Nat::from(2u32).pow(150) + 12345u32;
        let c = finset_singleton(&huge);
        assert!(c.bits() < 300);
        let back = finset_decode(&c);
        assert_eq!(back.len(), 1);
        assert!(back.contains(&huge));
    }

    #[test]
    fn gap_coding_is_a_bijection_on_a_range() {
        for v in 0u64..5000 {
            assert_eq!(gap_encode(gap_decode(&n(v)).iter()), n(v));
        }
    }
}
