//! `ℝ` whose dense subset mixes the rationals with a finite registry of
//! computable reals, some of them deliberately undefined.

use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::basis::{Membership, Point};
use crate::kernel::{Fuel, Nat, SemiResult};
use crate::metric::rational::{format_rational, parse_rational, rational_code, rational_of, Q};
use crate::metric::MetricWorld;

/// Precision of the cached expansions of the built-in constants.
const MASTER_BITS: u32 = 4096;
const GUARD_BITS: u32 = 32;

/// One registry program.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Slot {
    Rational(Q),
    Pi,
    E,
    Sqrt2,
    /// Never produces an approximation.
    Divergent,
    /// `b_i`: answers 0 at precisions below `halts_below`, then diverges.
    /// It looks like the constant 0 to any bounded observer.
    PartialZero {
        halts_below: u32,
    },
}

impl Slot {
    pub fn is_total(&self) -> bool {
        matches!(self, Slot::Rational(_) | Slot::Pi | Slot::E | Slot::Sqrt2)
    }

    pub fn label(&self) -> String {
        match self {
            Slot::Rational(x) => format!("q:{}", format_rational(x)),
            Slot::Pi => "pi".into(),
            Slot::E => "e".into(),
            Slot::Sqrt2 => "sqrt2".into(),
            Slot::Divergent => "divergent".into(),
            Slot::PartialZero { halts_below } => format!("partial:{halts_below}"),
        }
    }

    /// A rational within `2^{-k}` of the value, if the program answers.
    pub fn approx(&self, k: u32) -> Option<Q> {
        match self {
            Slot::Rational(x) => Some(x.clone()),
            Slot::Pi => Some(constant_approx(pi_fixed, &PI, k)),
            Slot::E => Some(constant_approx(e_fixed, &E, k)),
            Slot::Sqrt2 => Some(constant_approx(sqrt2_fixed, &SQRT2, k)),
            Slot::Divergent => None,
            Slot::PartialZero { halts_below } => (k < *halts_below).then(Q::zero),
        }
    }
}

static PI: OnceLock<BigInt> = OnceLock::new();
static E: OnceLock<BigInt> = OnceLock::new();
static SQRT2: OnceLock<BigInt> = OnceLock::new();

/// `⌊v · 2^{k+2}⌋ / 2^{k+2}` read off a fixed master expansion, so the answer
/// at each precision never depends on call history.
fn constant_approx(fixed: fn(u32) -> BigInt, cache: &OnceLock<BigInt>, k: u32) -> Q {
    let out_bits = k + 2;
    if out_bits + 8 > MASTER_BITS {
        let n = fixed(out_bits + GUARD_BITS) >> GUARD_BITS as usize;
        return Q::new(n, BigInt::one() << out_bits as usize);
    }
    let master = cache.get_or_init(|| fixed(MASTER_BITS + GUARD_BITS));
    let shift = MASTER_BITS + GUARD_BITS - out_bits;
    Q::new(master >> shift as usize, BigInt::one() << out_bits as usize)
}

/// `atan(1/x) · 2^bits` by the alternating series, each term truncated.
fn atan_inv(x: u32, bits: u32) -> BigInt {
    let one = BigInt::one() << bits as usize;
    let x2 = BigInt::from(x) * BigInt::from(x);
    let mut power = one / BigInt::from(x);
    let mut sum = BigInt::zero();
    let mut i = 0u32;
    while !power.is_zero() {
        let term = &power / BigInt::from(2 * i + 1);
        if i.is_even() {
            sum += term;
        } else {
            sum -= term;
        }
        power /= &x2;
        i += 1;
    }
    sum
}

/// `π · 2^bits` with absolute error far below one unit at `bits − 16`.
fn pi_fixed(bits: u32) -> BigInt {
    let b = bits + 16;
    let v = atan_inv(5, b) * 16 - atan_inv(239, b) * 4;
    v >> 16usize
}

fn e_fixed(bits: u32) -> BigInt {
    let b = bits + 16;
    let mut term = BigInt::one() << b as usize;
    let mut sum = term.clone();
    let mut i = 1u32;
    while !term.is_zero() {
        term /= BigInt::from(i);
        sum += &term;
        i += 1;
    }
    sum >> 16usize
}

fn sqrt2_fixed(bits: u32) -> BigInt {
    let two = BigUint::from(2u32) << (2 * bits) as usize;
    BigInt::from(two.sqrt())
}

/// The registry world. Center code `2n` is the rational `c_Q(n)`; code
/// `2s + 1` is registry slot `s`, and codes past the registry are programs
/// that never answer.
#[derive(Clone, Debug)]
pub struct RegistryWorld {
    slots: Vec<Slot>,
}

impl RegistryWorld {
    pub fn new(slots: Vec<Slot>) -> RegistryWorld {
        RegistryWorld { slots }
    }

    /// `π, e, √2`.
    pub fn standard() -> RegistryWorld {
        RegistryWorld::new(vec![Slot::Pi, Slot::E, Slot::Sqrt2])
    }

    /// Parses the comma list of `--with`: `pi`, `e`, `sqrt2`, `q:<rational>`,
    /// `divergent[:<count>]`, `partial:<halting precision>`.
    pub fn from_list(list: &str) -> Result<RegistryWorld, String> {
        let mut slots = Vec::new();
        for item in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (head, arg) = match item.split_once(':') {
                Some((h, a)) => (h, Some(a)),
                None => (item, None),
            };
            match (head, arg) {
                ("pi", None) => slots.push(Slot::Pi),
                ("e", None) => slots.push(Slot::E),
                ("sqrt2", None) => slots.push(Slot::Sqrt2),
                ("q", Some(a)) => slots.push(Slot::Rational(
                    parse_rational(a).ok_or_else(|| format!("bad rational in `{item}`"))?,
                )),
                ("divergent", None) => slots.push(Slot::Divergent),
                ("divergent", Some(a)) => {
                    let n: usize = a.parse().map_err(|_| format!("bad count in `{item}`"))?;
                    slots.extend(std::iter::repeat_n(Slot::Divergent, n));
                }
                ("partial", Some(a)) => slots.push(Slot::PartialZero {
                    halts_below: a
                        .parse()
                        .map_err(|_| format!("bad precision in `{item}`"))?,
                }),
                _ => return Err(format!("unknown registry entry `{item}`")),
            }
        }
        Ok(RegistryWorld::new(slots))
    }

    pub fn slots(&self) -> &[Slot] {
        &self.slots
    }

    pub fn slot_code(slot: usize) -> Nat {
        Nat::from(2 * slot as u64 + 1)
    }

    pub fn rational_code(x: &Q) -> Nat {
        rational_code(x) << 1usize
    }

    /// Index of the first slot with this label.
    pub fn find(&self, label: &str) -> Option<usize> {
        self.slots.iter().position(|s| s.label() == label)
    }

    fn decode(&self, n: &Nat) -> Center<'_> {
        if n.is_even() {
            return Center::Rational(rational_of(&(n >> 1usize)));
        }
        let slot = (n >> 1usize).to_usize();
        match slot.and_then(|s| self.slots.get(s)) {
            Some(s) => Center::Slot(s),
            None => Center::Missing,
        }
    }
}

enum Center<'a> {
    Rational(Q),
    Slot(&'a Slot),
    Missing,
}

impl MetricWorld for RegistryWorld {
    fn id(&self) -> String {
        let labels: Vec<String> = self.slots.iter().map(Slot::label).collect();
        format!("R-registry[{}]", labels.join(","))
    }

    fn center_domain(&self, n: &Nat, _fuel: Fuel) -> SemiResult {
        SemiResult::from_bool(self.center_oracle(n))
    }

    fn center_oracle(&self, n: &Nat) -> bool {
        match self.decode(n) {
            Center::Rational(_) => true,
            Center::Slot(s) => s.is_total(),
            Center::Missing => false,
        }
    }

    fn center_approx(&self, n: &Nat, k: u32) -> Option<Q> {
        match self.decode(n) {
            Center::Rational(x) => Some(x),
            Center::Slot(s) => s.approx(k),
            Center::Missing => None,
        }
    }

    fn center_value(&self, n: &Nat) -> Option<Q> {
        match self.decode(n) {
            Center::Rational(x) => Some(x),
            Center::Slot(Slot::Rational(x)) => Some(x.clone()),
            _ => None,
        }
    }

    fn rational_center(&self, x: &Q) -> Option<Nat> {
        Some(RegistryWorld::rational_code(x))
    }

    fn point_approx(&self, p: &Point, k: u32) -> Option<Q> {
        match p {
            Point::Rational(x) => Some(x.clone()),
            Point::Registry(s) => self.slots.get(*s)?.approx(k),
            Point::Index(n) => self.center_approx(n, k),
        }
    }

    fn admits(&self, p: &Point) -> Membership {
        match p {
            Point::Rational(_) => Membership::In,
            Point::Registry(s) => match self.slots.get(*s) {
                Some(slot) if slot.is_total() => Membership::In,
                _ => Membership::Unknown,
            },
            Point::Index(n) => {
                if self.center_oracle(n) {
                    Membership::In
                } else {
                    Membership::Unknown
                }
            }
        }
    }

    fn exact_membership(&self) -> bool {
        false
    }

    fn parse_point(&self, s: &str) -> Option<Point> {
        if let Some(x) = parse_rational(s) {
            return Some(Point::Rational(x));
        }
        registry_slot(self, s).map(Point::Registry)
    }

    fn parse_center(&self, s: &str) -> Option<Nat> {
        if let Some(x) = parse_rational(s) {
            return Some(RegistryWorld::rational_code(&x));
        }
        registry_slot(self, s).map(RegistryWorld::slot_code)
    }

    fn describe_center(&self, n: &Nat) -> String {
        match self.decode(n) {
            Center::Rational(x) => format_rational(&x),
            Center::Slot(s) => s.label(),
            Center::Missing => format!("#{n}"),
        }
    }
}

/// `pi`, `e`, ... by label, or `reg:<slot>`.
fn registry_slot(world: &RegistryWorld, s: &str) -> Option<usize> {
    let s = s.trim();
    if let Some(idx) = s.strip_prefix("reg:") {
        let i: usize = idx.parse().ok()?;
        return (i < world.slots.len()).then_some(i);
    }
    world.find(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::rational::{pow2_neg, q};
    use num_traits::Signed;

    #[test]
    fn constants_are_accurate() {
        // 355/113 and 2721/1001 are within 3e-7 and 1.2e-4.
        let pi = Slot::Pi.approx(30).unwrap();
        assert!((pi - q(355, 113)).abs() < q(1, 1_000_000));
        let e = Slot::E.approx(20).unwrap();
        assert!((e - q(2721, 1001)).abs() < q(1, 1000));
        let r = Slot::Sqrt2.approx(40).unwrap();
        let sq = &r * &r;
        assert!((sq - q(2, 1)).abs() < pow2_neg(36));
    }

    #[test]
    fn approximants_are_consistent() {
        for slot in [Slot::Pi, Slot::E, Slot::Sqrt2, Slot::Rational(q(1, 3))] {
            for k in 0..=40 {
                let a = slot.approx(k).unwrap();
                let b = slot.approx(k + 1).unwrap();
                assert!(
                    (a - b).abs() <= pow2_neg(k + 1) * q(3, 1),
                    "{slot:?} at {k}"
                );
            }
        }
    }

    #[test]
    fn master_and_direct_expansions_agree() {
        let cached = Slot::Pi.approx(1000).unwrap();
        let direct = Q::new(
            pi_fixed(1002 + GUARD_BITS) >> GUARD_BITS as usize,
            BigInt::one() << 1002usize,
        );
        assert!((cached - direct).abs() <= pow2_neg(1001));
        let high = Slot::Pi.approx(MASTER_BITS).unwrap();
        assert!((high - Slot::Pi.approx(200).unwrap()).abs() <= pow2_neg(199));
    }

    #[test]
    fn divergent_slots_never_resolve() {
        let w = RegistryWorld::from_list("pi,e,divergent:3").unwrap();
        assert_eq!(w.slots().len(), 5);
        for s in 2..5 {
            let code = RegistryWorld::slot_code(s);
            assert_eq!(w.center_domain(&code, Fuel(u64::MAX)), SemiResult::NotYet);
            assert_eq!(w.center_approx(&code, 3), None);
        }
        assert!(!w.center_oracle(&RegistryWorld::slot_code(99)));
        assert!(w.center_oracle(&RegistryWorld::slot_code(0)));
    }

    #[test]
    fn partial_zero_looks_total_below_its_horizon() {
        let w = RegistryWorld::from_list("partial:12").unwrap();
        let code = RegistryWorld::slot_code(0);
        assert_eq!(w.center_approx(&code, 11), Some(Q::zero()));
        assert_eq!(w.center_approx(&code, 12), None);
        assert!(!w.center_oracle(&code));
    }

    #[test]
    fn parsing_and_labels() {
        let w = RegistryWorld::standard();
        assert_eq!(w.parse_point("pi"), Some(Point::Registry(0)));
        assert_eq!(w.parse_point("1/2"), Some(Point::Rational(q(1, 2))));
        assert_eq!(w.parse_center("e"), Some(Nat::from(3u32)));
        assert_eq!(w.parse_center("reg:2"), Some(Nat::from(5u32)));
        assert_eq!(
            w.describe_center(&RegistryWorld::rational_code(&q(1, 4))),
            "1/4"
        );
        assert!(RegistryWorld::from_list("tau").is_err());
    }

    #[test]
    fn distances_between_kinds() {
        let w = RegistryWorld::standard();
        let pi = RegistryWorld::slot_code(0);
        let three = RegistryWorld::rational_code(&q(3, 1));
        assert_eq!(w.exact_distance(&pi, &pi), Some(Q::zero()));
        assert_eq!(w.exact_distance(&pi, &three), None);
        let d = w.distance_approx(&pi, &three, 20).unwrap();
        assert!((d - q(1416, 10_000)).abs() < q(1, 10_000));
    }
}
