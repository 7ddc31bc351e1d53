//! The numbered set of approximation programs with `β(n) = {ν(n)}`.
//!
//! Program `n = ⟨a, t⟩` outputs `c_Q(a)` at every precision below `t mod 4096`
//! and `c_Q(a) + 2^{-t}` from there on (plain `c_Q(a)` when `t ≡ 0`). Two
//! programs agreeing on every approximation seen so far may still name
//! different reals, so equality is not semi-decidable.

use num_traits::{ToPrimitive, Zero};

use crate::basis::{FnInclusion, Membership, Point, Subbasis};
use crate::kernel::{unpair, Fuel, Nat, SemiResult};
use crate::metric::rational::{pow2_neg, q, rational_of, Q};

const PERIOD: u32 = 4096;

/// Precision at which the program changes its answer, or 0 for constants.
fn horizon(n: &Nat) -> (Q, u32) {
    let (a, t) = unpair(n);
    let t = (t % PERIOD).to_u32().unwrap_or(0);
    (rational_of(&a), t)
}

/// What program `n` outputs at precision `k`.
pub fn program_approx(n: &Nat, k: u32) -> Q {
    let (base, t) = horizon(n);
    if t == 0 || k < t {
        base
    } else {
        base + pow2_neg(t)
    }
}

/// `ν(n)`.
pub fn program_value(n: &Nat) -> Q {
    let (base, t) = horizon(n);
    if t == 0 {
        base
    } else {
        base + pow2_neg(t)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SingletonWorld {
    fuel: u64,
}

impl SingletonWorld {
    pub fn new(fuel: u64) -> SingletonWorld {
        SingletonWorld { fuel }
    }

    /// Set inclusion between singletons, i.e. equality of the named values.
    /// It has no semi-decision procedure.
    pub fn inclusion() -> FnInclusion {
        FnInclusion::new("singleton-inclusion", true, |a, b| {
            program_value(a) == program_value(b)
        })
    }

    /// The tempting brute-force test "approximations agree up to the fuel".
    /// It accepts distinct values at low fuel and withdraws at high fuel, so
    /// it is neither sound nor fuel-monotone.
    pub fn brute_force_equal(a: &Nat, b: &Nat, fuel: Fuel) -> SemiResult {
        let top = fuel.steps().min(PERIOD as u64 + 2) as u32;
        let agree = (0..top).all(|k| {
            let gap = program_approx(a, k) - program_approx(b, k);
            let gap = if gap < Q::zero() { -gap } else { gap };
            gap <= pow2_neg(k) * q(2, 1)
        });
        SemiResult::from_bool(agree && top > 0)
    }
}

impl Subbasis for SingletonWorld {
    fn id(&self) -> String {
        format!("singleton[F={}]", self.fuel)
    }

    fn domain_check(&self, _code: &Nat, _fuel: Fuel) -> SemiResult {
        SemiResult::Accept
    }

    fn domain_oracle(&self, _code: &Nat) -> bool {
        true
    }

    /// `In` only for identical programs, `Out` once approximations separate
    /// within the configured fuel, `Unknown` otherwise.
    fn member_test(&self, point: &Point, code: &Nat) -> Membership {
        let Point::Index(m) = point else {
            return Membership::Unknown;
        };
        if m == code {
            return Membership::In;
        }
        let top = self.fuel.min(PERIOD as u64 + 2) as u32;
        for k in 0..top {
            let gap = program_approx(m, k) - program_approx(code, k);
            let gap = if gap < Q::zero() { -gap } else { gap };
            if gap > pow2_neg(k) * q(2, 1) {
                return Membership::Out;
            }
        }
        Membership::Unknown
    }

    fn witness_points(&self, code: &Nat) -> Vec<Point> {
        vec![Point::Index(code.clone())]
    }

    fn describe(&self, code: &Nat) -> String {
        format!("{{nu{code}}}")
    }
}
