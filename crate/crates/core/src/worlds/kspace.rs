//! The subspace `A = ⋃_{n∈K} [n − 1/2, n + 1/2] ∪ ⋃_{n∉K} {n}` of `ℝ`, with
//! `K` replaced by the programs of a step-counted registry that halt within
//! the configured fuel.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};

use crate::basis::{Membership, Point};
use crate::kernel::{Fuel, Name, Nat, SemiResult};
use crate::metric::rational::{q, rational_code, rational_of, Q};
use crate::metric::{ball_code, MetricWorld};

/// Steps program `i` takes before halting, or `None` if it runs forever.
///
/// Every fifth program (`i ≡ 2 mod 5`) loops; the others halt after a
/// pseudo-random number of steps below 1500.
pub fn halting_steps(i: u64) -> Option<u64> {
    if i % 5 == 2 {
        None
    } else {
        Some((i.wrapping_mul(7919)) % 1500 + 1)
    }
}

/// `i ∈ K_F`: program `i` halts within `fuel` steps.
pub fn halts_within(i: u64, fuel: u64) -> bool {
    halting_steps(i).is_some_and(|s| s <= fuel)
}

/// The K-space world at stratum `K_F`.
#[derive(Clone, Copy, Debug)]
pub struct KSpaceWorld {
    fuel: u64,
}

impl KSpaceWorld {
    pub fn new(fuel: u64) -> KSpaceWorld {
        KSpaceWorld { fuel }
    }

    pub fn fuel(&self) -> u64 {
        self.fuel
    }

    pub fn in_k(&self, n: u64) -> bool {
        halts_within(n, self.fuel)
    }

    /// Membership of a rational in `A` at this stratum.
    pub fn admits_rational(&self, x: &Q) -> bool {
        if x.is_integer() {
            return !x.is_negative();
        }
        // Integers within 1/2 of x: one, or two when x is a half-integer.
        let below = x.floor().to_integer();
        [below.clone(), below + 1]
            .into_iter()
            .filter(|n| (x - Q::from_integer(n.clone())).abs() <= q(1, 2))
            .filter_map(|n| n.to_u64())
            .any(|n| self.in_k(n))
    }
}

impl MetricWorld for KSpaceWorld {
    fn id(&self) -> String {
        format!("K-space[F={}]", self.fuel)
    }

    fn center_domain(&self, _n: &Nat, _fuel: Fuel) -> SemiResult {
        SemiResult::Accept
    }

    fn center_oracle(&self, _n: &Nat) -> bool {
        true
    }

    fn center_approx(&self, n: &Nat, _k: u32) -> Option<Q> {
        Some(rational_of(n))
    }

    fn center_value(&self, n: &Nat) -> Option<Q> {
        Some(rational_of(n))
    }

    fn rational_center(&self, x: &Q) -> Option<Nat> {
        Some(rational_code(x))
    }

    fn point_approx(&self, p: &Point, _k: u32) -> Option<Q> {
        match p {
            Point::Rational(x) => Some(x.clone()),
            _ => None,
        }
    }

    fn admits(&self, p: &Point) -> Membership {
        match p {
            Point::Rational(x) => Membership::from_bool(self.admits_rational(x)),
            _ => Membership::Unknown,
        }
    }

    fn exact_membership(&self) -> bool {
        false
    }
}

/// The constant name of `β(code of (n − 1/4, n + 1/4))`, a `ρ^min`-name of
/// `n` whenever `n ∉ K`: the ball meets `A` only in `n`.
pub fn kspace_min_name(n: u64) -> Name {
    let center = rational_code(&Q::from_integer(BigInt::from(n)));
    Name::constant(ball_code(&center, &q(1, 4)))
}
