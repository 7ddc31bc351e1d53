use num_bigint::BigInt;
use num_traits::Signed;

use crate::basis::{Membership, Point};
use crate::kernel::{Fuel, Nat, SemiResult};
use crate::metric::rational::{parse_rational, Q};
use crate::metric::MetricWorld;

/// `ℕ` with `d(i, j) = |i − j|` and `ν` the identity.
#[derive(Clone, Copy, Debug, Default)]
pub struct DiscreteWorld;

fn as_natural(x: &Q) -> Option<Nat> {
    (x.is_integer() && !x.is_negative()).then(|| x.to_integer().magnitude().clone())
}

impl DiscreteWorld {
    fn value(&self, p: &Point) -> Option<Q> {
        match p {
            Point::Index(n) => Some(Q::from_integer(BigInt::from(n.clone()))),
            Point::Rational(x) => as_natural(x).map(|_| x.clone()),
            Point::Registry(_) => None,
        }
    }
}

impl MetricWorld for DiscreteWorld {
    fn id(&self) -> String {
        "N-discrete".into()
    }

    fn center_domain(&self, _n: &Nat, _fuel: Fuel) -> SemiResult {
        SemiResult::Accept
    }

    fn center_oracle(&self, _n: &Nat) -> bool {
        true
    }

    fn center_approx(&self, n: &Nat, _k: u32) -> Option<Q> {
        self.center_value(n)
    }

    fn center_value(&self, n: &Nat) -> Option<Q> {
        Some(Q::from_integer(BigInt::from(n.clone())))
    }

    fn rational_center(&self, x: &Q) -> Option<Nat> {
        as_natural(x)
    }

    fn point_approx(&self, p: &Point, _k: u32) -> Option<Q> {
        self.value(p)
    }

    fn admits(&self, p: &Point) -> Membership {
        Membership::from_bool(self.value(p).is_some())
    }

    fn exact_membership(&self) -> bool {
        true
    }

    fn ball_member(&self, p: &Point, center: &Nat, radius: &Q) -> Membership {
        match (self.value(p), self.center_value(center)) {
            (Some(x), Some(c)) => Membership::from_bool((x - c).abs() < *radius),
            _ => Membership::Out,
        }
    }

    fn parse_point(&self, s: &str) -> Option<Point> {
        as_natural(&parse_rational(s)?).map(Point::Index)
    }
}
