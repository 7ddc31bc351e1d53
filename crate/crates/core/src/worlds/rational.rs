use crate::basis::Point;
use crate::kernel::{Fuel, Nat, SemiResult};
use crate::metric::rational::{rational_code, rational_of, Q};
use crate::metric::MetricWorld;

/// `ℝ` with dense subset `ℚ` numbered by `c_Q`; balls are open intervals with
/// rational endpoints.
#[derive(Clone, Copy, Debug, Default)]
pub struct RationalWorld;

impl RationalWorld {
    pub fn code(x: &Q) -> Nat {
        rational_code(x)
    }
}

impl MetricWorld for RationalWorld {
    fn id(&self) -> String {
        "R-rational".into()
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

    fn admits(&self, p: &Point) -> crate::basis::Membership {
        match p {
            Point::Rational(_) => crate::basis::Membership::In,
            _ => crate::basis::Membership::Unknown,
        }
    }

    fn exact_membership(&self) -> bool {
        true
    }
}
