//! Computable metric spaces, their ball numbering and strong inclusions, and
//! the realizers translating between Cauchy names and ball-based names.

pub mod rational;
mod translate;

use std::cmp::Ordering;
use std::sync::Arc;

use num_traits::{Signed, Zero};

use crate::basis::{Membership, Point, PrefixVerdict, StrongInclusion, Subbasis, DOMAIN_PROBE};
use crate::kernel::{pair, unpair, Fuel, Meter, Nat, SemiResult};
use crate::repr::StrongBasisCertificate;
use rational::{
    floor_dyadic, format_rational, parse_rational, pow2_neg, rational_code, rational_of, Q,
};

pub use translate::{cauchy_to_min, cauchy_to_si, max_to_cauchy, si_to_cauchy};

/// Precision, in bits, up to which test oracles refine approximations before
/// giving up on a comparison.
pub const ORACLE_BITS: u32 = 256;

/// Precision cap for semi-decisions. Queries past this precision repeat the
/// last one, so polling stays fuel-monotone.
pub const SEMI_BITS: u32 = 512;

/// A metric space `(X, A, ν, d)` whose dense subset `A` is numbered by a
/// possibly partial `ν`, with `d` computable on `A`.
pub trait MetricWorld: Send + Sync {
    fn id(&self) -> String;

    /// Fuel-monotone semi-decision of `n ∈ dom(ν)`.
    fn center_domain(&self, n: &Nat, fuel: Fuel) -> SemiResult;

    /// Ground truth of `n ∈ dom(ν)`, for oracles.
    fn center_oracle(&self, n: &Nat) -> bool;

    /// True when `n ∉ dom(ν)` is decidably known.
    fn center_refuted(&self, _n: &Nat) -> bool {
        false
    }

    /// A rational within `2^{-k}` of `ν(n)`, or `None` if `n` is not a
    /// resolved center.
    fn center_approx(&self, n: &Nat, k: u32) -> Option<Q>;

    /// `ν(n)` when it is a rational.
    fn center_value(&self, n: &Nat) -> Option<Q>;

    /// Code of the center `x` when rationals belong to the dense subset.
    fn rational_center(&self, x: &Q) -> Option<Nat>;

    /// A rational within `2^{-k}` of the point.
    fn point_approx(&self, p: &Point, k: u32) -> Option<Q>;

    /// Whether the point belongs to the space at all.
    fn admits(&self, _p: &Point) -> Membership {
        Membership::In
    }

    /// Whether membership of points in balls is exactly decidable, which is
    /// what enumerating complete lists of containing balls requires.
    fn exact_membership(&self) -> bool;

    /// Reads a point literal; rationals by default.
    fn parse_point(&self, s: &str) -> Option<Point> {
        parse_rational(s).map(Point::Rational)
    }

    /// Reads a center literal into a code of `A`.
    fn parse_center(&self, s: &str) -> Option<Nat> {
        self.rational_center(&parse_rational(s)?)
    }

    /// Cell `n` of the generated Cauchy name of `p`: a center strictly within
    /// `4^{-n}` of the point, so consecutive cells stay well inside the
    /// modulus. Rational points are truncated to `2n` binary digits.
    fn cauchy_code(&self, p: &Point, n: usize) -> Option<Nat> {
        let bits = 2 * n as u32;
        let c = match p {
            Point::Rational(x) => floor_dyadic(x, bits),
            _ => floor_dyadic(&self.point_approx(p, bits + 2)?, bits + 2),
        };
        self.rational_center(&c)
    }

    fn describe_center(&self, n: &Nat) -> String {
        match self.center_value(n) {
            Some(v) => format_rational(&v),
            None => format!("#{n}"),
        }
    }

    /// A rational `q` with `|q − d(ν(n), ν(m))| ≤ 2^{-k}`.
    fn distance_approx(&self, n: &Nat, m: &Nat, k: u32) -> Option<Q> {
        if let Some(d) = self.exact_distance(n, m) {
            return Some(d);
        }
        let a = self.center_approx(n, k + 1)?;
        let b = self.center_approx(m, k + 1)?;
        Some((a - b).abs())
    }

    /// The exact distance, where it is rational and known.
    fn exact_distance(&self, n: &Nat, m: &Nat) -> Option<Q> {
        if n == m && self.center_oracle(n) {
            return Some(Q::zero());
        }
        Some((self.center_value(n)? - self.center_value(m)?).abs())
    }

    /// Whether `p ∈ B(ν(center), radius)`.
    fn ball_member(&self, p: &Point, center: &Nat, radius: &Q) -> Membership {
        if let (Point::Rational(x), Some(c)) = (p, self.center_value(center)) {
            return Membership::from_bool((x - c).abs() < *radius);
        }
        let dist = |k: u32| -> Option<Q> {
            let x = self.point_approx(p, k + 1)?;
            let c = self.center_approx(center, k + 1)?;
            Some((x - c).abs())
        };
        match compare_approx(dist, radius, ORACLE_BITS) {
            Some(Ordering::Less) => Membership::In,
            Some(_) => Membership::Out,
            None => Membership::Unknown,
        }
    }
}

pub type WorldRef = Arc<dyn MetricWorld>;

/// Compares the value approximated by `f` (with `|f(k) − v| ≤ 2^{-k}`) against
/// `target`. Returns `None` if the approximations never separate them up to
/// `max_bits`, which happens in particular when they are equal.
pub fn compare_approx<F>(f: F, target: &Q, max_bits: u32) -> Option<Ordering>
where
    F: Fn(u32) -> Option<Q>,
{
    let mut k = 0;
    loop {
        let a = f(k)?;
        let eps = pow2_neg(k);
        if &a + &eps < *target {
            return Some(Ordering::Less);
        }
        if &a - &eps > *target {
            return Some(Ordering::Greater);
        }
        if k >= max_bits {
            return None;
        }
        k = (k * 2).clamp(k + 1, max_bits);
    }
}

/// Code of the ball `B(ν(center), radius)`.
pub fn ball_code(center: &Nat, radius: &Q) -> Nat {
    pair(center, &rational_code(radius))
}

/// Center code and radius of a ball code.
pub fn ball_parts(code: &Nat) -> (Nat, Q) {
    let (n, m) = unpair(code);
    (n, rational_of(&m))
}

/// The ball numbering `β(⟨n, m⟩) = B(ν(n), c_Q(m))` of a metric world.
#[derive(Clone)]
pub struct BallBasis {
    world: WorldRef,
}

impl BallBasis {
    pub fn new(world: WorldRef) -> BallBasis {
        BallBasis { world }
    }

    pub fn world(&self) -> &WorldRef {
        &self.world
    }
}

impl Subbasis for BallBasis {
    fn id(&self) -> String {
        format!("balls({})", self.world.id())
    }

    fn domain_check(&self, code: &Nat, fuel: Fuel) -> SemiResult {
        let (n, r) = ball_parts(code);
        if !r.is_positive() {
            return SemiResult::NotYet;
        }
        self.world.center_domain(&n, fuel)
    }

    fn refutes_domain(&self, code: &Nat) -> bool {
        let (n, r) = ball_parts(code);
        !r.is_positive() || self.world.center_refuted(&n)
    }

    fn domain_oracle(&self, code: &Nat) -> bool {
        let (n, r) = ball_parts(code);
        r.is_positive() && self.world.center_oracle(&n)
    }

    fn member_test(&self, point: &Point, code: &Nat) -> Membership {
        let (n, r) = ball_parts(code);
        if !r.is_positive() || self.world.center_refuted(&n) {
            return Membership::Out;
        }
        self.world
            .admits(point)
            .and(self.world.ball_member(point, &n, &r))
    }

    fn witness_points(&self, code: &Nat) -> Vec<Point> {
        let (n, r) = ball_parts(code);
        if !r.is_positive() {
            return Vec::new();
        }
        let Some(c) = self.world.center_value(&n) else {
            return Vec::new();
        };
        let mut pts = vec![Point::Rational(c.clone())];
        for shrink in [pow2_neg(4), pow2_neg(10)] {
            let off = &r * (Q::from_integer(1.into()) - shrink);
            pts.push(Point::Rational(&c + &off));
            pts.push(Point::Rational(&c - &off));
        }
        pts
    }

    fn describe(&self, code: &Nat) -> String {
        let (n, r) = ball_parts(code);
        format!(
            "B({},{})",
            self.world.describe_center(&n),
            format_rational(&r)
        )
    }
}

/// The metric strong inclusions `d(ν(n₁), ν(n₂)) + r₁ < r₂` (strict) and
/// `d(ν(n₁), ν(n₂)) + r₁ ≤ r₂` (non-strict).
///
/// Only the strict one is semi-decidable; only the non-strict one is
/// reflexive.
#[derive(Clone)]
pub struct MetricInclusion {
    world: WorldRef,
    strict: bool,
}

pub fn strong_incl_metric(world: WorldRef, strict: bool) -> MetricInclusion {
    MetricInclusion { world, strict }
}

impl MetricInclusion {
    pub fn is_strict(&self) -> bool {
        self.strict
    }

    fn accepts(&self, ord: Ordering) -> bool {
        if self.strict {
            ord == Ordering::Less
        } else {
            ord != Ordering::Greater
        }
    }
}

impl StrongInclusion for MetricInclusion {
    fn holds(&self, a: &Nat, b: &Nat) -> bool {
        let (n1, r1) = ball_parts(a);
        let (n2, r2) = ball_parts(b);
        if !r1.is_positive()
            || !r2.is_positive()
            || !self.world.center_oracle(&n1)
            || !self.world.center_oracle(&n2)
        {
            return false;
        }
        let bound = &r2 - &r1;
        if let Some(d) = self.world.exact_distance(&n1, &n2) {
            return self.accepts(d.cmp(&bound));
        }
        // Irrational distances never tie, so the refinement terminates unless
        // the oracle bound is hit.
        match compare_approx(
            |k| self.world.distance_approx(&n1, &n2, k),
            &bound,
            ORACLE_BITS,
        ) {
            Some(ord) => self.accepts(ord),
            None => !self.strict,
        }
    }

    fn semi(&self, a: &Nat, b: &Nat, fuel: Fuel) -> Option<SemiResult> {
        if !self.strict {
            return None;
        }
        let (n1, r1) = ball_parts(a);
        let (n2, r2) = ball_parts(b);
        if !r1.is_positive() || !r2.is_positive() || fuel.steps() == 0 {
            return Some(SemiResult::NotYet);
        }
        let bound = &r2 - &r1;
        let queries = fuel.steps().min(SEMI_BITS as u64 + 1) as u32;
        if let Some(d) = self.world.exact_distance(&n1, &n2) {
            // The test at precision k is monotone in k here, so the last
            // affordable query decides.
            let k = queries - 1;
            return Some(SemiResult::from_bool(d + pow2_neg(k) < bound));
        }
        for k in 0..queries {
            let Some(approx) = self.world.distance_approx(&n1, &n2, k) else {
                return Some(SemiResult::NotYet);
            };
            if approx + pow2_neg(k) < bound {
                return Some(SemiResult::Accept);
            }
        }
        Some(SemiResult::NotYet)
    }

    fn is_semi_decidable(&self) -> bool {
        self.strict
    }

    fn is_reflexive(&self) -> bool {
        !self.strict
    }

    fn label(&self) -> String {
        if self.strict {
            "metric-strict".into()
        } else {
            "metric-non-strict".into()
        }
    }
}

/// In a metric space every point has a strong neighborhood basis for the
/// strict metric inclusion: balls `B(y, s)` with `d(x, y) + s` arbitrarily
/// small.
pub fn strict_metric_certificate(world: &WorldRef) -> StrongBasisCertificate {
    StrongBasisCertificate::new(format!("shrinking balls in {}", world.id()))
}

/// Checks the Cauchy modulus `d(ν(p(i)), ν(p(j))) < 2^{-j}` for `i > j` on a
/// prefix, spending at most `fuel` distance queries.
pub fn validate_cauchy_prefix(
    prefix: &[Nat],
    world: &dyn MetricWorld,
    fuel: Fuel,
) -> PrefixVerdict {
    let mut meter = Meter::new(fuel);
    let mut unknown = false;
    for c in prefix {
        if world.center_refuted(c) {
            return PrefixVerdict::Violation;
        }
        if !world.center_domain(c, DOMAIN_PROBE).is_accept() {
            unknown = true;
        }
    }
    for j in 0..prefix.len() {
        let bound = pow2_neg(j as u32);
        for i in j + 1..prefix.len() {
            if let Some(d) = world.exact_distance(&prefix[i], &prefix[j]) {
                if d >= bound {
                    return PrefixVerdict::Violation;
                }
                continue;
            }
            let mut settled = false;
            let mut k = 0u32;
            while meter.tick().is_ok() && k <= SEMI_BITS {
                let Some(approx) = world.distance_approx(&prefix[i], &prefix[j], k) else {
                    break;
                };
                let eps = pow2_neg(k);
                if &approx - &eps >= bound {
                    return PrefixVerdict::Violation;
                }
                if &approx + &eps < bound {
                    settled = true;
                    break;
                }
                k += 1;
            }
            if !settled {
                unknown = true;
            }
        }
    }
    if unknown {
        PrefixVerdict::Unknown
    } else {
        PrefixVerdict::ConsistentSoFar
    }
}
