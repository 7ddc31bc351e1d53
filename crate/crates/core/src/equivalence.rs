//! Totalization of a partial subbasis numbering, and adapters between numbered
//! bases together with sampled checks of the equivalence conditions.

use std::sync::Arc;

use num_traits::{Signed, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::basis::{
    extend_to_sequences, InclusionRef, Membership, Point, Report, StrongInclusion, Subbasis,
    SubbasisRef, Violation, ViolationKind,
};
use crate::kernel::{finset_decode, finset_encode, Fuel, Meter, Name, Nat, SemiResult, Stall};
use crate::metric::rational::{bits_below, floor_dyadic, pow2, pow2_neg, q, rational_code, Q};
use crate::metric::{ball_code, ball_parts, BallBasis, MetricWorld, WorldRef, ORACLE_BITS};
use crate::repr::Translator;

/// `β̃`: `β̃(n) = β(n)` on `dom(β)` and `∅` elsewhere. Every code is valid.
pub struct TotalizedSubbasis {
    base: SubbasisRef,
}

impl TotalizedSubbasis {
    pub fn base(&self) -> &SubbasisRef {
        &self.base
    }
}

impl Subbasis for TotalizedSubbasis {
    fn id(&self) -> String {
        format!("totalized({})", self.base.id())
    }

    fn domain_check(&self, _code: &Nat, _fuel: Fuel) -> SemiResult {
        SemiResult::Accept
    }

    fn domain_oracle(&self, _code: &Nat) -> bool {
        true
    }

    fn member_test(&self, point: &Point, code: &Nat) -> Membership {
        if self.base.domain_oracle(code) {
            self.base.member_test(point, code)
        } else {
            Membership::Out
        }
    }

    fn witness_points(&self, code: &Nat) -> Vec<Point> {
        if self.base.domain_oracle(code) {
            self.base.witness_points(code)
        } else {
            Vec::new()
        }
    }

    fn describe(&self, code: &Nat) -> String {
        if self.base.domain_oracle(code) {
            self.base.describe(code)
        } else {
            "∅".into()
        }
    }
}

/// `n ⊆̊′ m ⟺ (n, m ∈ dom(β) ∧ n ⊆̊ m) ∨ n = m`.
///
/// There is no semi-decision procedure: deciding the first clause would
/// require confirming membership in `dom(β)`.
pub struct TotalizedInclusion {
    si: InclusionRef,
    base: SubbasisRef,
}

impl StrongInclusion for TotalizedInclusion {
    fn holds(&self, n: &Nat, m: &Nat) -> bool {
        n == m || (self.base.domain_oracle(n) && self.base.domain_oracle(m) && self.si.holds(n, m))
    }

    /// The `n = m` clause makes the relation reflexive on every code.
    fn is_reflexive(&self) -> bool {
        true
    }

    fn label(&self) -> String {
        format!("totalized({})", self.si.label())
    }
}

pub fn totalize(si: InclusionRef, base: SubbasisRef) -> (TotalizedSubbasis, TotalizedInclusion) {
    (
        TotalizedSubbasis { base: base.clone() },
        TotalizedInclusion { si, base },
    )
}

/// The obvious candidate for a semi-decision of `⊆̊′`: poll the base
/// procedure and fall back to code equality. It ignores whether the codes are
/// in `dom(β)`, which is where it goes wrong.
pub fn naive_totalized_semi(si: &dyn StrongInclusion, n: &Nat, m: &Nat, fuel: Fuel) -> SemiResult {
    if n == m || si.semi(n, m, fuel) == Some(SemiResult::Accept) {
        SemiResult::Accept
    } else {
        SemiResult::NotYet
    }
}

/// A map from finite sequences of `β₂`-codes to finite sequences of
/// `β₁`-codes.
pub trait Adapter: Send + Sync {
    fn map(&self, seq: &[Nat]) -> Vec<Nat>;

    fn label(&self) -> String;
}

pub type AdapterRef = Arc<dyn Adapter>;

pub struct IdentityAdapter;

impl Adapter for IdentityAdapter {
    fn map(&self, seq: &[Nat]) -> Vec<Nat> {
        seq.to_vec()
    }

    fn label(&self) -> String {
        "identity".into()
    }
}

/// Rational balls into the registry world: center `n` becomes `2n`.
pub struct RationalToCreal;

impl RationalToCreal {
    pub fn embed(code: &Nat) -> Nat {
        let (n, m) = crate::kernel::unpair(code);
        crate::kernel::pair(&(n << 1usize), &m)
    }
}

impl Adapter for RationalToCreal {
    fn map(&self, seq: &[Nat]) -> Vec<Nat> {
        seq.iter().map(RationalToCreal::embed).collect()
    }

    fn label(&self) -> String {
        "rational-to-creal".into()
    }
}

/// Registry balls to rational oversets. A ball `B(c, r)` in a sequence of
/// length `len` is read at precision `k = max(len, ⌈log₂(4/r)⌉)` and becomes
/// `B(a, r + 2^{1−k})` with `|a − c| ≤ 2^{-k}`. The extra precision for small
/// balls keeps the slack below a quarter of the radius, which the uniform
/// condition needs for short sequences.
pub struct CrealToRational {
    world: WorldRef,
}

impl CrealToRational {
    pub fn new(world: WorldRef) -> CrealToRational {
        CrealToRational { world }
    }

    pub fn precision(len: usize, radius: &Q) -> u32 {
        (len as u32).max(bits_below(&(radius / q(4, 1))))
    }
}

impl Adapter for CrealToRational {
    fn map(&self, seq: &[Nat]) -> Vec<Nat> {
        seq.iter()
            .filter_map(|code| {
                let (c, r) = ball_parts(code);
                if !r.is_positive() || !self.world.center_oracle(&c) {
                    return None;
                }
                let k = CrealToRational::precision(seq.len(), &r);
                let a = self.world.center_approx(&c, k)?;
                Some(ball_code(&rational_code(&a), &(r + pow2(1 - k as i64))))
            })
            .collect()
    }

    fn label(&self) -> String {
        "creal-to-rational".into()
    }
}

/// Both directions between the rational and registry ball numberings.
pub fn rational_vs_creal_adapters(registry: WorldRef) -> (RationalToCreal, CrealToRational) {
    (RationalToCreal, CrealToRational::new(registry))
}

/// An adapter from a closure, for fixtures.
pub struct FnAdapter<F> {
    label: String,
    f: F,
}

impl<F> FnAdapter<F>
where
    F: Fn(&[Nat]) -> Vec<Nat> + Send + Sync,
{
    pub fn new(label: impl Into<String>, f: F) -> FnAdapter<F> {
        FnAdapter {
            label: label.into(),
            f,
        }
    }
}

impl<F> Adapter for FnAdapter<F>
where
    F: Fn(&[Nat]) -> Vec<Nat> + Send + Sync,
{
    fn map(&self, seq: &[Nat]) -> Vec<Nat> {
        (self.f)(seq)
    }

    fn label(&self) -> String {
        self.label.clone()
    }
}

/// Applies the adapter to every initial segment of the input name. Its
/// entries are flattened into one code sequence, and the image of each
/// segment becomes one induced code.
pub fn translation_from_adapter(
    adapter: AdapterRef,
    si1: &InclusionRef,
    si2: &InclusionRef,
) -> Translator {
    let label = format!(
        "adapt[{}:{}->{}]",
        adapter.label(),
        si2.label(),
        si1.label()
    );
    Translator::new(label, move |input: &Name| {
        let adapter = adapter.clone();
        let input = input.clone();
        let mut flat: Vec<Nat> = Vec::new();
        let mut read = 0usize;
        Name::from_source(move |n: usize, meter: &mut Meter| {
            while read <= n {
                let cell = input.try_at(read, meter)?;
                flat.extend(finset_decode(&cell));
                read += 1;
            }
            Ok(finset_encode(&adapter.map(&flat)))
        })
    })
}

/// The non-uniform condition along one sequence: the first `k` such that the
/// image of every initial segment of length at least `k` (up to the sequence
/// length) is strongly included in `d`.
pub fn nonuniform_threshold(
    adapter: &dyn Adapter,
    si1: InclusionRef,
    seq: &[Nat],
    d: &Nat,
) -> Option<usize> {
    let rel = extend_to_sequences(si1);
    let target = [d.clone()];
    let ok: Vec<bool> = (1..=seq.len())
        .map(|n| rel.holds(&adapter.map(&seq[..n]), &target))
        .collect();
    let last_bad = ok.iter().rposition(|b| !b);
    match last_bad {
        None => Some(1),
        Some(i) if i + 1 < ok.len() => Some(i + 2),
        Some(_) => None,
    }
}

/// Worlds and relations for checking an adapter from `β₂` (source) to `β₁`
/// (target).
#[derive(Clone)]
pub struct AdapterSetup {
    pub src: WorldRef,
    pub dst: WorldRef,
    pub si_src: InclusionRef,
    pub si_dst: InclusionRef,
    /// Refinements sampled per `(x, d)` pair.
    pub refinements: usize,
    /// Extra centers used for coarse balls in refinements, such as registry
    /// slots.
    pub extra_centers: Vec<Nat>,
    pub seed: u64,
}

/// Upper bound on `d(x, ν(c))` tighter than `r`, found by refining, or `None`
/// when the point is not confirmed inside `B(ν(c), r)`.
fn distance_bound(world: &dyn MetricWorld, x: &Point, c: &Nat, r: &Q) -> Option<Q> {
    if let (Point::Rational(x), Some(v)) = (x, world.center_value(c)) {
        let d = (x - v).abs();
        return (d < *r).then_some(d);
    }
    let mut k = 4;
    while k <= ORACLE_BITS {
        let a = world.point_approx(x, k + 1)?;
        let b = world.center_approx(c, k + 1)?;
        let upper = (a - b).abs() + pow2_neg(k);
        if upper < *r {
            return Some(upper);
        }
        k *= 2;
    }
    None
}

/// A rational within `eps` of the point (exact for rational points).
fn rational_near(world: &dyn MetricWorld, x: &Point, eps: &Q) -> Option<Q> {
    if let Point::Rational(x) = x {
        return Some(x.clone());
    }
    let k = bits_below(eps) + 1;
    Some(floor_dyadic(&world.point_approx(x, k)?, k))
}

fn dyadic_fraction(rng: &mut StdRng, lo: i64, hi: i64) -> Q {
    q(rng.random_range(lo..=hi), 64)
}

/// Checks the uniform conditions on a sample of `(x, d)` with `x ∈ β₁(d)`.
///
/// The witness for `(x, d)` is the single ball `B(x̃, m/2)` of the source
/// world, where `m` bounds the margin of `x` inside `d` from below and `x̃`
/// is within `m/16` of `x`. Sampled refinements contain one ball strictly
/// inside the witness and up to four coarse balls, all containing `x`. Each
/// refinement must map to an overset (each point in all its balls lies in all
/// image balls) whose image is strongly included in `d`.
pub fn check_adapter(
    adapter: &dyn Adapter,
    setup: &AdapterSetup,
    sample: &[(Point, Nat)],
) -> Report {
    let mut report = Report::default();
    let src_basis = BallBasis::new(setup.src.clone());
    let dst_basis = BallBasis::new(setup.dst.clone());
    let src_rel = extend_to_sequences(setup.si_src.clone());
    let dst_rel = extend_to_sequences(setup.si_dst.clone());
    let mut rng = StdRng::seed_from_u64(setup.seed);

    for (x, d) in sample {
        if dst_basis.member_test(x, d) != Membership::In {
            report.skipped += 1;
            continue;
        }
        let (cd, rd) = ball_parts(d);
        let Some(dist) = distance_bound(setup.dst.as_ref(), x, &cd, &rd) else {
            report.skipped += 1;
            continue;
        };
        let m = &rd - dist;
        let eps = &m / q(16, 1);
        let (Some(xq), true) = (rational_near(setup.src.as_ref(), x, &eps), m.is_positive()) else {
            report.skipped += 1;
            continue;
        };
        let Some(xq_code) = setup.src.rational_center(&xq) else {
            report.push(Violation::new(ViolationKind::Undefined, d.clone()).at_point(x));
            continue;
        };
        let half = &m / q(2, 1);
        let witness = vec![ball_code(&xq_code, &half)];
        let err = if matches!(x, Point::Rational(_)) {
            Q::zero()
        } else {
            eps.clone()
        };

        for _ in 0..setup.refinements {
            let mut seq = Vec::new();
            // The ball inside the witness.
            let r1 = &half * dyadic_fraction(&mut rng, 16, 48);
            let slack = (&r1 - &err).min(&half - &r1);
            let c1 = &xq + &slack * dyadic_fraction(&mut rng, -63, 63);
            let Some(c1_code) = setup.src.rational_center(&c1) else {
                continue;
            };
            seq.push(ball_code(&c1_code, &r1));
            for _ in 0..rng.random_range(0..=4usize) {
                let use_extra = !setup.extra_centers.is_empty() && rng.random_bool(0.3);
                let code = if use_extra {
                    let c = &setup.extra_centers[rng.random_range(0..setup.extra_centers.len())];
                    let Some(b) = rough_distance(setup.src.as_ref(), x, c) else {
                        continue;
                    };
                    ball_code(c, &(b + dyadic_fraction(&mut rng, 1, 64)))
                } else {
                    let off = dyadic_fraction(&mut rng, -128, 128);
                    let r = off.abs() + &err + dyadic_fraction(&mut rng, 1, 64);
                    let Some(c) = setup.src.rational_center(&(&xq + off)) else {
                        continue;
                    };
                    ball_code(&c, &r)
                };
                let at = rng.random_range(0..=seq.len());
                seq.insert(at, code);
            }
            debug_assert!(src_rel.holds(&seq, &witness));
            if seq
                .iter()
                .any(|b| src_basis.member_test(x, b) != Membership::In)
            {
                report.skipped += 1;
                continue;
            }

            let image = adapter.map(&seq);
            let mut probes: Vec<Point> = vec![x.clone()];
            for b in &seq {
                probes.extend(src_basis.witness_points(b));
            }
            for p in &probes {
                let inside = seq.iter().fold(Membership::In, |acc, b| {
                    acc.and(src_basis.member_test(p, b))
                });
                if inside != Membership::In {
                    continue;
                }
                let out = image.iter().fold(Membership::In, |acc, b| {
                    acc.and(dst_basis.member_test(p, b))
                });
                match out {
                    Membership::Out => {
                        report.push(
                            Violation::new(ViolationKind::Overset, finset_encode(&seq))
                                .with_b(finset_encode(&image))
                                .at_point(p),
                        );
                        break;
                    }
                    Membership::Unknown => report.skipped += 1,
                    Membership::In => {}
                }
            }
            if !dst_rel.holds(&image, std::slice::from_ref(d)) {
                report.push(
                    Violation::new(ViolationKind::StrongBasis, d.clone())
                        .with_b(finset_encode(&image))
                        .at_point(x),
                );
                break;
            }
        }
    }
    report
}

/// Upper bound on `d(x, ν(c))` to within about `2^{-20}`.
fn rough_distance(world: &dyn MetricWorld, x: &Point, c: &Nat) -> Option<Q> {
    let a = world.point_approx(x, 22)?;
    let b = world.center_approx(c, 22)?;
    Some((a - b).abs() + pow2_neg(20))
}

/// Lacombe condition on a sample: the cover of `B₁`, a stream of `β₂`-codes,
/// consists of subsets of `B₁` (probed at their witness points) and its first
/// `depth` entries reach every sampled point of `B₁`.
pub fn lacombe_adapter_check(
    cover: &dyn Fn(&Nat) -> Name,
    b1: &dyn Subbasis,
    b2: &dyn Subbasis,
    codes: &[Nat],
    points: &[Point],
    depth: usize,
) -> Report {
    let mut report = Report::default();
    for code in codes {
        let (listed, stall) = cover(code).partial_prefix(depth, &mut Meter::unbounded());
        if stall.is_some() && listed.is_empty() {
            report.push(Violation::new(ViolationKind::Undefined, code.clone()));
            continue;
        }
        for piece in &listed {
            for p in b2.witness_points(piece) {
                if b2.member_test(&p, piece) != Membership::In {
                    continue;
                }
                match b1.member_test(&p, code) {
                    Membership::Out => {
                        report.push(
                            Violation::new(ViolationKind::Subset, code.clone())
                                .with_b(piece.clone())
                                .at_point(&p),
                        );
                        break;
                    }
                    Membership::Unknown => report.skipped += 1,
                    Membership::In => {}
                }
            }
        }
        let mut probes = points.to_vec();
        probes.extend(b1.witness_points(code));
        for p in &probes {
            match b1.member_test(p, code) {
                Membership::In => {}
                Membership::Out => continue,
                Membership::Unknown => {
                    report.skipped += 1;
                    continue;
                }
            }
            let hits: Vec<Membership> = listed.iter().map(|b| b2.member_test(p, b)).collect();
            if hits.contains(&Membership::In) {
                continue;
            }
            if hits.contains(&Membership::Unknown) {
                report.skipped += 1;
            } else {
                report.push(Violation::new(ViolationKind::Cover, code.clone()).at_point(p));
            }
        }
    }
    report
}

/// The cover of a rational ball by its own image in the registry world.
pub fn embedding_cover(code: &Nat) -> Name {
    Name::constant(RationalToCreal::embed(code))
}

/// The cover of a registry ball `B(c, r)` by rational balls
/// `B(a_k, r − 2^{-k})`, `|a_k − c| ≤ 2^{-k}`, for `k` from the first
/// precision with `2^{-k} < r`.
pub fn creal_rational_cover(world: WorldRef) -> impl Fn(&Nat) -> Name {
    move |code: &Nat| {
        let (c, r) = ball_parts(code);
        let w = world.clone();
        if !r.is_positive() {
            return Name::from_prefix(Vec::new());
        }
        let start = bits_below(&r) + 1;
        Name::from_source(move |n: usize, _meter: &mut Meter| {
            let k = start + n as u32;
            let a = w
                .center_approx(&c, k)
                .ok_or_else(|| Stall::BadInput(format!("center of {c} has no approximation")))?;
            Ok(ball_code(&rational_code(&a), &(&r - pow2_neg(k))))
        })
    }
}

/// Nogina condition on a sample of `(x, B₁, Cauchy prefix of x)`: the
/// selected `B₂` contains `x` and is a subset of `B₁`.
pub fn nogina_adapter_check(
    selector: &dyn Fn(&Nat, &[Nat]) -> Option<Nat>,
    b1: &dyn Subbasis,
    b2: &dyn Subbasis,
    sample: &[(Point, Nat, Vec<Nat>)],
) -> Report {
    let mut report = Report::default();
    for (x, big, prefix) in sample {
        if b1.member_test(x, big) != Membership::In {
            report.skipped += 1;
            continue;
        }
        let Some(small) = selector(big, prefix) else {
            report.push(Violation::new(ViolationKind::Undefined, big.clone()).at_point(x));
            continue;
        };
        match b2.member_test(x, &small) {
            Membership::Out => {
                report.push(
                    Violation::new(ViolationKind::Containment, big.clone())
                        .with_b(small.clone())
                        .at_point(x),
                );
                continue;
            }
            Membership::Unknown => report.skipped += 1,
            Membership::In => {}
        }
        for p in b2.witness_points(&small) {
            if b2.member_test(&p, &small) == Membership::In
                && b1.member_test(&p, big) == Membership::Out
            {
                report.push(
                    Violation::new(ViolationKind::Subset, big.clone())
                        .with_b(small.clone())
                        .at_point(&p),
                );
                break;
            }
        }
    }
    report
}

/// From a Cauchy prefix `p` of `x` and `B(c, r) ∋ x`, selects
/// `B(ν(p(k+1)), 2^{-k})` for the first `k` with
/// `d(ν(p(k+1)), c) + 2^{-k} ≤ r`.
pub fn cauchy_selector(world: WorldRef) -> impl Fn(&Nat, &[Nat]) -> Option<Nat> {
    move |big: &Nat, prefix: &[Nat]| {
        let (c, r) = ball_parts(big);
        (0..prefix.len().saturating_sub(1)).find_map(|k| {
            let center = &prefix[k + 1];
            let eps = pow2_neg(k as u32);
            let d = world.exact_distance(center, &c)?;
            (d + &eps <= r).then(|| ball_code(center, &eps))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{check_axioms, validate_prefix, PrefixVerdict};
    use crate::metric::rational::rational_of;
    use crate::metric::{si_to_cauchy, strong_incl_metric};
    use crate::repr::{Representation, RepresentationKind};
    use crate::worlds::{si_name, RationalWorld, RegistryWorld};

    fn rational() -> WorldRef {
        Arc::new(RationalWorld)
    }

    fn registry(list: &str) -> WorldRef {
        Arc::new(RegistryWorld::from_list(list).unwrap())
    }

    fn rb(c: Q, r: Q) -> Nat {
        ball_code(&rational_code(&c), &r)
    }

    fn strict(w: &WorldRef) -> InclusionRef {
        Arc::new(strong_incl_metric(w.clone(), true))
    }

    #[test]
    fn totalized_relation_clauses() {
        let w = registry("pi,divergent");
        let base: SubbasisRef = Arc::new(BallBasis::new(w.clone()));
        let (tb, ti) = totalize(strict(&w), base);
        let div = ball_code(&RegistryWorld::slot_code(1), &q(1, 1));
        let div2 = ball_code(&RegistryWorld::slot_code(1), &q(2, 1));
        let small = ball_code(&RegistryWorld::rational_code(&q(0, 1)), &q(1, 2));
        let big = ball_code(&RegistryWorld::rational_code(&q(0, 1)), &q(1, 1));
        assert!(ti.holds(&div, &div));
        assert!(!ti.holds(&small, &div2));
        assert!(!ti.holds(&div, &div2));
        assert!(ti.holds(&small, &big));
        assert!(ti.semi(&small, &big, Fuel(100)).is_none());
        assert!(ti.is_reflexive());
        assert_eq!(
            tb.member_test(&Point::Rational(q(0, 1)), &div),
            Membership::Out
        );
        assert_eq!(tb.domain_check(&div, Fuel(1)), SemiResult::Accept);
    }

    #[test]
    fn naive_semi_accepts_into_an_empty_set() {
        // b_i answers 0 up to precision 40 and then diverges, so it is not in
        // the domain and its balls denote the empty set after totalization.
        let w = registry("partial:40");
        let base: SubbasisRef = Arc::new(BallBasis::new(w.clone()));
        let si = strict(&w);
        let (_, ti) = totalize(si.clone(), base);
        let unit = ball_code(&RegistryWorld::rational_code(&q(0, 1)), &q(1, 1));
        let bi = ball_code(&RegistryWorld::slot_code(0), &q(2, 1));
        assert_eq!(
            naive_totalized_semi(si.as_ref(), &unit, &bi, Fuel(8)),
            SemiResult::Accept
        );
        assert!(!ti.holds(&unit, &bi));
    }

    #[test]
    fn adapters_map_as_documented() {
        let unit = rb(q(0, 1), q(1, 1));
        let creal = RationalToCreal.map(std::slice::from_ref(&unit));
        assert_eq!(
            creal,
            vec![ball_code(&RegistryWorld::rational_code(&q(0, 1)), &q(1, 1))]
        );

        let w = registry("pi");
        let down = CrealToRational::new(w.clone());
        let pi_ball = ball_code(&RegistryWorld::slot_code(0), &q(1, 4));
        let seq = vec![pi_ball.clone(); 5];
        let out = down.map(&seq);
        let (c, r) = ball_parts(&out[0]);
        assert_eq!(r, q(1, 4) + pow2_neg(4));
        let pi = crate::worlds::Slot::Pi.approx(60).unwrap();
        assert!((rational_of(&c) - &pi).abs() <= pow2_neg(5));
        assert!((rational_of(&c) - &pi).abs() + q(1, 4) < r);
    }

    fn rational_sample(
        rng: &mut StdRng,
        n: usize,
        centers: &dyn Fn(&mut StdRng) -> Nat,
    ) -> Vec<(Point, Nat)> {
        let mut out = Vec::new();
        while out.len() < n {
            let x = q(rng.random_range(-200..=200), rng.random_range(1..=32));
            let c = centers(rng);
            let r = q(rng.random_range(1..=400), 64);
            let d = ball_code(&c, &r);
            out.push((Point::Rational(x), d));
        }
        out
    }

    #[test]
    fn identity_and_rational_creal_adapters_pass() {
        let rat = rational();
        let reg = registry("pi,e");
        let mut rng = StdRng::seed_from_u64(7);
        let setup = AdapterSetup {
            src: rat.clone(),
            dst: rat.clone(),
            si_src: strict(&rat),
            si_dst: strict(&rat),
            refinements: 4,
            extra_centers: vec![],
            seed: 1,
        };
        let sample = rational_sample(&mut rng, 40, &|r| {
            rational_code(&q(r.random_range(-100..=100), 16))
        });
        let report = check_adapter(&IdentityAdapter, &setup, &sample);
        assert!(report.passed(), "{}", report.render());

        let up = AdapterSetup {
            dst: reg.clone(),
            si_dst: strict(&reg),
            ..setup.clone()
        };
        let sample = rational_sample(&mut rng, 40, &|r| {
            if r.random_bool(0.5) {
                RegistryWorld::slot_code(r.random_range(0..2))
            } else {
                RegistryWorld::rational_code(&q(r.random_range(-100..=100), 16))
            }
        });
        let report = check_adapter(&RationalToCreal, &up, &sample);
        assert!(report.passed(), "{}", report.render());

        let down = AdapterSetup {
            src: reg.clone(),
            dst: rat.clone(),
            si_src: strict(&reg),
            si_dst: strict(&rat),
            extra_centers: vec![RegistryWorld::slot_code(0), RegistryWorld::slot_code(1)],
            ..setup
        };
        let sample = rational_sample(&mut rng, 40, &|r| {
            rational_code(&q(r.random_range(-100..=100), 16))
        });
        let report = check_adapter(&CrealToRational::new(reg), &down, &sample);
        assert!(report.passed(), "{}", report.render());
    }

    #[test]
    fn corrupted_adapters_are_caught() {
        let rat = rational();
        let setup = AdapterSetup {
            src: rat.clone(),
            dst: rat.clone(),
            si_src: strict(&rat),
            si_dst: strict(&rat),
            refinements: 3,
            extra_centers: vec![],
            seed: 3,
        };
        let sample = vec![(Point::Rational(q(1, 3)), rb(q(1, 4), q(1, 2)))];
        let empty = FnAdapter::new("empty", |_: &[Nat]| Vec::new());
        let report = check_adapter(&empty, &setup, &sample);
        assert!(report.count(ViolationKind::StrongBasis) > 0);

        let fat = FnAdapter::new("radius-one", |seq: &[Nat]| {
            seq.iter()
                .map(|b| ball_code(&ball_parts(b).0, &q(1, 1)))
                .collect()
        });
        let report = check_adapter(&fat, &setup, &sample);
        assert!(report.count(ViolationKind::StrongBasis) > 0);

        let shrink = FnAdapter::new("shrink", |seq: &[Nat]| {
            seq.iter()
                .map(|b| {
                    let (c, r) = ball_parts(b);
                    ball_code(&c, &(r / q(1000, 1)))
                })
                .collect()
        });
        let report = check_adapter(&shrink, &setup, &sample);
        assert!(report.count(ViolationKind::Overset) > 0);
    }

    #[test]
    fn translation_from_identity_adapter_relists() {
        let rat = rational();
        let x = Point::Rational(q(1, 3));
        let name = si_name(&rat, &x).unwrap();
        let si = strict(&rat);
        let t = translation_from_adapter(Arc::new(IdentityAdapter), &si, &si);
        let out = t.transform(&name);
        let members: Vec<Nat> = finset_decode(&out.at(2)).into_iter().collect();
        let mut expect: Vec<Nat> = name.prefix(3).iter().flat_map(finset_decode).collect();
        expect.sort();
        assert_eq!(members, expect);
        let loose: InclusionRef = Arc::new(strong_incl_metric(rat.clone(), false));
        let rep = Representation::new(
            RepresentationKind::StrongIncl(loose),
            Arc::new(BallBasis::new(rat)),
        )
        .unwrap();
        assert_eq!(
            validate_prefix(&rep, &out.prefix(10), &x),
            PrefixVerdict::ConsistentSoFar
        );
    }

    #[test]
    fn adapter_round_trip_recovers_the_point() {
        let rat = rational();
        let reg = registry("pi,e");
        let (up, down) = rational_vs_creal_adapters(reg.clone());
        let t_up = translation_from_adapter(Arc::new(up), &strict(&reg), &strict(&rat));
        let t_down = translation_from_adapter(Arc::new(down), &strict(&rat), &strict(&reg));
        let x = q(1, 2);
        let name = si_name(&rat, &Point::Rational(x.clone())).unwrap();
        let back = si_to_cauchy(&t_down.transform(&t_up.transform(&name)));
        for (n, c) in back.prefix(12).iter().enumerate() {
            assert!(
                (rational_of(c) - &x).abs() < pow2_neg(n as u32 + 1),
                "cell {n}"
            );
        }
    }

    #[test]
    fn lacombe_covers() {
        let rat = rational();
        let reg = registry("pi");
        let b_rat = BallBasis::new(rat.clone());
        let b_reg = BallBasis::new(reg.clone());
        let codes = vec![rb(q(0, 1), q(1, 1)), rb(q(1, 3), q(1, 8))];
        let pts: Vec<Point> = (-20..=20).map(|i| Point::Rational(q(i, 16))).collect();
        let report = lacombe_adapter_check(&embedding_cover, &b_rat, &b_reg, &codes, &pts, 3);
        assert!(report.passed(), "{}", report.render());

        let pi_ball = ball_code(&RegistryWorld::slot_code(0), &q(1, 4));
        let pi = crate::worlds::Slot::Pi.approx(80).unwrap();
        let near: Vec<Point> = (-15..=15)
            .map(|i| Point::Rational(floor_dyadic(&(&pi + q(i, 64)), 40)))
            .collect();
        let cover = creal_rational_cover(reg.clone());
        let report = lacombe_adapter_check(
            &cover,
            &b_reg,
            &b_rat,
            std::slice::from_ref(&pi_ball),
            &near,
            24,
        );
        assert!(report.passed(), "{}", report.render());

        let bad = |code: &Nat| {
            let good =
                creal_rational_cover(Arc::new(RegistryWorld::from_list("pi").unwrap()))(code);
            Name::from_function(move |n| {
                if n == 2 {
                    rb(q(3, 1), q(1, 1))
                } else {
                    good.at(n)
                }
            })
        };
        let report = lacombe_adapter_check(&bad, &b_reg, &b_rat, &[pi_ball], &near, 24);
        assert!(report.count(ViolationKind::Subset) > 0);
    }

    #[test]
    fn nogina_selectors() {
        let rat = rational();
        let b = BallBasis::new(rat.clone());
        let x = q(1, 3);
        let p = crate::worlds::cauchy_name(&rat, &Point::Rational(x.clone())).unwrap();
        let prefix = p.prefix(20);
        let sample: Vec<(Point, Nat, Vec<Nat>)> = [
            (q(1, 4), q(1, 8)),
            (q(0, 1), q(1, 2)),
            (q(1, 3), q(1, 1000)),
        ]
        .into_iter()
        .map(|(c, r)| (Point::Rational(x.clone()), rb(c, r), prefix.clone()))
        .collect();
        let sel = cauchy_selector(rat.clone());
        assert!(nogina_adapter_check(&sel, &b, &b, &sample).passed());
        let itself = |big: &Nat, _: &[Nat]| Some(big.clone());
        assert!(nogina_adapter_check(&itself, &b, &b, &sample).passed());
        let disjoint = |big: &Nat, _: &[Nat]| {
            let (c, r) = ball_parts(big);
            let c = rational_of(&c) + &r * q(3, 1);
            Some(rb(c, r))
        };
        let report = nogina_adapter_check(&disjoint, &b, &b, &sample);
        assert_eq!(report.count(ViolationKind::Containment), 3);
    }

    #[test]
    fn nonuniform_threshold_along_a_name() {
        let rat = rational();
        let seq: Vec<Nat> = (0..12u32).map(|k| rb(q(1, 3), pow2_neg(k))).collect();
        let d = rb(q(1, 3), q(1, 10));
        assert_eq!(
            nonuniform_threshold(&IdentityAdapter, strict(&rat), &seq, &d),
            Some(5)
        );
        let empty = FnAdapter::new("empty", |_: &[Nat]| Vec::new());
        assert_eq!(nonuniform_threshold(&empty, strict(&rat), &seq, &d), None);
    }

    #[test]
    fn extension_of_totalized_relation_passes_axioms() {
        let w = registry("pi,divergent");
        let base: SubbasisRef = Arc::new(BallBasis::new(w.clone()));
        let (tb, ti) = totalize(Arc::new(strong_incl_metric(w, false)), base);
        let codes: Vec<Nat> = (0..40u32)
            .map(|i| {
                let center = if i % 7 == 0 {
                    RegistryWorld::slot_code((i / 7 % 2) as usize)
                } else {
                    RegistryWorld::rational_code(&q(i as i64 % 9, 4))
                };
                ball_code(&center, &q((i % 5 + 1) as i64, 4))
            })
            .collect();
        let pts: Vec<Point> = (-8..=12).map(|i| Point::Rational(q(i, 4))).collect();
        let report = check_axioms(&ti, &tb, &codes, &pts);
        assert!(report.passed(), "{}", report.render());
    }
}
