//! Numbered subbases, the induced basis of finite intersections, and strong
//! inclusion relations.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::kernel::{finset_decode, finset_encode, Fuel, Nat, SemiResult};
use crate::metric::rational::{format_rational, Q};
use crate::repr::{Representation, RepresentationKind};

/// A point of some world, in the form the world's membership tests accept.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Point {
    Rational(Q),
    /// A slot of a computable-real registry.
    Registry(usize),
    /// The point `ν(n)` of a numbered set.
    Index(Nat),
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Rational(x) => f.write_str(&format_rational(x)),
            Point::Registry(slot) => write!(f, "reg{slot}"),
            Point::Index(n) => write!(f, "nu{n}"),
        }
    }
}

/// Three-valued answer of an extensional membership test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Membership {
    In,
    Out,
    Unknown,
}

impl Membership {
    pub fn from_bool(inside: bool) -> Membership {
        if inside {
            Membership::In
        } else {
            Membership::Out
        }
    }

    /// Conjunction, with `Out` absorbing.
    pub fn and(self, other: Membership) -> Membership {
        match (self, other) {
            (Membership::Out, _) | (_, Membership::Out) => Membership::Out,
            (Membership::In, Membership::In) => Membership::In,
            _ => Membership::Unknown,
        }
    }
}

/// A partial numbering `β` of subsets of a world, with test hooks.
pub trait Subbasis: Send + Sync {
    /// Identifies the numbered family; two subbases with equal ids number the
    /// same sets the same way.
    fn id(&self) -> String;

    /// Fuel-monotone semi-decision of `code ∈ dom(β)`.
    fn domain_check(&self, code: &Nat, fuel: Fuel) -> SemiResult;

    /// True only when `code ∉ dom(β)` is decidably known.
    fn refutes_domain(&self, _code: &Nat) -> bool {
        false
    }

    /// Ground truth of `code ∈ dom(β)`, for test oracles only.
    fn domain_oracle(&self, code: &Nat) -> bool;

    /// Whether `point ∈ β(code)`. Never both `In` and `Out` for the same pair.
    fn member_test(&self, point: &Point, code: &Nat) -> Membership;

    /// Points worth testing against `β(code)`: typically inside it and close
    /// to its boundary.
    fn witness_points(&self, _code: &Nat) -> Vec<Point> {
        Vec::new()
    }

    fn describe(&self, code: &Nat) -> String {
        code.to_string()
    }
}

pub type SubbasisRef = Arc<dyn Subbasis>;

/// Fuel used when validation needs to know that a code is in the domain.
pub const DOMAIN_PROBE: Fuel = Fuel(10_000);

/// The induced basis `β̂`: code `n` denotes `⋂ β(Δ_n)`, and `Δ_n = ∅` denotes
/// the whole space.
#[derive(Clone)]
pub struct InducedBasis {
    base: SubbasisRef,
}

impl InducedBasis {
    pub fn new(base: SubbasisRef) -> InducedBasis {
        InducedBasis { base }
    }

    pub fn base(&self) -> &SubbasisRef {
        &self.base
    }
}

impl Subbasis for InducedBasis {
    fn id(&self) -> String {
        format!("induced({})", self.base.id())
    }

    fn domain_check(&self, code: &Nat, fuel: Fuel) -> SemiResult {
        let all = finset_decode(code)
            .iter()
            .all(|e| self.base.domain_check(e, fuel).is_accept());
        SemiResult::from_bool(all)
    }

    fn refutes_domain(&self, code: &Nat) -> bool {
        finset_decode(code)
            .iter()
            .any(|e| self.base.refutes_domain(e))
    }

    fn domain_oracle(&self, code: &Nat) -> bool {
        finset_decode(code)
            .iter()
            .all(|e| self.base.domain_oracle(e))
    }

    fn member_test(&self, point: &Point, code: &Nat) -> Membership {
        finset_decode(code).iter().fold(Membership::In, |acc, e| {
            acc.and(self.base.member_test(point, e))
        })
    }

    fn witness_points(&self, code: &Nat) -> Vec<Point> {
        finset_decode(code)
            .iter()
            .flat_map(|e| self.base.witness_points(e))
            .collect()
    }

    fn describe(&self, code: &Nat) -> String {
        let parts: Vec<String> = finset_decode(code)
            .iter()
            .map(|e| self.base.describe(e))
            .collect();
        format!("{{{}}}", parts.join(", "))
    }
}

/// Code of the intersection of the given subbasis codes.
pub fn induced_code(subcodes: &[Nat]) -> Nat {
    finset_encode(subcodes)
}

/// A transitive relation on codes that refines set inclusion.
pub trait StrongInclusion: Send + Sync {
    /// Total test oracle. May use exact arithmetic no realizer has.
    fn holds(&self, a: &Nat, b: &Nat) -> bool;

    /// Fuel-monotone semi-decision, or `None` when the relation has none.
    fn semi(&self, _a: &Nat, _b: &Nat, _fuel: Fuel) -> Option<SemiResult> {
        None
    }

    fn is_semi_decidable(&self) -> bool {
        false
    }

    fn is_reflexive(&self) -> bool;

    fn label(&self) -> String;
}

pub type InclusionRef = Arc<dyn StrongInclusion>;

/// Equality of codes: the finest reflexive strong inclusion.
#[derive(Clone, Copy, Debug, Default)]
pub struct Equality;

impl StrongInclusion for Equality {
    fn holds(&self, a: &Nat, b: &Nat) -> bool {
        a == b
    }

    fn semi(&self, a: &Nat, b: &Nat, fuel: Fuel) -> Option<SemiResult> {
        Some(SemiResult::from_bool(fuel.steps() >= 1 && a == b))
    }

    fn is_semi_decidable(&self) -> bool {
        true
    }

    fn is_reflexive(&self) -> bool {
        true
    }

    fn label(&self) -> String {
        "equality".into()
    }
}

type HoldsFn = dyn Fn(&Nat, &Nat) -> bool + Send + Sync;

/// A relation given only by its test oracle.
pub struct FnInclusion {
    label: String,
    holds: Box<HoldsFn>,
    reflexive: bool,
}

impl FnInclusion {
    pub fn new<F>(label: impl Into<String>, reflexive: bool, holds: F) -> FnInclusion
    where
        F: Fn(&Nat, &Nat) -> bool + Send + Sync + 'static,
    {
        FnInclusion {
            label: label.into(),
            holds: Box::new(holds),
            reflexive,
        }
    }
}

impl StrongInclusion for FnInclusion {
    fn holds(&self, a: &Nat, b: &Nat) -> bool {
        (self.holds)(a, b)
    }

    fn is_reflexive(&self) -> bool {
        self.reflexive
    }

    fn label(&self) -> String {
        self.label.clone()
    }
}

/// Extension of a subbasis strong inclusion to induced codes:
/// `n₁ ⊆̊ n₂ ⟺ ∀k ∈ Δ_{n₂} ∃p ∈ Δ_{n₁}, p ⊆̊ k`.
#[derive(Clone)]
pub struct ExtendedInclusion {
    base: InclusionRef,
}

impl ExtendedInclusion {
    pub fn base(&self) -> &InclusionRef {
        &self.base
    }
}

pub fn extend_strong_inclusion(si: InclusionRef) -> ExtendedInclusion {
    ExtendedInclusion { base: si }
}

impl StrongInclusion for ExtendedInclusion {
    fn holds(&self, n1: &Nat, n2: &Nat) -> bool {
        let small = finset_decode(n1);
        finset_decode(n2)
            .iter()
            .all(|k| small.iter().any(|p| self.base.holds(p, k)))
    }

    fn semi(&self, n1: &Nat, n2: &Nat, fuel: Fuel) -> Option<SemiResult> {
        if !self.base.is_semi_decidable() {
            return None;
        }
        let small = finset_decode(n1);
        let all = finset_decode(n2).iter().all(|k| {
            small
                .iter()
                .any(|p| self.base.semi(p, k, fuel) == Some(SemiResult::Accept))
        });
        Some(SemiResult::from_bool(all))
    }

    fn is_semi_decidable(&self) -> bool {
        self.base.is_semi_decidable()
    }

    fn is_reflexive(&self) -> bool {
        self.base.is_reflexive()
    }

    fn label(&self) -> String {
        format!("extended({})", self.base.label())
    }
}

/// Extension to finite code sequences:
/// `(b₁..bₙ) ⊆̊ (b′₁..b′ₘ) ⟺ ∀i ≤ m ∃j ≤ n, b_j ⊆̊ b′_i`.
#[derive(Clone)]
pub struct SequenceInclusion {
    base: InclusionRef,
}

pub fn extend_to_sequences(si: InclusionRef) -> SequenceInclusion {
    SequenceInclusion { base: si }
}

impl SequenceInclusion {
    pub fn holds(&self, left: &[Nat], right: &[Nat]) -> bool {
        right
            .iter()
            .all(|r| left.iter().any(|l| self.base.holds(l, r)))
    }
}

/// Kind of a reported violation; the report line uses the kebab-case form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ViolationKind {
    Transitivity,
    Refinement,
    Reflexivity,
    Overset,
    StrongBasis,
    Undefined,
    Cover,
    Subset,
    Containment,
}

impl ViolationKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ViolationKind::Transitivity => "transitivity",
            ViolationKind::Refinement => "refinement",
            ViolationKind::Reflexivity => "reflexivity",
            ViolationKind::Overset => "overset",
            ViolationKind::StrongBasis => "strong-basis",
            ViolationKind::Undefined => "undefined",
            ViolationKind::Cover => "cover",
            ViolationKind::Subset => "subset",
            ViolationKind::Containment => "containment",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub a: Nat,
    pub b: Option<Nat>,
    pub c: Option<Nat>,
    pub point: Option<String>,
}

impl Violation {
    pub fn new(kind: ViolationKind, a: Nat) -> Violation {
        Violation {
            kind,
            a,
            b: None,
            c: None,
            point: None,
        }
    }

    pub fn with_b(mut self, b: Nat) -> Violation {
        self.b = Some(b);
        self
    }

    pub fn with_c(mut self, c: Nat) -> Violation {
        self.c = Some(c);
        self
    }

    pub fn at_point(mut self, p: &Point) -> Violation {
        self.point = Some(p.to_string());
        self
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VIOLATION {} a={}", self.kind.as_str(), self.a)?;
        if let Some(b) = &self.b {
            write!(f, " b={b}")?;
        }
        if let Some(c) = &self.c {
            write!(f, " c={c}")?;
        }
        if let Some(p) = &self.point {
            write!(f, " point={p}")?;
        }
        Ok(())
    }
}

/// Result of a sampled check. Empty `violations` means the sample passed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub violations: Vec<Violation>,
    /// Tests that could not be decided (unknown membership, unresolved codes).
    pub skipped: usize,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn push(&mut self, v: Violation) {
        self.violations.push(v);
    }

    pub fn merge(&mut self, other: Report) {
        self.violations.extend(other.violations);
        self.skipped += other.skipped;
    }

    pub fn count(&self, kind: ViolationKind) -> usize {
        self.violations.iter().filter(|v| v.kind == kind).count()
    }

    /// The line-oriented report text, one line per violation. Skipped checks
    /// are not part of it.
    pub fn render(&self) -> String {
        let mut s = String::new();
        for v in &self.violations {
            s.push_str(&v.to_string());
            s.push('\n');
        }
        s
    }
}

/// Checks the strong-inclusion axioms on a sample: transitivity over all
/// sampled triples, inclusion refinement against the sampled points (plus
/// each code's witness points), and reflexivity when the relation claims it.
pub fn check_axioms(
    si: &dyn StrongInclusion,
    sb: &dyn Subbasis,
    codes: &[Nat],
    points: &[Point],
) -> Report {
    let mut report = Report::default();
    let codes: Vec<&Nat> = codes
        .iter()
        .filter(|c| {
            let ok = sb.domain_check(c, DOMAIN_PROBE).is_accept();
            if !ok {
                report.skipped += 1;
            }
            ok
        })
        .collect();
    let n = codes.len();
    let rel: Vec<Vec<bool>> = codes
        .iter()
        .map(|a| codes.iter().map(|b| si.holds(a, b)).collect())
        .collect();

    if si.is_reflexive() {
        for (i, a) in codes.iter().enumerate() {
            if !rel[i][i] {
                report.push(Violation::new(ViolationKind::Reflexivity, (*a).clone()));
            }
        }
    }

    for i in 0..n {
        for j in 0..n {
            if !rel[i][j] {
                continue;
            }
            for k in 0..n {
                if rel[j][k] && !rel[i][k] {
                    report.push(
                        Violation::new(ViolationKind::Transitivity, codes[i].clone())
                            .with_b(codes[j].clone())
                            .with_c(codes[k].clone()),
                    );
                }
            }
        }
    }

    let membership: Vec<Vec<Membership>> = points
        .iter()
        .map(|p| codes.iter().map(|c| sb.member_test(p, c)).collect())
        .collect();
    for i in 0..n {
        let witnesses: Vec<Point> = sb.witness_points(codes[i]);
        let witness_membership: Vec<(Membership, Vec<Membership>)> = witnesses
            .iter()
            .map(|p| {
                (
                    sb.member_test(p, codes[i]),
                    (0..n)
                        .map(|j| {
                            if rel[i][j] {
                                sb.member_test(p, codes[j])
                            } else {
                                Membership::Unknown
                            }
                        })
                        .collect(),
                )
            })
            .collect();
        for j in 0..n {
            if !rel[i][j] {
                continue;
            }
            let sampled = membership
                .iter()
                .zip(points)
                .map(|(row, p)| (row[i], row[j], p));
            let witnessed = witness_membership
                .iter()
                .zip(&witnesses)
                .map(|((mi, row), p)| (*mi, row[j], p));
            let mut found = None;
            for (in_a, in_b, p) in sampled.chain(witnessed) {
                match (in_a, in_b) {
                    (Membership::In, Membership::Out) => {
                        found = Some(p);
                        break;
                    }
                    (Membership::Unknown, _) | (Membership::In, Membership::Unknown) => {
                        report.skipped += 1;
                    }
                    _ => {}
                }
            }
            if let Some(p) = found {
                report.push(
                    Violation::new(ViolationKind::Refinement, codes[i].clone())
                        .with_b(codes[j].clone())
                        .at_point(p),
                );
            }
        }
    }
    report
}

/// Verdict of checking a finite prefix of a name.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PrefixVerdict {
    ConsistentSoFar,
    Violation,
    Unknown,
}

/// Checks the first clause of the name condition on a finite prefix: every
/// listed code is in the domain and its set contains the point. The
/// completeness clause quantifies over the whole name and is not checked.
pub fn validate_prefix(rep: &Representation, prefix: &[Nat], point: &Point) -> PrefixVerdict {
    let induced;
    let sb: &dyn Subbasis = match rep.kind() {
        RepresentationKind::StrongIncl(_) => {
            induced = InducedBasis::new(rep.subbasis().clone());
            &induced
        }
        _ => rep.subbasis().as_ref(),
    };
    let mut unknown = false;
    for code in prefix {
        if sb.refutes_domain(code) {
            return PrefixVerdict::Violation;
        }
        match sb.member_test(point, code) {
            Membership::Out => return PrefixVerdict::Violation,
            Membership::Unknown => unknown = true,
            Membership::In => {}
        }
        if !sb.domain_check(code, DOMAIN_PROBE).is_accept() {
            unknown = true;
        }
    }
    if unknown {
        PrefixVerdict::Unknown
    } else {
        PrefixVerdict::ConsistentSoFar
    }
}

/// Elementwise view of a sequence as a set, for callers that need `Δ`-codes.
pub fn as_code_set(seq: &[Nat]) -> BTreeSet<Nat> {
    seq.iter().cloned().collect()
}
