//! Representations built from a numbered subbasis, identity translations
//! between them, restriction to a subset, and the membership monitor.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::basis::{
    extend_strong_inclusion, InclusionRef, InducedBasis, Membership, Point, Subbasis, SubbasisRef,
};
use crate::kernel::{finset_singleton, Fuel, Meter, Name, Nat, SemiResult, Stall};

/// Which of the three subbasis representations a descriptor stands for.
#[derive(Clone)]
pub enum RepresentationKind {
    /// Names list enough subbasis codes to generate the neighborhood filter.
    Min,
    /// Names list every subbasis code of a set containing the point.
    Max,
    /// Names list induced-basis codes forming a strong neighborhood basis for
    /// the extension of the relation.
    StrongIncl(InclusionRef),
}

impl RepresentationKind {
    pub fn tag(&self) -> &'static str {
        match self {
            RepresentationKind::Min => "min",
            RepresentationKind::Max => "max",
            RepresentationKind::StrongIncl(_) => "si",
        }
    }
}

impl fmt::Debug for RepresentationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RepresentationKind::StrongIncl(si) => write!(f, "StrongIncl({})", si.label()),
            other => f.write_str(other.tag()),
        }
    }
}

/// A world's assurance that every point has a strong neighborhood basis for
/// some non-reflexive relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrongBasisCertificate {
    reason: String,
}

impl StrongBasisCertificate {
    pub fn new(reason: String) -> StrongBasisCertificate {
        StrongBasisCertificate { reason }
    }

    pub fn reason(&self) -> &str {
        &self.reason
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReprError {
    #[error("strong inclusion `{0}` is not reflexive and no strong-basis certificate was given")]
    NotReflexive(String),
    #[error("no identity realizer from {src} to {dst}")]
    Unrelated { src: String, dst: String },
    #[error("representation over `{0}` is not of the strong-inclusion kind")]
    NotStrongIncl(String),
    #[error("strong inclusion `{0}` has no semi-decision procedure")]
    NoSemi(String),
}

/// A representation descriptor: the kind and the subbasis it is built on.
///
/// Min and Max names are streams of subbasis codes; strong-inclusion names
/// are streams of induced-basis (`Δ`) codes.
#[derive(Clone)]
pub struct Representation {
    kind: RepresentationKind,
    subbasis: SubbasisRef,
    certificate: Option<StrongBasisCertificate>,
}

impl Representation {
    pub fn new(
        kind: RepresentationKind,
        subbasis: SubbasisRef,
    ) -> Result<Representation, ReprError> {
        if let RepresentationKind::StrongIncl(si) = &kind {
            if !si.is_reflexive() {
                return Err(ReprError::NotReflexive(si.label()));
            }
        }
        Ok(Representation {
            kind,
            subbasis,
            certificate: None,
        })
    }

    /// Strong-inclusion representation justified by a certificate instead of
    /// reflexivity.
    pub fn with_certificate(
        si: InclusionRef,
        subbasis: SubbasisRef,
        certificate: StrongBasisCertificate,
    ) -> Representation {
        Representation {
            kind: RepresentationKind::StrongIncl(si),
            subbasis,
            certificate: Some(certificate),
        }
    }

    pub fn min(subbasis: SubbasisRef) -> Representation {
        Representation {
            kind: RepresentationKind::Min,
            subbasis,
            certificate: None,
        }
    }

    pub fn max(subbasis: SubbasisRef) -> Representation {
        Representation {
            kind: RepresentationKind::Max,
            subbasis,
            certificate: None,
        }
    }

    /// `ρ^min` over the induced basis of `subbasis`, the target of the
    /// identity realizer out of a strong-inclusion representation.
    pub fn min_over_induced(subbasis: SubbasisRef) -> Representation {
        Representation::min(Arc::new(InducedBasis::new(subbasis)))
    }

    pub fn kind(&self) -> &RepresentationKind {
        &self.kind
    }

    pub fn subbasis(&self) -> &SubbasisRef {
        &self.subbasis
    }

    pub fn certificate(&self) -> Option<&StrongBasisCertificate> {
        self.certificate.as_ref()
    }

    /// The relation on name entries: the extension of the strong inclusion to
    /// induced codes.
    pub fn entry_inclusion(&self) -> Option<InclusionRef> {
        match &self.kind {
            RepresentationKind::StrongIncl(si) => {
                Some(Arc::new(extend_strong_inclusion(si.clone())))
            }
            _ => None,
        }
    }

    pub fn label(&self) -> String {
        match &self.kind {
            RepresentationKind::StrongIncl(si) => {
                format!("si[{}]({})", si.label(), self.subbasis.id())
            }
            k => format!("{}({})", k.tag(), self.subbasis.id()),
        }
    }
}

type NameMap = dyn Fn(&Name) -> Name + Send + Sync;

/// A realizer on names. Output cell `k` depends on a finite input prefix.
#[derive(Clone)]
pub struct Translator {
    label: String,
    map: Arc<NameMap>,
}

impl Translator {
    pub fn new<F>(label: impl Into<String>, map: F) -> Translator
    where
        F: Fn(&Name) -> Name + Send + Sync + 'static,
    {
        Translator {
            label: label.into(),
            map: Arc::new(map),
        }
    }

    pub fn identity() -> Translator {
        Translator::new("id", |n: &Name| n.clone())
    }

    pub fn transform(&self, input: &Name) -> Name {
        (self.map)(input)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &Translator) -> Translator {
        let (a, b) = (self.clone(), next.clone());
        Translator::new(format!("{};{}", a.label, b.label), move |n: &Name| {
            b.transform(&a.transform(n))
        })
    }
}

impl fmt::Debug for Translator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Translator({})", self.label)
    }
}

/// Wraps each subbasis code as the singleton induced code.
pub fn wrap_singletons(name: &Name) -> Name {
    name.map(finset_singleton)
}

/// The identity realizers `ρ^max ≤ ρ^⊆̊ ≤ ρ^min`, with the `Max → SI` step
/// wrapping codes as singletons.
pub fn id_translation(src: &Representation, dst: &Representation) -> Result<Translator, ReprError> {
    use RepresentationKind::*;
    let unrelated = || ReprError::Unrelated {
        src: src.label(),
        dst: dst.label(),
    };
    let base = src.subbasis.id();
    let same = dst.subbasis.id() == base;
    let induced = dst.subbasis.id() == InducedBasis::new(src.subbasis.clone()).id();
    match (&src.kind, &dst.kind) {
        (Max, StrongIncl(si)) if same => {
            if !si.is_reflexive() && dst.certificate.is_none() {
                return Err(ReprError::NotReflexive(si.label()));
            }
            Ok(Translator::new("max->si", wrap_singletons))
        }
        (StrongIncl(_), Min) if induced => Ok(Translator::identity()),
        (Max, Min) if same => Ok(Translator::identity()),
        (Min, Min) | (Max, Max) if same => Ok(Translator::identity()),
        (StrongIncl(a), StrongIncl(b)) if same && a.label() == b.label() => {
            Ok(Translator::identity())
        }
        _ => Err(unrelated()),
    }
}

type PointFilter = dyn Fn(&Point) -> Membership + Send + Sync;

/// `α(n) = A ∩ β(n)`: same codes, same domain, membership conjoined with the
/// subset filter.
pub struct RestrictedSubbasis {
    base: SubbasisRef,
    label: String,
    filter: Arc<PointFilter>,
}

impl RestrictedSubbasis {
    pub fn new<F>(base: SubbasisRef, label: impl Into<String>, filter: F) -> RestrictedSubbasis
    where
        F: Fn(&Point) -> Membership + Send + Sync + 'static,
    {
        RestrictedSubbasis {
            base,
            label: label.into(),
            filter: Arc::new(filter),
        }
    }

    pub fn contains(&self, p: &Point) -> Membership {
        (self.filter)(p)
    }
}

impl Subbasis for RestrictedSubbasis {
    fn id(&self) -> String {
        format!("{}|{}", self.base.id(), self.label)
    }

    fn domain_check(&self, code: &Nat, fuel: Fuel) -> SemiResult {
        self.base.domain_check(code, fuel)
    }

    fn refutes_domain(&self, code: &Nat) -> bool {
        self.base.refutes_domain(code)
    }

    fn domain_oracle(&self, code: &Nat) -> bool {
        self.base.domain_oracle(code)
    }

    fn member_test(&self, point: &Point, code: &Nat) -> Membership {
        match (self.filter)(point) {
            Membership::Out => Membership::Out,
            m => m.and(self.base.member_test(point, code)),
        }
    }

    fn witness_points(&self, code: &Nat) -> Vec<Point> {
        self.base
            .witness_points(code)
            .into_iter()
            .filter(|p| (self.filter)(p) == Membership::In)
            .collect()
    }

    fn describe(&self, code: &Nat) -> String {
        format!("{}∩{}", self.base.describe(code), self.label)
    }
}

/// Restriction `ρ|A`. The strong inclusion is kept: it still refines
/// inclusion of the restricted sets.
pub fn restrict<F>(rep: &Representation, label: &str, filter: F) -> Representation
where
    F: Fn(&Point) -> Membership + Send + Sync + 'static,
{
    Representation {
        kind: rep.kind.clone(),
        subbasis: Arc::new(RestrictedSubbasis::new(rep.subbasis.clone(), label, filter)),
        certificate: rep.certificate.clone(),
    }
}

/// Result of a bounded monitor run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poll {
    pub result: SemiResult,
    /// Steps spent, counting cell reads and semi-decision slices.
    pub used: u64,
    /// Name cells read.
    pub cells: usize,
    /// Index of the accepting entry.
    pub witness: Option<usize>,
    /// Set if the name itself failed, as opposed to ending or running dry.
    pub error: Option<Stall>,
}

/// Semi-decides `x ∈ β(target)` from a strong-inclusion name of `x` by
/// looking for an entry `b` with `b ⊆̊ {target}`.
pub struct MembershipMonitor {
    si: InclusionRef,
    wrapped: Nat,
    target: Nat,
}

pub fn member_monitor(rep: &Representation, target: &Nat) -> Result<MembershipMonitor, ReprError> {
    let RepresentationKind::StrongIncl(base) = &rep.kind else {
        return Err(ReprError::NotStrongIncl(rep.subbasis.id()));
    };
    if !base.is_semi_decidable() {
        return Err(ReprError::NoSemi(base.label()));
    }
    Ok(MembershipMonitor {
        si: Arc::new(extend_strong_inclusion(base.clone())),
        wrapped: finset_singleton(target),
        target: target.clone(),
    })
}

impl MembershipMonitor {
    pub fn target(&self) -> &Nat {
        &self.target
    }

    pub fn poll(&self, name: &Name, fuel: Fuel) -> SemiResult {
        self.run(name, fuel).result
    }

    /// Dovetails over entries and precision: at stage `s`, entry `i ≤ s` is
    /// polled with fuel `s − i + 1`. Every step is charged to one meter, so a
    /// larger budget replays a smaller one and then continues.
    pub fn run(&self, name: &Name, fuel: Fuel) -> Poll {
        let mut meter = Meter::new(fuel);
        let mut known: Vec<Nat> = Vec::new();
        let mut ended = false;
        let outcome = |result, meter: &Meter, cells, witness, error| Poll {
            result,
            used: meter.used(),
            cells,
            witness,
            error,
        };
        for stage in 0usize.. {
            for i in 0..=stage {
                if i >= known.len() {
                    if ended {
                        break;
                    }
                    match name.try_at(i, &mut meter) {
                        Ok(code) => known.push(code),
                        Err(Stall::EndOfInput) => {
                            ended = true;
                            break;
                        }
                        Err(Stall::OutOfFuel) => {
                            return outcome(SemiResult::NotYet, &meter, known.len(), None, None)
                        }
                        Err(e) => {
                            return outcome(SemiResult::NotYet, &meter, known.len(), None, Some(e))
                        }
                    }
                }
                let slice = (stage - i + 1) as u64;
                if meter.charge(slice).is_err() {
                    return outcome(SemiResult::NotYet, &meter, known.len(), None, None);
                }
                if self.si.semi(&known[i], &self.wrapped, Fuel(slice)) == Some(SemiResult::Accept) {
                    return outcome(SemiResult::Accept, &meter, known.len(), Some(i), None);
                }
            }
            if ended && known.is_empty() {
                return outcome(SemiResult::NotYet, &meter, 0, None, None);
            }
        }
        unreachable!("stages are unbounded")
    }
}
