//! Name kinds, the default representations of each world, and the
//! translations and generators between them.

use std::fmt;
use std::sync::Arc;

use num_traits::ToPrimitive;
use thiserror::Error;

use crate::basis::{Equality, InclusionRef, Point};
use crate::kernel::Name;
use crate::metric::{
    cauchy_to_min, cauchy_to_si, max_to_cauchy, si_to_cauchy, strict_metric_certificate,
    strong_incl_metric,
};
use crate::repr::{id_translation, ReprError, Representation, RepresentationKind, Translator};

use super::{
    cauchy_name, enumerate_max_name, kspace_min_name, min_name, si_name, SingletonWorld, World,
    WorldError,
};

/// The four kinds of names a point can have.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NameKind {
    Cauchy,
    Min,
    Max,
    Si,
}

impl NameKind {
    pub const ALL: [NameKind; 4] = [NameKind::Cauchy, NameKind::Min, NameKind::Max, NameKind::Si];

    pub fn as_str(self) -> &'static str {
        match self {
            NameKind::Cauchy => "cauchy",
            NameKind::Min => "min",
            NameKind::Max => "max",
            NameKind::Si => "si",
        }
    }

    pub fn parse(s: &str) -> Option<NameKind> {
        NameKind::ALL.into_iter().find(|k| k.as_str() == s)
    }
}

impl fmt::Display for NameKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Strong-inclusion relations on subbasis codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RelationKind {
    /// `d + r₁ < r₂`, semi-decidable.
    Strict,
    /// `d + r₁ ≤ r₂`, reflexive.
    NonStrict,
    Equality,
    /// Equality of named values in the singleton world.
    Singleton,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PipelineError {
    #[error(transparent)]
    World(#[from] WorldError),
    #[error(transparent)]
    Repr(#[from] ReprError),
    #[error("no translation from {0} names to {1} names")]
    NoTranslation(NameKind, NameKind),
    #[error("cauchy names are not subbasis names")]
    NotSubbasis,
    #[error("the singleton relation needs the singleton world")]
    NeedsSingleton,
}

/// How many input cells output cell `k` of a translation reads.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReadBound {
    /// At most `k + 1`.
    Prefix,
    /// Unbounded: the translation searches its input.
    Search,
}

impl fmt::Display for ReadBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReadBound::Prefix => f.write_str("k+1"),
            ReadBound::Search => f.write_str("unbounded search"),
        }
    }
}

pub fn relation(world: &World, kind: RelationKind) -> Result<InclusionRef, PipelineError> {
    Ok(match (kind, world) {
        (RelationKind::Equality, _) => Arc::new(Equality),
        (RelationKind::Singleton, World::Singleton(_)) => Arc::new(SingletonWorld::inclusion()),
        (RelationKind::Singleton, _) => return Err(PipelineError::NeedsSingleton),
        (RelationKind::Strict, w) => Arc::new(strong_incl_metric(w.metric()?, true)),
        (RelationKind::NonStrict, w) => Arc::new(strong_incl_metric(w.metric()?, false)),
    })
}

/// Strict balls for metric worlds, set inclusion for the singleton world.
pub fn default_relation(world: &World) -> RelationKind {
    match world {
        World::Singleton(_) => RelationKind::Singleton,
        _ => RelationKind::Strict,
    }
}

/// The strong-inclusion representation for `kind`. Non-reflexive metric
/// relations come with the metric strong-basis certificate.
pub fn si_representation(
    world: &World,
    kind: RelationKind,
) -> Result<Representation, PipelineError> {
    let si = relation(world, kind)?;
    let sb = world.subbasis();
    if si.is_reflexive() {
        Ok(Representation::new(RepresentationKind::StrongIncl(si), sb)?)
    } else {
        let cert = strict_metric_certificate(&world.metric()?);
        Ok(Representation::with_certificate(si, sb, cert))
    }
}

pub fn representation(world: &World, kind: NameKind) -> Result<Representation, PipelineError> {
    let sb = world.subbasis();
    match kind {
        NameKind::Min => Ok(Representation::min(sb)),
        NameKind::Max => Ok(Representation::max(sb)),
        NameKind::Si => si_representation(world, default_relation(world)),
        NameKind::Cauchy => Err(PipelineError::NotSubbasis),
    }
}

/// The realizer from `src` names to `dst` names, when there is one.
///
/// `min → cauchy` runs the same blind search as `max → cauchy`. It succeeds
/// on min-names that happen to list arbitrarily small balls and runs until
/// the fuel is gone on the others.
pub fn translation(
    world: &World,
    src: NameKind,
    dst: NameKind,
) -> Result<(Translator, ReadBound), PipelineError> {
    use NameKind::*;
    let plain = |label: &str, f: fn(&Name) -> Name| Translator::new(label, f);
    Ok(match (src, dst) {
        (Cauchy, Cauchy) => (Translator::identity(), ReadBound::Prefix),
        (Cauchy, Min) => (plain("cauchy->min", cauchy_to_min), ReadBound::Prefix),
        (Cauchy, Si) => (plain("cauchy->si", cauchy_to_si), ReadBound::Prefix),
        (Si, Cauchy) => (plain("si->cauchy", si_to_cauchy), ReadBound::Search),
        (Max, Cauchy) | (Min, Cauchy) => (plain("max->cauchy", max_to_cauchy), ReadBound::Search),
        (Cauchy, _) => return Err(PipelineError::NoTranslation(src, dst)),
        (Si, Min) => {
            let si = representation(world, Si)?;
            let min = Representation::min_over_induced(world.subbasis());
            (id_translation(&si, &min)?, ReadBound::Prefix)
        }
        (s, d) => {
            let t = id_translation(&representation(world, s)?, &representation(world, d)?)
                .map_err(|e| match e {
                    ReprError::Unrelated { .. } => PipelineError::NoTranslation(s, d),
                    other => other.into(),
                })?;
            (t, ReadBound::Prefix)
        }
    })
}

/// A generated name of `point`. In the K-space world the min-name of an
/// integer whose program has not halted is the constant ball around it.
pub fn generate_name(world: &World, point: &Point, kind: NameKind) -> Result<Name, PipelineError> {
    let metric = world.metric()?;
    if let (NameKind::Min, World::KSpace(k), Point::Rational(x)) = (kind, world, point) {
        if let Some(n) = x.is_integer().then(|| x.to_integer().to_u64()).flatten() {
            if !k.in_k(n) {
                return Ok(kspace_min_name(n));
            }
        }
    }
    Ok(match kind {
        NameKind::Cauchy => cauchy_name(&metric, point)?,
        NameKind::Min => min_name(&metric, point)?,
        NameKind::Max => enumerate_max_name(&metric, point)?,
        NameKind::Si => si_name(&metric, point)?,
    })
}
