//! Concrete worlds and the spec strings that build them.
//!
//! | spec | world |
//! |------|-------|
//! | `R-rational` | `ℝ` with rational balls |
//! | `R-registry [--with pi,e,sqrt2,q:1/3,divergent:3,partial:40]` | `ℝ` with computable-real centers |
//! | `K-space [--fuel 1000]` | the subspace `A` built from `K_F` |
//! | `N-discrete` | `ℕ` with the discrete metric |
//! | `singleton [--fuel 64]` | approximation programs with `β(n) = {ν(n)}` |

mod discrete;
mod kspace;
mod names;
mod pipeline;
mod rational;
pub mod registry;
mod sample;
mod singleton;

use std::sync::Arc;

use num_traits::Signed;
use thiserror::Error;

pub use discrete::DiscreteWorld;
pub use kspace::{halting_steps, halts_within, kspace_min_name, KSpaceWorld};
pub use names::{cauchy_name, enumerate_max_name, min_name, si_name};
pub use pipeline::{
    default_relation, generate_name, relation, representation, si_representation, translation,
    NameKind, PipelineError, ReadBound, RelationKind,
};
pub use rational::RationalWorld;
pub use registry::{RegistryWorld, Slot};
pub use sample::{sample_ball_codes, sample_containing_pairs, sample_induced_codes, sample_points};
pub use singleton::{program_approx, program_value, SingletonWorld};

use crate::basis::{Point, SubbasisRef};
use crate::kernel::Nat;
use crate::metric::rational::parse_rational;
use crate::metric::{ball_code, BallBasis, WorldRef};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WorldError {
    #[error("unknown world `{0}`")]
    Unknown(String),
    #[error("bad world option: {0}")]
    BadOption(String),
    #[error("`{0}` is not a point of {1}")]
    BadPoint(String, String),
    #[error("`{0}` is not a ball literal B(center,radius) of {1}")]
    BadBall(String, String),
    #[error("{0} has no exact membership test, so no complete list of balls can be enumerated")]
    NoExactMembership(String),
    #[error("{0} is not a metric world")]
    NotMetric(String),
}

/// A world built from a spec string.
#[derive(Clone)]
pub enum World {
    Rational(Arc<RationalWorld>),
    Registry(Arc<RegistryWorld>),
    KSpace(Arc<KSpaceWorld>),
    Discrete(Arc<DiscreteWorld>),
    Singleton(Arc<SingletonWorld>),
}

impl World {
    pub fn id(&self) -> String {
        match self {
            World::Singleton(s) => crate::basis::Subbasis::id(s.as_ref()),
            other => other.metric().map(|m| m.id()).unwrap_or_default(),
        }
    }

    pub fn metric(&self) -> Result<WorldRef, WorldError> {
        Ok(match self {
            World::Rational(w) => w.clone(),
            World::Registry(w) => w.clone(),
            World::KSpace(w) => w.clone(),
            World::Discrete(w) => w.clone(),
            World::Singleton(s) => {
                return Err(WorldError::NotMetric(crate::basis::Subbasis::id(
                    s.as_ref(),
                )))
            }
        })
    }

    /// The numbered subbasis: balls for metric worlds, singletons otherwise.
    pub fn subbasis(&self) -> SubbasisRef {
        match self {
            World::Singleton(s) => s.clone(),
            other => Arc::new(BallBasis::new(other.metric().expect("metric world"))),
        }
    }

    pub fn parse_point(&self, s: &str) -> Result<Point, WorldError> {
        let bad = || WorldError::BadPoint(s.to_string(), self.id());
        match self {
            World::Singleton(_) => {
                let n = s.trim().strip_prefix("nu").unwrap_or(s.trim());
                n.parse::<Nat>().map(Point::Index).map_err(|_| bad())
            }
            other => other.metric()?.parse_point(s).ok_or_else(bad),
        }
    }

    /// Parses `B(center,radius)` into a ball code.
    pub fn parse_ball(&self, s: &str) -> Result<Nat, WorldError> {
        let bad = || WorldError::BadBall(s.to_string(), self.id());
        let world = self.metric()?;
        let inner = s
            .trim()
            .strip_prefix("B(")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(bad)?;
        let (c, r) = inner.rsplit_once(',').ok_or_else(bad)?;
        let center = world.parse_center(c.trim()).ok_or_else(bad)?;
        let radius = parse_rational(r)
            .filter(|r| r.is_positive())
            .ok_or_else(bad)?;
        Ok(ball_code(&center, &radius))
    }
}

/// Builds a world from a spec string such as `K-space --fuel 1000`.
pub fn make_world(spec: &str) -> Result<World, WorldError> {
    let mut tokens = spec.split_whitespace();
    let id = tokens
        .next()
        .ok_or_else(|| WorldError::Unknown(spec.to_string()))?;
    let mut fuel: Option<u64> = None;
    let mut with: Option<String> = None;
    while let Some(flag) = tokens.next() {
        let value = tokens
            .next()
            .ok_or_else(|| WorldError::BadOption(format!("`{flag}` needs a value")))?;
        match flag {
            "--fuel" => {
                let f: u64 = value
                    .parse()
                    .map_err(|_| WorldError::BadOption(format!("bad fuel `{value}`")))?;
                if f == 0 {
                    return Err(WorldError::BadOption("fuel must be positive".into()));
                }
                fuel = Some(f);
            }
            "--with" => with = Some(value.to_string()),
            other => return Err(WorldError::BadOption(format!("unknown option `{other}`"))),
        }
    }
    let reject = |name: &str, given: bool| {
        if given {
            Err(WorldError::BadOption(format!("`{id}` takes no `{name}`")))
        } else {
            Ok(())
        }
    };
    match id {
        "R-rational" => {
            reject("--fuel", fuel.is_some())?;
            reject("--with", with.is_some())?;
            Ok(World::Rational(Arc::new(RationalWorld)))
        }
        "R-registry" => {
            reject("--fuel", fuel.is_some())?;
            let registry = match with {
                Some(list) => RegistryWorld::from_list(&list).map_err(WorldError::BadOption)?,
                None => RegistryWorld::standard(),
            };
            Ok(World::Registry(Arc::new(registry)))
        }
        "K-space" => {
            reject("--with", with.is_some())?;
            Ok(World::KSpace(Arc::new(KSpaceWorld::new(
                fuel.unwrap_or(1000),
            ))))
        }
        "N-discrete" => {
            reject("--fuel", fuel.is_some())?;
            reject("--with", with.is_some())?;
            Ok(World::Discrete(Arc::new(DiscreteWorld)))
        }
        "singleton" => {
            reject("--with", with.is_some())?;
            Ok(World::Singleton(Arc::new(SingletonWorld::new(
                fuel.unwrap_or(64),
            ))))
        }
        _ => Err(WorldError::Unknown(id.to_string())),
    }
}
