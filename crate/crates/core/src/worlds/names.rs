//! Name generators for points of the metric worlds.

use std::collections::VecDeque;

use crate::basis::{Membership, Point, Subbasis};
use crate::kernel::{Meter, Name, Nat, Stall};
use crate::metric::rational::{floor_dyadic, pow2_neg};
use crate::metric::{ball_code, cauchy_to_min, cauchy_to_si, BallBasis, WorldRef};

use super::WorldError;

/// The Cauchy name whose cell `n` is [`MetricWorld::cauchy_code`].
pub fn cauchy_name(world: &WorldRef, point: &Point) -> Result<Name, WorldError> {
    if world.admits(point) == Membership::Out || world.cauchy_code(point, 0).is_none() {
        return Err(WorldError::BadPoint(point.to_string(), world.id()));
    }
    let w = world.clone();
    let p = point.clone();
    Ok(Name::from_source(move |n: usize, _meter: &mut Meter| {
        w.cauchy_code(&p, n)
            .ok_or_else(|| Stall::BadInput(format!("no approximation of {p} at {n}")))
    }))
}

pub fn min_name(world: &WorldRef, point: &Point) -> Result<Name, WorldError> {
    Ok(cauchy_to_min(&cauchy_name(world, point)?))
}

pub fn si_name(world: &WorldRef, point: &Point) -> Result<Name, WorldError> {
    Ok(cauchy_to_si(&cauchy_name(world, point)?))
}

/// Codes examined by the sweep per even cell.
pub const SWEEP_CHUNK: u32 = 256;

/// A `ρ^max`-name: a list in which every ball code containing the point
/// occurs.
///
/// Even cells advance a sweep through all codes in increasing order by
/// [`SWEEP_CHUNK`] codes and emit the oldest containing code found so far,
/// or the radius-1 ball around the point when none is pending. Every code is
/// examined eventually and the queue is first-in first-out, so every
/// containing code is listed. Odd cell `2j + 1` is a ball of radius `2^{-j}`
/// centered on a dyadic truncation of the point. Without them a search for
/// small radii would wait for the sweep to reach codes that are enormous.
pub fn enumerate_max_name(world: &WorldRef, point: &Point) -> Result<Name, WorldError> {
    if !world.exact_membership() {
        return Err(WorldError::NoExactMembership(world.id()));
    }
    if world.admits(point) != Membership::In {
        return Err(WorldError::BadPoint(point.to_string(), world.id()));
    }
    let basis = BallBasis::new(world.clone());
    let w = world.clone();
    let p = point.clone();
    let near = move |j: u32| -> Result<Nat, Stall> {
        let approx = w
            .point_approx(&p, j + 3)
            .ok_or_else(|| Stall::BadInput(format!("no approximation of {p}")))?;
        let center = w
            .rational_center(&floor_dyadic(&approx, j + 3))
            .ok_or_else(|| Stall::BadInput(format!("no center near {p}")))?;
        Ok(ball_code(&center, &pow2_neg(j)))
    };
    let p = point.clone();
    let mut cursor = Nat::from(0u32);
    let mut pending: VecDeque<Nat> = VecDeque::new();
    Ok(Name::from_source(move |n: usize, _meter: &mut Meter| {
        if n % 2 == 1 {
            return near((n / 2) as u32);
        }
        for _ in 0..SWEEP_CHUNK {
            if basis.member_test(&p, &cursor) == Membership::In {
                pending.push_back(cursor.clone());
            }
            cursor += 1u32;
        }
        match pending.pop_front() {
            Some(code) => Ok(code),
            None => near(0),
        }
    }))
}
