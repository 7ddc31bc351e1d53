//! Seeded fixtures: ball codes, points, and `(point, ball)` pairs for the
//! axiom, adapter and monitor checks.
//!
//! Centers and radii come from a coarse dyadic grid so that sampled balls
//! overlap, nest and touch often enough for the checks to bite.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::basis::{Membership, Point, Subbasis};
use crate::kernel::{finset_encode, Nat};
use crate::metric::rational::{pow2_neg, q, Q};
use crate::metric::{ball_code, BallBasis, WorldRef};

use super::World;

fn grid_rational(rng: &mut StdRng, span: i64, den: i64) -> Q {
    q(rng.random_range(-span..=span), den)
}

fn grid_radius(rng: &mut StdRng) -> Q {
    if rng.random_bool(0.25) {
        pow2_neg(rng.random_range(0..8))
    } else {
        q(rng.random_range(1..=48), 16)
    }
}

/// Center codes beyond the rationals: registry slots, including partial and
/// divergent ones.
fn special_centers(world: &World) -> Vec<Nat> {
    match world {
        World::Registry(r) => (0..r.slots().len())
            .map(super::RegistryWorld::slot_code)
            .collect(),
        _ => Vec::new(),
    }
}

fn rational_center(world: &WorldRef, rng: &mut StdRng, nonnegative: bool) -> Option<Nat> {
    let x = if nonnegative {
        q(rng.random_range(0..=24), rng.random_range(1..=2))
    } else {
        grid_rational(rng, 48, 16)
    };
    world.rational_center(&x)
}

/// `count` ball codes of a metric world, a quarter of them centered on
/// registry slots when the world has any.
pub fn sample_ball_codes(world: &World, count: usize, seed: u64) -> Vec<Nat> {
    let Ok(metric) = world.metric() else {
        return Vec::new();
    };
    let mut rng = StdRng::seed_from_u64(seed);
    let special = special_centers(world);
    let nonnegative = matches!(world, World::KSpace(_) | World::Discrete(_));
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let center = if !special.is_empty() && rng.random_bool(0.25) {
            special[rng.random_range(0..special.len())].clone()
        } else {
            match rational_center(&metric, &mut rng, nonnegative) {
                Some(c) => c,
                None => continue,
            }
        };
        out.push(ball_code(&center, &grid_radius(&mut rng)));
    }
    out
}

/// `count` induced codes, each the intersection of one to three sampled
/// balls.
pub fn sample_induced_codes(world: &World, count: usize, seed: u64) -> Vec<Nat> {
    let balls = sample_ball_codes(world, 3 * count, seed);
    let mut rng = StdRng::seed_from_u64(seed ^ 0x5eed);
    (0..count)
        .map(|i| {
            let k = rng.random_range(1..=3usize);
            finset_encode(&balls[3 * i..3 * i + k])
        })
        .collect()
}

/// `count` points of the world.
pub fn sample_points(world: &World, count: usize, seed: u64) -> Vec<Point> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let slots: Vec<usize> = match world {
        World::Registry(r) => (0..r.slots().len())
            .filter(|&s| r.slots()[s].is_total())
            .collect(),
        _ => Vec::new(),
    };
    while out.len() < count {
        let p = match world {
            World::Singleton(_) => Point::Index(Nat::from(rng.random_range(0..4096u32))),
            World::Discrete(_) => Point::Index(Nat::from(rng.random_range(0..24u32))),
            World::KSpace(k) => {
                let x = q(rng.random_range(0..=96), 4);
                if !k.admits_rational(&x) {
                    continue;
                }
                Point::Rational(x)
            }
            World::Registry(_) if !slots.is_empty() && rng.random_bool(0.25) => {
                Point::Registry(slots[rng.random_range(0..slots.len())])
            }
            _ => Point::Rational(grid_rational(&mut rng, 96, 32)),
        };
        out.push(p);
    }
    out
}

/// `count` pairs `(x, d)` with `x` a rational point inside the ball `d`,
/// whose center may be a registry slot.
pub fn sample_containing_pairs(world: &World, count: usize, seed: u64) -> Vec<(Point, Nat)> {
    let Ok(metric) = world.metric() else {
        return Vec::new();
    };
    let basis = BallBasis::new(metric.clone());
    let mut rng = StdRng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let codes = sample_ball_codes(world, 4 * count + 16, seed ^ 0xba11);
    let mut i = 0;
    while out.len() < count {
        let d = codes[i % codes.len()].clone();
        i += 1;
        let x = if matches!(world, World::Discrete(_) | World::KSpace(_)) {
            Point::Rational(q(rng.random_range(0..=24), 1))
        } else {
            let den = rng.random_range(1..=32);
            Point::Rational(grid_rational(&mut rng, 96, den))
        };
        let x = match basis.member_test(&x, &d) {
            Membership::In => x,
            _ => {
                // Fall back to a point near the center.
                let (c, r) = crate::metric::ball_parts(&d);
                let Some(v) = metric.center_approx(&c, 24) else {
                    continue;
                };
                let shift = &r * q(rng.random_range(-7..=7), 16);
                let p = Point::Rational(crate::metric::rational::floor_dyadic(&(v + shift), 24));
                if basis.member_test(&p, &d) != Membership::In {
                    continue;
                }
                p
            }
        };
        out.push((x, d));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::worlds::make_world;

    #[test]
    fn samples_are_seeded() {
        let w = make_world("R-registry --with pi,e,partial:40").unwrap();
        assert_eq!(sample_ball_codes(&w, 30, 5), sample_ball_codes(&w, 30, 5));
        assert_ne!(sample_ball_codes(&w, 30, 5), sample_ball_codes(&w, 30, 6));
        assert_eq!(sample_points(&w, 30, 5).len(), 30);
    }

    #[test]
    fn containing_pairs_contain() {
        for spec in ["R-rational", "R-registry", "N-discrete"] {
            let w = make_world(spec).unwrap();
            let basis = BallBasis::new(w.metric().unwrap());
            for (x, d) in sample_containing_pairs(&w, 40, 2) {
                assert_eq!(basis.member_test(&x, &d), Membership::In, "{spec}");
            }
        }
    }

    #[test]
    fn kspace_points_are_admitted() {
        let w = make_world("K-space --fuel 1000").unwrap();
        let m = w.metric().unwrap();
        assert!(sample_points(&w, 50, 1)
            .iter()
            .all(|p| m.admits(p) == Membership::In));
    }
}
