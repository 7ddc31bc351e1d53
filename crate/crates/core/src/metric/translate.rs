//! Realizers between the Cauchy representation and the ball representations.
//!
//! Each realizer is a lazy transducer: output cell `n` reads a finite prefix
//! of the input. The searching realizers diverge on names that violate their
//! precondition; under a bounded meter that shows up as
//! [`Stall::OutOfFuel`], never as a wrong cell.

use num_traits::Signed;

use crate::kernel::{finset_decode, finset_singleton, Meter, Name, Nat, Stall};

use super::ball_parts;
use super::rational::{pow2_neg, rational_code, Q};

fn dyadic_radius_code(n: usize) -> Nat {
    rational_code(&pow2_neg(n as u32))
}

/// `n ↦ ⟨p(n), c_Q(2^{-n})⟩`: the balls `B(u_n, 2^{-n})`.
pub fn cauchy_to_min(p: &Name) -> Name {
    let input = p.clone();
    Name::from_source(move |n: usize, meter: &mut Meter| {
        let center = input.try_at(n, meter)?;
        Ok(crate::kernel::pair(&center, &dyadic_radius_code(n)))
    })
}

/// `q(n) = ⟨p(n), t_n⟩` with `t_n` the code of `2^{-n}`, each wrapped as a
/// singleton induced-basis code.
pub fn cauchy_to_si(p: &Name) -> Name {
    let input = p.clone();
    Name::from_source(move |n: usize, meter: &mut Meter| {
        let center = input.try_at(n, meter)?;
        Ok(finset_singleton(&crate::kernel::pair(
            &center,
            &dyadic_radius_code(n),
        )))
    })
}

/// Scans forward for the first cell accepted by `pick`, resuming where the
/// previous output cell was found. Thresholds only shrink, so no earlier cell
/// can qualify for a later output.
struct Search<P> {
    input: Name,
    cursor: usize,
    pick: P,
}

impl<P> crate::kernel::Source for Search<P>
where
    P: Fn(&Nat, &Q) -> Option<Nat>,
{
    fn produce(&mut self, n: usize, meter: &mut Meter) -> Result<Nat, Stall> {
        let threshold = pow2_neg(n as u32 + 1);
        loop {
            let cell = self.input.try_at(self.cursor, meter)?;
            if let Some(center) = (self.pick)(&cell, &threshold) {
                return Ok(center);
            }
            self.cursor += 1;
        }
    }
}

/// `p(n) = fst(q(μi. snd(q(i)) < 2^{-n-1}))`, searching every ball listed in
/// each induced code.
pub fn si_to_cauchy(q: &Name) -> Name {
    Name::from_source(Search {
        input: q.clone(),
        cursor: 0,
        pick: |cell: &Nat, threshold: &Q| {
            finset_decode(cell).iter().find_map(|ball| {
                let (center, r) = ball_parts(ball);
                (r.is_positive() && r < *threshold).then_some(center)
            })
        },
    })
}

/// Blind search in a list of all containing balls for one of radius at most
/// `2^{-n-1}`.
pub fn max_to_cauchy(f: &Name) -> Name {
    Name::from_source(Search {
        input: f.clone(),
        cursor: 0,
        pick: |ball: &Nat, threshold: &Q| {
            let (center, r) = ball_parts(ball);
            (r.is_positive() && r <= *threshold).then_some(center)
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{finset_encode, Fuel};
    use crate::metric::ball_code;
    use crate::metric::rational::{floor_dyadic, q, rational_of, zero};

    fn center(x: &Q) -> Nat {
        rational_code(x)
    }

    fn third_name() -> Name {
        // 0, 1/4, 5/16, 21/64, ...: 1/3 truncated to 2n binary digits.
        Name::from_function(|n| center(&floor_dyadic(&q(1, 3), 2 * n as u32)))
    }

    fn ball(c: Q, r: Q) -> Nat {
        ball_code(&center(&c), &r)
    }

    #[test]
    fn cauchy_to_min_on_constant_zero() {
        let out = cauchy_to_min(&Name::constant(center(&zero())));
        let expect: Vec<Nat> = (0..4).map(|k| ball(zero(), pow2_neg(k))).collect();
        assert_eq!(out.prefix(4), expect);
    }

    #[test]
    fn cauchy_to_min_on_one_third() {
        let out = cauchy_to_min(&third_name());
        assert_eq!(
            out.prefix(3),
            vec![
                ball(zero(), pow2_neg(0)),
                ball(q(1, 4), pow2_neg(1)),
                ball(q(5, 16), pow2_neg(2))
            ]
        );
        for (k, code) in out.prefix(12).iter().enumerate() {
            let (c, r) = ball_parts(code);
            assert!((q(1, 3) - rational_of(&c)).abs() < r, "ball {k}");
        }
    }

    #[test]
    fn cauchy_to_si_wraps_singletons() {
        let out = cauchy_to_si(&third_name());
        let expect: Vec<Nat> = [
            ball(zero(), pow2_neg(0)),
            ball(q(1, 4), pow2_neg(1)),
            ball(q(5, 16), pow2_neg(2)),
        ]
        .iter()
        .map(finset_singleton)
        .collect();
        assert_eq!(out.prefix(3), expect);
    }

    #[test]
    fn si_to_cauchy_on_shrinking_zero_balls() {
        let q_name = Name::from_function(|k| finset_singleton(&ball(zero(), pow2_neg(k as u32))));
        let p = si_to_cauchy(&q_name);
        assert!(p.prefix(6).iter().all(|c| rational_of(c) == zero()));
    }

    #[test]
    fn si_to_cauchy_picks_first_small_radius() {
        let list = [
            ball(zero(), q(1, 1)),
            ball(q(1, 4), q(1, 4)),
            ball(q(5, 16), q(1, 16)),
            ball(q(21, 64), q(1, 64)),
        ];
        let q_name = Name::from_prefix(list.iter().map(finset_singleton).collect());
        let p = si_to_cauchy(&q_name);
        let mut meter = Meter::unbounded();
        assert_eq!(rational_of(&p.try_at(0, &mut meter).unwrap()), q(1, 4));
        assert_eq!(rational_of(&p.try_at(1, &mut meter).unwrap()), q(5, 16));
        // The cursor resumes, so a ball may serve several thresholds.
        assert_eq!(rational_of(&p.try_at(2, &mut meter).unwrap()), q(5, 16));
        assert_eq!(rational_of(&p.try_at(3, &mut meter).unwrap()), q(21, 64));
        assert_eq!(rational_of(&p.try_at(4, &mut meter).unwrap()), q(21, 64));
        assert_eq!(p.try_at(5, &mut meter), Err(Stall::EndOfInput));
    }

    #[test]
    fn si_to_cauchy_searches_inside_induced_codes() {
        let cell = finset_encode(&[ball(q(3, 1), q(1, 1)), ball(q(1, 2), q(1, 8))]);
        let p = si_to_cauchy(&Name::constant(cell));
        let c = rational_of(&p.try_at(0, &mut Meter::unbounded()).unwrap());
        assert_eq!(c, q(1, 2));
    }

    #[test]
    fn round_trip_names_the_same_point() {
        let back = si_to_cauchy(&cauchy_to_si(&third_name()));
        for (n, c) in back.prefix(10).iter().enumerate() {
            assert!((rational_of(c) - q(1, 3)).abs() < pow2_neg(n as u32));
        }
    }

    #[test]
    fn constant_coarse_ball_exhausts_fuel() {
        let f = Name::constant(ball(q(7, 1), q(1, 4)));
        let p = max_to_cauchy(&f);
        let mut meter = Meter::new(Fuel(1000));
        let (cells, stall) = p.partial_prefix(4, &mut meter);
        assert_eq!(cells.len(), 2);
        assert_eq!(stall, Some(Stall::OutOfFuel));
    }
}
