//! Random initial conditions: point sets, frames, speeds and robot teams.

use alloc::vec::Vec;
use core::f64::consts::TAU;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::geometry::{Point, Tolerance};
use crate::model::Frame;
use crate::simulator::Robot;

pub const SIGMA_RANGE: (f64, f64) = (0.1, 2.0);
pub const SCALE_RANGE: (f64, f64) = (0.25, 4.0);

/// Uniform frame: any rotation, log-uniform scale, translation in
/// `[-1, 1]²`, reflected half the time.
pub fn random_frame<R: Rng + ?Sized>(rng: &mut R) -> Frame {
    let rotation = rng.random_range(0.0..TAU);
    let scale = libm::exp(rng.random_range(libm::log(SCALE_RANGE.0)..libm::log(SCALE_RANGE.1)));
    let translation = Point::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
    let reflected = rng.random_bool(0.5);
    Frame::new(rotation, scale, translation, reflected).expect("sampled frame parameters are valid")
}

pub fn random_sigma<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.random_range(SIGMA_RANGE.0..=SIGMA_RANGE.1)
}

/// `count` points uniform in the unit square, pairwise farther apart than
/// `10 · eps`.
pub fn random_points<R: Rng + ?Sized>(rng: &mut R, count: usize, tol: Tolerance) -> Vec<Point> {
    let min_gap = 10.0 * tol.eps();
    let mut pts: Vec<Point> = Vec::with_capacity(count);
    while pts.len() < count {
        let q = Point::new(rng.random::<f64>(), rng.random::<f64>());
        if pts.iter().all(|p| p.dist(q) > min_gap) {
            pts.push(q);
        }
    }
    pts
}

/// Splits `n` robots over `k` points, each point getting at least one.
pub fn random_multiplicities<R: Rng + ?Sized>(rng: &mut R, n: usize, k: usize) -> Vec<usize> {
    assert!(k >= 1 && k <= n, "need 1 <= k <= n");
    let mut counts = alloc::vec![1usize; k];
    for _ in 0..n - k {
        counts[rng.random_range(0..k)] += 1;
    }
    counts
}

/// A random team of `n` robots: a random number of distinct positions in
/// the unit square, random multiplicities, frames and speeds. Robot order is
/// shuffled so co-located robots are not adjacent by index.
pub fn random_team<R: Rng + ?Sized>(rng: &mut R, n: usize, tol: Tolerance) -> Vec<Robot> {
    let k = rng.random_range(1..=n);
    let pts = random_points(rng, k, tol);
    let counts = random_multiplicities(rng, n, k);
    let mut positions: Vec<Point> = pts
        .iter()
        .zip(&counts)
        .flat_map(|(&p, &c)| core::iter::repeat_n(p, c))
        .collect();
    positions.shuffle(rng);
    positions
        .into_iter()
        .map(|pos| Robot {
            pos,
            sigma: random_sigma(rng),
            frame: random_frame(rng),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::normalize;
    use crate::streams::{stream_rng, Stream};

    #[test]
    fn team_has_n_robots_and_valid_parameters() {
        let mut rng = stream_rng(11, Stream::Initializer);
        let tol = Tolerance::default();
        for n in 1..12 {
            let team = random_team(&mut rng, n, tol);
            assert_eq!(team.len(), n);
            let cfg = normalize(&team.iter().map(|r| r.pos).collect::<Vec<_>>(), tol);
            assert_eq!(cfg.robot_count(), n);
            for r in &team {
                assert!(r.sigma >= SIGMA_RANGE.0 && r.sigma <= SIGMA_RANGE.1);
                assert!(r.frame.scale() >= SCALE_RANGE.0 && r.frame.scale() <= SCALE_RANGE.1);
            }
        }
    }

    #[test]
    fn multiplicities_sum_to_n() {
        let mut rng = stream_rng(2, Stream::Initializer);
        for n in 1..20 {
            for k in 1..=n {
                let c = random_multiplicities(&mut rng, n, k);
                assert_eq!(c.iter().sum::<usize>(), n);
                assert!(c.iter().all(|&x| x >= 1));
            }
        }
    }
}
