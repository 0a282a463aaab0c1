//! Euclidean asymptotic centers.
//!
//! In a Hilbert space the asymptotic center of an eventually periodic
//! sequence is unique and equals the Chebyshev center of its cluster set, so
//! everything here runs through a smallest enclosing ball solver.

use nalgebra::{DMatrix, DVector};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::metric::pseudometric_d;
use crate::norm::EuclidNorm;
use crate::seq_model::{cluster_set, FinitePointSet, Periodic, RepresentableSeq, SpaceKind};

pub const GEOMETRY_TOL: f64 = 1e-9;
pub const SLACK_TOL: f64 = 1e-7;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BallCenter {
    pub center: Vec<f64>,
    pub radius: f64,
    /// Indices of input points on the boundary, ascending.
    pub support: Vec<usize>,
}

pub(crate) fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

struct Ball {
    center: Vec<f64>,
    radius: f64,
}

impl Ball {
    fn covers(&self, p: &[f64]) -> bool {
        self.radius >= 0.0 && dist(&self.center, p) <= self.radius * (1.0 + 1e-12) + 1e-13
    }
}

/// Smallest ball with every point of `boundary` on its sphere: the
/// circumcenter within the affine hull.
fn circumball(points: &[Vec<f64>], boundary: &[usize]) -> Ball {
    let Some(&first) = boundary.first() else {
        return Ball {
            center: Vec::new(),
            radius: -1.0,
        };
    };
    let p0 = &points[first];
    let k = boundary.len() - 1;
    if k == 0 {
        return Ball {
            center: p0.clone(),
            radius: 0.0,
        };
    }
    let dim = p0.len();
    let v = DMatrix::from_fn(dim, k, |r, c| points[boundary[c + 1]][r] - p0[r]);
    let gram = v.transpose() * &v;
    let rhs = DVector::from_fn(k, |i, _| 0.5 * v.column(i).norm_squared());
    let lambda = match gram.clone().lu().solve(&rhs) {
        Some(l) if l.iter().all(|x| x.is_finite()) => l,
        _ => gram
            .svd(true, true)
            .solve(&rhs, 1e-12)
            .unwrap_or_else(|_| DVector::zeros(k)),
    };
    let offset = v * lambda;
    let center: Vec<f64> = p0.iter().zip(offset.iter()).map(|(a, b)| a + b).collect();
    let radius = boundary
        .iter()
        .map(|&i| dist(&center, &points[i]))
        .fold(0.0, f64::max);
    Ball { center, radius }
}

fn move_to_front(points: &[Vec<f64>], order: &mut [usize], end: usize, boundary: &mut Vec<usize>) -> Ball {
    let mut ball = circumball(points, boundary);
    if boundary.len() == points[0].len() + 1 {
        return ball;
    }
    for i in 0..end {
        let p = order[i];
        if !ball.covers(&points[p]) {
            boundary.push(p);
            ball = move_to_front(points, order, i, boundary);
            boundary.pop();
            order[..=i].rotate_right(1);
        }
    }
    ball
}

/// Smallest enclosing ball of `points`. Duplicates are removed before the
/// recursion and the insertion order is shuffled with `seed`.
pub fn smallest_enclosing_ball_f64(points: &[Vec<f64>], seed: u64) -> Result<BallCenter> {
    let Some(first) = points.first() else {
        return Err(Error::EmptySet);
    };
    let dim = first.len();
    if points.iter().any(|p| p.len() != dim) {
        return Err(Error::precondition("smallest_enclosing_ball", "points differ in dimension"));
    }
    let mut unique: Vec<usize> = Vec::new();
    for (i, p) in points.iter().enumerate() {
        if !unique.iter().any(|&j| points[j] == *p) {
            unique.push(i);
        }
    }
    let mut order = unique.clone();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let end = order.len();
    let ball = if dim == 0 {
        Ball {
            center: Vec::new(),
            radius: 0.0,
        }
    } else {
        move_to_front(points, &mut order, end, &mut Vec::new())
    };
    let radius = points
        .iter()
        .map(|p| dist(&ball.center, p))
        .fold(0.0, f64::max);
    let support = (0..points.len())
        .filter(|&i| dist(&ball.center, &points[i]) >= radius - GEOMETRY_TOL)
        .collect();
    Ok(BallCenter {
        center: ball.center,
        radius,
        support,
    })
}

pub fn smallest_enclosing_ball(points: &FinitePointSet, seed: u64) -> Result<BallCenter> {
    smallest_enclosing_ball_f64(&points.to_f64(), seed)
}

fn require_euclid(seq: &RepresentableSeq, op: &'static str) -> Result<()> {
    if seq.kind() != SpaceKind::Euclidean {
        return Err(Error::WrongKind { op, kind: seq.kind() });
    }
    Ok(())
}

fn require_positive(eps: f64, op: &'static str) -> Result<()> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::precondition(op, "ε must be positive"));
    }
    Ok(())
}

/// Asymptotic center and radius of a Euclidean sequence.
pub fn asymptotic_center_euclid(seq: &RepresentableSeq) -> Result<BallCenter> {
    require_euclid(seq, "asymptotic_center_euclid")?;
    smallest_enclosing_ball(&cluster_set(seq)?, 0)
}

/// Keeps the terms farther than `r − ε` from the asymptotic center; the
/// result has the same center and radius.
pub fn far_subsequence(seq: &RepresentableSeq, eps: f64) -> Result<RepresentableSeq> {
    require_euclid(seq, "far_subsequence")?;
    require_positive(eps, "far_subsequence")?;
    let ball = asymptotic_center_euclid(seq)?;
    let threshold = ball.radius - eps - GEOMETRY_TOL;
    let far = |p: &Vec<crate::rational::Q>| {
        dist(&crate::rational::vec_to_f64(p), &ball.center) > threshold
    };
    let pre: Vec<_> = seq.core().preperiod().iter().filter(|p| far(p)).cloned().collect();
    let cycle: Vec<_> = seq.core().cycle().iter().filter(|p| far(p)).cloned().collect();
    if cycle.is_empty() {
        return Err(Error::invariant("far_subsequence", "no cycle term attains the radius"));
    }
    let out = RepresentableSeq::new(SpaceKind::Euclidean, seq.dim(), Periodic::new(pre, cycle)?, None, None)?;
    let check = asymptotic_center_euclid(&out)?;
    let shift = dist(&check.center, &ball.center);
    if shift > GEOMETRY_TOL || (check.radius - ball.radius).abs() > GEOMETRY_TOL {
        return Err(Error::invariant(
            "far_subsequence",
            format!("center moved by {shift:e}, radius {} vs {}", check.radius, ball.radius),
        ));
    }
    Ok(out)
}

/// Euclidean distance from `z` to the convex hull of `points`, by projecting
/// onto the affine hull of every subset of at most `dim + 1` points and
/// keeping projections with nonnegative barycentric weights.
pub fn distance_to_hull(z: &[f64], points: &[Vec<f64>]) -> Result<f64> {
    if points.is_empty() {
        return Err(Error::EmptySet);
    }
    let dim = z.len();
    let mut best = f64::INFINITY;
    for size in 1..=points.len().min(dim + 1) {
        for subset in crate::norm::combinations(points.len(), size) {
            if let Some(d) = affine_projection_distance(z, points, &subset) {
                best = best.min(d);
            }
            if best <= 1e-15 {
                return Ok(best);
            }
        }
    }
    Ok(best)
}

fn affine_projection_distance(z: &[f64], points: &[Vec<f64>], subset: &[usize]) -> Option<f64> {
    let p0 = &points[subset[0]];
    let k = subset.len() - 1;
    if k == 0 {
        return Some(dist(z, p0));
    }
    let dim = z.len();
    let v = DMatrix::from_fn(dim, k, |r, c| points[subset[c + 1]][r] - p0[r]);
    let w = DVector::from_fn(dim, |r, _| z[r] - p0[r]);
    let gram = v.transpose() * &v;
    if gram.determinant().abs() < 1e-12 * gram.norm().powi(k as i32).max(1e-300) {
        return None;
    }
    let lambda = gram.lu().solve(&(v.transpose() * &w))?;
    let w0 = 1.0 - lambda.sum();
    if w0 < -1e-12 || lambda.iter().any(|&l| l < -1e-12) {
        return None;
    }
    Some((w - v * lambda).norm())
}

/// Distance from the asymptotic center to the convex hull of the cluster
/// points at distance at least `r − ε` from it.
pub fn hull_membership_check(seq: &RepresentableSeq, eps: f64) -> Result<f64> {
    require_euclid(seq, "hull_membership_check")?;
    require_positive(eps, "hull_membership_check")?;
    let points = cluster_set(seq)?.to_f64();
    let ball = smallest_enclosing_ball_f64(&points, 0)?;
    let far: Vec<Vec<f64>> = points
        .into_iter()
        .filter(|p| dist(p, &ball.center) >= ball.radius - eps - GEOMETRY_TOL)
        .collect();
    distance_to_hull(&ball.center, &far)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HolderReport {
    pub d: f64,
    pub r1: f64,
    pub r2: f64,
    pub center_gap: f64,
    /// `d(r1 + r2 + d) − ‖c1 − c2‖²`
    pub slack: f64,
}

fn holder_report(c1: &BallCenter, c2: &BallCenter, d: f64, what: &'static str) -> Result<HolderReport> {
    let center_gap = dist(&c1.center, &c2.center);
    let slack = d * (c1.radius + c2.radius + d) - center_gap * center_gap;
    if slack < -SLACK_TOL {
        return Err(Error::BoundViolated { what, slack });
    }
    Ok(HolderReport {
        d,
        r1: c1.radius,
        r2: c2.radius,
        center_gap,
        slack,
    })
}

pub fn holder_bound_check(x: &RepresentableSeq, y: &RepresentableSeq) -> Result<HolderReport> {
    require_euclid(x, "holder_bound_check")?;
    require_euclid(y, "holder_bound_check")?;
    let d = pseudometric_d(x, y, &EuclidNorm)?;
    holder_report(&asymptotic_center_euclid(x)?, &asymptotic_center_euclid(y)?, d, "holder")
}

pub fn hausdorff_f64(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    let directed = |s: &[Vec<f64>], t: &[Vec<f64>]| {
        s.iter()
            .map(|p| t.iter().map(|q| dist(p, q)).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    };
    directed(a, b).max(directed(b, a))
}

pub fn baronti_papini_sets_check(a: &FinitePointSet, b: &FinitePointSet) -> Result<HolderReport> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    let (pa, pb) = (a.to_f64(), b.to_f64());
    let d = hausdorff_f64(&pa, &pb);
    holder_report(
        &smallest_enclosing_ball_f64(&pa, 0)?,
        &smallest_enclosing_ball_f64(&pb, 0)?,
        d,
        "baronti-papini",
    )
}
