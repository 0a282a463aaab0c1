//! Envelope functions on a finite compact `K`, the center box they determine,
//! and the selectors built from them.
//!
//! On a finite discrete `K` every net converging to a point is eventually
//! constant, so the upper envelope `b` and lower envelope `a` are the
//! pointwise limsup and liminf of the coordinates. For every `f`,
//! `limsup_n ‖f_n − f‖ = max(‖b − f‖, ‖f − a‖)`, which makes the radius
//! `½‖b − a‖` and the center set the box `∏ [b(k) − r, a(k) + r]`.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, serde_q, Q};
use crate::seq_model::{RepresentableSeq, SpaceKind};

/// A point of `K`: a coordinate (0-based) or the point at infinity of the
/// one-point compactification.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum KPoint {
    Coord(usize),
    Infinity,
}

impl Serialize for KPoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            KPoint::Coord(k) => s.serialize_u64(*k as u64 + 1),
            KPoint::Infinity => s.serialize_str("inf"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Envelope {
    points: Vec<KPoint>,
    #[serde(serialize_with = "serde_q::many")]
    lower: Vec<Q>,
    #[serde(serialize_with = "serde_q::many")]
    upper: Vec<Q>,
}

impl Envelope {
    /// Builds an envelope over coordinates `0..lower.len()`, plus `∞` when
    /// `infinity` is given as `(lower, upper)`.
    pub fn new(lower: Vec<Q>, upper: Vec<Q>, infinity: Option<(Q, Q)>) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::DimensionMismatch {
                expected: lower.len(),
                found: upper.len(),
            });
        }
        let mut points: Vec<KPoint> = (0..lower.len()).map(KPoint::Coord).collect();
        let (mut lower, mut upper) = (lower, upper);
        if let Some((lo, hi)) = infinity {
            points.push(KPoint::Infinity);
            lower.push(lo);
            upper.push(hi);
        }
        if lower.iter().zip(&upper).any(|(a, b)| a > b) {
            return Err(Error::precondition("Envelope::new", "lower must not exceed upper"));
        }
        Ok(Self {
            points,
            lower,
            upper,
        })
    }

    pub fn points(&self) -> &[KPoint] {
        &self.points
    }

    pub fn lower(&self) -> &[Q] {
        &self.lower
    }

    pub fn upper(&self) -> &[Q] {
        &self.upper
    }

    pub fn has_infinity(&self) -> bool {
        self.points.last() == Some(&KPoint::Infinity)
    }

    /// Number of finite coordinates.
    pub fn dim(&self) -> usize {
        self.points.len() - self.has_infinity() as usize
    }

    pub fn finite_lower(&self) -> &[Q] {
        &self.lower[..self.dim()]
    }

    pub fn finite_upper(&self) -> &[Q] {
        &self.upper[..self.dim()]
    }

    /// `(a(∞), b(∞))`.
    pub fn at_infinity(&self) -> Option<(&Q, &Q)> {
        self.has_infinity()
            .then(|| (self.lower.last().unwrap(), self.upper.last().unwrap()))
    }

    /// `‖b − a‖`, over every point including `∞`.
    pub fn gap(&self) -> Q {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(a, b)| b - a)
            .max()
            .unwrap_or_else(Q::zero)
    }

    fn require_finite(&self, op: &'static str) -> Result<()> {
        if self.has_infinity() {
            Err(Error::precondition(op, "envelope has a point at infinity"))
        } else {
            Ok(())
        }
    }

    fn check_vec(&self, v: &[Q]) -> Result<()> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: v.len(),
            });
        }
        Ok(())
    }

    /// `(‖b − g‖, ‖g − a‖)` over the finite coordinates.
    pub fn deviations(&self, g: &[Q]) -> Result<(Q, Q)> {
        self.check_vec(g)?;
        let upper = rational::sup_dist(self.finite_upper(), g);
        let lower = rational::sup_dist(g, self.finite_lower());
        Ok((upper, lower))
    }
}

/// Radius plus the per-coordinate intervals `[b(k) − r, a(k) + r]` whose
/// product is the center set.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CenterBox {
    #[serde(serialize_with = "serde_q::one")]
    pub radius: Q,
    #[serde(serialize_with = "serde_q::pairs")]
    pub intervals: Vec<(Q, Q)>,
}

impl CenterBox {
    pub(crate) fn from_envelope(env: &Envelope, radius: Q) -> Self {
        let intervals = env
            .finite_lower()
            .iter()
            .zip(env.finite_upper())
            .map(|(a, b)| (b - &radius, a + &radius))
            .collect();
        Self { radius, intervals }
    }

    pub fn dim(&self) -> usize {
        self.intervals.len()
    }

    pub fn contains(&self, g: &[Q]) -> bool {
        g.len() == self.dim()
            && g
                .iter()
                .zip(&self.intervals)
                .all(|(x, (lo, hi))| lo <= x && x <= hi)
    }

    /// Sup-norm distance from `h` to the box.
    pub fn distance(&self, h: &[Q]) -> Q {
        h.iter()
            .zip(&self.intervals)
            .map(|(x, (lo, hi))| {
                if x < lo {
                    lo - x
                } else if x > hi {
                    x - hi
                } else {
                    Q::zero()
                }
            })
            .max()
            .unwrap_or_else(Q::zero)
    }

    /// Nearest point of the box in every coordinate.
    pub fn project(&self, h: &[Q]) -> Vec<Q> {
        h.iter()
            .zip(&self.intervals)
            .map(|(x, (lo, hi))| rational::clamp(x, lo, hi))
            .collect()
    }
}

/// Envelopes of a `sup_finite` sequence: pointwise cycle max and min.
pub fn envelopes_finite(seq: &RepresentableSeq) -> Result<Envelope> {
    if seq.kind() != SpaceKind::SupFinite {
        return Err(Error::WrongKind {
            op: "envelopes_finite",
            kind: seq.kind(),
        });
    }
    let (lower, upper) = cycle_bounds(seq);
    Envelope::new(lower, upper, None)
}

/// Per-coordinate min and max of the core cycle.
pub(crate) fn cycle_bounds(seq: &RepresentableSeq) -> (Vec<Q>, Vec<Q>) {
    let cycle = seq.core().cycle();
    (0..seq.dim())
        .map(|k| {
            let col = cycle.iter().map(|v| &v[k]);
            let lo = rational::min_of(col.clone()).expect("cycle is nonempty");
            let hi = rational::max_of(col).expect("cycle is nonempty");
            (lo, hi)
        })
        .unzip()
}

/// Radius `½‖b − a‖` and the center box of a finite-`K` envelope.
pub fn center_box(env: &Envelope) -> Result<CenterBox> {
    env.require_finite("center_box")?;
    let radius = rational::half(&env.gap());
    let bx = CenterBox::from_envelope(env, radius);
    if bx.intervals.iter().any(|(lo, hi)| lo > hi) {
        return Err(Error::invariant("center_box", "empty interval"));
    }
    Ok(bx)
}

/// The midpoint `g = (a + b)/2`, which satisfies `‖b − g‖ = ‖g − a‖ = ½‖b − a‖`.
pub fn ndist_midpoint(env: &Envelope) -> Result<Vec<Q>> {
    env.require_finite("ndist_midpoint")?;
    let g: Vec<Q> = env
        .lower
        .iter()
        .zip(&env.upper)
        .map(|(a, b)| rational::half(&(a + b)))
        .collect();
    let target = rational::half(&env.gap());
    let (up, down) = env.deviations(&g)?;
    if up != target || down != target {
        return Err(Error::invariant(
            "ndist_midpoint",
            format!("deviations {up}, {down} differ from {target}"),
        ));
    }
    Ok(g)
}

/// A `g` with `g(t0) = s` and
/// `max(‖b − g‖, ‖g − a‖) = max(b(t0) − s, s − a(t0), ½‖b − a‖)`:
/// midpoints clamped into `[b(k) − R, a(k) + R]` away from `t0`.
pub fn ndist_pinned(env: &Envelope, t0: usize, s: &Q) -> Result<Vec<Q>> {
    env.require_finite("ndist_pinned")?;
    if t0 >= env.dim() {
        return Err(Error::precondition("ndist_pinned", "t0 out of range"));
    }
    let (a0, b0) = (&env.lower[t0], &env.upper[t0]);
    if s < a0 || s > b0 {
        return Err(Error::precondition(
            "ndist_pinned",
            format!("s = {s} outside [{a0}, {b0}]"),
        ));
    }
    let reach = (b0 - s).max(s - a0).max(rational::half(&env.gap()));
    let g: Vec<Q> = (0..env.dim())
        .map(|k| {
            if k == t0 {
                return s.clone();
            }
            let (a, b) = (&env.lower[k], &env.upper[k]);
            let mid = rational::half(&(a + b));
            rational::clamp(&mid, &(b - &reach), &(a + &reach))
        })
        .collect();
    let (up, down) = env.deviations(&g)?;
    if up.max(down) != reach {
        return Err(Error::invariant(
            "ndist_pinned",
            format!("max deviation differs from {reach}"),
        ));
    }
    Ok(g)
}

/// Output of [`canonical_selector`]: exact in sup-norm models, floating point
/// in the Euclidean model.
#[derive(Clone, Debug, PartialEq)]
pub enum Selection {
    Exact(Vec<Q>),
    Approx(Vec<f64>),
}

impl Selection {
    pub fn to_f64(&self) -> Vec<f64> {
        match self {
            Selection::Exact(v) => rational::vec_to_f64(v),
            Selection::Approx(v) => v.clone(),
        }
    }
}

/// A center chosen from the envelope or cluster structure alone: the
/// envelope midpoint (sup), the zero-clamp rule (c₀), or the
/// smallest-enclosing-ball center (Euclidean). Depends only on the cluster
/// structure, so it ignores prefixes, cycle order and `d`-equivalent changes.
pub fn canonical_selector(seq: &RepresentableSeq) -> Result<Selection> {
    match seq.kind() {
        SpaceKind::SupFinite => Ok(Selection::Exact(ndist_midpoint(&envelopes_finite(seq)?)?)),
        SpaceKind::C0Spike => {
            let env = crate::c0_lim::envelopes_c0(seq)?;
            Ok(Selection::Exact(crate::c0_lim::center_selector_c0(&env)?))
        }
        SpaceKind::Euclidean => {
            let cluster = crate::seq_model::cluster_set(seq)?;
            let ball = crate::hilbert::smallest_enclosing_ball(&cluster, 0)?;
            Ok(Selection::Approx(ball.center))
        }
        kind => Err(Error::WrongKind {
            op: "canonical_selector",
            kind,
        }),
    }
}

/// Moves `h ∈ A_δ` to `z = h + u∘(g − h)` with `u` the clamp to `[−1, 1]`;
/// `z` is a center within sup-distance 1 of `h`.
pub fn cac_clamp_recenter(env: &Envelope, g: &[Q], h: &[Q], delta: &Q) -> Result<Vec<Q>> {
    const OP: &str = "cac_clamp_recenter";
    let bx = center_box(env)?;
    env.check_vec(h)?;
    if !delta.is_positive() || *delta > Q::one() {
        return Err(Error::precondition(OP, "δ must lie in (0, 1]"));
    }
    if !bx.contains(g) {
        return Err(Error::precondition(OP, "g is not in the center set"));
    }
    let (up, down) = env.deviations(h)?;
    if up.max(down) > &bx.radius + delta {
        return Err(Error::precondition(OP, "h is not in the δ-enlargement"));
    }
    let one = Q::one();
    let minus_one = -Q::one();
    let z: Vec<Q> = h
        .iter()
        .zip(g)
        .map(|(hk, gk)| hk + rational::clamp(&(gk - hk), &minus_one, &one))
        .collect();
    if rational::sup_dist(&z, h) > one {
        return Err(Error::invariant(OP, "moved farther than 1"));
    }
    if !bx.contains(&z) {
        return Err(Error::invariant(OP, "result left the center set"));
    }
    Ok(z)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CacReport {
    pub trials: usize,
    #[serde(serialize_with = "serde_q::one")]
    pub max_distance: Q,
    #[serde(serialize_with = "serde_q::many")]
    pub witness: Vec<Q>,
    /// Samples for which the clamp recentering was also run and landed in the center set.
    pub recentered: usize,
}

/// Denominator of the sampling grid on each coordinate interval.
const SAMPLE_STEPS: i64 = 1 << 12;

/// Samples `trials` points of the box `∏ [b(k) − r − δ, a(k) + r + δ]`
/// (exactly `A_δ` in this model) and measures their sup distance to the
/// center box. The first two samples are the all-low and all-high corners.
pub fn cac_inclusion_check(
    seq: &RepresentableSeq,
    delta: &Q,
    seed: u64,
    trials: usize,
) -> Result<CacReport> {
    if delta.is_negative() || *delta > Q::one() {
        return Err(Error::precondition("cac_inclusion_check", "δ must lie in [0, 1]"));
    }
    let env = envelopes_finite(seq)?;
    let bx = center_box(&env)?;
    let g = ndist_midpoint(&env)?;
    let enlarged: Vec<(Q, Q)> = bx
        .intervals
        .iter()
        .map(|(lo, hi)| (lo - delta, hi + delta))
        .collect();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_distance = Q::zero();
    let mut witness = g.clone();
    let mut recentered = 0;
    for trial in 0..trials {
        let h: Vec<Q> = enlarged
            .iter()
            .map(|(lo, hi)| match trial {
                0 => lo.clone(),
                1 => hi.clone(),
                _ => {
                    let step = rational::frac(rng.random_range(0..=SAMPLE_STEPS), SAMPLE_STEPS);
                    lo + (hi - lo) * step
                }
            })
            .collect();
        if !crate::seq_model::delta_set_membership(seq, &h, delta, &bx.radius)? {
            return Err(Error::invariant("cac_inclusion_check", "sample outside A_δ"));
        }
        let dist = bx.distance(&h);
        if delta.is_positive() {
            cac_clamp_recenter(&env, &g, &h, delta)?;
            recentered += 1;
        }
        if dist > max_distance {
            max_distance = dist;
            witness = h;
        }
    }
    Ok(CacReport {
        trials,
        max_distance,
        witness,
        recentered,
    })
}
