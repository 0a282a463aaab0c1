//! Brute-force solvers that share no code path with the closed forms they
//! check. Slow by design.

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::envelope::Envelope;
use crate::error::{Error, Result};
use crate::rational::{half, Q};
use crate::seq_model::{asymptotic_distance, FinitePointSet, RepresentableSeq, SpaceKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleMethod {
    CoordinateExact,
    Enumeration,
    Subgradient,
    Truncation,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleResult<T> {
    pub value: T,
    pub argmin: Vec<T>,
    pub resolution: f64,
    pub method: OracleMethod,
}

/// Terms `1..=count` as full coordinate rows `0..width`.
fn materialize(seq: &RepresentableSeq, count: usize, width: usize) -> Vec<Vec<Q>> {
    (1..=count)
        .map(|n| (0..width).map(|k| seq.coordinate(n, k)).collect())
        .collect()
}

fn bounds<'a>(values: impl Iterator<Item = &'a Q>) -> (Q, Q) {
    let mut it = values;
    let first = it.next().expect("nonempty").clone();
    it.fold((first.clone(), first), |(lo, hi), v| {
        (if *v < lo { v.clone() } else { lo }, if *v > hi { v.clone() } else { hi })
    })
}

/// Sup-norm asymptotic radius by direct minimization of `y ↦ limsup ‖x_n − y‖`.
///
/// Past the preperiods the limsup is a max over one joint cycle, and under
/// the sup norm it separates by coordinate: each coordinate contributes
/// `max(hi − y_k, y_k − lo)`, minimized at the midpoint. Coordinates beyond
/// `dim` carry a spike (where `y` must vanish) or a tail (one free value,
/// returned as an extra coordinate of `argmin`).
pub fn radius_oracle_supnorm(seq: &RepresentableSeq) -> Result<OracleResult<Q>> {
    if seq.kind() == SpaceKind::Euclidean {
        return Err(Error::WrongKind {
            op: "radius_oracle_supnorm",
            kind: seq.kind(),
        });
    }
    let dim = seq.dim();
    let start = seq.settle_len() + 1;
    let period = seq.joint_period();
    let window: Vec<usize> = (start..start + period).collect();
    let mut argmin = Vec::with_capacity(dim + 1);
    let mut value = Q::zero();
    for k in 0..=dim {
        if k == dim && seq.kind().is_finite() {
            break;
        }
        let spike = k == dim && seq.kind() == SpaceKind::C0Spike;
        // term n carries its spike at coordinate dim + n − 1
        let column: Vec<Q> = window
            .iter()
            .map(|&n| seq.coordinate(n, if spike { k + n - 1 } else { k }))
            .collect();
        let (lo, hi) = bounds(column.iter());
        if spike {
            // each spike sits in its own coordinate, against y = 0 there
            let worst = column.iter().map(|v| v.abs()).max().expect("nonempty");
            value = value.max(worst);
            continue;
        }
        value = value.max(half(&(&hi - &lo)));
        argmin.push(half(&(hi + lo)));
    }
    let achieved = asymptotic_distance(seq, &argmin)?;
    if achieved != value {
        return Err(Error::invariant(
            "radius_oracle_supnorm",
            format!("midpoint attains {achieved}, interval bound {value}"),
        ));
    }
    Ok(OracleResult {
        value,
        argmin,
        resolution: 0.0,
        method: OracleMethod::CoordinateExact,
    })
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

fn farthest(points: &[Vec<f64>], y: &[f64]) -> (usize, f64) {
    points
        .iter()
        .enumerate()
        .map(|(i, p)| (i, dist(p, y)))
        .fold((0, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best })
}

/// Subgradient descent on `f(y) = max_p ‖p − y‖`.
///
/// Schedule: `epochs` rounds of `iters` steps of length `c/√t` along the unit
/// subgradient, restarting each round from the best point seen with `c`
/// halved. Round zero starts from the centroid with `c` the initial value of
/// `f`. A second run starts from a point drawn with `seed` inside the
/// bounding box; the better result is returned.
pub fn radius_oracle_euclid(points: &FinitePointSet, seed: u64, iters: usize) -> Result<OracleResult<f64>> {
    if points.is_empty() {
        return Err(Error::EmptySet);
    }
    let pts = points.to_f64();
    let dim = points.dim();
    let centroid: Vec<f64> = (0..dim)
        .map(|k| pts.iter().map(|p| p[k]).sum::<f64>() / pts.len() as f64)
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let random_start: Vec<f64> = (0..dim)
        .map(|k| {
            let lo = pts.iter().map(|p| p[k]).fold(f64::INFINITY, f64::min);
            let hi = pts.iter().map(|p| p[k]).fold(f64::NEG_INFINITY, f64::max);
            if hi > lo {
                rng.random_range(lo..=hi)
            } else {
                lo
            }
        })
        .collect();
    let a = subgradient_run(&pts, centroid, iters);
    let b = subgradient_run(&pts, random_start, iters);
    let (value, argmin) = if a.0 <= b.0 { a } else { b };
    Ok(OracleResult {
        value,
        argmin,
        resolution: 1e-6,
        method: OracleMethod::Subgradient,
    })
}

const EPOCHS: usize = 60;

fn subgradient_run(pts: &[Vec<f64>], start: Vec<f64>, iters: usize) -> (f64, Vec<f64>) {
    let mut best_y = start;
    let mut best = farthest(pts, &best_y).1;
    let mut c = best;
    for _ in 0..EPOCHS {
        if c <= 1e-15 {
            break;
        }
        let mut y = best_y.clone();
        for t in 1..=iters {
            let (i, r) = farthest(pts, &y);
            if r <= 0.0 {
                return (0.0, y);
            }
            let step = c / (t as f64).sqrt();
            for (yk, pk) in y.iter_mut().zip(&pts[i]) {
                *yk += step * (*pk - *yk) / r;
            }
            let f = farthest(pts, &y).1;
            if f < best {
                best = f;
                best_y = y.clone();
            }
        }
        c *= 0.5;
    }
    (best, best_y)
}

/// Exact Euclidean Chebyshev radius by enumerating candidate supports: for
/// every subset of at most `dim + 1` points, the circumcenter in its affine
/// hull, kept if it covers all points. The smallest such ball is optimal.
pub fn radius_oracle_enumerate(points: &FinitePointSet) -> Result<OracleResult<f64>> {
    if points.is_empty() {
        return Err(Error::EmptySet);
    }
    let pts = points.to_f64();
    let n = pts.len();
    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut subset = Vec::new();
    enumerate_subsets(n, points.dim() + 1, 0, &mut subset, &mut |s| {
        if let Some(c) = circumcenter(&pts, s) {
            let r = dist(&c, &pts[s[0]]);
            if pts.iter().all(|p| dist(p, &c) <= r + 1e-10 * (1.0 + r))
                && best.as_ref().is_none_or(|(b, _)| r < *b)
            {
                best = Some((r, c));
            }
        }
    });
    let (value, argmin) = best.ok_or_else(|| Error::invariant("radius_oracle_enumerate", "no covering ball"))?;
    Ok(OracleResult {
        value,
        argmin,
        resolution: 1e-9,
        method: OracleMethod::Enumeration,
    })
}

fn enumerate_subsets(n: usize, max: usize, start: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
    if !cur.is_empty() {
        f(cur);
    }
    if cur.len() == max {
        return;
    }
    for i in start..n {
        cur.push(i);
        enumerate_subsets(n, max, i + 1, cur, f);
        cur.pop();
    }
}

/// Point of `aff(S)` equidistant from every point of `S`, by Gaussian
/// elimination with partial pivoting; `None` when `S` is affinely dependent.
fn circumcenter(pts: &[Vec<f64>], s: &[usize]) -> Option<Vec<f64>> {
    let p0 = &pts[s[0]];
    let k = s.len() - 1;
    let v: Vec<Vec<f64>> = s[1..]
        .iter()
        .map(|&i| pts[i].iter().zip(p0).map(|(a, b)| a - b).collect())
        .collect();
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    let mut m: Vec<Vec<f64>> = (0..k)
        .map(|i| {
            let mut row: Vec<f64> = (0..k).map(|j| dot(&v[i], &v[j])).collect();
            row.push(0.5 * dot(&v[i], &v[i]));
            row
        })
        .collect();
    let scale = m.iter().flatten().fold(0.0f64, |a, b| a.max(b.abs())).max(1e-300);
    for col in 0..k {
        let pivot = (col..k).max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))?;
        if m[pivot][col].abs() < 1e-10 * scale {
            return None;
        }
        m.swap(col, pivot);
        for row in 0..k {
            if row != col {
                let factor = m[row][col] / m[col][col];
                for j in col..=k {
                    let sub = factor * m[col][j];
                    m[row][j] -= sub;
                }
            }
        }
    }
    let mut c = p0.clone();
    for i in 0..k {
        let lambda = m[i][k] / m[i][i];
        for (ck, vk) in c.iter_mut().zip(&v[i]) {
            *ck += lambda * vk;
        }
    }
    Some(c)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    Alpha,
    Beta,
    Gamma,
    Delta,
}

impl Quantity {
    pub const ALL: [Quantity; 4] = [Quantity::Alpha, Quantity::Beta, Quantity::Gamma, Quantity::Delta];
}

struct Truncation {
    dim: usize,
    horizon: usize,
    width: usize,
    rows: Vec<Vec<Q>>,
    first: usize,
    second: usize,
}

impl Truncation {
    fn new(seq: &RepresentableSeq, horizon: usize) -> Result<Self> {
        let first = seq.settle_len().max(seq.dim()) + 1;
        let period = seq.joint_period();
        let needed = first + 2 * period - 1;
        if horizon < needed {
            return Err(Error::HorizonTooShort { needed, got: horizon });
        }
        let width = if seq.kind().is_finite() { seq.dim() } else { seq.dim() + horizon };
        Ok(Self {
            dim: seq.dim(),
            horizon,
            width,
            rows: materialize(seq, horizon, width),
            first,
            second: first + period,
        })
    }

    /// Range of coordinate `k` over the terms `m..=horizon`.
    fn range(&self, m: usize, k: usize) -> Q {
        let (lo, hi) = bounds((m..=self.horizon).map(|n| &self.rows[n - 1][k]));
        hi - lo
    }

    /// `sup_k sup_{i,j ≥ m} |x_i(k) − x_j(k)|`
    fn alpha(&self, m: usize) -> Q {
        (0..self.width).map(|k| self.range(m, k)).max().expect("width ≥ 1")
    }

    /// The same over coordinates that every window term already shares with
    /// its limit behaviour: core coordinates, plus spike/tail coordinates
    /// whose own spike position precedes the window.
    fn beta(&self, m: usize) -> Q {
        let settled = if self.width == self.dim { self.dim } else { self.dim + m - 1 };
        (0..settled).map(|k| self.range(m, k)).max().expect("dim ≥ 1")
    }

    /// Values `x_n(k)` with `n ≥ m` and `k ≥ m − 1`.
    fn far_values(&self, m: usize) -> Vec<&Q> {
        if self.width == self.dim {
            return Vec::new();
        }
        (m..=self.horizon)
            .flat_map(|n| self.rows[n - 1][m - 1..].iter())
            .collect()
    }

    fn gamma(&self, m: usize) -> Q {
        let vals = self.far_values(m);
        if vals.is_empty() {
            return Q::zero();
        }
        let (lo, hi) = bounds(vals.into_iter());
        hi - lo
    }

    fn delta(&self, m: usize) -> Q {
        self.far_values(m).into_iter().map(|v| v.abs()).max().unwrap_or_else(Q::zero)
    }

    fn eval(&self, q: Quantity, m: usize) -> Q {
        match q {
            Quantity::Alpha => self.alpha(m),
            Quantity::Beta => self.beta(m),
            Quantity::Gamma => self.gamma(m),
            Quantity::Delta => self.delta(m),
        }
    }
}

fn stabilized(what: &'static str, a: Q, b: Q) -> Result<Q> {
    if a != b {
        return Err(Error::NotStabilized {
            quantity: what,
            first: crate::rational::format(&a),
            second: crate::rational::format(&b),
        });
    }
    Ok(a)
}

/// Window quantities evaluated on the literal matrix of terms `n ≤ horizon`
/// and coordinates `k < dim + horizon`, at two window starts one joint cycle
/// apart, which must agree.
pub fn truncation_oracle(seq: &RepresentableSeq, quantity: Quantity, horizon: usize) -> Result<OracleResult<Q>> {
    let t = Truncation::new(seq, horizon)?;
    let name = match quantity {
        Quantity::Alpha => "alpha",
        Quantity::Beta => "beta",
        Quantity::Gamma => "gamma",
        Quantity::Delta => "delta",
    };
    let value = stabilized(name, t.eval(quantity, t.first), t.eval(quantity, t.second))?;
    Ok(OracleResult {
        value,
        argmin: Vec::new(),
        resolution: 0.0,
        method: OracleMethod::Truncation,
    })
}

/// Envelope functions from the same literal matrix: per core coordinate the
/// min/max over the window, and for spike sequences the point at infinity as
/// the min/max of the far corner of the window together with 0.
pub fn truncation_envelope(seq: &RepresentableSeq, horizon: usize) -> Result<Envelope> {
    let t = Truncation::new(seq, horizon)?;
    let side = |m: usize| {
        let mut lower = Vec::with_capacity(t.dim);
        let mut upper = Vec::with_capacity(t.dim);
        for k in 0..t.dim {
            let (lo, hi) = bounds((m..=t.horizon).map(|n| &t.rows[n - 1][k]));
            lower.push(lo);
            upper.push(hi);
        }
        let infinity = match seq.kind() {
            SpaceKind::C0Spike => {
                let zero = Q::zero();
                let (lo, hi) = bounds(t.far_values(m).into_iter().chain([&zero]));
                Some((lo, hi))
            }
            _ => None,
        };
        (lower, upper, infinity)
    };
    match seq.kind() {
        SpaceKind::SupFinite | SpaceKind::C0Spike => {}
        kind => {
            return Err(Error::WrongKind {
                op: "truncation_envelope",
                kind,
            })
        }
    }
    let (a, b) = (side(t.first), side(t.second));
    if a != b {
        return Err(Error::NotStabilized {
            quantity: "envelope",
            first: format!("{:?}", a),
            second: format!("{:?}", b),
        });
    }
    Envelope::new(a.0, a.1, a.2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ints};
    use crate::seq_model::Periodic;

    fn e_n() -> RepresentableSeq {
        RepresentableSeq::c0(Periodic::constant(ints(&[0])), Periodic::constant(int(1))).unwrap()
    }

    #[test]
    fn supnorm_examples() {
        let s = RepresentableSeq::sup(vec![], vec![ints(&[0, 0]), ints(&[2, 4])]).unwrap();
        let r = radius_oracle_supnorm(&s).unwrap();
        assert_eq!(r.value, int(2));
        assert_eq!(r.argmin[1], int(2));
        assert!(r.argmin[0] >= int(0) && r.argmin[0] <= int(2));

        let r = radius_oracle_supnorm(&e_n()).unwrap();
        assert_eq!((r.value, r.argmin), (int(1), ints(&[0])));

        let c = RepresentableSeq::sup(vec![ints(&[9, 9])], vec![ints(&[3, -1])]).unwrap();
        assert_eq!(radius_oracle_supnorm(&c).unwrap().value, int(0));
    }

    #[test]
    fn supnorm_tail_is_a_free_coordinate() {
        let t = RepresentableSeq::with_tail(
            SpaceKind::LinfTail,
            Periodic::constant(ints(&[0])),
            Periodic::new(vec![], ints(&[1, -1])).unwrap(),
        )
        .unwrap();
        let r = radius_oracle_supnorm(&t).unwrap();
        assert_eq!((r.value, r.argmin), (int(1), ints(&[0, 0])));
    }

    #[test]
    fn euclid_examples() {
        let two = FinitePointSet::new(vec![ints(&[-1, 0]), ints(&[1, 0])]).unwrap();
        let r = radius_oracle_euclid(&two, 1, 2000).unwrap();
        assert!((r.value - 1.0).abs() < 1e-6);
        assert!((radius_oracle_enumerate(&two).unwrap().value - 1.0).abs() < 1e-12);

        let one = FinitePointSet::new(vec![ints(&[4, 4])]).unwrap();
        assert_eq!(radius_oracle_euclid(&one, 1, 100).unwrap().value, 0.0);
        assert_eq!(radius_oracle_enumerate(&one).unwrap().value, 0.0);
    }

    #[test]
    fn euclid_random_sets_match_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let dim = rng.random_range(1..=3);
            let pts: Vec<Vec<Q>> = (0..10)
                .map(|_| (0..dim).map(|_| int(rng.random_range(-20..=20))).collect())
                .collect();
            let set = FinitePointSet::new(pts).unwrap();
            let exact = radius_oracle_enumerate(&set).unwrap().value;
            let sub = radius_oracle_euclid(&set, 7, 2000).unwrap().value;
            assert!(sub >= exact - 1e-9, "{sub} < {exact}");
            assert!(sub - exact < 1e-6, "{sub} vs {exact}");
        }
    }

    #[test]
    fn truncation_examples() {
        let r = truncation_oracle(&e_n(), Quantity::Alpha, 50).unwrap();
        assert_eq!(r.value, int(1));

        let zero = RepresentableSeq::c0(Periodic::constant(ints(&[0, 0])), Periodic::constant(int(0))).unwrap();
        for q in Quantity::ALL {
            assert_eq!(truncation_oracle(&zero, q, 20).unwrap().value, int(0));
        }

        let alt = RepresentableSeq::with_tail(
            SpaceKind::CTail,
            Periodic::constant(ints(&[0])),
            Periodic::new(vec![], ints(&[1, -1])).unwrap(),
        )
        .unwrap();
        assert_eq!(truncation_oracle(&alt, Quantity::Gamma, 20).unwrap().value, int(2));
        assert!(matches!(
            truncation_oracle(&alt, Quantity::Gamma, 3),
            Err(Error::HorizonTooShort { .. })
        ));
    }

    #[test]
    fn truncation_envelope_of_e_n() {
        let env = truncation_envelope(&e_n(), 20).unwrap();
        assert_eq!(env.finite_lower(), &ints(&[0])[..]);
        assert_eq!(env.at_infinity(), Some((&int(0), &int(1))));
    }
}
