//! Tail sets `C_n(x) = {x_m : m ≥ n}` and the tail pseudometric
//!
//! `d(x, y) = inf{ε > 0 : ∀n ∃m, C_m(x) ⊆ C_n(y) + εB and C_m(y) ⊆ C_n(x) + εB}`.
//!
//! For eventually periodic sequences in `ℝ^dim`, `C_m` equals the cluster set
//! once `m` is past the preperiod and every `C_n` contains it, so `d` reduces
//! to the Hausdorff distance between cluster sets. The truncated estimator
//! checks the defining quantifiers directly and guards that reduction.

use std::collections::BTreeSet;

use num_traits::Signed;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::norm::{Norm, SupNorm};
use crate::rational::Q;
use crate::seq_model::{cluster_set, RepresentableSeq};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TailSet {
    pub index: usize,
    pub points: Vec<Vec<Q>>,
}

pub fn tail_set(seq: &RepresentableSeq, n: usize) -> Result<TailSet> {
    if !seq.kind().is_finite() {
        return Err(Error::WrongKind {
            op: "tail_set",
            kind: seq.kind(),
        });
    }
    if n == 0 {
        return Err(Error::precondition("tail_set", "n must be ≥ 1"));
    }
    let points: BTreeSet<Vec<Q>> = seq.core().tail_values(n).cloned().collect();
    Ok(TailSet {
        index: n,
        points: points.into_iter().collect(),
    })
}

fn max_value<V: PartialOrd>(acc: Option<V>, v: V) -> Option<V> {
    match acc {
        Some(a) if a >= v => Some(a),
        _ => Some(v),
    }
}

fn min_value<V: PartialOrd>(acc: Option<V>, v: V) -> Option<V> {
    match acc {
        Some(a) if a <= v => Some(a),
        _ => Some(v),
    }
}

/// `sup_{a ∈ A} inf_{b ∈ B} ‖a − b‖`: the least ε with `A ⊆ B + εB_X`.
pub fn directed_hausdorff<N: Norm>(a: &[Vec<Q>], b: &[Vec<Q>], norm: &N) -> N::Value {
    directed_by(a.len(), b.len(), |i, j| norm.dist(&a[i], &b[j])).unwrap_or_else(|| norm.zero())
}

pub fn hausdorff<N: Norm>(a: &[Vec<Q>], b: &[Vec<Q>], norm: &N) -> N::Value {
    let ab = directed_hausdorff(a, b, norm);
    let ba = directed_hausdorff(b, a, norm);
    if ab >= ba {
        ab
    } else {
        ba
    }
}

fn directed_by<V: PartialOrd>(
    len_a: usize,
    len_b: usize,
    dist: impl Fn(usize, usize) -> V,
) -> Option<V> {
    (0..len_a)
        .filter_map(|i| (0..len_b).map(|j| dist(i, j)).fold(None, min_value))
        .fold(None, max_value)
}

fn check_pair(x: &RepresentableSeq, y: &RepresentableSeq, op: &'static str) -> Result<()> {
    if x.kind() != y.kind() {
        return Err(Error::precondition(
            op,
            format!("kinds differ: {} vs {}", x.kind(), y.kind()),
        ));
    }
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch {
            expected: x.dim(),
            found: y.dim(),
        });
    }
    Ok(())
}

/// Exact `d(x, y)` for finite-dimensional kinds: the Hausdorff distance of
/// the cluster sets.
pub fn pseudometric_d<N: Norm>(
    x: &RepresentableSeq,
    y: &RepresentableSeq,
    norm: &N,
) -> Result<N::Value> {
    check_pair(x, y, "pseudometric_d")?;
    let cx = cluster_set(x)?;
    let cy = cluster_set(y)?;
    Ok(hausdorff(cx.points(), cy.points(), norm))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DistanceBounds<V> {
    pub lo: V,
    pub hi: V,
}

/// Bounds on `d(x, y)` from the terms `1..=horizon`, writing
/// `W_j = {x_i : j ≤ i ≤ horizon}` for the truncated tails and `M = horizon/2`.
///
/// * `lo` is the least ε for which, at tail index `n`, some `m ∈ [n, M]`
///   satisfies both containments `W_m(x) ⊆ W_n(y) + εB`, `W_m(y) ⊆ W_n(x) + εB`.
/// * `hi = H(W_M(x), W_M(y))`, since `d ≤ liminf_m H(C_m(x), C_m(y))`.
///
/// `lo ≤ hi` always holds. When the windows are long enough to be the true
/// tails (`n` past every preperiod and `horizon − M` at least one joint cycle)
/// both equal `d`.
pub fn pseudometric_d_truncated<N: Norm>(
    x: &RepresentableSeq,
    y: &RepresentableSeq,
    horizon: usize,
    n: usize,
    norm: &N,
) -> Result<DistanceBounds<N::Value>> {
    check_pair(x, y, "pseudometric_d_truncated")?;
    for s in [x, y] {
        if !s.kind().is_finite() {
            return Err(Error::WrongKind {
                op: "pseudometric_d_truncated",
                kind: s.kind(),
            });
        }
    }
    let xs = x.core().expand(horizon);
    let ys = y.core().expand(horizon);
    truncated_bounds(horizon, n, |i, j, flip| {
        if flip {
            norm.dist(&ys[i - 1], &xs[j - 1])
        } else {
            norm.dist(&xs[i - 1], &ys[j - 1])
        }
    })
}

/// Sup-norm variant of [`pseudometric_d_truncated`] for every kind, including
/// spike and tail sequences whose terms live in infinitely many coordinates.
pub fn pseudometric_d_truncated_sup(
    x: &RepresentableSeq,
    y: &RepresentableSeq,
    horizon: usize,
    n: usize,
) -> Result<DistanceBounds<Q>> {
    check_pair(x, y, "pseudometric_d_truncated_sup")?;
    if x.kind().is_finite() {
        return pseudometric_d_truncated(x, y, horizon, n, &SupNorm);
    }
    // Past coordinate dim + max(i, j) both terms are zero (spike) or constant (tail).
    let term_dist = |a: &RepresentableSeq, i: usize, b: &RepresentableSeq, j: usize| {
        (0..=a.dim() + i.max(j))
            .map(|k| (a.coordinate(i, k) - b.coordinate(j, k)).abs())
            .max()
            .expect("nonempty range")
    };
    truncated_bounds(horizon, n, |i, j, flip| {
        if flip {
            term_dist(y, i, x, j)
        } else {
            term_dist(x, i, y, j)
        }
    })
}

/// `dist(i, j, false)` is `‖x_i − y_j‖`; `dist(i, j, true)` is `‖y_i − x_j‖`.
fn truncated_bounds<V: Clone + PartialOrd>(
    horizon: usize,
    n: usize,
    dist: impl Fn(usize, usize, bool) -> V,
) -> Result<DistanceBounds<V>> {
    let last_m = horizon / 2;
    if n == 0 || n > last_m {
        return Err(Error::HorizonTooShort {
            needed: 2 * n.max(1),
            got: horizon,
        });
    }
    // e(W_m(from), W_t(to)) = max_{i ≥ m} min_{j ≥ t} dist(i, j), for t ∈ {n, M}
    let excesses = |flip: bool| -> (Vec<Option<V>>, V) {
        let mut from_n: Vec<Option<V>> = vec![None; horizon + 2];
        let mut from_last: Option<V> = None;
        for i in (n..=horizon).rev() {
            let mut row_min: Option<V> = None;
            let mut row_min_last: Option<V> = None;
            for j in (n..=horizon).rev() {
                row_min = min_value(row_min, dist(i, j, flip));
                if j == last_m {
                    row_min_last = row_min.clone();
                }
            }
            let row_min = row_min.expect("nonempty row");
            from_n[i] = max_value(from_n[i + 1].clone(), row_min);
            if i >= last_m {
                from_last = max_value(from_last, row_min_last.expect("nonempty row"));
            }
        }
        (from_n, from_last.expect("nonempty window"))
    };
    let (xy, xy_last) = excesses(false);
    let (yx, yx_last) = excesses(true);
    let larger = |a: V, b: V| if a >= b { a } else { b };
    let lo = (n..=last_m)
        .map(|m| larger(xy[m].clone().expect("set"), yx[m].clone().expect("set")))
        .fold(None, min_value)
        .expect("nonempty range");
    let hi = larger(xy_last, yx_last);
    Ok(DistanceBounds { lo, hi })
}
