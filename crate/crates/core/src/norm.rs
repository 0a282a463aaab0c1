//! Norms on `ℝ^dim` evaluated on rational vectors.
//!
//! Sup, ℓ₁ and polyhedral norms stay exact; the Euclidean norm is evaluated in
//! `f64` from the exact sum of squares.

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{self, Q};

pub trait Norm {
    type Value: Clone + PartialOrd + std::fmt::Debug;

    fn norm(&self, v: &[Q]) -> Self::Value;

    fn zero(&self) -> Self::Value;

    fn name(&self) -> String;

    fn dist(&self, a: &[Q], b: &[Q]) -> Self::Value {
        let diff: Vec<Q> = a.iter().zip(b).map(|(x, y)| x - y).collect();
        self.norm(&diff)
    }

    /// Lossy view used for reports and tolerance comparisons.
    fn value_f64(&self, value: &Self::Value) -> f64;
}

#[derive(Clone, Copy, Debug, Default)]
pub struct SupNorm;

#[derive(Clone, Copy, Debug, Default)]
pub struct L1Norm;

#[derive(Clone, Copy, Debug, Default)]
pub struct EuclidNorm;

impl Norm for SupNorm {
    type Value = Q;

    fn norm(&self, v: &[Q]) -> Q {
        v.iter().map(Signed::abs).max().unwrap_or_else(Q::zero)
    }

    fn dist(&self, a: &[Q], b: &[Q]) -> Q {
        rational::sup_dist(a, b)
    }

    fn zero(&self) -> Q {
        Q::zero()
    }

    fn name(&self) -> String {
        "sup".into()
    }

    fn value_f64(&self, value: &Q) -> f64 {
        rational::to_f64(value)
    }
}

impl Norm for L1Norm {
    type Value = Q;

    fn norm(&self, v: &[Q]) -> Q {
        v.iter().map(Signed::abs).sum()
    }

    fn zero(&self) -> Q {
        Q::zero()
    }

    fn name(&self) -> String {
        "l1".into()
    }

    fn value_f64(&self, value: &Q) -> f64 {
        rational::to_f64(value)
    }
}

impl Norm for EuclidNorm {
    type Value = f64;

    fn norm(&self, v: &[Q]) -> f64 {
        let sq: Q = v.iter().map(|x| x * x).sum();
        rational::to_f64(&sq).sqrt()
    }

    fn zero(&self) -> f64 {
        0.0
    }

    fn name(&self) -> String {
        "euclid".into()
    }

    fn value_f64(&self, value: &f64) -> f64 {
        *value
    }
}

/// `‖v‖ = max_i |⟨w_i, v⟩|` for rows `w_i` spanning `ℝ^dim`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PolyhedralNorm {
    #[serde(serialize_with = "serialize_rows")]
    rows: Vec<Vec<Q>>,
}

fn serialize_rows<S: serde::Serializer>(rows: &[Vec<Q>], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(rows.len()))?;
    for row in rows {
        let text: Vec<String> = row.iter().map(rational::format).collect();
        seq.serialize_element(&text)?;
    }
    seq.end()
}

impl PolyhedralNorm {
    pub fn new(rows: Vec<Vec<Q>>) -> Result<Self> {
        let dim = rows.first().map(Vec::len).ok_or(Error::EmptySet)?;
        if let Some(bad) = rows.iter().find(|r| r.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: bad.len(),
            });
        }
        if rank(&rows) < dim {
            return Err(Error::precondition(
                "PolyhedralNorm::new",
                "rows must span the space",
            ));
        }
        Ok(Self { rows })
    }

    /// The sup norm written as a polyhedral norm.
    pub fn sup(dim: usize) -> Self {
        let rows = (0..dim)
            .map(|i| (0..dim).map(|j| rational::int((i == j) as i64)).collect())
            .collect();
        Self { rows }
    }

    pub fn rows(&self) -> &[Vec<Q>] {
        &self.rows
    }

    pub fn dim(&self) -> usize {
        self.rows[0].len()
    }
}

fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl Norm for PolyhedralNorm {
    type Value = Q;

    fn norm(&self, v: &[Q]) -> Q {
        self.rows
            .iter()
            .map(|w| dot(w, v).abs())
            .max()
            .unwrap_or_else(Q::zero)
    }

    fn zero(&self) -> Q {
        Q::zero()
    }

    fn name(&self) -> String {
        let rows: Vec<String> = self
            .rows
            .iter()
            .map(|r| {
                let parts: Vec<String> = r.iter().map(rational::format).collect();
                format!("({})", parts.join(","))
            })
            .collect();
        format!("poly[{}]", rows.join(" "))
    }

    fn value_f64(&self, value: &Q) -> f64 {
        rational::to_f64(value)
    }
}

/// Gauss–Jordan elimination over the rationals. Returns `None` when the
/// square system is singular.
pub(crate) fn solve_exact(mut a: Vec<Vec<Q>>, mut b: Vec<Q>) -> Option<Vec<Q>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let p = a[col][col].clone();
        for j in col..n {
            a[col][j] = &a[col][j] / &p;
        }
        b[col] = &b[col] / &p;
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let factor = a[r][col].clone();
                for j in col..n {
                    let delta = &factor * &a[col][j];
                    a[r][j] -= delta;
                }
                let delta = &factor * &b[col];
                b[r] -= delta;
            }
        }
    }
    Some(b)
}

fn rank(rows: &[Vec<Q>]) -> usize {
    let mut m: Vec<Vec<Q>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        for r in 0..m.len() {
            if r != rank && !m[r][col].is_zero() {
                let factor = &m[r][col] / &m[rank][col];
                for j in col..cols {
                    let delta = &factor * &m[rank][j];
                    m[r][j] -= delta;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Chebyshev radius of a finite set under a polyhedral norm together with
/// the vertices of its (polytope) center set, sorted.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyhedralCenter {
    pub radius: Q,
    pub vertices: Vec<Vec<Q>>,
}

/// Exact LP by vertex enumeration. Only the extreme values of each row over
/// the point set give active constraints, so the enumeration is over
/// `2 · rows` half-spaces; intended for small dimensions.
pub fn polyhedral_chebyshev(points: &[Vec<Q>], norm: &PolyhedralNorm) -> Result<PolyhedralCenter> {
    let dim = norm.dim();
    if points.is_empty() {
        return Err(Error::EmptySet);
    }
    if let Some(bad) = points.iter().find(|p| p.len() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: bad.len(),
        });
    }
    // Half-space (coef_y, coef_t, rhs): coef_y·y + coef_t·t <= rhs
    // t >= w·p_max − w·y   ⇔  −w·y − t <= −w·p_max
    // t >= w·y − w·p_min   ⇔   w·y − t <=  w·p_min
    let mut halfspaces: Vec<(Vec<Q>, Q)> = Vec::new();
    for w in norm.rows() {
        let values: Vec<Q> = points.iter().map(|p| dot(w, p)).collect();
        let hi = values.iter().max().cloned().expect("nonempty");
        let lo = values.iter().min().cloned().expect("nonempty");
        halfspaces.push((w.iter().map(|x| -x).collect(), -hi));
        halfspaces.push((w.clone(), lo));
    }
    let minus_one = rational::int(-1);
    let feasible = |y: &[Q], t: &Q| {
        halfspaces
            .iter()
            .all(|(c, rhs)| dot(c, y) - t <= *rhs)
    };

    let mut best: Option<Q> = None;
    for subset in combinations(halfspaces.len(), dim + 1) {
        let a: Vec<Vec<Q>> = subset
            .iter()
            .map(|&i| {
                let mut row = halfspaces[i].0.clone();
                row.push(minus_one.clone());
                row
            })
            .collect();
        let b: Vec<Q> = subset.iter().map(|&i| halfspaces[i].1.clone()).collect();
        if let Some(sol) = solve_exact(a, b) {
            let (y, t) = sol.split_at(dim);
            if feasible(y, &t[0]) && best.as_ref().is_none_or(|b| t[0] < *b) {
                best = Some(t[0].clone());
            }
        }
    }
    let radius = best.ok_or_else(|| Error::invariant("polyhedral_chebyshev", "no vertex"))?;

    let mut vertices: Vec<Vec<Q>> = Vec::new();
    for subset in combinations(halfspaces.len(), dim) {
        let a: Vec<Vec<Q>> = subset.iter().map(|&i| halfspaces[i].0.clone()).collect();
        let b: Vec<Q> = subset
            .iter()
            .map(|&i| &halfspaces[i].1 + &radius)
            .collect();
        if let Some(y) = solve_exact(a, b) {
            if feasible(&y, &radius) && !vertices.contains(&y) {
                vertices.push(y);
            }
        }
    }
    vertices.sort();
    Ok(PolyhedralCenter { radius, vertices })
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        go(0, n, k, &mut Vec::with_capacity(k), &mut out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int, ints};

    #[test]
    fn basic_norms() {
        let v = ints(&[3, -4]);
        assert_eq!(SupNorm.norm(&v), int(4));
        assert_eq!(L1Norm.norm(&v), int(7));
        assert!((EuclidNorm.norm(&v) - 5.0).abs() < 1e-15);
        let l1 = PolyhedralNorm::new(vec![ints(&[1, 1]), ints(&[1, -1])]).unwrap();
        assert_eq!(l1.norm(&v), int(7));
    }

    #[test]
    fn polyhedral_rejects_degenerate_rows() {
        assert!(PolyhedralNorm::new(vec![ints(&[1, 1]), ints(&[2, 2])]).is_err());
    }

    #[test]
    fn solve_small_system() {
        let x = solve_exact(vec![ints(&[2, 1]), ints(&[1, 3])], ints(&[3, 5])).unwrap();
        assert_eq!(x, vec![frac(4, 5), frac(7, 5)]);
        assert!(solve_exact(vec![ints(&[1, 2]), ints(&[2, 4])], ints(&[1, 1])).is_none());
    }

    #[test]
    fn sup_center_of_diagonal_pair_is_a_segment() {
        // {(±1, 0)} under the sup norm: radius 1, centers {0} × [−1, 1]
        let pts = vec![ints(&[1, 0]), ints(&[-1, 0])];
        let c = polyhedral_chebyshev(&pts, &PolyhedralNorm::sup(2)).unwrap();
        assert_eq!(c.radius, int(1));
        assert_eq!(c.vertices, vec![ints(&[0, -1]), ints(&[0, 1])]);
    }

    #[test]
    fn l1_center_of_square() {
        let pts = vec![ints(&[1, 1]), ints(&[-1, -1]), ints(&[1, -1]), ints(&[-1, 1])];
        let l1 = PolyhedralNorm::new(vec![ints(&[1, 1]), ints(&[1, -1])]).unwrap();
        let c = polyhedral_chebyshev(&pts, &l1).unwrap();
        assert_eq!(c.radius, int(2));
        assert_eq!(c.vertices, vec![ints(&[0, 0])]);
    }

    #[test]
    fn combinations_count() {
        assert_eq!(combinations(5, 2).len(), 10);
        assert_eq!(combinations(3, 0), vec![Vec::<usize>::new()]);
        assert!(combinations(2, 3).is_empty());
    }
}
