//! Finitely described bounded sequences.
//!
//! A [`RepresentableSeq`] is an eventually periodic sequence of vectors in
//! `ℝ^dim`, optionally carrying an escaping spike (a `c₀` element supported at
//! coordinate `dim + n` for term `n`) or a constant tail (the value every
//! coordinate beyond `dim` takes in term `n`). Sequence indices are 1-based;
//! vector coordinates are 0-based.

use std::collections::BTreeSet;
use std::fmt;

use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::norm::Norm;
use crate::rational::{self, Q};

/// Ambient model the sequence lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SpaceKind {
    /// `ℝ^dim` with the sup norm (`C(K)` for a finite discrete `K`).
    SupFinite,
    /// `ℝ^dim` with the Euclidean norm.
    Euclidean,
    /// `c₀` with a finite core plus a spike escaping to infinity.
    C0Spike,
    /// `c` with a finite core plus a constant tail.
    CTail,
    /// `ℓ∞` with a finite core plus a constant tail.
    LinfTail,
}

impl SpaceKind {
    pub const ALL: [SpaceKind; 5] = [
        SpaceKind::SupFinite,
        SpaceKind::Euclidean,
        SpaceKind::C0Spike,
        SpaceKind::CTail,
        SpaceKind::LinfTail,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SpaceKind::SupFinite => "sup_finite",
            SpaceKind::Euclidean => "euclidean",
            SpaceKind::C0Spike => "c0_spike",
            SpaceKind::CTail => "c_tail",
            SpaceKind::LinfTail => "linf_tail",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.as_str() == name)
    }

    pub fn is_finite(self) -> bool {
        matches!(self, SpaceKind::SupFinite | SpaceKind::Euclidean)
    }

    pub fn has_tail(self) -> bool {
        matches!(self, SpaceKind::CTail | SpaceKind::LinfTail)
    }
}

impl fmt::Display for SpaceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// An eventually periodic sequence: `preperiod` followed by `cycle` repeated forever.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Periodic<T> {
    preperiod: Vec<T>,
    cycle: Vec<T>,
}

impl<T: Clone> Periodic<T> {
    pub fn new(preperiod: Vec<T>, cycle: Vec<T>) -> Result<Self> {
        if cycle.is_empty() {
            return Err(Error::EmptyCycle);
        }
        Ok(Self { preperiod, cycle })
    }

    pub fn constant(value: T) -> Self {
        Self {
            preperiod: Vec::new(),
            cycle: vec![value],
        }
    }

    pub fn preperiod(&self) -> &[T] {
        &self.preperiod
    }

    pub fn cycle(&self) -> &[T] {
        &self.cycle
    }

    /// Term `n` (1-based).
    pub fn term(&self, n: usize) -> &T {
        assert!(n >= 1, "sequence indices start at 1");
        let i = n - 1;
        if i < self.preperiod.len() {
            &self.preperiod[i]
        } else {
            &self.cycle[(i - self.preperiod.len()) % self.cycle.len()]
        }
    }

    /// Values `{x_m : m >= n}`: the remaining preperiod followed by one full cycle.
    pub fn tail_values(&self, n: usize) -> impl Iterator<Item = &T> {
        let start = n.saturating_sub(1).min(self.preperiod.len());
        self.preperiod[start..].iter().chain(self.cycle.iter())
    }

    pub fn expand(&self, count: usize) -> Vec<T> {
        (1..=count).map(|n| self.term(n).clone()).collect()
    }

    /// Forward operator: drops the first term.
    pub fn shift(&self) -> Self {
        if self.preperiod.is_empty() {
            let mut cycle = self.cycle.clone();
            cycle.rotate_left(1);
            Self {
                preperiod: Vec::new(),
                cycle,
            }
        } else {
            Self {
                preperiod: self.preperiod[1..].to_vec(),
                cycle: self.cycle.clone(),
            }
        }
    }

    pub fn map<U: Clone>(&self, f: impl Fn(&T) -> U) -> Periodic<U> {
        Periodic {
            preperiod: self.preperiod.iter().map(&f).collect(),
            cycle: self.cycle.iter().map(&f).collect(),
        }
    }
}

impl<T: Clone + Ord> Periodic<T> {
    /// Representative of the class of sequences that agree with `self` after
    /// a finite shift: empty preperiod, shortest cycle, least rotation.
    pub fn canonical(&self) -> Self {
        let period = minimal_period(&self.cycle);
        let mut cycle = self.cycle[..period].to_vec();
        let start = least_rotation(&cycle);
        cycle.rotate_left(start);
        Self {
            preperiod: Vec::new(),
            cycle,
        }
    }

    /// Distinct values taken infinitely often.
    pub fn cycle_values(&self) -> BTreeSet<T> {
        self.cycle.iter().cloned().collect()
    }
}

fn minimal_period<T: PartialEq>(cycle: &[T]) -> usize {
    let len = cycle.len();
    (1..=len)
        .filter(|p| len.is_multiple_of(*p))
        .find(|&p| (p..len).all(|i| cycle[i] == cycle[i - p]))
        .unwrap_or(len)
}

fn least_rotation<T: Ord>(cycle: &[T]) -> usize {
    let len = cycle.len();
    (0..len)
        .min_by(|&a, &b| {
            let ra = (0..len).map(|i| &cycle[(a + i) % len]);
            let rb = (0..len).map(|i| &cycle[(b + i) % len]);
            ra.cmp(rb)
        })
        .unwrap_or(0)
}

/// A bounded sequence with a finite description.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RepresentableSeq {
    kind: SpaceKind,
    dim: usize,
    core: Periodic<Vec<Q>>,
    spike: Option<Periodic<Q>>,
    tail: Option<Periodic<Q>>,
}

impl RepresentableSeq {
    pub fn new(
        kind: SpaceKind,
        dim: usize,
        core: Periodic<Vec<Q>>,
        spike: Option<Periodic<Q>>,
        tail: Option<Periodic<Q>>,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        for v in core.preperiod.iter().chain(&core.cycle) {
            if v.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: v.len(),
                });
            }
        }
        match (kind, spike.is_some(), tail.is_some()) {
            (SpaceKind::C0Spike, true, false) => {}
            (SpaceKind::C0Spike, _, _) => {
                return Err(Error::InvalidSequence(
                    "c0_spike needs a spike and no tail".into(),
                ))
            }
            (k, false, true) if k.has_tail() => {}
            (k, _, _) if k.has_tail() => {
                return Err(Error::InvalidSequence(format!(
                    "{k} needs a tail and no spike"
                )))
            }
            (k, false, false) => debug_assert!(k.is_finite()),
            (k, _, _) => {
                return Err(Error::InvalidSequence(format!(
                    "{k} takes neither spike nor tail"
                )))
            }
        }
        Ok(Self {
            kind,
            dim,
            core,
            spike,
            tail,
        })
    }

    /// A `sup_finite` or `euclidean` sequence.
    pub fn finite(kind: SpaceKind, preperiod: Vec<Vec<Q>>, cycle: Vec<Vec<Q>>) -> Result<Self> {
        if !kind.is_finite() {
            return Err(Error::WrongKind {
                op: "RepresentableSeq::finite",
                kind,
            });
        }
        let dim = cycle.first().map(Vec::len).ok_or(Error::EmptyCycle)?;
        Self::new(kind, dim, Periodic::new(preperiod, cycle)?, None, None)
    }

    pub fn sup(preperiod: Vec<Vec<Q>>, cycle: Vec<Vec<Q>>) -> Result<Self> {
        Self::finite(SpaceKind::SupFinite, preperiod, cycle)
    }

    pub fn euclid(preperiod: Vec<Vec<Q>>, cycle: Vec<Vec<Q>>) -> Result<Self> {
        Self::finite(SpaceKind::Euclidean, preperiod, cycle)
    }

    pub fn c0(core: Periodic<Vec<Q>>, spike: Periodic<Q>) -> Result<Self> {
        let dim = core.cycle[0].len();
        Self::new(SpaceKind::C0Spike, dim, core, Some(spike), None)
    }

    pub fn with_tail(kind: SpaceKind, core: Periodic<Vec<Q>>, tail: Periodic<Q>) -> Result<Self> {
        let dim = core.cycle[0].len();
        Self::new(kind, dim, core, None, Some(tail))
    }

    pub fn kind(&self) -> SpaceKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn core(&self) -> &Periodic<Vec<Q>> {
        &self.core
    }

    pub fn spike(&self) -> Option<&Periodic<Q>> {
        self.spike.as_ref()
    }

    pub fn tail(&self) -> Option<&Periodic<Q>> {
        self.tail.as_ref()
    }

    /// The spike or tail component, whichever is present.
    pub fn extra(&self) -> Option<&Periodic<Q>> {
        self.spike.as_ref().or(self.tail.as_ref())
    }

    /// Same description reinterpreted in another model. Spike/tail presence
    /// must still match the new kind.
    pub fn with_kind(&self, kind: SpaceKind) -> Result<Self> {
        Self::new(
            kind,
            self.dim,
            self.core.clone(),
            self.spike.clone(),
            self.tail.clone(),
        )
    }

    /// Length of the longest preperiod among the components.
    pub fn settle_len(&self) -> usize {
        let extra = self.extra().map_or(0, |e| e.preperiod.len());
        self.core.preperiod.len().max(extra)
    }

    /// Least common multiple of the component cycle lengths.
    pub fn joint_period(&self) -> usize {
        let extra = self.extra().map_or(1, |e| e.cycle.len());
        self.core.cycle.len().lcm(&extra)
    }

    /// Coordinate `k` (0-based) of term `n` (1-based), for every `k`,
    /// including coordinates beyond `dim`.
    pub fn coordinate(&self, n: usize, k: usize) -> Q {
        if k < self.dim {
            return self.core.term(n)[k].clone();
        }
        if let Some(spike) = &self.spike {
            if k == self.dim + n - 1 {
                return spike.term(n).clone();
            }
            return Q::zero();
        }
        if let Some(tail) = &self.tail {
            return tail.term(n).clone();
        }
        Q::zero()
    }

    /// Forward operator `F`: drops the first term. For spike sequences the
    /// result keeps the `dim + n` placement, so it is `F(x)` up to a
    /// relabelling of the escaping coordinates.
    pub fn shift(&self) -> Self {
        Self {
            kind: self.kind,
            dim: self.dim,
            core: self.core.shift(),
            spike: self.spike.as_ref().map(Periodic::shift),
            tail: self.tail.as_ref().map(Periodic::shift),
        }
    }

    /// Indices of one full joint cycle past every preperiod.
    fn joint_cycle_indices(&self) -> std::ops::RangeInclusive<usize> {
        let start = self.settle_len() + 1;
        start..=start + self.joint_period() - 1
    }

    fn check_len(&self, y: &[Q], allowed: &[usize]) -> Result<()> {
        if allowed.contains(&y.len()) {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.dim,
                found: y.len(),
            })
        }
    }
}

/// Componentwise canonical form; see [`Periodic::canonical`]. Spike and tail
/// components are canonicalized independently of the core, which changes the
/// joint phase but none of the asymptotic quantities computed by this crate.
pub fn canonicalize(seq: &RepresentableSeq) -> RepresentableSeq {
    RepresentableSeq {
        kind: seq.kind,
        dim: seq.dim,
        core: seq.core.canonical(),
        spike: seq.spike.as_ref().map(Periodic::canonical),
        tail: seq.tail.as_ref().map(Periodic::canonical),
    }
}

/// A finite set of points of `ℝ^dim`, sorted and without duplicates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FinitePointSet {
    dim: usize,
    points: Vec<Vec<Q>>,
}

impl FinitePointSet {
    pub fn new(points: Vec<Vec<Q>>) -> Result<Self> {
        let dim = points.first().map(Vec::len).ok_or(Error::EmptySet)?;
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        if let Some(bad) = points.iter().find(|p| p.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: bad.len(),
            });
        }
        let points: BTreeSet<Vec<Q>> = points.into_iter().collect();
        Ok(Self {
            dim,
            points: points.into_iter().collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[Vec<Q>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        self.points.iter().map(|p| rational::vec_to_f64(p)).collect()
    }
}

/// The norm-cluster values of a finite-dimensional sequence: its distinct cycle vectors.
pub fn cluster_set(seq: &RepresentableSeq) -> Result<FinitePointSet> {
    if !seq.kind.is_finite() {
        return Err(Error::WrongKind {
            op: "cluster_set",
            kind: seq.kind,
        });
    }
    FinitePointSet::new(seq.core.cycle.clone())
}

/// `limsup_n ‖x_n − y‖` in the sup norm of the sequence's model.
///
/// `y` has `dim` coordinates and is zero beyond them. For tail kinds `y` may
/// carry one extra coordinate: its constant value beyond `dim`.
pub fn asymptotic_distance(seq: &RepresentableSeq, y: &[Q]) -> Result<Q> {
    let dim = seq.dim;
    match seq.kind {
        SpaceKind::SupFinite | SpaceKind::Euclidean => {
            seq.check_len(y, &[dim])?;
            Ok(seq
                .core
                .cycle
                .iter()
                .map(|p| rational::sup_dist(p, y))
                .max()
                .expect("cycle is nonempty"))
        }
        SpaceKind::C0Spike => {
            seq.check_len(y, &[dim])?;
            let spike = seq.spike.as_ref().expect("validated");
            Ok(seq
                .joint_cycle_indices()
                .map(|n| {
                    let core = rational::sup_dist(seq.core.term(n), y);
                    core.max(spike.term(n).abs())
                })
                .max()
                .expect("joint cycle is nonempty"))
        }
        SpaceKind::CTail | SpaceKind::LinfTail => {
            seq.check_len(y, &[dim, dim + 1])?;
            let tail = seq.tail.as_ref().expect("validated");
            let y_tail = y.get(dim).cloned().unwrap_or_else(Q::zero);
            Ok(seq
                .joint_cycle_indices()
                .map(|n| {
                    let core = rational::sup_dist(seq.core.term(n), &y[..dim]);
                    core.max((tail.term(n) - &y_tail).abs())
                })
                .max()
                .expect("joint cycle is nonempty"))
        }
    }
}

/// `limsup_n ‖x_n − y‖` under an arbitrary norm on `ℝ^dim` (finite kinds only).
pub fn asymptotic_distance_in<N: Norm>(
    seq: &RepresentableSeq,
    y: &[Q],
    norm: &N,
) -> Result<N::Value> {
    if !seq.kind.is_finite() {
        return Err(Error::WrongKind {
            op: "asymptotic_distance_in",
            kind: seq.kind,
        });
    }
    seq.check_len(y, &[seq.dim])?;
    let mut best = norm.zero();
    for p in &seq.core.cycle {
        let d = norm.dist(p, y);
        if d > best {
            best = d;
        }
    }
    Ok(best)
}

/// Euclidean `limsup_n ‖x_n − y‖` at a floating-point `y` (finite kinds only).
pub fn asymptotic_distance_euclid(seq: &RepresentableSeq, y: &[f64]) -> Result<f64> {
    if !seq.kind.is_finite() {
        return Err(Error::WrongKind {
            op: "asymptotic_distance_euclid",
            kind: seq.kind,
        });
    }
    if y.len() != seq.dim {
        return Err(Error::DimensionMismatch {
            expected: seq.dim,
            found: y.len(),
        });
    }
    Ok(seq
        .core
        .cycle
        .iter()
        .map(|p| {
            p.iter()
                .zip(y)
                .map(|(a, b)| (rational::to_f64(a) - b).powi(2))
                .sum::<f64>()
                .sqrt()
        })
        .fold(0.0, f64::max))
}

/// Whether `y` lies in the δ-enlargement `A_δ`, given the asymptotic radius `r`.
/// Sup-norm models only; the comparison is exact.
pub fn delta_set_membership(seq: &RepresentableSeq, y: &[Q], delta: &Q, r: &Q) -> Result<bool> {
    if seq.kind == SpaceKind::Euclidean {
        return Err(Error::WrongKind {
            op: "delta_set_membership",
            kind: seq.kind,
        });
    }
    if delta.is_negative() {
        return Err(Error::precondition("delta_set_membership", "δ must be ≥ 0"));
    }
    Ok(asymptotic_distance(seq, y)? <= r + delta)
}
