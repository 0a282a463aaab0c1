//! Seeded random instances for fuzzing and benchmarks.
//!
//! Trial `i` of a campaign with master seed `s` uses `trial_seed(s, i)`, so a
//! trial can be replayed alone and any split of the trials gives the same
//! results.

use num_bigint::BigInt;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::envelope::Envelope;
use crate::rational::Q;
use crate::seq_model::{FinitePointSet, Periodic, RepresentableSeq, SpaceKind};

pub type Rng8 = ChaCha8Rng;

/// splitmix64 finalizer applied to `master + (index + 1)·φ`.
pub fn trial_seed(master: u64, index: u64) -> u64 {
    let mut z = master.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn rng(seed: u64) -> Rng8 {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Clone, Debug)]
pub struct GenConfig {
    pub min_dim: usize,
    pub max_dim: usize,
    pub max_preperiod: usize,
    pub max_cycle: usize,
    /// Numerators are drawn from `[-magnitude·q, magnitude·q]`.
    pub magnitude: i64,
    pub max_denominator: i64,
}

impl Default for GenConfig {
    fn default() -> Self {
        Self {
            min_dim: 1,
            max_dim: 4,
            max_preperiod: 3,
            max_cycle: 5,
            magnitude: 5,
            max_denominator: 4,
        }
    }
}

impl GenConfig {
    pub fn with_dim(mut self, dim: usize) -> Self {
        self.min_dim = dim;
        self.max_dim = dim;
        self
    }
}

pub fn rational(rng: &mut Rng8, cfg: &GenConfig) -> Q {
    let q = rng.random_range(1..=cfg.max_denominator.max(1));
    let p = rng.random_range(-cfg.magnitude * q..=cfg.magnitude * q);
    Q::new(BigInt::from(p), BigInt::from(q))
}

pub fn vector(rng: &mut Rng8, cfg: &GenConfig, dim: usize) -> Vec<Q> {
    (0..dim).map(|_| rational(rng, cfg)).collect()
}

fn periodic<T: Clone>(rng: &mut Rng8, cfg: &GenConfig, mut draw: impl FnMut(&mut Rng8) -> T) -> Periodic<T> {
    let pre = rng.random_range(0..=cfg.max_preperiod);
    let cyc = rng.random_range(1..=cfg.max_cycle.max(1));
    let preperiod = (0..pre).map(|_| draw(rng)).collect();
    let cycle = (0..cyc).map(|_| draw(rng)).collect();
    Periodic::new(preperiod, cycle).expect("cycle is nonempty")
}

pub fn dim(rng: &mut Rng8, cfg: &GenConfig) -> usize {
    rng.random_range(cfg.min_dim.max(1)..=cfg.max_dim.max(cfg.min_dim).max(1))
}

/// A random sequence of the given kind; `dim` is drawn from the config.
pub fn sequence(rng: &mut Rng8, cfg: &GenConfig, kind: SpaceKind) -> RepresentableSeq {
    let d = dim(rng, cfg);
    sequence_with_dim(rng, cfg, kind, d)
}

pub fn sequence_with_dim(rng: &mut Rng8, cfg: &GenConfig, kind: SpaceKind, d: usize) -> RepresentableSeq {
    let core = periodic(rng, cfg, |r| vector(r, cfg, d));
    let scalar = |rng: &mut Rng8| periodic(rng, cfg, |r| rational(r, cfg));
    let result = match kind {
        SpaceKind::SupFinite | SpaceKind::Euclidean => RepresentableSeq::new(kind, d, core, None, None),
        SpaceKind::C0Spike => {
            let spike = scalar(rng);
            RepresentableSeq::c0(core, spike)
        }
        SpaceKind::CTail | SpaceKind::LinfTail => {
            let tail = scalar(rng);
            RepresentableSeq::with_tail(kind, core, tail)
        }
    };
    result.expect("generated sequences are well formed")
}

/// A sequence with the same cluster set as `seq`, in a different order and
/// with a fresh preperiod. Finite kinds only.
pub fn reshuffled(rng: &mut Rng8, cfg: &GenConfig, seq: &RepresentableSeq) -> RepresentableSeq {
    use rand::seq::SliceRandom;
    let mut cycle: Vec<Vec<Q>> = seq.core().cycle().to_vec();
    cycle.shuffle(rng);
    if rng.random_bool(0.5) {
        let extra = cycle[rng.random_range(0..cycle.len())].clone();
        cycle.push(extra);
    }
    let pre = (0..rng.random_range(0..=cfg.max_preperiod))
        .map(|_| vector(rng, cfg, seq.dim()))
        .collect();
    RepresentableSeq::new(seq.kind(), seq.dim(), Periodic::new(pre, cycle).expect("nonempty"), None, None)
        .expect("same shape")
}

pub fn point_set(rng: &mut Rng8, cfg: &GenConfig, dim: usize, max_points: usize) -> FinitePointSet {
    let n = rng.random_range(1..=max_points.max(1));
    FinitePointSet::new((0..n).map(|_| vector(rng, cfg, dim)).collect()).expect("nonempty")
}

/// Random `a ≤ b`, with a point at infinity (`a∞ ≤ 0 ≤ b∞`) when `infinity`.
pub fn envelope(rng: &mut Rng8, cfg: &GenConfig, dim: usize, infinity: bool) -> Envelope {
    let mut lower = Vec::with_capacity(dim);
    let mut upper = Vec::with_capacity(dim);
    for _ in 0..dim {
        let (a, b) = (rational(rng, cfg), rational(rng, cfg));
        if a <= b {
            lower.push(a);
            upper.push(b);
        } else {
            lower.push(b);
            upper.push(a);
        }
    }
    let inf = infinity.then(|| {
        let a = -rational(rng, cfg).abs();
        let b = rational(rng, cfg).abs();
        (a, b)
    });
    Envelope::new(lower, upper, inf).expect("ordered bounds")
}
