//! Asymptotic radius and center in `c₀`, `c` and `ℓ∞`.
//!
//! Two independent routes are provided. The envelope route treats `c₀` as
//! `C₀(ℕ)`, adds the point at infinity of the one-point compactification and
//! uses `max{b(∞), −a(∞), ½‖b − a‖}`. The Lim route evaluates the classical
//! radius formulas from the scalars α, β, γ, δ of the sequence.

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::envelope::{cycle_bounds, CenterBox, Envelope};
use crate::error::{Error, Result};
use crate::rational::{self, serde_q, Q};
use crate::seq_model::{Periodic, RepresentableSeq, SpaceKind};

/// Envelopes of a spike sequence on `{0, …, dim−1} ∪ {∞}`. Coordinates past
/// `dim` see each spike value once, so their envelopes are `0/0`.
pub fn envelopes_c0(seq: &RepresentableSeq) -> Result<Envelope> {
    let spike = spike_of(seq, "envelopes_c0")?;
    let (lower, upper) = cycle_bounds(seq);
    let zero = Q::zero();
    let hi = rational::max_of(spike.cycle()).expect("nonempty").max(zero.clone());
    let lo = rational::min_of(spike.cycle()).expect("nonempty").min(zero);
    Envelope::new(lower, upper, Some((lo, hi)))
}

fn spike_of<'a>(seq: &'a RepresentableSeq, op: &'static str) -> Result<&'a Periodic<Q>> {
    seq.spike().ok_or(Error::WrongKind {
        op,
        kind: seq.kind(),
    })
}

fn require_infinity(env: &Envelope, op: &'static str) -> Result<()> {
    if env.has_infinity() {
        Ok(())
    } else {
        Err(Error::precondition(op, "envelope has no point at infinity"))
    }
}

/// `max{b(∞), −a(∞), ½‖b − a‖}`.
pub fn radius_c0(env: &Envelope) -> Result<Q> {
    require_infinity(env, "radius_c0")?;
    let (a_inf, b_inf) = env.at_infinity().expect("checked");
    Ok(b_inf.clone().max(-a_inf).max(rational::half(&env.gap())))
}

/// The center set `{g ∈ c₀ : max(‖b − g‖, ‖g − a‖) ≤ R}` restricted to the
/// explicit coordinates; every other coordinate of a center is free in `[−R, R]`
/// and is taken to be zero.
pub fn center_box_c0(env: &Envelope) -> Result<CenterBox> {
    let radius = radius_c0(env)?;
    let bx = CenterBox::from_envelope(env, radius);
    if bx.intervals.iter().any(|(lo, hi)| lo > hi) {
        return Err(Error::invariant("center_box_c0", "empty interval"));
    }
    Ok(bx)
}

/// The zero-clamp center: `g(k) = clamp(0, b(k) − R, a(k) + R)`, zero past `dim`.
pub fn center_selector_c0(env: &Envelope) -> Result<Vec<Q>> {
    let bx = center_box_c0(env)?;
    let zero = Q::zero();
    let g: Vec<Q> = bx
        .intervals
        .iter()
        .map(|(lo, hi)| rational::clamp(&zero, lo, hi))
        .collect();
    let (a_inf, b_inf) = env.at_infinity().expect("checked");
    let at_infinity_ok = b_inf <= &bx.radius && -a_inf <= bx.radius;
    if !bx.contains(&g) || !at_infinity_ok {
        return Err(Error::invariant("center_selector_c0", "selector outside the center set"));
    }
    Ok(g)
}

/// The scalars of Lim's radius formulas.
///
/// * α = lim_m sup_k (sup_{n≥m} x_n(k) − inf_{n≥m} x_n(k))
/// * β = sup_k (limsup_n x_n(k) − liminf_n x_n(k))
/// * γ = limsup_{n,k} x_n(k) − liminf_{n,k} x_n(k)
/// * δ = limsup_{n,k} |x_n(k)|
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LimQuantities {
    #[serde(serialize_with = "serde_q::one")]
    pub alpha: Q,
    #[serde(serialize_with = "serde_q::one")]
    pub beta: Q,
    #[serde(serialize_with = "serde_q::one")]
    pub gamma: Q,
    #[serde(serialize_with = "serde_q::one")]
    pub delta: Q,
}

impl LimQuantities {
    /// `max{β, γ} = max{α, γ}`.
    pub fn identity_c(&self) -> bool {
        self.beta.clone().max(self.gamma.clone()) == self.alpha.clone().max(self.gamma.clone())
    }

    /// `max{β, 2δ} = max{α, 2δ}`.
    pub fn identity_c0(&self) -> bool {
        let two_delta = &self.delta * rational::int(2);
        self.beta.clone().max(two_delta.clone()) == self.alpha.clone().max(two_delta)
    }

    pub fn beta_le_alpha(&self) -> bool {
        self.beta <= self.alpha
    }
}

fn range(values: impl Iterator<Item = Q>) -> Q {
    let mut lo: Option<Q> = None;
    let mut hi: Option<Q> = None;
    for v in values {
        if lo.as_ref().is_none_or(|l| v < *l) {
            lo = Some(v.clone());
        }
        if hi.as_ref().is_none_or(|h| v > *h) {
            hi = Some(v);
        }
    }
    match (lo, hi) {
        (Some(lo), Some(hi)) => hi - lo,
        _ => Q::zero(),
    }
}

/// α_m = sup_k (sup_{n≥m} x_n(k) − inf_{n≥m} x_n(k)), exact for every m ≥ 1.
fn alpha_at(seq: &RepresentableSeq, m: usize) -> Q {
    let core = (0..seq.dim())
        .map(|k| range(seq.core().tail_values(m).map(|v| v[k].clone())))
        .max()
        .unwrap_or_else(Q::zero);
    let extra = if let Some(spike) = seq.spike() {
        // coordinate dim + j − 1 holds s_j at n = j and 0 otherwise
        spike.tail_values(m).map(Signed::abs).max().expect("nonempty")
    } else if let Some(tail) = seq.tail() {
        range(tail.tail_values(m).cloned())
    } else {
        Q::zero()
    };
    core.max(extra)
}

/// Values `x_n(k)` over `n ≥ m` and 0-based `k ≥ m − 1`.
fn corner_values(seq: &RepresentableSeq, m: usize) -> Vec<Q> {
    let mut out: Vec<Q> = Vec::new();
    for k in m.saturating_sub(1)..seq.dim() {
        out.extend(seq.core().tail_values(m).map(|v| v[k].clone()));
    }
    if let Some(spike) = seq.spike() {
        out.extend(spike.tail_values(m).cloned());
        out.push(Q::zero());
    }
    if let Some(tail) = seq.tail() {
        out.extend(tail.tail_values(m).cloned());
    }
    out
}

fn gamma_at(seq: &RepresentableSeq, m: usize) -> Q {
    range(corner_values(seq, m).into_iter())
}

fn delta_at(seq: &RepresentableSeq, m: usize) -> Q {
    corner_values(seq, m)
        .iter()
        .map(Signed::abs)
        .max()
        .unwrap_or_else(Q::zero)
}

fn beta_of(seq: &RepresentableSeq) -> Q {
    let (lower, upper) = cycle_bounds(seq);
    let core = lower
        .iter()
        .zip(&upper)
        .map(|(a, b)| b - a)
        .max()
        .unwrap_or_else(Q::zero);
    let extra = seq
        .tail()
        .map(|t| range(t.cycle().iter().cloned()))
        .unwrap_or_else(Q::zero);
    core.max(extra)
}

/// First index at which every window quantity has reached its limit:
/// past all preperiods and past the explicit coordinates.
fn stable_index(seq: &RepresentableSeq) -> usize {
    seq.settle_len().max(seq.dim()) + 1
}

/// Value of a window quantity at the stable index, checked against the
/// value one joint cycle later.
fn stabilized(
    seq: &RepresentableSeq,
    quantity: &'static str,
    f: impl Fn(&RepresentableSeq, usize) -> Q,
) -> Result<Q> {
    let m = stable_index(seq);
    let first = f(seq, m);
    let second = f(seq, m + seq.joint_period());
    if first != second {
        return Err(Error::NotStabilized {
            quantity,
            first: rational::format(&first),
            second: rational::format(&second),
        });
    }
    Ok(first)
}

pub fn lim_quantities(seq: &RepresentableSeq) -> Result<LimQuantities> {
    if seq.kind().is_finite() {
        return Err(Error::WrongKind {
            op: "lim_quantities",
            kind: seq.kind(),
        });
    }
    Ok(LimQuantities {
        alpha: stabilized(seq, "alpha", alpha_at)?,
        beta: beta_of(seq),
        gamma: stabilized(seq, "gamma", gamma_at)?,
        delta: stabilized(seq, "delta", delta_at)?,
    })
}

/// Which of Lim's three radius formulas to apply.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LimSpace {
    C0,
    C,
    Linf,
}

impl LimSpace {
    pub fn as_str(self) -> &'static str {
        match self {
            LimSpace::C0 => "c0",
            LimSpace::C => "c",
            LimSpace::Linf => "linf",
        }
    }
}

/// Second term of the `c` formula:
/// lim_m (limsup_k sup_{n≥m} x_n(k) − liminf_k inf_{n≥m} x_n(k)).
fn c_limit_term_at(seq: &RepresentableSeq, m: usize) -> Q {
    seq.tail()
        .map(|t| range(t.tail_values(m).cloned()))
        .unwrap_or_else(Q::zero)
}

/// Asymptotic radius from Lim's formulas:
/// * c₀: `max{½α, δ}`
/// * c: `½ max{α, lim_m (limsup_k sup_{n≥m} x_n(k) − liminf_k inf_{n≥m} x_n(k))}`
/// * ℓ∞: `½α`
pub fn radius_lim(seq: &RepresentableSeq, space: LimSpace) -> Result<Q> {
    let kind = seq.kind();
    let matches = match space {
        LimSpace::C0 => kind == SpaceKind::C0Spike,
        LimSpace::C => kind == SpaceKind::CTail,
        LimSpace::Linf => kind.has_tail(),
    };
    if !matches {
        return Err(Error::WrongKind {
            op: match space {
                LimSpace::C0 => "radius_lim(c0)",
                LimSpace::C => "radius_lim(c)",
                LimSpace::Linf => "radius_lim(linf)",
            },
            kind,
        });
    }
    let q = lim_quantities(seq)?;
    Ok(match space {
        LimSpace::C0 => rational::half(&q.alpha).max(q.delta),
        LimSpace::C => {
            let second = stabilized(seq, "c limit term", c_limit_term_at)?;
            rational::half(&q.alpha.max(second))
        }
        LimSpace::Linf => rational::half(&q.alpha),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int, ints};

    fn e_n() -> RepresentableSeq {
        RepresentableSeq::c0(Periodic::constant(ints(&[0])), Periodic::constant(int(1))).unwrap()
    }

    fn zero_c0() -> RepresentableSeq {
        RepresentableSeq::c0(Periodic::constant(ints(&[0, 0])), Periodic::constant(int(0))).unwrap()
    }

    fn alternating_tail(kind: SpaceKind) -> RepresentableSeq {
        RepresentableSeq::with_tail(
            kind,
            Periodic::constant(ints(&[0])),
            Periodic::new(vec![], ints(&[1, -1])).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn envelope_examples() {
        let env = envelopes_c0(&e_n()).unwrap();
        assert_eq!(env.at_infinity(), Some((&int(0), &int(1))));
        assert_eq!(env.finite_lower(), &[int(0)]);
        assert_eq!(env.finite_upper(), &[int(0)]);

        let env = envelopes_c0(&zero_c0()).unwrap();
        assert!(env.lower().iter().chain(env.upper()).all(Zero::is_zero));

        let s = RepresentableSeq::c0(
            Periodic::constant(ints(&[0])),
            Periodic::new(vec![], ints(&[-2, 1])).unwrap(),
        )
        .unwrap();
        let env = envelopes_c0(&s).unwrap();
        assert_eq!(env.at_infinity(), Some((&int(-2), &int(1))));
    }

    #[test]
    fn radius_examples() {
        assert_eq!(radius_c0(&envelopes_c0(&e_n()).unwrap()).unwrap(), int(1));
        assert_eq!(radius_c0(&envelopes_c0(&zero_c0()).unwrap()).unwrap(), int(0));
        let s = RepresentableSeq::c0(
            Periodic::new(vec![], vec![ints(&[0]), ints(&[4])]).unwrap(),
            Periodic::constant(int(0)),
        )
        .unwrap();
        assert_eq!(radius_c0(&envelopes_c0(&s).unwrap()).unwrap(), int(2));
        let finite = Envelope::new(ints(&[0]), ints(&[1]), None).unwrap();
        assert!(radius_c0(&finite).is_err());
    }

    #[test]
    fn selector_examples() {
        assert_eq!(center_selector_c0(&envelopes_c0(&e_n()).unwrap()).unwrap(), ints(&[0]));
        let bx = center_box_c0(&envelopes_c0(&e_n()).unwrap()).unwrap();
        assert_eq!(bx.intervals, vec![(int(-1), int(1))]);

        let s = RepresentableSeq::c0(
            Periodic::new(vec![], vec![ints(&[0]), ints(&[4])]).unwrap(),
            Periodic::constant(int(0)),
        )
        .unwrap();
        let env = envelopes_c0(&s).unwrap();
        assert_eq!(center_box_c0(&env).unwrap().intervals, vec![(int(2), int(2))]);
        assert_eq!(center_selector_c0(&env).unwrap(), ints(&[2]));
        assert_eq!(center_selector_c0(&envelopes_c0(&zero_c0()).unwrap()).unwrap(), ints(&[0, 0]));
    }

    #[test]
    fn lim_quantity_examples() {
        let q = lim_quantities(&e_n()).unwrap();
        assert_eq!((q.alpha.clone(), q.beta.clone(), q.gamma.clone(), q.delta.clone()), (int(1), int(0), int(1), int(1)));
        assert!(q.identity_c0() && q.identity_c() && q.beta_le_alpha());

        let q = lim_quantities(&zero_c0()).unwrap();
        assert!([&q.alpha, &q.beta, &q.gamma, &q.delta].iter().all(|x| x.is_zero()));

        let q = lim_quantities(&alternating_tail(SpaceKind::CTail)).unwrap();
        assert_eq!(q.alpha, int(2));
        assert_eq!(q.beta, int(2));
        assert_eq!(q.gamma, int(2));
        assert_eq!(q.delta, int(1));
    }

    #[test]
    fn lim_quantities_rejects_finite() {
        let s = RepresentableSeq::sup(vec![], vec![ints(&[1])]).unwrap();
        assert!(matches!(lim_quantities(&s), Err(Error::WrongKind { .. })));
    }

    #[test]
    fn radius_lim_examples() {
        assert_eq!(radius_lim(&e_n(), LimSpace::C0).unwrap(), int(1));
        let alt = alternating_tail(SpaceKind::CTail);
        assert_eq!(radius_lim(&alt, LimSpace::C).unwrap(), int(1));
        assert_eq!(radius_lim(&alt, LimSpace::Linf).unwrap(), int(1));
        assert_eq!(radius_lim(&zero_c0(), LimSpace::C0).unwrap(), int(0));
        let zero_tail = RepresentableSeq::with_tail(
            SpaceKind::LinfTail,
            Periodic::constant(ints(&[0])),
            Periodic::constant(int(0)),
        )
        .unwrap();
        assert_eq!(radius_lim(&zero_tail, LimSpace::Linf).unwrap(), int(0));
    }

    #[test]
    fn radius_lim_kind_mismatch() {
        assert!(radius_lim(&e_n(), LimSpace::C).is_err());
        assert!(radius_lim(&alternating_tail(SpaceKind::LinfTail), LimSpace::C).is_err());
        assert!(radius_lim(&alternating_tail(SpaceKind::CTail), LimSpace::C0).is_err());
    }

    #[test]
    fn preperiods_and_core_interact() {
        // core range 3 at coordinate 0; spike reaches −5 once in its preperiod only
        let s = RepresentableSeq::c0(
            Periodic::new(vec![ints(&[100])], vec![ints(&[0]), ints(&[3])]).unwrap(),
            Periodic::new(vec![int(-5)], vec![frac(1, 2)]).unwrap(),
        )
        .unwrap();
        let q = lim_quantities(&s).unwrap();
        assert_eq!(q.alpha, int(3));
        assert_eq!(q.beta, int(3));
        assert_eq!(q.gamma, frac(1, 2));
        assert_eq!(q.delta, frac(1, 2));
        assert_eq!(radius_lim(&s, LimSpace::C0).unwrap(), frac(3, 2));
        assert_eq!(radius_c0(&envelopes_c0(&s).unwrap()).unwrap(), frac(3, 2));
    }
}
