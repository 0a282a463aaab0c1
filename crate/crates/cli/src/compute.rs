use asymcenter::c0_lim::{center_box_c0, center_selector_c0, envelopes_c0, lim_quantities, radius_c0, radius_lim, LimSpace};
use asymcenter::envelope::{center_box, envelopes_finite, ndist_midpoint};
use asymcenter::hilbert::asymptotic_center_euclid;
use asymcenter::metric::{pseudometric_d, pseudometric_d_truncated, pseudometric_d_truncated_sup};
use asymcenter::oracles::{radius_oracle_enumerate, radius_oracle_euclid, radius_oracle_supnorm, truncation_envelope};
use asymcenter::{cluster_set, EuclidNorm, L1Norm, RepresentableSeq, SpaceKind, SupNorm};
use serde_json::{json, Value};

use crate::report::{self, compute_error, f, fs, fstr, q, qs, qstr, Failure, Report};
use crate::{NormArg, Space};

pub const SUBGRADIENT_ITERS: usize = 2000;

impl Space {
    pub fn accepts(self, kind: SpaceKind) -> bool {
        match self {
            Space::Sup => kind == SpaceKind::SupFinite,
            Space::Euclid => kind == SpaceKind::Euclidean,
            Space::C0 => kind == SpaceKind::C0Spike,
            Space::C => kind == SpaceKind::CTail,
            Space::Linf => kind.has_tail(),
        }
    }

    pub fn natural(kind: SpaceKind) -> Space {
        match kind {
            SpaceKind::SupFinite => Space::Sup,
            SpaceKind::Euclidean => Space::Euclid,
            SpaceKind::C0Spike => Space::C0,
            SpaceKind::CTail => Space::C,
            SpaceKind::LinfTail => Space::Linf,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Space::Sup => "sup",
            Space::Euclid => "euclid",
            Space::C0 => "c0",
            Space::C => "c",
            Space::Linf => "linf",
        }
    }

    pub fn kind(self) -> SpaceKind {
        match self {
            Space::Sup => SpaceKind::SupFinite,
            Space::Euclid => SpaceKind::Euclidean,
            Space::C0 => SpaceKind::C0Spike,
            Space::C => SpaceKind::CTail,
            Space::Linf => SpaceKind::LinfTail,
        }
    }
}

pub fn resolve_space(space: Option<Space>, seq: &RepresentableSeq) -> Result<Space, Failure> {
    let s = space.unwrap_or_else(|| Space::natural(seq.kind()));
    if !s.accepts(seq.kind()) {
        return Err(Failure::Mismatch(format!(
            "sequence of kind {} cannot be read in space {}",
            seq.kind(),
            s.name()
        )));
    }
    Ok(s)
}

type Entry = Result<Value, asymcenter::Error>;

pub fn radius(seq: &RepresentableSeq, space: Space, rep: &mut Report, label: &str) -> Entry {
    Ok(match space {
        Space::Euclid => {
            let cluster = cluster_set(seq)?;
            let ball = asymptotic_center_euclid(seq)?;
            let exact = radius_oracle_enumerate(&cluster)?;
            let sub = radius_oracle_euclid(&cluster, 0, SUBGRADIENT_ITERS)?;
            rep.push(format!("{label}radius"), format!("{}", report::round12(ball.radius)));
            rep.push(format!("{label}oracle (enumeration)"), format!("{}", report::round12(exact.value)));
            rep.push(format!("{label}oracle (subgradient)"), format!("{}", report::round12(sub.value)));
            json!({
                "space": space.name(),
                "radius": f(ball.radius),
                "oracle": {"enumeration": f(exact.value), "subgradient": f(sub.value)},
                "diff": f((ball.radius - exact.value).abs().max((ball.radius - sub.value).abs())),
            })
        }
        _ => {
            let closed = match space {
                Space::Sup => center_box(&envelopes_finite(seq)?)?.radius,
                Space::C0 => {
                    let env = radius_c0(&envelopes_c0(seq)?)?;
                    let lim = radius_lim(seq, LimSpace::C0)?;
                    if env != lim {
                        return Err(asymcenter::Error::Invariant {
                            op: "radius",
                            detail: format!("envelope radius {env} differs from Lim radius {lim}"),
                        });
                    }
                    env
                }
                Space::C => radius_lim(seq, LimSpace::C)?,
                Space::Linf => radius_lim(seq, LimSpace::Linf)?,
                Space::Euclid => unreachable!(),
            };
            let oracle = radius_oracle_supnorm(seq)?;
            let diff = &closed - &oracle.value;
            rep.push(format!("{label}radius"), asymcenter::rational::format(&closed));
            rep.push(format!("{label}oracle"), asymcenter::rational::format(&oracle.value));
            rep.push(format!("{label}diff"), asymcenter::rational::format(&diff));
            json!({"space": space.name(), "radius": q(&closed), "oracle": q(&oracle.value), "diff": q(&diff)})
        }
    })
}

pub fn center(seq: &RepresentableSeq, space: Space, rep: &mut Report, label: &str) -> Entry {
    Ok(match space {
        Space::Sup | Space::C0 => {
            let (bx, selector) = if space == Space::Sup {
                let env = envelopes_finite(seq)?;
                (center_box(&env)?, ndist_midpoint(&env)?)
            } else {
                let env = envelopes_c0(seq)?;
                (center_box_c0(&env)?, center_selector_c0(&env)?)
            };
            let intervals: Vec<Value> = bx.intervals.iter().map(|(lo, hi)| json!([q(lo), q(hi)])).collect();
            let shown: Vec<String> = bx
                .intervals
                .iter()
                .map(|(lo, hi)| format!("[{}, {}]", asymcenter::rational::format(lo), asymcenter::rational::format(hi)))
                .collect();
            rep.push(format!("{label}radius"), asymcenter::rational::format(&bx.radius));
            rep.push(format!("{label}box"), shown.join(" x "));
            rep.push(format!("{label}selector"), qstr(&selector));
            json!({"space": space.name(), "radius": q(&bx.radius), "box": intervals, "selector": qs(&selector)})
        }
        Space::Euclid => {
            let ball = asymptotic_center_euclid(seq)?;
            rep.push(format!("{label}radius"), format!("{}", report::round12(ball.radius)));
            rep.push(format!("{label}center"), fstr(&ball.center));
            json!({"space": "euclid", "radius": f(ball.radius), "center": fs(&ball.center), "support": ball.support})
        }
        Space::C | Space::Linf => {
            return Err(asymcenter::Error::WrongKind {
                op: "center",
                kind: seq.kind(),
            })
        }
    })
}

pub fn envelope(seq: &RepresentableSeq, space: Space, rep: &mut Report, label: &str) -> Entry {
    let horizon = seq.settle_len().max(seq.dim()) + 2 * seq.joint_period() + 1;
    Ok(match space {
        Space::Sup | Space::C0 => {
            let env = if space == Space::Sup { envelopes_finite(seq)? } else { envelopes_c0(seq)? };
            let oracle = truncation_envelope(seq, horizon)?;
            rep.push(format!("{label}lower"), qstr(env.lower()));
            rep.push(format!("{label}upper"), qstr(env.upper()));
            rep.push(format!("{label}oracle agrees"), (oracle == env).to_string());
            if oracle != env {
                return Err(asymcenter::Error::Invariant {
                    op: "envelope",
                    detail: "truncation oracle disagrees".into(),
                });
            }
            json!({"space": space.name(), "envelope": env, "oracle_agrees": true})
        }
        Space::C | Space::Linf => {
            let lq = lim_quantities(seq)?;
            rep.push(
                format!("{label}alpha/beta/gamma/delta"),
                format!(
                    "{} / {} / {} / {}",
                    asymcenter::rational::format(&lq.alpha),
                    asymcenter::rational::format(&lq.beta),
                    asymcenter::rational::format(&lq.gamma),
                    asymcenter::rational::format(&lq.delta)
                ),
            );
            json!({"space": space.name(), "lim_quantities": lq})
        }
        Space::Euclid => {
            return Err(asymcenter::Error::WrongKind {
                op: "envelope",
                kind: seq.kind(),
            })
        }
    })
}

pub fn distance(x: &RepresentableSeq, y: &RepresentableSeq, norm: NormArg, rep: &mut Report) -> Result<Value, Failure> {
    if x.kind() != y.kind() || x.dim() != y.dim() {
        return Err(Failure::Mismatch(format!(
            "cannot compare {} (dim {}) with {} (dim {})",
            x.kind(),
            x.dim(),
            y.kind(),
            y.dim()
        )));
    }
    let n = x.settle_len().max(y.settle_len()) + 1;
    let p = num_integer::lcm(x.joint_period(), y.joint_period());
    let horizon = 2 * (n + p + x.dim());
    let run = || -> Entry {
        if !x.kind().is_finite() {
            if norm != NormArg::Sup {
                return Err(asymcenter::Error::WrongKind {
                    op: "distance (only the sup norm applies)",
                    kind: x.kind(),
                });
            }
            let b = pseudometric_d_truncated_sup(x, y, horizon, n)?;
            return Ok(json!({"d": null, "method": "truncated", "bounds": [q(&b.lo), q(&b.hi)]}));
        }
        Ok(match norm {
            NormArg::Sup => {
                let d = pseudometric_d(x, y, &SupNorm)?;
                let b = pseudometric_d_truncated(x, y, horizon, n, &SupNorm)?;
                json!({"d": q(&d), "method": "cluster_hausdorff", "bounds": [q(&b.lo), q(&b.hi)]})
            }
            NormArg::L1 => {
                let d = pseudometric_d(x, y, &L1Norm)?;
                let b = pseudometric_d_truncated(x, y, horizon, n, &L1Norm)?;
                json!({"d": q(&d), "method": "cluster_hausdorff", "bounds": [q(&b.lo), q(&b.hi)]})
            }
            NormArg::Euclid => {
                let d = pseudometric_d(x, y, &EuclidNorm)?;
                let b = pseudometric_d_truncated(x, y, horizon, n, &EuclidNorm)?;
                json!({"d": f(d), "method": "cluster_hausdorff", "bounds": [f(b.lo), f(b.hi)]})
            }
        })
    };
    let v = run().map_err(|e| compute_error(e, rep))?;
    let show = |v: &Value| match v {
        Value::String(s) => s.clone(),
        Value::Null => "n/a".into(),
        other => other.to_string(),
    };
    rep.push("norm", norm.name());
    rep.push("d", show(&v["d"]));
    rep.push("method", show(&v["method"]));
    rep.push("bounds", format!("[{}, {}]", show(&v["bounds"][0]), show(&v["bounds"][1])));
    Ok(v)
}
