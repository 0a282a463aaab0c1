use asymcenter::c0_lim::{envelopes_c0, lim_quantities, radius_c0, radius_lim, LimSpace};
use asymcenter::envelope::{cac_inclusion_check, center_box, envelopes_finite};
use asymcenter::gen::{self, GenConfig, Rng8};
use asymcenter::hilbert::{asymptotic_center_euclid, baronti_papini_sets_check, holder_bound_check, smallest_enclosing_ball};
use asymcenter::metric::pseudometric_d;
use asymcenter::norm::{polyhedral_chebyshev, PolyhedralNorm};
use asymcenter::oracles::{
    radius_oracle_enumerate, radius_oracle_euclid, radius_oracle_supnorm, truncation_envelope, truncation_oracle, Quantity,
};
use asymcenter::rational::{self, int, ints};
use asymcenter::{cluster_set, EuclidNorm, Error, FinitePointSet, RepresentableSeq, SpaceKind, SupNorm, Q};
use rand::Rng;
use serde_json::{json, Value};

use crate::compute::SUBGRADIENT_ITERS;
use crate::report::{f, q, witness, Report};
use crate::Space;

pub struct Campaign {
    pub trials: u64,
    pub seed: u64,
    pub dim: Option<usize>,
}

impl Campaign {
    fn rng(&self, i: u64) -> Rng8 {
        gen::rng(gen::trial_seed(self.seed, i))
    }

    fn cfg(&self) -> GenConfig {
        match self.dim {
            Some(d) => GenConfig::default().with_dim(d),
            None => GenConfig::default(),
        }
    }
}

/// First failure kept for replay.
struct Witness {
    trial: u64,
    detail: String,
    instance: Value,
}

fn finish(rep: &mut Report, c: &Campaign, violations: u64, first: Option<Witness>) {
    rep.seed = Some(c.seed);
    rep.ok = violations == 0;
    rep.results["trials"] = json!(c.trials);
    rep.results["violations"] = json!(violations);
    rep.push("trials", c.trials.to_string());
    rep.push("violations", violations.to_string());
    if let Some(w) = first {
        rep.push("first failure", format!("trial {}: {}", w.trial, w.detail));
        rep.results["first_failure"] = json!({"trial": w.trial, "detail": w.detail, "instance": w.instance});
    }
}

fn check_one(s: &RepresentableSeq) -> Result<(), String> {
    let e = |e: Error| e.to_string();
    let horizon = s.settle_len().max(s.dim()) + 2 * s.joint_period() + 1;
    match s.kind() {
        SpaceKind::Euclidean => {
            let cluster = cluster_set(s).map_err(e)?;
            let ball = smallest_enclosing_ball(&cluster, 0).map_err(e)?;
            let exact = radius_oracle_enumerate(&cluster).map_err(e)?;
            let sub = radius_oracle_euclid(&cluster, 0, SUBGRADIENT_ITERS).map_err(e)?;
            let gap = (ball.radius - exact.value).abs().max((ball.radius - sub.value).abs());
            if gap > 1e-6 {
                return Err(format!("ball radius {} vs oracles {} / {}", ball.radius, exact.value, sub.value));
            }
        }
        kind => {
            let oracle = radius_oracle_supnorm(s).map_err(e)?.value;
            let closed = match kind {
                SpaceKind::SupFinite => {
                    let env = envelopes_finite(s).map_err(e)?;
                    if truncation_envelope(s, horizon).map_err(e)? != env {
                        return Err("envelope differs from truncation oracle".into());
                    }
                    center_box(&env).map_err(e)?.radius
                }
                SpaceKind::C0Spike => {
                    let env = envelopes_c0(s).map_err(e)?;
                    if truncation_envelope(s, horizon).map_err(e)? != env {
                        return Err("envelope differs from truncation oracle".into());
                    }
                    let r = radius_c0(&env).map_err(e)?;
                    if r != radius_lim(s, LimSpace::C0).map_err(e)? {
                        return Err("envelope radius differs from Lim radius".into());
                    }
                    r
                }
                SpaceKind::CTail => radius_lim(s, LimSpace::C).map_err(e)?,
                _ => radius_lim(s, LimSpace::Linf).map_err(e)?,
            };
            if closed != oracle {
                return Err(format!("closed form {closed} vs oracle {oracle}"));
            }
            if !kind.is_finite() {
                let lq = lim_quantities(s).map_err(e)?;
                for (quantity, value) in Quantity::ALL.into_iter().zip([&lq.alpha, &lq.beta, &lq.gamma, &lq.delta]) {
                    let t = truncation_oracle(s, quantity, horizon).map_err(e)?.value;
                    if &t != value {
                        return Err(format!("{quantity:?}: closed form {value} vs truncation {t}"));
                    }
                }
            }
        }
    }
    Ok(())
}

pub fn crosscheck(c: &Campaign, space: Space) -> Report {
    let mut rep = Report::new(format!("crosscheck --space {}", space.name()));
    let mut violations = 0;
    let mut first = None;
    for i in 0..c.trials {
        let s = gen::sequence(&mut c.rng(i), &c.cfg(), space.kind());
        if let Err(detail) = check_one(&s) {
            violations += 1;
            first.get_or_insert(Witness {
                trial: i,
                detail,
                instance: witness(&[s]),
            });
        }
    }
    finish(&mut rep, c, violations, first);
    rep
}

fn perturbed(rng: &mut Rng8, x: &RepresentableSeq) -> RepresentableSeq {
    let small = GenConfig {
        magnitude: 1,
        max_denominator: 16,
        ..GenConfig::default()
    };
    let cycle = x
        .core()
        .cycle()
        .iter()
        .map(|p| {
            let noise = gen::vector(rng, &small, x.dim());
            p.iter().zip(noise).map(|(a, b)| a + b / int(8)).collect()
        })
        .collect();
    RepresentableSeq::euclid(vec![], cycle).expect("same shape")
}

fn slack_campaign(c: &Campaign, name: &str, sets: bool) -> Report {
    let mut rep = Report::new(format!("verify {name}"));
    let mut violations = 0;
    let mut first = None;
    let mut min_slack = f64::INFINITY;
    let mut worst: Option<(u64, Value)> = None;
    for i in 0..c.trials {
        let mut rng = c.rng(i);
        let dim = c.dim.unwrap_or_else(|| rng.random_range(2..=5));
        let cfg = GenConfig::default().with_dim(dim);
        let (outcome, instance) = if sets {
            let a = gen::point_set(&mut rng, &cfg, dim, 8);
            let b = gen::point_set(&mut rng, &cfg, dim, 8);
            let as_seq = |p: &FinitePointSet| RepresentableSeq::euclid(vec![], p.points().to_vec()).expect("nonempty");
            (baronti_papini_sets_check(&a, &b), witness(&[as_seq(&a), as_seq(&b)]))
        } else {
            let x = gen::sequence(&mut rng, &cfg, SpaceKind::Euclidean);
            let y = if i % 2 == 0 {
                gen::sequence(&mut rng, &cfg, SpaceKind::Euclidean)
            } else {
                perturbed(&mut rng, &x)
            };
            (holder_bound_check(&x, &y), witness(&[x, y]))
        };
        let slack = match outcome {
            Ok(r) => r.slack,
            Err(Error::BoundViolated { slack, .. }) => {
                violations += 1;
                first.get_or_insert(Witness {
                    trial: i,
                    detail: format!("slack {slack:e}"),
                    instance: instance.clone(),
                });
                slack
            }
            Err(e) => {
                violations += 1;
                first.get_or_insert(Witness {
                    trial: i,
                    detail: e.to_string(),
                    instance: instance.clone(),
                });
                continue;
            }
        };
        if slack < min_slack {
            min_slack = slack;
            worst = Some((i, instance));
        }
    }
    rep.push("min slack", format!("{:.3e}", min_slack));
    rep.results["min_slack"] = f(min_slack);
    if let Some((trial, instance)) = worst {
        rep.results["worst_instance"] = json!({"trial": trial, "instance": instance});
    }
    finish(&mut rep, c, violations, first);
    rep
}

pub fn holder(c: &Campaign) -> Report {
    slack_campaign(c, "holder", false)
}

pub fn bp_sets(c: &Campaign) -> Report {
    slack_campaign(c, "bp-sets", true)
}

pub fn cac(c: &Campaign, delta: &Q) -> Report {
    let mut rep = Report::new(format!("verify cac --delta {}", rational::format(delta)));
    let mut violations = 0;
    let mut first = None;
    let mut max_distance = Q::from_integer(0.into());
    let one = int(1);
    for i in 0..c.trials {
        let s = gen::sequence(&mut c.rng(i), &c.cfg(), SpaceKind::SupFinite);
        match cac_inclusion_check(&s, delta, gen::trial_seed(c.seed, i), 4) {
            Ok(r) if r.max_distance <= one => max_distance = max_distance.max(r.max_distance),
            Ok(r) => {
                violations += 1;
                first.get_or_insert(Witness {
                    trial: i,
                    detail: format!("distance {} at {:?}", rational::format(&r.max_distance), r.witness),
                    instance: witness(&[s]),
                });
            }
            Err(e) => {
                violations += 1;
                first.get_or_insert(Witness {
                    trial: i,
                    detail: e.to_string(),
                    instance: witness(&[s]),
                });
            }
        }
    }
    rep.push("max distance", rational::format(&max_distance));
    rep.results["max_distance"] = q(&max_distance);
    finish(&mut rep, c, violations, first);
    rep
}

pub fn lim_identities(c: &Campaign) -> Report {
    let mut rep = Report::new("verify lim-identities");
    let kinds = [SpaceKind::C0Spike, SpaceKind::CTail, SpaceKind::LinfTail];
    let mut violations = 0;
    let mut first = None;
    for i in 0..c.trials {
        let s = gen::sequence(&mut c.rng(i), &c.cfg(), kinds[(i % 3) as usize]);
        let failure = match lim_quantities(&s) {
            Ok(q) if q.beta_le_alpha() && q.identity_c() && q.identity_c0() => None,
            Ok(q) => Some(format!("identities fail for {}", serde_json::to_string(&q).expect("serializes"))),
            Err(e) => Some(e.to_string()),
        };
        if let Some(detail) = failure {
            violations += 1;
            first.get_or_insert(Witness {
                trial: i,
                detail,
                instance: witness(&[s]),
            });
        }
    }
    finish(&mut rep, c, violations, first);
    rep
}

pub fn axioms(c: &Campaign) -> Report {
    let mut rep = Report::new("verify axioms");
    let mut violations = 0;
    let mut first = None;
    for i in 0..c.trials {
        let mut rng = c.rng(i);
        let kind = if i % 2 == 0 { SpaceKind::SupFinite } else { SpaceKind::Euclidean };
        let dim = gen::dim(&mut rng, &c.cfg());
        let [x, y, z] = [0, 1, 2].map(|_| gen::sequence_with_dim(&mut rng, &c.cfg(), kind, dim));
        let twin = gen::reshuffled(&mut rng, &c.cfg(), &x);
        let failure = if kind == SpaceKind::SupFinite {
            let d = |a, b| pseudometric_d(a, b, &SupNorm).expect("same shape");
            let boxes = |s: &RepresentableSeq| center_box(&envelopes_finite(s).expect("finite")).expect("box");
            if d(&x, &x) != int(0) || d(&x, &y) != d(&y, &x) {
                Some("d(x,x) or symmetry")
            } else if d(&x, &z) > d(&x, &y) + d(&y, &z) {
                Some("triangle inequality")
            } else if d(&x, &twin) != int(0) || boxes(&x) != boxes(&twin) {
                Some("zero distance with different center sets")
            } else {
                None
            }
        } else {
            let d = |a, b| pseudometric_d(a, b, &EuclidNorm).expect("same shape");
            let (bx, bt) = (
                asymptotic_center_euclid(&x).expect("euclid"),
                asymptotic_center_euclid(&twin).expect("euclid"),
            );
            let moved = bx.center.iter().zip(&bt.center).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            if d(&x, &x) != 0.0 || (d(&x, &y) - d(&y, &x)).abs() > 1e-9 {
                Some("d(x,x) or symmetry")
            } else if d(&x, &z) > d(&x, &y) + d(&y, &z) + 1e-9 {
                Some("triangle inequality")
            } else if d(&x, &twin) != 0.0 || moved > 1e-9 || (bx.radius - bt.radius).abs() > 1e-9 {
                Some("zero distance with different centers")
            } else {
                None
            }
        };
        if let Some(detail) = failure {
            violations += 1;
            first.get_or_insert(Witness {
                trial: i,
                detail: detail.into(),
                instance: witness(&[x, y, z]),
            });
        }
    }
    finish(&mut rep, c, violations, first);
    rep
}

/// One norm of the sampled family.
enum FamilyNorm {
    Euclid,
    Poly(String, PolyhedralNorm),
}

impl FamilyNorm {
    fn name(&self) -> &str {
        match self {
            FamilyNorm::Euclid => "euclid",
            FamilyNorm::Poly(n, _) => n,
        }
    }

    /// Whether the two cluster sets have the same Chebyshev radius and center set.
    fn same_center(&self, a: &FinitePointSet, b: &FinitePointSet) -> bool {
        match self {
            FamilyNorm::Euclid => {
                let (x, y) = (
                    smallest_enclosing_ball(a, 0).expect("nonempty"),
                    smallest_enclosing_ball(b, 0).expect("nonempty"),
                );
                (x.radius - y.radius).abs() <= 1e-9
                    && x.center.iter().zip(&y.center).all(|(p, q)| (p - q).abs() <= 1e-9)
            }
            FamilyNorm::Poly(_, norm) => {
                polyhedral_chebyshev(a.points(), norm).expect("nonempty")
                    == polyhedral_chebyshev(b.points(), norm).expect("nonempty")
            }
        }
    }
}

fn norm_family(rng: &mut Rng8, extra: usize) -> Vec<FamilyNorm> {
    let mut family = vec![
        FamilyNorm::Euclid,
        FamilyNorm::Poly("sup".into(), PolyhedralNorm::sup(2)),
        FamilyNorm::Poly(
            "l1".into(),
            PolyhedralNorm::new(vec![ints(&[1, 1]), ints(&[1, -1])]).expect("full rank"),
        ),
    ];
    let cfg = GenConfig {
        magnitude: 3,
        max_denominator: 2,
        ..GenConfig::default()
    };
    for k in 0..extra {
        let mut rows = vec![ints(&[1, 0]), ints(&[0, 1])];
        for _ in 0..rng.random_range(1..=2) {
            rows.push(gen::vector(rng, &cfg, 2));
        }
        family.push(FamilyNorm::Poly(format!("poly{k}"), PolyhedralNorm::new(rows).expect("full rank")));
    }
    family
}

fn separating(family: &[FamilyNorm], x: &RepresentableSeq, y: &RepresentableSeq) -> Vec<String> {
    let (a, b) = (cluster_set(x).expect("finite"), cluster_set(y).expect("finite"));
    family
        .iter()
        .filter(|n| !n.same_center(&a, &b))
        .map(|n| n.name().to_string())
        .collect()
}

/// Pairs in the plane with `d > 0` whose centers and radii agree under every
/// sampled norm. Nothing is asserted: candidates are only listed.
pub fn conjecture(c: &Campaign, family_size: usize) -> Report {
    let mut rep = Report::new("fuzz conjecture");
    let mut rng = gen::rng(c.seed);
    let family = norm_family(&mut rng, family_size);
    let names: Vec<&str> = family.iter().map(FamilyNorm::name).collect();

    let axis_x = RepresentableSeq::euclid(vec![], vec![ints(&[-1, 0]), ints(&[1, 0])]).expect("valid");
    let axis_y = RepresentableSeq::euclid(vec![], vec![ints(&[0, -1]), ints(&[0, 1])]).expect("valid");
    let axis = separating(&family, &axis_x, &axis_y);

    let cfg = GenConfig {
        max_cycle: 4,
        max_preperiod: 0,
        magnitude: 3,
        max_denominator: 2,
        ..GenConfig::default().with_dim(2)
    };
    let mut positive = 0u64;
    let mut candidates = Vec::new();
    for i in 0..c.trials {
        let mut rng = c.rng(i);
        let x = gen::sequence(&mut rng, &cfg, SpaceKind::Euclidean);
        let y = if rng.random_bool(0.5) {
            // point reflection through the sup-norm center keeps that center
            let env = envelopes_finite(&x.with_kind(SpaceKind::SupFinite).expect("finite")).expect("finite");
            let mid: Vec<Q> = env.lower().iter().zip(env.upper()).map(|(a, b)| a + b).collect();
            let cycle = x
                .core()
                .cycle()
                .iter()
                .map(|p| mid.iter().zip(p).map(|(m, v)| m - v).collect())
                .collect();
            RepresentableSeq::euclid(vec![], cycle).expect("valid")
        } else {
            gen::sequence(&mut rng, &cfg, SpaceKind::Euclidean)
        };
        if pseudometric_d(&x, &y, &EuclidNorm).expect("same shape") == 0.0 {
            continue;
        }
        positive += 1;
        if separating(&family, &x, &y).is_empty() {
            candidates.push(json!({"trial": i, "instance": witness(&[x, y])}));
        }
    }
    rep.seed = Some(c.seed);
    rep.results = json!({
        "trials": c.trials,
        "norms": names,
        "pairs_with_positive_d": positive,
        "candidates": candidates,
        "example_pair_separated_by": axis,
    });
    rep.push("trials", c.trials.to_string());
    rep.push("norms", names.join(", "));
    rep.push("pairs with d > 0", positive.to_string());
    rep.push("candidates", candidates.len().to_string());
    rep.push("example pair separated by", axis.join(", "));
    rep
}
