//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use asymcenter::c0_lim::{center_box_c0, envelopes_c0, lim_quantities, radius_c0, radius_lim, LimSpace};
use asymcenter::envelope::{
    canonical_selector, cac_inclusion_check, center_box, envelopes_finite, ndist_midpoint, ndist_pinned,
};
use asymcenter::gen::{self, GenConfig};
use asymcenter::hilbert::{
    asymptotic_center_euclid, baronti_papini_sets_check, far_subsequence, holder_bound_check,
    hull_membership_check, smallest_enclosing_ball,
};
use asymcenter::metric::{pseudometric_d, pseudometric_d_truncated};
use asymcenter::oracles::{
    radius_oracle_enumerate, radius_oracle_euclid, radius_oracle_supnorm, truncation_envelope, truncation_oracle,
    Quantity,
};
use asymcenter::rational::{half, int};
use asymcenter::{
    asymptotic_distance, cluster_set, EuclidNorm, Periodic, RepresentableSeq, SpaceKind, SupNorm, Q,
};
use num_traits::Signed;
use rand::Rng;

type Check = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn ok<T, E: std::fmt::Display>(r: Result<T, E>, ctx: &str) -> Result<T, String> {
    r.map_err(|e| format!("{ctx}: {e}"))
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

fn axis_pair() -> (RepresentableSeq, RepresentableSeq) {
    let x = RepresentableSeq::euclid(vec![], vec![vec![int(-1), int(0)], vec![int(1), int(0)]]).unwrap();
    let y = RepresentableSeq::euclid(vec![], vec![vec![int(0), int(-1)], vec![int(0), int(1)]]).unwrap();
    (x, y)
}

/// Truncation horizon and tail index at which the windows are the true tails.
fn horizon_for(x: &RepresentableSeq, y: &RepresentableSeq) -> (usize, usize) {
    let n = x.settle_len().max(y.settle_len()) + 1;
    let p = num_integer::lcm(x.joint_period(), y.joint_period());
    (2 * (n + p), n)
}

fn axis_example() -> Check {
    let start = Instant::now();
    let (x, y) = axis_pair();
    let d = ok(pseudometric_d(&x, &y, &EuclidNorm), "d")?;
    ensure!((d - 2f64.sqrt()).abs() <= 1e-12, "d = {d}");
    let bounds = ok(pseudometric_d_truncated(&x, &y, 20, 1, &EuclidNorm), "truncated d")?;
    ensure!(
        (bounds.lo - 2f64.sqrt()).abs() <= 1e-12 && (bounds.hi - 2f64.sqrt()).abs() <= 1e-12,
        "truncated bounds {bounds:?}"
    );
    for s in [&x, &y] {
        let b = ok(asymptotic_center_euclid(s), "center")?;
        ensure!(dist(&b.center, &[0.0, 0.0]) <= 1e-9, "center {:?}", b.center);
        ensure!((b.radius - 1.0).abs() <= 1e-12, "radius {}", b.radius);
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    Ok(format!("d = {d:.15}, centers (0,0), radii 1"))
}

fn lim_parity() -> Check {
    let start = Instant::now();
    let cfg = GenConfig {
        max_dim: 6,
        max_cycle: 8,
        ..GenConfig::default()
    };
    for i in 0..10_000 {
        let mut rng = gen::rng(gen::trial_seed(2, i));
        let s = gen::sequence(&mut rng, &cfg, SpaceKind::C0Spike);
        let lim = ok(radius_lim(&s, LimSpace::C0), "radius_lim")?;
        let env = ok(radius_c0(&ok(envelopes_c0(&s), "envelopes")?), "radius_c0")?;
        ensure!(lim == env, "c0 trial {i}: {lim} vs {env}");
    }
    for i in 0..10_000 {
        let mut rng = gen::rng(gen::trial_seed(3, i));
        let s = gen::sequence(&mut rng, &cfg, SpaceKind::CTail);
        let c = ok(radius_lim(&s, LimSpace::C), "radius_lim c")?;
        let linf = ok(radius_lim(&s, LimSpace::Linf), "radius_lim linf")?;
        let oracle = ok(radius_oracle_supnorm(&s), "oracle")?.value;
        ensure!(c == linf && c == oracle, "c trial {i}: {c} / {linf} / {oracle}");
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(60), "took {elapsed:?}");
    Ok(format!("2 x 10000 instances exact, {:.1} s", elapsed.as_secs_f64()))
}

fn proof_identities() -> Check {
    let cfg = GenConfig {
        max_dim: 6,
        max_cycle: 8,
        ..GenConfig::default()
    };
    let kinds = [SpaceKind::C0Spike, SpaceKind::CTail, SpaceKind::LinfTail];
    let mut count = 0;
    for (j, kind) in kinds.into_iter().enumerate() {
        for i in 0..10_000 {
            let mut rng = gen::rng(gen::trial_seed(40 + j as u64, i));
            let s = gen::sequence(&mut rng, &cfg, kind);
            let q = ok(lim_quantities(&s), "lim_quantities")?;
            ensure!(q.beta_le_alpha(), "{kind} trial {i}: β > α in {q:?}");
            ensure!(q.identity_c(), "{kind} trial {i}: max(β,γ) ≠ max(α,γ) in {q:?}");
            ensure!(q.identity_c0(), "{kind} trial {i}: max(β,2δ) ≠ max(α,2δ) in {q:?}");
            count += 1;
        }
    }
    Ok(format!("{count} instances exact"))
}

fn envelope_construction() -> Check {
    let cfg = GenConfig::default();
    for i in 0..10_000 {
        let mut rng = gen::rng(gen::trial_seed(4, i));
        let dim = gen::dim(&mut rng, &cfg);
        let env = gen::envelope(&mut rng, &cfg, dim, false);
        let target = half(&env.gap());
        let g = ok(ndist_midpoint(&env), "midpoint")?;
        let (up, down) = ok(env.deviations(&g), "deviations")?;
        ensure!(up == target && down == target, "midpoint trial {i}");

        let t0 = rng.random_range(0..dim);
        let (a0, b0) = (env.lower()[t0].clone(), env.upper()[t0].clone());
        let w = gen::rational(&mut rng, &GenConfig { magnitude: 1, max_denominator: 8, ..cfg.clone() }).abs();
        let s = &a0 + (&b0 - &a0) * w.min(int(1));
        let g = ok(ndist_pinned(&env, t0, &s), "pinned")?;
        let (up, down) = ok(env.deviations(&g), "deviations")?;
        let expect = (&b0 - &s).max(&s - &a0).max(target);
        ensure!(g[t0] == s && up.max(down) == expect, "pinned trial {i}");
    }
    Ok("10000 envelopes exact".into())
}

fn oracle_equivalence() -> Check {
    let cfg = GenConfig::default();
    let kinds = [
        SpaceKind::SupFinite,
        SpaceKind::C0Spike,
        SpaceKind::CTail,
        SpaceKind::LinfTail,
        SpaceKind::Euclidean,
    ];
    let mut worst_euclid: f64 = 0.0;
    for i in 0..10_000u64 {
        let kind = kinds[i as usize % kinds.len()];
        let mut rng = gen::rng(gen::trial_seed(5, i));
        let s = gen::sequence(&mut rng, &cfg, kind);
        let other = gen::sequence_with_dim(&mut rng, &cfg, kind, s.dim());
        let horizon = s.settle_len().max(s.dim()) + 2 * s.joint_period() + 1;
        match kind {
            SpaceKind::SupFinite => {
                let env = ok(envelopes_finite(&s), "envelopes")?;
                let r = ok(center_box(&env), "center box")?.radius;
                let oracle = ok(radius_oracle_supnorm(&s), "oracle")?;
                ensure!(r == oracle.value, "sup radius trial {i}: {r} vs {}", oracle.value);
                let t_env = ok(truncation_envelope(&s, horizon), "truncation envelope")?;
                ensure!(t_env == env, "sup envelope trial {i}");
                let d = ok(pseudometric_d(&s, &other, &SupNorm), "d")?;
                let (h, n) = horizon_for(&s, &other);
                let b = ok(pseudometric_d_truncated(&s, &other, h, n, &SupNorm), "truncated d")?;
                ensure!(b.lo == d && b.hi == d, "sup d trial {i}: {d} vs {b:?}");
            }
            SpaceKind::C0Spike => {
                let env = ok(envelopes_c0(&s), "envelopes")?;
                let r = ok(radius_c0(&env), "radius")?;
                let oracle = ok(radius_oracle_supnorm(&s), "oracle")?;
                ensure!(r == oracle.value, "c0 radius trial {i}: {r} vs {}", oracle.value);
                let bx = ok(center_box_c0(&env), "box")?;
                ensure!(bx.contains(&oracle.argmin), "c0 argmin outside box, trial {i}");
                let t_env = ok(truncation_envelope(&s, horizon), "truncation envelope")?;
                ensure!(t_env == env, "c0 envelope trial {i}");
                lim_parity_with_truncation(&s, horizon, i)?;
            }
            SpaceKind::CTail | SpaceKind::LinfTail => {
                let space = if kind == SpaceKind::CTail { LimSpace::C } else { LimSpace::Linf };
                let r = ok(radius_lim(&s, space), "radius")?;
                let oracle = ok(radius_oracle_supnorm(&s), "oracle")?;
                ensure!(r == oracle.value, "{kind} radius trial {i}: {r} vs {}", oracle.value);
                lim_parity_with_truncation(&s, horizon, i)?;
            }
            SpaceKind::Euclidean => {
                let cluster = ok(cluster_set(&s), "cluster")?;
                let ball = ok(smallest_enclosing_ball(&cluster, i), "seb")?;
                let exact = ok(radius_oracle_enumerate(&cluster), "enumerate")?;
                let sub = ok(radius_oracle_euclid(&cluster, i, 2000), "subgradient")?;
                let gap = (ball.radius - exact.value)
                    .abs()
                    .max(dist(&ball.center, &exact.argmin))
                    .max((ball.radius - sub.value).abs());
                worst_euclid = worst_euclid.max(gap);
                ensure!(gap <= 1e-6, "euclid trial {i}: seb {ball:?}, enum {exact:?}, sub {}", sub.value);
                let d = ok(pseudometric_d(&s, &other, &EuclidNorm), "d")?;
                let (h, n) = horizon_for(&s, &other);
                let b = ok(pseudometric_d_truncated(&s, &other, h, n, &EuclidNorm), "truncated d")?;
                ensure!((b.lo - d).abs() <= 1e-9 && (b.hi - d).abs() <= 1e-9, "euclid d trial {i}");
            }
        }
    }
    Ok(format!("10000 instances, rational paths exact, worst Euclidean gap {worst_euclid:.1e}"))
}

fn lim_parity_with_truncation(s: &RepresentableSeq, horizon: usize, i: u64) -> Result<(), String> {
    let q = ok(lim_quantities(s), "lim_quantities")?;
    for (quantity, closed) in Quantity::ALL.into_iter().zip([&q.alpha, &q.beta, &q.gamma, &q.delta]) {
        let t = ok(truncation_oracle(s, quantity, horizon), "truncation")?.value;
        ensure!(&t == closed, "{} trial {i}: {quantity:?} {closed} vs {t}", s.kind());
    }
    Ok(())
}

fn cac_inclusion() -> Check {
    let cfg = GenConfig::default();
    let one = int(1);
    let mut samples = 0;
    let mut worst = Q::from_integer(0.into());
    for i in 0..1_000 {
        let mut rng = gen::rng(gen::trial_seed(6, i));
        let s = gen::sequence(&mut rng, &cfg, SpaceKind::SupFinite);
        let report = ok(cac_inclusion_check(&s, &one, i, 10), "cac")?;
        ensure!(report.max_distance <= one, "trial {i}: distance {}", report.max_distance);
        ensure!(report.recentered == report.trials, "trial {i}: recentering skipped");
        samples += report.trials;
        worst = worst.max(report.max_distance);
    }
    Ok(format!("{samples} points of A_1, max distance to center set {worst}"))
}

fn holder_bounds() -> Check {
    let mut min_holder = f64::INFINITY;
    let mut min_bp = f64::INFINITY;
    for i in 0..10_000 {
        let mut rng = gen::rng(gen::trial_seed(7, i));
        let dim = rng.random_range(2..=5);
        let cfg = GenConfig::default().with_dim(dim);
        let x = gen::sequence(&mut rng, &cfg, SpaceKind::Euclidean);
        // half the pairs are small perturbations, where the bound is tight
        let y = if i % 2 == 0 {
            gen::sequence(&mut rng, &cfg, SpaceKind::Euclidean)
        } else {
            let small = GenConfig { magnitude: 1, max_denominator: 16, ..cfg.clone() };
            let cycle = x
                .core()
                .cycle()
                .iter()
                .map(|p| {
                    let noise = gen::vector(&mut rng, &small, dim);
                    p.iter().zip(noise).map(|(a, b)| a + b / int(8)).collect()
                })
                .collect();
            RepresentableSeq::euclid(vec![], cycle).unwrap()
        };
        let r = ok(holder_bound_check(&x, &y), &format!("holder trial {i}"))?;
        min_holder = min_holder.min(r.slack);
        let (a, b) = (
            gen::point_set(&mut rng, &cfg, dim, 8),
            gen::point_set(&mut rng, &cfg, dim, 8),
        );
        let r = ok(baronti_papini_sets_check(&a, &b), &format!("set trial {i}"))?;
        min_bp = min_bp.min(r.slack);
    }
    ensure!(min_holder >= -1e-7 && min_bp >= -1e-7, "slacks {min_holder}, {min_bp}");
    Ok(format!("10000 pairs each, min slack {min_holder:.3e} (sequences), {min_bp:.3e} (sets)"))
}

fn far_and_hull() -> Check {
    let cfg = GenConfig { max_cycle: 8, ..GenConfig::default() };
    let mut worst_hull: f64 = 0.0;
    for i in 0..1_000 {
        let mut rng = gen::rng(gen::trial_seed(8, i));
        let s = gen::sequence(&mut rng, &cfg, SpaceKind::Euclidean);
        let r = ok(asymptotic_center_euclid(&s), "center")?.radius;
        let mut eps = vec![0.1, 0.5];
        if r > 0.0 {
            eps.push(r / 2.0);
        }
        for e in eps {
            ok(far_subsequence(&s, e), &format!("far_subsequence trial {i}, ε = {e}"))?;
            let h = ok(hull_membership_check(&s, e), "hull")?;
            worst_hull = worst_hull.max(h);
            ensure!(h <= 1e-7, "hull trial {i}, ε = {e}: {h}");
        }
    }
    Ok(format!("1000 instances, center/radius preserved, max hull distance {worst_hull:.1e}"))
}

fn rotate_left<T: Clone>(p: &Periodic<T>, k: usize) -> Periodic<T> {
    let mut cycle = p.cycle().to_vec();
    let len = cycle.len();
    cycle.rotate_left(k % len);
    Periodic::new(p.preperiod().to_vec(), cycle).unwrap()
}

fn selector_invariance() -> Check {
    let cfg = GenConfig::default();
    for i in 0..1_000 {
        let mut rng = gen::rng(gen::trial_seed(9, i));
        for kind in [SpaceKind::SupFinite, SpaceKind::C0Spike, SpaceKind::Euclidean] {
            let s = gen::sequence(&mut rng, &cfg, kind);
            let base = ok(canonical_selector(&s), "selector")?;
            let mut shifted = s.clone();
            for _ in 0..rng.random_range(1..=5) {
                shifted = shifted.shift();
            }
            ensure!(ok(canonical_selector(&shifted), "selector")? == base, "{kind} prefix trial {i}");
            let permuted = match kind {
                SpaceKind::C0Spike => {
                    let core = s.core().cycle().len();
                    let spike = s.spike().unwrap();
                    RepresentableSeq::c0(
                        rotate_left(s.core(), rng.random_range(0..core)),
                        rotate_left(spike, rng.random_range(0..spike.cycle().len())),
                    )
                    .unwrap()
                }
                _ => {
                    let mut cycle = s.core().cycle().to_vec();
                    rand::seq::SliceRandom::shuffle(cycle.as_mut_slice(), &mut rng);
                    RepresentableSeq::new(kind, s.dim(), Periodic::new(s.core().preperiod().to_vec(), cycle).unwrap(), None, None)
                        .unwrap()
                }
            };
            ensure!(ok(canonical_selector(&permuted), "selector")? == base, "{kind} permutation trial {i}");
            if kind != SpaceKind::C0Spike {
                let twin = gen::reshuffled(&mut rng, &cfg, &s);
                let d = ok(pseudometric_d(&s, &twin, &SupNorm), "d")?;
                ensure!(d == int(0), "reshuffled copy at distance {d}");
                ensure!(ok(canonical_selector(&twin), "selector")? == base, "{kind} d-equivalence trial {i}");

                let limit = gen::vector(&mut rng, &cfg, s.dim());
                let pre = (0..rng.random_range(0..4)).map(|_| gen::vector(&mut rng, &cfg, s.dim())).collect();
                let conv = RepresentableSeq::new(kind, s.dim(), Periodic::new(pre, vec![limit.clone()]).unwrap(), None, None)
                    .unwrap();
                let sel = ok(canonical_selector(&conv), "selector")?;
                let expect = asymcenter::rational::vec_to_f64(&limit);
                ensure!(sel.to_f64() == expect, "{kind} singleton trial {i}: {sel:?}");
            }
        }
    }
    Ok("1000 instances per kind, exact".into())
}

fn pseudometric_axioms() -> Check {
    let cfg = GenConfig { max_dim: 3, ..GenConfig::default() };
    for i in 0..1_000 {
        let mut rng = gen::rng(gen::trial_seed(10, i));
        for kind in [SpaceKind::SupFinite, SpaceKind::Euclidean] {
            let d = gen::dim(&mut rng, &cfg);
            let [x, y, z] = [0, 1, 2].map(|_| gen::sequence_with_dim(&mut rng, &cfg, kind, d));
            if kind == SpaceKind::SupFinite {
                let dist = |a, b| pseudometric_d(a, b, &SupNorm).unwrap();
                ensure!(dist(&x, &x) == int(0), "d(x,x) trial {i}");
                ensure!(dist(&x, &y) == dist(&y, &x), "symmetry trial {i}");
                ensure!(dist(&x, &z) <= dist(&x, &y) + dist(&y, &z), "triangle trial {i}");
            } else {
                let dist = |a, b| pseudometric_d(a, b, &EuclidNorm).unwrap();
                ensure!(dist(&x, &x) == 0.0, "d(x,x) trial {i}");
                ensure!((dist(&x, &y) - dist(&y, &x)).abs() <= 1e-9, "symmetry trial {i}");
                ensure!(dist(&x, &z) <= dist(&x, &y) + dist(&y, &z) + 1e-9, "triangle trial {i}");
            }

            let twin = gen::reshuffled(&mut rng, &cfg, &x);
            if kind == SpaceKind::SupFinite {
                ensure!(pseudometric_d(&x, &twin, &SupNorm).unwrap() == int(0), "twin trial {i}");
                let (bx, bt) = (
                    center_box(&envelopes_finite(&x).unwrap()).unwrap(),
                    center_box(&envelopes_finite(&twin).unwrap()).unwrap(),
                );
                ensure!(bx == bt, "center boxes differ, trial {i}");
                let probe = gen::vector(&mut rng, &cfg, d);
                ensure!(
                    asymptotic_distance(&x, &probe).unwrap() == asymptotic_distance(&twin, &probe).unwrap(),
                    "limsup distances differ, trial {i}"
                );
            } else {
                ensure!(pseudometric_d(&x, &twin, &EuclidNorm).unwrap() == 0.0, "twin trial {i}");
                let (bx, bt) = (asymptotic_center_euclid(&x).unwrap(), asymptotic_center_euclid(&twin).unwrap());
                ensure!(
                    dist(&bx.center, &bt.center) <= 1e-9 && (bx.radius - bt.radius).abs() <= 1e-9,
                    "ball centers differ, trial {i}"
                );
            }
        }
    }
    Ok("1000 triples per norm".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Check); 10] = [
        ("worked example in the Euclidean plane", axis_example),
        ("Lim formulas vs envelope radius", lim_parity),
        ("alpha/beta/gamma/delta identities", proof_identities),
        ("midpoint and pinned envelope constructions", envelope_construction),
        ("closed forms vs oracles", oracle_equivalence),
        ("CAC inclusion with delta = 1", cac_inclusion),
        ("Holder and set center bounds", holder_bounds),
        ("far subsequence and hull membership", far_and_hull),
        ("selector invariances", selector_invariance),
        ("pseudometric axioms and d = 0 consequences", pseudometric_axioms),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{secs:.2} s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail} [{secs:.2} s]", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
