//! Acceptance suite: one test per criterion, each printing a single
//! `criterion k ...: PASS|FAIL` line to standard error.

mod common;

use std::io::Write;
use std::time::{Duration, Instant};

use liouville::criteria::{classify, position, EquationKind, Position, ProblemInstance, Quantity, Verdict};
use liouville::quadrature::{fit_rate, IJKind};
use liouville::rational::{int, ratio, Rational};
use liouville::stability::{
    check_stability, hardy_corollary_check, hardy_lemma_check, min_rayleigh, RadialGrid, Smooth,
    StabilityVerdict, DEFAULT_LADDER,
};
use liouville::weights::{GFactor, RadialFunction, WeightFamily};
use liouville::witness::{construct_witness, exact_pair, log_radii, select_epsilon, Regime};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;

const NONEXIST_LADDER: [f64; 4] = [10.0, 100.0, 1000.0, 10000.0];

fn report(k: u32, name: &str, passed: bool, detail: &str, elapsed: Duration) {
    let status = if passed { "PASS" } else { "FAIL" };
    let _ = writeln!(
        std::io::stderr(),
        "criterion {k} ({name}): {status} [{detail}; {:.2} s]",
        elapsed.as_secs_f64()
    );
}

fn finish(k: u32, name: &str, passed: bool, detail: String, start: Instant, limit: Duration) {
    let elapsed = start.elapsed();
    let on_time = elapsed <= limit;
    let detail = if on_time {
        detail
    } else {
        format!("{detail}; exceeded {} s budget", limit.as_secs())
    };
    report(k, name, passed && on_time, &detail, elapsed);
    assert!(passed, "criterion {k} failed: {detail}");
    assert!(on_time, "criterion {k} too slow: {elapsed:?} > {limit:?}");
}

#[test]
fn criterion_1_gelfand_threshold() {
    let start = Instant::now();
    let mut mismatches = Vec::new();
    for n in 1..=40 {
        let inst = ProblemInstance::new(EquationKind::G, int(n), int(0), int(0)).unwrap();
        // N = 2 gives N + α − 2 = 0, the trivial boundary, which is undetermined
        let expected = match n {
            2 => Verdict::Undet,
            ..=9 => Verdict::Nonexist,
            10 => Verdict::Undet,
            _ => Verdict::Exist,
        };
        let got = classify(&inst).verdict();
        if got != expected {
            mismatches.push(format!("N={n}: {got} != {expected}"));
        }
    }
    let passed = mismatches.is_empty();
    finish(
        1,
        "G threshold N<=9 / 10 / >=11",
        passed,
        format!("{} mismatches over N=1..40 {:?}", mismatches.len(), mismatches),
        start,
        Duration::from_secs(1),
    );
}

/// Instances straddling the closed-form threshold, including ones placed
/// within about 1e-40 of it.
fn threshold_probe_instances(eq: &EquationKind, rng: &mut ChaCha8Rng) -> Vec<ProblemInstance> {
    let p = eq.p().unwrap().clone();
    let q = match eq {
        EquationKind::L(_) => &p - int(1),
        _ => &p + int(1),
    };
    let root = sqrt_approx(&(&p * &q), 40);
    let mut out = Vec::new();
    for _ in 0..60 {
        let n = ratio(rng.gen_range(4..=80), 4);
        let alpha = ratio(rng.gen_range(-12..=12), 4);
        let beta = ratio(rng.gen_range(-40..=40), 8);
        out.push(ProblemInstance::new(eq.clone(), n, alpha, beta).unwrap());
    }
    for _ in 0..40 {
        let n = ratio(rng.gen_range(4..=80), 4);
        let alpha = ratio(rng.gen_range(-4..=12), 4);
        let d = &n + &alpha - int(2);
        if d <= int(0) {
            continue;
        }
        // K with 2K(p + √c)/q ≈ D, then nudged by ±1e-35 or left as is
        let k = &d * &q / (int(2) * (&p + &root));
        let nudge = Rational::new(rng.gen_range(-1i64..=1).into(), num_bigint::BigInt::from(10u32).pow(35));
        let beta = k + nudge + &alpha - int(2);
        out.push(ProblemInstance::new(eq.clone(), n, alpha, beta).unwrap());
    }
    out
}

#[test]
fn criterion_2_lane_emden_mems_thresholds() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let kinds: Vec<EquationKind> = L_EXPONENTS
        .iter()
        .map(|&(n, d)| lane_emden(n, d))
        .chain(M_EXPONENTS.iter().map(|&(n, d)| mems(n, d)))
        .collect();
    let (mut checked, mut near, mut mismatches) = (0usize, 0usize, Vec::new());
    for eq in &kinds {
        for inst in threshold_probe_instances(eq, &mut rng) {
            let d = inst.effective_dimension();
            if d <= int(0) {
                continue;
            }
            checked += 1;
            let gap = (inst.threshold().to_f64() - liouville::rational::to_f64(&d)).abs();
            near += usize::from(gap < 1e-12);
            let oracle = oracle_threshold_side(&inst);
            let pos = position(&inst);
            let expected = match oracle {
                std::cmp::Ordering::Greater => Position::Below,
                std::cmp::Ordering::Equal => Position::AtThreshold,
                std::cmp::Ordering::Less if inst.growth_gap() == int(0) => Position::DegenerateGrowth,
                std::cmp::Ordering::Less => Position::Above,
            };
            let verdict = classify(&inst).verdict();
            let verdict_ok = match expected {
                Position::Below => verdict == Verdict::Nonexist,
                Position::Above => verdict == Verdict::Exist,
                _ => verdict == Verdict::Undet,
            };
            if pos != expected || !verdict_ok {
                mismatches.push(format!("{} N={} a={} b={}: {pos:?} vs {expected:?}", eq, inst.n, inst.alpha, inst.beta));
            }
        }
    }
    let passed = mismatches.is_empty() && near > 0;
    finish(
        2,
        "L/M surd thresholds vs 200-digit oracle",
        passed,
        format!(
            "{checked} instances ({near} within 1e-12 of the threshold), {} mismatches {:?}",
            mismatches.len(),
            mismatches.iter().take(3).collect::<Vec<_>>()
        ),
        start,
        Duration::from_secs(1),
    );
}

fn growth_witness_instances() -> Vec<ProblemInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    ['G', 'L', 'M']
        .iter()
        .flat_map(|&tag| growth_side_instances(&mut rng, tag, 20))
        .collect()
}

#[test]
fn criterion_3_witness_exactness() {
    let start = Instant::now();
    let radii = log_radii(1e-3, 1e3, 200);
    let (mut max_rel, mut max_oracle) = (0.0f64, 0.0f64);
    let mut failures = Vec::new();
    let instances = growth_witness_instances();
    for inst in &instances {
        let wit = construct_witness(inst).unwrap();
        assert_eq!(wit.regime, Regime::Growth);
        let mut ok = wit.expected_exact;
        for &r in &radii {
            let res = wit.residual(r).unwrap();
            max_rel = max_rel.max(res.relative());
            let (lhs, rhs) = oracle_sides(&inst.eq, wit.n, wit.alpha, wit.beta, r);
            let scale = lhs.abs() + rhs.abs() + 1.0;
            let oracle_gap = ((lhs - rhs).abs() / scale)
                .max((lhs - res.lhs).abs() / scale)
                .max((rhs - res.rhs).abs() / scale);
            max_oracle = max_oracle.max(oracle_gap);
            ok &= res.relative() <= 1e-10 && oracle_gap <= 1e-10;
        }
        if !ok {
            failures.push(format!("{} N={} a={} b={}", inst.eq, inst.n, inst.alpha, inst.beta));
        }
    }
    finish(
        3,
        "witness exactness",
        failures.is_empty(),
        format!(
            "{} witnesses x 200 radii, max relative residual {max_rel:.2e}, max oracle gap {max_oracle:.2e} (limit 1e-10), failures {failures:?}",
            instances.len()
        ),
        start,
        Duration::from_secs(5),
    );
}

#[test]
fn criterion_4_stability_and_instability() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut min_stable = f64::INFINITY;
    let instances = growth_witness_instances();
    for inst in &instances {
        let wit = construct_witness(inst).unwrap();
        let rep = check_stability(&wit, &DEFAULT_LADDER).unwrap();
        let lowest = rep.rungs.iter().map(|r| r.lambda_min).fold(f64::INFINITY, f64::min);
        min_stable = min_stable.min(lowest);
        if rep.verdict != StabilityVerdict::StableEvidence || lowest < -1e-6 {
            failures.push(format!("stable? {} N={} a={} b={}", inst.eq, inst.n, inst.alpha, inst.beta));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let pairs = nonexistence_pairs(&mut rng, 10);
    let mut max_unstable = f64::NEG_INFINITY;
    for inst in &pairs {
        assert_eq!(classify(inst).verdict(), Verdict::Nonexist);
        let pair = exact_pair(inst).unwrap();
        let rep = check_stability(&pair, &NONEXIST_LADDER).unwrap();
        let worst = rep.most_negative();
        max_unstable = max_unstable.max(worst.lambda_min);
        if rep.verdict != StabilityVerdict::UnstableCertificate || !worst.mesh_converged_negative() {
            failures.push(format!("unstable? {} N={} a={} b={}", inst.eq, inst.n, inst.alpha, inst.beta));
        }
    }
    finish(
        4,
        "stability evidence and instability certificates",
        failures.is_empty(),
        format!(
            "{} witnesses stable (min lambda {min_stable:.3e} >= -1e-6), {} pairs certified (max of most-negative lambda {max_unstable:.3e} < -1e-5), failures {failures:?}",
            instances.len(),
            pairs.len()
        ),
        start,
        Duration::from_secs(120),
    );
}

#[test]
fn criterion_5_eigensolver_calibration() {
    let start = Instant::now();
    let exact = 0.25;
    let w = WeightFamily::flat();
    let lambda = |elements: usize| {
        let grid = RadialGrid::uniform(1.0, std::f64::consts::PI, elements).unwrap();
        min_rayleigh(&w, |_| 0.0, &grid).unwrap()
    };
    let errors: Vec<(usize, f64)> = [256, 512, 1024, 2048]
        .iter()
        .map(|&m| (m, (lambda(m) - exact).abs()))
        .collect();
    let orders: Vec<f64> = errors
        .windows(2)
        .map(|w| (w[0].1 / w[1].1).log2())
        .collect();
    let fine = lambda(4096);
    let passed = (fine - exact).abs() <= 1e-3 && orders.iter().all(|o| (1.8..=2.2).contains(o));
    finish(
        5,
        "eigensolver calibration",
        passed,
        format!("lambda(4096) = {fine:.10}, orders {orders:.3?} (want [1.8, 2.2])"),
        start,
        Duration::from_secs(10),
    );
}

#[test]
fn criterion_6_hardy_suites() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut lemma_bad, mut corollary_bad) = (0usize, 0usize);
    let mut min_gap = f64::INFINITY;
    for i in 0..200 {
        let n = rng.gen_range(1.0..12.0);
        let r_max: f64 = rng.gen_range(2.0..20.0);
        let c = rng.gen_range(0.0..0.7 * r_max);
        let w = rng.gen_range(0.05 * r_max..(0.95 * r_max - c).min(0.5 * r_max));
        let grid = RadialGrid::uniform(n, r_max, 2000).unwrap();
        let phi = Smooth(bump(c, w));
        let check = if i % 2 == 0 {
            let e = RadialFunction::Power { m: rng.gen_range(-2.0..2.0) };
            let tau = rng.gen_range(-2.0..2.0);
            hardy_lemma_check(&e, tau, &phi, &grid).unwrap()
        } else {
            let alpha = rng.gen_range(-3.0..3.0);
            let t = rng.gen_range(-3.0..3.0);
            hardy_corollary_check(alpha, t, &phi, &grid)
        };
        if !check.holds {
            if i % 2 == 0 {
                lemma_bad += 1
            } else {
                corollary_bad += 1
            }
        }
        min_gap = min_gap.min(check.gap() / (check.lhs.abs() + check.rhs.abs()).max(1e-300));
    }
    finish(
        6,
        "Hardy lemma and corollary suites",
        lemma_bad == 0 && corollary_bad == 0,
        format!("100+100 configurations, violations lemma {lemma_bad} corollary {corollary_bad}, min relative gap {min_gap:.2e}"),
        start,
        Duration::from_secs(30),
    );
}

/// `N + (α·m − 2tβ)/q − (2m/q or m/q)`, with the leading power of `|∇ω₁|` being `α − 1`.
fn exponent_oracle(kind: &IJKind, n: f64, alpha: f64, beta: f64, t: f64) -> f64 {
    let (m, q) = match (&kind.eq, kind.eq.p_f64()) {
        (EquationKind::G, _) => (2.0 * t + 1.0, 1.0),
        (EquationKind::L(_), Some(p)) => (p + 2.0 * t - 1.0, p - 1.0),
        (_, Some(p)) => (p + 2.0 * t + 1.0, p + 1.0),
        _ => unreachable!(),
    };
    match kind.quantity {
        Quantity::I => n + (alpha * m - 2.0 * t * beta) / q - 2.0 * m / q,
        Quantity::J => n + ((alpha - 1.0) * m - 2.0 * t * beta) / q - m / q,
    }
}

/// A `t` in the middle 90% of the admissible window.
fn interior_t(eq: &EquationKind, rng: &mut ChaCha8Rng) -> f64 {
    let (lo, hi) = match (eq, eq.p_f64()) {
        (EquationKind::G, _) => (0.0, 2.0),
        (EquationKind::L(_), Some(p)) => {
            if rng.gen_bool(0.5) {
                (p - (p * (p - 1.0)).sqrt(), p + (p * (p - 1.0)).sqrt())
            } else {
                (0.0, 0.5)
            }
        }
        (_, Some(p)) => (0.0, p + (p * (p + 1.0)).sqrt()),
        _ => unreachable!(),
    };
    let margin = 0.05 * (hi - lo);
    rng.gen_range(lo + margin..hi - margin)
}

#[test]
fn criterion_7_rate_agreement() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let tags = ["IG", "JG", "IL", "JL", "IM", "JM"];
    let mut worst = 0.0f64;
    let mut worst_ij = 0.0f64;
    let mut failures = Vec::new();
    for i in 0..50 {
        let tag = tags[i % 6];
        let eq = random_kind(&mut rng, tag.as_bytes()[1] as char);
        let kind = IJKind::parse(tag, eq.p().cloned()).unwrap();
        let n = rng.gen_range(1.0..12.0);
        let alpha = loop {
            let a: f64 = rng.gen_range(-2.0..4.0);
            if a.abs() > 0.1 {
                break a;
            }
        };
        let beta = rng.gen_range(-6.0..6.0);
        let t = interior_t(&eq, &mut rng);
        let w = WeightFamily::new(alpha, beta, GFactor::One);
        let rep = fit_rate(&kind, &w, n, t, 16.0, 6).unwrap();
        let oracle = exponent_oracle(&kind, n, alpha, beta, t);
        let slope = rep.fitted_slope.unwrap();
        let err = (slope - oracle).abs().max((rep.predicted_exponent - oracle).abs());
        worst = worst.max(err);
        let partner = IJKind::new(
            kind.eq.clone(),
            match kind.quantity {
                Quantity::I => Quantity::J,
                Quantity::J => Quantity::I,
            },
        );
        let other = fit_rate(&partner, &w, n, t, 16.0, 6).unwrap().fitted_slope.unwrap();
        worst_ij = worst_ij.max((other - slope).abs());
        if err > 0.05 || (other - slope).abs() > 0.05 {
            failures.push(format!("{tag} N={n:.3} a={alpha:.3} b={beta:.3} t={t:.3}: {slope} vs {oracle}"));
        }
    }
    finish(
        7,
        "I/J rate agreement",
        failures.is_empty(),
        format!("50 tuples, max |slope - exponent| {worst:.2e}, max |I - J slope| {worst_ij:.2e} (limit 0.05), failures {failures:?}"),
        start,
        Duration::from_secs(60),
    );
}

#[test]
fn criterion_8_flat_sigma_rule() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut failures = Vec::new();
    let mut min_slack = f64::INFINITY;
    let mut stable = 0usize;
    let mut cases = 0usize;
    while cases < 20 {
        let n = ratio(rng.gen_range(4..=48), 4);
        let alpha = ratio(rng.gen_range(-8..=16), 4);
        let d = &n + &alpha - int(2);
        if d <= int(0) {
            continue;
        }
        cases += 1;
        let (nf, af) = (liouville::rational::to_f64(&n), liouville::rational::to_f64(&alpha));
        for tag in ['G', 'L', 'M'] {
            let eq = random_kind(&mut rng, tag);
            let choice = select_epsilon(&eq, nf, af).unwrap();
            let t = choice.t_used;
            let sigma = choice.epsilon * eq.p_f64().unwrap_or(1.0);
            let in_window = -0.5 * af < t && t < 0.5 * (nf - 2.0);
            let mut ok = in_window && sigma <= 0.5 * choice.sigma_max + 1e-15;
            for k in 0..1000 {
                let s = k as f64 / 1000.0;
                let bound = (t + 0.5 * af) * (nf - 2.0 * (t + 1.0) * s);
                min_slack = min_slack.min(bound - sigma);
                ok &= sigma <= bound && choice.sigma_max <= bound + 1e-12;
            }
            // flat witness with β − α + 2 = −1/2
            let beta = &alpha - int(2) - ratio(1, 2);
            let inst = ProblemInstance::new(eq.clone(), n.clone(), alpha.clone(), beta).unwrap();
            let wit = construct_witness(&inst).unwrap();
            ok &= wit.regime == Regime::Flat;
            let rep = check_stability(&wit, &DEFAULT_LADDER).unwrap();
            if rep.verdict == StabilityVerdict::StableEvidence {
                stable += 1;
            } else {
                ok = false;
            }
            if !ok {
                failures.push(format!("{eq} N={n} a={alpha}"));
            }
        }
    }
    finish(
        8,
        "flat-regime sigma rule",
        failures.is_empty(),
        format!("20 (N, alpha) x 3 equations x 1000 points, min slack {min_slack:.3e}, {stable}/60 flat witnesses stable, failures {failures:?}"),
        start,
        Duration::from_secs(30),
    );
}
