//! End-to-end checks of the headline results at their stated tolerances.
//! Each test prints a single PASS/FAIL line; run with `--nocapture` to see
//! them.

use besovlab::besov::weight_sum_threshold;
use besovlab::hedgehog::{
    counterexample_sequence, hedgehog_verdict, CounterexampleOptions, HedgehogOutcome,
    HedgehogSpec, NormRule, Sequence,
};
use besovlab::levy::{LevyMeasure1D, MomentFormula, TauMethod};
use besovlab::quad::QuadOptions;
use besovlab::region::classify_point;
use besovlab::sampler::{
    divergence_diagnostic, simulate_norm_curve, DiagnosticVerdict, SimulationConfig,
    SimulationModel,
};
use besovlab::special::{gamma_ratio, normal_abs_moment, one_minus_cos_integral};
use besovlab::stable::{c_alpha, sphere_moments, stable_verdict, StableRun, DEFAULT_INDEX_BUDGET};
use besovlab::{weight_power_sum, BesovParams, Execution, IndexEnumeration, Truncation};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

fn report(name: &str, ok: bool, detail: &str, start: Instant) {
    let tag = if ok { "PASS" } else { "FAIL" };
    println!("[{tag}] {name}: {detail} ({:.2?})", start.elapsed());
}

fn bp(p: f64, d: u32, s: f64, w: f64) -> BesovParams {
    BesovParams::new(p, s, w, d).unwrap()
}

#[test]
fn region_truth_table() {
    let t = Instant::now();
    // (p, d, s, w) -> (E_p, R_p, R_p^(p))
    let table: [(f64, u32, f64, f64, [bool; 3]); 24] = [
        (1.5, 1, -1.0, -1.0, [true, true, true]),
        (1.5, 1, 0.0, -1.0, [false, false, false]),
        (1.5, 1, -0.1, -0.2, [true, false, false]),
        (1.5, 1, -0.6, -0.6, [true, false, false]),
        (1.5, 1, -0.5, -1.0, [true, false, false]),
        (1.5, 2, -1.2, -1.5, [true, true, true]),
        (2.0, 1, 0.0, 0.0, [true, false, false]),
        (2.0, 1, -0.5, -0.6, [true, false, false]),
        (2.0, 1, -0.6, -0.6, [true, true, true]),
        (2.0, 1, 0.1, -1.0, [false, false, false]),
        (2.0, 2, -1.1, -1.1, [true, true, true]),
        (2.0, 2, 0.0, -0.5, [true, false, false]),
        (3.0, 1, -1.0, -1.0, [true, true, true]),
        (3.0, 1, -0.6, -0.4, [true, false, true]),
        (3.0, 1, -0.7, -0.6, [true, true, true]),
        (3.0, 1, -0.4, -1.0, [true, false, false]),
        (3.0, 1, -0.5, 0.0, [true, false, false]),
        (3.0, 1, -1.0, 0.1, [false, false, false]),
        (3.0, 2, -1.5, -1.5, [true, true, true]),
        (3.0, 2, -1.2, -0.8, [true, false, true]),
        (4.0, 2, -0.5, -1.0, [false, false, false]),
        (4.0, 2, -1.6, -1.2, [true, true, true]),
        (4.0, 2, -1.2, -0.6, [true, false, true]),
        (4.0, 1, -0.3, -0.1, [true, false, false]),
    ];
    let mut wrong = Vec::new();
    for &(p, d, s, w, want) in &table {
        let v = classify_point(&bp(p, d, s, w)).unwrap();
        let got = [v.in_e_p, v.in_r_p, v.in_r_p_p];
        if got != want {
            wrong.push(format!(
                "(p={p},d={d},s={s},w={w}) got {got:?} want {want:?}"
            ));
        }
    }
    let ok = wrong.is_empty();
    report(
        "region truth table",
        ok,
        &format!("{}/24 exact", 24 - wrong.len()),
        t,
    );
    assert!(ok, "{wrong:#?}");
}

#[test]
fn weight_sum_lemma() {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut n = 0;
    let mut wrong = Vec::new();
    while n < 200 {
        let d: u32 = rng.random_range(1..=3);
        let p: f64 = rng.random_range(1.2..4.0);
        let df = d as f64;
        // s − d/p + d/2 < 0 keeps the scale sum from diverging for every k.
        let top = df / p - df / 2.0;
        let s = rng.random_range(top - 3.0..top - 0.2);
        let w = rng.random_range(-3.0..-0.2);
        let k = rng.random_range(0.2..8.0);
        let params = bp(p, d, s, w);
        if (k - weight_sum_threshold(&params)).abs() <= 0.1 {
            continue;
        }
        n += 1;
        let r = weight_power_sum(&params, k, &Truncation::uniform(12, 4096)).unwrap();
        if r.verdict != r.numeric_verdict {
            wrong.push(format!(
                "d={d} p={p} s={s} w={w} k={k}: {:?} vs {:?}",
                r.verdict, r.numeric_verdict
            ));
        }
    }
    let ok = wrong.is_empty();
    report(
        "weight-sum lemma",
        ok,
        &format!("{}/200 agree", 200 - wrong.len()),
        t,
    );
    assert!(ok, "{wrong:#?}");
}

#[test]
fn sphere_moment_oracle() {
    let t = Instant::now();
    let mut worst: f64 = 0.0;
    let mut wrong = Vec::new();
    for (i, n) in [2usize, 5, 20, 100].into_iter().enumerate() {
        let est = sphere_moments(
            n,
            &[1.0, 2.0, 3.5],
            100_000,
            11 + i as u64,
            Execution::Parallel,
        )
        .unwrap();
        for e in est {
            // p = 2 is exact per sample: Σξ_i² = 1.
            let z = if e.stderr > 0.0 {
                (e.estimate - e.exact).abs() / e.stderr
            } else {
                0.0
            };
            worst = worst.max(z);
            if !e.within(3.0) {
                wrong.push(format!(
                    "n={n} p={}: {} vs {} (z={z:.2})",
                    e.p, e.estimate, e.exact
                ));
            }
        }
    }
    let ok = wrong.is_empty();
    report(
        "sphere-moment oracle",
        ok,
        &format!("max |z| = {worst:.2} over 12 cells"),
        t,
    );
    assert!(ok, "{wrong:#?}");
}

#[test]
fn gamma_ratio_asymptotic() {
    let t = Instant::now();
    let mut worst: f64 = 0.0;
    let mut ok = true;
    for a in [0.5, 1.0, 1.5] {
        for i in 0..=600 {
            let x = 10.0 * 1000f64.powf(i as f64 / 600.0);
            let err = (gamma_ratio(x, a) * x.powf(-a) - 1.0).abs();
            worst = worst.max(err * x);
            ok &= err <= 2.0 / x;
        }
    }
    report(
        "gamma-ratio asymptotic",
        ok,
        &format!("max x·err = {worst:.4} (bound 2)"),
        t,
    );
    assert!(ok);
}

#[test]
fn sigma_sandwich_in_region() {
    let t = Instant::now();
    let params = bp(3.0, 1, -1.0, -1.0);
    let en = IndexEnumeration::new(1, Truncation::dyadic(20, 1)).unwrap();
    let run = StableRun::new(1.2, params, en, DEFAULT_INDEX_BUDGET)
        .unwrap()
        .with_seed(5);
    let curve = run.sphere_statistics().unwrap().sigma().unwrap();
    let change = curve.last_relative_change().unwrap();
    let mut outside = Vec::new();
    for pt in &curve.points {
        let (lo, hi) = (pt.lower.unwrap(), pt.upper.unwrap());
        let slack = 3.0 * pt.mc_stderr;
        if pt.value < lo - slack || pt.value > hi + slack {
            outside.push(format!("n={}: {lo} <= {} <= {hi}", pt.n, pt.value));
        }
    }
    let last = curve.last().unwrap();
    let ok = change < 0.01 && outside.is_empty();
    report(
        "sigma sandwich (in region)",
        ok,
        &format!(
            "Σ = {:.6} at n = {}, last doubling change {change:.2e}",
            last.value, last.n
        ),
        t,
    );
    assert!(change < 0.01, "relative change {change}");
    assert!(outside.is_empty(), "{outside:#?}");
}

#[test]
fn sigma_divergence_out_of_region() {
    let t = Instant::now();
    let (p, alpha) = (3.0, 1.2);
    let params = bp(p, 1, -0.4, -1.0);
    let en = IndexEnumeration::new(1, Truncation::dyadic(20, 1)).unwrap();
    // The bound is analytic; the Monte-Carlo part only needs a few samples.
    let run = StableRun::new(alpha, params, en, DEFAULT_INDEX_BUDGET)
        .unwrap()
        .with_samples(64);
    let curve = run.sphere_statistics().unwrap().sigma().unwrap();
    let last = curve.last().unwrap();
    let lower = last.lower.unwrap();
    let a_needed = (1e4 * c_alpha(alpha) * (p - alpha) / p).powf(p / alpha);
    let ok = lower > 1e4;
    report(
        "sigma divergence (out of region)",
        ok,
        &format!(
            "lower bound {lower:.4} at n = {} (needs A_n > {a_needed:.3e} to reach 1e4)",
            last.n
        ),
        t,
    );
    assert!(
        ok,
        "lower bound only reaches {lower} within the index budget"
    );
}

#[test]
fn tail_probability_identity() {
    let t = Instant::now();
    let (p, alpha, radius) = (3.0, 1.2, 1.7);
    let params = bp(p, 1, -1.0, -1.0);
    let en = IndexEnumeration::new(1, Truncation::dyadic(20, 1)).unwrap();
    let stats = StableRun::new(alpha, params, en, 1 << 12)
        .unwrap()
        .with_seed(9)
        .sphere_statistics()
        .unwrap();
    let sigma = stats.sigma().unwrap();
    let tail = stats.tail(radius).unwrap();
    let tail2 = stats.tail(2.0 * radius).unwrap();
    let mut worst_id: f64 = 0.0;
    let mut worst_scale: f64 = 0.0;
    for ((s, a), b) in sigma
        .points
        .iter()
        .zip(&tail.direct.points)
        .zip(&tail2.direct.points)
    {
        let back = a.value * radius.powf(alpha) * p / (p - alpha);
        worst_id = worst_id.max((back - s.value).abs() / s.value);
        worst_scale = worst_scale.max((b.value / a.value - 2f64.powf(-alpha)).abs());
    }
    let ok = worst_id <= 1e-10 && worst_scale <= 1e-12;
    report(
        "tail-probability identity",
        ok,
        &format!("identity rel err {worst_id:.1e}, scaling err {worst_scale:.1e}"),
        t,
    );
    assert!(ok);
}

#[test]
fn tau_index_catalog() {
    let t = Instant::now();
    let mut wrong = Vec::new();
    let mut check = |label: String, got: (f64, f64), want: (f64, f64), tol: f64| {
        if (got.0 - want.0).abs() > tol || (got.1 - want.1).abs() > tol {
            wrong.push(format!("{label}: got {got:?} want {want:?}"));
        }
    };
    let pair = |rho: &LevyMeasure1D, q: f64, m: TauMethod| {
        let ti = rho.tau_indices(q, m).unwrap();
        (ti.tau_upper, ti.tau_lower)
    };
    for q in [0.5, 1.0, 2.0, 3.0] {
        for alpha in [0.5, 1.0, 1.5] {
            let rho = LevyMeasure1D::stable(alpha).unwrap();
            check(
                format!("stable {alpha} q={q}"),
                pair(&rho, q, TauMethod::Analytic),
                (q.min(alpha), q.min(alpha)),
                0.0,
            );
        }
        check(
            format!("poisson q={q}"),
            pair(&LevyMeasure1D::PointMassAtOne, q, TauMethod::Analytic),
            (q, q),
            0.0,
        );
        let ts = LevyMeasure1D::tempered_stable(0.7).unwrap();
        check(
            format!("tempered q={q}"),
            pair(&ts, q, TauMethod::Analytic),
            (q, q),
            0.0,
        );
    }
    for (a1, a2) in [(0.5, 1.5), (0.8, 1.6), (1.2, 1.9)] {
        let rho = LevyMeasure1D::blended_stable(a1, a2).unwrap();
        check(
            format!("blended ({a1},{a2}) q=2"),
            pair(&rho, 2.0, TauMethod::Analytic),
            (a1, a2),
            0.0,
        );
    }
    let mut worst: f64 = 0.0;
    for alpha in [0.5, 1.0, 1.5] {
        for q in [1.0, 2.0] {
            let rho = LevyMeasure1D::stable(alpha).unwrap();
            let got = pair(&rho, q, TauMethod::NumericGrid);
            let want = q.min(alpha);
            worst = worst.max((got.0 - want).abs()).max((got.1 - want).abs());
            check(
                format!("numeric stable {alpha} q={q}"),
                got,
                (want, want),
                0.05,
            );
        }
    }
    let ok = wrong.is_empty();
    report(
        "tau-index catalog",
        ok,
        &format!("numeric max deviation {worst:.4}"),
        t,
    );
    assert!(ok, "{wrong:#?}");
}

#[test]
fn hedgehog_dichotomy_grid() {
    let t = Instant::now();
    let mut wrong = Vec::new();
    let mut counts = [0usize; 3];
    // Points in E_p but outside R_p.
    for (p, s, w) in [(1.5, -0.2, -0.3), (3.0, -0.3, -0.2)] {
        let params = bp(p, 1, s, w);
        let region = classify_point(&params).unwrap();
        assert!(region.in_e_p && !region.in_r_p);
        for alpha in [0.8, 1.2, 1.7] {
            for dq in [-0.5, -0.1, 0.0, 0.1, 0.5] {
                let qm: f64 = alpha + dq;
                let spec = HedgehogSpec::new(
                    LevyMeasure1D::stable(alpha).unwrap(),
                    NormRule::Abstract {
                        norms: Sequence::power_decay(1.0 / qm),
                        coefficients: Some(Sequence::power_decay(1.0)),
                    },
                )
                .unwrap();
                let got = hedgehog_verdict(&spec, &params).unwrap().outcome;
                let want = if qm < p.min(alpha) {
                    HedgehogOutcome::Induced
                } else if qm > alpha {
                    HedgehogOutcome::NotInduced
                } else {
                    HedgehogOutcome::Inconclusive
                };
                counts[want as usize] += 1;
                if got != want {
                    wrong.push(format!(
                        "p={p} alpha={alpha} q_min={qm}: got {got:?} want {want:?}"
                    ));
                }
            }
        }
    }
    let ok = wrong.is_empty();
    report(
        "hedgehog dichotomy",
        ok,
        &format!(
            "{}/30 match ({} induced, {} not induced, {} band)",
            30 - wrong.len(),
            counts[0],
            counts[1],
            counts[2]
        ),
        t,
    );
    assert!(ok, "{wrong:#?}");
}

#[test]
fn counterexample_certificate() {
    let t = Instant::now();
    let mut wrong = Vec::new();
    let mut least = f64::INFINITY;
    for (p, d, s, w, alpha) in [
        (3.0, 1, -0.7, 0.0, 1.2),
        (3.0, 1, -0.3, -0.1, 1.5),
        (4.0, 2, -0.8, -0.2, 1.4),
        (2.5, 1, -0.5, 0.0, 1.3),
        (3.0, 2, -0.9, -0.05, 1.6),
    ] {
        let params = bp(p, d, s, w);
        let region = classify_point(&params).unwrap();
        assert!(p > 2.0 && region.in_e_p && !region.in_r_p);
        let ce =
            counterexample_sequence(&params, alpha, &CounterexampleOptions::default()).unwrap();
        let certified = ce.lr_partial + ce.lr_tail_bound <= ce.lr_bound;
        let verdict = hedgehog_verdict(&ce.to_spec().unwrap(), &params)
            .unwrap()
            .outcome;
        least = least.min(ce.divergence_lower_bound);
        if !certified || ce.divergence_lower_bound <= 1e3 || verdict != HedgehogOutcome::NotInduced
        {
            wrong.push(format!(
                "(p={p},d={d},s={s},w={w},alpha={alpha}): lr {}+{} vs {}, D={}, {verdict:?}",
                ce.lr_partial, ce.lr_tail_bound, ce.lr_bound, ce.divergence_lower_bound
            ));
        }
    }
    let ok = wrong.is_empty();
    report(
        "counterexample certificate",
        ok,
        &format!("5 points, smallest weighted sum {least:.1}"),
        t,
    );
    assert!(ok, "{wrong:#?}");
}

#[test]
fn simulation_corroboration() {
    let t = Instant::now();
    let (p, alpha) = (3.0, 1.2);
    let grid: Vec<usize> = (0..=16).map(|i| 1usize << i).collect();
    let mut cases = Vec::new();
    // Straddle s = −d/2 at w = −1, then w = −d/p at s = −1.
    for s in [-1.0, -0.8, -0.6, -0.45, -0.3, -0.2] {
        cases.push((s, -1.0, Truncation::dyadic(20, 1), (s + 0.5f64).abs()));
    }
    for w in [-1.0f64, -0.6, -0.4, -0.3, -0.15, 0.0] {
        cases.push((
            -1.0,
            w,
            Truncation::uniform(0, 1 << 16),
            (w + 1.0 / p).abs(),
        ));
    }
    let mut wrong = Vec::new();
    let mut summary = String::new();
    for (i, (s, w, tr, margin)) in cases.into_iter().enumerate() {
        let params = bp(p, 1, s, w);
        let cfg = SimulationConfig {
            params,
            enumeration: IndexEnumeration::new(1, tr).unwrap(),
            grid: grid.clone(),
            replicas: 400,
            seed: 100 + i as u64,
            execution: Execution::Parallel,
        };
        let curve = simulate_norm_curve(&SimulationModel::CanonicalStable { alpha }, &cfg).unwrap();
        let diag = divergence_diagnostic(&curve).unwrap();
        let induced = stable_verdict(&params, alpha).unwrap().induced;
        let fine = match diag.verdict {
            DiagnosticVerdict::Stabilising => induced,
            DiagnosticVerdict::Growing => !induced,
            DiagnosticVerdict::Ambiguous => margin <= 0.1,
        };
        summary.push(match diag.verdict {
            DiagnosticVerdict::Stabilising => 'S',
            DiagnosticVerdict::Growing => 'G',
            DiagnosticVerdict::Ambiguous => 'A',
        });
        if !fine {
            wrong.push(format!(
                "(s={s},w={w}): {:?} slope {} but induced={induced}",
                diag.verdict, diag.slope
            ));
        }
    }
    let ok = wrong.is_empty();
    report(
        "simulation corroboration",
        ok,
        &format!("12 configurations [{summary}]"),
        t,
    );
    assert!(ok, "{wrong:#?}");
}

#[test]
fn moment_formula_calibration() {
    let t = Instant::now();
    let gauss = |x: f64| (-0.5 * x * x).exp();
    let mut worst: f64 = 0.0;
    for q in [0.5, 1.0, 1.5] {
        let opts = QuadOptions::default();
        // Closed-form constant 1/∫(1 − cos x)x^{−1−q}dx, independent of the calibration.
        let exact = MomentFormula {
            q,
            c_q: 1.0 / one_minus_cos_integral(q),
            opts,
        };
        let cal = MomentFormula::calibrated(q, opts).unwrap();
        let want = normal_abs_moment(q);
        worst = worst
            .max((exact.moment(gauss) - want).abs())
            .max((cal.moment(gauss) - want).abs());
    }
    let ok = worst <= 1e-6;
    report(
        "moment-formula calibration",
        ok,
        &format!("max abs error {worst:.2e}"),
        t,
    );
    assert!(ok);
}
