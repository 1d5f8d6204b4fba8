use besovlab::besov::weight_sum_threshold;
use besovlab::hedgehog::{hedgehog_verdict, HedgehogOutcome, HedgehogSpec, NormRule, Sequence};
use besovlab::levy::{CustomDensity, IntegrabilityCertificate, LevyMeasure1D, TauMethod};
use besovlab::region::classify_point;
use besovlab::special::gamma_ratio;
use besovlab::stable::{stable_verdict, upsilon_bound_ratio};
use besovlab::{weight_power_sum, BesovParams, SumVerdict, Truncation};
use proptest::prelude::*;

fn catalog() -> impl Strategy<Value = LevyMeasure1D> {
    prop_oneof![
        Just(LevyMeasure1D::PointMassAtOne),
        (0.05f64..1.95).prop_map(|a| LevyMeasure1D::stable(a).unwrap()),
        (0.05f64..2.95).prop_map(|z| LevyMeasure1D::tempered_stable(z).unwrap()),
        (0.05f64..1.9, 0.01f64..1.0).prop_map(|(a, t)| {
            let b = a + t * (1.95 - a);
            LevyMeasure1D::blended_stable(a, b).unwrap()
        }),
    ]
}

fn params() -> impl Strategy<Value = BesovParams> {
    (1.05f64..6.0, -4.0f64..1.0, -4.0f64..1.0, 1u32..=3)
        .prop_map(|(p, s, w, d)| BesovParams::new(p, s, w, d).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn tau_indices_are_ordered(rho in catalog(), q in 0.1f64..4.0) {
        let t = rho.tau_indices(q, TauMethod::Analytic).unwrap();
        prop_assert!(0.0 <= t.tau_upper);
        prop_assert!(t.tau_upper <= t.tau_lower);
        prop_assert!(t.tau_lower <= q);
    }

    #[test]
    fn xi_integral_matches_stable_closed_form(alpha in 0.1f64..1.9, q in 0.1f64..4.0, e in 0.5f64..30.0) {
        prop_assume!((q - alpha).abs() > 1e-3);
        let xi = (-e).exp2();
        let rho = LevyMeasure1D::stable(alpha).unwrap();
        // ∫_{|β|≥1} (ξ^q|β|^q ∧ 1) |β|^{−1−α} dβ split at |β| = 1/ξ.
        let want = 2.0 * xi.powf(q) * (xi.powf(alpha - q) - 1.0) / (q - alpha) + 2.0 * xi.powf(alpha) / alpha;
        let got = rho.xi_integral(q, xi);
        prop_assert!((got - want).abs() <= 1e-10 * want, "{got} vs {want}");
    }

    #[test]
    fn cap_integral_matches_stable_closed_form(alpha in 0.1f64..1.9, x in 1e-3f64..1e3, p in 2.0f64..6.0) {
        let rho = LevyMeasure1D::stable(alpha).unwrap();
        let want = 2.0 * p * x.powf(alpha) / (alpha * (p - alpha));
        let got = rho.cap_integral(p, x);
        prop_assert!((got - want).abs() <= 1e-8 * want);
    }

    #[test]
    fn regions_are_nested_and_exclusive(params in params()) {
        let v = classify_point(&params).unwrap();
        prop_assert!(!v.in_r_p || v.in_e_p);
        prop_assert!(!v.in_r_p || v.in_r_p_p);
        if params.p <= 2.0 {
            prop_assert_eq!(v.in_r_p, v.in_r_p_p);
        }
        prop_assert_eq!(v.in_gaussian_region, v.in_r_p_p);
        match stable_verdict(&params, 1.0) {
            Ok(sv) => prop_assert_eq!(sv.induced, v.in_r_p_p),
            Err(_) => prop_assert!(!v.in_e_p),
        }
    }

    #[test]
    fn stable_verdict_ignores_alpha(params in params(), a in 0.05f64..1.95, b in 0.05f64..1.95) {
        let x = stable_verdict(&params, a).map(|v| v.induced).ok();
        let y = stable_verdict(&params, b).map(|v| v.induced).ok();
        prop_assert_eq!(x, y);
    }

    #[test]
    fn hedgehog_never_contradicts_stable_dichotomy(
        p in 1.1f64..5.0,
        alpha in 0.7f64..1.95,
        qm in 0.05f64..6.0,
    ) {
        let d = 1.0;
        // Just inside E_p, outside R_p.
        let (s, w) = if p < 2.0 {
            (-0.1, (d / 2.0 - d / p) - 0.05)
        } else {
            (-d / 2.0 + d / p - 0.05, 0.0)
        };
        let params = BesovParams::new(p, s, w, 1).unwrap();
        let region = classify_point(&params).unwrap();
        prop_assume!(region.in_e_p && !region.in_r_p);
        let spec = HedgehogSpec::new(
            LevyMeasure1D::stable(alpha).unwrap(),
            NormRule::Abstract { norms: Sequence::power_decay(1.0 / qm), coefficients: Some(Sequence::power_decay(1.0)) },
        ).unwrap();
        let got = hedgehog_verdict(&spec, &params).unwrap().outcome;
        match got {
            HedgehogOutcome::Induced => prop_assert!(qm < p.min(alpha)),
            HedgehogOutcome::NotInduced => prop_assert!(qm > alpha),
            HedgehogOutcome::Inconclusive => prop_assert!(qm >= p.min(alpha) && qm <= alpha),
        }
    }

    #[test]
    fn gamma_ratio_obeys_wendel_bounds(x in 1.0f64..1e4, a in 0.0f64..2.0) {
        // Γ(x+a)/Γ(x) ≤ x^a for a ∈ [0,1] and ≥ x^{a} for a ≥ 1 (Gautschi/Wendel).
        let r = gamma_ratio(x, a) / x.powf(a);
        if a <= 1.0 {
            prop_assert!(r <= 1.0 + 1e-12);
        } else {
            prop_assert!(r >= 1.0 - 1e-12);
        }
    }

    #[test]
    fn bound_ratio_settles_in_n(alpha in 0.1f64..1.95, p in 1.05f64..6.0) {
        let r: Vec<f64> = (0..=22).map(|k| upsilon_bound_ratio(alpha, p, 1usize << k)).collect();
        prop_assert!(r.iter().all(|x| x.is_finite() && *x > 0.0));
        prop_assert!((r[22] / r[21] - 1.0).abs() < 1e-5);
        let limit = r[22];
        prop_assert!(r.iter().all(|x| x / limit < 4.0 && limit / x < 4.0 * p), "{r:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn weight_sum_verdict_follows_threshold(
        d in 1u32..=2,
        p in 1.2f64..4.0,
        ds in 0.3f64..2.5,
        w in -2.5f64..-0.3,
        dk in 0.3f64..2.0,
        above in any::<bool>(),
    ) {
        let df = d as f64;
        let s = df / p - df / 2.0 - ds;
        let params = BesovParams::new(p, s, w, d).unwrap();
        let thr = weight_sum_threshold(&params);
        let k = if above { thr + dk } else { thr - dk };
        prop_assume!(k > 0.2);
        let r = weight_power_sum(&params, k, &Truncation::uniform(10, 2048)).unwrap();
        let want = if above { SumVerdict::Converges } else { SumVerdict::Diverges };
        prop_assert_eq!(r.verdict, want);
        prop_assert_eq!(r.numeric_verdict, want);
    }
}

#[test]
fn custom_density_reproduces_stable_integrals() {
    let alpha = 1.3;
    let cert = IntegrabilityCertificate {
        small_jump_index: alpha,
        tail_index: Some(alpha),
    };
    let custom = LevyMeasure1D::Custom(
        CustomDensity::new("stable_copy", move |b: f64| b.powf(-1.0 - alpha), cert).unwrap(),
    );
    let stable = LevyMeasure1D::stable(alpha).unwrap();
    for x in [1e-3, 0.1, 1.0, 10.0] {
        let (a, b) = (custom.cap_integral(2.0, x), stable.cap_integral(2.0, x));
        assert!((a - b).abs() <= 1e-8 * b, "x={x}: {a} vs {b}");
    }
    for xi in [0.5, 1e-2, 1e-5] {
        let (a, b) = (custom.xi_integral(2.0, xi), stable.xi_integral(2.0, xi));
        assert!((a - b).abs() <= 1e-8 * b, "xi={xi}: {a} vs {b}");
    }
}
