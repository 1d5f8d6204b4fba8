//! Hedgehog processes L(t)f = Σ_k ⟨f, e_k⟩ a_k ℓ_k(t) with i.i.d. symmetric
//! one-dimensional Lévy processes ℓ_k: admissibility, the critical
//! summability q_min of the norms ‖a_k e_k‖, the three-way verdict, the
//! diagonal Lévy-measure conditions and the stable counterexample.

use crate::besov::{weight_sum_threshold, BesovParams, IndexEnumeration, Truncation};
use crate::error::{invalid, Error, Result};
use crate::fit::{doubling_trend, linear_fit, Trend};
use crate::levy::{LevyMeasure1D, TauMethod};
use crate::quad::{gauss_kronrod, QuadOptions};
use crate::region::classify_point;
use crate::sum::NeumaierSum;

/// Default number of indices visited when a quantity is estimated from a
/// finite prefix.
pub const DEFAULT_HEDGEHOG_BUDGET: usize = 1 << 16;

/// A nonnegative sequence indexed from k = 1.
#[derive(Debug, Clone, PartialEq)]
pub enum Sequence {
    /// scale · k^{−γ}.
    PowerDecay { scale: f64, gamma: f64 },
    /// Finitely many nonzero terms.
    Finite(Vec<f64>),
    /// Observed prefix of an infinite sequence.
    Prefix(Vec<f64>),
}

impl Sequence {
    pub fn power_decay(gamma: f64) -> Self {
        Sequence::PowerDecay { scale: 1.0, gamma }
    }

    /// Term k (1-based); zero past the end of a finite or prefix sequence.
    pub fn term(&self, k: usize) -> f64 {
        match self {
            Sequence::PowerDecay { scale, gamma } => scale * (k as f64).powf(-gamma),
            Sequence::Finite(v) | Sequence::Prefix(v) => {
                v.get(k.wrapping_sub(1)).copied().unwrap_or(0.0)
            }
        }
    }

    /// First `n` terms (fewer for a prefix that is shorter).
    pub fn head(&self, n: usize) -> Vec<f64> {
        let n = match self {
            Sequence::PowerDecay { .. } | Sequence::Finite(_) => n,
            Sequence::Prefix(v) => n.min(v.len()),
        };
        (1..=n).map(|k| self.term(k)).collect()
    }

    fn validate(&self) -> Result<()> {
        match self {
            Sequence::PowerDecay { scale, gamma } => {
                if !(scale.is_finite() && gamma.is_finite()) {
                    return Err(invalid("power-decay parameters must be finite"));
                }
            }
            Sequence::Finite(v) | Sequence::Prefix(v) => {
                if v.iter().any(|x| !x.is_finite()) {
                    return Err(invalid("sequence terms must be finite"));
                }
            }
        }
        Ok(())
    }

    /// Critical summability inf{q > 0 : Σ |x_k|^q < ∞}.
    pub fn summability(&self) -> SummabilityEstimate {
        match self {
            Sequence::PowerDecay { scale, gamma } => {
                let q = if *scale == 0.0 {
                    0.0
                } else if *gamma > 0.0 {
                    1.0 / gamma
                } else {
                    f64::INFINITY
                };
                SummabilityEstimate::exact(q)
            }
            Sequence::Finite(_) => SummabilityEstimate::exact(0.0),
            Sequence::Prefix(v) => rank_size_exponent(v),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EstimateMethod {
    Exact,
    WeightThreshold,
    RankSizeFit,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SummabilityEstimate {
    pub value: f64,
    pub uncertainty: f64,
    pub method: EstimateMethod,
}

impl SummabilityEstimate {
    fn exact(value: f64) -> Self {
        SummabilityEstimate {
            value,
            uncertainty: 0.0,
            method: EstimateMethod::Exact,
        }
    }
}

const MIN_FIT_TERMS: usize = 16;

/// Fits log x_(r) against log r on the sorted magnitudes. A sequence with
/// x_(r) ≍ r^{−γ} is q-summable exactly for q > 1/γ. Ranks from √n to n
/// on a quarter-octave grid; the uncertainty is the spread of the two
/// half-window fits.
pub fn rank_size_exponent(values: &[f64]) -> SummabilityEstimate {
    let mut v: Vec<f64> = values
        .iter()
        .map(|x| x.abs())
        .filter(|&x| x > 0.0)
        .collect();
    if v.len() < MIN_FIT_TERMS {
        return SummabilityEstimate {
            value: 0.0,
            uncertainty: 0.0,
            method: EstimateMethod::RankSizeFit,
        };
    }
    v.sort_by(|a, b| b.total_cmp(a));
    let n = v.len();
    let lo = (n as f64).sqrt().max(4.0);
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut last = 0usize;
    let mut i = (lo.log2() * 4.0).floor() as i32;
    loop {
        let r = (i as f64 / 4.0).exp2().round() as usize;
        if r > n {
            break;
        }
        if r > last && r as f64 >= lo {
            xs.push((r as f64).ln());
            ys.push(v[r - 1].ln());
            last = r;
        }
        i += 1;
    }
    let to_q = |slope: f64| {
        if slope < -1e-12 {
            -1.0 / slope
        } else {
            f64::INFINITY
        }
    };
    let Some(fit) = linear_fit(&xs, &ys) else {
        return SummabilityEstimate {
            value: 0.0,
            uncertainty: 0.0,
            method: EstimateMethod::RankSizeFit,
        };
    };
    let q = to_q(fit.slope);
    let h = xs.len() / 2;
    let mut unc: f64 = 0.0;
    if h >= 3 {
        for (a, b) in [(0, h), (xs.len() - h, xs.len())] {
            if let Some(f) = linear_fit(&xs[a..b], &ys[a..b]) {
                unc = unc.max((to_q(f.slope) - q).abs());
            }
        }
    }
    SummabilityEstimate {
        value: q,
        uncertainty: unc,
        method: EstimateMethod::RankSizeFit,
    }
}

/// Coefficients a over a wavelet enumeration.
#[derive(Debug, Clone, PartialEq)]
pub enum CoefficientRule {
    /// a ≡ c.
    Constant(f64),
    /// a_k = b_k / ω_k, so the norms are exactly |b_k|.
    InverseWeight(Sequence),
    /// a_k = x_k in enumeration order.
    Positional(Sequence),
}

#[derive(Debug, Clone, PartialEq)]
pub enum NormRule {
    /// The basis is the wavelet basis; ‖a_k e_k‖ = |a_k| ω_k.
    Wavelet {
        enumeration: IndexEnumeration,
        coefficients: CoefficientRule,
    },
    /// Norms ‖a_k e_k‖ given directly; `coefficients` default to the norms.
    Abstract {
        norms: Sequence,
        coefficients: Option<Sequence>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct HedgehogSpec {
    pub rho: LevyMeasure1D,
    pub rule: NormRule,
    /// Terms visited by numeric estimates.
    pub budget: usize,
}

impl HedgehogSpec {
    pub fn new(rho: LevyMeasure1D, rule: NormRule) -> Result<Self> {
        match &rule {
            NormRule::Wavelet { coefficients, .. } => match coefficients {
                CoefficientRule::Constant(c) if !c.is_finite() => {
                    return Err(invalid("coefficient must be finite"))
                }
                CoefficientRule::InverseWeight(s) | CoefficientRule::Positional(s) => {
                    s.validate()?
                }
                _ => {}
            },
            NormRule::Abstract {
                norms,
                coefficients,
            } => {
                norms.validate()?;
                if let Sequence::Finite(v) | Sequence::Prefix(v) = norms {
                    if v.iter().any(|&x| x < 0.0) {
                        return Err(invalid("norms must be nonnegative"));
                    }
                }
                if let Sequence::PowerDecay { scale, .. } = norms {
                    if *scale < 0.0 {
                        return Err(invalid("norms must be nonnegative"));
                    }
                }
                if let Some(c) = coefficients {
                    c.validate()?;
                }
            }
        }
        Ok(HedgehogSpec {
            rho,
            rule,
            budget: DEFAULT_HEDGEHOG_BUDGET,
        })
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget.max(1);
        self
    }

    /// (a_k, ω_k) over the first `n` wavelet indices.
    fn wavelet_terms(&self, params: &BesovParams, n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
        let NormRule::Wavelet {
            enumeration,
            coefficients,
        } = &self.rule
        else {
            return Err(Error::Unsupported("requires the wavelet-basis mode".into()));
        };
        if enumeration.d != params.d {
            return Err(Error::DimensionMismatch(enumeration.d, params.d));
        }
        let w = enumeration.weights(params, n);
        let a: Vec<f64> = match coefficients {
            CoefficientRule::Constant(c) => vec![*c; w.len()],
            CoefficientRule::InverseWeight(b) => w
                .iter()
                .enumerate()
                .map(|(k, &om)| b.term(k + 1) / om)
                .collect(),
            CoefficientRule::Positional(x) => (0..w.len()).map(|k| x.term(k + 1)).collect(),
        };
        Ok((a, w))
    }

    /// Norms ‖a_k e_k‖ for the first `n` terms.
    pub fn norms(&self, params: &BesovParams, n: usize) -> Result<Vec<f64>> {
        match &self.rule {
            NormRule::Abstract { norms, .. } => Ok(norms.head(n)),
            NormRule::Wavelet { .. } => {
                let (a, w) = self.wavelet_terms(params, n)?;
                Ok(a.iter().zip(&w).map(|(a, w)| a.abs() * w).collect())
            }
        }
    }

    /// Coefficient sequence (a_k) for the admissibility test.
    fn coefficient_head(&self, params: Option<&BesovParams>, n: usize) -> Result<Vec<f64>> {
        match &self.rule {
            NormRule::Abstract {
                norms,
                coefficients,
            } => Ok(coefficients.as_ref().unwrap_or(norms).head(n)),
            NormRule::Wavelet { .. } => {
                let params =
                    params.ok_or_else(|| invalid("wavelet coefficients need Besov parameters"))?;
                Ok(self.wavelet_terms(params, n)?.0)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdmissibilityStatus {
    Admissible,
    NotAdmissible,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Admissibility {
    pub status: AdmissibilityStatus,
    /// Exponent r with the criterion a ∈ ℓ^r (∞ for ℓ^∞).
    pub exponent: f64,
    pub witness: String,
}

impl Admissibility {
    pub fn is_admissible(&self) -> bool {
        self.status == AdmissibilityStatus::Admissible
    }
}

/// ℓ^r exponent equivalent to Σ_k ∫(|a_k c_k β|² ∧ 1) ρ(dβ) < ∞ for every
/// c ∈ ℓ². For a custom density it is the sufficient exponent from the
/// small-jump certificate.
fn admissibility_exponent(rho: &LevyMeasure1D) -> f64 {
    let from_index = |a: f64| {
        if a > 0.0 {
            2.0 * a / (2.0 - a)
        } else {
            f64::INFINITY
        }
    };
    match rho {
        LevyMeasure1D::Stable { alpha } => from_index(*alpha),
        LevyMeasure1D::BlendedStable { alpha1, .. } => from_index(*alpha1),
        LevyMeasure1D::PointMassAtOne | LevyMeasure1D::TemperedStable { .. } => f64::INFINITY,
        LevyMeasure1D::Custom(c) => from_index(c.certificate.small_jump_index),
    }
}

fn lr_membership(seq: Option<&Sequence>, head: &[f64], r: f64) -> (AdmissibilityStatus, String) {
    use AdmissibilityStatus::*;
    if r.is_infinite() {
        let bounded = match seq {
            Some(Sequence::PowerDecay { scale, gamma }) => *scale == 0.0 || *gamma >= 0.0,
            _ => head.iter().all(|x| x.is_finite()),
        };
        return if bounded {
            (Admissible, "coefficients are bounded".into())
        } else {
            (NotAdmissible, "coefficients are unbounded".into())
        };
    }
    match seq {
        Some(Sequence::Finite(_)) => (Admissible, "finitely many nonzero coefficients".into()),
        Some(Sequence::PowerDecay { scale, gamma }) => {
            if *scale == 0.0 || gamma * r > 1.0 {
                (Admissible, format!("k^-{gamma} lies in l^{r}"))
            } else {
                (NotAdmissible, format!("k^-{gamma} is not in l^{r}"))
            }
        }
        _ => {
            if head.iter().all(|&x| x == 0.0) {
                return (Admissible, "all coefficients vanish".into());
            }
            let est = rank_size_exponent(head);
            if est.value + est.uncertainty < r {
                (
                    Admissible,
                    format!("estimated summability {} < {r}", est.value),
                )
            } else if est.value - est.uncertainty > r {
                (
                    NotAdmissible,
                    format!("estimated summability {} > {r}", est.value),
                )
            } else {
                (
                    Inconclusive,
                    format!(
                        "estimated summability {} ± {} near {r}",
                        est.value, est.uncertainty
                    ),
                )
            }
        }
    }
}

/// Partial sums Σ_{k≤2^i} ∫(|a_k c_k β|² ∧ 1) ρ(dβ) along c_k = k^{−1/2−ε}.
fn probe_trend(rho: &LevyMeasure1D, a: &[f64], eps: f64) -> (Trend, f64) {
    let mut sum = NeumaierSum::new();
    let mut partials = Vec::new();
    let mut next = 1usize;
    for (i, &ak) in a.iter().enumerate() {
        let k = (i + 1) as f64;
        sum.add(rho.cap_integral(2.0, (ak * k.powf(-0.5 - eps)).abs()));
        if i + 1 == next {
            partials.push(sum.value());
            next *= 2;
        }
    }
    doubling_trend(&partials)
}

pub fn admissibility(spec: &HedgehogSpec, params: Option<&BesovParams>) -> Result<Admissibility> {
    let r = admissibility_exponent(&spec.rho);
    let seq = match &spec.rule {
        NormRule::Abstract {
            norms,
            coefficients,
        } => Some(coefficients.as_ref().unwrap_or(norms)),
        NormRule::Wavelet {
            coefficients: CoefficientRule::Positional(s),
            ..
        } => Some(s),
        NormRule::Wavelet {
            coefficients: CoefficientRule::Constant(c),
            ..
        } => {
            let status = if *c == 0.0 || r.is_infinite() {
                AdmissibilityStatus::Admissible
            } else {
                AdmissibilityStatus::NotAdmissible
            };
            return Ok(Admissibility {
                status,
                exponent: r,
                witness: format!("constant coefficient {c} against l^{r}"),
            });
        }
        NormRule::Wavelet { .. } => None,
    };
    let n = match seq {
        Some(Sequence::Finite(v)) | Some(Sequence::Prefix(v)) => v.len().min(spec.budget).max(1),
        _ => spec.budget,
    };
    let head = spec.coefficient_head(params, n)?;
    let (status, mut witness) = lr_membership(seq, &head, r);
    if let LevyMeasure1D::Custom(_) = spec.rho {
        for eps in [0.01, 0.1] {
            let (trend, g) = probe_trend(&spec.rho, &head, eps);
            witness.push_str(&format!("; probe eps={eps}: {trend:?} (growth {g})"));
        }
    }
    Ok(Admissibility {
        status,
        exponent: r,
        witness,
    })
}

/// Critical summability of the norms ‖a_k e_k‖.
pub fn q_min(spec: &HedgehogSpec, params: &BesovParams) -> Result<SummabilityEstimate> {
    match &spec.rule {
        NormRule::Abstract { norms, .. } => Ok(norms.summability()),
        NormRule::Wavelet {
            coefficients,
            enumeration,
        } => match coefficients {
            CoefficientRule::Constant(c) => {
                if *c == 0.0 {
                    Ok(SummabilityEstimate::exact(0.0))
                } else {
                    if enumeration.d != params.d {
                        return Err(Error::DimensionMismatch(enumeration.d, params.d));
                    }
                    Ok(SummabilityEstimate {
                        value: weight_sum_threshold(params),
                        uncertainty: 0.0,
                        method: EstimateMethod::WeightThreshold,
                    })
                }
            }
            CoefficientRule::InverseWeight(b) => Ok(b.summability()),
            CoefficientRule::Positional(Sequence::Finite(_)) => Ok(SummabilityEstimate::exact(0.0)),
            CoefficientRule::Positional(_) => {
                Ok(rank_size_exponent(&spec.norms(params, spec.budget)?))
            }
        },
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HedgehogOutcome {
    Induced,
    NotInduced,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerdictBranch {
    /// (s,w) ∈ R_p: the embedding of L² is 0-Radonifying.
    InRadonifyingRegion,
    /// Outside R_p with q_min < τ̄^(min{p,2}).
    SummableNorms,
    /// Outside R_p with q_min > τ̲^(max{p,2}).
    NonSummableNorms,
}

impl VerdictBranch {
    pub fn label(self) -> &'static str {
        match self {
            VerdictBranch::InRadonifyingRegion => "in_r_p",
            VerdictBranch::SummableNorms => "q_min_below_tau_upper",
            VerdictBranch::NonSummableNorms => "q_min_above_tau_lower",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HedgehogDiagnostics {
    pub q_min: f64,
    pub q_min_uncertainty: f64,
    pub q_min_method: EstimateMethod,
    /// τ̄^(min{p,2}).
    pub tau_upper: f64,
    /// τ̲^(max{p,2}).
    pub tau_lower: f64,
    pub in_e_p: bool,
    pub in_r_p: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HedgehogVerdict {
    pub outcome: HedgehogOutcome,
    pub branch: Option<VerdictBranch>,
    pub diagnostics: HedgehogDiagnostics,
}

/// Strict comparisons, widened by the q_min uncertainty, so that a band
/// value never yields a definitive answer.
pub fn hedgehog_verdict(spec: &HedgehogSpec, params: &BesovParams) -> Result<HedgehogVerdict> {
    let region = classify_point(params)?;
    if !region.in_e_p {
        return Err(Error::OutsideRegion(format!(
            "(s,w)=({},{}) is outside E_p for p={}",
            params.s, params.w, params.p
        )));
    }
    let adm = admissibility(spec, Some(params))?;
    if adm.status == AdmissibilityStatus::NotAdmissible {
        return Err(invalid(format!(
            "hedgehog is not admissible: {}",
            adm.witness
        )));
    }
    let qm = q_min(spec, params)?;
    let p = params.p;
    let method = match spec.rho {
        LevyMeasure1D::Custom(_) => TauMethod::NumericGrid,
        _ => TauMethod::Analytic,
    };
    let up = spec.rho.tau_indices(p.min(2.0), method)?;
    let low = spec.rho.tau_indices(p.max(2.0), method)?;
    let diagnostics = HedgehogDiagnostics {
        q_min: qm.value,
        q_min_uncertainty: qm.uncertainty,
        q_min_method: qm.method,
        tau_upper: up.tau_upper,
        tau_lower: low.tau_lower,
        in_e_p: region.in_e_p,
        in_r_p: region.in_r_p,
    };
    let (outcome, branch) = if region.in_r_p {
        (
            HedgehogOutcome::Induced,
            Some(VerdictBranch::InRadonifyingRegion),
        )
    } else if qm.value + qm.uncertainty < up.tau_upper {
        (HedgehogOutcome::Induced, Some(VerdictBranch::SummableNorms))
    } else if qm.value - qm.uncertainty > low.tau_lower {
        (
            HedgehogOutcome::NotInduced,
            Some(VerdictBranch::NonSummableNorms),
        )
    } else {
        (HedgehogOutcome::Inconclusive, None)
    };
    Ok(HedgehogVerdict {
        outcome,
        branch,
        diagnostics,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConditionKind {
    /// Σ_k ∫(‖a_k e_k‖^p|β|^p ∧ 1) ρ(dβ), for p ≥ 2.
    CapP,
    /// Σ_k ω_k^p (a_k² ∫_{|β|≤1/‖a_k e_k‖} β² ρ(dβ))^{p/2}, for p ≥ 2.
    InnerQuadratic,
    /// Σ_k ∫(‖a_k e_k‖²|β|² ∧ 1) ρ(dβ), for p < 2.
    CapTwo,
    /// Σ_k ω_k^p ∫_0^∞ (1 − e^{−ψ_k(τ)}) τ^{−1−p} dτ with
    /// ψ_k(τ) = ∫_{|β|≤1/‖a_k e_k‖} (1 − cos τ a_k β) ρ(dβ), for p < 2.
    CosineIntegral,
}

impl ConditionKind {
    pub fn label(self) -> &'static str {
        match self {
            ConditionKind::CapP => "cap_p",
            ConditionKind::InnerQuadratic => "inner_quadratic",
            ConditionKind::CapTwo => "cap_2",
            ConditionKind::CosineIntegral => "cosine_integral",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionResult {
    pub kind: ConditionKind,
    /// Partial sums at n = 1, 2, 4, … and at the budget.
    pub partial_sums: Vec<(usize, f64)>,
    pub value: f64,
    pub trend: Trend,
    /// log2 ratio of the last two partial-sum increments.
    pub growth: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionReport {
    pub terms: usize,
    pub conditions: Vec<ConditionResult>,
}

impl ConditionReport {
    pub fn get(&self, kind: ConditionKind) -> Option<&ConditionResult> {
        self.conditions.iter().find(|c| c.kind == kind)
    }
}

fn condition_from_terms(kind: ConditionKind, terms: impl Iterator<Item = f64>) -> ConditionResult {
    let mut sum = NeumaierSum::new();
    let mut partial_sums = Vec::new();
    let mut next = 1usize;
    let mut n = 0usize;
    for t in terms {
        sum.add(t);
        n += 1;
        if n == next {
            partial_sums.push((n, sum.value()));
            next *= 2;
        }
    }
    if partial_sums.last().map(|x| x.0) != Some(n) && n > 0 {
        partial_sums.push((n, sum.value()));
    }
    let pow2: Vec<f64> = partial_sums
        .iter()
        .filter(|(k, _)| k.is_power_of_two())
        .map(|x| x.1)
        .collect();
    let (trend, growth) = if sum.value() == 0.0 {
        (Trend::Converges, f64::NEG_INFINITY)
    } else {
        doubling_trend(&pow2)
    };
    ConditionResult {
        kind,
        partial_sums,
        value: sum.value(),
        trend,
        growth,
    }
}

/// ∫_0^∞ (1 − e^{−ψ(τ)}) τ^{−1−p} dτ for p ∈ (1,2). Below τ₀ the integrand
/// is replaced by its expansion a²m₂τ²/2 · τ^{−1−p}; above the decade where
/// τ^{−1−p} drops under 1e−12 the factor 1 − e^{−ψ} is bounded by 1.
pub fn cosine_tau_integral(rho: &LevyMeasure1D, a: f64, cut: f64, p: f64) -> f64 {
    const TAU0: f64 = 1e-4;
    let a = a.abs();
    if a == 0.0 || cut <= 0.0 {
        return 0.0;
    }
    let m2 = rho.truncated_moment(2.0, 0.0, cut);
    let mut total = NeumaierSum::new();
    total.add(a * a * m2 * TAU0.powf(2.0 - p) / (2.0 * (2.0 - p)));
    let tau_max = 10f64.powf(12.0 / (1.0 + p));
    let opts = QuadOptions::default().with_rel_tol(1e-8);
    let f = |t: f64| {
        -(-rho.truncated_cos_transform(t * a, cut))
            .exp_m1()
            .clamp(0.0, 1.0)
            * t.powf(-1.0 - p)
    };
    let mut lo = TAU0;
    while lo < tau_max {
        let hi = (lo * 10.0).min(tau_max);
        // A decade whose envelope ∫ τ^{−1−p} is negligible is bounded, not integrated.
        let envelope = (lo.powf(-p) - hi.powf(-p)) / p;
        if envelope < 1e-14 * total.value() {
            total.add(0.5 * envelope);
        } else {
            total.add(gauss_kronrod(f, lo, hi, &opts).value);
        }
        lo = hi;
    }
    total.add(tau_max.powf(-p) / p);
    total.value()
}

pub fn levy_measure_conditions(
    spec: &HedgehogSpec,
    params: &BesovParams,
) -> Result<ConditionReport> {
    let (a, w) = spec.wavelet_terms(params, spec.budget)?;
    let p = params.p;
    let rho = &spec.rho;
    let norms: Vec<f64> = a.iter().zip(&w).map(|(a, w)| a.abs() * w).collect();
    let mut conditions = Vec::new();
    if p >= 2.0 {
        conditions.push(condition_from_terms(
            ConditionKind::CapP,
            norms.iter().map(|&n| rho.cap_integral(p, n)),
        ));
        let inner = (0..a.len()).map(|k| {
            if norms[k] == 0.0 {
                return 0.0;
            }
            let m2 = rho.truncated_moment(2.0, 0.0, 1.0 / norms[k]);
            w[k].powf(p) * (a[k] * a[k] * m2).powf(p / 2.0)
        });
        conditions.push(condition_from_terms(ConditionKind::InnerQuadratic, inner));
    } else {
        conditions.push(condition_from_terms(
            ConditionKind::CapTwo,
            norms.iter().map(|&n| rho.cap_integral(2.0, n)),
        ));
        let cos = (0..a.len()).map(|k| {
            if norms[k] == 0.0 {
                return 0.0;
            }
            w[k].powf(p) * cosine_tau_integral(rho, a[k], 1.0 / norms[k], p)
        });
        conditions.push(condition_from_terms(ConditionKind::CosineIntegral, cos));
    }
    Ok(ConditionReport {
        terms: a.len(),
        conditions,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CounterexampleOptions {
    /// Exponent θ ∈ (1 − α/2, 1] of the witness y_k = x_k^{2/α−1} / T_k^θ.
    pub theta: Option<f64>,
    pub budget: usize,
    pub truncation: Option<Truncation>,
}

impl Default for CounterexampleOptions {
    fn default() -> Self {
        CounterexampleOptions {
            theta: None,
            budget: 1 << 20,
            truncation: None,
        }
    }
}

/// A coefficient sequence in ℓ^{2α/(2−α)} whose weighted α-sum diverges,
/// with closed-form certificates for both facts.
#[derive(Debug, Clone, PartialEq)]
pub struct Counterexample {
    pub params: BesovParams,
    pub alpha: f64,
    pub theta: f64,
    pub enumeration: IndexEnumeration,
    pub coefficients: Vec<f64>,
    /// r = 2α/(2−α).
    pub lr_exponent: f64,
    /// Σ_{k≤N} |a_k|^r.
    pub lr_partial: f64,
    /// Closed-form bound on the full Σ |a_k|^r.
    pub lr_bound: f64,
    /// Closed-form bound on Σ_{k>N} |a_k|^r.
    pub lr_tail_bound: f64,
    /// Σ_{k≤N} |a_k ω_k|^α.
    pub divergence_partial: f64,
    /// Certified lower bound on the same partial sum.
    pub divergence_lower_bound: f64,
    /// T_N = Σ_{k≤N} ω_k².
    pub weight_square_sum: f64,
    /// (ω) ∉ ℓ², so T_N → ∞ and the weighted α-sum diverges.
    pub weights_not_square_summable: bool,
}

impl Counterexample {
    /// Stable(α) hedgehog on the wavelet basis carrying these coefficients.
    pub fn to_spec(&self) -> Result<HedgehogSpec> {
        let spec = HedgehogSpec::new(
            LevyMeasure1D::stable(self.alpha)?,
            NormRule::Wavelet {
                enumeration: self.enumeration,
                coefficients: CoefficientRule::Positional(Sequence::Prefix(
                    self.coefficients.clone(),
                )),
            },
        )?;
        Ok(spec.with_budget(self.coefficients.len()))
    }
}

fn default_counterexample_truncation(params: &BesovParams, budget: usize) -> Truncation {
    let d = params.d;
    let genders0 = 1u64 << d;
    if params.w >= -params.dim() / 2.0 {
        // translation divergence: the coarsest scale alone carries it
        let per_side = (budget as f64 / genders0 as f64).powf(1.0 / d as f64);
        let m = (((per_side - 1.0) / 2.0).floor() as u64).max(1);
        Truncation::uniform(0, m)
    } else {
        let mut j = 0;
        while (IndexEnumeration {
            d,
            truncation: Truncation::dyadic(j + 1, 1),
        })
        .len()
            <= budget as u128
            && j < 40
        {
            j += 1;
        }
        Truncation::dyadic(j, 1)
    }
}

pub fn counterexample_sequence(
    params: &BesovParams,
    alpha: f64,
    opts: &CounterexampleOptions,
) -> Result<Counterexample> {
    if !(alpha > 0.0 && alpha < 2.0) {
        return Err(invalid(format!("alpha must lie in (0,2), got {alpha}")));
    }
    if !(params.p > 2.0) {
        return Err(invalid("the counterexample needs p > 2"));
    }
    let region = classify_point(params)?;
    if !region.in_e_p || region.in_r_p {
        return Err(Error::OutsideRegion(
            "the counterexample needs (s,w) in E_p but outside R_p".into(),
        ));
    }
    let lower = 1.0 - alpha / 2.0;
    let theta = opts.theta.unwrap_or(lower + 0.1 * alpha / 2.0);
    if !(theta > lower && theta <= 1.0) {
        return Err(invalid(format!("theta must lie in ({lower}, 1]")));
    }
    let trunc = opts
        .truncation
        .unwrap_or_else(|| default_counterexample_truncation(params, opts.budget));
    let enumeration = IndexEnumeration::new(params.d, trunc)?;
    let w = enumeration.weights(params, opts.budget);
    if w.is_empty() {
        return Err(invalid("empty truncation"));
    }
    let r = 2.0 * alpha / (2.0 - alpha);
    let beta = 2.0 * theta / (2.0 - alpha);
    let mut t = NeumaierSum::new();
    let mut coeffs = Vec::with_capacity(w.len());
    let mut lr = NeumaierSum::new();
    let mut div = NeumaierSum::new();
    let sup_sq = w.iter().fold(0.0f64, |m, &x| m.max(x * x)).max(1.0);
    let n0 = (w.len() / 64).max(1);
    let mut d_n0 = 0.0;
    let mut t_n0 = 0.0;
    for (k, &om) in w.iter().enumerate() {
        let x2 = om * om;
        t.add(x2);
        let tk = t.value();
        // y_k = x_k^{2/α−1} / T_k^θ with x_k = ω_k^α
        let y = om.powf(2.0 - alpha) / tk.powf(theta);
        coeffs.push(y.powf(1.0 / alpha));
        lr.add(x2 / tk.powf(beta));
        div.add(x2 / tk.powf(theta));
        if k + 1 == n0 {
            d_n0 = div.value();
            t_n0 = tk;
        }
    }
    let t1 = w[0] * w[0];
    let tn = t.value();
    let lr_bound = t1.powf(1.0 - beta) * beta / (beta - 1.0);
    let lr_tail_bound = tn.powf(1.0 - beta) / (beta - 1.0);
    let integral = if theta == 1.0 {
        (tn / t_n0).ln()
    } else {
        (tn.powf(1.0 - theta) - t_n0.powf(1.0 - theta)) / (1.0 - theta)
    };
    let factor = (1.0 - sup_sq / t_n0).max(0.0).powf(theta);
    let threshold = weight_sum_threshold(params);
    Ok(Counterexample {
        params: *params,
        alpha,
        theta,
        enumeration,
        coefficients: coeffs,
        lr_exponent: r,
        lr_partial: lr.value(),
        lr_bound,
        lr_tail_bound,
        divergence_partial: div.value(),
        divergence_lower_bound: d_n0 + factor * integral,
        weight_square_sum: tn,
        weights_not_square_summable: threshold >= 2.0,
    })
}
