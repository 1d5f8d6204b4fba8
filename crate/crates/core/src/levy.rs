//! Symmetric one-dimensional Lévy measures, their tail and truncated-moment
//! functionals, the summability indices τ̄^(q), τ̲^(q), the moment bound
//! p_max, and the characteristic-function moment formula.
//!
//! Densities are given on β > 0 and mirrored. The point mass is
//! ½(δ₁ + δ₋₁). Truncated moments integrate over the closed shell
//! a ≤ |β| ≤ b and tails over |β| > t, so an atom on a cut is counted once.

use std::fmt;
use std::sync::Arc;

use crate::error::{invalid, Result};
use crate::fit::linear_fit;
use crate::quad::{exp_sinh, gauss_kronrod, tanh_sinh, QuadOptions};
use crate::special::{normal_abs_moment, one_minus_cos_integral};
use crate::sum::NeumaierSum;

/// Bounds certifying that a user density is a Lévy measure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrabilityCertificate {
    /// density(β) ≤ C β^{−1−a} on (0, 1] with this a < 2.
    pub small_jump_index: f64,
    /// density(β) ≍ β^{−1−b} as β → ∞, when known.
    pub tail_index: Option<f64>,
}

#[derive(Clone)]
pub struct CustomDensity {
    pub label: String,
    density: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    pub certificate: IntegrabilityCertificate,
}

impl CustomDensity {
    pub fn new(
        label: impl Into<String>,
        density: impl Fn(f64) -> f64 + Send + Sync + 'static,
        certificate: IntegrabilityCertificate,
    ) -> Result<Self> {
        if !(certificate.small_jump_index < 2.0) {
            return Err(invalid("small-jump index must be below 2"));
        }
        if let Some(b) = certificate.tail_index {
            if !(b > 0.0) {
                return Err(invalid("tail index must be positive"));
            }
        }
        Ok(CustomDensity {
            label: label.into(),
            density: Arc::new(density),
            certificate,
        })
    }

    pub fn density(&self, beta: f64) -> f64 {
        (self.density)(beta)
    }
}

impl fmt::Debug for CustomDensity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomDensity")
            .field("label", &self.label)
            .field("certificate", &self.certificate)
            .finish()
    }
}

impl PartialEq for CustomDensity {
    fn eq(&self, other: &Self) -> bool {
        self.label == other.label && Arc::ptr_eq(&self.density, &other.density)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum LevyMeasure1D {
    PointMassAtOne,
    /// |β|^{−1−α} dβ.
    Stable {
        alpha: f64,
    },
    /// |β|^{−ζ} e^{−|β|} dβ.
    TemperedStable {
        zeta: f64,
    },
    /// |β|^{−1−α₁} on (2k, 2k+1] and |β|^{−1−α₂} on (2k+1, 2k+2].
    BlendedStable {
        alpha1: f64,
        alpha2: f64,
    },
    Custom(CustomDensity),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TauMethod {
    Analytic,
    NumericGrid,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TauIndices {
    pub tau_upper: f64,
    pub tau_lower: f64,
    pub q: f64,
    pub method: TauMethod,
    /// Spread of the local slopes around the fitted one (0 for analytic).
    pub uncertainty: f64,
    /// RMS residual of the log-log fit (0 for analytic).
    pub residual: f64,
    pub ambiguous: bool,
}

/// Grid ξ_i = 2^{−i}, i = 1..points.
pub const DEFAULT_TAU_GRID: usize = 60;
const TAU_FIT_WINDOW: usize = 15;
const TAU_SUB_WINDOW: usize = 5;
const TAU_RESIDUAL_LIMIT: f64 = 0.05;

fn quad_opts() -> QuadOptions {
    QuadOptions::default().with_rel_tol(1e-12)
}

impl LevyMeasure1D {
    pub fn stable(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 2.0) {
            return Err(invalid(format!(
                "stable index must lie in (0,2), got {alpha}"
            )));
        }
        Ok(LevyMeasure1D::Stable { alpha })
    }

    pub fn tempered_stable(zeta: f64) -> Result<Self> {
        if !(zeta > 0.0 && zeta < 3.0) {
            return Err(invalid(format!(
                "tempering exponent must lie in (0,3), got {zeta}"
            )));
        }
        Ok(LevyMeasure1D::TemperedStable { zeta })
    }

    pub fn blended_stable(alpha1: f64, alpha2: f64) -> Result<Self> {
        if !(alpha1 > 0.0 && alpha1 < alpha2 && alpha2 < 2.0) {
            return Err(invalid("blended indices need 0 < alpha1 < alpha2 < 2"));
        }
        Ok(LevyMeasure1D::BlendedStable { alpha1, alpha2 })
    }

    pub fn tag(&self) -> &str {
        match self {
            LevyMeasure1D::PointMassAtOne => "point_mass",
            LevyMeasure1D::Stable { .. } => "stable",
            LevyMeasure1D::TemperedStable { .. } => "tempered_stable",
            LevyMeasure1D::BlendedStable { .. } => "blended_stable",
            LevyMeasure1D::Custom(c) => &c.label,
        }
    }

    /// Density on β > 0 (one side); `None` for the atom.
    pub fn density(&self, beta: f64) -> Option<f64> {
        match self {
            LevyMeasure1D::PointMassAtOne => None,
            LevyMeasure1D::Stable { alpha } => Some(beta.powf(-1.0 - alpha)),
            LevyMeasure1D::TemperedStable { zeta } => Some(beta.powf(-zeta) * (-beta).exp()),
            LevyMeasure1D::BlendedStable { alpha1, alpha2 } => {
                let a = if blended_is_first(beta) {
                    alpha1
                } else {
                    alpha2
                };
                Some(beta.powf(-1.0 - a))
            }
            LevyMeasure1D::Custom(c) => Some(c.density(beta)),
        }
    }

    /// ρ({|β| > t}).
    pub fn tail_mass(&self, t: f64) -> f64 {
        match self {
            LevyMeasure1D::PointMassAtOne => {
                if t < 1.0 {
                    1.0
                } else {
                    0.0
                }
            }
            LevyMeasure1D::Stable { alpha } => 2.0 * t.powf(-alpha) / alpha,
            _ => self.truncated_moment(0.0, t, f64::INFINITY),
        }
    }

    /// ∫_{a ≤ |β| ≤ b} |β|^q ρ(dβ); divergent integrals return +∞.
    pub fn truncated_moment(&self, q: f64, a: f64, b: f64) -> f64 {
        let a = a.max(0.0);
        if !(b > a) {
            return 0.0;
        }
        match self {
            LevyMeasure1D::PointMassAtOne => {
                if a <= 1.0 && 1.0 <= b {
                    1.0
                } else {
                    0.0
                }
            }
            LevyMeasure1D::Stable { alpha } => 2.0 * power_integral(q - 1.0 - alpha, a, b),
            LevyMeasure1D::BlendedStable { alpha1, alpha2 } => {
                2.0 * interlaced_power_integral(q - 1.0 - alpha1, q - 1.0 - alpha2, a, b)
            }
            LevyMeasure1D::TemperedStable { zeta } => 2.0 * tempered_integral(q - zeta, a, b),
            LevyMeasure1D::Custom(c) => 2.0 * custom_integral(c, q, a, b),
        }
    }

    /// ∫_{|β| ≥ 1} (ξ^q|β|^q ∧ 1) ρ(dβ), split at |β| = 1/ξ.
    pub fn xi_integral(&self, q: f64, xi: f64) -> f64 {
        let cut = 1.0 / xi;
        let body = self.truncated_moment(q, 1.0, cut);
        let body = if body == 0.0 { 0.0 } else { xi.powf(q) * body };
        body + self.tail_mass(cut)
    }

    /// ∫ (x^q|β|^q ∧ 1) ρ(dβ) over all β ≠ 0.
    pub fn cap_integral(&self, q: f64, x: f64) -> f64 {
        if x == 0.0 {
            return 0.0;
        }
        let cut = 1.0 / x;
        let body = self.truncated_moment(q, 0.0, cut);
        let body = if body == 0.0 { 0.0 } else { x.powf(q) * body };
        body + self.tail_mass(cut)
    }

    /// ∫ (β² ∧ 1) ρ(dβ); finite for every catalog member.
    pub fn levy_integrability(&self) -> f64 {
        self.cap_integral(2.0, 1.0)
    }

    /// sup{p > 0 : ∫_{|β|≥1} |β|^p ρ(dβ) < ∞}.
    pub fn p_max(&self) -> f64 {
        match self {
            LevyMeasure1D::PointMassAtOne | LevyMeasure1D::TemperedStable { .. } => f64::INFINITY,
            LevyMeasure1D::Stable { alpha } => *alpha,
            LevyMeasure1D::BlendedStable { alpha1, .. } => *alpha1,
            LevyMeasure1D::Custom(c) => match c.certificate.tail_index {
                Some(b) => b,
                None => self.numeric_tail_index(),
            },
        }
    }

    /// −slope of log ρ(|β| > t) against log t over t = 2^10 … 2^40.
    pub fn numeric_tail_index(&self) -> f64 {
        let (mut xs, mut ys) = (Vec::new(), Vec::new());
        for i in 10..=40 {
            let t = (i as f64).exp2();
            let m = self.tail_mass(t);
            if m > 0.0 && m.is_finite() {
                xs.push(t.ln());
                ys.push(m.ln());
            }
        }
        match linear_fit(&xs, &ys) {
            Some(f) if xs.len() == 31 => (-f.slope).max(0.0),
            _ => f64::INFINITY,
        }
    }

    pub fn tau_indices(&self, q: f64, method: TauMethod) -> Result<TauIndices> {
        self.tau_indices_with_grid(q, method, DEFAULT_TAU_GRID)
    }

    pub fn tau_indices_with_grid(
        &self,
        q: f64,
        method: TauMethod,
        points: usize,
    ) -> Result<TauIndices> {
        if !(q > 0.0) || !q.is_finite() {
            return Err(invalid(format!("q must be positive and finite, got {q}")));
        }
        let analytic = |up: f64, low: f64| TauIndices {
            tau_upper: up,
            tau_lower: low,
            q,
            method: TauMethod::Analytic,
            uncertainty: 0.0,
            residual: 0.0,
            ambiguous: false,
        };
        match (method, self) {
            (TauMethod::Analytic, LevyMeasure1D::PointMassAtOne)
            | (TauMethod::Analytic, LevyMeasure1D::TemperedStable { .. }) => Ok(analytic(q, q)),
            (TauMethod::Analytic, LevyMeasure1D::Stable { alpha }) => {
                Ok(analytic(q.min(*alpha), q.min(*alpha)))
            }
            (TauMethod::Analytic, LevyMeasure1D::BlendedStable { alpha1, alpha2 }) => {
                let low = if q >= 2.0 { *alpha2 } else { q.min(*alpha2) };
                Ok(analytic(q.min(*alpha1), low))
            }
            _ => self.tau_numeric(q, points),
        }
    }

    fn tau_numeric(&self, q: f64, points: usize) -> Result<TauIndices> {
        if points < 40 {
            return Err(invalid("the ξ-grid needs at least 40 points"));
        }
        let mut xs = Vec::with_capacity(points);
        let mut ys = Vec::with_capacity(points);
        for i in 1..=points {
            let xi = (-(i as f64)).exp2();
            let v = self.xi_integral(q, xi);
            xs.push(xi.ln());
            ys.push(v);
        }
        let tail = &ys[points - TAU_FIT_WINDOW..];
        if tail.iter().all(|&v| v == 0.0) {
            return Ok(TauIndices {
                tau_upper: f64::INFINITY,
                tau_lower: f64::INFINITY,
                q,
                method: TauMethod::NumericGrid,
                uncertainty: 0.0,
                residual: 0.0,
                ambiguous: false,
            });
        }
        let x = &xs[points - TAU_FIT_WINDOW..];
        let y: Vec<f64> = tail.iter().map(|v| v.ln()).collect();
        let fit = linear_fit(x, &y).ok_or_else(|| invalid("degenerate ξ-grid"))?;
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for w in 0..=(TAU_FIT_WINDOW - TAU_SUB_WINDOW) {
            if let Some(f) = linear_fit(&x[w..w + TAU_SUB_WINDOW], &y[w..w + TAU_SUB_WINDOW]) {
                lo = lo.min(f.slope);
                hi = hi.max(f.slope);
            }
        }
        let clamp = |v: f64| v.clamp(0.0, q);
        let ambiguous = !fit.rms_residual.is_finite() || fit.rms_residual > TAU_RESIDUAL_LIMIT;
        Ok(TauIndices {
            tau_upper: clamp(lo),
            tau_lower: clamp(hi),
            q,
            method: TauMethod::NumericGrid,
            uncertainty: (hi - lo).max(fit.slope_stderr),
            residual: fit.rms_residual,
            ambiguous,
        })
    }

    /// ∫_{|β| ≤ cut} (1 − cos(uβ)) ρ(dβ).
    pub fn truncated_cos_transform(&self, u: f64, cut: f64) -> f64 {
        let u = u.abs();
        if u == 0.0 || cut <= 0.0 {
            return 0.0;
        }
        match self {
            LevyMeasure1D::PointMassAtOne => {
                if cut >= 1.0 {
                    2.0 * (u / 2.0).sin().powi(2)
                } else {
                    0.0
                }
            }
            LevyMeasure1D::Stable { alpha } => {
                2.0 * u.powf(*alpha) * one_minus_cos_partial(*alpha, u * cut)
            }
            _ => {
                let f = |b: f64| 2.0 * (u * b / 2.0).sin().powi(2) * self.density(b).unwrap_or(0.0);
                let opts = quad_opts().with_rel_tol(1e-10);
                let knee = cut.min(1.0 / u);
                let mut total = tanh_sinh(f, 0.0, knee, &opts).value;
                if cut > knee {
                    total += gauss_kronrod(f, knee, cut, &opts).value;
                }
                2.0 * total
            }
        }
    }
}

fn blended_is_first(beta: f64) -> bool {
    // (2k, 2k+1] carries the first index
    let c = beta.ceil();
    (c as i64).rem_euclid(2) == 1
}

/// ∫_lo^hi β^e dβ for 0 ≤ lo < hi ≤ ∞; +∞ when divergent.
pub fn power_integral(e: f64, lo: f64, hi: f64) -> f64 {
    if !(hi > lo) {
        return 0.0;
    }
    let c = e + 1.0;
    if lo == 0.0 && c <= 0.0 {
        return f64::INFINITY;
    }
    if hi.is_infinite() && c >= 0.0 {
        return f64::INFINITY;
    }
    if c == 0.0 {
        return (hi / lo).ln();
    }
    if hi.is_infinite() {
        return -lo.powf(c) / c;
    }
    if lo == 0.0 {
        return hi.powf(c) / c;
    }
    lo.powf(c) * (c * (hi / lo).ln()).exp_m1() / c
}

/// ∫_a^{a+1} F(β) dβ where F is the antiderivative of β^e vanishing at ∞
/// (or ln β for e = −1).
fn unit_antiderivative_integral(e: f64, a: f64) -> f64 {
    if e == -1.0 {
        a.ln() + (a + 1.0) * (1.0 / a).ln_1p() - 1.0
    } else {
        power_integral(e + 1.0, a, a + 1.0) / (e + 1.0)
    }
}

const INTERLACE_DIRECT: f64 = 8192.0;
const INTERLACE_SMOOTH_FROM: f64 = 1_099_511_627_776.0; // 2^40

/// ∫_lo^hi β^{e(β)} dβ with e = e0 on (2k, 2k+1] and e1 on (2k+1, 2k+2].
/// Unit pieces are summed exactly near `lo`; pairs of pieces further out
/// are summed by Euler–Maclaurin; beyond 2^40 the pieces are averaged.
pub fn interlaced_power_integral(e0: f64, e1: f64, lo: f64, hi: f64) -> f64 {
    if !(hi > lo) {
        return 0.0;
    }
    if lo == 0.0 && e0 <= -1.0 {
        return f64::INFINITY;
    }
    if hi.is_infinite() && e0.max(e1) >= -1.0 {
        return f64::INFINITY;
    }
    let mut sum = NeumaierSum::new();
    let smooth_from = INTERLACE_SMOOTH_FROM.max(lo);
    if lo >= INTERLACE_SMOOTH_FROM {
        return 0.5 * (power_integral(e0, lo, hi) + power_integral(e1, lo, hi));
    }
    let hi_exact = hi.min(smooth_from);
    let direct_end = if hi_exact - lo <= 2.0 * INTERLACE_DIRECT {
        hi_exact
    } else {
        2.0 * ((lo + INTERLACE_DIRECT) / 2.0).ceil()
    };
    let mut x = lo;
    while x < direct_end {
        let n = x.floor();
        let end = (n + 1.0).min(direct_end);
        let e = if (n as i64).rem_euclid(2) == 0 {
            e0
        } else {
            e1
        };
        sum.add(power_integral(e, x, end));
        x = end;
    }
    if x < hi_exact {
        let k = x / 2.0;
        let l = (hi_exact / 2.0).floor();
        sum.add(euler_maclaurin_pairs(e0, e1, k, l));
        let mut y = 2.0 * l;
        while y < hi_exact {
            let end = (y + 1.0).min(hi_exact);
            let e = if (y as i64).rem_euclid(2) == 0 {
                e0
            } else {
                e1
            };
            sum.add(power_integral(e, y, end));
            y = end;
        }
    }
    if hi > smooth_from {
        sum.add(0.5 * (power_integral(e0, smooth_from, hi) + power_integral(e1, smooth_from, hi)));
    }
    sum.value()
}

/// Σ_{k=K}^{L−1} P(k), P(k) = ∫_{2k}^{2k+1} β^{e0} + ∫_{2k+1}^{2k+2} β^{e1}.
fn euler_maclaurin_pairs(e0: f64, e1: f64, k: f64, l: f64) -> f64 {
    if l <= k {
        return 0.0;
    }
    let pair = |x: f64| {
        power_integral(e0, 2.0 * x, 2.0 * x + 1.0)
            + power_integral(e1, 2.0 * x + 1.0, 2.0 * x + 2.0)
    };
    let step = |e: f64, a: f64| a.powf(e) * (e * (1.0 / a).ln_1p()).exp_m1();
    let dpair = |x: f64| 2.0 * (step(e0, 2.0 * x) + step(e1, 2.0 * x + 1.0));
    let integral_from = |x: f64| {
        0.5 * unit_antiderivative_integral(e0, 2.0 * x)
            + 0.5 * unit_antiderivative_integral(e1, 2.0 * x + 1.0)
    };
    let mut s = NeumaierSum::new();
    s.add(-integral_from(k));
    s.add(0.5 * pair(k));
    s.add(-dpair(k) / 12.0);
    if l.is_finite() {
        s.add(integral_from(l));
        s.add(-0.5 * pair(l));
        s.add(dpair(l) / 12.0);
    }
    s.value()
}

/// ∫_a^b β^c e^{−β} dβ.
fn tempered_integral(c: f64, a: f64, b: f64) -> f64 {
    if a == 0.0 && c <= -1.0 {
        return f64::INFINITY;
    }
    let f = |x: f64| x.powf(c) * (-x).exp();
    let opts = quad_opts();
    if b.is_finite() && b - a <= 80.0 {
        return tanh_sinh(f, a, b, &opts).value;
    }
    let upper = exp_sinh(f, a, &opts).value;
    if b.is_infinite() {
        upper
    } else {
        (upper - exp_sinh(f, b, &opts).value).max(0.0)
    }
}

/// ∫_a^b β^q density(β) dβ split at 1.
fn custom_integral(c: &CustomDensity, q: f64, a: f64, b: f64) -> f64 {
    if a == 0.0 && q <= c.certificate.small_jump_index {
        return f64::INFINITY;
    }
    if b.is_infinite() {
        if let Some(t) = c.certificate.tail_index {
            if q >= t {
                return f64::INFINITY;
            }
        }
    }
    let f = |x: f64| x.powf(q) * c.density(x);
    let opts = quad_opts();
    let mut total = 0.0;
    if a < 1.0 {
        total += tanh_sinh(f, a, b.min(1.0), &opts).value;
    }
    if b > 1.0 {
        let lo = a.max(1.0);
        total += if b.is_infinite() {
            exp_sinh(f, lo, &opts).value
        } else {
            tanh_sinh(f, lo, b, &opts).value
        };
    }
    total
}

/// G_α(x) = ∫_0^x (1 − cos v) v^{−1−α} dv.
pub fn one_minus_cos_partial(alpha: f64, x: f64) -> f64 {
    const SERIES_LIMIT: f64 = 4.0;
    const ASYMPTOTIC_FROM: f64 = 200.0;
    let series = |x: f64| {
        let mut s = NeumaierSum::new();
        let x2 = x * x;
        let mut pow = x2; // x^{2k}
        let mut fact = 2.0; // (2k)!
        for k in 1..60 {
            let kk = 2.0 * k as f64;
            let term = pow / (fact * (kk - alpha));
            s.add(if k % 2 == 1 { term } else { -term });
            if term < 1e-18 * s.value().abs() {
                break;
            }
            pow *= x2;
            fact *= (kk + 1.0) * (kk + 2.0);
        }
        s.value() * x.powf(-alpha)
    };
    if x <= SERIES_LIMIT {
        return series(x);
    }
    if x < ASYMPTOTIC_FROM {
        let opts = quad_opts().with_rel_tol(1e-13);
        let f = |v: f64| 2.0 * (v / 2.0).sin().powi(2) * v.powf(-1.0 - alpha);
        return series(SERIES_LIMIT) + gauss_kronrod(f, SERIES_LIMIT, x, &opts).value;
    }
    // ∫_x^∞ (1 − cos v) v^{−1−α} dv = x^{−α}/α − Re ∫_x^∞ e^{iv} v^{−γ} dv
    let gamma = 1.0 + alpha;
    let (mut sr, mut si) = (1.0, 0.0);
    let (mut tr, mut ti) = (1.0, 0.0);
    for k in 0..30 {
        // multiply by (−i)(γ+k)/x
        let f = (gamma + k as f64) / x;
        let (nr, ni) = (ti * f, -tr * f);
        tr = nr;
        ti = ni;
        sr += tr;
        si += ti;
        if tr.abs() + ti.abs() < 1e-18 {
            break;
        }
    }
    // i e^{ix} x^{−γ} S
    let (c, s) = (x.cos(), x.sin());
    let er = -s;
    let ei = c;
    let re = (er * sr - ei * si) * x.powf(-gamma);
    let total = one_minus_cos_integral(alpha);
    total - x.powf(-alpha) / alpha + re
}

/// c_q ∫_0^∞ (1 − Re φ(τ)) τ^{−1−q} dτ with c_q calibrated on the Gaussian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentFormula {
    pub q: f64,
    pub c_q: f64,
    pub opts: QuadOptions,
}

impl MomentFormula {
    pub fn calibrated(q: f64, opts: QuadOptions) -> Result<Self> {
        if !(q > 0.0 && q < 2.0) {
            return Err(invalid(format!("q must lie in (0,2), got {q}")));
        }
        let j = cf_integral(|t: f64| (-0.5 * t * t).exp(), q, &opts);
        Ok(MomentFormula {
            q,
            c_q: normal_abs_moment(q) / j,
            opts,
        })
    }

    pub fn moment<F: Fn(f64) -> f64>(&self, cf: F) -> f64 {
        let j = cf_integral(cf, self.q, &self.opts);
        if j.is_infinite() {
            f64::INFINITY
        } else {
            self.c_q * j
        }
    }
}

pub fn symmetric_moment_via_cf<F: Fn(f64) -> f64>(
    cf: F,
    q: f64,
    opts: &QuadOptions,
) -> Result<f64> {
    Ok(MomentFormula::calibrated(q, *opts)?.moment(cf))
}

const CF_SMALL: f64 = 1e-4;

/// ∫_0^∞ (1 − φ(τ)) τ^{−1−q} dτ, split at τ = 1 and folded onto (0, 1].
/// Below `CF_SMALL`, 1 − φ loses its digits to cancellation and is
/// replaced by the local power law.
fn cf_integral<F: Fn(f64) -> f64>(cf: F, q: f64, opts: &QuadOptions) -> f64 {
    let g1 = 1.0 - cf(1e-3);
    let g2 = 1.0 - cf(1e-2);
    if g1 > 0.0 && g2 > 0.0 {
        let local = (g2 / g1).ln() / 10f64.ln();
        if local <= q {
            return f64::INFINITY;
        }
    }
    let ga = 1.0 - cf(0.5 * CF_SMALL);
    let gb = 1.0 - cf(CF_SMALL);
    let head = if ga > 0.0 && gb > 0.0 {
        let kappa = (gb / ga).log2();
        gb * CF_SMALL.powf(-q) / (kappa - q)
    } else {
        0.0
    };
    let near = head + tanh_sinh(|t| (1.0 - cf(t)) * t.powf(-1.0 - q), CF_SMALL, 1.0, opts).value;
    let far = tanh_sinh(|u| (1.0 - cf(1.0 / u)) * u.powf(q - 1.0), 0.0, 1.0, opts).value;
    let j = near + far;
    if j.is_finite() {
        j
    } else {
        f64::INFINITY
    }
}

/// E|X|^q for a symmetric α-stable X with E e^{iuX} = e^{−|u|^α}, q < α.
pub fn stable_abs_moment(alpha: f64, q: f64) -> f64 {
    if q >= alpha {
        return f64::INFINITY;
    }
    // E|X|^q = (1/K(q)) ∫ (1 − e^{−τ^α}) τ^{−1−q} dτ = Γ(1 − q/α) / (q K(q))
    let k = one_minus_cos_integral(q);
    crate::special::gamma(1.0 - q / alpha) / (q * k)
}
