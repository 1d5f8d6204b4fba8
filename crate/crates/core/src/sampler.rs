//! Monte-Carlo simulation of truncated cylindrical processes in wavelet
//! coordinates and empirical Besov-norm curves.
//!
//! Stable variates come from exact transforms of uniform/exponential pairs:
//! Kanter's representation for the positive (α/2)-stable subordinator and
//! Chambers–Mallows–Stuck for symmetric one-dimensional laws.

use std::f64::consts::PI;
use std::fmt::Write as _;

use rand::Rng;
use rand_distr::{Binomial, Distribution, Exp1, Gamma, Poisson, StandardNormal};

use crate::besov::{BesovParams, IndexEnumeration};
use crate::error::{invalid, Error, Result};
use crate::exec::{map_range, Execution};
use crate::fit::linear_fit;
use crate::hedgehog::HedgehogSpec;
use crate::levy::LevyMeasure1D;
use crate::rng::batch_rng;
use crate::special::gamma;
use crate::stable::c_alpha;

/// Positive a-stable variate with E e^{−λW} = e^{−λ^a}, a ∈ (0,1).
pub fn positive_stable<R: Rng + ?Sized>(rng: &mut R, a: f64) -> f64 {
    let u: f64 = rng.random::<f64>() * PI;
    let e: f64 = rng.sample(Exp1);
    let u = if u == 0.0 { f64::MIN_POSITIVE } else { u };
    (a * u).sin() / u.sin().powf(1.0 / a) * (((1.0 - a) * u).sin() / e).powf((1.0 - a) / a)
}

/// Symmetric α-stable variate with E e^{iuX} = e^{−|u|^α}.
pub fn symmetric_stable<R: Rng + ?Sized>(rng: &mut R, alpha: f64) -> f64 {
    let v: f64 = (rng.random::<f64>() - 0.5) * PI;
    let e: f64 = rng.sample(Exp1);
    if (alpha - 1.0).abs() < 1e-12 {
        return v.tan();
    }
    (alpha * v).sin() / v.cos().powf(1.0 / alpha)
        * (((1.0 - alpha) * v).cos() / e).powf((1.0 - alpha) / alpha)
}

fn check_stable_args(n: usize, alpha: f64, dt: f64) -> Result<()> {
    if n == 0 {
        return Err(invalid("dimension must be at least 1"));
    }
    if !(alpha > 0.0 && alpha < 2.0) {
        return Err(invalid(format!("alpha must lie in (0,2), got {alpha}")));
    }
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(invalid("dt must be positive"));
    }
    Ok(())
}

/// Rotationally invariant increment with E e^{i⟨u,X⟩} = e^{−dt‖u‖^α}:
/// X = dt^{1/α} √(2W) Z with W positive (α/2)-stable and Z standard normal.
pub fn sample_rotinv_stable_increment<R: Rng + ?Sized>(
    n: usize,
    alpha: f64,
    dt: f64,
    rng: &mut R,
) -> Result<Vec<f64>> {
    check_stable_args(n, alpha, dt)?;
    let scale = subgaussian_scale(alpha, dt, rng);
    Ok((0..n)
        .map(|_| scale * rng.sample::<f64, _>(StandardNormal))
        .collect())
}

fn subgaussian_scale<R: Rng + ?Sized>(alpha: f64, dt: f64, rng: &mut R) -> f64 {
    let w = positive_stable(rng, alpha / 2.0);
    dt.powf(1.0 / alpha) * (2.0 * w).sqrt()
}

/// Increment over time dt of a one-dimensional Lévy process with the given
/// symmetric Lévy measure and no Gaussian part.
pub fn sample_levy_increment<R: Rng + ?Sized>(
    rho: &LevyMeasure1D,
    dt: f64,
    rng: &mut R,
) -> Result<f64> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(invalid("dt must be positive"));
    }
    match rho {
        LevyMeasure1D::Stable { alpha } => {
            let sigma = (dt * 2.0 * c_alpha(*alpha) / alpha).powf(1.0 / alpha);
            Ok(sigma * symmetric_stable(rng, *alpha))
        }
        LevyMeasure1D::PointMassAtOne => {
            let n = Poisson::new(dt)
                .map_err(|e| invalid(e.to_string()))?
                .sample(rng) as u64;
            if n == 0 {
                return Ok(0.0);
            }
            let up = Binomial::new(n, 0.5)
                .map_err(|e| invalid(e.to_string()))?
                .sample(rng);
            Ok(2.0 * up as f64 - n as f64)
        }
        LevyMeasure1D::TemperedStable { zeta } => tempered_increment(*zeta, dt, rng),
        LevyMeasure1D::BlendedStable { .. } | LevyMeasure1D::Custom(_) => Err(Error::Unsupported(
            format!("no sampler for the {} measure", rho.tag()),
        )),
    }
}

/// Expected number of retained shot-noise terms for ζ ∈ (1,3).
const SHOT_NOISE_TERMS: f64 = 2000.0;

fn tempered_increment<R: Rng + ?Sized>(zeta: f64, dt: f64, rng: &mut R) -> Result<f64> {
    let sign = |rng: &mut R| if rng.random::<bool>() { 1.0 } else { -1.0 };
    if zeta < 1.0 {
        // finite activity: rate 2Γ(1−ζ), magnitudes Gamma(1−ζ, 1)
        let shape = 1.0 - zeta;
        let rate = 2.0 * gamma(shape) * dt;
        let n = Poisson::new(rate)
            .map_err(|e| invalid(e.to_string()))?
            .sample(rng) as u64;
        let g = Gamma::new(shape, 1.0).map_err(|e| invalid(e.to_string()))?;
        let mut x = 0.0;
        for _ in 0..n {
            x += sign(rng) * g.sample(rng);
        }
        return Ok(x);
    }
    if zeta == 1.0 {
        let g = Gamma::new(dt, 1.0).map_err(|e| invalid(e.to_string()))?;
        return Ok(g.sample(rng) - g.sample(rng));
    }
    // Series representation of the untempered part β^{−ζ} (index a = ζ−1):
    // jumps V_i = (aΓ_i / (2dt))^{−1/a}, each kept with probability e^{−V_i}.
    let a = zeta - 1.0;
    let eps = (2.0 * dt / (SHOT_NOISE_TERMS * a)).powf(1.0 / a);
    let mut x = 0.0;
    let mut arrival = 0.0;
    loop {
        arrival += rng.sample::<f64, _>(Exp1);
        let v = (a * arrival / (2.0 * dt)).powf(-1.0 / a);
        if v < eps {
            break;
        }
        if rng.random::<f64>() < (-v).exp() {
            x += sign(rng) * v;
        }
    }
    let small_var = 2.0 * dt * eps.powf(3.0 - zeta) / (3.0 - zeta);
    Ok(x + small_var.sqrt() * rng.sample::<f64, _>(StandardNormal))
}

#[derive(Debug, Clone, PartialEq)]
pub enum PathModel {
    CanonicalStable { alpha: f64 },
    Hedgehog,
}

/// Increments of a truncated process on a time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PathSample {
    /// 0 = t_0 < t_1 < … < t_m.
    pub times: Vec<f64>,
    /// increments[i][k]: coordinate k over (t_i, t_{i+1}].
    pub increments: Vec<Vec<f64>>,
    pub seed: u64,
    pub model: PathModel,
}

impl PathSample {
    pub fn dim(&self) -> usize {
        self.increments.first().map_or(0, |v| v.len())
    }

    /// Coordinates of Y(t_m).
    pub fn terminal(&self) -> Vec<f64> {
        let mut y = vec![0.0; self.dim()];
        for inc in &self.increments {
            for (a, b) in y.iter_mut().zip(inc) {
                *a += b;
            }
        }
        y
    }
}

fn check_times(times: &[f64]) -> Result<()> {
    if times.len() < 2 || times[0] != 0.0 || times.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(invalid("times must start at 0 and increase strictly"));
    }
    Ok(())
}

/// Unit-step grid 0, 1, …, horizon.
pub fn unit_times(horizon: usize) -> Vec<f64> {
    (0..=horizon).map(|t| t as f64).collect()
}

/// Path of the canonical α-stable process projected on the first `n`
/// basis vectors. Step i uses its own RNG stream.
pub fn sample_canonical_path(alpha: f64, n: usize, times: &[f64], seed: u64) -> Result<PathSample> {
    check_times(times)?;
    check_stable_args(n, alpha, 1.0)?;
    let mut increments = Vec::with_capacity(times.len() - 1);
    for (i, w) in times.windows(2).enumerate() {
        let mut rng = batch_rng(seed, i as u64);
        increments.push(sample_rotinv_stable_increment(
            n,
            alpha,
            w[1] - w[0],
            &mut rng,
        )?);
    }
    Ok(PathSample {
        times: times.to_vec(),
        increments,
        seed,
        model: PathModel::CanonicalStable { alpha },
    })
}

/// Hedgehog path in wavelet coordinates: coordinate k moves by a_k times an
/// independent increment of ρ. Coordinates live on independent streams.
pub fn sample_hedgehog_path(
    spec: &HedgehogSpec,
    params: &BesovParams,
    n: usize,
    times: &[f64],
    seed: u64,
) -> Result<PathSample> {
    check_times(times)?;
    let coeffs = hedgehog_coefficients(spec, params, n)?;
    let steps = times.len() - 1;
    let mut increments = vec![vec![0.0; coeffs.len()]; steps];
    for (k, &a) in coeffs.iter().enumerate() {
        let mut rng = batch_rng(seed, k as u64);
        for (i, w) in times.windows(2).enumerate() {
            let x = sample_levy_increment(&spec.rho, w[1] - w[0], &mut rng)?;
            increments[i][k] = a * x;
        }
    }
    Ok(PathSample {
        times: times.to_vec(),
        increments,
        seed,
        model: PathModel::Hedgehog,
    })
}

fn hedgehog_coefficients(spec: &HedgehogSpec, params: &BesovParams, n: usize) -> Result<Vec<f64>> {
    use crate::hedgehog::{CoefficientRule, NormRule};
    let NormRule::Wavelet {
        enumeration,
        coefficients,
    } = &spec.rule
    else {
        return Err(Error::Unsupported(
            "paths need the wavelet-basis mode".into(),
        ));
    };
    let w = enumeration.weights(params, n);
    Ok(match coefficients {
        CoefficientRule::Constant(c) => vec![*c; w.len()],
        CoefficientRule::InverseWeight(b) => w
            .iter()
            .enumerate()
            .map(|(k, om)| b.term(k + 1) / om)
            .collect(),
        CoefficientRule::Positional(x) => (0..w.len()).map(|k| x.term(k + 1)).collect(),
    })
}

/// ‖P_n y‖ = (Σ_{k≤n} ω_k^p |y_k|^p)^{1/p} at every n of the grid.
pub fn prefix_norms(y: &[f64], weights: &[f64], p: f64, grid: &[usize]) -> Vec<f64> {
    let mut out = Vec::with_capacity(grid.len());
    let mut acc = crate::sum::NeumaierSum::new();
    let mut start = 0;
    for &n in grid {
        let n = n.min(y.len()).min(weights.len());
        for k in start..n.max(start) {
            acc.add((weights[k] * y[k].abs()).powf(p));
        }
        start = start.max(n);
        out.push(acc.value().powf(1.0 / p));
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormCurvePoint {
    pub n: usize,
    pub median: f64,
    pub q25: f64,
    pub q75: f64,
    pub replicas: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormCurve {
    pub points: Vec<NormCurvePoint>,
}

pub const NORM_CURVE_CSV_HEADER: &str = "n,median,q25,q75,replicas";

impl NormCurve {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(NORM_CURVE_CSV_HEADER);
        out.push('\n');
        for p in &self.points {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                p.n, p.median, p.q25, p.q75, p.replicas
            );
        }
        out
    }

    /// Median/quartiles across replicas of per-replica norm vectors.
    pub fn from_replicas(grid: &[usize], norms: &[Vec<f64>]) -> NormCurve {
        let points = grid
            .iter()
            .enumerate()
            .map(|(t, &n)| {
                let mut col: Vec<f64> = norms.iter().map(|r| r[t]).collect();
                col.sort_by(f64::total_cmp);
                NormCurvePoint {
                    n,
                    median: quantile(&col, 0.5),
                    q25: quantile(&col, 0.25),
                    q75: quantile(&col, 0.75),
                    replicas: col.len(),
                }
            })
            .collect();
        NormCurve { points }
    }
}

/// Linear-interpolation quantile of sorted data.
fn quantile(sorted: &[f64], q: f64) -> f64 {
    if sorted.is_empty() {
        return f64::NAN;
    }
    let h = q * (sorted.len() - 1) as f64;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Norm curve of Y(t_m) across the given replica paths.
pub fn empirical_norm_curve(
    paths: &[PathSample],
    params: &BesovParams,
    weights: &[f64],
    grid: &[usize],
) -> NormCurve {
    let norms: Vec<Vec<f64>> = paths
        .iter()
        .map(|p| prefix_norms(&p.terminal(), weights, params.p, grid))
        .collect();
    NormCurve::from_replicas(grid, &norms)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationConfig {
    pub params: BesovParams,
    pub enumeration: IndexEnumeration,
    pub grid: Vec<usize>,
    pub replicas: usize,
    pub seed: u64,
    pub execution: Execution,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SimulationModel {
    CanonicalStable { alpha: f64 },
    Hedgehog(HedgehogSpec),
}

/// Norm curve of Y(1) over independent replicas. Replica r draws from its
/// own stream, coordinates in enumeration order, so every truncation on the
/// grid sees a prefix of the same vector.
pub fn simulate_norm_curve(model: &SimulationModel, cfg: &SimulationConfig) -> Result<NormCurve> {
    if cfg.replicas == 0 {
        return Err(invalid("need at least one replica"));
    }
    if cfg.grid.is_empty() || cfg.grid.windows(2).any(|w| w[0] >= w[1]) || cfg.grid[0] == 0 {
        return Err(invalid("grid must be positive and strictly increasing"));
    }
    let nmax = *cfg.grid.last().unwrap_or(&0);
    let weights = cfg.enumeration.weights(&cfg.params, nmax);
    if weights.len() < nmax {
        return Err(invalid("grid exceeds the truncation"));
    }
    let p = cfg.params.p;
    let coeffs = match model {
        SimulationModel::CanonicalStable { alpha } => {
            check_stable_args(nmax, *alpha, 1.0)?;
            None
        }
        SimulationModel::Hedgehog(spec) => {
            if matches!(
                spec.rho,
                LevyMeasure1D::BlendedStable { .. } | LevyMeasure1D::Custom(_)
            ) {
                return Err(Error::Unsupported(format!(
                    "no sampler for the {} measure",
                    spec.rho.tag()
                )));
            }
            Some(hedgehog_coefficients(spec, &cfg.params, nmax)?)
        }
    };
    let replicas = map_range(cfg.execution, cfg.replicas, |r| -> Result<Vec<f64>> {
        let mut rng = batch_rng(cfg.seed, r as u64);
        let mut out = Vec::with_capacity(cfg.grid.len());
        let mut acc = crate::sum::NeumaierSum::new();
        let mut k = 0;
        match (model, &coeffs) {
            (SimulationModel::CanonicalStable { alpha }, _) => {
                let scale = subgaussian_scale(*alpha, 1.0, &mut rng);
                for &n in &cfg.grid {
                    while k < n {
                        let y = scale * rng.sample::<f64, _>(StandardNormal);
                        acc.add((weights[k] * y.abs()).powf(p));
                        k += 1;
                    }
                    out.push(acc.value().powf(1.0 / p));
                }
            }
            (SimulationModel::Hedgehog(spec), Some(a)) => {
                for &n in &cfg.grid {
                    while k < n {
                        let y = a[k] * sample_levy_increment(&spec.rho, 1.0, &mut rng)?;
                        acc.add((weights[k] * y.abs()).powf(p));
                        k += 1;
                    }
                    out.push(acc.value().powf(1.0 / p));
                }
            }
            _ => unreachable!("coefficients exist for hedgehog models"),
        }
        Ok(out)
    });
    let norms = replicas.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(NormCurve::from_replicas(&cfg.grid, &norms))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiagnosticVerdict {
    Stabilising,
    Growing,
    Ambiguous,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DivergenceDiagnostic {
    pub verdict: DiagnosticVerdict,
    pub slope: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagnosticThresholds {
    pub stabilising_below: f64,
    pub growing_above: f64,
}

impl Default for DiagnosticThresholds {
    fn default() -> Self {
        DiagnosticThresholds {
            stabilising_below: 0.02,
            growing_above: 0.1,
        }
    }
}

pub fn divergence_diagnostic(curve: &NormCurve) -> Result<DivergenceDiagnostic> {
    divergence_diagnostic_with(curve, DiagnosticThresholds::default())
}

/// Least-squares slope of log median against log n over the last half of
/// the grid.
pub fn divergence_diagnostic_with(
    curve: &NormCurve,
    th: DiagnosticThresholds,
) -> Result<DivergenceDiagnostic> {
    let pts = &curve.points;
    if pts.len() < 5 {
        return Err(invalid("the diagnostic needs at least 5 grid points"));
    }
    let (first, last) = (pts[0].n as f64, pts[pts.len() - 1].n as f64);
    if last / first < 100.0 {
        return Err(invalid("the grid must span at least two decades"));
    }
    if pts.iter().all(|p| p.median == 0.0) {
        return Ok(DivergenceDiagnostic {
            verdict: DiagnosticVerdict::Stabilising,
            slope: 0.0,
        });
    }
    let tail = &pts[pts.len() / 2..];
    let (xs, ys): (Vec<f64>, Vec<f64>) = tail
        .iter()
        .filter(|p| p.median > 0.0)
        .map(|p| ((p.n as f64).ln(), p.median.ln()))
        .unzip();
    let slope = linear_fit(&xs, &ys).map_or(0.0, |f| f.slope);
    let verdict = if slope < th.stabilising_below {
        DiagnosticVerdict::Stabilising
    } else if slope > th.growing_above {
        DiagnosticVerdict::Growing
    } else {
        DiagnosticVerdict::Ambiguous
    };
    Ok(DivergenceDiagnostic { verdict, slope })
}
