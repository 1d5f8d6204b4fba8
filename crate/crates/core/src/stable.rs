//! Canonical α-stable analysis: the constants c_α and r_n, sphere moments,
//! the functionals Σ_n, Υ_n, Λ_n with their Jensen bounds, the tail
//! probability identity and the region verdict.
//!
//! Sphere integrals are Monte-Carlo means over ξ = g/|g| with g standard
//! Gaussian. One Gaussian vector per sample serves every truncation on the
//! grid, so the curves are coupled across n. Σ_n uses N^p = Σ ω^p|ξ|^p as a
//! control variate for N^α, since E N^p = A_n·E|ξ_1|^p is known.

use std::fmt::Write as _;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::besov::{BesovParams, IndexEnumeration};
use crate::error::{invalid, Error, Result};
use crate::exec::{map_range, Execution};
use crate::region::classify_point;
use crate::rng::{batch_count, batch_rng, batch_span};
use crate::special::{ln_gamma, sphere_coordinate_moment};
use crate::sum::NeumaierSum;

pub const DEFAULT_MC_SAMPLES: usize = 20_000;
pub const DEFAULT_INDEX_BUDGET: usize = 1 << 17;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StableConstants {
    pub c_alpha: f64,
    pub r_n: f64,
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 2.0 {
        Ok(())
    } else {
        Err(invalid(format!("alpha must lie in (0,2), got {alpha}")))
    }
}

/// c_α = −α cos(απ/2) Γ(−α), and π/2 at α = 1.
pub fn c_alpha(alpha: f64) -> f64 {
    alpha * crate::special::one_minus_cos_integral(alpha)
}

/// r_n = Γ(1/2)Γ((n+α)/2) / (Γ(n/2)Γ((1+α)/2)).
pub fn r_n(alpha: f64, n: usize) -> f64 {
    let n = n as f64;
    (ln_gamma(0.5) + ln_gamma((n + alpha) / 2.0)
        - ln_gamma(n / 2.0)
        - ln_gamma((1.0 + alpha) / 2.0))
    .exp()
}

pub fn stable_constants(alpha: f64, n: usize) -> Result<StableConstants> {
    check_alpha(alpha)?;
    if n == 0 {
        return Err(invalid("n must be at least 1"));
    }
    Ok(StableConstants {
        c_alpha: c_alpha(alpha),
        r_n: r_n(alpha, n),
    })
}

/// r_n^{p/2} · (E|ξ_1|^p)^{α/2}; bounded in n.
pub fn upsilon_bound_ratio(alpha: f64, p: f64, n: usize) -> f64 {
    (0.5 * p * r_n(alpha, n).ln() + 0.5 * alpha * sphere_coordinate_moment(n, p).ln()).exp()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentEstimate {
    pub p: f64,
    pub estimate: f64,
    pub stderr: f64,
    pub exact: f64,
}

impl MomentEstimate {
    /// |estimate − exact| within `k` standard errors (plus rounding slack).
    pub fn within(&self, k: f64) -> bool {
        (self.estimate - self.exact).abs() <= k * self.stderr + 1e-12 * self.exact
    }
}

fn gaussian_sphere_point<R: Rng>(rng: &mut R, buf: &mut [f64]) {
    let mut s2 = 0.0;
    for x in buf.iter_mut() {
        *x = rng.sample(StandardNormal);
        s2 += *x * *x;
    }
    let inv = 1.0 / s2.sqrt();
    for x in buf.iter_mut() {
        *x *= inv;
    }
}

/// `count` points uniform on the unit sphere of ℝ^n.
pub fn sphere_sample(n: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut out = Vec::with_capacity(count);
    for b in 0..batch_count(count) {
        let (lo, hi) = batch_span(count, b);
        let mut rng = batch_rng(seed, b as u64);
        for _ in lo..hi {
            let mut v = vec![0.0; n];
            gaussian_sphere_point(&mut rng, &mut v);
            out.push(v);
        }
    }
    out
}

/// Coordinate moments E|ξ_i|^p on the sphere of ℝ^n. Each sample
/// contributes the mean of |ξ_i|^p over its n coordinates.
pub fn sphere_moments(
    n: usize,
    ps: &[f64],
    count: usize,
    seed: u64,
    exec: Execution,
) -> Result<Vec<MomentEstimate>> {
    if n == 0 || count < 2 {
        return Err(invalid("need n ≥ 1 and at least two samples"));
    }
    let batches = map_range(exec, batch_count(count), |b| {
        let (lo, hi) = batch_span(count, b);
        let mut rng = batch_rng(seed, b as u64);
        let mut buf = vec![0.0; n];
        let mut acc = vec![(NeumaierSum::new(), NeumaierSum::new()); ps.len()];
        for _ in lo..hi {
            gaussian_sphere_point(&mut rng, &mut buf);
            for (k, &p) in ps.iter().enumerate() {
                let v = buf.iter().map(|x| abs_pow(*x, p)).sum::<f64>() / n as f64;
                acc[k].0.add(v);
                acc[k].1.add(v * v);
            }
        }
        acc
    });
    let m = count as f64;
    Ok(ps
        .iter()
        .enumerate()
        .map(|(k, &p)| {
            let mut s = NeumaierSum::new();
            let mut s2 = NeumaierSum::new();
            for b in &batches {
                s.merge(&b[k].0);
                s2.merge(&b[k].1);
            }
            let mean = s.value() / m;
            let var = ((s2.value() - m * mean * mean) / (m - 1.0)).max(0.0);
            MomentEstimate {
                p,
                estimate: mean,
                stderr: (var / m).sqrt(),
                exact: sphere_coordinate_moment(n, p),
            }
        })
        .collect())
}

#[inline]
fn abs_pow(x: f64, p: f64) -> f64 {
    let a = x.abs();
    if p == 2.0 {
        a * a
    } else if p == 3.0 {
        a * a * a
    } else if p == 4.0 {
        let b = a * a;
        b * b
    } else {
        a.powf(p)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StableRun {
    pub alpha: f64,
    pub params: BesovParams,
    pub enumeration: IndexEnumeration,
    /// Truncation sizes n, strictly increasing.
    pub grid: Vec<usize>,
    pub mc_samples: usize,
    pub seed: u64,
    pub execution: Execution,
}

/// Powers of two up to the budget (capped by the truncation), with the cap
/// itself appended when it is not a power of two.
pub fn geometric_grid(enumeration: &IndexEnumeration, budget: usize) -> Vec<usize> {
    let cap = enumeration.prefix_len(budget);
    let mut grid = Vec::new();
    let mut n = 1usize;
    while n <= cap {
        grid.push(n);
        match n.checked_mul(2) {
            Some(m) => n = m,
            None => break,
        }
    }
    if grid.last() != Some(&cap) && cap > 0 {
        grid.push(cap);
    }
    grid
}

impl StableRun {
    pub fn new(
        alpha: f64,
        params: BesovParams,
        enumeration: IndexEnumeration,
        budget: usize,
    ) -> Result<Self> {
        check_alpha(alpha)?;
        if enumeration.d != params.d {
            return Err(Error::DimensionMismatch(enumeration.d, params.d));
        }
        let grid = geometric_grid(&enumeration, budget);
        if grid.is_empty() {
            return Err(invalid("index budget must be positive"));
        }
        Ok(StableRun {
            alpha,
            params,
            enumeration,
            grid,
            mc_samples: DEFAULT_MC_SAMPLES,
            seed: 0,
            execution: Execution::default(),
        })
    }

    pub fn with_samples(mut self, samples: usize) -> Self {
        self.mc_samples = samples;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_execution(mut self, execution: Execution) -> Self {
        self.execution = execution;
        self
    }

    pub fn with_grid(mut self, grid: Vec<usize>) -> Result<Self> {
        if grid.is_empty() || grid[0] == 0 || grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(invalid("grid must be positive and strictly increasing"));
        }
        let cap = self.enumeration.prefix_len(*grid.last().unwrap_or(&0));
        if cap < *grid.last().unwrap_or(&0) {
            return Err(invalid("grid exceeds the truncation"));
        }
        self.grid = grid;
        Ok(self)
    }

    fn validate(&self) -> Result<()> {
        check_alpha(self.alpha)?;
        if self.mc_samples < 2 {
            return Err(invalid("need at least two Monte-Carlo samples"));
        }
        Ok(())
    }

    /// ω^p for the largest truncation on the grid.
    fn weight_powers(&self) -> Vec<f64> {
        let n = *self.grid.last().unwrap_or(&0);
        let p = self.params.p;
        self.enumeration
            .weights(&self.params, n)
            .into_iter()
            .map(|w| w.powf(p))
            .collect()
    }

    pub fn sphere_statistics(&self) -> Result<SphereStatistics> {
        self.validate()?;
        let wp = self.weight_powers();
        let acc = run_engine(self, &wp, false);
        Ok(self.finish(&wp, acc))
    }

    fn finish(&self, wp: &[f64], acc: EngineAcc) -> SphereStatistics {
        let p = self.params.p;
        let m = self.mc_samples as f64;
        let mut a = NeumaierSum::new();
        let mut start = 0;
        let mut points = Vec::with_capacity(self.grid.len());
        for (t, &n) in self.grid.iter().enumerate() {
            for &x in &wp[start..n] {
                a.add(x);
            }
            start = n;
            let a_n = a.value();
            let mp = sphere_coordinate_moment(n, p);
            let s = &acc.grid[t];
            let my = s.y.value() / m;
            let mz = s.z.value() / m;
            let vyy = ((s.yy.value() - m * my * my) / (m - 1.0)).max(0.0);
            let vzz = ((s.zz.value() - m * mz * mz) / (m - 1.0)).max(0.0);
            let vyz = (s.yz.value() - m * my * mz) / (m - 1.0);
            let b = if vzz > 0.0 { vyz / vzz } else { 0.0 };
            let mean = my - b * (mz - a_n * mp);
            let resid = (vyy - 2.0 * b * vyz + b * b * vzz).max(0.0);
            points.push(SpherePoint {
                n,
                a_n,
                coordinate_moment: mp,
                mean_norm_alpha: mean,
                stderr: (resid / m).sqrt(),
                plain_mean: my,
            });
        }
        SphereStatistics {
            alpha: self.alpha,
            p,
            points,
        }
    }
}

#[derive(Clone, Default)]
struct Moments {
    y: NeumaierSum,
    z: NeumaierSum,
    yy: NeumaierSum,
    zz: NeumaierSum,
    yz: NeumaierSum,
}

impl Moments {
    fn merge(&mut self, o: &Moments) {
        self.y.merge(&o.y);
        self.z.merge(&o.z);
        self.yy.merge(&o.yy);
        self.zz.merge(&o.zz);
        self.yz.merge(&o.yz);
    }
}

struct EngineAcc {
    grid: Vec<Moments>,
    /// Per grid point, per coordinate k < n: Σ ξ_k² N^{α−2} and its square.
    upsilon: Vec<(Vec<f64>, Vec<f64>)>,
}

fn run_engine(run: &StableRun, wp: &[f64], upsilon: bool) -> EngineAcc {
    let p = run.params.p;
    let alpha = run.alpha;
    let nmax = wp.len();
    let grid = &run.grid;
    let samples = run.mc_samples;
    let batches = map_range(run.execution, batch_count(samples), |b| {
        let (lo, hi) = batch_span(samples, b);
        let mut rng = batch_rng(run.seed, b as u64);
        let mut g = vec![0.0; nmax];
        let mut mom = vec![Moments::default(); grid.len()];
        let mut ups: Vec<(Vec<f64>, Vec<f64>)> = if upsilon {
            grid.iter().map(|&n| (vec![0.0; n], vec![0.0; n])).collect()
        } else {
            Vec::new()
        };
        for _ in lo..hi {
            for x in g.iter_mut() {
                *x = rng.sample(StandardNormal);
            }
            let mut sp = 0.0;
            let mut s2 = 0.0;
            let mut start = 0;
            for (t, &n) in grid.iter().enumerate() {
                for i in start..n {
                    let x = g[i];
                    sp += wp[i] * abs_pow(x, p);
                    s2 += x * x;
                }
                start = n;
                let np = sp / s2.powf(p / 2.0);
                let y = np.powf(alpha / p);
                let m = &mut mom[t];
                m.y.add(y);
                m.z.add(np);
                m.yy.add(y * y);
                m.zz.add(np * np);
                m.yz.add(y * np);
                if upsilon {
                    let f = np.powf((alpha - 2.0) / p) / s2;
                    let (acc, sq) = &mut ups[t];
                    for k in 0..n {
                        let v = g[k] * g[k] * f;
                        acc[k] += v;
                        sq[k] += v * v;
                    }
                }
            }
        }
        (mom, ups)
    });
    let mut grid_acc = vec![Moments::default(); grid.len()];
    let mut ups: Vec<(Vec<f64>, Vec<f64>)> = if upsilon {
        grid.iter().map(|&n| (vec![0.0; n], vec![0.0; n])).collect()
    } else {
        Vec::new()
    };
    for (mom, u) in &batches {
        for (a, m) in grid_acc.iter_mut().zip(mom) {
            a.merge(m);
        }
        for (dst, src) in ups.iter_mut().zip(u) {
            for (d, s) in dst.0.iter_mut().zip(&src.0) {
                *d += s;
            }
            for (d, s) in dst.1.iter_mut().zip(&src.1) {
                *d += s;
            }
        }
    }
    EngineAcc {
        grid: grid_acc,
        upsilon: ups,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpherePoint {
    pub n: usize,
    /// A_n = Σ^n ω^p.
    pub a_n: f64,
    /// E|ξ_1|^p on the sphere of ℝ^n.
    pub coordinate_moment: f64,
    /// Control-variate estimate of E N^α under the uniform probability.
    pub mean_norm_alpha: f64,
    pub stderr: f64,
    /// Plain sample mean of N^α.
    pub plain_mean: f64,
}

/// Shared Monte-Carlo draw behind Σ_n, Λ_n and the tail probability.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereStatistics {
    pub alpha: f64,
    pub p: f64,
    pub points: Vec<SpherePoint>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub n: usize,
    pub value: f64,
    pub lower: Option<f64>,
    pub upper: Option<f64>,
    pub mc_stderr: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FunctionalCurve {
    pub name: String,
    pub points: Vec<CurvePoint>,
}

pub const CURVE_CSV_HEADER: &str = "n,value,lower,upper,mc_stderr";

impl FunctionalCurve {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(CURVE_CSV_HEADER);
        out.push('\n');
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        for pt in &self.points {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                pt.n,
                pt.value,
                opt(pt.lower),
                opt(pt.upper),
                pt.mc_stderr
            );
        }
        out
    }

    pub fn last(&self) -> Option<&CurvePoint> {
        self.points.last()
    }

    /// |v_last − v_prev| / |v_last| over the final grid step.
    pub fn last_relative_change(&self) -> Option<f64> {
        let k = self.points.len();
        if k < 2 {
            return None;
        }
        let (a, b) = (self.points[k - 2].value, self.points[k - 1].value);
        Some((b - a).abs() / b.abs())
    }
}

impl SphereStatistics {
    pub fn sigma(&self) -> Result<FunctionalCurve> {
        let (a, p) = (self.alpha, self.p);
        if !(p > a) {
            return Err(invalid(format!("Σ_n needs p > alpha (p={p}, alpha={a})")));
        }
        let c = c_alpha(a);
        let k = p / (c * (p - a));
        let points = self
            .points
            .iter()
            .map(|pt| {
                let r = r_n(a, pt.n);
                CurvePoint {
                    n: pt.n,
                    value: k * r * pt.mean_norm_alpha,
                    lower: Some(k * pt.a_n.powf(a / p)),
                    upper: Some(k * r * (pt.a_n * pt.coordinate_moment).powf(a / p)),
                    mc_stderr: k * r * pt.stderr,
                }
            })
            .collect();
        Ok(FunctionalCurve {
            name: "sigma".into(),
            points,
        })
    }

    pub fn lambda(&self) -> Result<FunctionalCurve> {
        let (a, p) = (self.alpha, self.p);
        if !(p > 1.0 && p < 2.0) {
            return Err(invalid(format!("Λ_n needs p in (1,2), got {p}")));
        }
        let c = c_alpha(a);
        let k = 2.0 / (c * (2.0 - a));
        let points = self
            .points
            .iter()
            .map(|pt| {
                let r = r_n(a, pt.n);
                let concave = k * pt.a_n.powf(a / p);
                let convex = k * r * (pt.a_n * pt.coordinate_moment).powf(a / p);
                let (lower, upper) = if p >= a {
                    (concave, convex)
                } else {
                    (convex, concave)
                };
                CurvePoint {
                    n: pt.n,
                    value: k * r * pt.mean_norm_alpha,
                    lower: Some(lower),
                    upper: Some(upper),
                    mc_stderr: k * r * pt.stderr,
                }
            })
            .collect();
        Ok(FunctionalCurve {
            name: "lambda".into(),
            points,
        })
    }

    /// μ(‖P_n f‖ > R) evaluated directly as R^{−α} c_α^{−1} ∫ N^α dλ_n.
    pub fn tail(&self, radius: f64) -> Result<TailProbability> {
        if !(radius > 0.0) {
            return Err(invalid("radius must be positive"));
        }
        let a = self.alpha;
        let c = c_alpha(a);
        let scale = radius.powf(-a) / c;
        let direct = self
            .points
            .iter()
            .map(|pt| {
                let r = r_n(a, pt.n);
                CurvePoint {
                    n: pt.n,
                    value: scale * r * pt.mean_norm_alpha,
                    lower: None,
                    upper: None,
                    mc_stderr: scale * r * pt.stderr,
                }
            })
            .collect();
        let via_sigma = if self.p > a {
            let f = radius.powf(-a) * (self.p - a) / self.p;
            let sig = self.sigma()?;
            Some(FunctionalCurve {
                name: "tail_via_sigma".into(),
                points: sig
                    .points
                    .iter()
                    .map(|pt| CurvePoint {
                        n: pt.n,
                        value: f * pt.value,
                        lower: None,
                        upper: None,
                        mc_stderr: f * pt.mc_stderr,
                    })
                    .collect(),
            })
        } else {
            None
        };
        Ok(TailProbability {
            radius,
            direct: FunctionalCurve {
                name: "tail".into(),
                points: direct,
            },
            via_sigma,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TailProbability {
    pub radius: f64,
    pub direct: FunctionalCurve,
    /// R^{−α}(p−α)/p · Σ_n; absent when p ≤ α.
    pub via_sigma: Option<FunctionalCurve>,
}

pub fn sigma_n(run: &StableRun) -> Result<FunctionalCurve> {
    if !(run.params.p > run.alpha) {
        return Err(invalid("Σ_n needs p > alpha"));
    }
    run.sphere_statistics()?.sigma()
}

pub fn lambda_stat_n(run: &StableRun) -> Result<FunctionalCurve> {
    if !(run.params.p > 1.0 && run.params.p < 2.0) {
        return Err(invalid("Λ_n needs p in (1,2)"));
    }
    run.sphere_statistics()?.lambda()
}

pub fn tail_probability(run: &StableRun, radius: f64) -> Result<TailProbability> {
    run.sphere_statistics()?.tail(radius)
}

/// Υ_n with the Jensen–Hölder bound as `upper`. The per-coordinate
/// expectations E[ξ_k² N^{α−2}] are estimated separately for every k, so
/// the cost grows like the sum of the grid sizes per sample.
pub fn upsilon_n(run: &StableRun) -> Result<FunctionalCurve> {
    run.validate()?;
    let (a, p) = (run.alpha, run.params.p);
    if p < 2.0 {
        return Err(invalid(format!("Υ_n needs p ≥ 2, got {p}")));
    }
    let wp = run.weight_powers();
    let acc = run_engine(run, &wp, true);
    let stats = run.finish(
        &wp,
        EngineAcc {
            grid: acc.grid.clone(),
            upsilon: Vec::new(),
        },
    );
    let c = c_alpha(a);
    let pref = (a / (c * (2.0 - a))).powf(p / 2.0);
    let m = run.mc_samples as f64;
    let points = run
        .grid
        .iter()
        .zip(&acc.upsilon)
        .zip(&stats.points)
        .map(|((&n, (s, sq)), pt)| {
            let r = r_n(a, n);
            let mut total = NeumaierSum::new();
            let mut var = NeumaierSum::new();
            for k in 0..n {
                let mean = s[k] / m;
                let v = ((sq[k] - m * mean * mean) / (m - 1.0)).max(0.0) / m;
                let term = wp[k] * (r * mean).powf(p / 2.0);
                total.add(term);
                let deriv = wp[k] * (p / 2.0) * r.powf(p / 2.0) * mean.powf(p / 2.0 - 1.0);
                var.add(deriv * deriv * v);
            }
            CurvePoint {
                n,
                value: pref * total.value(),
                lower: None,
                upper: Some(pref * r.powf(p / 2.0) * (pt.a_n * pt.coordinate_moment).powf(a / 2.0)),
                mc_stderr: pref * var.value().sqrt(),
            }
        })
        .collect();
    Ok(FunctionalCurve {
        name: "upsilon".into(),
        points,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct StableVerdict {
    pub induced: bool,
    pub reason: String,
}

/// Induced iff s < −d/2 and w < −d/p; independent of α.
pub fn stable_verdict(params: &BesovParams, alpha: f64) -> Result<StableVerdict> {
    check_alpha(alpha)?;
    let region = classify_point(params)?;
    if !region.in_e_p {
        return Err(Error::OutsideRegion(format!(
            "(s,w)=({},{}) is outside E_p for p={}",
            params.s, params.w, params.p
        )));
    }
    let d = params.dim();
    let s_ok = params.s < -d / 2.0;
    let w_ok = params.w < -d / params.p;
    let reason = match (s_ok, w_ok) {
        (true, true) => format!("s < -d/2 = {} and w < -d/p = {}", -d / 2.0, -d / params.p),
        (false, _) => format!("s = {} ≥ -d/2 = {}", params.s, -d / 2.0),
        (true, false) => format!("w = {} ≥ -d/p = {}", params.w, -d / params.p),
    };
    Ok(StableVerdict {
        induced: s_ok && w_ok,
        reason,
    })
}
