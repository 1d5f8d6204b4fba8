//! Numerical quadrature: adaptive Gauss–Kronrod (21 points) and the
//! double-exponential tanh-sinh / exp-sinh rules for endpoint singularities.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::FRAC_PI_2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Interval budget for the adaptive Gauss–Kronrod rule.
    pub max_subdivisions: usize,
    /// Step-halving budget for the double-exponential rules.
    pub max_levels: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions {
            rel_tol: 1e-11,
            abs_tol: 0.0,
            max_subdivisions: 4000,
            max_levels: 12,
        }
    }
}

impl QuadOptions {
    pub fn with_rel_tol(mut self, tol: f64) -> Self {
        self.rel_tol = tol;
        self
    }

    fn done(&self, value: f64, err: f64) -> bool {
        err <= self.abs_tol.max(self.rel_tol * value.abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

fn qk21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[10];
    let mut gauss = 0.0;
    for i in 0..10 {
        let dx = h * XGK[i];
        let pair = f(c - dx) + f(c + dx);
        kron += WGK[i] * pair;
        if i % 2 == 1 {
            gauss += WG[i / 2] * pair;
        }
    }
    let value = kron * h;
    let err = ((kron - gauss) * h).abs();
    (value, err)
}

struct Piece {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.err.total_cmp(&other.err) == Ordering::Equal
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Piece {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

/// Globally adaptive 21-point Gauss–Kronrod on a finite interval.
pub fn gauss_kronrod<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, opts: &QuadOptions) -> Estimate {
    if a == b {
        return Estimate {
            value: 0.0,
            error: 0.0,
        };
    }
    let (value, err) = qk21(&f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Piece { a, b, value, err });
    let mut total = value;
    let mut total_err = err;
    let mut pieces = 1;
    while !opts.done(total, total_err) && pieces < opts.max_subdivisions {
        let worst = match heap.pop() {
            Some(p) => p,
            None => break,
        };
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            heap.push(worst);
            break;
        }
        let (v1, e1) = qk21(&f, worst.a, mid);
        let (v2, e2) = qk21(&f, mid, worst.b);
        total += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.err;
        heap.push(Piece {
            a: worst.a,
            b: mid,
            value: v1,
            err: e1,
        });
        heap.push(Piece {
            a: mid,
            b: worst.b,
            value: v2,
            err: e2,
        });
        pieces += 1;
    }
    // re-add to shed accumulated rounding in the running totals
    let mut value = crate::sum::NeumaierSum::new();
    let mut error = 0.0;
    for p in heap.iter() {
        value.add(p.value);
        error += p.err;
    }
    Estimate {
        value: value.value(),
        error,
    }
}

/// tanh-sinh rule on [a, b]; tolerates integrable endpoint singularities.
pub fn tanh_sinh<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, opts: &QuadOptions) -> Estimate {
    if a == b {
        return Estimate {
            value: 0.0,
            error: 0.0,
        };
    }
    let width = b - a;
    // node at t ≥ 0 contributes at both mirrored abscissae
    let node = |t: f64| -> Option<f64> {
        let u = FRAC_PI_2 * t.sinh();
        let e = (-2.0 * u).exp();
        let delta = e / (1.0 + e);
        let off = width * delta;
        let left = a + off;
        let right = b - off;
        let left_ok = left > a;
        let right_ok = right < b && t > 0.0;
        if !left_ok && !right_ok {
            return None;
        }
        let w = width * std::f64::consts::PI * t.cosh() * delta * (1.0 - delta);
        let mut s = 0.0;
        if left_ok {
            s += w * f(left);
        }
        if right_ok {
            s += w * f(right);
        }
        Some(if s.is_finite() { s } else { 0.0 })
    };
    let mut h = 1.0;
    let mut sum = crate::sum::NeumaierSum::new();
    let mut t = 0.0;
    while let Some(v) = node(t) {
        sum.add(v);
        t += h;
    }
    let mut prev = sum.value() * h;
    let mut error = f64::INFINITY;
    for level in 1..=opts.max_levels {
        h *= 0.5;
        let mut t = h;
        while let Some(v) = node(t) {
            sum.add(v);
            t += 2.0 * h;
        }
        let cur = sum.value() * h;
        error = (cur - prev).abs();
        prev = cur;
        if level >= 3 && opts.done(cur, error) {
            break;
        }
    }
    Estimate { value: prev, error }
}

/// exp-sinh rule on [a, ∞).
pub fn exp_sinh<F: Fn(f64) -> f64>(f: F, a: f64, opts: &QuadOptions) -> Estimate {
    let node = |t: f64| -> Option<f64> {
        let g = (FRAC_PI_2 * t.sinh()).exp();
        let x = a + g;
        if !(x > a) || !x.is_finite() {
            return None;
        }
        let w = FRAC_PI_2 * t.cosh() * g;
        if !w.is_finite() {
            return None;
        }
        let v = w * f(x);
        Some(if v.is_finite() { v } else { 0.0 })
    };
    let sweep = |start: f64, step: f64, sum: &mut crate::sum::NeumaierSum| {
        let mut t = start;
        while let Some(v) = node(t) {
            sum.add(v);
            t += step;
        }
        let mut t = -start;
        if start == 0.0 {
            t = -step;
        }
        while let Some(v) = node(t) {
            sum.add(v);
            t -= step;
        }
    };
    let mut h = 1.0;
    let mut sum = crate::sum::NeumaierSum::new();
    sweep(0.0, h, &mut sum);
    let mut prev = sum.value() * h;
    let mut error = f64::INFINITY;
    for level in 1..=opts.max_levels {
        h *= 0.5;
        sweep(h, 2.0 * h, &mut sum);
        let cur = sum.value() * h;
        error = (cur - prev).abs();
        prev = cur;
        if level >= 3 && opts.done(cur, error) {
            break;
        }
    }
    Estimate { value: prev, error }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gk_polynomial_and_oscillatory() {
        let o = QuadOptions::default();
        let r = gauss_kronrod(|x| x * x, 0.0, 3.0, &o);
        assert!((r.value - 9.0).abs() < 1e-13);
        let r = gauss_kronrod(|x| x.cos(), 0.0, 100.0, &o);
        assert!((r.value - 100f64.sin()).abs() < 1e-10);
    }

    #[test]
    fn tanh_sinh_endpoint_singularity() {
        let o = QuadOptions::default();
        let r = tanh_sinh(|x| x.powf(-0.9), 0.0, 1.0, &o);
        assert!((r.value - 10.0).abs() < 1e-8, "{:?}", r);
        let r = tanh_sinh(|x| (1.0 - x).ln(), 0.0, 1.0, &o);
        assert!((r.value + 1.0).abs() < 1e-12, "{:?}", r);
    }

    #[test]
    fn exp_sinh_algebraic_and_exponential_decay() {
        let o = QuadOptions::default();
        let r = exp_sinh(|x| x.powf(-2.2), 1.0, &o);
        assert!((r.value - 1.0 / 1.2).abs() < 1e-10, "{:?}", r);
        let r = exp_sinh(|x| (-x).exp(), 0.0, &o);
        assert!((r.value - 1.0).abs() < 1e-12, "{:?}", r);
        let r = exp_sinh(|x| x.powf(-0.5) * (-x).exp(), 0.0, &o);
        assert!(
            (r.value - std::f64::consts::PI.sqrt()).abs() < 1e-10,
            "{:?}",
            r
        );
    }
}
