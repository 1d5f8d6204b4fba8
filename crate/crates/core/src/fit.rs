//! Least-squares line fits and doubling-increment trend tests.

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub rms_residual: f64,
    pub slope_stderr: f64,
}

/// Ordinary least squares y = intercept + slope·x. Needs two distinct x.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Option<LinearFit> {
    let n = xs.len().min(ys.len());
    if n < 2 {
        return None;
    }
    let nf = n as f64;
    let mx = xs[..n].iter().sum::<f64>() / nf;
    let my = ys[..n].iter().sum::<f64>() / nf;
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for i in 0..n {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if sxx <= 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss: f64 = (0..n)
        .map(|i| (ys[i] - intercept - slope * xs[i]).powi(2))
        .sum();
    let rms_residual = (ss / nf).sqrt();
    let slope_stderr = if n > 2 {
        (ss / (nf - 2.0) / sxx).sqrt()
    } else {
        0.0
    };
    Some(LinearFit {
        slope,
        intercept,
        rms_residual,
        slope_stderr,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Trend {
    Converges,
    Diverges,
    Undetermined,
}

/// Classifies a series from partial sums taken at doubling cut-offs
/// N, 2N, 4N, …: the log2-ratio of consecutive increments estimates the
/// decay exponent of the block sums.
pub fn doubling_trend(partials: &[f64]) -> (Trend, f64) {
    if partials.len() < 3 {
        return (Trend::Undetermined, f64::NAN);
    }
    let last = partials[partials.len() - 1];
    if last == 0.0 {
        return (Trend::Converges, f64::NEG_INFINITY);
    }
    if !last.is_finite() {
        return (Trend::Diverges, f64::INFINITY);
    }
    let k = partials.len();
    let i1 = partials[k - 2] - partials[k - 3];
    let i2 = partials[k - 1] - partials[k - 2];
    if i2 <= 0.0 {
        return (Trend::Converges, f64::NEG_INFINITY);
    }
    if i1 <= 0.0 {
        return (Trend::Undetermined, f64::NAN);
    }
    let e = (i2 / i1).log2();
    let trend = if e <= -0.05 {
        Trend::Converges
    } else if e >= -0.01 {
        Trend::Diverges
    } else {
        Trend::Undetermined
    };
    (trend, e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line() {
        let xs = [0.0, 1.0, 2.0, 3.0];
        let ys = [1.0, 3.0, 5.0, 7.0];
        let f = linear_fit(&xs, &ys).unwrap();
        assert!((f.slope - 2.0).abs() < 1e-14 && (f.intercept - 1.0).abs() < 1e-14);
        assert!(f.rms_residual < 1e-14);
    }

    #[test]
    fn harmonic_diverges_and_squares_converge() {
        let partial = |g: &dyn Fn(f64) -> f64| -> Vec<f64> {
            let mut out = Vec::new();
            let mut s = 0.0;
            let mut k = 1usize;
            for e in 4..16 {
                while k <= 1 << e {
                    s += g(k as f64);
                    k += 1;
                }
                out.push(s);
            }
            out
        };
        assert_eq!(doubling_trend(&partial(&|k| 1.0 / k)).0, Trend::Diverges);
        assert_eq!(
            doubling_trend(&partial(&|k| 1.0 / (k * k))).0,
            Trend::Converges
        );
    }
}
