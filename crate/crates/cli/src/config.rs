//! Flat key/value run configuration. The same struct backs the TOML file and
//! the command-line flags; precedence is flags > file > defaults.

use std::path::Path;

use besovlab::levy::LevyMeasure1D;
use besovlab::{BesovParams, IndexEnumeration, Truncation};
use clap::Args;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Default, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    /// Integrability exponent p > 1.
    #[arg(short = 'p', long = "p")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    /// Smoothness s.
    #[arg(short = 's', long = "s", allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<f64>,
    /// Weight exponent w.
    #[arg(short = 'w', long = "w", allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub w: Option<f64>,
    /// Dimension d.
    #[arg(short = 'd', long = "d")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<u32>,
    /// Stability index.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    /// Lévy measure: stable, tempered_stable, blended_stable, point_mass.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub measure: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub zeta: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha1: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha2: Option<f64>,
    /// Hedgehog norm rule: abstract, inverse_weight, positional, counterexample.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    /// Decay exponent of the hedgehog sequence k^{-gamma}.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    /// Decay exponent of separate abstract coefficients.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coef_gamma: Option<f64>,
    /// Witness exponent of the counterexample.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    /// Evaluate the Lévy-measure conditions (wavelet modes).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub conditions: Option<bool>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<f64>,
    /// τ method: analytic or numeric.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method: Option<String>,
    /// Simulation model: stable or hedgehog.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Monte-Carlo samples per grid point.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    /// Index budget (largest truncation).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub budget: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub replicas: Option<usize>,
    /// Also compute Υ_n.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub upsilon: Option<bool>,
    /// Tail radius R.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    /// Truncation shape: dyadic or uniform.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub truncation: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_scale: Option<u32>,
    /// Translation bound (uniform) or base (dyadic).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub translations: Option<u64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_min: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_max: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window_max: Option<f64>,
    /// Grid cells per axis.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub resolution: Option<usize>,
    /// Prefix of the output files.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

macro_rules! merge_fields {
    ($a:ident, $b:ident; $($f:ident),*) => {
        Config { $($f: $a.$f.or($b.$f)),* }
    };
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

impl Config {
    pub fn load(path: &Path) -> Result<Config, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
        toml::from_str(&text)
            .map_err(|e| usage(format!("malformed config {}: {e}", path.display())))
    }

    /// Fields of `self` win over `other`.
    pub fn over(self, other: Config) -> Config {
        let (a, b) = (self, other);
        merge_fields!(a, b; p, s, w, d, alpha, measure, zeta, alpha1, alpha2, mode, gamma, coef_gamma, theta,
            conditions, q, method, model, seed, samples, budget, replicas, upsilon, radius, truncation, max_scale,
            translations, p_min, p_max, window_min, window_max, resolution, name)
    }

    pub fn required(v: Option<f64>, key: &str) -> Result<f64, CliError> {
        v.ok_or_else(|| usage(format!("missing required parameter `{key}`")))
    }

    /// The resolved accessors below record their defaults in `self`, so the
    /// run record holds every value the command used.
    pub fn params(&mut self) -> Result<BesovParams, CliError> {
        let p = Self::required(self.p, "p")?;
        let s = Self::required(self.s, "s")?;
        let w = Self::required(self.w, "w")?;
        let d = *self.d.get_or_insert(1);
        Ok(BesovParams::new(p, s, w, d)?)
    }

    pub fn alpha(&self) -> Result<f64, CliError> {
        Self::required(self.alpha, "alpha")
    }

    pub fn seed(&mut self) -> u64 {
        *self.seed.get_or_insert(0)
    }

    pub fn budget(&mut self, default: usize) -> usize {
        *self.budget.get_or_insert(default)
    }

    pub fn name(&mut self, default: &str) -> String {
        self.name.get_or_insert_with(|| default.to_string()).clone()
    }

    pub fn enumeration(&mut self, d: u32) -> Result<IndexEnumeration, CliError> {
        let kind = self
            .truncation
            .get_or_insert_with(|| "dyadic".into())
            .clone();
        let truncation = match kind.as_str() {
            "dyadic" => {
                let j = *self.max_scale.get_or_insert(20);
                Truncation::dyadic(j, *self.translations.get_or_insert(1))
            }
            "uniform" => {
                let j = *self.max_scale.get_or_insert(0);
                Truncation::uniform(j, *self.translations.get_or_insert(1 << 16))
            }
            other => {
                return Err(usage(format!(
                    "unknown truncation `{other}` (dyadic or uniform)"
                )))
            }
        };
        Ok(IndexEnumeration::new(d, truncation)?)
    }

    pub fn measure(&mut self) -> Result<LevyMeasure1D, CliError> {
        let tag = self.measure.get_or_insert_with(|| "stable".into()).clone();
        let rho = match tag.as_str() {
            "stable" => LevyMeasure1D::stable(self.alpha()?)?,
            "tempered_stable" => {
                LevyMeasure1D::tempered_stable(Self::required(self.zeta, "zeta")?)?
            }
            "blended_stable" => LevyMeasure1D::blended_stable(
                Self::required(self.alpha1, "alpha1")?,
                Self::required(self.alpha2, "alpha2")?,
            )?,
            "point_mass" => LevyMeasure1D::PointMassAtOne,
            other => return Err(usage(format!("unknown measure tag `{other}`"))),
        };
        Ok(rho)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_win_over_file() {
        let file: Config = toml::from_str("p = 3.0\ns = -1.0\nalpha = 1.2\n").unwrap();
        let flags = Config {
            p: Some(2.5),
            ..Config::default()
        };
        let merged = flags.over(file);
        assert_eq!(merged.p, Some(2.5));
        assert_eq!(merged.s, Some(-1.0));
        assert_eq!(merged.alpha, Some(1.2));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(toml::from_str::<Config>("p = 3.0\nbogus = 1\n").is_err());
    }

    #[test]
    fn defaults_are_recorded() {
        let mut c = Config {
            p: Some(3.0),
            s: Some(-1.0),
            w: Some(-1.0),
            ..Config::default()
        };
        c.params().unwrap();
        c.enumeration(1).unwrap();
        assert_eq!(c.d, Some(1));
        assert_eq!(c.truncation.as_deref(), Some("dyadic"));
        assert_eq!(c.max_scale, Some(20));
    }
}
