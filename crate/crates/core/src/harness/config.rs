use std::path::Path;

use serde::Deserialize;

use crate::decoders::{AnnealParams, BetaSchedule, DecoderKind};
use crate::error::{Error, Result};
use crate::modulation::ModulationKind;

pub const DEFAULT_PARALLEL_WIDTH: usize = 5;
pub const THREADS_ENV: &str = "NOMA_QUBO_THREADS";

/// One Monte-Carlo experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationConfig {
    pub n_users: usize,
    pub scheme: ModulationKind,
    pub power_dbm_list: Vec<f64>,
    pub noise_dbm: f64,
    pub tau: f64,
    pub trials: u64,
    pub seed: u64,
    pub decoders: Vec<DecoderKind>,
    pub anneal: AnnealParams,
    pub parallel_width: usize,
    /// Fill `mean_decode_ns` with measured wall-clock. Off by default so
    /// that sweep output is a pure function of the configuration.
    pub record_timing: bool,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        Self {
            n_users: 3,
            scheme: ModulationKind::Bpsk,
            power_dbm_list: vec![10.0],
            noise_dbm: -30.0,
            tau: 2.0,
            trials: 1000,
            seed: 0,
            decoders: vec![DecoderKind::BruteForce],
            anneal: AnnealParams::default(),
            parallel_width: DEFAULT_PARALLEL_WIDTH,
            record_timing: false,
        }
    }
}

/// On-disk layout: a flat TOML table. Anneal parameters use an `anneal_`
/// prefix; the two beta bounds must be given together or not at all.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    n_users: usize,
    scheme: String,
    power_dbm_list: Vec<f64>,
    trials: u64,
    decoders: Vec<String>,
    noise_dbm: Option<f64>,
    tau: Option<f64>,
    seed: Option<u64>,
    anneal_reads: Option<usize>,
    anneal_sweeps_per_read: Option<usize>,
    anneal_beta_min: Option<f64>,
    anneal_beta_max: Option<f64>,
    anneal_time_us: Option<f64>,
    parallel_width: Option<usize>,
    record_timing: Option<bool>,
}

impl SimulationConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let raw: ConfigFile = toml::from_str(text)?;
        let defaults = Self::default();
        let anneal_defaults = AnnealParams::default();
        let beta_schedule = match (raw.anneal_beta_min, raw.anneal_beta_max) {
            (None, None) => None,
            (Some(lo), Some(hi)) => Some(BetaSchedule::new(lo, hi)?),
            _ => {
                return Err(Error::Config(
                    "anneal_beta_min and anneal_beta_max must be set together".into(),
                ))
            }
        };
        let config = Self {
            n_users: raw.n_users,
            scheme: raw.scheme.parse()?,
            power_dbm_list: raw.power_dbm_list,
            noise_dbm: raw.noise_dbm.unwrap_or(defaults.noise_dbm),
            tau: raw.tau.unwrap_or(defaults.tau),
            trials: raw.trials,
            seed: raw.seed.unwrap_or(defaults.seed),
            decoders: raw
                .decoders
                .iter()
                .map(|d| d.parse())
                .collect::<Result<Vec<_>>>()?,
            anneal: AnnealParams {
                reads: raw.anneal_reads.unwrap_or(anneal_defaults.reads),
                sweeps_per_read: raw
                    .anneal_sweeps_per_read
                    .unwrap_or(anneal_defaults.sweeps_per_read),
                beta_schedule,
                anneal_time_us: raw.anneal_time_us.unwrap_or(anneal_defaults.anneal_time_us),
            },
            parallel_width: raw.parallel_width.unwrap_or(defaults.parallel_width),
            record_timing: raw.record_timing.unwrap_or(defaults.record_timing),
        };
        config.validate()?;
        Ok(config)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| {
            Error::Config(format!("cannot read config file {}: {e}", path.display()))
        })?;
        Self::from_toml_str(&text)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_users == 0 {
            return Err(Error::InvalidUserCount(0));
        }
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        if self.power_dbm_list.is_empty() {
            return Err(Error::Config("power_dbm_list must not be empty".into()));
        }
        if self.power_dbm_list.iter().any(|p| !p.is_finite()) || !self.noise_dbm.is_finite() {
            return Err(Error::Config("power levels must be finite".into()));
        }
        if !self.tau.is_finite() || self.tau < 0.0 {
            return Err(Error::Config("tau must be finite and non-negative".into()));
        }
        if self.decoders.is_empty() {
            return Err(Error::Config("decoders must not be empty".into()));
        }
        let mut seen = self.decoders.clone();
        seen.sort();
        seen.dedup();
        if seen.len() != self.decoders.len() {
            return Err(Error::Config("decoders must not repeat".into()));
        }
        if self.parallel_width == 0 {
            return Err(Error::Config("parallel_width must be at least 1".into()));
        }
        self.anneal.validate()
    }

    /// Worker count after applying the `NOMA_QUBO_THREADS` override.
    pub fn effective_width(&self) -> Result<usize> {
        match std::env::var(THREADS_ENV) {
            Ok(v) => match v.trim().parse::<usize>() {
                Ok(n) if n >= 1 => Ok(n),
                _ => Err(Error::Config(format!(
                    "{THREADS_ENV} must be a positive integer, got `{v}`"
                ))),
            },
            Err(_) => Ok(self.parallel_width),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
n_users = 3
scheme = "bpsk"
power_dbm_list = [-30.0, 14.0]
trials = 10
decoders = ["bf", "qa"]
"#;

    #[test]
    fn minimal_config_fills_defaults() {
        let c = SimulationConfig::from_toml_str(MINIMAL).unwrap();
        assert_eq!(c.n_users, 3);
        assert_eq!(
            c.decoders,
            vec![DecoderKind::BruteForce, DecoderKind::Annealer]
        );
        assert_eq!(c.noise_dbm, -30.0);
        assert_eq!(c.tau, 2.0);
        assert_eq!(c.parallel_width, 5);
        assert_eq!(c.anneal, AnnealParams::default());
        assert!(!c.record_timing);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let text = format!("{MINIMAL}\nnoise_dmb = -60.0\n");
        assert!(matches!(
            SimulationConfig::from_toml_str(&text),
            Err(Error::ConfigParse(_))
        ));
    }

    #[test]
    fn bad_values_are_rejected() {
        let cases = [
            MINIMAL.replace("trials = 10", "trials = 0"),
            MINIMAL.replace("[-30.0, 14.0]", "[]"),
            MINIMAL.replace(r#"["bf", "qa"]"#, "[]"),
            MINIMAL.replace(r#"["bf", "qa"]"#, r#"["bf", "bf"]"#),
            MINIMAL.replace(r#"["bf", "qa"]"#, r#"["ml"]"#),
            MINIMAL.replace("\"bpsk\"", "\"8psk\""),
            MINIMAL.replace("n_users = 3", "n_users = 0"),
            format!("{MINIMAL}anneal_beta_min = 1.0\n"),
            format!("{MINIMAL}anneal_beta_min = 2.0\nanneal_beta_max = 1.0\n"),
            format!("{MINIMAL}anneal_reads = 0\n"),
            format!("{MINIMAL}parallel_width = 0\n"),
        ];
        for text in cases {
            assert!(SimulationConfig::from_toml_str(&text).is_err(), "{text}");
        }
    }

    #[test]
    fn full_config() {
        let text = format!(
            "{MINIMAL}noise_dbm = -60.0\ntau = 3.0\nseed = 99\nanneal_reads = 10\nanneal_sweeps_per_read = 8\nanneal_beta_min = 0.5\nanneal_beta_max = 5.0\nanneal_time_us = 1.0\nparallel_width = 2\nrecord_timing = true\n"
        );
        let c = SimulationConfig::from_toml_str(&text).unwrap();
        assert_eq!(c.seed, 99);
        assert_eq!(c.anneal.reads, 10);
        assert_eq!(
            c.anneal.beta_schedule,
            Some(BetaSchedule::new(0.5, 5.0).unwrap())
        );
        assert!(c.record_timing);
    }

    #[test]
    fn missing_file_is_a_config_error() {
        let err = SimulationConfig::from_path("/nonexistent/sweep.toml").unwrap_err();
        assert!(err.to_string().contains("/nonexistent/sweep.toml"));
    }
}
