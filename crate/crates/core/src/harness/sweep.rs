//! Monte-Carlo BER sweeps.
//!
//! Trial `t` at power index `p` draws everything from stream
//! `t * |powers| + p` of the configured seed: first the channel, then the
//! symbols, then the noise. All decoders see the same instance. The
//! annealer samples from a sibling stream. Per-trial outcomes are integer
//! counts summed after collection, so results do not depend on how trials
//! are scheduled over workers.

use std::time::Duration;

use rayon::prelude::*;

use crate::channel::{sample_channel, superimpose, Deployment};
use crate::decoders::{Decoder, DecoderKind, PhaseTimings};
use crate::error::{Error, Result};
use crate::harness::SimulationConfig;
use crate::modulation::{count_bit_errors, random_symbols, ModulationScheme};
use crate::signal::{dbm_to_linear, sample_circular_gaussian, PowerLevel, RandomStream};

/// Tag mixed into the trial seed for the annealer's sampling stream.
pub const ANNEAL_STREAM_TAG: u64 = 0x5141_414E_4E45_414C;

#[derive(Debug, Clone, PartialEq)]
pub struct BerRecord {
    pub power_dbm: f64,
    pub user_index: usize,
    pub decoder: DecoderKind,
    pub trials: u64,
    pub bit_errors: u64,
    pub ber: f64,
    pub mean_decode_ns: u64,
}

/// Result of one trial: bit errors per (decoder, user) and the phase
/// timings of each decoder.
#[derive(Debug, Clone)]
pub(crate) struct TrialOutcome {
    pub errors: Vec<u32>,
    pub timings: Vec<PhaseTimings>,
}

struct SweepContext {
    config: SimulationConfig,
    scheme: ModulationScheme,
    deployment: Deployment,
    decoders: Vec<Box<dyn Decoder>>,
    powers: Vec<PowerLevel>,
    noise_variance: f64,
}

impl SweepContext {
    fn new(config: &SimulationConfig) -> Result<Self> {
        config.validate()?;
        let deployment =
            crate::channel::place_users(config.n_users)?.with_path_loss_exponent(config.tau)?;
        Ok(Self {
            scheme: ModulationScheme::new(config.scheme),
            deployment,
            decoders: config
                .decoders
                .iter()
                .map(|d| d.instantiate(&config.anneal))
                .collect(),
            powers: config
                .power_dbm_list
                .iter()
                .map(|&p| PowerLevel::from_dbm(p))
                .collect::<Result<_>>()?,
            noise_variance: dbm_to_linear(config.noise_dbm),
            config: config.clone(),
        })
    }

    fn stream(&self, power_index: usize, trial: u64) -> RandomStream {
        RandomStream::new(
            self.config.seed,
            trial * self.powers.len() as u64 + power_index as u64,
        )
    }

    fn run_trial(&self, power_index: usize, trial: u64) -> Result<TrialOutcome> {
        let stream = self.stream(power_index, trial);
        let mut rng = stream.rng();
        let channel = sample_channel(&mut rng, &self.deployment)?;
        let sent = random_symbols(&self.scheme, self.config.n_users, &mut rng);
        let noise = sample_circular_gaussian(&mut rng, self.noise_variance)?;
        let p = self.powers[power_index];
        let y = superimpose(&sent, &channel, p, noise)?;

        let anneal_stream = stream.derive(ANNEAL_STREAM_TAG);
        let n = self.config.n_users;
        let mut errors = Vec::with_capacity(self.decoders.len() * n);
        let mut timings = Vec::with_capacity(self.decoders.len());
        for decoder in &self.decoders {
            let result = decoder.decode(y, &channel, p, &self.scheme, &anneal_stream)?;
            for (k, &s) in sent.iter().enumerate() {
                errors
                    .push(count_bit_errors(&self.scheme, &[s], &result.symbols[k..k + 1])? as u32);
            }
            timings.push(result.timing);
        }
        Ok(TrialOutcome { errors, timings })
    }

    /// Outcomes indexed by `power_index * trials + trial`.
    fn run_all(&self, width: usize) -> Result<Vec<TrialOutcome>> {
        let trials = self.config.trials;
        let items = self.powers.len() as u64 * trials;
        let job = |item: u64| self.run_trial((item / trials) as usize, item % trials);
        if width <= 1 {
            return (0..items).map(job).collect();
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(width)
            .build()
            .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
        pool.install(|| (0..items).into_par_iter().map(job).collect())
    }

    fn records(&self, outcomes: &[TrialOutcome]) -> Vec<BerRecord> {
        let trials = self.config.trials;
        let n = self.config.n_users;
        let bits = self.scheme.qubits_per_symbol() as u64;
        let mut records = Vec::new();
        for (pi, power) in self.config.power_dbm_list.iter().enumerate() {
            let chunk = &outcomes[pi * trials as usize..(pi + 1) * trials as usize];
            for (di, decoder) in self.config.decoders.iter().enumerate() {
                let mean_decode_ns = if self.config.record_timing {
                    let total: u128 = chunk.iter().map(|o| o.timings[di].total().as_nanos()).sum();
                    (total / trials as u128) as u64
                } else {
                    0
                };
                for user in 0..n {
                    let bit_errors: u64 =
                        chunk.iter().map(|o| o.errors[di * n + user] as u64).sum();
                    records.push(BerRecord {
                        power_dbm: *power,
                        user_index: user,
                        decoder: *decoder,
                        trials,
                        bit_errors,
                        ber: bit_errors as f64 / (trials * bits) as f64,
                        mean_decode_ns,
                    });
                }
            }
        }
        records
    }
}

/// Runs the sweep with the configured worker count (or `NOMA_QUBO_THREADS`).
/// Records are ordered by power, then decoder, then user.
pub fn run_ber_sweep(config: &SimulationConfig) -> Result<Vec<BerRecord>> {
    run_ber_sweep_with_width(config, config.effective_width()?)
}

/// As [`run_ber_sweep`] with an explicit worker count.
pub fn run_ber_sweep_with_width(config: &SimulationConfig, width: usize) -> Result<Vec<BerRecord>> {
    let ctx = SweepContext::new(config)?;
    let outcomes = ctx.run_all(width)?;
    Ok(ctx.records(&outcomes))
}

/// One decode's phase timings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimingSample {
    pub decoder: DecoderKind,
    pub timing: PhaseTimings,
}

/// Runs every trial of `config` on the calling thread and keeps the
/// per-decode timings.
pub fn collect_timings(config: &SimulationConfig) -> Result<Vec<TimingSample>> {
    let ctx = SweepContext::new(config)?;
    let outcomes = ctx.run_all(1)?;
    Ok(outcomes
        .iter()
        .flat_map(|o| {
            config
                .decoders
                .iter()
                .zip(&o.timings)
                .map(|(&decoder, &timing)| TimingSample { decoder, timing })
        })
        .collect())
}

/// Mean total decode time per decoder from sweep records carrying timings.
pub fn mean_decode_times(records: &[BerRecord]) -> Vec<(DecoderKind, Duration)> {
    let mut out: Vec<(DecoderKind, u128, u128)> = Vec::new();
    for r in records.iter().filter(|r| r.user_index == 0) {
        match out.iter_mut().find(|(d, _, _)| *d == r.decoder) {
            Some(e) => {
                e.1 += r.mean_decode_ns as u128;
                e.2 += 1;
            }
            None => out.push((r.decoder, r.mean_decode_ns as u128, 1)),
        }
    }
    out.into_iter()
        .map(|(d, sum, n)| (d, Duration::from_nanos((sum / n) as u64)))
        .collect()
}
