//! Simulated-annealing QUBO sampler standing in for an annealing QPU.
//!
//! Each read starts from a uniformly random vector and performs
//! `sweeps_per_read` Metropolis sweeps of single-bit flips while the inverse
//! temperature rises geometrically from `beta_min` to `beta_max`. Final
//! vectors are aggregated across reads into a [`SampleSet`].
//!
//! All reads draw from one generator in order, so the first `R` reads of a
//! longer run are exactly the reads of an `R`-read run with the same stream.

use std::collections::BTreeMap;
use std::time::Instant;

use rand::Rng;

use crate::channel::{ml_metric, ChannelRealization};
use crate::decoders::{DecodeResult, PhaseTimings};
use crate::error::{Error, Result};
use crate::modulation::{ModulationScheme, QubitVector};
use crate::qubo::{build_qubo_generic, QuboMatrix};
use crate::signal::{ComplexSample, PowerLevel, RandomStream};

pub const DEFAULT_READS: usize = 1000;
pub const DEFAULT_SWEEPS_PER_READ: usize = 64;
/// Hardware single-sample anneal time; carried as metadata only.
pub const DEFAULT_ANNEAL_TIME_US: f64 = 20.0;

/// Coefficients smaller than this fraction of the largest one are treated
/// as rounding residue when estimating the energy scale.
const NEGLIGIBLE_COEFFICIENT: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaSchedule {
    pub beta_min: f64,
    pub beta_max: f64,
}

impl BetaSchedule {
    pub fn new(beta_min: f64, beta_max: f64) -> Result<Self> {
        let s = Self { beta_min, beta_max };
        s.validate()?;
        Ok(s)
    }

    fn validate(&self) -> Result<()> {
        if !(self.beta_min.is_finite() && self.beta_max.is_finite())
            || self.beta_min <= 0.0
            || self.beta_min >= self.beta_max
        {
            return Err(Error::InvalidAnnealParams(format!(
                "beta range must satisfy 0 < beta_min < beta_max, got ({}, {})",
                self.beta_min, self.beta_max
            )));
        }
        Ok(())
    }

    /// Range derived from the coefficient magnitudes of `qubo`:
    /// `0.1 / mean|Q|` up to `10 / min|Q|` over the nonzero entries.
    pub fn for_qubo(qubo: &QuboMatrix) -> Self {
        let cutoff = qubo.max_abs_coefficient() * NEGLIGIBLE_COEFFICIENT;
        let mags: Vec<f64> = qubo
            .iter()
            .map(|(_, v)| v.abs())
            .filter(|&v| v > cutoff)
            .collect();
        if mags.is_empty() {
            return Self {
                beta_min: 0.1,
                beta_max: 10.0,
            };
        }
        let mean = mags.iter().sum::<f64>() / mags.len() as f64;
        let min = mags.iter().copied().fold(f64::INFINITY, f64::min);
        Self {
            beta_min: 0.1 / mean,
            beta_max: 10.0 / min,
        }
    }

    /// Inverse temperature of each sweep.
    pub fn betas(&self, sweeps: usize) -> Vec<f64> {
        if sweeps == 1 {
            return vec![self.beta_max];
        }
        let ratio = (self.beta_max / self.beta_min).powf(1.0 / (sweeps - 1) as f64);
        let mut beta = self.beta_min;
        (0..sweeps)
            .map(|k| {
                let b = if k + 1 == sweeps { self.beta_max } else { beta };
                beta *= ratio;
                b
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnnealParams {
    pub reads: usize,
    pub sweeps_per_read: usize,
    /// `None` derives the range from each problem's coefficients.
    pub beta_schedule: Option<BetaSchedule>,
    pub anneal_time_us: f64,
}

impl Default for AnnealParams {
    fn default() -> Self {
        Self {
            reads: DEFAULT_READS,
            sweeps_per_read: DEFAULT_SWEEPS_PER_READ,
            beta_schedule: None,
            anneal_time_us: DEFAULT_ANNEAL_TIME_US,
        }
    }
}

impl AnnealParams {
    pub fn validate(&self) -> Result<()> {
        if self.reads == 0 {
            return Err(Error::InvalidAnnealParams(
                "reads must be at least 1".into(),
            ));
        }
        if self.sweeps_per_read == 0 {
            return Err(Error::InvalidAnnealParams(
                "sweeps_per_read must be at least 1".into(),
            ));
        }
        if let Some(s) = &self.beta_schedule {
            s.validate()?;
        }
        if !self.anneal_time_us.is_finite() || self.anneal_time_us < 0.0 {
            return Err(Error::InvalidAnnealParams(
                "anneal_time_us must be finite and non-negative".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampleRecord {
    pub qubits: QubitVector,
    pub energy: f64,
    pub occurrences: usize,
}

/// Distinct annealer outputs, best first: ascending energy, then descending
/// occurrence count, then lexicographic qubit vector.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    pub records: Vec<SampleRecord>,
    pub reads: usize,
}

impl SampleSet {
    fn from_counts(
        qubo: &QuboMatrix,
        counts: BTreeMap<Vec<u8>, usize>,
        reads: usize,
    ) -> Result<Self> {
        let mut records = counts
            .into_iter()
            .map(|(bits, occurrences)| {
                Ok(SampleRecord {
                    energy: qubo.energy(&bits)?,
                    qubits: QubitVector::new(bits)?,
                    occurrences,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        records.sort_by(|a, b| {
            a.energy
                .total_cmp(&b.energy)
                .then(b.occurrences.cmp(&a.occurrences))
                .then_with(|| a.qubits.cmp(&b.qubits))
        });
        Ok(Self { records, reads })
    }

    pub fn best(&self) -> &SampleRecord {
        &self.records[0]
    }
}

/// `exp(-x)` falls below the 2^-53 resolution of a uniform draw, so the
/// uphill move is rejected without consuming randomness.
const NEGLIGIBLE_ACCEPTANCE: f64 = 53.0 * std::f64::consts::LN_2;

/// `u < exp(-x)` for `x > 0`, using `1 - x <= exp(-x) <= 1 / (1 + x)` to
/// skip the exponential in most cases.
#[inline]
fn metropolis(u: f64, x: f64) -> bool {
    if u < 1.0 - x {
        true
    } else if u * (1.0 + x) >= 1.0 {
        false
    } else {
        u < (-x).exp()
    }
}

pub fn anneal_qubo(
    qubo: &QuboMatrix,
    params: &AnnealParams,
    stream: &RandomStream,
) -> Result<SampleSet> {
    params.validate()?;
    let m = qubo.num_qubits();
    let schedule = params
        .beta_schedule
        .unwrap_or_else(|| BetaSchedule::for_qubo(qubo));
    let betas = schedule.betas(params.sweeps_per_read);

    let mut bias = vec![0.0; m];
    let mut coupling = vec![0.0; m * m];
    for ((i, j), v) in qubo.iter() {
        if i == j {
            bias[i] = v;
        } else {
            coupling[i * m + j] = v;
            coupling[j * m + i] = v;
        }
    }

    let mut rng = stream.rng();
    let mut counts: BTreeMap<Vec<u8>, usize> = BTreeMap::new();
    let mut state = vec![0u8; m];
    let mut field = vec![0.0; m];
    for _ in 0..params.reads {
        for s in state.iter_mut() {
            *s = rng.random::<bool>() as u8;
        }
        // field[i] = energy change of setting bit i to 1 from 0
        for i in 0..m {
            let row = &coupling[i * m..(i + 1) * m];
            field[i] = bias[i]
                + row
                    .iter()
                    .zip(&state)
                    .filter(|(_, &s)| s == 1)
                    .map(|(c, _)| c)
                    .sum::<f64>();
        }
        for &beta in &betas {
            for i in 0..m {
                let delta = if state[i] == 0 { field[i] } else { -field[i] };
                let x = beta * delta;
                let accept =
                    x <= 0.0 || (x < NEGLIGIBLE_ACCEPTANCE && metropolis(rng.random::<f64>(), x));
                if accept {
                    state[i] ^= 1;
                    let row = &coupling[i * m..(i + 1) * m];
                    if state[i] == 1 {
                        field.iter_mut().zip(row).for_each(|(f, c)| *f += c);
                    } else {
                        field.iter_mut().zip(row).for_each(|(f, c)| *f -= c);
                    }
                }
            }
        }
        // Bits whose flip leaves the energy unchanged settle at 0, so
        // degenerate plateaus read out as their smallest label.
        for i in 0..m {
            if state[i] == 1 && field[i] == 0.0 {
                state[i] = 0;
                let row = &coupling[i * m..(i + 1) * m];
                field.iter_mut().zip(row).for_each(|(f, c)| *f -= c);
            }
        }
        *counts.entry(state.clone()).or_insert(0) += 1;
    }
    SampleSet::from_counts(qubo, counts, params.reads)
}

/// Generic QUBO construction, annealing and best-sample readout. The
/// reported metric is recomputed from the decided symbols.
pub fn decode_via_annealer(
    y: ComplexSample,
    channel: &ChannelRealization,
    p_tx: PowerLevel,
    scheme: &ModulationScheme,
    params: &AnnealParams,
    stream: &RandomStream,
) -> Result<DecodeResult> {
    let start = Instant::now();
    let qubo = build_qubo_generic(y, channel, p_tx, scheme)?;
    let built = Instant::now();
    let samples = anneal_qubo(&qubo, params, stream)?;
    let solved = Instant::now();
    let qubits = samples.best().qubits.clone();
    let symbols = scheme.qubits_to_symbols(&qubits)?;
    let metric = ml_metric(y, channel, p_tx, &symbols)?;
    Ok(DecodeResult {
        symbols,
        qubits,
        metric,
        timing: PhaseTimings {
            build: built - start,
            solve: solved - built,
            readout: solved.elapsed(),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{place_users, sample_channel, superimpose};
    use crate::decoders::{brute_force_ml, exhaustive_qubo};
    use crate::modulation::{random_symbols, ModulationKind};
    use rand_distr::StandardNormal;

    fn random_qubo(m: usize, seed: u64) -> QuboMatrix {
        let mut rng = RandomStream::new(seed, 0).rng();
        let mut q = QuboMatrix::new(m);
        for i in 0..m {
            for j in i..m {
                q.add(i, j, rng.sample::<f64, _>(StandardNormal)).unwrap();
            }
        }
        q
    }

    fn check_ordering(set: &SampleSet) {
        assert_eq!(
            set.records.iter().map(|r| r.occurrences).sum::<usize>(),
            set.reads
        );
        for w in set.records.windows(2) {
            let (a, b) = (&w[0], &w[1]);
            assert!(
                a.energy < b.energy
                    || (a.energy == b.energy
                        && (a.occurrences > b.occurrences
                            || (a.occurrences == b.occurrences && a.qubits < b.qubits)))
            );
        }
    }

    #[test]
    fn single_qubit_landscape() {
        let mut q = QuboMatrix::new(1);
        q.add(0, 0, -4.0).unwrap();
        q.set_offset(1.5).unwrap();
        let params = AnnealParams {
            reads: 100,
            ..Default::default()
        };
        let set = anneal_qubo(&q, &params, &RandomStream::new(1, 0)).unwrap();
        assert_eq!(set.best().qubits.as_slice(), &[1]);
        assert_eq!(set.best().energy, -4.0 + 1.5);
        check_ordering(&set);
    }

    #[test]
    fn flat_landscape_returns_offset() {
        let mut q = QuboMatrix::new(3);
        q.set_offset(0.25).unwrap();
        let set = anneal_qubo(&q, &AnnealParams::default(), &RandomStream::new(2, 0)).unwrap();
        assert!(set.records.iter().all(|r| r.energy == 0.25));
        check_ordering(&set);
        // with equal energies the most frequent vector leads
        assert!(set
            .records
            .windows(2)
            .all(|w| w[0].occurrences >= w[1].occurrences));
    }

    #[test]
    fn invalid_params() {
        let q = QuboMatrix::new(2);
        let s = RandomStream::new(0, 0);
        for p in [
            AnnealParams {
                reads: 0,
                ..Default::default()
            },
            AnnealParams {
                sweeps_per_read: 0,
                ..Default::default()
            },
            AnnealParams {
                beta_schedule: Some(BetaSchedule {
                    beta_min: 2.0,
                    beta_max: 1.0,
                }),
                ..Default::default()
            },
            AnnealParams {
                beta_schedule: Some(BetaSchedule {
                    beta_min: 0.0,
                    beta_max: 1.0,
                }),
                ..Default::default()
            },
        ] {
            assert!(matches!(
                anneal_qubo(&q, &p, &s),
                Err(Error::InvalidAnnealParams(_))
            ));
        }
        assert!(BetaSchedule::new(0.5, 0.5).is_err());
    }

    #[test]
    fn schedule_is_geometric() {
        let s = BetaSchedule::new(0.1, 10.0).unwrap();
        let b = s.betas(3);
        assert!((b[0] - 0.1).abs() < 1e-15);
        assert!((b[1] - 1.0).abs() < 1e-12);
        assert_eq!(b[2], 10.0);
        assert_eq!(s.betas(1), vec![10.0]);
    }

    #[test]
    fn auto_schedule_ignores_rounding_residue() {
        let mut q = QuboMatrix::new(3);
        q.add(0, 0, -2.0).unwrap();
        q.add(1, 1, 4.0).unwrap();
        q.add(0, 1, 1e-20).unwrap();
        let s = BetaSchedule::for_qubo(&q);
        assert!((s.beta_min - 0.1 / 3.0).abs() < 1e-15);
        assert!((s.beta_max - 5.0).abs() < 1e-15);
        let empty = BetaSchedule::for_qubo(&QuboMatrix::new(2));
        assert_eq!((empty.beta_min, empty.beta_max), (0.1, 10.0));
    }

    #[test]
    fn deterministic_and_nested() {
        let q = random_qubo(8, 3);
        let s = RandomStream::new(9, 4);
        let short = AnnealParams {
            reads: 50,
            ..Default::default()
        };
        let long = AnnealParams {
            reads: 200,
            ..Default::default()
        };
        let a = anneal_qubo(&q, &short, &s).unwrap();
        assert_eq!(a, anneal_qubo(&q, &short, &s).unwrap());
        let b = anneal_qubo(&q, &long, &s).unwrap();
        assert!(b.best().energy <= a.best().energy);
        check_ordering(&b);
    }

    #[test]
    fn never_beats_exhaustive_minimum() {
        for seed in 0..20 {
            let q = random_qubo(7, 100 + seed);
            let (_, min) = exhaustive_qubo(&q).unwrap();
            let params = AnnealParams {
                reads: 100,
                ..Default::default()
            };
            let set = anneal_qubo(&q, &params, &RandomStream::new(seed, 0)).unwrap();
            assert!(set.records.iter().all(|r| r.energy >= min));
            check_ordering(&set);
        }
    }

    #[test]
    fn annealer_matches_brute_force_on_easy_instances() {
        let bpsk = ModulationScheme::new(ModulationKind::Bpsk);
        let dep = place_users(3).unwrap();
        let p = PowerLevel::from_dbm(14.0).unwrap();
        for t in 0..20 {
            let stream = RandomStream::new(31, t);
            let mut rng = stream.rng();
            let ch = sample_channel(&mut rng, &dep).unwrap();
            let s = random_symbols(&bpsk, 3, &mut rng);
            let y = superimpose(&s, &ch, p, ComplexSample::ZERO).unwrap();
            let bf = brute_force_ml(y, &ch, p, &bpsk).unwrap();
            let qa =
                decode_via_annealer(y, &ch, p, &bpsk, &AnnealParams::default(), &stream).unwrap();
            assert_eq!(qa.symbols, bf.symbols);
            let again =
                decode_via_annealer(y, &ch, p, &bpsk, &AnnealParams::default(), &stream).unwrap();
            assert!(qa.same_decision(&again));
        }
    }

    #[test]
    fn zero_power_gives_tie_break_vector() {
        let bpsk = ModulationScheme::new(ModulationKind::Bpsk);
        let ch = ChannelRealization::from_gains(vec![ComplexSample::real(0.01); 3]).unwrap();
        let p = PowerLevel::from_mw(0.0).unwrap();
        let r = decode_via_annealer(
            ComplexSample::ZERO,
            &ch,
            p,
            &bpsk,
            &AnnealParams::default(),
            &RandomStream::new(0, 0),
        )
        .unwrap();
        assert_eq!(r.qubits, QubitVector::zeros(3));
        assert_eq!(r.metric, 0.0);
    }
}
