use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::harness::{run_ber_sweep_with_width, BerRecord, SimulationConfig};

#[derive(Debug, Clone)]
pub struct BatchItem {
    pub records: Vec<BerRecord>,
    pub wall_clock: Duration,
}

/// Runs independent experiments with up to `width` in flight. Each
/// experiment runs single-threaded inside its slot, and results come back
/// in input order, identical to a sequential run.
pub fn run_parallel_batch(configs: &[SimulationConfig], width: usize) -> Result<Vec<BatchItem>> {
    if width == 0 {
        return Err(Error::Config("batch width must be at least 1".into()));
    }
    let job = |config: &SimulationConfig| {
        let start = Instant::now();
        let records = run_ber_sweep_with_width(config, 1)?;
        Ok(BatchItem {
            records,
            wall_clock: start.elapsed(),
        })
    };
    if width == 1 {
        return configs.iter().map(job).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(width)
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
    pool.install(|| configs.par_iter().map(job).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decoders::{AnnealParams, DecoderKind};

    fn config(seed: u64) -> SimulationConfig {
        SimulationConfig {
            power_dbm_list: vec![0.0, 14.0],
            trials: 30,
            seed,
            decoders: vec![DecoderKind::BruteForce, DecoderKind::Annealer],
            anneal: AnnealParams {
                reads: 16,
                ..Default::default()
            },
            ..Default::default()
        }
    }

    #[test]
    fn batch_matches_sequential() {
        let configs: Vec<_> = (0..5).map(config).collect();
        let narrow = run_parallel_batch(&configs, 1).unwrap();
        let wide = run_parallel_batch(&configs, 5).unwrap();
        assert_eq!(narrow.len(), 5);
        for ((a, b), c) in narrow.iter().zip(&wide).zip(&configs) {
            assert_eq!(a.records, b.records);
            assert_eq!(a.records, run_ber_sweep_with_width(c, 1).unwrap());
        }
    }

    #[test]
    fn zero_width_is_rejected() {
        assert!(run_parallel_batch(&[config(0)], 0).is_err());
    }

    #[test]
    fn errors_propagate() {
        let bad = SimulationConfig {
            trials: 0,
            ..config(1)
        };
        assert!(run_parallel_batch(&[config(0), bad], 2).is_err());
    }
}
