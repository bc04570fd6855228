use std::time::Instant;

use num_complex::Complex64;

use crate::channel::{ml_metric, ChannelRealization};
use crate::decoders::{DecodeResult, PhaseTimings};
use crate::error::{Error, Result};
use crate::modulation::ModulationScheme;
use crate::signal::{ComplexSample, PowerLevel};

/// Default cap on the number of candidate symbol vectors (2^24).
pub const DEFAULT_MAX_EVALUATIONS: u64 = 1 << 24;

pub fn brute_force_ml(
    y: ComplexSample,
    channel: &ChannelRealization,
    p_tx: PowerLevel,
    scheme: &ModulationScheme,
) -> Result<DecodeResult> {
    brute_force_ml_with_limit(y, channel, p_tx, scheme, DEFAULT_MAX_EVALUATIONS)
}

/// Exhaustive ML search over every symbol vector.
///
/// Candidates are visited in mixed-radix order with user 0 most
/// significant, which is lexicographic order of the concatenated labels, so
/// keeping the first strict minimum implements the tie-break.
pub fn brute_force_ml_with_limit(
    y: ComplexSample,
    channel: &ChannelRealization,
    p_tx: PowerLevel,
    scheme: &ModulationScheme,
    max_evaluations: u64,
) -> Result<DecodeResult> {
    let start = Instant::now();
    let n = channel.n_users();
    let points = scheme.constellation();
    let radix = points.len();
    let evaluations = (radix as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if evaluations > max_evaluations as u128 {
        return Err(Error::InstanceTooLarge {
            evaluations,
            limit: max_evaluations,
        });
    }

    let amp = p_tx.amplitude();
    // contributions[k][s] = sqrt(P) h_k c_s
    let contributions: Vec<Vec<Complex64>> = channel
        .gains()
        .iter()
        .map(|h| points.iter().map(|c| amp * h.value() * c.value()).collect())
        .collect();

    let target = y.value();
    let mut digits = vec![0usize; n];
    let mut best = digits.clone();
    let mut best_metric = f64::INFINITY;
    for _ in 0..evaluations {
        let sum: Complex64 = digits
            .iter()
            .enumerate()
            .map(|(k, &d)| contributions[k][d])
            .sum();
        let metric = (target - sum).norm_sqr();
        if metric < best_metric {
            best_metric = metric;
            best.copy_from_slice(&digits);
        }
        // increment, least significant user last
        for d in digits.iter_mut().rev() {
            *d += 1;
            if *d < radix {
                break;
            }
            *d = 0;
        }
    }

    let symbols: Vec<ComplexSample> = best.iter().map(|&d| points[d]).collect();
    let qubits = scheme.symbols_to_qubits(&symbols)?;
    let metric = ml_metric(y, channel, p_tx, &symbols)?;
    Ok(DecodeResult {
        symbols,
        qubits,
        metric,
        timing: PhaseTimings {
            solve: start.elapsed(),
            ..Default::default()
        },
    })
}
