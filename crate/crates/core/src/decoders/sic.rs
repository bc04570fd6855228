use std::time::Instant;

use crate::channel::{ml_metric, ChannelRealization};
use crate::decoders::{DecodeResult, PhaseTimings};
use crate::error::Result;
use crate::modulation::ModulationScheme;
use crate::signal::{ComplexSample, PowerLevel};

/// Successive interference cancellation with hard nearest-point slicing.
///
/// Users are detected in descending `|h_k|^2` order (index order on equal
/// gains). Each stage slices the residual against `sqrt(P) h_k c` for every
/// constellation point `c` and subtracts the chosen contribution.
pub fn sic_decode(
    y: ComplexSample,
    channel: &ChannelRealization,
    p_tx: PowerLevel,
    scheme: &ModulationScheme,
) -> Result<DecodeResult> {
    let start = Instant::now();
    let gains = channel.gains();
    let mut order: Vec<usize> = (0..gains.len()).collect();
    order.sort_by(|&a, &b| {
        gains[b]
            .norm_sqr()
            .total_cmp(&gains[a].norm_sqr())
            .then(a.cmp(&b))
    });

    let amp = p_tx.amplitude();
    let points = scheme.constellation();
    let mut residual = y;
    let mut symbols = vec![ComplexSample::ZERO; gains.len()];
    for k in order {
        let scaled = gains[k] * amp;
        // points are in label order: first strict minimum wins ties
        let mut best = points[0];
        let mut best_dist = f64::INFINITY;
        for &c in points {
            let d = (residual - scaled * c).norm_sqr();
            if d < best_dist {
                best_dist = d;
                best = c;
            }
        }
        symbols[k] = best;
        residual = residual - scaled * best;
    }

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
