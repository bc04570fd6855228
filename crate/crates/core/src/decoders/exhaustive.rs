use std::time::Instant;

use crate::channel::{ml_metric, ChannelRealization};
use crate::decoders::{DecodeResult, PhaseTimings};
use crate::error::{Error, Result};
use crate::modulation::{ModulationScheme, QubitVector};
use crate::qubo::{build_qubo_generic, QuboMatrix};
use crate::signal::{ComplexSample, PowerLevel};

pub const MAX_EXHAUSTIVE_QUBITS: usize = 24;

/// Global minimum of `qubo` by enumerating all `2^M` vectors, returning the
/// lexicographically smallest minimizer and its energy (offset included).
pub fn exhaustive_qubo(qubo: &QuboMatrix) -> Result<(QubitVector, f64)> {
    let m = qubo.num_qubits();
    if m > MAX_EXHAUSTIVE_QUBITS {
        return Err(Error::TooManyQubits {
            m,
            max: MAX_EXHAUSTIVE_QUBITS,
        });
    }
    let dense = qubo.to_dense();
    let mut bits = vec![0u8; m];
    let mut best_index = 0u64;
    let mut best = f64::INFINITY;
    for index in 0..(1u64 << m) {
        for (i, b) in bits.iter_mut().enumerate() {
            *b = ((index >> (m - 1 - i)) & 1) as u8;
        }
        let mut energy = 0.0;
        for i in (0..m).filter(|&i| bits[i] == 1) {
            let row = &dense[i * m..(i + 1) * m];
            energy += row[i];
            for j in (i + 1..m).filter(|&j| bits[j] == 1) {
                energy += row[j];
            }
        }
        if energy < best {
            best = energy;
            best_index = index;
        }
    }
    let q = QubitVector::from_index(best_index, m);
    let energy = qubo.energy(q.as_slice())?;
    Ok((q, energy))
}

/// Generic QUBO construction followed by [`exhaustive_qubo`].
pub fn decode_via_exhaustive_qubo(
    y: ComplexSample,
    channel: &ChannelRealization,
    p_tx: PowerLevel,
    scheme: &ModulationScheme,
) -> Result<DecodeResult> {
    let start = Instant::now();
    let qubo = build_qubo_generic(y, channel, p_tx, scheme)?;
    let built = Instant::now();
    let (qubits, _) = exhaustive_qubo(&qubo)?;
    let solved = Instant::now();
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

    #[test]
    fn single_qubit() {
        let mut q = QuboMatrix::new(1);
        q.add(0, 0, -4.0).unwrap();
        q.set_offset(4.0).unwrap();
        let (v, e) = exhaustive_qubo(&q).unwrap();
        assert_eq!(v.as_slice(), &[1]);
        assert_eq!(e, 0.0);
    }

    #[test]
    fn lexicographic_tie_break() {
        let mut q = QuboMatrix::new(2);
        q.add(0, 0, -1.0).unwrap();
        q.add(1, 1, -1.0).unwrap();
        q.add(0, 1, 3.0).unwrap();
        let (v, e) = exhaustive_qubo(&q).unwrap();
        assert_eq!(v.as_slice(), &[0, 1]);
        assert_eq!(e, -1.0);
    }

    #[test]
    fn all_zero_matrix() {
        let mut q = QuboMatrix::new(5);
        q.set_offset(2.5).unwrap();
        let (v, e) = exhaustive_qubo(&q).unwrap();
        assert_eq!(v, QubitVector::zeros(5));
        assert_eq!(e, 2.5);
    }

    #[test]
    fn too_many_qubits() {
        assert!(matches!(
            exhaustive_qubo(&QuboMatrix::new(25)),
            Err(Error::TooManyQubits { m: 25, max: 24 })
        ));
    }

    #[test]
    fn matches_energy_scan() {
        let mut q = QuboMatrix::new(4);
        let vals = [0.5, -1.25, 2.0, -0.75, 0.3, -2.2, 1.1, -0.4, 0.9, -1.7];
        let mut k = 0;
        for i in 0..4 {
            for j in i..4 {
                q.add(i, j, vals[k]).unwrap();
                k += 1;
            }
        }
        let (best, e) = exhaustive_qubo(&q).unwrap();
        for idx in 0..16 {
            let v = QubitVector::from_index(idx, 4);
            assert!(q.energy(v.as_slice()).unwrap() >= e);
        }
        assert_eq!(q.energy(best.as_slice()).unwrap(), e);
    }
}
