//! QUBO matrices for maximum-likelihood detection.
//!
//! [`build_qubo_generic`] expands the squared residual for any affine qubit
//! map and is the reference. The closed-form builders in [`closed_form`]
//! evaluate per-family coefficient formulas for BPSK, QPSK and 16-QAM and
//! are checked against the reference rather than trusted.

pub mod closed_form;
mod dump;
mod generic;

use std::collections::BTreeMap;

pub use closed_form::{build_qubo_bpsk, build_qubo_closed_form, build_qubo_qam16, build_qubo_qpsk};
pub use dump::{parse_dump, write_dump};
pub use generic::build_qubo_generic;

use crate::error::{Error, Result};
use crate::modulation::QubitVector;

/// Upper-triangular QUBO coefficients plus a constant offset.
///
/// Energy is `sum_{i <= j} Q_ij q_i q_j + offset`. Only nonzero entries are
/// stored, so structurally zero families stay absent.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct QuboMatrix {
    m: usize,
    coeffs: BTreeMap<(usize, usize), f64>,
    offset: f64,
}

impl QuboMatrix {
    pub fn new(m: usize) -> Self {
        Self {
            m,
            coeffs: BTreeMap::new(),
            offset: 0.0,
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.m
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn set_offset(&mut self, offset: f64) -> Result<()> {
        if !offset.is_finite() {
            return Err(Error::NonFinite("QUBO offset"));
        }
        self.offset = offset;
        Ok(())
    }

    /// Accumulates `value` into `Q_ij`; the pair is reordered so `i <= j`.
    pub fn add(&mut self, i: usize, j: usize, value: f64) -> Result<()> {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        if j >= self.m {
            return Err(Error::LengthMismatch {
                expected: self.m,
                found: j + 1,
            });
        }
        if !value.is_finite() {
            return Err(Error::NonFinite("QUBO coefficient"));
        }
        if value == 0.0 {
            return Ok(());
        }
        let entry = self.coeffs.entry((i, j)).or_insert(0.0);
        *entry += value;
        if *entry == 0.0 {
            self.coeffs.remove(&(i, j));
        }
        Ok(())
    }

    /// Coefficient for the unordered pair; zero when absent.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        let key = if i <= j { (i, j) } else { (j, i) };
        self.coeffs.get(&key).copied().unwrap_or(0.0)
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        let key = if i <= j { (i, j) } else { (j, i) };
        self.coeffs.contains_key(&key)
    }

    /// Nonzero entries in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize), f64)> + '_ {
        self.coeffs.iter().map(|(&k, &v)| (k, v))
    }

    pub fn nnz(&self) -> usize {
        self.coeffs.len()
    }

    pub fn energy(&self, q: &[u8]) -> Result<f64> {
        if q.len() != self.m {
            return Err(Error::LengthMismatch {
                expected: self.m,
                found: q.len(),
            });
        }
        let sum: f64 = self
            .coeffs
            .iter()
            .filter(|(&(i, j), _)| q[i] == 1 && q[j] == 1)
            .map(|(_, &v)| v)
            .sum();
        Ok(sum + self.offset)
    }

    /// Row-major dense copy, zero below the diagonal.
    pub fn to_dense(&self) -> Vec<f64> {
        let mut dense = vec![0.0; self.m * self.m];
        for (&(i, j), &v) in &self.coeffs {
            dense[i * self.m + j] = v;
        }
        dense
    }

    /// Largest absolute coefficient (offset excluded).
    pub fn max_abs_coefficient(&self) -> f64 {
        self.coeffs.values().fold(0.0, |acc, v| acc.max(v.abs()))
    }
}

/// Energy of `q` under `qubo`.
pub fn qubo_energy(qubo: &QuboMatrix, q: &QubitVector) -> Result<f64> {
    qubo.energy(q.as_slice())
}

/// Largest coefficient difference between two matrices, relative to the
/// largest coefficient magnitude of `reference`. Offsets are ignored.
pub fn max_relative_deviation(candidate: &QuboMatrix, reference: &QuboMatrix) -> f64 {
    let scale = reference.max_abs_coefficient();
    let keys = candidate
        .coeffs
        .keys()
        .chain(reference.coeffs.keys())
        .copied();
    let worst = keys.fold(0.0f64, |acc, (i, j)| {
        acc.max((candidate.get(i, j) - reference.get(i, j)).abs())
    });
    if candidate.m != reference.m {
        return f64::INFINITY;
    }
    if scale == 0.0 {
        if worst == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        worst / scale
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> QuboMatrix {
        let mut q = QuboMatrix::new(2);
        q.add(0, 0, -1.0).unwrap();
        q.add(1, 1, -1.0).unwrap();
        q.add(1, 0, 3.0).unwrap();
        q
    }

    #[test]
    fn energy_examples() {
        let mut single = QuboMatrix::new(1);
        single.add(0, 0, -4.0).unwrap();
        single.set_offset(4.0).unwrap();
        assert_eq!(single.energy(&[0]).unwrap(), 4.0);
        assert_eq!(single.energy(&[1]).unwrap(), 0.0);

        let q = sample();
        assert_eq!(q.energy(&[1, 1]).unwrap(), 1.0);
        assert_eq!(q.energy(&[0, 0]).unwrap(), 0.0);
        assert_eq!(q.energy(&[0, 1]).unwrap(), -1.0);
        assert!(matches!(q.energy(&[1]), Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn storage_is_upper_triangular_and_sparse() {
        let q = sample();
        assert!(q.contains(0, 1));
        assert_eq!(q.get(1, 0), 3.0);
        assert!(q.iter().all(|((i, j), _)| i <= j));
        let mut z = QuboMatrix::new(3);
        z.add(0, 2, 0.0).unwrap();
        assert_eq!(z.nnz(), 0);
        z.add(0, 2, 1.5).unwrap();
        z.add(2, 0, -1.5).unwrap();
        assert_eq!(z.nnz(), 0);
        assert!(z.add(0, 3, 1.0).is_err());
        assert!(z.add(0, 1, f64::NAN).is_err());
        assert!(z.set_offset(f64::INFINITY).is_err());
    }

    #[test]
    fn dense_copy() {
        assert_eq!(sample().to_dense(), vec![-1.0, 3.0, 0.0, -1.0]);
    }

    #[test]
    fn offset_shift_keeps_energy_order() {
        let q = sample();
        let mut shifted = q.clone();
        shifted.set_offset(123.0).unwrap();
        for idx in 0..4u64 {
            let v = QubitVector::from_index(idx, 2);
            let a = qubo_energy(&q, &v).unwrap();
            let b = qubo_energy(&shifted, &v).unwrap();
            assert_eq!(b - a, 123.0);
        }
    }

    #[test]
    fn deviation_measure() {
        let a = sample();
        let mut b = sample();
        assert_eq!(max_relative_deviation(&a, &b), 0.0);
        b.add(0, 1, 0.03).unwrap();
        let d = max_relative_deviation(&a, &b);
        assert!((d - 0.03 / 3.03).abs() < 1e-12);
        assert_eq!(
            max_relative_deviation(&QuboMatrix::new(2), &QuboMatrix::new(2)),
            0.0
        );
        assert_eq!(
            max_relative_deviation(&a, &QuboMatrix::new(3)),
            f64::INFINITY
        );
    }
}
