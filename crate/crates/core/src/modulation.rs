//! Constellations and their affine qubit labelings.
//!
//! Every scheme maps a block of binary variables to one symbol with an
//! affine function. Each axis uses natural binary on the amplitude level,
//! most significant qubit first:
//!
//! ```text
//! level(b_0 .. b_{k-1}) = 2 * (b_0 2^{k-1} + ... + b_{k-1}) - (2^k - 1)
//! ```
//!
//! BPSK has a single real axis. The other schemes put the first half of the
//! block on the in-phase axis and the second half on the quadrature axis.
//! The amplitude scale makes the corner points unit magnitude, so every
//! constellation is peak normalized. The same labeling doubles as the bit
//! mapping for error counting.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::signal::ComplexSample;

/// Absolute distance within which a value counts as a constellation point.
pub const MEMBERSHIP_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModulationKind {
    Bpsk,
    Qpsk,
    Qam16,
    Qam64,
}

impl ModulationKind {
    pub const ALL: [ModulationKind; 4] = [Self::Bpsk, Self::Qpsk, Self::Qam16, Self::Qam64];

    pub fn name(self) -> &'static str {
        match self {
            Self::Bpsk => "bpsk",
            Self::Qpsk => "qpsk",
            Self::Qam16 => "qam16",
            Self::Qam64 => "qam64",
        }
    }

    pub fn qubits_per_symbol(self) -> usize {
        match self {
            Self::Bpsk => 1,
            Self::Qpsk => 2,
            Self::Qam16 => 4,
            Self::Qam64 => 6,
        }
    }

    fn bits_per_axis(self) -> usize {
        match self {
            Self::Bpsk => 1,
            other => other.qubits_per_symbol() / 2,
        }
    }

    fn is_complex(self) -> bool {
        self != Self::Bpsk
    }

    /// Distance between an amplitude level and the integer grid it lives on.
    fn amplitude_scale(self) -> f64 {
        use std::f64::consts::SQRT_2;
        match self {
            Self::Bpsk => 1.0,
            Self::Qpsk => 1.0 / SQRT_2,
            Self::Qam16 => 1.0 / (3.0 * SQRT_2),
            Self::Qam64 => 1.0 / (7.0 * SQRT_2),
        }
    }
}

impl fmt::Display for ModulationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModulationKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::UnknownScheme(s.to_string()))
    }
}

/// A binary assignment to the QUBO variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QubitVector(Vec<u8>);

impl QubitVector {
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if let Some(&bad) = bits.iter().find(|&&b| b > 1) {
            return Err(Error::InvalidQubit(bad));
        }
        Ok(Self(bits))
    }

    pub fn zeros(m: usize) -> Self {
        Self(vec![0; m])
    }

    /// Bits of `index` with the most significant bit first, so increasing
    /// indices enumerate vectors in lexicographic order.
    pub fn from_index(index: u64, m: usize) -> Self {
        Self((0..m).map(|i| ((index >> (m - 1 - i)) & 1) as u8).collect())
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_inner(self) -> Vec<u8> {
        self.0
    }
}

impl fmt::Display for QubitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.0 {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

/// Affine qubit-to-symbol map `c(q) = offset + sum_m weights[m] q_m`.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineMap {
    pub offset: Complex64,
    pub weights: Vec<Complex64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModulationScheme {
    kind: ModulationKind,
    /// Indexed by the integer value of the qubit label, MSB first.
    constellation: Vec<ComplexSample>,
}

impl ModulationScheme {
    pub fn new(kind: ModulationKind) -> Self {
        let q = kind.qubits_per_symbol();
        let constellation = (0..1u64 << q)
            .map(|idx| {
                let label = QubitVector::from_index(idx, q);
                symbol_from_bits(kind, label.as_slice())
            })
            .collect();
        Self {
            kind,
            constellation,
        }
    }

    pub fn kind(&self) -> ModulationKind {
        self.kind
    }

    pub fn name(&self) -> &'static str {
        self.kind.name()
    }

    pub fn qubits_per_symbol(&self) -> usize {
        self.kind.qubits_per_symbol()
    }

    /// Number of QUBO variables for `n_users` users.
    pub fn qubit_count(&self, n_users: usize) -> usize {
        n_users * self.qubits_per_symbol()
    }

    /// Points in label order.
    pub fn constellation(&self) -> &[ComplexSample] {
        &self.constellation
    }

    pub fn affine_map(&self) -> AffineMap {
        let kind = self.kind;
        let k = kind.bits_per_axis();
        let scale = kind.amplitude_scale();
        let top = ((1u32 << k) - 1) as f64;
        let axis_weights: Vec<f64> = (0..k)
            .map(|i| 2.0 * (1u32 << (k - 1 - i)) as f64 * scale)
            .collect();
        let mut weights: Vec<Complex64> = axis_weights
            .iter()
            .map(|&w| Complex64::new(w, 0.0))
            .collect();
        let offset = if kind.is_complex() {
            weights.extend(axis_weights.iter().map(|&w| Complex64::new(0.0, w)));
            Complex64::new(-top * scale, -top * scale)
        } else {
            Complex64::new(-top * scale, 0.0)
        };
        AffineMap { offset, weights }
    }

    pub fn qubits_to_symbol(&self, q: &[u8]) -> Result<ComplexSample> {
        if q.len() != self.qubits_per_symbol() {
            return Err(Error::LengthMismatch {
                expected: self.qubits_per_symbol(),
                found: q.len(),
            });
        }
        if let Some(&bad) = q.iter().find(|&&b| b > 1) {
            return Err(Error::InvalidQubit(bad));
        }
        Ok(symbol_from_bits(self.kind, q))
    }

    /// Label index of `s` in [`ModulationScheme::constellation`].
    pub fn symbol_index(&self, s: ComplexSample) -> Result<usize> {
        let kind = self.kind;
        let k = kind.bits_per_axis();
        let not_a_point = || Error::NotAConstellationPoint {
            re: s.re(),
            im: s.im(),
        };
        let re_bits = axis_value(s.re(), k, kind.amplitude_scale()).ok_or_else(not_a_point)?;
        if !kind.is_complex() {
            if s.im().abs() > MEMBERSHIP_TOLERANCE {
                return Err(not_a_point());
            }
            return Ok(re_bits);
        }
        let im_bits = axis_value(s.im(), k, kind.amplitude_scale()).ok_or_else(not_a_point)?;
        Ok((re_bits << k) | im_bits)
    }

    pub fn symbol_to_qubits(&self, s: ComplexSample) -> Result<Vec<u8>> {
        let idx = self.symbol_index(s)?;
        Ok(QubitVector::from_index(idx as u64, self.qubits_per_symbol()).into_inner())
    }

    /// Splits a concatenated qubit vector into per-user symbols.
    pub fn qubits_to_symbols(&self, q: &QubitVector) -> Result<Vec<ComplexSample>> {
        let per = self.qubits_per_symbol();
        if !q.len().is_multiple_of(per) {
            return Err(Error::LengthMismatch {
                expected: q.len().next_multiple_of(per),
                found: q.len(),
            });
        }
        q.as_slice()
            .chunks(per)
            .map(|c| self.qubits_to_symbol(c))
            .collect()
    }

    pub fn symbols_to_qubits(&self, symbols: &[ComplexSample]) -> Result<QubitVector> {
        let mut bits = Vec::with_capacity(symbols.len() * self.qubits_per_symbol());
        for &s in symbols {
            bits.extend(self.symbol_to_qubits(s)?);
        }
        Ok(QubitVector(bits))
    }
}

fn symbol_from_bits(kind: ModulationKind, q: &[u8]) -> ComplexSample {
    let k = kind.bits_per_axis();
    let scale = kind.amplitude_scale();
    // Integer level first, then one multiply, so points are exact multiples
    // of the scale.
    let level = |bits: &[u8]| {
        let v = bits.iter().fold(0i64, |acc, &b| (acc << 1) | b as i64);
        (2 * v - ((1i64 << k) - 1)) as f64
    };
    let re = level(&q[..k]) * scale;
    let im = if kind.is_complex() {
        level(&q[k..]) * scale
    } else {
        0.0
    };
    ComplexSample::new(re, im)
}

/// Inverts one axis of the labeling; `None` if `x` is off the grid.
fn axis_value(x: f64, k: usize, scale: f64) -> Option<usize> {
    let top = (1i64 << k) - 1;
    let level = x / scale;
    let v = ((level + top as f64) / 2.0).round();
    if !(0.0..=top as f64).contains(&v) {
        return None;
    }
    let snapped = (2.0 * v - top as f64) * scale;
    ((x - snapped).abs() <= MEMBERSHIP_TOLERANCE).then_some(v as usize)
}

/// I.i.d. uniform constellation points.
pub fn random_symbols<R: Rng + ?Sized>(
    scheme: &ModulationScheme,
    n_users: usize,
    rng: &mut R,
) -> Vec<ComplexSample> {
    let size = scheme.constellation().len();
    (0..n_users)
        .map(|_| scheme.constellation()[rng.random_range(0..size)])
        .collect()
}

/// Hamming distance between the labels of two symbol lists.
pub fn count_bit_errors(
    scheme: &ModulationScheme,
    sent: &[ComplexSample],
    decoded: &[ComplexSample],
) -> Result<usize> {
    if sent.len() != decoded.len() {
        return Err(Error::LengthMismatch {
            expected: sent.len(),
            found: decoded.len(),
        });
    }
    sent.iter().zip(decoded).try_fold(0usize, |acc, (&a, &b)| {
        let diff = scheme.symbol_index(a)? ^ scheme.symbol_index(b)?;
        Ok(acc + diff.count_ones() as usize)
    })
}
