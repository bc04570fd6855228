//! Scalar building blocks shared by every other module: complex baseband
//! samples, power levels and the deterministic random-stream contract.
//!
//! Random streams are counter based. A `(master_seed, stream_index)` pair
//! selects one ChaCha8 keystream, so any trial can be replayed in isolation
//! and parallel execution order has no influence on the drawn values.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// A finite complex baseband value.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ComplexSample(Complex64);

impl ComplexSample {
    pub const ZERO: Self = Self(Complex64::new(0.0, 0.0));

    /// Panics if either component is not finite. Use [`ComplexSample::try_new`]
    /// for untrusted input.
    pub fn new(re: f64, im: f64) -> Self {
        Self::try_new(re, im).expect("complex sample components must be finite")
    }

    pub fn try_new(re: f64, im: f64) -> Result<Self> {
        if re.is_finite() && im.is_finite() {
            Ok(Self(Complex64::new(re, im)))
        } else {
            Err(Error::NonFinite("complex sample"))
        }
    }

    pub fn real(re: f64) -> Self {
        Self::new(re, 0.0)
    }

    pub fn re(self) -> f64 {
        self.0.re
    }

    pub fn im(self) -> f64 {
        self.0.im
    }

    pub fn value(self) -> Complex64 {
        self.0
    }

    pub fn norm_sqr(self) -> f64 {
        self.0.norm_sqr()
    }

    pub fn conj(self) -> Self {
        Self(self.0.conj())
    }
}

impl TryFrom<Complex64> for ComplexSample {
    type Error = Error;

    fn try_from(z: Complex64) -> Result<Self> {
        Self::try_new(z.re, z.im)
    }
}

impl From<ComplexSample> for Complex64 {
    fn from(s: ComplexSample) -> Self {
        s.0
    }
}

// Arithmetic on finite operands can still overflow to infinity; the
// constructors above are the gate for external data, these are for
// well-scaled internal math.
impl Add for ComplexSample {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self(self.0 + rhs.0)
    }
}

impl Sub for ComplexSample {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self(self.0 - rhs.0)
    }
}

impl Mul for ComplexSample {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self(self.0 * rhs.0)
    }
}

impl Mul<f64> for ComplexSample {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        Self(self.0 * rhs)
    }
}

impl Neg for ComplexSample {
    type Output = Self;
    fn neg(self) -> Self {
        Self(-self.0)
    }
}

impl fmt::Display for ComplexSample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.im.is_sign_negative() {
            write!(f, "{}-{}j", self.0.re, -self.0.im)
        } else {
            write!(f, "{}+{}j", self.0.re, self.0.im)
        }
    }
}

/// Converts a power in dBm to milliwatts.
pub fn dbm_to_linear(dbm: f64) -> f64 {
    10f64.powf(dbm / 10.0)
}

/// Converts milliwatts to dBm. Zero maps to negative infinity.
pub fn linear_to_dbm(mw: f64) -> f64 {
    10.0 * mw.log10()
}

/// A power level carried both in dBm and linear milliwatts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLevel {
    dbm: f64,
    linear_mw: f64,
}

impl PowerLevel {
    pub fn from_dbm(dbm: f64) -> Result<Self> {
        if !dbm.is_finite() {
            return Err(Error::NonFinite("power in dBm"));
        }
        Ok(Self {
            dbm,
            linear_mw: dbm_to_linear(dbm),
        })
    }

    /// Zero power is accepted and reported as `-inf` dBm.
    pub fn from_mw(mw: f64) -> Result<Self> {
        if !mw.is_finite() {
            return Err(Error::NonFinite("power in mW"));
        }
        if mw < 0.0 {
            return Err(Error::NegativePower(mw));
        }
        Ok(Self {
            dbm: linear_to_dbm(mw),
            linear_mw: mw,
        })
    }

    pub fn dbm(self) -> f64 {
        self.dbm
    }

    pub fn linear_mw(self) -> f64 {
        self.linear_mw
    }

    /// Amplitude factor `sqrt(P)` applied to unit-peak symbols.
    pub fn amplitude(self) -> f64 {
        self.linear_mw.sqrt()
    }
}

/// Generator behind every [`RandomStream`].
pub type StreamRng = ChaCha8Rng;

/// Identifies one independent, replayable random sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RandomStream {
    pub master_seed: u64,
    pub stream_index: u64,
}

impl RandomStream {
    pub fn new(master_seed: u64, stream_index: u64) -> Self {
        Self {
            master_seed,
            stream_index,
        }
    }

    /// Fresh generator positioned at the start of this stream.
    pub fn rng(&self) -> StreamRng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master_seed);
        rng.set_stream(self.stream_index);
        rng
    }

    /// A sibling stream for a different consumer of the same trial. The
    /// stream index is kept; the master seed is remixed with `tag`.
    pub fn derive(&self, tag: u64) -> Self {
        Self {
            master_seed: splitmix64(self.master_seed ^ splitmix64(tag)),
            stream_index: self.stream_index,
        }
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Draws a zero-mean circular complex Gaussian with total variance
/// `variance` (each component gets `variance / 2`).
///
/// Both components are always drawn, so stream consumption does not depend
/// on the variance.
pub fn sample_circular_gaussian<R: Rng + ?Sized>(
    rng: &mut R,
    variance: f64,
) -> Result<ComplexSample> {
    if !variance.is_finite() {
        return Err(Error::NonFinite("variance"));
    }
    if variance < 0.0 {
        return Err(Error::NegativeVariance(variance));
    }
    let sigma = (variance / 2.0).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Ok(ComplexSample::new(sigma * re, sigma * im))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::Rng;

    #[test]
    fn dbm_examples() {
        assert_eq!(dbm_to_linear(0.0), 1.0);
        assert!((dbm_to_linear(10.0) - 10.0).abs() < 1e-12);
        assert!((dbm_to_linear(-30.0) - 0.001).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn dbm_round_trip(p in -300.0f64..300.0) {
            let back = linear_to_dbm(dbm_to_linear(p));
            prop_assert!((back - p).abs() <= 1e-12 * p.abs().max(1.0));
        }
    }

    #[test]
    fn power_level_is_consistent() {
        let p = PowerLevel::from_dbm(14.0).unwrap();
        assert_eq!(p.linear_mw(), dbm_to_linear(14.0));
        assert!(PowerLevel::from_dbm(f64::NAN).is_err());
        assert!(PowerLevel::from_mw(-1.0).is_err());
        let zero = PowerLevel::from_mw(0.0).unwrap();
        assert_eq!(zero.amplitude(), 0.0);
        assert_eq!(zero.dbm(), f64::NEG_INFINITY);
    }

    #[test]
    fn complex_sample_rejects_non_finite() {
        assert!(ComplexSample::try_new(f64::NAN, 0.0).is_err());
        assert!(ComplexSample::try_new(0.0, f64::INFINITY).is_err());
        assert!(ComplexSample::try_from(Complex64::new(1.0, 2.0)).is_ok());
    }

    #[test]
    fn zero_variance_gives_zero() {
        let mut rng = RandomStream::new(1, 2).rng();
        let z = sample_circular_gaussian(&mut rng, 0.0).unwrap();
        assert_eq!(z, ComplexSample::ZERO);
    }

    #[test]
    fn negative_variance_is_rejected() {
        let mut rng = RandomStream::new(1, 2).rng();
        assert!(matches!(
            sample_circular_gaussian(&mut rng, -1.0),
            Err(Error::NegativeVariance(_))
        ));
    }

    #[test]
    fn unit_variance_law_of_large_numbers() {
        let mut rng = RandomStream::new(7, 0).rng();
        let n = 1_000_000;
        let mut total = 0.0;
        let mut re_sq = 0.0;
        for _ in 0..n {
            let z = sample_circular_gaussian(&mut rng, 1.0).unwrap();
            total += z.norm_sqr();
            re_sq += z.re() * z.re();
        }
        let mean = total / n as f64;
        assert!((0.99..=1.01).contains(&mean), "mean |z|^2 = {mean}");
        let re_var = re_sq / n as f64;
        assert!((re_var - 0.5).abs() < 0.01, "re variance = {re_var}");
    }

    #[test]
    fn streams_replay_and_separate() {
        let a = RandomStream::new(42, 3);
        let draw = |s: RandomStream| {
            let mut rng = s.rng();
            (0..16)
                .map(|_| sample_circular_gaussian(&mut rng, 2.0).unwrap())
                .collect::<Vec<_>>()
        };
        assert_eq!(draw(a), draw(a));
        assert_ne!(draw(a), draw(RandomStream::new(42, 4)));
        assert_ne!(draw(a), draw(a.derive(1)));
        assert_eq!(a.derive(1), a.derive(1));
    }

    #[test]
    fn distinct_streams_are_uncorrelated() {
        let mut a = RandomStream::new(5, 0).rng();
        let mut b = RandomStream::new(5, 1).rng();
        let n = 200_000;
        let mut cross = 0.0;
        for _ in 0..n {
            let x: f64 = a.sample(StandardNormal);
            let y: f64 = b.sample(StandardNormal);
            cross += x * y;
        }
        // Standard error of the sample correlation is 1/sqrt(n) ~ 0.0022.
        assert!((cross / n as f64).abs() < 0.01);
    }
}
