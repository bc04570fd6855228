//! User placement, Rayleigh fading with distance path loss and synthesis of
//! the superimposed uplink signal seen at the base station.

use rand::Rng;

use crate::error::{Error, Result};
use crate::signal::{sample_circular_gaussian, ComplexSample, PowerLevel};

pub const NEAR_USER_DISTANCE_M: f64 = 50.0;
pub const FAR_USER_DISTANCE_M: f64 = 100.0;
pub const DEFAULT_PATH_LOSS_EXPONENT: f64 = 2.0;

/// Distances of the users from the base station, nearest first.
#[derive(Debug, Clone, PartialEq)]
pub struct Deployment {
    distances: Vec<f64>,
    path_loss_exponent: f64,
}

impl Deployment {
    pub fn new(distances: Vec<f64>, path_loss_exponent: f64) -> Result<Self> {
        if distances.is_empty() {
            return Err(Error::InvalidUserCount(0));
        }
        if !path_loss_exponent.is_finite() || path_loss_exponent < 0.0 {
            return Err(Error::InvalidDeployment(format!(
                "path-loss exponent must be finite and non-negative, got {path_loss_exponent}"
            )));
        }
        if distances.iter().any(|d| !d.is_finite() || *d <= 0.0) {
            return Err(Error::InvalidDeployment(
                "distances must be finite and positive".into(),
            ));
        }
        if distances.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidDeployment(
                "distances must be strictly increasing".into(),
            ));
        }
        Ok(Self {
            distances,
            path_loss_exponent,
        })
    }

    pub fn n_users(&self) -> usize {
        self.distances.len()
    }

    pub fn distances(&self) -> &[f64] {
        &self.distances
    }

    pub fn path_loss_exponent(&self) -> f64 {
        self.path_loss_exponent
    }

    pub fn with_path_loss_exponent(self, tau: f64) -> Result<Self> {
        Self::new(self.distances, tau)
    }

    /// Amplitude attenuation `1 / sqrt(d^tau)` of user `k`.
    pub fn amplitude_loss(&self, k: usize) -> f64 {
        1.0 / self.distances[k].powf(self.path_loss_exponent).sqrt()
    }
}

/// Places `n` users evenly between 50 m and 100 m. A single user sits at 50 m.
pub fn place_users(n: usize) -> Result<Deployment> {
    let distances = match n {
        0 => return Err(Error::InvalidUserCount(0)),
        1 => vec![NEAR_USER_DISTANCE_M],
        _ => {
            let span = FAR_USER_DISTANCE_M - NEAR_USER_DISTANCE_M;
            (0..n)
                .map(|k| NEAR_USER_DISTANCE_M + span * k as f64 / (n - 1) as f64)
                .collect()
        }
    };
    Deployment::new(distances, DEFAULT_PATH_LOSS_EXPONENT)
}

/// One draw of the per-user complex channel gains.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    gains: Vec<ComplexSample>,
    deployment: Deployment,
}

impl ChannelRealization {
    pub fn new(gains: Vec<ComplexSample>, deployment: Deployment) -> Result<Self> {
        if gains.len() != deployment.n_users() {
            return Err(Error::LengthMismatch {
                expected: deployment.n_users(),
                found: gains.len(),
            });
        }
        Ok(Self { gains, deployment })
    }

    /// Fixed gains paired with the default placement for `gains.len()` users.
    pub fn from_gains(gains: Vec<ComplexSample>) -> Result<Self> {
        let deployment = place_users(gains.len())?;
        Self::new(gains, deployment)
    }

    pub fn gains(&self) -> &[ComplexSample] {
        &self.gains
    }

    pub fn deployment(&self) -> &Deployment {
        &self.deployment
    }

    pub fn n_users(&self) -> usize {
        self.gains.len()
    }
}

/// Draws Rayleigh-faded gains `h_k = g_k / sqrt(d_k^tau)` with `g_k` a
/// unit-power circular Gaussian.
pub fn sample_channel<R: Rng + ?Sized>(
    rng: &mut R,
    deployment: &Deployment,
) -> Result<ChannelRealization> {
    let gains = (0..deployment.n_users())
        .map(|k| Ok(sample_circular_gaussian(rng, 1.0)? * deployment.amplitude_loss(k)))
        .collect::<Result<Vec<_>>>()?;
    ChannelRealization::new(gains, deployment.clone())
}

/// Noiseless part of the received signal, `sqrt(P) * sum_k s_k h_k`.
pub fn noiseless_signal(
    symbols: &[ComplexSample],
    channel: &ChannelRealization,
    p_tx: PowerLevel,
) -> Result<ComplexSample> {
    if symbols.len() != channel.n_users() {
        return Err(Error::LengthMismatch {
            expected: channel.n_users(),
            found: symbols.len(),
        });
    }
    let sum = symbols
        .iter()
        .zip(channel.gains())
        .fold(ComplexSample::ZERO, |acc, (&s, &h)| acc + s * h);
    Ok(sum * p_tx.amplitude())
}

/// Received signal `y = sqrt(P) * sum_k s_k h_k + n` with equal transmit
/// power for every user.
pub fn superimpose(
    symbols: &[ComplexSample],
    channel: &ChannelRealization,
    p_tx: PowerLevel,
    noise: ComplexSample,
) -> Result<ComplexSample> {
    Ok(noiseless_signal(symbols, channel, p_tx)? + noise)
}

/// The maximum-likelihood objective `|y - sqrt(P) * s h^T|^2`.
pub fn ml_metric(
    y: ComplexSample,
    channel: &ChannelRealization,
    p_tx: PowerLevel,
    symbols: &[ComplexSample],
) -> Result<f64> {
    Ok((y - noiseless_signal(symbols, channel, p_tx)?).norm_sqr())
}
