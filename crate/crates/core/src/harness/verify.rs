use rand::Rng;

use crate::channel::{place_users, sample_channel, superimpose};
use crate::error::Result;
use crate::modulation::{random_symbols, ModulationKind, ModulationScheme};
use crate::qubo::{build_qubo_closed_form, build_qubo_generic, max_relative_deviation};
use crate::signal::{dbm_to_linear, sample_circular_gaussian, PowerLevel, RandomStream};

pub const DEFAULT_VERIFY_TOLERANCE: f64 = 1e-9;
pub const VERIFY_MAX_USERS: usize = 4;
const VERIFY_POWER_RANGE_DBM: (f64, f64) = (-40.0, 24.0);
const VERIFY_NOISE_DBM: f64 = -30.0;

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub scheme: ModulationKind,
    pub trials: u64,
    /// Largest coefficient deviation relative to the generic matrix's
    /// largest coefficient, over all trials.
    pub max_deviation: f64,
    pub worst_trial: u64,
}

/// Compares the closed-form builder of `kind` with the generic expansion on
/// random instances: 1 to 4 users, transmit power uniform in dBm over
/// [-40, 24], Rayleigh channels on the default placement, random symbols
/// and -30 dBm noise.
pub fn verify_closed_form(kind: ModulationKind, trials: u64, seed: u64) -> Result<VerifyReport> {
    let scheme = ModulationScheme::new(kind);
    let mut report = VerifyReport {
        scheme: kind,
        trials,
        max_deviation: 0.0,
        worst_trial: 0,
    };
    for trial in 0..trials {
        let mut rng = RandomStream::new(seed, trial).rng();
        let n = rng.random_range(1..=VERIFY_MAX_USERS);
        let (lo, hi) = VERIFY_POWER_RANGE_DBM;
        let p = PowerLevel::from_dbm(rng.random_range(lo..hi))?;
        let channel = sample_channel(&mut rng, &place_users(n)?)?;
        let sent = random_symbols(&scheme, n, &mut rng);
        let noise = sample_circular_gaussian(&mut rng, dbm_to_linear(VERIFY_NOISE_DBM))?;
        let y = superimpose(&sent, &channel, p, noise)?;
        let closed = build_qubo_closed_form(y, &channel, p, &scheme)?;
        let generic = build_qubo_generic(y, &channel, p, &scheme)?;
        let dev = max_relative_deviation(&closed, &generic);
        if dev > report.max_deviation {
            report.max_deviation = dev;
            report.worst_trial = trial;
        }
    }
    Ok(report)
}
