//! Detection engines sharing one contract: given the received sample, the
//! channel, the transmit power and the scheme, return the decided symbol
//! vector together with its ML metric and per-phase timings.
//!
//! Ties are always broken towards the lexicographically smallest qubit
//! vector.

mod anneal;
mod brute_force;
mod exhaustive;
mod sic;

use std::fmt;
use std::str::FromStr;
use std::time::Duration;

pub use anneal::{
    anneal_qubo, decode_via_annealer, AnnealParams, BetaSchedule, SampleRecord, SampleSet,
};
pub use brute_force::{brute_force_ml, brute_force_ml_with_limit, DEFAULT_MAX_EVALUATIONS};
pub use exhaustive::{decode_via_exhaustive_qubo, exhaustive_qubo, MAX_EXHAUSTIVE_QUBITS};
pub use sic::sic_decode;

use crate::channel::ChannelRealization;
use crate::error::{Error, Result};
use crate::modulation::{ModulationScheme, QubitVector};
use crate::signal::{ComplexSample, PowerLevel, RandomStream};

/// Wall-clock spent in each phase of one decode. Engines without a QUBO
/// stage only fill `solve`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PhaseTimings {
    pub build: Duration,
    pub solve: Duration,
    pub readout: Duration,
}

impl PhaseTimings {
    pub fn total(&self) -> Duration {
        self.build + self.solve + self.readout
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecodeResult {
    pub symbols: Vec<ComplexSample>,
    pub qubits: QubitVector,
    /// `|y - sqrt(P) s h^T|^2` at the decided symbols.
    pub metric: f64,
    pub timing: PhaseTimings,
}

impl DecodeResult {
    /// Equality ignoring timings.
    pub fn same_decision(&self, other: &Self) -> bool {
        self.symbols == other.symbols && self.qubits == other.qubits && self.metric == other.metric
    }
}

/// The common decoder contract.
pub trait Decoder: Send + Sync {
    fn name(&self) -> &'static str;

    /// `stream` is only consumed by randomized engines.
    fn decode(
        &self,
        y: ComplexSample,
        channel: &ChannelRealization,
        p_tx: PowerLevel,
        scheme: &ModulationScheme,
        stream: &RandomStream,
    ) -> Result<DecodeResult>;
}

#[derive(Debug, Clone, Copy, Default)]
pub struct BruteForceDecoder {
    pub max_evaluations: Option<u64>,
}

impl Decoder for BruteForceDecoder {
    fn name(&self) -> &'static str {
        "bf"
    }

    fn decode(
        &self,
        y: ComplexSample,
        channel: &ChannelRealization,
        p_tx: PowerLevel,
        scheme: &ModulationScheme,
        _stream: &RandomStream,
    ) -> Result<DecodeResult> {
        let limit = self.max_evaluations.unwrap_or(DEFAULT_MAX_EVALUATIONS);
        brute_force_ml_with_limit(y, channel, p_tx, scheme, limit)
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SicDecoder;

impl Decoder for SicDecoder {
    fn name(&self) -> &'static str {
        "sic"
    }

    fn decode(
        &self,
        y: ComplexSample,
        channel: &ChannelRealization,
        p_tx: PowerLevel,
        scheme: &ModulationScheme,
        _stream: &RandomStream,
    ) -> Result<DecodeResult> {
        sic_decode(y, channel, p_tx, scheme)
    }
}

#[derive(Debug, Clone, Default)]
pub struct AnnealerDecoder {
    pub params: AnnealParams,
}

impl Decoder for AnnealerDecoder {
    fn name(&self) -> &'static str {
        "qa"
    }

    fn decode(
        &self,
        y: ComplexSample,
        channel: &ChannelRealization,
        p_tx: PowerLevel,
        scheme: &ModulationScheme,
        stream: &RandomStream,
    ) -> Result<DecodeResult> {
        decode_via_annealer(y, channel, p_tx, scheme, &self.params, stream)
    }
}

/// Builds the generic QUBO and minimizes it by enumeration.
#[derive(Debug, Clone, Copy, Default)]
pub struct ExhaustiveQuboDecoder;

impl Decoder for ExhaustiveQuboDecoder {
    fn name(&self) -> &'static str {
        "xq"
    }

    fn decode(
        &self,
        y: ComplexSample,
        channel: &ChannelRealization,
        p_tx: PowerLevel,
        scheme: &ModulationScheme,
        _stream: &RandomStream,
    ) -> Result<DecodeResult> {
        decode_via_exhaustive_qubo(y, channel, p_tx, scheme)
    }
}

/// Decoders selectable from configuration files and the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DecoderKind {
    BruteForce,
    Sic,
    Annealer,
}

impl DecoderKind {
    pub const ALL: [DecoderKind; 3] = [Self::BruteForce, Self::Sic, Self::Annealer];

    pub fn name(self) -> &'static str {
        match self {
            Self::BruteForce => "bf",
            Self::Sic => "sic",
            Self::Annealer => "qa",
        }
    }

    pub fn instantiate(self, anneal: &AnnealParams) -> Box<dyn Decoder> {
        match self {
            Self::BruteForce => Box::new(BruteForceDecoder::default()),
            Self::Sic => Box::new(SicDecoder),
            Self::Annealer => Box::new(AnnealerDecoder {
                params: anneal.clone(),
            }),
        }
    }
}

impl fmt::Display for DecoderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DecoderKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::UnknownDecoder(s.to_string()))
    }
}
