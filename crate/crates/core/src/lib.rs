//! Maximum-likelihood multi-user detection for uplink NOMA, cast as a QUBO.
//!
//! The crate covers the whole link: user placement and Rayleigh channels
//! ([`channel`]), constellations with their affine qubit labelings
//! ([`modulation`]), QUBO construction ([`qubo`]), four detection engines
//! ([`decoders`]: brute-force ML, exhaustive QUBO search, a simulated
//! annealing sampler and SIC) and a Monte-Carlo BER harness ([`harness`]).
//!
//! ```
//! use noma_qubo::channel::ChannelRealization;
//! use noma_qubo::modulation::{ModulationKind, ModulationScheme};
//! use noma_qubo::qubo::build_qubo_generic;
//! use noma_qubo::signal::{ComplexSample, PowerLevel};
//!
//! let channel = ChannelRealization::from_gains(vec![ComplexSample::real(1.0)]).unwrap();
//! let bpsk = ModulationScheme::new(ModulationKind::Bpsk);
//! let p = PowerLevel::from_mw(1.0).unwrap();
//! let q = build_qubo_generic(ComplexSample::real(1.0), &channel, p, &bpsk).unwrap();
//! assert_eq!(q.get(0, 0), -4.0);
//! assert_eq!(q.offset(), 4.0);
//! ```

pub mod channel;
pub mod cli;
pub mod decoders;
pub mod error;
pub mod harness;
pub mod modulation;
pub mod qubo;
pub mod signal;

pub use error::{Error, Result};
