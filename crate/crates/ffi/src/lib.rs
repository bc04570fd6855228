//! C ABI for `noma-qubo`.
//!
//! Conventions:
//! - every fallible function returns an [`NqStatus`]; results go through
//!   out-pointers, which are left untouched on failure;
//! - on failure [`nq_last_error_message`] describes the error of the most
//!   recent failing call on the calling thread;
//! - objects are opaque handles created by `*_new`/`*_build` functions and
//!   released with the matching `*_free` function (null is accepted);
//! - strings returned by the library are released with [`nq_string_free`].
//!
//! Panics never cross the boundary; they are reported as
//! [`NqStatus::Internal`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use noma_qubo::channel::ChannelRealization;
use noma_qubo::decoders::{AnnealParams, DecoderKind};
use noma_qubo::harness::{csv_string, run_ber_sweep, SimulationConfig};
use noma_qubo::modulation::{ModulationKind, ModulationScheme};
use noma_qubo::qubo::{build_qubo_closed_form, build_qubo_generic, QuboMatrix};
use noma_qubo::signal::{ComplexSample, PowerLevel, RandomStream};
use noma_qubo::Error;

/// Status code returned by every fallible function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NqStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    /// Index or buffer size outside the valid range.
    OutOfRange = 3,
    /// The requested builder or engine does not support the instance.
    Unsupported = 4,
    Config = 5,
    Io = 6,
    InvalidUtf8 = 7,
    /// A panic was caught inside the library.
    Internal = 99,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NqScheme {
    Bpsk = 0,
    Qpsk = 1,
    Qam16 = 2,
    Qam64 = 3,
}

fn scheme_from_raw(raw: i32) -> Result<ModulationScheme, Failure> {
    let kind = match raw {
        x if x == NqScheme::Bpsk as i32 => ModulationKind::Bpsk,
        x if x == NqScheme::Qpsk as i32 => ModulationKind::Qpsk,
        x if x == NqScheme::Qam16 as i32 => ModulationKind::Qam16,
        x if x == NqScheme::Qam64 as i32 => ModulationKind::Qam64,
        _ => {
            return Err(fail(
                NqStatus::InvalidArgument,
                format!("unknown scheme {raw}"),
            ))
        }
    };
    Ok(ModulationScheme::new(kind))
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NqDecoder {
    BruteForce = 0,
    Sic = 1,
    Annealer = 2,
}

fn decoder_from_raw(raw: i32) -> Result<DecoderKind, Failure> {
    match raw {
        x if x == NqDecoder::BruteForce as i32 => Ok(DecoderKind::BruteForce),
        x if x == NqDecoder::Sic as i32 => Ok(DecoderKind::Sic),
        x if x == NqDecoder::Annealer as i32 => Ok(DecoderKind::Annealer),
        _ => Err(fail(
            NqStatus::InvalidArgument,
            format!("unknown decoder {raw}"),
        )),
    }
}

/// Opaque channel realization: one complex gain per user.
pub struct NqChannel(ChannelRealization);

/// Opaque upper-triangular QUBO matrix with constant offset.
pub struct NqQubo(QuboMatrix);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(NqStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::LengthMismatch { .. } | Error::TooManyQubits { .. } => NqStatus::OutOfRange,
            Error::NoClosedForm(_) | Error::InstanceTooLarge { .. } => NqStatus::Unsupported,
            Error::Config(_) | Error::ConfigParse(_) => NqStatus::Config,
            Error::Io(_) => NqStatus::Io,
            _ => NqStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

fn fail(status: NqStatus, msg: impl Into<String>) -> Failure {
    Failure(status, msg.into())
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> NqStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => NqStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic".into());
            NqStatus::Internal
        }
    }
}

fn non_null<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    // SAFETY: callers pass either null or a pointer obtained from this library.
    unsafe { p.as_ref() }.ok_or_else(|| fail(NqStatus::NullPointer, format!("{what} is null")))
}

fn out<T>(p: *mut T, what: &str) -> Result<*mut T, Failure> {
    if p.is_null() {
        Err(fail(NqStatus::NullPointer, format!("{what} is null")))
    } else {
        Ok(p)
    }
}

fn sample(re: f64, im: f64) -> Result<ComplexSample, Failure> {
    Ok(ComplexSample::try_new(re, im)?)
}

/// Message describing the last failure on this thread, or null if none.
/// The pointer stays valid until the next failing call on this thread.
#[no_mangle]
pub extern "C" fn nq_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn nq_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Builds a channel from `n` complex gains given as separate real and
/// imaginary arrays. Users are placed on the default 50-100 m geometry.
///
/// # Safety
/// `re` and `im` must point to `n` readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nq_channel_new(
    re: *const f64,
    im: *const f64,
    n: usize,
    out_channel: *mut *mut NqChannel,
) -> NqStatus {
    guard(|| {
        let out_channel = out(out_channel, "out_channel")?;
        if re.is_null() || im.is_null() {
            return Err(fail(NqStatus::NullPointer, "gain arrays are null"));
        }
        let (re, im) = (
            std::slice::from_raw_parts(re, n),
            std::slice::from_raw_parts(im, n),
        );
        let gains = re
            .iter()
            .zip(im)
            .map(|(&r, &i)| sample(r, i))
            .collect::<Result<Vec<_>, _>>()?;
        let channel = ChannelRealization::from_gains(gains)?;
        *out_channel = Box::into_raw(Box::new(NqChannel(channel)));
        Ok(())
    })
}

/// Number of users of a channel; 0 for null.
///
/// # Safety
/// `channel` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn nq_channel_num_users(channel: *const NqChannel) -> usize {
    channel.as_ref().map_or(0, |c| c.0.n_users())
}

/// # Safety
/// `channel` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn nq_channel_free(channel: *mut NqChannel) {
    if !channel.is_null() {
        drop(Box::from_raw(channel));
    }
}

/// Builds the ML-detection QUBO for received sample `y`, transmit power
/// `p_mw` (milliwatts) and `scheme` (an [`NqScheme`] value). With
/// `closed_form` non-zero the per-scheme closed-form coefficients are used
/// (not available for 64-QAM).
///
/// # Safety
/// `channel` must be a live handle; `out_qubo` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nq_qubo_build(
    channel: *const NqChannel,
    y_re: f64,
    y_im: f64,
    p_mw: f64,
    scheme: i32,
    closed_form: i32,
    out_qubo: *mut *mut NqQubo,
) -> NqStatus {
    guard(|| {
        let channel = &non_null(channel, "channel")?.0;
        let out_qubo = out(out_qubo, "out_qubo")?;
        let y = sample(y_re, y_im)?;
        let p = PowerLevel::from_mw(p_mw)?;
        let scheme = scheme_from_raw(scheme)?;
        let q = if closed_form != 0 {
            build_qubo_closed_form(y, channel, p, &scheme)?
        } else {
            build_qubo_generic(y, channel, p, &scheme)?
        };
        *out_qubo = Box::into_raw(Box::new(NqQubo(q)));
        Ok(())
    })
}

/// Number of binary variables; 0 for null.
///
/// # Safety
/// `qubo` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn nq_qubo_num_qubits(qubo: *const NqQubo) -> usize {
    qubo.as_ref().map_or(0, |q| q.0.num_qubits())
}

/// # Safety
/// `qubo` must be a live handle; `out_value` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nq_qubo_offset(qubo: *const NqQubo, out_value: *mut f64) -> NqStatus {
    guard(|| {
        let q = &non_null(qubo, "qubo")?.0;
        *out(out_value, "out_value")? = q.offset();
        Ok(())
    })
}

/// Coefficient of `q_i q_j`; the pair is read as upper-triangular, so
/// `(i, j)` and `(j, i)` address the same entry.
///
/// # Safety
/// `qubo` must be a live handle; `out_value` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nq_qubo_get(
    qubo: *const NqQubo,
    i: usize,
    j: usize,
    out_value: *mut f64,
) -> NqStatus {
    guard(|| {
        let q = &non_null(qubo, "qubo")?.0;
        let out_value = out(out_value, "out_value")?;
        let m = q.num_qubits();
        if i >= m || j >= m {
            return Err(fail(
                NqStatus::OutOfRange,
                format!("index ({i}, {j}) outside {m}x{m}"),
            ));
        }
        *out_value = q.get(i.min(j), i.max(j));
        Ok(())
    })
}

/// Energy of a binary assignment, offset included.
///
/// # Safety
/// `qubo` must be a live handle; `bits` must point to `len` readable bytes;
/// `out_energy` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nq_qubo_energy(
    qubo: *const NqQubo,
    bits: *const u8,
    len: usize,
    out_energy: *mut f64,
) -> NqStatus {
    guard(|| {
        let q = &non_null(qubo, "qubo")?.0;
        let out_energy = out(out_energy, "out_energy")?;
        if bits.is_null() && len > 0 {
            return Err(fail(NqStatus::NullPointer, "bits is null"));
        }
        let bits = if len == 0 {
            &[][..]
        } else {
            std::slice::from_raw_parts(bits, len)
        };
        *out_energy = q.energy(bits)?;
        Ok(())
    })
}

/// # Safety
/// `qubo` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn nq_qubo_free(qubo: *mut NqQubo) {
    if !qubo.is_null() {
        drop(Box::from_raw(qubo));
    }
}

/// Detects the users' symbols from `y`. The decided qubit labels are
/// written to `qubits_out` (capacity `cap`, one byte per bit, users in
/// index order) and their count to `out_len`; `out_metric` receives the
/// squared residual. `scheme` and `decoder` take [`NqScheme`] and
/// [`NqDecoder`] values. `seed` only affects the annealer, which runs with its
/// default parameters.
///
/// # Safety
/// `channel` must be a live handle; `qubits_out` must point to `cap`
/// writable bytes; `out_len` and `out_metric` must be writable (the latter
/// may be null).
#[no_mangle]
pub unsafe extern "C" fn nq_decode(
    channel: *const NqChannel,
    y_re: f64,
    y_im: f64,
    p_mw: f64,
    scheme: i32,
    decoder: i32,
    seed: u64,
    qubits_out: *mut u8,
    cap: usize,
    out_len: *mut usize,
    out_metric: *mut f64,
) -> NqStatus {
    guard(|| {
        let channel = &non_null(channel, "channel")?.0;
        let out_len = out(out_len, "out_len")?;
        let scheme = scheme_from_raw(scheme)?;
        let m = scheme.qubit_count(channel.n_users());
        if cap < m {
            return Err(fail(
                NqStatus::OutOfRange,
                format!("buffer holds {cap} bits, {m} needed"),
            ));
        }
        let qubits_out = out(qubits_out, "qubits_out")?;
        let y = sample(y_re, y_im)?;
        let p = PowerLevel::from_mw(p_mw)?;
        let engine = decoder_from_raw(decoder)?.instantiate(&AnnealParams::default());
        let r = engine.decode(y, channel, p, &scheme, &RandomStream::new(seed, 0))?;
        std::slice::from_raw_parts_mut(qubits_out, m).copy_from_slice(r.qubits.as_slice());
        *out_len = m;
        if !out_metric.is_null() {
            *out_metric = r.metric;
        }
        Ok(())
    })
}

/// Runs a BER sweep described by a TOML config and returns the CSV text
/// through `out_csv`; release it with [`nq_string_free`].
///
/// # Safety
/// `config_toml` must be a NUL-terminated string; `out_csv` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nq_ber_sweep_csv(
    config_toml: *const c_char,
    out_csv: *mut *mut c_char,
) -> NqStatus {
    guard(|| {
        let out_csv = out(out_csv, "out_csv")?;
        if config_toml.is_null() {
            return Err(fail(NqStatus::NullPointer, "config_toml is null"));
        }
        let text = CStr::from_ptr(config_toml)
            .to_str()
            .map_err(|e| fail(NqStatus::InvalidUtf8, e.to_string()))?;
        let config = SimulationConfig::from_toml_str(text)?;
        let csv = csv_string(&run_ber_sweep(&config)?)?;
        let csv = CString::new(csv).map_err(|e| fail(NqStatus::Internal, e.to_string()))?;
        *out_csv = csv.into_raw();
        Ok(())
    })
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn nq_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
