//! Command-line front end. [`run`] is the whole program minus process
//! plumbing, so tests can drive it with in-memory streams.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use crate::channel::{place_users, sample_channel, superimpose, ChannelRealization};
use crate::decoders::{AnnealParams, DecoderKind};
use crate::error::{Error, Result};
use crate::harness::{
    collect_timings, run_ber_sweep, timing_report, verify_closed_form, write_csv, SimulationConfig,
    DEFAULT_VERIFY_TOLERANCE,
};
use crate::modulation::{random_symbols, ModulationKind, ModulationScheme};
use crate::qubo::{build_qubo_closed_form, build_qubo_generic, write_dump};
use crate::signal::{
    dbm_to_linear, sample_circular_gaussian, ComplexSample, PowerLevel, RandomStream,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
/// Reserved for `verify` finding a deviation beyond tolerance.
pub const EXIT_VERIFY_FAILED: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "noma-qubo",
    version,
    about = "QUBO-based ML detection for uplink NOMA"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a BER sweep described by a config file and write CSV
    BerSweep(SweepArgs),
    /// Decode one random instance with every decoder
    Decode(DecodeArgs),
    /// Print the QUBO of one instance
    QuboDump(DumpArgs),
    /// Cross-check closed-form QUBO coefficients against the generic expansion
    Verify(VerifyArgs),
    /// Report mean per-phase decode times
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long)]
    config: PathBuf,
    /// Output CSV path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    parallel: Option<usize>,
}

#[derive(Debug, Args)]
struct InstanceArgs {
    #[arg(long, default_value = "bpsk")]
    scheme: String,
    #[arg(long, default_value_t = 3)]
    users: usize,
    #[arg(long, default_value_t = 10.0, allow_hyphen_values = true)]
    power_dbm: f64,
    #[arg(long, default_value_t = -30.0, allow_hyphen_values = true)]
    noise_dbm: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Args)]
struct DecodeArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    /// Comma-separated subset of bf,sic,qa
    #[arg(long, default_value = "bf,sic,qa")]
    decoders: String,
}

#[derive(Debug, Args)]
struct DumpArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    /// Explicit channel gains as `re:im` pairs, comma separated; overrides
    /// the random draw and sets the user count
    #[arg(long, allow_hyphen_values = true)]
    gains: Option<String>,
    /// Explicit received sample `re:im`; requires --gains
    #[arg(long, allow_hyphen_values = true)]
    received: Option<String>,
    /// Use the closed-form builder instead of the generic expansion
    #[arg(long)]
    closed_form: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// bpsk, qpsk or qam16 (all three when omitted)
    #[arg(long)]
    scheme: Option<String>,
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_VERIFY_TOLERANCE)]
    tolerance: f64,
}

#[derive(Debug, Args)]
struct BenchArgs {
    /// Sweep config to time; flags below describe a single-power run otherwise
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    instance: InstanceArgs,
    #[arg(long, default_value_t = 5)]
    trials: u64,
}

/// Runs the CLI. Returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_ERROR,
            };
            let target: &mut dyn Write = if code == EXIT_OK { stdout } else { stderr };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let outcome = match cli.command {
        Command::BerSweep(a) => ber_sweep(a, stdout),
        Command::Decode(a) => decode(a, stdout),
        Command::QuboDump(a) => qubo_dump(a, stdout),
        Command::Verify(a) => verify(a, stdout),
        Command::Bench(a) => bench(a, stdout),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_ERROR
        }
    }
}

fn with_output(
    path: Option<&PathBuf>,
    stdout: &mut dyn Write,
    f: impl FnOnce(&mut dyn Write) -> Result<()>,
) -> Result<()> {
    match path {
        Some(p) => {
            let mut w = BufWriter::new(File::create(p)?);
            f(&mut w)?;
            w.flush()?;
            Ok(())
        }
        None => f(stdout),
    }
}

fn ber_sweep(a: SweepArgs, stdout: &mut dyn Write) -> Result<i32> {
    let mut config = SimulationConfig::from_path(&a.config)?;
    if let Some(seed) = a.seed {
        config.seed = seed;
    }
    if let Some(trials) = a.trials {
        config.trials = trials;
    }
    if let Some(width) = a.parallel {
        config.parallel_width = width;
    }
    config.validate()?;
    let records = run_ber_sweep(&config)?;
    with_output(a.out.as_ref(), stdout, |w| write_csv(&records, w))?;
    Ok(EXIT_OK)
}

struct Instance {
    scheme: ModulationScheme,
    channel: ChannelRealization,
    power: PowerLevel,
    sent: Option<Vec<ComplexSample>>,
    y: ComplexSample,
}

fn random_instance(a: &InstanceArgs) -> Result<Instance> {
    let scheme = ModulationScheme::new(a.scheme.parse()?);
    let power = PowerLevel::from_dbm(a.power_dbm)?;
    let mut rng = RandomStream::new(a.seed, 0).rng();
    let channel = sample_channel(&mut rng, &place_users(a.users)?)?;
    let sent = random_symbols(&scheme, a.users, &mut rng);
    let noise = sample_circular_gaussian(&mut rng, dbm_to_linear(a.noise_dbm))?;
    let y = superimpose(&sent, &channel, power, noise)?;
    Ok(Instance {
        scheme,
        channel,
        power,
        sent: Some(sent),
        y,
    })
}

fn parse_complex(text: &str) -> Result<ComplexSample> {
    let bad = || Error::Config(format!("expected `re:im`, got `{text}`"));
    let (re, im) = text.trim().split_once(':').ok_or_else(bad)?;
    let re: f64 = re.trim().parse().map_err(|_| bad())?;
    let im: f64 = im.trim().parse().map_err(|_| bad())?;
    ComplexSample::try_new(re, im)
}

fn decode(a: DecodeArgs, out: &mut dyn Write) -> Result<i32> {
    let inst = random_instance(&a.instance)?;
    let kinds = a
        .decoders
        .split(',')
        .map(|d| d.trim().parse::<DecoderKind>())
        .collect::<Result<Vec<_>>>()?;
    let sent = inst.sent.as_deref().unwrap_or_default();
    writeln!(
        out,
        "scheme {} users {} power {} dBm noise {} dBm seed {}",
        inst.scheme.name(),
        inst.channel.n_users(),
        a.instance.power_dbm,
        a.instance.noise_dbm,
        a.instance.seed
    )?;
    for (k, h) in inst.channel.gains().iter().enumerate() {
        writeln!(
            out,
            "  h[{k}] = {h}  (d = {} m)",
            inst.channel.deployment().distances()[k]
        )?;
    }
    writeln!(out, "  y = {}", inst.y)?;
    writeln!(
        out,
        "  sent   qubits {}",
        inst.scheme.symbols_to_qubits(sent)?
    )?;
    let stream = RandomStream::new(a.instance.seed, 0).derive(crate::harness::ANNEAL_STREAM_TAG);
    for kind in kinds {
        let decoder = kind.instantiate(&AnnealParams::default());
        let r = decoder.decode(inst.y, &inst.channel, inst.power, &inst.scheme, &stream)?;
        let errors = crate::modulation::count_bit_errors(&inst.scheme, sent, &r.symbols)?;
        writeln!(
            out,
            "  {:<4} qubits {}  metric {:.6e}  bit errors {}  time {:.3} ms",
            kind.name(),
            r.qubits,
            r.metric,
            errors,
            r.timing.total().as_secs_f64() * 1e3
        )?;
    }
    Ok(EXIT_OK)
}

fn qubo_dump(a: DumpArgs, stdout: &mut dyn Write) -> Result<i32> {
    let inst = match &a.gains {
        Some(gains) => {
            let gains = gains
                .split(',')
                .map(parse_complex)
                .collect::<Result<Vec<_>>>()?;
            let y = match &a.received {
                Some(r) => parse_complex(r)?,
                None => return Err(Error::Config("--gains requires --received".into())),
            };
            Instance {
                scheme: ModulationScheme::new(a.instance.scheme.parse()?),
                channel: ChannelRealization::from_gains(gains)?,
                power: PowerLevel::from_dbm(a.instance.power_dbm)?,
                sent: None,
                y,
            }
        }
        None if a.received.is_some() => {
            return Err(Error::Config("--received requires --gains".into()))
        }
        None => random_instance(&a.instance)?,
    };
    let qubo = if a.closed_form {
        build_qubo_closed_form(inst.y, &inst.channel, inst.power, &inst.scheme)?
    } else {
        build_qubo_generic(inst.y, &inst.channel, inst.power, &inst.scheme)?
    };
    with_output(a.out.as_ref(), stdout, |w| write_dump(&qubo, w))?;
    Ok(EXIT_OK)
}

fn verify(a: VerifyArgs, out: &mut dyn Write) -> Result<i32> {
    let kinds = match &a.scheme {
        Some(s) => vec![s.parse::<ModulationKind>()?],
        None => vec![
            ModulationKind::Bpsk,
            ModulationKind::Qpsk,
            ModulationKind::Qam16,
        ],
    };
    if !(a.tolerance.is_finite() && a.tolerance > 0.0) {
        return Err(Error::Config(format!(
            "tolerance must be positive, got {}",
            a.tolerance
        )));
    }
    let mut failed = false;
    for kind in kinds {
        let start = Instant::now();
        let report = verify_closed_form(kind, a.trials, a.seed)?;
        let ok = report.max_deviation < a.tolerance;
        failed |= !ok;
        writeln!(
            out,
            "{:<6} trials {}  max deviation {:.3e}  (worst trial {})  {}  {:.2} s",
            kind.name(),
            report.trials,
            report.max_deviation,
            report.worst_trial,
            if ok { "ok" } else { "DEVIATION" },
            start.elapsed().as_secs_f64()
        )?;
    }
    Ok(if failed { EXIT_VERIFY_FAILED } else { EXIT_OK })
}

fn bench(a: BenchArgs, out: &mut dyn Write) -> Result<i32> {
    let config = match &a.config {
        Some(p) => SimulationConfig::from_path(p)?,
        None => SimulationConfig {
            n_users: a.instance.users,
            scheme: a.instance.scheme.parse()?,
            power_dbm_list: vec![a.instance.power_dbm],
            noise_dbm: a.instance.noise_dbm,
            trials: a.trials,
            seed: a.instance.seed,
            decoders: DecoderKind::ALL.to_vec(),
            ..Default::default()
        },
    };
    let samples = collect_timings(&config)?;
    write!(out, "{}", timing_report(&samples))?;
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_parsing() {
        assert_eq!(parse_complex("1:0").unwrap(), ComplexSample::real(1.0));
        assert_eq!(
            parse_complex(" -0.5 : 2e-3 ").unwrap(),
            ComplexSample::new(-0.5, 2e-3)
        );
        assert!(parse_complex("1").is_err());
        assert!(parse_complex("a:b").is_err());
        assert!(parse_complex("nan:0").is_err());
    }
}
