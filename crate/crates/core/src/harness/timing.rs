use std::fmt;
use std::time::Duration;

use crate::decoders::DecoderKind;
use crate::harness::TimingSample;

/// Mean per-phase decode time of one decoder.
#[derive(Debug, Clone, PartialEq)]
pub struct TimingRow {
    pub decoder: DecoderKind,
    pub samples: usize,
    /// (phase name, mean duration). Single-phase engines report "solve";
    /// the annealer reports build, anneal and readout.
    pub phases: Vec<(&'static str, Duration)>,
    pub total: Duration,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct TimingReport {
    pub rows: Vec<TimingRow>,
}

pub fn timing_report(samples: &[TimingSample]) -> TimingReport {
    let mut kinds: Vec<DecoderKind> = samples.iter().map(|s| s.decoder).collect();
    kinds.sort();
    kinds.dedup();
    let rows = kinds
        .into_iter()
        .map(|decoder| {
            let mine: Vec<_> = samples.iter().filter(|s| s.decoder == decoder).collect();
            let n = mine.len() as u32;
            let mean = |f: &dyn Fn(&TimingSample) -> Duration| {
                mine.iter().map(|s| f(s)).sum::<Duration>() / n
            };
            let phases = match decoder {
                DecoderKind::Annealer => vec![
                    ("build", mean(&|s| s.timing.build)),
                    ("anneal", mean(&|s| s.timing.solve)),
                    ("readout", mean(&|s| s.timing.readout)),
                ],
                _ => vec![("solve", mean(&|s| s.timing.total()))],
            };
            TimingRow {
                decoder,
                samples: mine.len(),
                total: mean(&|s| s.timing.total()),
                phases,
            }
        })
        .collect();
    TimingReport { rows }
}

fn ms(d: Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

impl fmt::Display for TimingReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:<8} {:>8} {:<10} {:>12}",
            "decoder", "samples", "phase", "mean_ms"
        )?;
        for row in &self.rows {
            for (name, d) in &row.phases {
                writeln!(
                    f,
                    "{:<8} {:>8} {:<10} {:>12.6}",
                    row.decoder.name(),
                    row.samples,
                    name,
                    ms(*d)
                )?;
            }
            writeln!(
                f,
                "{:<8} {:>8} {:<10} {:>12.6}",
                row.decoder.name(),
                row.samples,
                "total",
                ms(row.total)
            )?;
        }
        Ok(())
    }
}
