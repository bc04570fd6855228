use std::io::Write;

use crate::error::Result;
use crate::harness::BerRecord;

pub const CSV_HEADER: &str = "power_dbm,user_index,decoder,trials,bit_errors,ber,mean_decode_ns";

/// Ten significant digits in scientific notation.
pub fn format_float(v: f64) -> String {
    format!("{v:.9e}")
}

pub fn write_csv<W: Write>(records: &[BerRecord], mut out: W) -> Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in records {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            format_float(r.power_dbm),
            r.user_index,
            r.decoder,
            r.trials,
            r.bit_errors,
            format_float(r.ber),
            r.mean_decode_ns
        )?;
    }
    Ok(())
}

pub fn csv_string(records: &[BerRecord]) -> Result<String> {
    let mut buf = Vec::new();
    write_csv(records, &mut buf)?;
    Ok(String::from_utf8(buf).expect("CSV output is ASCII"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decoders::DecoderKind;

    #[test]
    fn schema() {
        let r = BerRecord {
            power_dbm: -30.0,
            user_index: 2,
            decoder: DecoderKind::Annealer,
            trials: 3,
            bit_errors: 1,
            ber: 1.0 / 3.0,
            mean_decode_ns: 1234,
        };
        let text = csv_string(&[r]).unwrap();
        assert_eq!(
            text,
            "power_dbm,user_index,decoder,trials,bit_errors,ber,mean_decode_ns\n\
             -3.000000000e1,2,qa,3,1,3.333333333e-1,1234\n"
        );
        assert_eq!(format_float(0.0), "0.000000000e0");
    }
}
