//! Plain-text QUBO dump:
//!
//! ```text
//! M <m>
//! OFFSET <value>
//! <i> <j> <value>     one line per nonzero coefficient, 0-based, i <= j
//! ```
//!
//! Values use the shortest decimal that round-trips to the same `f64`,
//! which never needs more than 17 significant digits.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::qubo::QuboMatrix;

pub fn write_dump<W: Write>(qubo: &QuboMatrix, mut out: W) -> Result<()> {
    writeln!(out, "M {}", qubo.num_qubits())?;
    writeln!(out, "OFFSET {}", qubo.offset())?;
    for ((i, j), v) in qubo.iter() {
        writeln!(out, "{i} {j} {v}")?;
    }
    Ok(())
}

pub fn parse_dump<R: BufRead>(input: R) -> Result<QuboMatrix> {
    let bad = |line: usize, msg: &str| Error::Config(format!("QUBO dump line {line}: {msg}"));
    let mut lines = input.lines().enumerate();

    let m = match lines.next() {
        Some((_, l)) => {
            let l = l?;
            l.strip_prefix("M ")
                .and_then(|v| v.trim().parse::<usize>().ok())
                .ok_or_else(|| bad(1, "expected `M <m>`"))?
        }
        None => return Err(bad(1, "empty input")),
    };
    let mut qubo = QuboMatrix::new(m);
    let offset = match lines.next() {
        Some((_, l)) => {
            let l = l?;
            l.strip_prefix("OFFSET ")
                .and_then(|v| v.trim().parse::<f64>().ok())
                .ok_or_else(|| bad(2, "expected `OFFSET <value>`"))?
        }
        None => return Err(bad(2, "missing OFFSET line")),
    };
    qubo.set_offset(offset)?;

    for (idx, line) in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [i, j, v] = fields[..] else {
            return Err(bad(idx + 1, "expected `<i> <j> <value>`"));
        };
        let i: usize = i.parse().map_err(|_| bad(idx + 1, "bad row index"))?;
        let j: usize = j.parse().map_err(|_| bad(idx + 1, "bad column index"))?;
        let v: f64 = v.parse().map_err(|_| bad(idx + 1, "bad value"))?;
        if i > j {
            return Err(bad(idx + 1, "row index exceeds column index"));
        }
        qubo.add(i, j, v)?;
    }
    Ok(qubo)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn single_bpsk_dump() {
        let mut q = QuboMatrix::new(1);
        q.add(0, 0, -4.0).unwrap();
        q.set_offset(4.0).unwrap();
        let mut buf = Vec::new();
        write_dump(&q, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "M 1\nOFFSET 4\n0 0 -4\n");
    }

    #[test]
    fn malformed_dumps() {
        for text in [
            "",
            "M x\n",
            "M 2\n",
            "M 2\nOFFSET 0\n1 0 3\n",
            "M 2\nOFFSET 0\n0 1\n",
            "M 1\nOFFSET 0\n0 1 2\n",
        ] {
            assert!(parse_dump(text.as_bytes()).is_err(), "{text:?}");
        }
    }

    proptest! {
        #[test]
        fn dump_round_trips_bit_exactly(
            entries in proptest::collection::vec((0usize..6, 0usize..6, -1e6f64..1e6), 0..20),
            offset in -1e6f64..1e6,
        ) {
            let mut q = QuboMatrix::new(6);
            for (i, j, v) in entries {
                q.add(i, j, v).unwrap();
            }
            q.set_offset(offset).unwrap();
            let mut buf = Vec::new();
            write_dump(&q, &mut buf).unwrap();
            prop_assert_eq!(parse_dump(buf.as_slice()).unwrap(), q);
        }
    }
}
