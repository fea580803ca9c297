use std::fs;
use std::path::Path;

use crate::engine::{Checkpoint, RunTrace};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub const TRACE_HEADER: &str = "pass,iter,objective,test_loss,feasibility,wall_ms";

/// Values use Rust's shortest round-trip formatting, which never needs more
/// than 17 significant digits and parses back to the same double.
pub fn trace_csv_string<F: Scalar>(trace: &RunTrace<F>) -> String {
    let mut out = String::from(TRACE_HEADER);
    out.push('\n');
    for c in &trace.records {
        out.push_str(&format!(
            "{:?},{},{:?},{:?},{:?},{:?}\n",
            c.passes.as_f64(),
            c.iter,
            c.objective.as_f64(),
            c.test_loss.as_f64(),
            c.feasibility.as_f64(),
            c.wall_ms
        ));
    }
    out
}

pub fn write_trace_csv<F: Scalar>(trace: &RunTrace<F>, path: impl AsRef<Path>) -> Result<()> {
    if trace.is_empty() {
        return Err(Error::InvalidInput("refusing to write an empty trace".into()));
    }
    let path = path.as_ref();
    fs::write(path, trace_csv_string(trace)).map_err(|e| Error::io(path, e))
}

pub fn read_trace_csv(path: impl AsRef<Path>) -> Result<RunTrace<f64>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_trace_csv(&text, &path.display().to_string())
}

pub fn parse_trace_csv(text: &str, origin: &str) -> Result<RunTrace<f64>> {
    let perr = |line: usize, msg: String| Error::Parse {
        path: origin.to_string(),
        line,
        msg,
    };
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim() == TRACE_HEADER => {}
        _ => return Err(perr(1, format!("expected header `{TRACE_HEADER}`"))),
    }
    let mut trace = RunTrace::default();
    for (lineno, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 6 {
            return Err(perr(lineno + 1, format!("expected 6 fields, got {}", f.len())));
        }
        let num = |k: usize| -> Result<f64> {
            f[k].trim()
                .parse()
                .map_err(|_| perr(lineno + 1, format!("bad number `{}`", f[k])))
        };
        let iter = f[1]
            .trim()
            .parse()
            .map_err(|_| perr(lineno + 1, format!("bad iteration `{}`", f[1])))?;
        let c = Checkpoint {
            iter,
            passes: num(0)?,
            objective: num(2)?,
            test_loss: num(3)?,
            feasibility: num(4)?,
            wall_ms: num(5)?,
        };
        if trace.last().is_some_and(|l| l.passes > c.passes) {
            return Err(perr(lineno + 1, "pass column decreases".into()));
        }
        trace.push(c);
    }
    Ok(trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn same_bits(a: f64, b: f64) -> bool {
        a.to_bits() == b.to_bits()
    }

    #[test]
    fn single_checkpoint_two_lines() {
        let mut t = RunTrace::default();
        t.push(Checkpoint {
            iter: 0,
            passes: 0.0,
            objective: 0.693,
            test_loss: f64::NAN,
            feasibility: 0.0,
            wall_ms: 0.0,
        });
        let s = trace_csv_string(&t);
        assert_eq!(s.lines().count(), 2);
        assert!(s.starts_with(TRACE_HEADER));
    }

    #[test]
    fn round_trip_is_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut t = RunTrace::default();
        let mut pass = 0.0;
        for i in 0..200 {
            pass += rng.random::<f64>();
            let wild = f64::from_bits(rng.random::<u64>() & !(0x7ffu64 << 52) | (rng.random_range(1..2046u64) << 52));
            t.push(Checkpoint {
                iter: i * 3,
                passes: pass,
                objective: wild,
                test_loss: if i % 7 == 0 { f64::NAN } else { rng.random() },
                feasibility: rng.random::<f64>() * 1e-300,
                wall_ms: rng.random::<f64>() * 1e5,
            });
        }
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("trace.csv");
        write_trace_csv(&t, &path).unwrap();
        let back = read_trace_csv(&path).unwrap();
        assert_eq!(back.len(), t.len());
        for (a, b) in t.records.iter().zip(&back.records) {
            assert_eq!(a.iter, b.iter);
            assert!(same_bits(a.passes, b.passes));
            assert!(same_bits(a.objective, b.objective));
            assert!(same_bits(a.test_loss, b.test_loss));
            assert!(same_bits(a.feasibility, b.feasibility));
            assert!(same_bits(a.wall_ms, b.wall_ms));
        }
        assert!(back.records.windows(2).all(|w| w[0].passes <= w[1].passes));
    }

    #[test]
    fn rejects_malformed() {
        assert!(parse_trace_csv("pass,iter\n", "m").is_err());
        let h = format!("{TRACE_HEADER}\n");
        assert!(parse_trace_csv(&format!("{h}1,2,3\n"), "m").is_err());
        assert!(parse_trace_csv(&format!("{h}1,x,3,4,5,6\n"), "m").is_err());
        assert!(parse_trace_csv(&format!("{h}2,1,0,0,0,0\n1,2,0,0,0,0\n"), "m").is_err());
        assert!(write_trace_csv(&RunTrace::<f64>::default(), "/nonexistent/x.csv").is_err());
    }
}
