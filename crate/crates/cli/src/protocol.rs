use std::io::Write;

use ogd_core::protocol::{ConvergenceStudy, DEFAULT_SCHEDULE};
use ogd_core::{ogd_convergence, TwoModeCov};

use crate::error::{CliError, Result};
use crate::format::num;

pub const PROTOCOL_HEADER: [&str; 6] = ["vs", "i_local", "i_joint", "gap", "ogd", "|gap-ogd|"];

/// Comma-separated increasing list of signal variances.
pub fn parse_schedule(s: &str) -> Result<Vec<f64>> {
    let values = s
        .split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| CliError::input(format!("bad signal variance `{}`", p.trim())))
        })
        .collect::<Result<Vec<_>>>()?;
    if values.is_empty() {
        return Err(CliError::input("empty signal-variance list"));
    }
    Ok(values)
}

pub fn default_schedule() -> Vec<f64> {
    DEFAULT_SCHEDULE.to_vec()
}

pub fn run(state: &TwoModeCov, schedule: &[f64], seed: u64) -> Result<ConvergenceStudy> {
    Ok(ogd_convergence(state, schedule, seed)?)
}

pub fn write_csv<W: Write>(study: &ConvergenceStudy, out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(PROTOCOL_HEADER)?;
    for p in &study.points {
        w.write_record([
            num(p.vs),
            num(p.i_local),
            num(p.i_joint),
            num(p.gap),
            num(study.ogd),
            num(p.distance),
        ])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}
