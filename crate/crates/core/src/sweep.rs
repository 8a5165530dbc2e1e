//! Rate reports over a grid of relay positions, written as CSV.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::channel::{ChannelError, ChannelParams};
use crate::search::{report, RateReport, SearchConfig, SearchError};

#[derive(Debug, Error)]
pub enum SweepError {
    #[error("distance range [{d_min}, {d_max}] must satisfy 0 < d_min < d_max < 1")]
    Range { d_min: f64, d_max: f64 },
    #[error("need at least 2 steps, got {0}")]
    Steps(usize),
    #[error("at d = {d}: {source}")]
    Point { d: f64, source: SearchError },
    #[error(transparent)]
    Channel(#[from] ChannelError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Powers and noise levels held fixed while the relay moves.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Powers {
    pub p1: f64,
    pub p2: f64,
    pub n1: f64,
    pub n2: f64,
}

impl Default for Powers {
    fn default() -> Self {
        Powers {
            p1: 5.0,
            p2: 5.0,
            n1: 1.0,
            n2: 1.0,
        }
    }
}

impl Powers {
    pub fn channel(&self, d: f64) -> Result<ChannelParams<f64>, ChannelError> {
        ChannelParams::from_geometry(d, self.p1, self.p2, self.n1, self.n2)
    }
}

/// One CSV row. Field order is the column order.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub d: f64,
    pub r_df: f64,
    pub r_cf: f64,
    pub r_sf: f64,
    pub r_bdf: f64,
    pub r_cs: f64,
    pub rho_df: f64,
    pub delta_cf: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta_prime: f64,
}

impl SweepRow {
    pub fn new(d: f64, r: &RateReport) -> Self {
        SweepRow {
            d,
            r_df: r.r_df,
            r_cf: r.r_cf,
            r_sf: r.r_sf,
            r_bdf: r.r_bdf,
            r_cs: r.r_cs,
            rho_df: r.arg_df,
            delta_cf: r.arg_cf,
            alpha: r.arg_sf.alpha(),
            beta: r.arg_sf.beta(),
            gamma: r.arg_sf.gamma(),
            delta_prime: r.arg_sf.delta_prime(),
        }
    }
}

pub const CSV_HEADER: &str = "d,r_df,r_cf,r_sf,r_bdf,r_cs,rho_df,delta_cf,alpha,beta,gamma,delta_prime";

/// `steps` evenly spaced distances from `d_min` to `d_max` inclusive.
pub fn distance_grid(d_min: f64, d_max: f64, steps: usize) -> Result<Vec<f64>, SweepError> {
    if !(d_min > 0.0 && d_max < 1.0 && d_min < d_max) {
        return Err(SweepError::Range { d_min, d_max });
    }
    if steps < 2 {
        return Err(SweepError::Steps(steps));
    }
    let n = (steps - 1) as f64;
    Ok((0..steps)
        .map(|i| if i == steps - 1 { d_max } else { d_min + (d_max - d_min) * i as f64 / n })
        .collect())
}

pub fn run_point(d: f64, powers: &Powers, cfg: &SearchConfig) -> Result<(SweepRow, RateReport), SweepError> {
    let ch = powers.channel(d)?;
    let r = report(&ch, cfg).map_err(|source| SweepError::Point { d, source })?;
    Ok((SweepRow::new(d, &r), r))
}

/// Reports at every distance, in grid order whatever the completion order.
pub fn run_sweep(
    distances: &[f64],
    powers: &Powers,
    cfg: &SearchConfig,
) -> Result<Vec<(SweepRow, RateReport)>, SweepError> {
    distances
        .par_iter()
        .map(|&d| run_point(d, powers, cfg))
        .collect()
}

/// Writes the header and rows. Floats use the shortest representation
/// that round-trips, so output is exact and locale independent.
pub fn write_csv<W: Write>(out: W, rows: &[SweepRow]) -> Result<(), SweepError> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    if rows.is_empty() {
        w.write_record(CSV_HEADER.split(','))?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_endpoints_and_errors() {
        let g = distance_grid(0.05, 0.95, 46).unwrap();
        assert_eq!(g.len(), 46);
        assert_eq!(g[0], 0.05);
        assert_eq!(g[45], 0.95);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        assert!(distance_grid(0.0, 0.5, 3).is_err());
        assert!(distance_grid(0.2, 1.0, 3).is_err());
        assert!(distance_grid(0.5, 0.4, 3).is_err());
        assert!(matches!(distance_grid(0.1, 0.2, 1), Err(SweepError::Steps(1))));
    }

    #[test]
    fn header_matches_row_fields() {
        let mut buf = Vec::new();
        write_csv(&mut buf, &[]).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), format!("{CSV_HEADER}\n"));

        let row = SweepRow {
            d: 0.5,
            r_df: 1.0,
            r_cf: 2.0,
            r_sf: 2.0,
            r_bdf: 1.0,
            r_cs: 3.0,
            rho_df: 0.0,
            delta_cf: 1.3,
            alpha: 0.0,
            beta: 0.0,
            gamma: 0.0,
            delta_prime: f64::INFINITY,
        };
        let mut buf = Vec::new();
        write_csv(&mut buf, &[row]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some(CSV_HEADER));
        assert_eq!(lines.next(), Some("0.5,1.0,2.0,2.0,1.0,3.0,0.0,1.3,0.0,0.0,0.0,inf"));
    }
}
