use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::reactor::{ChemState, ChemTrace};

/// Which concentrations the readout observes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReadoutMode {
    /// `P₁, P₂, P₃`
    ProductOnly,
    /// `P₁, P₂, P₃, S₁, S₂, S₃`
    ProductAndSubstrate,
}

impl ReadoutMode {
    pub const ALL: [ReadoutMode; 2] = [ReadoutMode::ProductOnly, ReadoutMode::ProductAndSubstrate];

    pub fn channels(self) -> usize {
        match self {
            ReadoutMode::ProductOnly => 3,
            ReadoutMode::ProductAndSubstrate => 6,
        }
    }

    pub fn observe(self, s: &ChemState) -> impl Iterator<Item = f64> + '_ {
        let subs: &[f64] = match self {
            ReadoutMode::ProductOnly => &[],
            ReadoutMode::ProductAndSubstrate => &s.substrates,
        };
        s.products.iter().chain(subs).copied()
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ReadoutMode::ProductOnly => "product_only",
            ReadoutMode::ProductAndSubstrate => "product_and_substrate",
        }
    }
}

impl std::fmt::Display for ReadoutMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.pad(self.as_str())
    }
}

impl std::str::FromStr for ReadoutMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "product_only" => Ok(ReadoutMode::ProductOnly),
            "product_and_substrate" => Ok(ReadoutMode::ProductAndSubstrate),
            _ => Err(format!("unknown readout mode `{s}` (product_only | product_and_substrate)")),
        }
    }
}

/// Observations with a trailing constant-1 bias column.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignMatrix {
    pub times: Vec<f64>,
    pub x: DMatrix<f64>,
}

impl DesignMatrix {
    /// Builds from observation rows, appending the bias column.
    pub fn from_rows(times: Vec<f64>, rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 || times.len() != n {
            return Err(Error::Dimension { expected: n.max(1), actual: times.len() });
        }
        let c = rows[0].len();
        let mut x = DMatrix::from_element(n, c + 1, 1.0);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != c {
                return Err(Error::Dimension { expected: c, actual: row.len() });
            }
            for (j, v) in row.iter().enumerate() {
                x[(i, j)] = *v;
            }
        }
        Ok(Self { times, x })
    }

    pub fn rows(&self) -> usize {
        self.x.nrows()
    }

    /// Observed channels, excluding the bias column.
    pub fn channels(&self) -> usize {
        self.x.ncols() - 1
    }

    /// Keeps the rows where `keep` is true.
    pub fn select(&self, keep: &[bool]) -> Self {
        let idx: Vec<usize> = keep.iter().enumerate().filter(|(_, k)| **k).map(|(i, _)| i).collect();
        Self {
            times: idx.iter().map(|&i| self.times[i]).collect(),
            x: self.x.select_rows(idx.iter()),
        }
    }
}

/// Samples `[t_from, t_to)` of `trace` every `stride` seconds.
pub fn harvest(trace: &ChemTrace, mode: ReadoutMode, t_from: f64, t_to: f64, stride: f64) -> Result<DesignMatrix> {
    if !(t_to > t_from) {
        return Err(Error::EmptyWindow { from: t_from, to: t_to });
    }
    let step = (stride / trace.dt_sample).round();
    if step < 1.0 || (step * trace.dt_sample - stride).abs() > 1e-9 * stride.max(1.0) {
        return Err(Error::InvalidParam {
            name: "stride",
            reason: format!("{stride} is not a positive multiple of the sample spacing {}", trace.dt_sample),
        });
    }
    let step = step as usize;
    let first = trace.index_of(t_from).ok_or_else(|| Error::InvalidParam {
        name: "t_from",
        reason: format!("{t_from} is not a sample time of the trace"),
    })?;
    let last_t = trace.rows.last().map(|r| r.t).unwrap_or(f64::NEG_INFINITY);
    if t_to > last_t + trace.dt_sample + 1e-9 {
        return Err(Error::InvalidParam { name: "t_to", reason: format!("{t_to} lies beyond the trace end {last_t}") });
    }
    let eps = 1e-9 * trace.dt_sample;
    let picked: Vec<&ChemState> =
        trace.rows[first..].iter().step_by(step).take_while(|r| r.t < t_to - eps).collect();
    if picked.is_empty() {
        return Err(Error::EmptyWindow { from: t_from, to: t_to });
    }
    let c = mode.channels();
    let mut x = DMatrix::from_element(picked.len(), c + 1, 1.0);
    for (i, r) in picked.iter().enumerate() {
        for (j, v) in mode.observe(r).enumerate() {
            x[(i, j)] = v;
        }
    }
    Ok(DesignMatrix { times: picked.iter().map(|r| r.t).collect(), x })
}
