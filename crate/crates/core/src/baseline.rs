//! Classical unsupervised binning baselines for side-by-side comparison.
//! Both look only at x and ignore y entirely, which is exactly the
//! contrast the impact-driven solvers are meant to expose.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::DataSeries;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BinMethod {
    EqualWidth,
    EqualFrequency,
}

impl std::fmt::Display for BinMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BinMethod::EqualWidth => write!(f, "equal_width"),
            BinMethod::EqualFrequency => write!(f, "equal_frequency"),
        }
    }
}

/// A baseline binning: `k - 1` interior edges on the x axis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BinSpec {
    pub method: BinMethod,
    pub k: usize,
    pub edges: Vec<f64>,
    /// For equal-frequency bins, whether each edge splits a run of tied
    /// x values. Equal-width edges are not data points, so no flags.
    pub tie_split_flags: Option<Vec<bool>>,
}

/// Splits the x range into k equal-length intervals:
/// `edges[j] = x_min + (j + 1) * (x_max - x_min) / k`.
pub fn equal_width(series: &DataSeries, k: usize) -> Result<BinSpec> {
    if k < 1 {
        return Err(Error::KZero);
    }
    let x_min = series.x_at(0);
    let x_max = series.x_at(series.len() - 1);
    let span = x_max - x_min;
    let edges = (0..k - 1)
        .map(|j| x_min + (j + 1) as f64 * span / k as f64)
        .collect();
    Ok(BinSpec {
        method: BinMethod::EqualWidth,
        k,
        edges,
        tie_split_flags: None,
    })
}

/// Places floor(n/k)-sized index blocks into each bin: bin j covers the
/// canonical indices `(floor(j*n/k), floor((j+1)*n/k)]`, and each edge
/// is the x value of its bin's last point.
pub fn equal_frequency(series: &DataSeries, k: usize) -> Result<BinSpec> {
    if k < 1 {
        return Err(Error::KZero);
    }
    let n = series.len();
    if k > n {
        return Err(Error::KTooLarge { k, n });
    }
    let boundaries: Vec<usize> = (1..k).map(|j| j * n / k).collect();
    let edges = boundaries.iter().map(|&b| series.x_at(b - 1)).collect();
    let flags = boundaries
        .iter()
        .map(|&b| series.cut_splits_x_tie(b))
        .collect();
    Ok(BinSpec {
        method: BinMethod::EqualFrequency,
        k,
        edges,
        tie_split_flags: Some(flags),
    })
}
