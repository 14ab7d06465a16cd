//! Radial grids starting at `r0`.
//!
//! Nodes are stored as offsets `s_i = r_i - r0` next to the absolute radii so
//! that spacings near `r0` keep full relative precision.

use crate::error::{Error, Result};

/// Spread `h_first / h_last` aimed for by [`default_ratio`] on large grids.
pub const DEFAULT_SPREAD: f64 = 1e-4;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Grading {
    Uniform,
    /// Spacings grow to the right: `h_i / h_{i+1} = ratio`.
    GeometricTowardLeft {
        ratio: f64,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct RadialGrid {
    nodes: Vec<f64>,
    offsets: Vec<f64>,
    grading: Grading,
}

/// Geometric ratio used when none is configured: `0.9` for small grids, and
/// for larger ones the ratio giving a first-to-last spacing spread of
/// [`DEFAULT_SPREAD`] (a fixed 0.9 would underflow the first spacing).
pub fn default_ratio(n_nodes: usize) -> f64 {
    let steps = n_nodes.saturating_sub(2).max(1) as f64;
    DEFAULT_SPREAD.powf(1.0 / steps).max(0.9)
}

impl RadialGrid {
    pub fn uniform(r0: f64, r_end: f64, n_nodes: usize) -> Result<Self> {
        check_endpoints(r0, r_end, n_nodes)?;
        let len = r_end - r0;
        let last = (n_nodes - 1) as f64;
        let offsets = (0..n_nodes)
            .map(|i| if i + 1 == n_nodes { len } else { len * i as f64 / last })
            .collect();
        Self::from_offsets(r0, offsets, Grading::Uniform)
    }

    pub fn geometric(r0: f64, r_end: f64, n_nodes: usize, ratio: f64) -> Result<Self> {
        check_endpoints(r0, r_end, n_nodes)?;
        if !(ratio > 0.0 && ratio < 1.0) {
            return Err(Error::InvalidGrid(format!(
                "geometric ratio must lie in (0,1), got {ratio}"
            )));
        }
        let len = r_end - r0;
        // s_i = len * (q^-i - 1) / (q^-(n-1) - 1)
        let lq = -ratio.ln();
        let denom = (lq * (n_nodes - 1) as f64).exp_m1();
        if !denom.is_finite() {
            return Err(Error::InvalidGrid(format!(
                "ratio {ratio} over {n_nodes} nodes overflows the spacing range"
            )));
        }
        let offsets = (0..n_nodes)
            .map(|i| {
                if i + 1 == n_nodes {
                    len
                } else {
                    len * (lq * i as f64).exp_m1() / denom
                }
            })
            .collect();
        Self::from_offsets(r0, offsets, Grading::GeometricTowardLeft { ratio })
    }

    /// Geometric grid with [`default_ratio`].
    pub fn graded(r0: f64, r_end: f64, n_nodes: usize) -> Result<Self> {
        Self::geometric(r0, r_end, n_nodes, default_ratio(n_nodes))
    }

    pub fn with_grading(r0: f64, r_end: f64, n_nodes: usize, grading: Grading) -> Result<Self> {
        match grading {
            Grading::Uniform => Self::uniform(r0, r_end, n_nodes),
            Grading::GeometricTowardLeft { ratio } => Self::geometric(r0, r_end, n_nodes, ratio),
        }
    }

    fn from_offsets(r0: f64, offsets: Vec<f64>, grading: Grading) -> Result<Self> {
        let nodes: Vec<f64> = offsets.iter().map(|s| r0 + s).collect();
        if let Some(i) = nodes.windows(2).position(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidGrid(format!(
                "nodes {i} and {} coincide in floating point (spacing too small)",
                i + 1
            )));
        }
        Ok(RadialGrid {
            nodes,
            offsets,
            grading,
        })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// `r_i - r0` for each node.
    pub fn offsets(&self) -> &[f64] {
        &self.offsets
    }

    pub fn r0(&self) -> f64 {
        self.nodes[0]
    }

    pub fn r_end(&self) -> f64 {
        *self.nodes.last().expect("grid has nodes")
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn grading(&self) -> Grading {
        self.grading
    }

    pub fn spacing(&self, i: usize) -> f64 {
        self.offsets[i + 1] - self.offsets[i]
    }

    /// `ln(r_i / r0)`, accurate near `r0`.
    pub fn log_ratio(&self, i: usize) -> f64 {
        (self.offsets[i] / self.nodes[0]).ln_1p()
    }

    /// Leading nodes with `r <= r_max`; fails if fewer than three remain.
    pub fn truncated(&self, r_max: f64) -> Result<Self> {
        let keep = self.nodes.partition_point(|&r| r <= r_max);
        if keep < 3 {
            return Err(Error::InvalidGrid(format!(
                "truncating at r = {r_max} leaves {keep} nodes"
            )));
        }
        Ok(RadialGrid {
            nodes: self.nodes[..keep].to_vec(),
            offsets: self.offsets[..keep].to_vec(),
            grading: self.grading,
        })
    }
}

fn check_endpoints(r0: f64, r_end: f64, n_nodes: usize) -> Result<()> {
    if !(r0.is_finite() && r0 >= 1.0) {
        return Err(Error::InvalidGrid(format!("r0 must be finite and >= 1, got {r0}")));
    }
    if !(r_end.is_finite() && r_end > r0) {
        return Err(Error::InvalidGrid(format!("grid end {r_end} must exceed r0 = {r0}")));
    }
    if n_nodes < 3 {
        return Err(Error::InvalidGrid(format!("need at least 3 nodes, got {n_nodes}")));
    }
    Ok(())
}
