use std::io::{self, Write};

use crate::error::{domain, Result};
use crate::grid::RadialGrid;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Picard,
    RungeKutta,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Picard => "picard",
            Method::RungeKutta => "rk",
        }
    }
}

/// Sampled solution `(psi, u = r psi')` on a radial grid.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub grid: RadialGrid,
    pub psi: Vec<f64>,
    pub u: Vec<f64>,
    /// Initial slope `psi'(r0)`, with its original sign.
    pub psi1: f64,
    /// Last node `r` such that `sign(psi1) * psi` lies in `(0, delta]` on all
    /// nodes of `(r0, r]`; equals `r0` when the first interior node is
    /// already outside.
    pub window_end: f64,
    pub method: Method,
}

impl Trajectory {
    pub fn r0(&self) -> f64 {
        self.grid.r0()
    }

    pub fn nodes(&self) -> &[f64] {
        self.grid.nodes()
    }

    /// Number of nodes with `r <= window_end`, `r0` included.
    pub fn window_len(&self) -> usize {
        self.grid.nodes().partition_point(|&r| r <= self.window_end)
    }

    /// Number of nodes with `r <= r_max`.
    pub fn len_up_to(&self, r_max: f64) -> usize {
        self.grid.nodes().partition_point(|&r| r <= r_max)
    }

    /// Writes the `r,psi,u` table with 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "r,psi,u")?;
        for ((r, p), u) in self.grid.nodes().iter().zip(&self.psi).zip(&self.u) {
            writeln!(w, "{r:.16e},{p:.16e},{u:.16e}")?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("csv is ascii")
    }

    /// `psi_other - psi_self` node by node; both must sit on the same nodes.
    pub fn deviation_from(&self, other: &Trajectory) -> Result<Vec<f64>> {
        if self.grid.nodes() != other.grid.nodes() {
            return Err(domain("trajectories are sampled on different grids"));
        }
        Ok(other.psi.iter().zip(&self.psi).map(|(b, a)| b - a).collect())
    }
}

/// Builds a trajectory from the solution for `|psi1|`, negating it when
/// `psi1 < 0`.
pub(crate) fn from_normalised(
    grid: &RadialGrid,
    mut psi: Vec<f64>,
    mut u: Vec<f64>,
    psi1: f64,
    delta: f64,
    method: Method,
) -> Trajectory {
    let window_end = window_end(grid, &psi, delta);
    if psi1 < 0.0 {
        psi.iter_mut().for_each(|p| *p = -*p);
        u.iter_mut().for_each(|p| *p = -*p);
    }
    Trajectory {
        grid: grid.clone(),
        psi,
        u,
        psi1,
        window_end,
        method,
    }
}

/// Window end for `psi` normalised so that the initial slope is positive.
pub(crate) fn window_end(grid: &RadialGrid, psi_normalised: &[f64], delta: f64) -> f64 {
    let inside = psi_normalised[1..]
        .iter()
        .take_while(|&&p| p > 0.0 && p <= delta)
        .count();
    grid.nodes()[inside]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Trajectory {
        let grid = RadialGrid::uniform(1.0, 2.0, 5).unwrap();
        let psi = vec![0.0, 0.1, 0.2, 0.3, 0.2];
        let window_end = window_end(&grid, &psi, 0.25);
        Trajectory {
            u: vec![1.0; 5],
            grid,
            psi,
            psi1: 1.0,
            window_end,
            method: Method::Picard,
        }
    }

    #[test]
    fn window_stops_before_first_exit() {
        let t = sample();
        assert_eq!(t.window_end, 1.5);
        assert_eq!(t.window_len(), 3);
        let grid = RadialGrid::uniform(1.0, 2.0, 4).unwrap();
        assert_eq!(window_end(&grid, &[0.0, -0.1, 0.1, 0.1], 0.25), 1.0);
        assert_eq!(window_end(&grid, &[0.0, 0.1, 0.1, 0.1], 0.25), 2.0);
    }

    #[test]
    fn csv_layout() {
        let csv = sample().to_csv_string();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("r,psi,u"));
        let first = lines.next().unwrap();
        assert_eq!(first, "1.0000000000000000e0,0.0000000000000000e0,1.0000000000000000e0");
        assert_eq!(csv.lines().count(), 6);
        let parsed: f64 = csv.lines().nth(2).unwrap().split(',').nth(1).unwrap().parse().unwrap();
        assert_eq!(parsed, 0.1);
    }
}
