//! Picard iteration on the integral form of the initial value problem
//!
//! ```text
//! psi(r) = r0 psi1 ln(r/r0) - int_{r0}^{r} tau ln(r/tau) f(psi(tau)) dtau
//! ```
//!
//! obtained by integrating `(r psi')' = -r f(psi)` twice. Distances between
//! iterates are measured in the weighted norm `sup |x(r)| / ln(r/r0)`.
//!
//! The integral is evaluated by product integration: `f(psi)` is interpolated
//! linearly between nodes and the smooth kernel `tau ln(r/tau)` is integrated
//! against each hat function. Splitting `ln(r/tau) = ln(r/r0) - ln(tau/r0)`
//! reduces every right endpoint to two running sums, so one sweep over the
//! grid costs O(n).

use crate::error::{domain, Error, Result};
use crate::grid::RadialGrid;
use crate::trajectory::{self, Method, Trajectory};
use crate::vorticity::VorticityModel;

const GL_NODES: [f64; 8] = [
    -0.960_289_856_497_536_3,
    -0.796_666_477_413_626_7,
    -0.525_532_409_916_329,
    -0.183_434_642_495_649_8,
    0.183_434_642_495_649_8,
    0.525_532_409_916_329,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_3,
];
const GL_WEIGHTS: [f64; 8] = [
    0.101_228_536_290_376_3,
    0.222_381_034_453_374_5,
    0.313_706_645_877_887_3,
    0.362_683_783_378_362,
    0.362_683_783_378_362,
    0.313_706_645_877_887_3,
    0.222_381_034_453_374_5,
    0.101_228_536_290_376_3,
];

/// Precomputed cell moments of the Volterra kernel on one grid.
#[derive(Clone, Debug)]
pub struct KernelQuadrature {
    // per cell: [tau*phi_l, tau*phi_r, tau*ln(tau/r0)*phi_l, tau*ln(tau/r0)*phi_r]
    moments: Vec<[f64; 4]>,
    log_ratio: Vec<f64>,
}

impl KernelQuadrature {
    pub fn new(grid: &RadialGrid) -> Self {
        let r0 = grid.r0();
        let off = grid.offsets();
        let moments = (0..grid.len() - 1)
            .map(|j| {
                let (a, h) = (off[j], off[j + 1] - off[j]);
                let mut m = [0.0; 4];
                for (x, w) in GL_NODES.iter().zip(GL_WEIGHTS) {
                    let t = (1.0 + x) / 2.0;
                    let s = a + h * t;
                    let tau = r0 + s;
                    let ell = (s / r0).ln_1p();
                    let (pl, pr) = (1.0 - t, t);
                    let wt = w * tau * h / 2.0;
                    m[0] += wt * pl;
                    m[1] += wt * pr;
                    m[2] += wt * ell * pl;
                    m[3] += wt * ell * pr;
                }
                m
            })
            .collect();
        let log_ratio = (0..grid.len()).map(|i| grid.log_ratio(i)).collect();
        KernelQuadrature { moments, log_ratio }
    }

    pub fn len(&self) -> usize {
        self.log_ratio.len()
    }

    pub fn is_empty(&self) -> bool {
        self.log_ratio.is_empty()
    }

    /// `ln(r_i / r0)` per node.
    pub fn log_ratio(&self) -> &[f64] {
        &self.log_ratio
    }

    /// Fills `first[i] = int tau v` and `kernel[i] = int tau ln(r_i/tau) v`
    /// over `[r0, r_i]` for every node.
    pub fn integrate_into(&self, values: &[f64], first: &mut [f64], kernel: &mut [f64]) {
        debug_assert_eq!(values.len(), self.len());
        let (mut sum_a, mut sum_b) = (0.0, 0.0);
        first[0] = 0.0;
        kernel[0] = 0.0;
        for (j, m) in self.moments.iter().enumerate() {
            let (vl, vr) = (values[j], values[j + 1]);
            sum_a += m[0] * vl + m[1] * vr;
            sum_b += m[2] * vl + m[3] * vr;
            first[j + 1] = sum_a;
            kernel[j + 1] = self.log_ratio[j + 1] * sum_a - sum_b;
        }
    }

    /// `int_{r0}^{r_i} tau ln(r_i/tau) v(tau) dtau` for every node.
    pub fn kernel_integrals(&self, values: &[f64]) -> Vec<f64> {
        let mut first = vec![0.0; self.len()];
        let mut kernel = vec![0.0; self.len()];
        self.integrate_into(values, &mut first, &mut kernel);
        kernel
    }

    /// Kernel integral up to a single node, summing only the cells it needs.
    pub fn kernel_integral_at(&self, values: &[f64], r_index: usize) -> f64 {
        let (mut sum_a, mut sum_b) = (0.0, 0.0);
        for (j, m) in self.moments[..r_index].iter().enumerate() {
            sum_a += m[0] * values[j] + m[1] * values[j + 1];
            sum_b += m[2] * values[j] + m[3] * values[j + 1];
        }
        self.log_ratio[r_index] * sum_a - sum_b
    }
}

/// `int_{r0}^{r} tau ln(r/tau) v(tau) dtau` with `r = nodes[r_index]` and
/// `v` sampled on the grid nodes. Exact for piecewise linear `v`, second
/// order otherwise. `r_index = 0` gives exactly zero.
pub fn kernel_integral(grid: &RadialGrid, values: &[f64], r_index: usize) -> Result<f64> {
    if values.len() != grid.len() {
        return Err(domain(format!(
            "{} values for a grid of {} nodes",
            values.len(),
            grid.len()
        )));
    }
    if r_index >= grid.len() {
        return Err(domain(format!("node index {r_index} out of range")));
    }
    if r_index == 0 {
        return Ok(0.0);
    }
    Ok(KernelQuadrature::new(grid).kernel_integral_at(values, r_index))
}

/// `max_{r > r0} |x(r)| / ln(r/r0)` and the leftmost maximising node.
/// The value at `r0` itself is taken as zero.
pub fn weighted_norm(x_values: &[f64], nodes: &[f64]) -> Result<(f64, f64)> {
    if nodes.len() < 2 {
        return Err(domain("weighted norm needs at least two nodes"));
    }
    if x_values.len() != nodes.len() {
        return Err(domain(format!(
            "{} deviation values for {} nodes",
            x_values.len(),
            nodes.len()
        )));
    }
    let r0 = nodes[0];
    let mut best = (0.0, nodes[1]);
    for (x, &r) in x_values.iter().zip(nodes).skip(1) {
        let y = x.abs() / ((r - r0) / r0).ln_1p();
        if y > best.0 {
            best = (y, r);
        }
    }
    Ok(best)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PicardOptions {
    /// Stop once the weighted distance between iterates is at most `tol`.
    pub tol: f64,
    pub max_iter: usize,
    /// Run even if the model failed hypothesis validation.
    pub allow_unvalidated: bool,
}

impl Default for PicardOptions {
    fn default() -> Self {
        PicardOptions {
            tol: 1e-10,
            max_iter: 200,
            allow_unvalidated: false,
        }
    }
}

impl PicardOptions {
    pub fn with_tol(tol: f64) -> Self {
        PicardOptions { tol, ..Self::default() }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PicardDiagnostics {
    pub iterations: usize,
    /// Weighted distance between iterate `k` and `k + 1`, starting at `k = 0`.
    pub weighted_deltas: Vec<f64>,
    pub converged: bool,
    pub tol: f64,
}

impl PicardDiagnostics {
    /// `weighted_deltas[k] / weighted_deltas[k-1]` for `k >= 1`.
    pub fn contraction_ratios(&self) -> Vec<f64> {
        self.weighted_deltas.windows(2).map(|w| w[1] / w[0]).collect()
    }

    pub fn to_kv_string(&self) -> String {
        let mut out = format!("iterations = {}\nconverged = {}\n", self.iterations, self.converged);
        for (k, d) in self.weighted_deltas.iter().enumerate() {
            out.push_str(&format!("delta_{} = {d:.16e}\n", k + 1));
        }
        out
    }
}

/// The map `psi -> r0 psi1 ln(r/r0) - K[f(psi)]` for positive `psi1`.
struct PicardMap<'a> {
    model: &'a VorticityModel,
    quad: KernelQuadrature,
    amp: f64,
    scratch_v: Vec<f64>,
    scratch_a: Vec<f64>,
    scratch_k: Vec<f64>,
}

impl<'a> PicardMap<'a> {
    fn new(model: &'a VorticityModel, grid: &RadialGrid, amp: f64) -> Self {
        let n = grid.len();
        PicardMap {
            model,
            quad: KernelQuadrature::new(grid),
            amp,
            scratch_v: vec![0.0; n],
            scratch_a: vec![0.0; n],
            scratch_k: vec![0.0; n],
        }
    }

    fn base(&self) -> Vec<f64> {
        self.quad.log_ratio().iter().map(|l| self.amp * l).collect()
    }

    fn apply(&mut self, psi: &[f64], out: &mut [f64]) -> Result<()> {
        for (v, &p) in self.scratch_v.iter_mut().zip(psi) {
            *v = self.model.eval(p)?;
        }
        self.quad
            .integrate_into(&self.scratch_v, &mut self.scratch_a, &mut self.scratch_k);
        for ((o, l), k) in out.iter_mut().zip(self.quad.log_ratio()).zip(&self.scratch_k) {
            *o = self.amp * l - k;
        }
        Ok(())
    }

    /// `u = r0 psi1 - int tau f(psi)` at every node.
    fn momentum(&mut self, psi: &[f64]) -> Result<Vec<f64>> {
        let mut out = vec![0.0; psi.len()];
        self.apply(psi, &mut out)?;
        Ok(self.scratch_a.iter().map(|a| self.amp - a).collect())
    }
}

fn check_problem(model: &VorticityModel, r0: f64, psi1: f64, grid: &RadialGrid, allow: bool) -> Result<()> {
    if !(r0.is_finite() && r0 >= 1.0) {
        return Err(domain(format!("r0 must be >= 1, got {r0}")));
    }
    if !(psi1.is_finite() && psi1 != 0.0) {
        return Err(domain(format!("psi1 must be finite and non-zero, got {psi1}")));
    }
    if grid.r0() != r0 {
        return Err(domain(format!("grid starts at {} but r0 = {r0}", grid.r0())));
    }
    model.ensure_usable(allow)
}

fn weighted_delta(next: &[f64], prev: &[f64], log_ratio: &[f64]) -> f64 {
    next.iter()
        .zip(prev)
        .zip(log_ratio)
        .skip(1)
        .map(|((a, b), l)| (a - b).abs() / l)
        .fold(0.0, f64::max)
}

fn check_first_node(psi: &[f64], grid: &RadialGrid, delta: f64) -> Result<()> {
    let p = psi[1];
    if p > 0.0 && p <= delta {
        Ok(())
    } else {
        Err(Error::WindowCollapse {
            r: grid.nodes()[1],
            psi: p,
        })
    }
}

/// Solves the problem by Picard iteration from `psi_0 = r0 psi1 ln(r/r0)`.
///
/// Negative `psi1` is handled by solving for `|psi1|` and negating.
pub fn picard_solve(
    model: &VorticityModel,
    r0: f64,
    psi1: f64,
    grid: &RadialGrid,
    opts: &PicardOptions,
) -> Result<(Trajectory, PicardDiagnostics)> {
    check_problem(model, r0, psi1, grid, opts.allow_unvalidated)?;
    if !(opts.tol > 0.0) || opts.max_iter == 0 {
        return Err(domain("picard needs tol > 0 and max_iter >= 1"));
    }
    let mut map = PicardMap::new(model, grid, r0 * psi1.abs());
    let mut psi = map.base();
    check_first_node(&psi, grid, model.delta())?;
    let mut next = vec![0.0; psi.len()];
    let mut diag = PicardDiagnostics {
        iterations: 0,
        weighted_deltas: Vec::new(),
        converged: false,
        tol: opts.tol,
    };
    for _ in 0..opts.max_iter {
        map.apply(&psi, &mut next)?;
        if let Some(bad) = next.iter().find(|p| !p.is_finite()) {
            return Err(domain(format!("picard iterate became non-finite ({bad})")));
        }
        check_first_node(&next, grid, model.delta())?;
        let d = weighted_delta(&next, &psi, map.quad.log_ratio());
        diag.iterations += 1;
        diag.weighted_deltas.push(d);
        std::mem::swap(&mut psi, &mut next);
        if d <= opts.tol {
            diag.converged = true;
            break;
        }
    }
    if !diag.converged {
        return Err(Error::NonConvergence(Box::new(diag)));
    }
    let u = map.momentum(&psi)?;
    let traj = trajectory::from_normalised(grid, psi, u, psi1, model.delta(), Method::Picard);
    Ok((traj, diag))
}

/// The first `count + 1` Picard iterates `psi_0, ..., psi_count`.
pub fn picard_iterates(
    model: &VorticityModel,
    r0: f64,
    psi1: f64,
    grid: &RadialGrid,
    count: usize,
    allow_unvalidated: bool,
) -> Result<Vec<Trajectory>> {
    check_problem(model, r0, psi1, grid, allow_unvalidated)?;
    let mut map = PicardMap::new(model, grid, r0 * psi1.abs());
    let mut psi = map.base();
    let mut out = Vec::with_capacity(count + 1);
    for k in 0..=count {
        let u = map.momentum(&psi)?;
        let mut next = vec![0.0; psi.len()];
        if k < count {
            map.apply(&psi, &mut next)?;
        }
        let cur = std::mem::replace(&mut psi, next);
        out.push(trajectory::from_normalised(
            grid,
            cur,
            u,
            psi1,
            model.delta(),
            Method::Picard,
        ));
    }
    Ok(out)
}

/// `sup |psi(r) - r0 psi1 ln(r/r0) + K[f(psi)](r)|` over the nodes of the
/// validity window.
pub fn residual(model: &VorticityModel, traj: &Trajectory) -> f64 {
    let quad = KernelQuadrature::new(&traj.grid);
    let values: Vec<f64> = traj.psi.iter().map(|&p| model.f(p)).collect();
    let kernel = quad.kernel_integrals(&values);
    let amp = traj.r0() * traj.psi1;
    traj.psi
        .iter()
        .zip(quad.log_ratio())
        .zip(&kernel)
        .take(traj.window_len())
        .map(|((p, l), k)| (p - amp * l + k).abs())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zero_model() -> VorticityModel {
        VorticityModel::custom("zero", |_| 0.0, 0.25, None).unwrap()
    }

    fn allow() -> PicardOptions {
        PicardOptions {
            allow_unvalidated: true,
            ..PicardOptions::default()
        }
    }

    // closed form of int_1^2 tau ln(2/tau) dtau
    fn unit_kernel_exact() -> f64 {
        0.75 - 0.5 * 2f64.ln()
    }

    #[test]
    fn kernel_integral_of_constant() {
        for grid in [
            RadialGrid::uniform(1.0, 2.0, 3).unwrap(),
            RadialGrid::graded(1.0, 2.0, 64).unwrap(),
        ] {
            let ones = vec![1.0; grid.len()];
            let got = kernel_integral(&grid, &ones, grid.len() - 1).unwrap();
            assert!((got - unit_kernel_exact()).abs() < 1e-13, "{got}");
            assert_eq!(kernel_integral(&grid, &ones, 0).unwrap(), 0.0);
            let zeros = vec![0.0; grid.len()];
            assert_eq!(kernel_integral(&grid, &zeros, grid.len() - 1).unwrap(), 0.0);
        }
    }

    #[test]
    fn kernel_integral_argument_errors() {
        let grid = RadialGrid::uniform(1.0, 2.0, 5).unwrap();
        assert!(kernel_integral(&grid, &[1.0; 4], 2).is_err());
        assert!(kernel_integral(&grid, &[1.0; 5], 5).is_err());
    }

    #[test]
    fn bulk_and_single_node_agree() {
        let grid = RadialGrid::graded(1.5, 3.0, 100).unwrap();
        let v: Vec<f64> = grid.nodes().iter().map(|r| (r * 3.0).sin()).collect();
        let quad = KernelQuadrature::new(&grid);
        let bulk = quad.kernel_integrals(&v);
        for i in [1, 17, 99] {
            let single = kernel_integral(&grid, &v, i).unwrap();
            assert!((bulk[i] - single).abs() < 1e-14);
        }
    }

    #[test]
    fn weighted_norm_examples() {
        let grid = RadialGrid::uniform(1.0, 2.0, 11).unwrap();
        let nodes = grid.nodes();
        let sq: Vec<f64> = nodes.iter().map(|r| r.ln().powi(2)).collect();
        let (v, at) = weighted_norm(&sq, nodes).unwrap();
        assert!((v - 2f64.ln()).abs() < 1e-15);
        assert_eq!(at, 2.0);

        let zero = vec![0.0; nodes.len()];
        assert_eq!(weighted_norm(&zero, nodes).unwrap().0, 0.0);

        let lin: Vec<f64> = nodes.iter().map(|r| (r - 1.0).ln_1p()).collect();
        let (v, at) = weighted_norm(&lin, nodes).unwrap();
        assert_eq!(v, 1.0);
        assert_eq!(at, nodes[1]);

        assert!(weighted_norm(&[0.0], &[1.0]).is_err());
        assert!(weighted_norm(&[0.0, 1.0], &[1.0, 1.5, 2.0]).is_err());
    }

    #[test]
    fn first_iterate_is_inhomogeneous_term() {
        let grid = RadialGrid::uniform(1.0, 2.0, 11).unwrap();
        let m = VorticityModel::classical();
        let it = picard_iterates(&m, 1.0, 1.0, &grid, 1, false).unwrap();
        assert_eq!(it.len(), 2);
        assert!((it[0].psi[10] - 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn zero_law_reproduces_logarithm() {
        let grid = RadialGrid::graded(1.0, 2.0, 200).unwrap();
        let (t, d) = picard_solve(&zero_model(), 1.0, 1.0, &grid, &allow()).unwrap();
        assert!(d.converged);
        for (r, (p, u)) in grid.nodes().iter().zip(t.psi.iter().zip(&t.u)) {
            assert!((p - r.ln()).abs() < 1e-14);
            assert_eq!(*u, 1.0);
        }
        assert_eq!(residual(&zero_model(), &t), 0.0);
    }

    #[test]
    fn unvalidated_model_is_refused() {
        let grid = RadialGrid::graded(1.0, 2.0, 50).unwrap();
        let err = picard_solve(&zero_model(), 1.0, 1.0, &grid, &PicardOptions::default());
        assert!(matches!(err, Err(Error::Unvalidated(_))));
    }

    #[test]
    fn precondition_errors() {
        let m = VorticityModel::classical();
        let grid = RadialGrid::graded(1.0, 1.2, 50).unwrap();
        let o = PicardOptions::default();
        assert!(picard_solve(&m, 1.0, 0.0, &grid, &o).is_err());
        assert!(picard_solve(&m, 1.1, 1.0, &grid, &o).is_err());
        let bad = PicardOptions { tol: 0.0, ..o };
        assert!(picard_solve(&m, 1.0, 1.0, &grid, &bad).is_err());
    }

    #[test]
    fn non_convergence_carries_diagnostics() {
        let m = VorticityModel::classical();
        let grid = RadialGrid::graded(1.0, 1.25, 200).unwrap();
        let o = PicardOptions {
            tol: 1e-14,
            max_iter: 2,
            allow_unvalidated: false,
        };
        match picard_solve(&m, 1.0, 1.0, &grid, &o) {
            Err(Error::NonConvergence(d)) => {
                assert_eq!(d.iterations, 2);
                assert_eq!(d.weighted_deltas.len(), 2);
                assert!(!d.converged);
            }
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }

    #[test]
    fn window_collapse_on_coarse_grid() {
        let m = VorticityModel::classical();
        // first interior node at r = 2 where ln 2 > delta
        let grid = RadialGrid::uniform(1.0, 3.0, 3).unwrap();
        let err = picard_solve(&m, 1.0, 1.0, &grid, &PicardOptions::default());
        assert!(matches!(err, Err(Error::WindowCollapse { .. })));
    }

    #[test]
    fn classical_solution_properties() {
        let m = VorticityModel::classical();
        let grid = RadialGrid::graded(1.0, 1.25, 1024).unwrap();
        let (t, d) = picard_solve(&m, 1.0, 1.0, &grid, &PicardOptions::default()).unwrap();
        assert!(d.converged && *d.weighted_deltas.last().unwrap() <= 1e-10);
        for (r, p) in grid.nodes().iter().zip(&t.psi).take(t.window_len()) {
            assert!(*p >= r.ln() - 1e-9);
        }
        assert!(residual(&m, &t) < 1e-10);
        let text = d.to_kv_string();
        assert!(text.starts_with(&format!("iterations = {}\nconverged = true\n", d.iterations)));
        assert!(text.contains("delta_1 = "));
    }

    #[test]
    fn reflection_is_exact_negation() {
        let m = VorticityModel::classical();
        let grid = RadialGrid::graded(1.0, 1.25, 256).unwrap();
        let o = PicardOptions::default();
        let (p, _) = picard_solve(&m, 1.0, 1.0, &grid, &o).unwrap();
        let (n, _) = picard_solve(&m, 1.0, -1.0, &grid, &o).unwrap();
        for i in 0..grid.len() {
            assert_eq!(n.psi[i], -p.psi[i]);
            assert_eq!(n.u[i], -p.u[i]);
        }
        assert_eq!(n.window_end, p.window_end);
    }
}
