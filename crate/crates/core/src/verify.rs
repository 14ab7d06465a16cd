//! Numerical replay of the local uniqueness argument.
//!
//! For two solutions `psi_a`, `psi_b` with deviation `x = psi_b - psi_a` the
//! argument works with `y(r) = |x(r)| / ln(r/r0)` and shows, on a window
//! `[r0, r2]` chosen so that `ln(r2/r0) < 1` and
//! `C / sqrt(r0 psi1) * (r2^2 - r0^2) / 2 <= 1/2`, that `sup y` is at most half
//! of itself. The checks here evaluate each link of that chain on computed
//! trajectories. All of them are evidence, not proof: the solutions are
//! approximate and every comparison carries an explicit slack.

use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::grid::RadialGrid;
use crate::picard::{picard_iterates, picard_solve, weighted_norm, KernelQuadrature, PicardOptions};
use crate::rk::{rk_solve, RunLog, StepControl};
use crate::trajectory::Trajectory;
#[cfg(test)]
use crate::vorticity::ModelSpec;
use crate::vorticity::{HypothesisReport, VorticityModel};

/// Margin below which `ln(r2/r0)` is kept under 1.
pub const LOG_CAP_EPS: f64 = 1e-9;
/// Smallest admissible `min (psi - r0 psi1 ln(r/r0))`.
pub const LOWER_BOUND_FLOOR: f64 = -1e-8;
/// Largest admissible contraction ratio (1/2 plus quadrature slack).
pub const CONTRACTION_LIMIT: f64 = 0.55;
/// Largest admissible weighted deviation between the two solvers.
pub const CROSS_METHOD_LIMIT: f64 = 1e-6;
/// Relative slack on the node-wise integral inequality.
pub const INEQUALITY_REL_SLACK: f64 = 0.05;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BindingConstraint {
    /// `ln(r/r0) < 1` is the active cap.
    LogCap,
    /// `C / sqrt(r0 psi1) * (r^2 - r0^2) / 2 <= 1/2` is the active cap.
    QuadraticCap,
}

impl BindingConstraint {
    pub fn as_str(self) -> &'static str {
        match self {
            BindingConstraint::LogCap => "log_cap",
            BindingConstraint::QuadraticCap => "quadratic_cap",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UniquenessWindow {
    pub r0: f64,
    pub psi1: f64,
    pub holder_c: f64,
    pub r2: f64,
    pub binding_constraint: BindingConstraint,
    /// `min(r2, window end of the trajectory)`; `r2` until intersected.
    pub window_end_effective: f64,
}

impl UniquenessWindow {
    /// `C / sqrt(r0 psi1)`.
    pub fn gain(&self) -> f64 {
        self.holder_c / (self.r0 * self.psi1).sqrt()
    }

    /// `C / sqrt(r0 psi1) * (r^2 - r0^2) / 2`.
    pub fn contraction_factor(&self, r: f64) -> f64 {
        self.gain() * (r * r - self.r0 * self.r0) / 2.0
    }

    /// Both defining constraints, re-evaluated at `r2`.
    pub fn constraints_hold(&self) -> bool {
        (self.r2 / self.r0).ln() < 1.0 && self.contraction_factor(self.r2) <= 0.5
    }

    /// Shrinks the effective window to `min(r2, r)`.
    pub fn intersect(mut self, r: f64) -> Self {
        self.window_end_effective = self.window_end_effective.min(r);
        self
    }
}

/// Contraction window for the model's constant `C`.
pub fn compute_r2(model: &VorticityModel, r0: f64, psi1: f64) -> Result<UniquenessWindow> {
    window_for_constant(model.holder_c(), r0, psi1)
}

/// `r2 = min(r0 e^{1-eps}, sqrt(r0^2 + sqrt(r0 psi1) / C))`, nudged down
/// until both constraints hold in floating point.
pub fn window_for_constant(holder_c: f64, r0: f64, psi1: f64) -> Result<UniquenessWindow> {
    if !(r0.is_finite() && r0 >= 1.0) {
        return Err(domain(format!("r0 must be >= 1, got {r0}")));
    }
    if !(psi1.is_finite() && psi1 > 0.0) {
        return Err(domain(format!("psi1 must be positive here, got {psi1}")));
    }
    if !(holder_c > 0.0) {
        return Err(domain(format!("Hölder constant must be positive, got {holder_c}")));
    }
    let log_cap = r0 * (1.0 - LOG_CAP_EPS).exp();
    let quad_cap = (r0 * r0 + (r0 * psi1).sqrt() / holder_c).sqrt();
    let (mut r2, binding) = if quad_cap <= log_cap {
        (quad_cap, BindingConstraint::QuadraticCap)
    } else {
        (log_cap, BindingConstraint::LogCap)
    };
    let mut w = UniquenessWindow {
        r0,
        psi1,
        holder_c,
        r2,
        binding_constraint: binding,
        window_end_effective: r2,
    };
    while !w.constraints_hold() && r2 > r0 {
        r2 = r2.next_down();
        w.r2 = r2;
        w.window_end_effective = r2;
    }
    Ok(w)
}

/// `min (psi(r) - r0 psi1 ln(r/r0))` over the interior window nodes.
pub fn check_lower_bound(traj: &Trajectory, r0: f64, psi1: f64) -> Result<f64> {
    if !(psi1 > 0.0) || traj.psi1 != psi1 {
        return Err(domain(format!(
            "lower bound needs the positive slope of the trajectory, got {psi1} (trajectory {})",
            traj.psi1
        )));
    }
    if traj.r0() != r0 {
        return Err(domain(format!("trajectory starts at {} not {r0}", traj.r0())));
    }
    let n = traj.window_len();
    if n < 2 {
        return Err(domain("validity window holds no interior node"));
    }
    let amp = r0 * psi1;
    Ok((1..n)
        .map(|i| traj.psi[i] - amp * traj.grid.log_ratio(i))
        .fold(f64::INFINITY, f64::min))
}

fn check_pair(a: &Trajectory, b: &Trajectory) -> Result<()> {
    if a.r0() != b.r0() || a.psi1 != b.psi1 {
        return Err(domain(format!(
            "trajectories solve different problems: (r0, psi1) = ({}, {}) vs ({}, {})",
            a.r0(),
            a.psi1,
            b.r0(),
            b.psi1
        )));
    }
    if a.nodes() != b.nodes() {
        return Err(domain("trajectories are sampled on different grids"));
    }
    Ok(())
}

/// Samples `y(r) = |psi_a - psi_b| / ln(r/r0)` at up to `n_probe` nodes whose
/// distances to `r0` shrink geometrically, from the end of the shared window
/// down to the first interior node. Entries are ordered outermost first.
pub fn deviation_limit_trace(a: &Trajectory, b: &Trajectory, n_probe: usize) -> Result<Vec<(f64, f64)>> {
    check_pair(a, b)?;
    if n_probe == 0 {
        return Err(domain("need at least one probe"));
    }
    let shared = a.window_len().min(b.window_len());
    if shared < 2 {
        return Err(domain("shared validity window holds no interior node"));
    }
    let off = a.grid.offsets();
    let (inner, outer) = (off[1], off[shared - 1]);
    let mut picks: Vec<usize> = Vec::with_capacity(n_probe);
    for k in 0..n_probe {
        let t = if n_probe == 1 {
            0.0
        } else {
            k as f64 / (n_probe - 1) as f64
        };
        let target = outer * (inner / outer).powf(t);
        // nearest node in log distance among the window's interior nodes
        let j = off[1..shared].partition_point(|&s| s < target) + 1;
        let idx = if j >= shared {
            shared - 1
        } else if j > 1 && (target / off[j - 1]).ln() < (off[j] / target).ln() {
            j - 1
        } else {
            j
        };
        if picks.last() != Some(&idx) {
            picks.push(idx);
        }
    }
    Ok(picks
        .into_iter()
        .map(|i| {
            let y = (a.psi[i] - b.psi[i]).abs() / a.grid.log_ratio(i);
            (a.nodes()[i], y)
        })
        .collect())
}

/// True if `y` never grows by more than `slack` while approaching `r0`.
pub fn trace_non_increasing(trace: &[(f64, f64)], slack: f64) -> bool {
    trace.windows(2).all(|w| w[1].1 <= w[0].1 + slack)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ContractionProbe {
    /// `max_r C/sqrt(r0 psi1) * int_{r0}^{r} tau y(tau) dtau / y(r*)`, the bound
    /// on `sup y` relative to `y(r*)`; at most `1/2` inside the window.
    pub ratio: f64,
    /// `sup |T psi_b - T psi_a| / ln(r/r0)` relative to `y(r*)`, where `T` is
    /// the Picard map: the contraction actually observed.
    pub observed_ratio: f64,
    pub y_star: f64,
    pub r_star: f64,
    /// First node where the bound exceeds `1/2`.
    pub first_bound_violation: Option<f64>,
    /// First node where `|T psi_b - T psi_a| <= C/sqrt(r0 psi1) ln(r/r0)
    /// int tau y` fails beyond the relative slack.
    pub first_inequality_violation: Option<f64>,
    pub nodes_checked: usize,
}

/// Evaluates the integral inequality and the resulting half-contraction on
/// `(r0, window_end_effective]` for the deviation of two trajectories.
///
/// Refuses when either trajectory violates the lower bound, since the
/// inequality is derived from it.
pub fn contraction_probe(
    model: &VorticityModel,
    a: &Trajectory,
    b: &Trajectory,
    window: &UniquenessWindow,
) -> Result<ContractionProbe> {
    check_pair(a, b)?;
    if a.r0() != window.r0 || a.psi1 != window.psi1 {
        return Err(domain("window and trajectories belong to different problems"));
    }
    for t in [a, b] {
        let margin = check_lower_bound(t, window.r0, window.psi1)?;
        if margin < LOWER_BOUND_FLOOR {
            return Err(Error::LowerBoundViolated {
                margin,
                slack: -LOWER_BOUND_FLOOR,
            });
        }
    }
    let m = a.len_up_to(window.window_end_effective);
    if m < 2 {
        return Err(domain("effective window holds no interior node"));
    }
    let grid = a.grid.truncated(a.nodes()[m - 1].max(a.nodes()[2]))?;
    let m = m.min(grid.len());
    let nodes = grid.nodes();
    let logs: Vec<f64> = (0..grid.len()).map(|i| grid.log_ratio(i)).collect();

    let mut y = vec![0.0; grid.len()];
    for i in 1..grid.len() {
        y[i] = (b.psi[i] - a.psi[i]).abs() / logs[i];
    }
    let x: Vec<f64> = (0..m).map(|i| b.psi[i] - a.psi[i]).collect();
    let (y_star, r_star) = weighted_norm(&x, &nodes[..m])?;
    if y_star == 0.0 {
        return Ok(ContractionProbe {
            ratio: 0.0,
            observed_ratio: 0.0,
            y_star,
            r_star,
            first_bound_violation: None,
            first_inequality_violation: None,
            nodes_checked: m - 1,
        });
    }

    // T psi = r0 psi1 ln(r/r0) - K[f(psi)]; the inhomogeneous part cancels.
    let quad = KernelQuadrature::new(&grid);
    let fa: Vec<f64> = a.psi[..grid.len()].iter().map(|&p| model.f(p)).collect();
    let fb: Vec<f64> = b.psi[..grid.len()].iter().map(|&p| model.f(p)).collect();
    let (ka, kb) = (quad.kernel_integrals(&fa), quad.kernel_integrals(&fb));

    let gain = window.gain();
    let mut integral = 0.0;
    let mut probe = ContractionProbe {
        ratio: 0.0,
        observed_ratio: 0.0,
        y_star,
        r_star,
        first_bound_violation: None,
        first_inequality_violation: None,
        nodes_checked: m - 1,
    };
    for i in 1..m {
        let h = nodes[i] - nodes[i - 1];
        integral += h * (nodes[i - 1] * y[i - 1] + nodes[i] * y[i]) / 2.0;
        let bound = gain * integral / y_star;
        probe.ratio = probe.ratio.max(bound);
        if bound > 0.5 && probe.first_bound_violation.is_none() {
            probe.first_bound_violation = Some(nodes[i]);
        }
        let image = (kb[i] - ka[i]).abs();
        probe.observed_ratio = probe.observed_ratio.max(image / logs[i] / y_star);
        let rhs = gain * logs[i] * integral;
        if image > rhs * (1.0 + INEQUALITY_REL_SLACK) + 4.0 * f64::EPSILON * kb[i].abs().max(ka[i].abs())
            && probe.first_inequality_violation.is_none()
        {
            probe.first_inequality_violation = Some(nodes[i]);
        }
    }
    Ok(probe)
}

#[derive(Clone, Debug)]
pub struct VerifySettings {
    pub n_nodes: usize,
    pub picard: PicardOptions,
    pub rk_tol: f64,
    /// Optional further cap on the certified window.
    pub r_max: Option<f64>,
    pub n_probe: usize,
}

impl Default for VerifySettings {
    fn default() -> Self {
        VerifySettings {
            n_nodes: 2048,
            picard: PicardOptions::default(),
            rk_tol: 1e-10,
            r_max: None,
            n_probe: 12,
        }
    }
}

#[derive(Clone, Debug)]
pub struct UniquenessReport {
    pub model: String,
    pub r0: f64,
    pub psi1: f64,
    pub hypothesis: HypothesisReport,
    pub window: Option<UniquenessWindow>,
    /// Window end of the Picard solution on `[r0, r2]` (first delta exit).
    pub delta_exit: f64,
    pub lower_bound_margin: f64,
    /// Largest Picard ratio `delta_{k+1} / delta_k` for `k >= 1`.
    pub picard_ratio: f64,
    pub probe: Option<ContractionProbe>,
    /// `max(picard_ratio, probe.ratio)`.
    pub contraction_ratio: f64,
    pub cross_method_weighted_sup: f64,
    pub cross_method_argmax: f64,
    pub deviation_limit_trace: Vec<(f64, f64)>,
    pub trace_non_increasing: bool,
    /// `10 (tol_picard + tol_rk)` plus the quadrature estimate.
    pub slack: f64,
    /// Weighted Richardson estimate of the Picard discretisation error.
    pub quadrature_estimate: f64,
    pub picard_iterations: usize,
    pub rk_log: RunLog,
    pub failures: Vec<&'static str>,
    pub verdict: bool,
    pub picard: Option<Trajectory>,
    pub rk: Option<Trajectory>,
}

impl UniquenessReport {
    fn hypothesis_failure(model: &VorticityModel, r0: f64, psi1: f64, failure: &'static str) -> Self {
        UniquenessReport {
            model: model.name().to_string(),
            r0,
            psi1,
            hypothesis: model.report().clone(),
            window: None,
            delta_exit: f64::NAN,
            lower_bound_margin: f64::NAN,
            picard_ratio: f64::NAN,
            probe: None,
            contraction_ratio: f64::NAN,
            cross_method_weighted_sup: f64::NAN,
            cross_method_argmax: f64::NAN,
            deviation_limit_trace: Vec::new(),
            trace_non_increasing: false,
            slack: f64::NAN,
            quadrature_estimate: f64::NAN,
            picard_iterations: 0,
            rk_log: RunLog::default(),
            failures: vec![failure],
            verdict: false,
            picard: None,
            rk: None,
        }
    }

    /// `key = value` lines.
    pub fn to_kv_string(&self) -> String {
        let mut s = String::new();
        let mut kv = |k: &str, v: String| s.push_str(&format!("{k} = {v}\n"));
        let num = |v: f64| format!("{v:.16e}");
        kv("model", self.model.clone());
        kv("r0", num(self.r0));
        kv("psi1", num(self.psi1));
        kv("sign_margin", num(self.hypothesis.sign_margin));
        kv("holder_sup", num(self.hypothesis.holder_sup));
        kv("holder_C", num(self.hypothesis.holder_c));
        if let Some(w) = &self.window {
            kv("r2", num(w.r2));
            kv("binding_constraint", w.binding_constraint.as_str().to_string());
            kv("delta_exit", num(self.delta_exit));
            kv("window_end_effective", num(w.window_end_effective));
        }
        kv("lower_bound_margin", num(self.lower_bound_margin));
        kv("picard_iterations", self.picard_iterations.to_string());
        kv("picard_ratio", num(self.picard_ratio));
        if let Some(p) = &self.probe {
            kv("probe_ratio", num(p.ratio));
            kv("probe_observed_ratio", num(p.observed_ratio));
            kv("r_star", num(p.r_star));
            kv(
                "probe_first_violation",
                p.first_inequality_violation
                    .or(p.first_bound_violation)
                    .map_or("none".to_string(), num),
            );
        }
        kv("contraction_ratio", num(self.contraction_ratio));
        kv("cross_method_weighted_sup", num(self.cross_method_weighted_sup));
        kv("cross_method_argmax", num(self.cross_method_argmax));
        kv("trace_non_increasing", self.trace_non_increasing.to_string());
        kv("quadrature_estimate", num(self.quadrature_estimate));
        kv("slack", num(self.slack));
        kv("rk_accepted_steps", self.rk_log.accepted_steps.to_string());
        kv("rk_rejected_steps", self.rk_log.rejected_steps.to_string());
        kv(
            "failures",
            if self.failures.is_empty() {
                "none".to_string()
            } else {
                self.failures.join(",")
            },
        );
        kv("verdict", self.verdict.to_string());
        s
    }

    /// `r,y` table of the deviation trace.
    pub fn trace_csv(&self) -> String {
        let mut s = String::from("r,y\n");
        for (r, y) in &self.deviation_limit_trace {
            s.push_str(&format!("{r:.16e},{y:.16e}\n"));
        }
        s
    }
}

/// Grid with every cell of `grid` split in two, keeping the original nodes.
fn refined(grid: &RadialGrid) -> Result<RadialGrid> {
    let n = 2 * grid.len() - 1;
    match grid.grading() {
        crate::grid::Grading::Uniform => RadialGrid::uniform(grid.r0(), grid.r_end(), n),
        crate::grid::Grading::GeometricTowardLeft { ratio } => {
            RadialGrid::geometric(grid.r0(), grid.r_end(), n, ratio.sqrt())
        }
    }
}

/// Runs both solvers on the certified window and evaluates every check.
///
/// A negative `psi1` is reflected first. Models failing hypothesis
/// validation yield a report naming the failed hypothesis without solving.
pub fn verify_uniqueness(
    model: &VorticityModel,
    r0: f64,
    psi1: f64,
    settings: &VerifySettings,
) -> Result<UniquenessReport> {
    if !(psi1.is_finite() && psi1 != 0.0) {
        return Err(domain(format!("psi1 must be finite and non-zero, got {psi1}")));
    }
    let psi1 = psi1.abs();
    if let Some(failure) = model.report().failure() {
        return Ok(UniquenessReport::hypothesis_failure(model, r0, psi1, failure));
    }

    let mut window = compute_r2(model, r0, psi1)?;
    let cap = settings.r_max.map_or(window.r2, |r| r.min(window.r2));
    if !(cap > r0) {
        return Err(domain(format!("certified window [{r0}, {cap}] is empty")));
    }
    let opts = settings.picard;
    let search = RadialGrid::graded(r0, cap, settings.n_nodes)?;
    let (first, _) = picard_solve(model, r0, psi1, &search, &opts)?;
    let delta_exit = first.window_end;
    window = window.intersect(cap).intersect(delta_exit);

    let grid = if delta_exit < cap {
        RadialGrid::graded(r0, window.window_end_effective, settings.n_nodes)?
    } else {
        search
    };
    let (pic, diag) = picard_solve(model, r0, psi1, &grid, &opts)?;
    let ctrl = StepControl::for_span(r0, grid.r_end(), settings.rk_tol, settings.rk_tol)?;
    let (rk, rk_log) = rk_solve(model, r0, psi1, grid.r_end(), &ctrl, &grid, false)?;

    let fine = refined(&grid)?;
    let (pic_fine, _) = picard_solve(model, r0, psi1, &fine, &opts)?;
    let coarse_on_fine: Vec<f64> = (0..grid.len())
        .map(|i| (pic.psi[i] - pic_fine.psi[2 * i]) * 4.0 / 3.0)
        .collect();
    let quadrature_estimate = weighted_norm(&coarse_on_fine, grid.nodes())?.0;
    let slack = 10.0 * (opts.tol + settings.rk_tol) + quadrature_estimate;

    let lower_bound_margin = check_lower_bound(&pic, r0, psi1)?.min(check_lower_bound(&rk, r0, psi1)?);

    let picard_ratio = diag.contraction_ratios().into_iter().skip(1).fold(0.0, f64::max);
    let iterates = picard_iterates(model, r0, psi1, &grid, 2, false)?;
    let probe = contraction_probe(model, &iterates[1], &iterates[2], &window).ok();
    let contraction_ratio = probe.as_ref().map_or(f64::INFINITY, |p| p.ratio).max(picard_ratio);

    let m = pic.len_up_to(window.window_end_effective);
    let x = pic.deviation_from(&rk)?;
    let (cross, cross_at) = weighted_norm(&x[..m], &grid.nodes()[..m])?;
    let trace = deviation_limit_trace(&pic, &rk, settings.n_probe)?;
    let monotone = trace_non_increasing(&trace, slack);
    let innermost = trace.last().map_or(f64::INFINITY, |t| t.1);

    let mut failures = Vec::new();
    if !(lower_bound_margin >= LOWER_BOUND_FLOOR) {
        failures.push("lower_bound");
    }
    if !(contraction_ratio <= CONTRACTION_LIMIT) {
        failures.push("contraction");
    }
    if !(cross <= CROSS_METHOD_LIMIT) {
        failures.push("cross_method");
    }
    if !(monotone && innermost <= CROSS_METHOD_LIMIT) {
        failures.push("deviation_limit");
    }

    Ok(UniquenessReport {
        model: model.name().to_string(),
        r0,
        psi1,
        hypothesis: model.report().clone(),
        window: Some(window),
        delta_exit,
        lower_bound_margin,
        picard_ratio,
        probe,
        contraction_ratio,
        cross_method_weighted_sup: cross,
        cross_method_argmax: cross_at,
        deviation_limit_trace: trace,
        trace_non_increasing: monotone,
        slack,
        quadrature_estimate,
        picard_iterations: diag.iterations,
        rk_log,
        verdict: failures.is_empty(),
        failures,
        picard: Some(pic),
        rk: Some(rk),
    })
}

#[derive(Clone, Debug)]
pub struct SweepRow {
    pub psi1: f64,
    pub dpsi1: f64,
    pub sup_dev: f64,
}

/// Empirical continuity-in-data table.
#[derive(Clone, Debug)]
pub struct SweepResult {
    /// One row per entry after the first, sorted by `|dpsi1|`.
    pub rows: Vec<SweepRow>,
    /// Trajectories in input order.
    pub trajectories: Vec<Trajectory>,
    pub common_window: f64,
}

impl SweepResult {
    /// Deviations strictly increase with `|dpsi1|`.
    pub fn is_monotone(&self) -> bool {
        self.rows.windows(2).all(|w| w[1].sup_dev > w[0].sup_dev)
    }

    /// `max / min` of `sup_dev / |dpsi1|` over rows with `dpsi1 != 0`.
    pub fn linearity_spread(&self) -> f64 {
        let slopes: Vec<f64> = self
            .rows
            .iter()
            .filter(|r| r.dpsi1 > 0.0)
            .map(|r| r.sup_dev / r.dpsi1)
            .collect();
        let max = slopes.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let min = slopes.iter().cloned().fold(f64::INFINITY, f64::min);
        max / min
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("dpsi1,sup_dev\n");
        for r in &self.rows {
            s.push_str(&format!("{:.16e},{:.16e}\n", r.dpsi1, r.sup_dev));
        }
        s
    }
}

/// Solves for every `psi1` on `[r0, r0 + r_span]` and measures the sup
/// deviation from the first entry over the common validity window.
pub fn continuity_sweep(
    model: &VorticityModel,
    r0: f64,
    psi1_values: &[f64],
    r_span: f64,
    n_nodes: usize,
    opts: &PicardOptions,
) -> Result<SweepResult> {
    if psi1_values.len() < 2 {
        return Err(domain("sweep needs at least two psi1 values"));
    }
    let grid = RadialGrid::graded(r0, r0 + r_span, n_nodes)?;
    let trajectories = psi1_values
        .par_iter()
        .map(|&p| picard_solve(model, r0, p, &grid, opts).map(|(t, _)| t))
        .collect::<Result<Vec<_>>>()?;
    let common_window = trajectories.iter().map(|t| t.window_end).fold(f64::INFINITY, f64::min);
    let m = grid.nodes().partition_point(|&r| r <= common_window);
    let base = &trajectories[0];
    let mut rows: Vec<SweepRow> = trajectories
        .iter()
        .skip(1)
        .map(|t| SweepRow {
            psi1: t.psi1,
            dpsi1: (t.psi1 - base.psi1).abs(),
            sup_dev: t.psi[..m]
                .iter()
                .zip(&base.psi[..m])
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max),
        })
        .collect();
    rows.sort_by(|a, b| a.dpsi1.total_cmp(&b.dpsi1));
    Ok(SweepResult {
        rows,
        trajectories,
        common_window,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn classical_pair(n: usize) -> (VorticityModel, Trajectory, Trajectory) {
        let m = VorticityModel::classical();
        let grid = RadialGrid::graded(1.0, 1.25, n).unwrap();
        let (p, _) = picard_solve(&m, 1.0, 1.0, &grid, &PicardOptions::default()).unwrap();
        let ctrl = StepControl::for_span(1.0, 1.25, 1e-10, 1e-10).unwrap();
        let (r, _) = rk_solve(&m, 1.0, 1.0, 1.25, &ctrl, &grid, false).unwrap();
        (m, p, r)
    }

    #[test]
    fn r2_for_unit_data_is_sqrt_two() {
        let w = window_for_constant(1.0, 1.0, 1.0).unwrap();
        assert!((w.r2 - 2f64.sqrt()).abs() <= 1e-12);
        assert_eq!(w.binding_constraint, BindingConstraint::QuadraticCap);
        assert!(w.constraints_hold());
    }

    #[test]
    fn r2_log_cap_binds_for_small_constant() {
        let w = window_for_constant(1e-3, 1.0, 1.0).unwrap();
        assert_eq!(w.binding_constraint, BindingConstraint::LogCap);
        assert!((w.r2 / 1f64.exp() - 1.0).abs() < 2e-9);
        assert!(w.constraints_hold());
    }

    #[test]
    fn r2_rejects_bad_data() {
        assert!(window_for_constant(1.0, 0.5, 1.0).is_err());
        assert!(window_for_constant(1.0, 1.0, 0.0).is_err());
        assert!(window_for_constant(1.0, 1.0, -1.0).is_err());
        assert!(window_for_constant(0.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn lower_bound_holds_for_classical() {
        let (_, p, r) = classical_pair(512);
        assert!(check_lower_bound(&p, 1.0, 1.0).unwrap() >= -1e-12);
        assert!(check_lower_bound(&r, 1.0, 1.0).unwrap() >= -1e-12);
        assert!(check_lower_bound(&p, 1.0, 2.0).is_err());
        assert!(check_lower_bound(&p, 2.0, 1.0).is_err());
    }

    #[test]
    fn trace_is_outermost_first_and_small() {
        let (_, p, r) = classical_pair(1024);
        let trace = deviation_limit_trace(&p, &r, 8).unwrap();
        assert!(trace.len() >= 2 && trace.len() <= 8);
        assert!(trace.windows(2).all(|w| w[1].0 < w[0].0));
        assert!(trace.iter().all(|t| t.1 < 1e-6));
        assert!(deviation_limit_trace(&p, &r, 0).is_err());
    }

    #[test]
    fn trace_rejects_mismatched_inputs() {
        let (m, p, _) = classical_pair(256);
        let other = RadialGrid::graded(1.0, 1.25, 300).unwrap();
        let (q, _) = picard_solve(&m, 1.0, 1.0, &other, &PicardOptions::default()).unwrap();
        assert!(deviation_limit_trace(&p, &q, 4).is_err());
        let grid = p.grid.clone();
        let (s, _) = picard_solve(&m, 1.0, 1.1, &grid, &PicardOptions::default()).unwrap();
        assert!(deviation_limit_trace(&p, &s, 4).is_err());
    }

    #[test]
    fn monotone_check_uses_slack() {
        let trace = [(1.2, 1e-8), (1.1, 1.05e-8), (1.01, 1e-9)];
        assert!(!trace_non_increasing(&trace, 0.0));
        assert!(trace_non_increasing(&trace, 1e-9));
    }

    #[test]
    fn probe_on_picard_iterates_contracts() {
        let m = VorticityModel::classical();
        let w = compute_r2(&m, 1.0, 1.0).unwrap().intersect(1.25);
        let grid = RadialGrid::graded(1.0, 1.25, 1024).unwrap();
        let it = picard_iterates(&m, 1.0, 1.0, &grid, 2, false).unwrap();
        let p = contraction_probe(&m, &it[1], &it[2], &w).unwrap();
        assert!(p.ratio > 0.0 && p.ratio <= 0.5);
        assert!(p.observed_ratio <= p.ratio);
        assert_eq!(p.first_bound_violation, None);
        assert_eq!(p.first_inequality_violation, None);
    }

    #[test]
    fn probe_refuses_below_lower_bound() {
        let m = VorticityModel::classical();
        let w = compute_r2(&m, 1.0, 1.0).unwrap().intersect(1.25);
        let (_, p, _) = classical_pair(256);
        let mut bad = p.clone();
        for v in bad.psi.iter_mut().skip(1) {
            *v *= 0.9;
        }
        assert!(matches!(
            contraction_probe(&m, &p, &bad, &w),
            Err(Error::LowerBoundViolated { .. })
        ));
    }

    #[test]
    fn classical_verdict_is_true() {
        let m = VorticityModel::classical();
        let s = VerifySettings {
            n_nodes: 1024,
            ..Default::default()
        };
        let r = verify_uniqueness(&m, 1.0, -1.0, &s).unwrap();
        assert!(r.verdict, "{}", r.to_kv_string());
        assert_eq!(r.psi1, 1.0);
        assert!(r.to_kv_string().contains("verdict = true\n"));
        assert!(r.trace_csv().starts_with("r,y\n"));
    }

    #[test]
    fn failing_hypothesis_is_named() {
        let m = ModelSpec {
            model: "custom".into(),
            law: Some("reversed".into()),
            ..Default::default()
        }
        .build()
        .unwrap();
        let r = verify_uniqueness(&m, 1.0, 1.0, &VerifySettings::default()).unwrap();
        assert!(!r.verdict);
        assert_eq!(r.failures, vec!["sign_condition"]);
    }

    #[test]
    fn sweep_rows_sorted_and_linear() {
        let m = VorticityModel::classical();
        let s = continuity_sweep(&m, 1.0, &[1.0, 1.01, 1.001], 0.2, 512, &PicardOptions::default()).unwrap();
        assert_eq!(s.rows.len(), 2);
        assert!(s.rows[0].dpsi1 < s.rows[1].dpsi1);
        assert!(s.is_monotone());
        assert!(s.linearity_spread() < 3.0);
        assert!(s.to_csv().starts_with("dpsi1,sup_dev\n"));
        assert!(continuity_sweep(&m, 1.0, &[1.0], 0.2, 64, &PicardOptions::default()).is_err());
    }
}
