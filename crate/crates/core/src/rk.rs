//! Direct integration of the first-order system
//!
//! ```text
//! psi' = u / r,    u' = -r f(psi),    psi(r0) = 0,  u(r0) = r0 psi1
//! ```
//!
//! with the Dormand-Prince 5(4) pair, a PI step-size controller and the
//! pair's fourth-order continuous extension for output on a fixed grid.
//!
//! The right-hand side is only Hölder continuous at `psi = 0`, which is
//! exactly where integration starts. The controller resolves the resulting
//! `(r - r0)^{3/2}` layer in `u` by shrinking the first steps.

use std::fmt;

use crate::error::{domain, Error, Result};
use crate::grid::RadialGrid;
use crate::trajectory::{self, Method, Trajectory};
use crate::vorticity::VorticityModel;

const SAFETY: f64 = 0.9;
const BETA: f64 = 0.04;
const ALPHA: f64 = 0.2 - 0.75 * BETA;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 10.0;
const MAX_STEPS: usize = 5_000_000;

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

// 5th minus 4th order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

// continuous extension
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

type State = [f64; 2];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepControl {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub h_init: f64,
    pub h_min: f64,
    pub h_max: f64,
}

impl StepControl {
    pub fn new(rel_tol: f64, abs_tol: f64, h_init: f64, h_min: f64, h_max: f64) -> Result<Self> {
        let ctrl = StepControl {
            rel_tol,
            abs_tol,
            h_init,
            h_min,
            h_max,
        };
        ctrl.validate()?;
        Ok(ctrl)
    }

    /// Defaults for integrating over `[r0, r_max]`: `h_init = 1e-4 (r_max - r0)`,
    /// `h_min = 1e-14 (r_max - r0)`, `h_max = r_max - r0`.
    pub fn for_span(r0: f64, r_max: f64, rel_tol: f64, abs_tol: f64) -> Result<Self> {
        let span = r_max - r0;
        if !(span > 0.0 && span.is_finite()) {
            return Err(domain(format!("r_max = {r_max} must exceed r0 = {r0}")));
        }
        Self::new(rel_tol, abs_tol, 1e-4 * span, 1e-14 * span, span)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.rel_tol > 0.0
            && self.abs_tol > 0.0
            && self.h_min > 0.0
            && self.h_min <= self.h_init
            && self.h_init <= self.h_max
            && self.h_max.is_finite();
        if ok {
            Ok(())
        } else {
            Err(domain(format!("inconsistent step control {self:?}")))
        }
    }
}

/// Step statistics of one run.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct RunLog {
    pub accepted_steps: usize,
    pub rejected_steps: usize,
    pub final_step: f64,
}

impl RunLog {
    pub fn to_kv_string(&self) -> String {
        format!(
            "accepted_steps = {}\nrejected_steps = {}\nfinal_step = {:.16e}\n",
            self.accepted_steps, self.rejected_steps, self.final_step
        )
    }
}

impl fmt::Display for RunLog {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} accepted, {} rejected, final h = {:e}",
            self.accepted_steps, self.rejected_steps, self.final_step
        )
    }
}

/// `(psi', u')` at `(r, psi, u)`.
pub fn rhs(model: &VorticityModel, r: f64, psi: f64, u: f64) -> Result<(f64, f64)> {
    if !(r.is_finite() && psi.is_finite() && u.is_finite()) {
        return Err(domain(format!("non-finite state r = {r}, psi = {psi}, u = {u}")));
    }
    if r < 1.0 {
        return Err(domain(format!("rhs needs r >= 1, got {r}")));
    }
    Ok((u / r, -r * model.eval(psi)?))
}

fn deriv(model: &VorticityModel, r: f64, y: &State) -> State {
    [y[1] / r, -r * model.f(y[0])]
}

fn combo(y: &State, h: f64, terms: &[(f64, &State)]) -> State {
    let mut out = *y;
    for (c, k) in terms {
        out[0] += h * c * k[0];
        out[1] += h * c * k[1];
    }
    out
}

/// Integrates from `r0` to `r_max` and samples the solution on
/// `output_grid`, whose nodes must lie in `[r0, r_max]`.
pub fn rk_solve(
    model: &VorticityModel,
    r0: f64,
    psi1: f64,
    r_max: f64,
    ctrl: &StepControl,
    output_grid: &RadialGrid,
    allow_unvalidated: bool,
) -> Result<(Trajectory, RunLog)> {
    if !(r0.is_finite() && r0 >= 1.0) {
        return Err(domain(format!("r0 must be >= 1, got {r0}")));
    }
    if !(psi1.is_finite() && psi1 != 0.0) {
        return Err(domain(format!("psi1 must be finite and non-zero, got {psi1}")));
    }
    if !(r_max.is_finite() && r_max > r0) {
        return Err(domain(format!("r_max = {r_max} must exceed r0 = {r0}")));
    }
    if output_grid.r0() != r0 || output_grid.r_end() > r_max {
        return Err(domain(format!(
            "output grid [{}, {}] must start at r0 = {r0} and end by r_max = {r_max}",
            output_grid.r0(),
            output_grid.r_end()
        )));
    }
    ctrl.validate()?;
    model.ensure_usable(allow_unvalidated)?;

    let nodes = output_grid.nodes();
    let mut psi_out = vec![0.0; nodes.len()];
    let mut u_out = vec![0.0; nodes.len()];
    let mut next_out = 0usize;

    let mut x = r0;
    let mut y: State = [0.0, r0 * psi1.abs()];
    let mut k1 = deriv(model, x, &y);
    let mut h = ctrl.h_init.min(r_max - r0);
    let mut err_old = 1e-4f64;
    let mut log = RunLog::default();
    let mut last_rejected = false;

    while next_out < nodes.len() && nodes[next_out] <= x {
        psi_out[next_out] = y[0];
        u_out[next_out] = y[1];
        next_out += 1;
    }

    while x < r_max {
        if log.accepted_steps + log.rejected_steps >= MAX_STEPS {
            return Err(domain(format!("step budget exhausted at r = {x}")));
        }
        let last = x + h >= r_max;
        if last {
            h = r_max - x;
        }
        let k2 = deriv(model, x + C2 * h, &combo(&y, h, &[(A21, &k1)]));
        let k3 = deriv(model, x + C3 * h, &combo(&y, h, &[(A31, &k1), (A32, &k2)]));
        let k4 = deriv(model, x + C4 * h, &combo(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
        let k5 = deriv(
            model,
            x + C5 * h,
            &combo(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
        );
        let x_new = if last { r_max } else { x + h };
        let k6 = deriv(
            model,
            x_new,
            &combo(&y, h, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]),
        );
        let y_new = combo(&y, h, &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)]);
        let k7 = deriv(model, x_new, &y_new);

        let mut err_sq = 0.0;
        for i in 0..2 {
            let e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let scale = ctrl.abs_tol + ctrl.rel_tol * y[i].abs().max(y_new[i].abs());
            err_sq += (e / scale).powi(2);
        }
        let err = (err_sq / 2.0).sqrt();
        if !err.is_finite() || !y_new.iter().all(|v| v.is_finite()) {
            return Err(domain(format!("non-finite state after step from r = {x}")));
        }

        if err <= 1.0 {
            // continuous extension on (x, x_new]
            let ydiff = [y_new[0] - y[0], y_new[1] - y[1]];
            let mut rc = [[0.0; 2]; 4];
            for i in 0..2 {
                let bspl = h * k1[i] - ydiff[i];
                rc[0][i] = ydiff[i];
                rc[1][i] = bspl;
                rc[2][i] = ydiff[i] - h * k7[i] - bspl;
                rc[3][i] = h * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i]);
            }
            while next_out < nodes.len() && nodes[next_out] <= x_new {
                let r = nodes[next_out];
                if r == x_new {
                    psi_out[next_out] = y_new[0];
                    u_out[next_out] = y_new[1];
                } else {
                    let th = (r - x) / h;
                    let th1 = 1.0 - th;
                    let interp =
                        |i: usize| y[i] + th * (rc[0][i] + th1 * (rc[1][i] + th * (rc[2][i] + th1 * rc[3][i])));
                    psi_out[next_out] = interp(0);
                    u_out[next_out] = interp(1);
                }
                next_out += 1;
            }

            log.accepted_steps += 1;
            log.final_step = h;
            x = x_new;
            y = y_new;
            k1 = k7;

            let fac = (err.max(1e-10).powf(ALPHA) / err_old.powf(BETA) / SAFETY).clamp(1.0 / FAC_MAX, 1.0 / FAC_MIN);
            let mut h_new = h / fac;
            if last_rejected {
                h_new = h_new.min(h);
            }
            err_old = err.max(1e-4);
            last_rejected = false;
            h = h_new.min(ctrl.h_max);
        } else {
            log.rejected_steps += 1;
            last_rejected = true;
            h /= (err.powf(ALPHA) / SAFETY).min(1.0 / FAC_MIN);
            if h < ctrl.h_min {
                return Err(Error::StepUnderflow { r: x, h });
            }
        }
    }

    let traj = trajectory::from_normalised(output_grid, psi_out, u_out, psi1, model.delta(), Method::RungeKutta);
    Ok((traj, log))
}

/// Self-convergence study: one run per tolerance (`rel = abs = tol`), with
/// errors measured as the sup over `output_grid` of `|psi - psi_ref|`, the
/// reference being the last (tightest) run.
pub fn convergence_order_probe(
    model: &VorticityModel,
    r0: f64,
    psi1: f64,
    tolerances: &[f64],
    output_grid: &RadialGrid,
    allow_unvalidated: bool,
) -> Result<Vec<(f64, f64)>> {
    if tolerances.len() < 2 {
        return Err(domain("convergence probe needs at least two tolerances"));
    }
    if tolerances.windows(2).any(|w| !(w[1] < w[0])) || tolerances.iter().any(|t| !(*t > 0.0)) {
        return Err(domain("tolerances must be positive and strictly decreasing"));
    }
    let r_max = output_grid.r_end();
    let runs = tolerances
        .iter()
        .map(|&tol| {
            let ctrl = StepControl::for_span(r0, r_max, tol, tol)?;
            rk_solve(model, r0, psi1, r_max, &ctrl, output_grid, allow_unvalidated).map(|(t, _)| t)
        })
        .collect::<Result<Vec<_>>>()?;
    let reference = runs.last().expect("at least two runs");
    Ok(tolerances
        .iter()
        .zip(&runs)
        .take(runs.len() - 1)
        .map(|(&tol, run)| {
            let err = run
                .psi
                .iter()
                .zip(&reference.psi)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            (tol, err)
        })
        .collect())
}
