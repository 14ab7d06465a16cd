//! Run configuration read from sectioned `key = value` text.
//!
//! ```text
//! [model]
//! model = classical          # classical | oscillatory | custom
//! delta = 0.25
//!
//! [ic]
//! r0 = 1
//! psi1 = 1
//!
//! [grid]
//! n_nodes = 2048
//! grading = geometric        # geometric | uniform
//!
//! [solver]
//! kind = picard              # picard | rk
//! tol = 1e-10
//!
//! [run]
//! r_max = 1.5
//! output = out
//!
//! [sweep]
//! psi1 = 1.0, 1.001, 1.01
//! r_span = 0.25
//! ```

use std::path::PathBuf;

use psiflow::kv::KvDocument;
use psiflow::picard::PicardOptions;
use psiflow::rk::StepControl;
use psiflow::vorticity::ModelSpec;
use psiflow::{Grading, RadialGrid};

use crate::CliError;

pub const DEFAULT_N_NODES: usize = 2048;
pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_ITER: usize = 200;
pub const DEFAULT_SPAN: f64 = 0.5;
pub const DEFAULT_SWEEP_SPAN: f64 = 0.25;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolverKind {
    Picard,
    Rk,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GridChoice {
    Uniform,
    /// Geometric with an explicit ratio, or the library default.
    Geometric(Option<f64>),
}

/// Settings for both solvers; `kind` picks the one `integrate` uses.
#[derive(Clone, Debug, PartialEq)]
pub struct SolverConfig {
    pub kind: SolverKind,
    pub tol: f64,
    pub max_iter: usize,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub h_init: Option<f64>,
    pub h_min: Option<f64>,
    pub h_max: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub model: ModelSpec,
    pub r0: f64,
    pub psi1: f64,
    pub n_nodes: usize,
    pub grid: GridChoice,
    pub solver: SolverConfig,
    /// Right end of the integration interval; `r0 + 0.5` when unset.
    pub r_max: Option<f64>,
    pub output: PathBuf,
    pub allow_unvalidated: bool,
    pub sweep_psi1: Vec<f64>,
    pub sweep_span: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            model: ModelSpec::classical(),
            r0: 1.0,
            psi1: 1.0,
            n_nodes: DEFAULT_N_NODES,
            grid: GridChoice::Geometric(None),
            solver: SolverConfig {
                kind: SolverKind::Picard,
                tol: DEFAULT_TOL,
                max_iter: DEFAULT_MAX_ITER,
                rel_tol: DEFAULT_TOL,
                abs_tol: DEFAULT_TOL,
                h_init: None,
                h_min: None,
                h_max: None,
            },
            r_max: None,
            output: PathBuf::from("psiflow-out"),
            allow_unvalidated: false,
            sweep_psi1: Vec::new(),
            sweep_span: DEFAULT_SWEEP_SPAN,
        }
    }
}

/// Command-line values that replace configured ones.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub out: Option<PathBuf>,
    pub r0: Option<f64>,
    pub psi1: Option<f64>,
    pub model: Option<String>,
    pub tol: Option<f64>,
}

fn config_err(e: impl std::fmt::Display) -> CliError {
    CliError::Config(e.to_string())
}

impl RunConfig {
    /// Parses configuration text. Unknown sections and keys are errors.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut doc = KvDocument::parse(text).map_err(config_err)?;
        let mut cfg = RunConfig::default();

        let mut model = doc.take_section("model");
        cfg.model = ModelSpec::take_from(&mut model).map_err(config_err)?;
        model.finish().map_err(config_err)?;

        let mut ic = doc.take_section("ic");
        if let Some(v) = ic.take_f64("r0").map_err(config_err)? {
            cfg.r0 = v;
        }
        if let Some(v) = ic.take_f64("psi1").map_err(config_err)? {
            cfg.psi1 = v;
        }
        ic.finish().map_err(config_err)?;

        let mut grid = doc.take_section("grid");
        if let Some(n) = grid.take_usize("n_nodes").map_err(config_err)? {
            cfg.n_nodes = n;
        }
        let ratio = grid.take_f64("ratio").map_err(config_err)?;
        cfg.grid = match grid.take("grading").as_deref() {
            None | Some("geometric") => GridChoice::Geometric(ratio),
            Some("uniform") if ratio.is_none() => GridChoice::Uniform,
            Some("uniform") => return Err(config_err("[grid] ratio does not apply to a uniform grid")),
            Some(other) => return Err(config_err(format!("[grid] unknown grading `{other}`"))),
        };
        grid.finish().map_err(config_err)?;

        let mut solver = doc.take_section("solver");
        let s = &mut cfg.solver;
        s.kind = match solver.take("kind").as_deref() {
            None | Some("picard") => SolverKind::Picard,
            Some("rk") => SolverKind::Rk,
            Some(other) => return Err(config_err(format!("[solver] unknown kind `{other}`"))),
        };
        if let Some(v) = solver.take_f64("tol").map_err(config_err)? {
            s.tol = v;
        }
        if let Some(v) = solver.take_usize("max_iter").map_err(config_err)? {
            s.max_iter = v;
        }
        if let Some(v) = solver.take_f64("rel_tol").map_err(config_err)? {
            s.rel_tol = v;
        }
        if let Some(v) = solver.take_f64("abs_tol").map_err(config_err)? {
            s.abs_tol = v;
        }
        s.h_init = solver.take_f64("h_init").map_err(config_err)?;
        s.h_min = solver.take_f64("h_min").map_err(config_err)?;
        s.h_max = solver.take_f64("h_max").map_err(config_err)?;
        if let Some(v) = solver.take_bool("allow_unvalidated").map_err(config_err)? {
            cfg.allow_unvalidated = v;
        }
        solver.finish().map_err(config_err)?;

        let mut run = doc.take_section("run");
        cfg.r_max = run.take_f64("r_max").map_err(config_err)?;
        if let Some(v) = run.take("output") {
            cfg.output = PathBuf::from(v);
        }
        run.finish().map_err(config_err)?;

        let mut sweep = doc.take_section("sweep");
        if let Some(v) = sweep.take_f64_list("psi1").map_err(config_err)? {
            cfg.sweep_psi1 = v;
        }
        if let Some(v) = sweep.take_f64("r_span").map_err(config_err)? {
            cfg.sweep_span = v;
        }
        sweep.finish().map_err(config_err)?;

        // top-level keys land in the unnamed section and are rejected here
        doc.finish().map_err(config_err)?;
        Ok(cfg)
    }

    pub fn apply(&mut self, o: &Overrides) {
        if let Some(p) = &o.out {
            self.output = p.clone();
        }
        if let Some(v) = o.r0 {
            self.r0 = v;
        }
        if let Some(v) = o.psi1 {
            self.psi1 = v;
        }
        if let Some(m) = &o.model {
            self.model.model = m.clone();
        }
        if let Some(t) = o.tol {
            self.solver.tol = t;
            self.solver.rel_tol = t;
            self.solver.abs_tol = t;
        }
    }

    /// Checks every numeric constraint.
    pub fn validate(&self) -> Result<(), CliError> {
        if !(self.r0.is_finite() && self.r0 >= 1.0) {
            return Err(config_err(format!("r0 must be finite and >= 1, got {}", self.r0)));
        }
        if !(self.psi1.is_finite() && self.psi1 != 0.0) {
            return Err(config_err(format!(
                "psi1 must be finite and non-zero, got {}",
                self.psi1
            )));
        }
        if self.n_nodes < 3 {
            return Err(config_err(format!("n_nodes must be at least 3, got {}", self.n_nodes)));
        }
        if let GridChoice::Geometric(Some(q)) = self.grid {
            if !(q > 0.0 && q < 1.0) {
                return Err(config_err(format!("ratio must lie in (0, 1), got {q}")));
            }
        }
        let s = &self.solver;
        for (name, v) in [("tol", s.tol), ("rel_tol", s.rel_tol), ("abs_tol", s.abs_tol)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(config_err(format!("{name} must be positive, got {v}")));
            }
        }
        if s.max_iter == 0 {
            return Err(config_err("max_iter must be at least 1"));
        }
        if let Some(r) = self.r_max {
            if !(r.is_finite() && r > self.r0) {
                return Err(config_err(format!("r_max must exceed r0 = {}, got {r}", self.r0)));
            }
        }
        if !(self.sweep_span.is_finite() && self.sweep_span > 0.0) {
            return Err(config_err(format!("r_span must be positive, got {}", self.sweep_span)));
        }
        if let Some(v) = self.sweep_psi1.iter().find(|v| !(v.is_finite() && **v != 0.0)) {
            return Err(config_err(format!(
                "sweep psi1 values must be finite and non-zero, got {v}"
            )));
        }
        self.step_control(self.r_end()).map(|_| ())
    }

    pub fn r_end(&self) -> f64 {
        self.r_max.unwrap_or(self.r0 + DEFAULT_SPAN)
    }

    pub fn picard_options(&self) -> PicardOptions {
        PicardOptions {
            tol: self.solver.tol,
            max_iter: self.solver.max_iter,
            allow_unvalidated: self.allow_unvalidated,
        }
    }

    pub fn step_control(&self, r_end: f64) -> Result<StepControl, CliError> {
        let s = &self.solver;
        let base = StepControl::for_span(self.r0, r_end, s.rel_tol, s.abs_tol).map_err(config_err)?;
        StepControl::new(
            s.rel_tol,
            s.abs_tol,
            s.h_init.unwrap_or(base.h_init),
            s.h_min.unwrap_or(base.h_min),
            s.h_max.unwrap_or(base.h_max),
        )
        .map_err(config_err)
    }

    pub fn grid(&self, r_end: f64) -> Result<RadialGrid, CliError> {
        match self.grid {
            GridChoice::Uniform => RadialGrid::with_grading(self.r0, r_end, self.n_nodes, Grading::Uniform),
            GridChoice::Geometric(None) => RadialGrid::graded(self.r0, r_end, self.n_nodes),
            GridChoice::Geometric(Some(ratio)) => {
                RadialGrid::with_grading(self.r0, r_end, self.n_nodes, Grading::GeometricTowardLeft { ratio })
            }
        }
        .map_err(config_err)
    }
}
