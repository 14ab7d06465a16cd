//! Vorticity laws `f(psi)` and numerical checks of the hypotheses the
//! uniqueness argument relies on:
//!
//! * `f(0) = 0` and `psi * f(psi) < 0` on `[-delta, 0) U (0, delta]`;
//! * `|f(a) - f(b)| <= C / sqrt(min(|a|, |b|)) * |a - b|` for same-sign pairs.
//!
//! Both checks sample on log-spaced grids that accumulate at `psi = 0`, where
//! the laws stop being Lipschitz and where the Hölder quotient peaks.

use std::fmt;
use std::sync::Arc;

use crate::error::{domain, Error, Result};
use crate::kv::KvSection;

/// Half-width of the validated neighbourhood used when none is given.
pub const DEFAULT_DELTA: f64 = 0.25;

/// Safety factor applied to the empirical Hölder supremum of models with no
/// analytic constant.
pub const HOLDER_SAFETY_FACTOR: f64 = 1.25;

/// Tolerance on the identity `c1 = sin(c2 / 2)`.
pub const OSCILLATORY_EQ_TOL: f64 = 1e-12;

pub const DEFAULT_SIGN_SAMPLES: usize = 2_000;
pub const DEFAULT_HOLDER_PAIRS: usize = 20_000;

// Smallest |psi| visited by the sign check is delta * 10^-SIGN_DECADES; the
// margin -psi*f(psi) ~ |psi|^{3/2} must stay representable there.
const SIGN_DECADES: f64 = 100.0;
// Hölder pairs reach down to delta * 10^-HOLDER_DECADES.
const HOLDER_DECADES: f64 = 290.0;
// Number of distinct pair separations per base point.
const HOLDER_OFFSETS: usize = 40;

/// Upper bound on `c2`: `(3 - 2 sqrt 2) / (4 + 3 sqrt 2)` rationalised to
/// `(17 sqrt 2 - 24) / 2`, roughly 0.020815.
pub fn oscillatory_c2_bound() -> f64 {
    (17.0 * std::f64::consts::SQRT_2 - 24.0) / 2.0
}

/// Checks `0 < c1`, `c1 = sin(c2/2)` (to [`OSCILLATORY_EQ_TOL`]), `c1 < c2`
/// and `c2 < (17 sqrt 2 - 24) / 2`.
pub fn validate_oscillatory_constants(c1: f64, c2: f64) -> bool {
    c1.is_finite()
        && c2.is_finite()
        && 0.0 < c1
        && (c1 - (c2 / 2.0).sin()).abs() <= OSCILLATORY_EQ_TOL
        && c1 < c2
        && c2 < oscillatory_c2_bound()
}

pub type Evaluator = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
pub enum ModelKind {
    /// `f(psi) = psi - psi / sqrt|psi|`.
    Classical,
    /// `f(psi) = psi - psi / sqrt|psi| * [1 + c1 - sin(c2 psi^2 / (psi^2 + 1))]`.
    Oscillatory { c1: f64, c2: f64 },
    /// User supplied law. Only trusted once both validators pass.
    Custom { name: String, eval: Evaluator },
}

impl ModelKind {
    pub fn name(&self) -> &str {
        match self {
            ModelKind::Classical => "classical",
            ModelKind::Oscillatory { .. } => "oscillatory",
            ModelKind::Custom { name, .. } => name,
        }
    }
}

impl fmt::Debug for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelKind::Classical => f.write_str("Classical"),
            ModelKind::Oscillatory { c1, c2 } => f.debug_struct("Oscillatory").field("c1", c1).field("c2", c2).finish(),
            ModelKind::Custom { name, .. } => f.debug_struct("Custom").field("name", name).finish(),
        }
    }
}

/// Outcome of sampling the sign and Hölder hypotheses.
#[derive(Clone, Debug, PartialEq)]
pub struct HypothesisReport {
    /// Minimum of `-psi * f(psi)` over the sign grid.
    pub sign_margin: f64,
    /// Empirical supremum of `|f(a) - f(b)| * sqrt(min(|a|,|b|)) / |a - b|`.
    pub holder_sup: f64,
    /// Constant the supremum is compared against.
    pub holder_c: f64,
    /// Factor used to derive `holder_c` from an empirical supremum, if any.
    pub safety_factor: Option<f64>,
    pub samples_used: usize,
    pub verdict: bool,
}

impl HypothesisReport {
    pub fn sign_ok(&self) -> bool {
        self.sign_margin > 0.0
    }

    pub fn holder_ok(&self) -> bool {
        self.holder_sup <= self.holder_c
    }

    /// Name of the first failing hypothesis, if any.
    pub fn failure(&self) -> Option<&'static str> {
        if !self.sign_ok() {
            Some("sign_condition")
        } else if !self.holder_ok() {
            Some("holder_condition")
        } else {
            None
        }
    }

    /// `key = value` lines.
    pub fn to_kv_string(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("sign_margin = {:.16e}\n", self.sign_margin));
        out.push_str(&format!("holder_sup = {:.16e}\n", self.holder_sup));
        out.push_str(&format!("holder_C = {:.16e}\n", self.holder_c));
        if let Some(s) = self.safety_factor {
            out.push_str(&format!("safety_factor = {s}\n"));
        }
        out.push_str(&format!("samples_used = {}\n", self.samples_used));
        out.push_str(&format!("verdict = {}\n", self.verdict));
        out
    }
}

/// A vorticity law together with its neighbourhood `delta` and constant `C`.
///
/// Construction runs both validators; the outcome is kept in
/// [`VorticityModel::report`]. Solvers refuse models whose report failed
/// unless explicitly overridden.
#[derive(Clone, Debug)]
pub struct VorticityModel {
    kind: ModelKind,
    delta: f64,
    holder_c: f64,
    report: HypothesisReport,
}

impl VorticityModel {
    pub fn classical() -> Self {
        Self::classical_with_delta(DEFAULT_DELTA).expect("default classical model is valid")
    }

    /// Classical law; `C = sqrt(delta) + 1/2`.
    pub fn classical_with_delta(delta: f64) -> Result<Self> {
        check_delta(delta)?;
        Self::assemble(ModelKind::Classical, delta, Some(delta.sqrt() + 0.5))
    }

    pub fn oscillatory(c1: f64, c2: f64) -> Result<Self> {
        Self::oscillatory_with_delta(c1, c2, DEFAULT_DELTA)
    }

    pub fn oscillatory_with_delta(c1: f64, c2: f64, delta: f64) -> Result<Self> {
        if !validate_oscillatory_constants(c1, c2) {
            return Err(Error::InvalidModel(format!(
                "oscillatory constants violate 0 < c1 = sin(c2/2) < c2 < {:.6}: c1 = {c1}, c2 = {c2}",
                oscillatory_c2_bound()
            )));
        }
        check_delta(delta)?;
        Self::assemble(ModelKind::Oscillatory { c1, c2 }, delta, None)
    }

    /// Custom law. Without an explicit `holder_c` the constant is the
    /// empirical supremum times [`HOLDER_SAFETY_FACTOR`].
    pub fn custom<F>(name: impl Into<String>, f: F, delta: f64, holder_c: Option<f64>) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        check_delta(delta)?;
        if let Some(c) = holder_c {
            if !(c.is_finite() && c > 0.0) {
                return Err(Error::InvalidModel(format!("holder_C must be positive, got {c}")));
            }
        }
        let kind = ModelKind::Custom {
            name: name.into(),
            eval: Arc::new(f),
        };
        Self::assemble(kind, delta, holder_c)
    }

    fn assemble(kind: ModelKind, delta: f64, analytic_c: Option<f64>) -> Result<Self> {
        let mut model = VorticityModel {
            kind,
            delta,
            holder_c: analytic_c.unwrap_or(1.0),
            report: HypothesisReport {
                sign_margin: f64::NAN,
                holder_sup: f64::NAN,
                holder_c: f64::NAN,
                safety_factor: None,
                samples_used: 0,
                verdict: false,
            },
        };
        let holder_sup = estimate_holder_constant(&model, DEFAULT_HOLDER_PAIRS);
        let safety = match analytic_c {
            Some(_) => None,
            None => {
                // a vanishing quotient is certified by any positive constant
                let c = if holder_sup == 0.0 {
                    1.0
                } else {
                    HOLDER_SAFETY_FACTOR * holder_sup
                };
                if !(c.is_finite() && c > 0.0) {
                    return Err(Error::InvalidModel(format!(
                        "cannot derive a Hölder constant from empirical supremum {holder_sup}"
                    )));
                }
                model.holder_c = c;
                Some(HOLDER_SAFETY_FACTOR)
            }
        };
        let mut report = sign_report(&model, DEFAULT_SIGN_SAMPLES);
        report.holder_sup = holder_sup;
        report.safety_factor = safety;
        report.verdict = report.sign_ok() && report.holder_ok();
        model.report = report;
        Ok(model)
    }

    pub fn kind(&self) -> &ModelKind {
        &self.kind
    }

    pub fn name(&self) -> &str {
        self.kind.name()
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn holder_c(&self) -> f64 {
        self.holder_c
    }

    /// Validation outcome recorded at construction.
    pub fn report(&self) -> &HypothesisReport {
        &self.report
    }

    pub fn is_validated(&self) -> bool {
        self.report.verdict
    }

    /// Fails with [`Error::Unvalidated`] unless the model passed validation or
    /// `allow_unvalidated` is set.
    pub fn ensure_usable(&self, allow_unvalidated: bool) -> Result<()> {
        if self.is_validated() || allow_unvalidated {
            Ok(())
        } else {
            Err(Error::Unvalidated(self.name().to_string()))
        }
    }

    /// Evaluates `f(psi)`. Zero maps to exactly zero.
    pub fn eval(&self, psi: f64) -> Result<f64> {
        if !psi.is_finite() {
            return Err(domain(format!("vorticity evaluated at non-finite psi = {psi}")));
        }
        Ok(self.f(psi))
    }

    pub(crate) fn f(&self, psi: f64) -> f64 {
        if psi == 0.0 {
            return 0.0;
        }
        match &self.kind {
            ModelKind::Classical => psi - psi.signum() * psi.abs().sqrt(),
            ModelKind::Oscillatory { c1, c2 } => {
                let p2 = psi * psi;
                let bracket = 1.0 + (c1 - (c2 * p2 / (p2 + 1.0)).sin());
                psi - psi.signum() * psi.abs().sqrt() * bracket
            }
            ModelKind::Custom { eval, .. } => eval(psi),
        }
    }

    /// `|f(a) - f(b)| * sqrt(min(|a|,|b|)) / |a - b|` for a same-sign pair
    /// with `a != b`. The built-in laws use a cancellation-free form of the
    /// divided difference so that nearly coincident pairs stay accurate.
    pub fn holder_quotient(&self, a: f64, b: f64) -> Option<f64> {
        if a == b || a * b <= 0.0 || !a.is_finite() || !b.is_finite() {
            return None;
        }
        let (x, y) = (a.abs(), b.abs());
        let (sx, sy) = (x.sqrt(), y.sqrt());
        let m = sx.min(sy);
        let q = match &self.kind {
            ModelKind::Classical => m - m / (sx + sy),
            ModelKind::Oscillatory { c1, c2 } => {
                let bracket = |p: f64| {
                    let p2 = p * p;
                    1.0 + (c1 - (c2 * p2 / (p2 + 1.0)).sin())
                };
                // (B(x) - B(y)) / (x - y) via the sine difference identity.
                let (x2, y2) = (x * x, y * y);
                let sx_arg = x2 / (x2 + 1.0);
                let sy_arg = y2 / (y2 + 1.0);
                let w = (x + y) / ((x2 + 1.0) * (y2 + 1.0));
                let half = c2 * (x - y) * w / 2.0;
                let db = -c2 * w * (c2 * (sx_arg + sy_arg) / 2.0).cos() * sinc(half);
                m - m * bracket(x) / (sx + sy) - m * sy * db
            }
            ModelKind::Custom { eval, .. } => m * (eval(a) - eval(b)) / (a - b),
        };
        Some(q.abs())
    }
}

fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

fn check_delta(delta: f64) -> Result<()> {
    if delta.is_finite() && delta > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidModel(format!("delta must be positive, got {delta}")))
    }
}

/// `n` points from `top` down to `top * 10^-decades`, log-spaced.
fn log_grid(top: f64, decades: f64, n: usize) -> impl Iterator<Item = f64> {
    let denom = (n.max(2) - 1) as f64;
    (0..n).map(move |i| top * 10f64.powf(-decades * i as f64 / denom))
}

fn sign_report(model: &VorticityModel, n_samples: usize) -> HypothesisReport {
    let mut margin = f64::INFINITY;
    let mut used = 0;
    for p in log_grid(model.delta, SIGN_DECADES, n_samples) {
        for psi in [p, -p] {
            let v = -psi * model.f(psi);
            // NaN counts as a violation.
            margin = if v.is_nan() { f64::NEG_INFINITY } else { margin.min(v) };
            used += 1;
        }
    }
    HypothesisReport {
        sign_margin: margin,
        holder_sup: f64::NAN,
        holder_c: model.holder_c,
        safety_factor: None,
        samples_used: used,
        verdict: margin > 0.0,
    }
}

/// Samples the sign condition on `n_samples` log-spaced points per side of
/// zero and estimates the Hölder supremum with as many pairs. The verdict
/// requires `sign_margin > 0` and `holder_sup <= holder_C`.
pub fn check_sign_condition(model: &VorticityModel, n_samples: usize) -> Result<HypothesisReport> {
    if n_samples < 2 {
        return Err(domain("sign check needs at least 2 samples"));
    }
    let mut report = sign_report(model, n_samples);
    report.holder_sup = estimate_holder_constant(model, n_samples);
    report.safety_factor = model.report.safety_factor;
    report.verdict = report.sign_ok() && report.holder_ok();
    Ok(report)
}

/// Empirical supremum of the Hölder quotient over roughly `n_pairs`
/// deterministic same-sign pairs, half on each side of zero.
///
/// Base points are log-spaced down to `delta * 1e-290`; each is paired with
/// partners at relative separations from `2^-52` up to `1e6`. Coincident
/// pairs are skipped. A NaN quotient makes the result NaN.
pub fn estimate_holder_constant(model: &VorticityModel, n_pairs: usize) -> f64 {
    let per_side = n_pairs.max(1).div_ceil(2);
    let n_base = per_side.div_ceil(HOLDER_OFFSETS).max(1);
    let offsets: Vec<f64> = (0..HOLDER_OFFSETS)
        .map(|j| {
            let t = j as f64 / (HOLDER_OFFSETS - 1) as f64;
            // 2^-52 .. 1e6
            (f64::EPSILON.ln() * (1.0 - t) + 1e6f64.ln() * t).exp()
        })
        .collect();
    let bases: Vec<f64> = log_grid(model.delta, HOLDER_DECADES, n_base).collect();
    let mut sup = 0.0f64;
    let mut count = 0usize;
    'outer: for &b in &bases {
        for &rho in &offsets {
            if count >= 2 * per_side {
                break 'outer;
            }
            let a = b / (1.0 + rho);
            for (p, q) in [(b, a), (-b, -a)] {
                count += 1;
                match model.holder_quotient(p, q) {
                    Some(v) if v.is_nan() => return f64::NAN,
                    Some(v) => sup = sup.max(v),
                    None => {}
                }
            }
        }
    }
    sup
}

/// Named custom laws reachable from text configuration.
pub fn named_custom_law(name: &str) -> Option<Evaluator> {
    let law: Evaluator = match name {
        "zero" => Arc::new(|_psi: f64| 0.0),
        // pure square-root law: f = -sign(psi) sqrt|psi|
        "sqrt" => Arc::new(|psi: f64| -psi.signum() * psi.abs().sqrt()),
        // negated classical law, violates the sign condition
        "reversed" => Arc::new(|psi: f64| -(psi - psi.signum() * psi.abs().sqrt())),
        _ => return None,
    };
    Some(law)
}

/// Model description as read from a `[model]` configuration section.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ModelSpec {
    pub model: String,
    pub delta: Option<f64>,
    pub c1: Option<f64>,
    pub c2: Option<f64>,
    /// Name of a [`named_custom_law`] when `model = custom`.
    pub law: Option<String>,
    pub holder_c: Option<f64>,
}

impl ModelSpec {
    pub fn classical() -> Self {
        ModelSpec {
            model: "classical".into(),
            ..Default::default()
        }
    }

    /// Consumes the model keys of a section; other keys are left in place.
    pub fn take_from(section: &mut KvSection) -> Result<Self> {
        Ok(ModelSpec {
            model: section.take("model").unwrap_or_else(|| "classical".into()),
            delta: section.take_f64("delta")?,
            c1: section.take_f64("c1")?,
            c2: section.take_f64("c2")?,
            law: section.take("law"),
            holder_c: section.take_f64("holder_C")?,
        })
    }

    pub fn build(&self) -> Result<VorticityModel> {
        let delta = self.delta.unwrap_or(DEFAULT_DELTA);
        match self.model.as_str() {
            "classical" => {
                self.reject_unused(&[("c1", self.c1), ("c2", self.c2), ("holder_C", self.holder_c)])?;
                VorticityModel::classical_with_delta(delta)
            }
            "oscillatory" => {
                self.reject_unused(&[("holder_C", self.holder_c)])?;
                let c2 = self
                    .c2
                    .ok_or_else(|| Error::InvalidModel("oscillatory model needs c2".into()))?;
                let c1 = self.c1.unwrap_or_else(|| (c2 / 2.0).sin());
                VorticityModel::oscillatory_with_delta(c1, c2, delta)
            }
            "custom" => {
                self.reject_unused(&[("c1", self.c1), ("c2", self.c2)])?;
                let name = self
                    .law
                    .as_deref()
                    .ok_or_else(|| Error::InvalidModel("custom model needs `law`".into()))?;
                let law = named_custom_law(name)
                    .ok_or_else(|| Error::InvalidModel(format!("unknown custom law `{name}`")))?;
                VorticityModel::custom(name, move |p| law(p), delta, self.holder_c)
            }
            other => Err(Error::InvalidModel(format!("unknown model `{other}`"))),
        }
    }

    fn reject_unused(&self, keys: &[(&str, Option<f64>)]) -> Result<()> {
        if self.law.is_some() && self.model != "custom" {
            return Err(Error::InvalidModel(format!(
                "`law` does not apply to model `{}`",
                self.model
            )));
        }
        for (k, v) in keys {
            if v.is_some() {
                return Err(Error::InvalidModel(format!(
                    "`{k}` does not apply to model `{}`",
                    self.model
                )));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn osc() -> VorticityModel {
        VorticityModel::oscillatory(0.01f64.sin(), 0.02).unwrap()
    }

    #[test]
    fn classical_values() {
        let m = VorticityModel::classical();
        assert_eq!(m.eval(0.0).unwrap(), 0.0);
        assert_eq!(m.eval(0.25).unwrap(), -0.25);
        assert_eq!(m.eval(1.0).unwrap(), 0.0);
        assert_eq!(m.eval(-0.25).unwrap(), 0.25);
    }

    #[test]
    fn oscillatory_cancels_at_one() {
        assert_eq!(osc().eval(1.0).unwrap(), 0.0);
        assert_eq!(osc().eval(0.0).unwrap(), 0.0);
    }

    #[test]
    fn non_finite_input_is_rejected() {
        let m = VorticityModel::classical();
        assert!(matches!(m.eval(f64::NAN), Err(Error::Domain(_))));
        assert!(matches!(m.eval(f64::INFINITY), Err(Error::Domain(_))));
    }

    #[test]
    fn c2_bound_matches_unrationalised_form() {
        let s2 = std::f64::consts::SQRT_2;
        let direct = (3.0 - 2.0 * s2) / (4.0 + 3.0 * s2);
        assert!((oscillatory_c2_bound() - direct).abs() < 1e-14);
        assert!((oscillatory_c2_bound() - 0.020815).abs() < 1e-6);
        // the decimal 0.02 is not an upper bound for the expression
        assert!(oscillatory_c2_bound() > 0.02);
    }

    #[test]
    fn oscillatory_constant_gate() {
        assert!(validate_oscillatory_constants(0.01f64.sin(), 0.02));
        assert!(!validate_oscillatory_constants(0.015f64.sin(), 0.03));
        assert!(!validate_oscillatory_constants(0.0150, 0.02));
        assert!(!validate_oscillatory_constants(0.0, 0.0));
        assert!(!validate_oscillatory_constants(f64::NAN, 0.02));
        // c2 just above the bound
        let c2 = oscillatory_c2_bound() + 1e-9;
        assert!(!validate_oscillatory_constants((c2 / 2.0).sin(), c2));
        assert!(VorticityModel::oscillatory(0.015f64.sin(), 0.03).is_err());
    }

    #[test]
    fn classical_sign_condition() {
        let m = VorticityModel::classical();
        let r = check_sign_condition(&m, 1000).unwrap();
        assert!(r.sign_margin > 0.0);
        assert!(r.verdict);
        assert_eq!(r.samples_used, 2000);

        let wide = VorticityModel::classical_with_delta(4.0).unwrap();
        let r = check_sign_condition(&wide, 1000).unwrap();
        assert!(r.sign_margin < 0.0);
        assert!(!r.verdict);
        assert!(!wide.is_validated());
        assert_eq!(r.failure(), Some("sign_condition"));
    }

    #[test]
    fn oscillatory_sign_condition() {
        let r = check_sign_condition(&osc(), 1000).unwrap();
        assert!(r.sign_margin > 0.0 && r.verdict);
    }

    #[test]
    fn sign_check_needs_two_samples() {
        assert!(check_sign_condition(&VorticityModel::classical(), 1).is_err());
    }

    #[test]
    fn holder_estimates() {
        let c = estimate_holder_constant(&VorticityModel::classical(), 100_000);
        assert!((0.5..=1.0).contains(&c), "classical sup {c}");
        let o = estimate_holder_constant(&osc(), 100_000);
        assert!(o.is_finite() && o <= 1.1, "oscillatory sup {o}");
        assert!(osc().is_validated());
        assert_eq!(osc().report().safety_factor, Some(HOLDER_SAFETY_FACTOR));
    }

    #[test]
    fn coincident_pairs_are_skipped() {
        let m = VorticityModel::classical();
        assert_eq!(m.holder_quotient(0.1, 0.1), None);
        assert_eq!(m.holder_quotient(0.1, -0.1), None);
        assert_eq!(m.holder_quotient(0.0, 0.1), None);
    }

    #[test]
    fn stable_quotient_matches_naive_form_for_separated_pairs() {
        for m in [VorticityModel::classical(), osc()] {
            for &(a, b) in &[(0.2, 0.01), (0.1, 0.05), (1e-4, 3e-6), (-0.2, -0.07)] {
                let naive = ((m.f(a) - m.f(b)) / (a - b)).abs() * f64::min(a.abs(), b.abs()).sqrt();
                let stable = m.holder_quotient(a, b).unwrap();
                assert!(
                    (naive - stable).abs() < 1e-12 * naive.max(1.0),
                    "{a} {b}: {naive} vs {stable}"
                );
            }
        }
    }

    #[test]
    fn custom_models_are_gated() {
        let zero = VorticityModel::custom("zero", |_| 0.0, 0.25, None).unwrap();
        assert!(!zero.is_validated());
        assert!(matches!(zero.ensure_usable(false), Err(Error::Unvalidated(_))));
        assert!(zero.ensure_usable(true).is_ok());

        let sqrt = ModelSpec {
            model: "custom".into(),
            law: Some("sqrt".into()),
            ..Default::default()
        }
        .build()
        .unwrap();
        assert!(sqrt.is_validated());
    }

    #[test]
    fn report_serialises_as_key_value_lines() {
        let text = VorticityModel::classical().report().to_kv_string();
        for key in ["sign_margin", "holder_sup", "holder_C", "verdict"] {
            assert!(
                text.lines().any(|l| l.starts_with(&format!("{key} = "))),
                "{key} missing"
            );
        }
        assert!(text.contains("verdict = true"));
    }

    #[test]
    fn model_spec_rejects_mismatched_keys() {
        let spec = ModelSpec {
            model: "classical".into(),
            c2: Some(0.02),
            ..Default::default()
        };
        assert!(spec.build().is_err());
        let spec = ModelSpec {
            model: "oscillatory".into(),
            c2: Some(0.02),
            ..Default::default()
        };
        assert!(spec.build().unwrap().is_validated());
        let spec = ModelSpec {
            model: "bogus".into(),
            ..Default::default()
        };
        assert!(spec.build().is_err());
    }
}
