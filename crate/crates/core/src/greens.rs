//! Integral-form cross-check of computed solutions.
//!
//! With `b(x) = ∫_0^x dt/p(t)` the boundary value problem is equivalent to
//!
//! ```text
//! y(x) = v(x) - ∫_0^1 G(x, t) q(t) f(t, y(t)) dt
//! ```
//!
//! where, for Dirichlet data,
//! `v = a + (b_R - a) b(x)/b(1)` and `G = b(min)(b(1) - b(max)) / b(1)`,
//! and for Neumann-Robin data `v = gamma/alpha` and
//! `G = b(1) - b(max(x, t)) + beta b'(1) / alpha`. Both kernels are
//! nonnegative, hence the minus sign.
//!
//! The Robin kernel only involves `B(t) = b(1) - b(t) = ∫_t^1 ds/p(s)`, which
//! stays finite for `t > 0` even when `1/p` is not integrable at 0. The
//! Dirichlet kernel needs `b` itself and is unavailable in that case.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::problem::{finite, BoundaryCondition, ProblemSpec, ScalarFn};
use crate::qlin::Solution;
use crate::quad::{graded_adaptive, graded_midpoint, midpoint};

const B_TOL: f64 = 1e-9;
const B_MAX_PANELS: usize = 1 << 20;

/// Number of interior probe points used by [`integral_residual`].
pub const DEFAULT_PROBES: usize = 33;

/// `b(x) = ∫_0^x dt / p(t)`, analytic when supplied, otherwise by graded
/// midpoint quadrature refined to `1e-9`.
pub fn b_eval(spec: &ProblemSpec, x: f64, analytic_b: Option<&dyn Fn(f64) -> f64>) -> Result<f64> {
    if !(x > 0.0 && x <= 1.0) {
        return Err(Error::OutOfDomain { x, interval: "(0, 1]" });
    }
    if let Some(b) = analytic_b {
        return finite(x, "b", b(x));
    }
    let p = &spec.p;
    graded_adaptive(|t| 1.0 / p(t), 0.0, x, B_TOL, B_MAX_PANELS)?.ok_or_else(|| {
        Error::UnavailableKernel(format!("∫ dt/p(t) does not converge on (0, {x}]; 1/p is not integrable at 0"))
    })
}

/// `∫_t^1 ds / p(s)` by graded quadrature.
fn tail_numeric(p: &ScalarFn, t: f64) -> Result<f64> {
    graded_adaptive(|s| 1.0 / p(s), t, 1.0, B_TOL, B_MAX_PANELS)?
        .ok_or_else(|| Error::UnavailableKernel(format!("∫ ds/p(s) does not converge on [{t}, 1]")))
}

/// Everything the Green's kernels need from a problem.
#[derive(Clone)]
pub struct KernelSpec {
    b: Option<ScalarFn>,
    tail: Option<ScalarFn>,
    p: ScalarFn,
    /// `b(1)`, `None` when `1/p` is not integrable at 0.
    pub b1: Option<f64>,
    /// `b'(1) = 1/p(1)`.
    pub b1_prime: f64,
    pub bc: BoundaryCondition,
    pub b_is_analytic: bool,
}

impl std::fmt::Debug for KernelSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("KernelSpec")
            .field("b1", &self.b1)
            .field("b1_prime", &self.b1_prime)
            .field("bc", &self.bc)
            .field("b_is_analytic", &self.b_is_analytic)
            .finish_non_exhaustive()
    }
}

impl KernelSpec {
    /// Closed-form `b` (`None` if divergent at 0) and tail `∫_t^1 ds/p`.
    pub fn analytic(spec: &ProblemSpec, b: Option<ScalarFn>, tail: ScalarFn) -> Result<Self> {
        let b1 = match &b {
            Some(b) => Some(finite(1.0, "b", b(1.0))?),
            None if spec.bc.is_dirichlet() => {
                return Err(Error::UnavailableKernel(
                    "Dirichlet kernel needs b(1) = ∫_0^1 dt/p(t), which diverges".into(),
                ))
            }
            None => None,
        };
        Ok(Self {
            b,
            tail: Some(tail),
            p: spec.p.clone(),
            b1,
            b1_prime: 1.0 / finite(1.0, "p", (spec.p)(1.0))?,
            bc: spec.bc,
            b_is_analytic: true,
        })
    }

    /// Everything by quadrature of `1/p`. Dirichlet problems fail with
    /// `UnavailableKernel` when `1/p` is not integrable at 0.
    pub fn numeric(spec: &ProblemSpec) -> Result<Self> {
        let b1 = match b_eval(spec, 1.0, None) {
            Ok(v) => Some(v),
            Err(Error::UnavailableKernel(_)) if !spec.bc.is_dirichlet() => None,
            Err(e) => return Err(e),
        };
        Ok(Self {
            b: None,
            tail: None,
            p: spec.p.clone(),
            b1,
            b1_prime: 1.0 / finite(1.0, "p", (spec.p)(1.0))?,
            bc: spec.bc,
            b_is_analytic: false,
        })
    }

    /// `∫_t^1 ds / p(s)`.
    pub fn tail(&self, t: f64) -> Result<f64> {
        match &self.tail {
            Some(f) => finite(t, "b tail", f(t)),
            None => tail_numeric(&self.p, t),
        }
    }

    /// `b(x)`; fails with `UnavailableKernel` when `1/p` is not integrable at 0.
    pub fn b(&self, x: f64) -> Result<f64> {
        let Some(b1) = self.b1 else {
            return Err(Error::UnavailableKernel(
                "b(x) = ∫_0^x dt/p(t) diverges; the Dirichlet kernel does not exist for this p".into(),
            ));
        };
        match &self.b {
            Some(f) => finite(x, "b", f(x)),
            None => Ok(b1 - self.tail(x)?),
        }
    }

    /// Boundary part `v(x)` of the integral form.
    pub fn v(&self, x: f64) -> Result<f64> {
        match self.bc {
            BoundaryCondition::Dirichlet { left, right } => {
                let b1 = self.b(1.0)?;
                let bx = if x == 0.0 { 0.0 } else { self.b(x)? };
                Ok(left + (right - left) * bx / b1)
            }
            BoundaryCondition::NeumannRobin { alpha, gamma, .. } => Ok(gamma / alpha),
        }
    }
}

/// `G(x, t)` for the boundary-condition family of `ks`, `x, t ∈ (0, 1]`.
pub fn greens_kernel(ks: &KernelSpec, x: f64, t: f64) -> Result<f64> {
    for v in [x, t] {
        if !(v > 0.0 && v <= 1.0) {
            return Err(Error::OutOfDomain { x: v, interval: "(0, 1]" });
        }
    }
    let (lo, hi) = if x <= t { (x, t) } else { (t, x) };
    match ks.bc {
        BoundaryCondition::Dirichlet { .. } => {
            let b1 = ks.b(1.0)?;
            Ok(ks.b(lo)? * (b1 - ks.b(hi)?) / b1)
        }
        BoundaryCondition::NeumannRobin { alpha, beta, .. } => Ok(ks.tail(hi)? + beta * ks.b1_prime / alpha),
    }
}

/// Probe points `k / (n + 1)`, `k = 1..=n`.
pub fn probe_grid(n: usize) -> Vec<f64> {
    (1..=n).map(|k| k as f64 / (n + 1) as f64).collect()
}

/// `|y(x) - v(x) + ∫_0^1 G(x,t) q(t) f(t, y(t)) dt|` at one point, with
/// `n_quad` midpoint panels split evenly between `(0, x)` (graded toward 0)
/// and `(x, 1)`.
pub fn pointwise_residual(
    y: &dyn Fn(f64) -> f64,
    spec: &ProblemSpec,
    ks: &KernelSpec,
    x: f64,
    n_quad: usize,
) -> Result<f64> {
    let half = (n_quad / 2).max(1);
    let integrand = |t: f64| -> Result<f64> {
        let yt = spec.guarded(t, y(t))?;
        Ok(greens_kernel(ks, x, t)? * (spec.q)(t) * (spec.f)(t, yt))
    };
    // the quadrature closures cannot return Result, so stash the first error
    let failure = std::cell::RefCell::new(None);
    let wrapped = |t: f64| match integrand(t) {
        Ok(v) => v,
        Err(e) => {
            failure.borrow_mut().get_or_insert(e);
            0.0
        }
    };
    let left = graded_midpoint(wrapped, 0.0, x, half);
    let right = midpoint(wrapped, x, 1.0, half);
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    let integral = left? + right?;
    Ok((y(x) - ks.v(x)? + integral).abs())
}

/// Sup of [`pointwise_residual`] over explicit probe points.
pub fn integral_residual_at(
    y: &dyn Fn(f64) -> f64,
    spec: &ProblemSpec,
    ks: &KernelSpec,
    n_quad: usize,
    probes: &[f64],
) -> Result<f64> {
    if n_quad < 2 {
        return Err(Error::InvalidConfig("n_quad must be at least 2".into()));
    }
    probes.iter().map(|&x| pointwise_residual(y, spec, ks, x, n_quad)).try_fold(0.0_f64, |m, r| Ok(m.max(r?)))
}

/// Integral-form residual of an arbitrary function on the default probe grid.
pub fn integral_residual_fn(y: &dyn Fn(f64) -> f64, spec: &ProblemSpec, ks: &KernelSpec, n_quad: usize) -> Result<f64> {
    integral_residual_at(y, spec, ks, n_quad, &probe_grid(DEFAULT_PROBES))
}

/// Integral-form residual of a computed solution on the default probe grid.
pub fn integral_residual(solution: &Solution, spec: &ProblemSpec, ks: &KernelSpec, n_quad: usize) -> Result<f64> {
    let y = |x: f64| solution.evaluate(x).unwrap_or(f64::NAN);
    integral_residual_fn(&y, spec, ks, n_quad)
}

/// Convenience constructor for closed-form `b` and tail.
pub fn analytic_kernel(spec: &ProblemSpec, b: Option<fn(f64) -> f64>, tail: fn(f64) -> f64) -> Result<KernelSpec> {
    KernelSpec::analytic(spec, b.map(|f| Arc::new(f) as ScalarFn), Arc::new(tail))
}
