//! Problem data for `(p(x) y')' = q(x) f(x, y)` on `(0, 1)`.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
pub type FieldFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;
/// Maps an iterate value into the admissible domain of `f`, or rejects it.
pub type GuardFn = Arc<dyn Fn(f64) -> Option<f64> + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BoundaryCondition {
    /// `y(0) = left`, `y(1) = right`.
    Dirichlet { left: f64, right: f64 },
    /// `y'(0) = 0`, `alpha y(1) + beta y'(1) = gamma`.
    NeumannRobin { alpha: f64, beta: f64, gamma: f64 },
}

impl BoundaryCondition {
    pub fn dirichlet(left: f64, right: f64) -> Result<Self> {
        let bc = Self::Dirichlet { left, right };
        bc.validate()?;
        Ok(bc)
    }

    pub fn robin(alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        let bc = Self::NeumannRobin { alpha, beta, gamma };
        bc.validate()?;
        Ok(bc)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::Dirichlet { left, right } => {
                if !(left.is_finite() && right.is_finite()) {
                    return Err(Error::InvalidBc("Dirichlet data must be finite".into()));
                }
            }
            Self::NeumannRobin { alpha, beta, gamma } => {
                if !(alpha.is_finite() && beta.is_finite() && gamma.is_finite()) {
                    return Err(Error::InvalidBc("Robin data must be finite".into()));
                }
                if alpha == 0.0 {
                    return Err(Error::InvalidBc("Robin coefficient alpha must be nonzero".into()));
                }
            }
        }
        Ok(())
    }

    /// The zero-coefficient state of the reconstruction: the straight line
    /// between the Dirichlet values, or the constant `gamma / alpha`.
    pub fn baseline(&self, x: f64) -> f64 {
        match *self {
            Self::Dirichlet { left, right } => left + (right - left) * x,
            Self::NeumannRobin { alpha, gamma, .. } => gamma / alpha,
        }
    }

    pub fn baseline_slope(&self) -> f64 {
        match *self {
            Self::Dirichlet { left, right } => right - left,
            Self::NeumannRobin { .. } => 0.0,
        }
    }

    pub fn is_dirichlet(&self) -> bool {
        matches!(self, Self::Dirichlet { .. })
    }
}

impl fmt::Display for BoundaryCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Dirichlet { left, right } => write!(f, "y(0) = {left}, y(1) = {right}"),
            Self::NeumannRobin { alpha, beta, gamma } => {
                write!(f, "y'(0) = 0, {alpha} y(1) + {beta} y'(1) = {gamma}")
            }
        }
    }
}

/// One instance of the boundary value problem.
///
/// All functions must be pure; the solver may call them from any thread.
#[derive(Clone)]
pub struct ProblemSpec {
    pub p: ScalarFn,
    /// `None` selects the central-difference fallback, see [`ProblemSpec::p_prime_at`].
    pub p_prime: Option<ScalarFn>,
    pub q: ScalarFn,
    pub f: FieldFn,
    pub f_y: FieldFn,
    pub bc: BoundaryCondition,
    pub domain_guard: Option<GuardFn>,
}

impl fmt::Debug for ProblemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProblemSpec")
            .field("bc", &self.bc)
            .field("analytic_p_prime", &self.p_prime.is_some())
            .field("guarded", &self.domain_guard.is_some())
            .finish_non_exhaustive()
    }
}

impl ProblemSpec {
    pub fn new(
        p: impl Fn(f64) -> f64 + Send + Sync + 'static,
        q: impl Fn(f64) -> f64 + Send + Sync + 'static,
        f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
        f_y: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
        bc: BoundaryCondition,
    ) -> Self {
        Self {
            p: Arc::new(p),
            p_prime: None,
            q: Arc::new(q),
            f: Arc::new(f),
            f_y: Arc::new(f_y),
            bc,
            domain_guard: None,
        }
    }

    pub fn with_p_prime(mut self, p_prime: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.p_prime = Some(Arc::new(p_prime));
        self
    }

    pub fn with_guard(mut self, guard: impl Fn(f64) -> Option<f64> + Send + Sync + 'static) -> Self {
        self.domain_guard = Some(Arc::new(guard));
        self
    }

    /// True when `p'` comes from finite differences (reduced accuracy near 0).
    pub fn uses_fd_slope(&self) -> bool {
        self.p_prime.is_none()
    }

    /// `p'(x)`, analytic when supplied, otherwise a central difference with
    /// step `x·1e-7 + 1e-12`.
    pub fn p_prime_at(&self, x: f64) -> f64 {
        match &self.p_prime {
            Some(dp) => dp(x),
            None => {
                let h = x * 1e-7 + 1e-12;
                ((self.p)(x + h) - (self.p)(x - h)) / (2.0 * h)
            }
        }
    }

    /// Applies the domain guard, if any, to an iterate value at `x`.
    pub fn guarded(&self, x: f64, y: f64) -> Result<f64> {
        match &self.domain_guard {
            None => Ok(y),
            Some(g) => g(y).ok_or(Error::DomainViolation { x, y }),
        }
    }

    /// Checks finiteness and positivity of `p` and `q` at the given points.
    pub fn check_coefficients(&self, points: &[f64]) -> Result<()> {
        self.bc.validate()?;
        for &x in points {
            let p = finite(x, "p", (self.p)(x))?;
            let q = finite(x, "q", (self.q)(x))?;
            finite(x, "p'", self.p_prime_at(x))?;
            if p <= 0.0 || q <= 0.0 {
                return Err(Error::ConditionViolated(format!(
                    "p and q must be positive on (0, 1]; p({x}) = {p}, q({x}) = {q}"
                )));
            }
        }
        Ok(())
    }
}

pub(crate) fn finite(x: f64, function: &'static str, v: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFiniteEvaluation { x, function })
    }
}
