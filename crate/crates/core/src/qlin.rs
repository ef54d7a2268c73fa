//! Quasilinearization outer loop with Haar collocation of each linear sweep.
//!
//! Sweep `n + 1` solves
//!
//! ```text
//! p y'' + p' y' + r y = g,   r = -q f_y(x, y_n),   g = q (f(x, y_n) - y_n f_y(x, y_n))
//! ```
//!
//! with `y''` expanded in the Haar family. Integrating twice and imposing
//! the boundary conditions gives `y` and `y'` in terms of the same
//! coefficients, and collocating at the midpoint grid yields a dense `2M x 2M`
//! system per sweep.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::haar::{self, HaarBasis};
use crate::linalg::{gauss_solve, DenseSystem};
use crate::problem::{finite, BoundaryCondition, ProblemSpec, ScalarFn};

#[derive(Clone)]
pub struct SolverConfig {
    /// Resolution level `J`; the basis has `2^{J+1}` members.
    pub level: u32,
    pub max_iters: usize,
    /// Stop once `max |y_{n+1} - y_n|` over the grid is at most this.
    pub tol_outer: f64,
    /// Starting iterate; defaults to the boundary-condition baseline.
    pub initial_guess: Option<ScalarFn>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self { level: 3, max_iters: 12, tol_outer: 1e-10, initial_guess: None }
    }
}

impl std::fmt::Debug for SolverConfig {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SolverConfig")
            .field("level", &self.level)
            .field("max_iters", &self.max_iters)
            .field("tol_outer", &self.tol_outer)
            .field("initial_guess", &self.initial_guess.is_some())
            .finish()
    }
}

impl SolverConfig {
    pub fn new(level: u32) -> Self {
        Self { level, ..Self::default() }
    }

    pub fn max_iters(mut self, n: usize) -> Self {
        self.max_iters = n;
        self
    }

    pub fn tol_outer(mut self, tol: f64) -> Self {
        self.tol_outer = tol;
        self
    }

    pub fn initial_guess(mut self, guess: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.initial_guess = Some(Arc::new(guess));
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_iters == 0 {
            return Err(Error::InvalidConfig("max_iters must be at least 1".into()));
        }
        if self.tol_outer.is_nan() || self.tol_outer <= 0.0 {
            return Err(Error::InvalidConfig("tol_outer must be positive".into()));
        }
        if self.level > HaarBasis::MAX_LEVEL {
            return Err(Error::InvalidConfig(format!(
                "resolution level {} exceeds {}",
                self.level,
                HaarBasis::MAX_LEVEL
            )));
        }
        Ok(())
    }
}

/// Coefficients `(r, g)` of the linearized equation at one point.
pub fn linearize(spec: &ProblemSpec, x: f64, y: f64) -> Result<(f64, f64)> {
    if !y.is_finite() {
        return Err(Error::NonFiniteEvaluation { x, function: "y_n" });
    }
    let y = spec.guarded(x, y)?;
    let q = finite(x, "q", (spec.q)(x))?;
    let f = finite(x, "f", (spec.f)(x, y))?;
    let fy = finite(x, "f_y", (spec.f_y)(x, y))?;
    Ok((-q * fy, q * (f - y * fy)))
}

fn assemble_with(
    spec: &ProblemSpec,
    basis: &HaarBasis,
    y_grid: &[f64],
    row_fill: impl Fn(&mut [f64], usize, f64, f64, f64, f64),
    rhs_of: impl Fn(f64, f64, f64, f64) -> f64,
) -> Result<DenseSystem> {
    let n = basis.size();
    if y_grid.len() != n {
        return Err(Error::DimensionMismatch(format!("iterate has {} grid values, basis has {n}", y_grid.len())));
    }
    let mut a = vec![0.0; n * n];
    let mut rhs = vec![0.0; n];
    for (row, (&x, &yn)) in basis.grid().iter().zip(y_grid).enumerate() {
        let p = finite(x, "p", (spec.p)(x))?;
        let dp = finite(x, "p'", spec.p_prime_at(x))?;
        let (r, g) = linearize(spec, x, yn)?;
        row_fill(&mut a[row * n..(row + 1) * n], row, x, p, dp, r);
        rhs[row] = rhs_of(x, dp, r, g);
    }
    DenseSystem::new(n, a, rhs)
}

/// Collocation system for `y(0) = left`, `y(1) = right`.
pub fn assemble_dirichlet(spec: &ProblemSpec, basis: &HaarBasis, y_grid: &[f64]) -> Result<DenseSystem> {
    let BoundaryCondition::Dirichlet { left, right } = spec.bc else {
        return Err(Error::InvalidBc("Dirichlet assembly needs Dirichlet data".into()));
    };
    let c1 = basis.c1();
    assemble_with(
        spec,
        basis,
        y_grid,
        |out, row, x, p, dp, r| {
            let (h, p1, p2) = (basis.h_row(row), basis.p1_row(row), basis.p2_row(row));
            for i in 0..out.len() {
                out[i] = p * h[i] + dp * (p1[i] - c1[i]) + r * (p2[i] - c1[i] * x);
            }
        },
        |x, dp, r, g| g - dp * (right - left) - r * (left + (right - left) * x),
    )
}

/// Collocation system for `y'(0) = 0`, `alpha y(1) + beta y'(1) = gamma`.
pub fn assemble_robin(spec: &ProblemSpec, basis: &HaarBasis, y_grid: &[f64]) -> Result<DenseSystem> {
    let BoundaryCondition::NeumannRobin { alpha, beta, gamma } = spec.bc else {
        return Err(Error::InvalidBc("Robin assembly needs Neumann-Robin data".into()));
    };
    if alpha == 0.0 {
        return Err(Error::InvalidBc("Robin coefficient alpha must be nonzero".into()));
    }
    let c1 = basis.c1();
    assemble_with(
        spec,
        basis,
        y_grid,
        |out, row, _x, p, dp, r| {
            let (h, p1, p2) = (basis.h_row(row), basis.p1_row(row), basis.p2_row(row));
            for i in 0..out.len() {
                out[i] = p * h[i] + dp * p1[i] + r * (p2[i] - c1[i]);
            }
            out[0] -= r * beta / alpha;
        },
        |_x, _dp, r, g| g - r * gamma / alpha,
    )
}

/// Dispatches on the boundary-condition family.
pub fn assemble(spec: &ProblemSpec, basis: &HaarBasis, y_grid: &[f64]) -> Result<DenseSystem> {
    match spec.bc {
        BoundaryCondition::Dirichlet { .. } => assemble_dirichlet(spec, basis, y_grid),
        BoundaryCondition::NeumannRobin { .. } => assemble_robin(spec, basis, y_grid),
    }
}

/// `y`, `y'` or `y''` (for `order` 0, 1, 2) of the Haar expansion with the
/// given coefficients, at any `x` in `[0, 1]` (`[0, 1)` for `order = 2`).
pub fn reconstruct(coeffs: &[f64], basis: &HaarBasis, bc: &BoundaryCondition, x: f64, order: u8) -> Result<f64> {
    if coeffs.len() != basis.size() {
        return Err(Error::DimensionMismatch(format!(
            "{} coefficients for a basis of size {}",
            coeffs.len(),
            basis.size()
        )));
    }
    if order > 2 {
        return Err(Error::InvalidOrder(order));
    }
    let upper_open = order == 2;
    if !(x >= 0.0 && (x < 1.0 || (!upper_open && x == 1.0))) {
        return Err(Error::OutOfDomain { x, interval: if upper_open { "[0, 1)" } else { "[0, 1]" } });
    }
    Ok(reconstruct_unchecked(coeffs, basis.c1(), bc, x, order))
}

fn reconstruct_unchecked(coeffs: &[f64], c1: &[f64], bc: &BoundaryCondition, x: f64, order: u8) -> f64 {
    let terms = coeffs.iter().zip(c1).enumerate();
    match (order, *bc) {
        (2, _) => terms.map(|(k, (a, _))| a * haar::h_unchecked(k + 1, x)).sum(),
        (1, BoundaryCondition::Dirichlet { left, right }) => {
            right - left + terms.map(|(k, (a, c))| a * (haar::p1_unchecked(k + 1, x) - c)).sum::<f64>()
        }
        (1, BoundaryCondition::NeumannRobin { .. }) => terms.map(|(k, (a, _))| a * haar::p1_unchecked(k + 1, x)).sum(),
        (_, BoundaryCondition::Dirichlet { left, right }) => {
            left + (right - left) * x + terms.map(|(k, (a, c))| a * (haar::p2_unchecked(k + 1, x) - c * x)).sum::<f64>()
        }
        (_, BoundaryCondition::NeumannRobin { alpha, beta, gamma }) => {
            gamma / alpha - beta / alpha * coeffs[0]
                + terms.map(|(k, (a, c))| a * (haar::p2_unchecked(k + 1, x) - c)).sum::<f64>()
        }
    }
}

/// Grid values `(y, y', y'')` of the expansion, computed from the basis tables.
pub fn grid_values(coeffs: &[f64], basis: &HaarBasis, bc: &BoundaryCondition) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let n = basis.size();
    let c1 = basis.c1();
    let dot =
        |row: &[f64], shift: &dyn Fn(usize) -> f64| -> f64 { (0..n).map(|i| coeffs[i] * (row[i] - shift(i))).sum() };
    let mut y = Vec::with_capacity(n);
    let mut yp = Vec::with_capacity(n);
    let mut ypp = Vec::with_capacity(n);
    for (r, &x) in basis.grid().iter().enumerate() {
        ypp.push(dot(basis.h_row(r), &|_| 0.0));
        match *bc {
            BoundaryCondition::Dirichlet { left, right } => {
                yp.push(right - left + dot(basis.p1_row(r), &|i| c1[i]));
                y.push(left + (right - left) * x + dot(basis.p2_row(r), &|i| c1[i] * x));
            }
            BoundaryCondition::NeumannRobin { alpha, beta, gamma } => {
                yp.push(dot(basis.p1_row(r), &|_| 0.0));
                y.push(gamma / alpha - beta / alpha * coeffs[0] + dot(basis.p2_row(r), &|i| c1[i]));
            }
        }
    }
    (y, yp, ypp)
}

/// Snapshot after one sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QlinState {
    /// Sweep number `n`, starting at 1.
    pub iter: usize,
    pub coeffs: Vec<f64>,
    pub y_grid: Vec<f64>,
    pub yp_grid: Vec<f64>,
    pub ypp_grid: Vec<f64>,
    /// `max |y_n - y_{n-1}|` over the grid.
    pub delta_norm: f64,
}

/// Iterator over quasilinearization sweeps. Never stops on its own; pair it
/// with `take` or use [`solve`].
pub struct Sweeps<'a> {
    spec: &'a ProblemSpec,
    basis: &'a HaarBasis,
    current: Vec<f64>,
    iter: usize,
    failed: bool,
}

impl<'a> Sweeps<'a> {
    /// Starts from `y0` given on the grid.
    pub fn new(spec: &'a ProblemSpec, basis: &'a HaarBasis, y0: Vec<f64>) -> Result<Self> {
        if y0.len() != basis.size() {
            return Err(Error::DimensionMismatch(format!(
                "initial iterate has {} values, basis has {}",
                y0.len(),
                basis.size()
            )));
        }
        Ok(Self { spec, basis, current: y0, iter: 0, failed: false })
    }

    /// The iterate the next sweep will linearize about.
    pub fn current(&self) -> &[f64] {
        &self.current
    }

    fn step(&mut self) -> Result<QlinState> {
        let sys = assemble(self.spec, self.basis, &self.current)?;
        let coeffs = gauss_solve(&sys)?;
        let (y, yp, ypp) = grid_values(&coeffs, self.basis, &self.spec.bc);
        let delta_norm = y.iter().zip(&self.current).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        self.iter += 1;
        Ok(QlinState { iter: self.iter, coeffs, y_grid: y, yp_grid: yp, ypp_grid: ypp, delta_norm })
    }
}

impl Iterator for Sweeps<'_> {
    type Item = Result<QlinState>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.failed {
            return None;
        }
        match self.step() {
            Ok(state) => {
                self.current.clone_from(&state.y_grid);
                Some(Ok(state))
            }
            Err(e) => {
                self.failed = true;
                Some(Err(Error::Sweep { iteration: self.iter + 1, source: Box::new(e) }))
            }
        }
    }
}

/// Converged (or iteration-capped) Haar expansion.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Solution {
    pub coeffs: Vec<f64>,
    pub bc: BoundaryCondition,
    #[serde(skip)]
    pub basis: Arc<HaarBasis>,
    /// `delta_norm` of each sweep, in order.
    pub history: Vec<f64>,
    pub converged: bool,
    pub iters_used: usize,
    /// Final iterate on the collocation grid.
    pub y_grid: Vec<f64>,
    /// Iterate the final sweep was linearized about.
    pub linearized_about: Vec<f64>,
}

impl Solution {
    pub fn level(&self) -> u32 {
        self.basis.level()
    }

    pub fn grid(&self) -> &[f64] {
        self.basis.grid()
    }

    pub fn reconstruct(&self, x: f64, order: u8) -> Result<f64> {
        reconstruct(&self.coeffs, &self.basis, &self.bc, x, order)
    }

    pub fn evaluate(&self, x: f64) -> Result<f64> {
        self.reconstruct(x, 0)
    }

    pub fn derivative(&self, x: f64) -> Result<f64> {
        self.reconstruct(x, 1)
    }

    /// `(n, ‖Δy_n‖∞)` for every sweep.
    pub fn convergence_history(&self) -> Vec<(usize, f64)> {
        convergence_history(self)
    }

    /// `max_j |p y'' + p' y' - q f(x, y)|` with the final iterate.
    pub fn nonlinear_residual(&self, spec: &ProblemSpec) -> Result<f64> {
        let (y, yp, ypp) = grid_values(&self.coeffs, &self.basis, &self.bc);
        let mut worst = 0.0_f64;
        for (j, &x) in self.grid().iter().enumerate() {
            let yg = spec.guarded(x, y[j])?;
            let res = (spec.p)(x) * ypp[j] + spec.p_prime_at(x) * yp[j] - (spec.q)(x) * (spec.f)(x, yg);
            worst = worst.max(res.abs());
        }
        Ok(worst)
    }

    /// `max_j |p y'' + p' y' + r y - g|` for the final sweep's linear problem.
    pub fn linearized_residual(&self, spec: &ProblemSpec) -> Result<f64> {
        let (y, yp, ypp) = grid_values(&self.coeffs, &self.basis, &self.bc);
        let mut worst = 0.0_f64;
        for (j, &x) in self.grid().iter().enumerate() {
            let (r, g) = linearize(spec, x, self.linearized_about[j])?;
            let res = (spec.p)(x) * ypp[j] + spec.p_prime_at(x) * yp[j] + r * y[j] - g;
            worst = worst.max(res.abs());
        }
        Ok(worst)
    }
}

pub fn convergence_history(solution: &Solution) -> Vec<(usize, f64)> {
    solution.history.iter().enumerate().map(|(k, &d)| (k + 1, d)).collect()
}

/// `(n, ‖Δy_{n+1}‖ / ‖Δy_n‖²)` for each `n` whose `‖Δy_n‖` exceeds `floor`.
pub fn quadratic_ratios(history: &[f64], floor: f64) -> Vec<(usize, f64)> {
    history.windows(2).enumerate().filter(|(_, w)| w[0] > floor).map(|(k, w)| (k + 1, w[1] / (w[0] * w[0]))).collect()
}

/// Runs sweeps until `delta_norm <= tol_outer` or `max_iters` is reached.
/// Hitting the cap is not an error; inspect [`Solution::converged`].
pub fn solve(spec: &ProblemSpec, config: &SolverConfig) -> Result<Solution> {
    config.validate()?;
    let basis = Arc::new(HaarBasis::new(config.level)?);
    solve_with_basis(spec, config, basis)
}

/// Like [`solve`] but reuses a prebuilt basis (its level overrides `config.level`).
pub fn solve_with_basis(spec: &ProblemSpec, config: &SolverConfig, basis: Arc<HaarBasis>) -> Result<Solution> {
    config.validate()?;
    spec.check_coefficients(basis.grid())?;
    let y0: Vec<f64> = match &config.initial_guess {
        Some(g) => basis.grid().iter().map(|&x| finite(x, "initial guess", g(x))).collect::<Result<_>>()?,
        None => basis.grid().iter().map(|&x| spec.bc.baseline(x)).collect(),
    };
    let mut sweeps = Sweeps::new(spec, &basis, y0)?;
    let mut history = Vec::new();
    let mut last = None;
    let mut linearized_about = sweeps.current().to_vec();
    let mut converged = false;
    while history.len() < config.max_iters {
        linearized_about.clear();
        linearized_about.extend_from_slice(sweeps.current());
        let state = sweeps.next().expect("sweeps never end")?;
        history.push(state.delta_norm);
        converged = state.delta_norm <= config.tol_outer;
        last = Some(state);
        if converged {
            break;
        }
    }
    let state = last.expect("max_iters >= 1");
    Ok(Solution {
        coeffs: state.coeffs,
        bc: spec.bc,
        iters_used: history.len(),
        history,
        converged,
        y_grid: state.y_grid,
        linearized_about,
        basis,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn linear_dirichlet() -> ProblemSpec {
        ProblemSpec::new(|_| 1.0, |_| 1.0, |_, _| 2.0, |_, _| 0.0, BoundaryCondition::dirichlet(0.0, 0.0).unwrap())
            .with_p_prime(|_| 0.0)
    }

    fn linear_robin() -> ProblemSpec {
        ProblemSpec::new(
            |x| x * x,
            |x| x * x,
            |_, _| -6.0,
            |_, _| 0.0,
            BoundaryCondition::robin(1.0, 0.0, 1.0).unwrap(),
        )
        .with_p_prime(|x| 2.0 * x)
    }

    #[test]
    fn linearize_examples() {
        let bc = BoundaryCondition::robin(1.0, 0.0, 1.0).unwrap();
        let quintic = ProblemSpec::new(|x| x * x, |x| x * x, |_, y: f64| y.powi(5), |_, y: f64| 5.0 * y.powi(4), bc);
        let (r, g) = linearize(&quintic, 0.5, 1.0).unwrap();
        assert_abs_diff_eq!(r, -1.25, epsilon = 1e-15);
        assert_abs_diff_eq!(g, -1.0, epsilon = 1e-15);

        let source = ProblemSpec::new(|_| 1.0, |x| 3.0 * x, |x, _| x + 1.0, |_, _| 0.0, bc);
        let (r, g) = linearize(&source, 0.5, 7.0).unwrap();
        assert_eq!(r, 0.0);
        assert_abs_diff_eq!(g, 1.5 * 1.5);

        let exp = ProblemSpec::new(|x| x, |x| x, |_, y: f64| -y.exp(), |_, y: f64| -y.exp(), bc);
        let (r, g) = linearize(&exp, 0.5, 0.0).unwrap();
        assert_abs_diff_eq!(r, 0.5);
        assert_abs_diff_eq!(g, -0.5);
    }

    #[test]
    fn linearize_errors() {
        let bc = BoundaryCondition::dirichlet(1.0, 0.0).unwrap();
        let spec =
            ProblemSpec::new(|_| 1.0, |x: f64| x.powf(-0.5), |_, y: f64| y.powf(1.5), |_, y: f64| 1.5 * y.sqrt(), bc);
        assert!(matches!(linearize(&spec, 0.5, -1.0), Err(Error::NonFiniteEvaluation { function: "f", .. })));
        let guarded = spec.clone().with_guard(|y| Some(y.max(0.0)));
        assert!(linearize(&guarded, 0.5, -1.0).is_ok());
        let rejecting = spec.with_guard(|y| (y > 0.0).then_some(y));
        assert_eq!(linearize(&rejecting, 0.5, -1.0), Err(Error::DomainViolation { x: 0.5, y: -1.0 }));
    }

    #[test]
    fn smallest_system_is_two_by_two() {
        let basis = HaarBasis::new(0).unwrap();
        let spec = linear_dirichlet();
        let sys = assemble_dirichlet(&spec, &basis, &[0.0, 0.0]).unwrap();
        assert_eq!(sys.dim(), 2);
        assert_eq!(basis.grid(), &[0.25, 0.75]);
        assert!(assemble_robin(&spec, &basis, &[0.0, 0.0]).is_err());
        assert!(assemble_dirichlet(&spec, &basis, &[0.0]).is_err());
    }

    #[test]
    fn homogeneous_problems_give_zero() {
        let basis = HaarBasis::new(3).unwrap();
        let zero = vec![0.0; basis.size()];
        let d = ProblemSpec::new(|x| x, |x| x, |_, _| 0.0, |_, _| 0.0, BoundaryCondition::dirichlet(0.0, 0.0).unwrap())
            .with_p_prime(|_| 1.0);
        let a = gauss_solve(&assemble_dirichlet(&d, &basis, &zero).unwrap()).unwrap();
        assert!(a.iter().all(|&v| v == 0.0));
        let r =
            ProblemSpec::new(|x| x, |x| x, |_, _| 0.0, |_, _| 0.0, BoundaryCondition::robin(2.0, 1.0, 0.0).unwrap())
                .with_p_prime(|_| 1.0);
        let a = gauss_solve(&assemble_robin(&r, &basis, &zero).unwrap()).unwrap();
        assert!(a.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn robin_with_zero_beta_has_no_a1_correction() {
        let basis = HaarBasis::new(1).unwrap();
        let bc = BoundaryCondition::robin(1.0, 0.0, 0.5).unwrap();
        let spec = ProblemSpec::new(|x| x, |x| x, |_, y| y, |_, _| 1.0, bc).with_p_prime(|_| 1.0);
        let y = vec![0.5; 4];
        let sys = assemble_robin(&spec, &basis, &y).unwrap();
        for (row, &x) in basis.grid().iter().enumerate() {
            let r = -x;
            let expect = x * 1.0 + 1.0 * x + r * (x * x / 2.0 - 0.5);
            assert_abs_diff_eq!(sys.row(row)[0], expect, epsilon = 1e-15);
        }
    }

    #[test]
    fn zero_coefficients_reconstruct_baseline() {
        let basis = HaarBasis::new(2).unwrap();
        let a = vec![0.0; basis.size()];
        let d = BoundaryCondition::dirichlet(0.3, -1.2).unwrap();
        for x in [0.0, 0.2, 0.77, 1.0] {
            assert_abs_diff_eq!(reconstruct(&a, &basis, &d, x, 0).unwrap(), 0.3 - 1.5 * x, epsilon = 1e-15);
        }
        let r = BoundaryCondition::robin(2.0, 1.0, 3.0).unwrap();
        for x in [0.0, 0.5, 1.0] {
            assert_eq!(reconstruct(&a, &basis, &r, x, 0).unwrap(), 1.5);
            assert_eq!(reconstruct(&a, &basis, &r, x, 1).unwrap(), 0.0);
        }
    }

    #[test]
    fn reconstruct_rejects_bad_input() {
        let basis = HaarBasis::new(1).unwrap();
        let bc = BoundaryCondition::dirichlet(0.0, 1.0).unwrap();
        let a = vec![1.0; 4];
        assert!(matches!(reconstruct(&a, &basis, &bc, 1.0, 2), Err(Error::OutOfDomain { .. })));
        assert!(reconstruct(&a, &basis, &bc, 1.0, 1).is_ok());
        assert!(matches!(reconstruct(&a, &basis, &bc, 1.01, 0), Err(Error::OutOfDomain { .. })));
        assert!(matches!(reconstruct(&a, &basis, &bc, 0.5, 3), Err(Error::InvalidOrder(3))));
        assert!(reconstruct(&a[..3], &basis, &bc, 0.5, 0).is_err());
    }

    #[test]
    fn grid_values_match_pointwise_reconstruction() {
        let basis = HaarBasis::new(3).unwrap();
        let a: Vec<f64> = (0..basis.size()).map(|i| ((i * 7919) % 13) as f64 - 6.0).collect();
        for bc in [BoundaryCondition::dirichlet(0.7, -0.2).unwrap(), BoundaryCondition::robin(5.0, 1.0, 5.0).unwrap()] {
            let (y, yp, ypp) = grid_values(&a, &basis, &bc);
            for (j, &x) in basis.grid().iter().enumerate() {
                assert_abs_diff_eq!(y[j], reconstruct(&a, &basis, &bc, x, 0).unwrap(), epsilon = 1e-12);
                assert_abs_diff_eq!(yp[j], reconstruct(&a, &basis, &bc, x, 1).unwrap(), epsilon = 1e-12);
                assert_abs_diff_eq!(ypp[j], reconstruct(&a, &basis, &bc, x, 2).unwrap(), epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn linear_problems_are_exact() {
        for level in [0, 2, 4] {
            let sol = solve(&linear_dirichlet(), &SolverConfig::new(level)).unwrap();
            let sol_r = solve(&linear_robin(), &SolverConfig::new(level)).unwrap();
            for k in 0..=20 {
                let x = k as f64 / 20.0;
                assert_abs_diff_eq!(sol.evaluate(x).unwrap(), x * (x - 1.0), epsilon = 1e-13);
                assert_abs_diff_eq!(sol_r.evaluate(x).unwrap(), 2.0 - x * x, epsilon = 1e-13);
            }
            // first sweep lands on the answer, second sweep confirms it
            assert!(sol.converged && sol.iters_used == 2);
            assert!(sol.history[1] < 1e-14);
            assert!(sol_r.history[1] < 1e-14);
        }
    }

    #[test]
    fn respects_iteration_cap() {
        let bc = BoundaryCondition::robin(1.0, 0.0, 0.0).unwrap();
        let spec = ProblemSpec::new(|x| x, |x| x, |_, y: f64| -y.exp(), |_, y: f64| -y.exp(), bc).with_p_prime(|_| 1.0);
        let sol = solve(&spec, &SolverConfig::new(3).max_iters(2)).unwrap();
        assert!(!sol.converged);
        assert_eq!(sol.iters_used, 2);
        assert_eq!(sol.convergence_history().len(), 2);
        let sol = solve(&spec, &SolverConfig::new(3)).unwrap();
        assert!(sol.converged);
        assert!(sol.linearized_residual(&spec).unwrap() < 1e-9);
    }

    #[test]
    fn config_validation() {
        let spec = linear_dirichlet();
        assert!(solve(&spec, &SolverConfig::new(2).max_iters(0)).is_err());
        assert!(solve(&spec, &SolverConfig::new(2).tol_outer(0.0)).is_err());
        assert!(solve(&spec, &SolverConfig::new(2).tol_outer(f64::NAN)).is_err());
        assert!(solve(&spec, &SolverConfig::new(40)).is_err());
    }

    #[test]
    fn errors_carry_sweep_index() {
        let bc = BoundaryCondition::robin(1.0, 0.0, 1.0).unwrap();
        // the first sweep drops y well below 0.5 near the origin
        let spec = ProblemSpec::new(|x| x * x, |x| x * x, |_, y| y * 50.0, |_, _| 50.0, bc)
            .with_p_prime(|x| 2.0 * x)
            .with_guard(|y| (y > 0.5).then_some(y));
        match solve(&spec, &SolverConfig::new(3)) {
            Err(Error::Sweep { iteration, source }) => {
                assert_eq!(iteration, 2);
                assert!(matches!(*source, Error::DomainViolation { .. }));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn custom_initial_guess_used() {
        let spec = linear_dirichlet();
        let sol = solve(&spec, &SolverConfig::new(2).initial_guess(|x| x * (x - 1.0))).unwrap();
        assert!(sol.history[0] < 1e-14);
        assert!(solve(&spec, &SolverConfig::new(2).initial_guess(|_| f64::NAN)).is_err());
    }

    #[test]
    fn quadratic_ratio_helper() {
        let h = [1e-1, 1e-2, 1e-4, 1e-8, 1e-16];
        let r = quadratic_ratios(&h, 1e-12);
        assert_eq!(r.len(), 4);
        assert_abs_diff_eq!(r[0].1, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r[3].1, 1.0, epsilon = 1e-6);
        assert_eq!(quadratic_ratios(&h, 1e-3).len(), 2);
    }
}
