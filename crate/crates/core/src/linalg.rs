//! Dense Gauss elimination with partial pivoting.

use crate::error::{Error, Result};

/// Pivot threshold relative to `‖A‖∞`.
pub const DEFAULT_PIVOT_FLOOR: f64 = 1e-13;
/// Relative residual tolerance used by [`DenseSystem::residual_ok`].
pub const DEFAULT_SOLVE_TOL: f64 = 1e-10;

/// Square system `A x = b`, `A` stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseSystem {
    n: usize,
    a: Vec<f64>,
    rhs: Vec<f64>,
}

impl DenseSystem {
    pub fn new(n: usize, a: Vec<f64>, rhs: Vec<f64>) -> Result<Self> {
        if a.len() != n * n {
            return Err(Error::DimensionMismatch(format!("matrix has {} entries, expected {}x{}", a.len(), n, n)));
        }
        if rhs.len() != n {
            return Err(Error::DimensionMismatch(format!("right-hand side has length {}, expected {n}", rhs.len())));
        }
        Ok(Self { n, a, rhs })
    }

    pub fn from_rows(rows: &[Vec<f64>], rhs: Vec<f64>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch("matrix is not square".into()));
        }
        Self::new(n, rows.concat(), rhs)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &[f64] {
        &self.a
    }

    pub fn rhs(&self) -> &[f64] {
        &self.rhs
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.a[r * self.n..(r + 1) * self.n]
    }

    /// `max_r Σ_c |a_rc|`.
    pub fn norm_inf(&self) -> f64 {
        (0..self.n).map(|r| self.row(r).iter().map(|v| v.abs()).sum::<f64>()).fold(0.0, f64::max)
    }

    /// `‖A x − b‖∞`.
    pub fn residual(&self, x: &[f64]) -> f64 {
        (0..self.n)
            .map(|r| {
                let ax: f64 = self.row(r).iter().zip(x).map(|(a, x)| a * x).sum();
                (ax - self.rhs[r]).abs()
            })
            .fold(0.0, f64::max)
    }

    /// Checks `‖Ax − b‖∞ ≤ tol (‖A‖∞‖x‖∞ + ‖b‖∞)`.
    pub fn residual_ok(&self, x: &[f64], tol: f64) -> bool {
        let xn = x.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let bn = self.rhs.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        self.residual(x) <= tol * (self.norm_inf() * xn + bn)
    }
}

/// Solves the system with the default pivot floor.
pub fn gauss_solve(sys: &DenseSystem) -> Result<Vec<f64>> {
    gauss_solve_with(sys, DEFAULT_PIVOT_FLOOR)
}

/// Solves the system; a pivot column whose largest remaining magnitude is at
/// most `pivot_floor · ‖A‖∞` is reported as singular.
pub fn gauss_solve_with(sys: &DenseSystem, pivot_floor: f64) -> Result<Vec<f64>> {
    if sys.a.iter().chain(&sys.rhs).any(|v| !v.is_finite()) {
        return Err(Error::NonFiniteInput);
    }
    let n = sys.n;
    let floor = pivot_floor * sys.norm_inf();
    let mut a = sys.a.clone();
    let mut b = sys.rhs.clone();

    for col in 0..n {
        let (piv, mag) =
            (col..n)
                .map(|r| (r, a[r * n + col].abs()))
                .fold((col, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        if mag <= floor || mag == 0.0 {
            return Err(Error::SingularMatrix { column: col, magnitude: mag });
        }
        if piv != col {
            for c in 0..n {
                a.swap(col * n + c, piv * n + c);
            }
            b.swap(col, piv);
        }
        let d = a[col * n + col];
        for r in col + 1..n {
            let factor = a[r * n + col] / d;
            if factor == 0.0 {
                continue;
            }
            a[r * n + col] = 0.0;
            for c in col + 1..n {
                a[r * n + c] -= factor * a[col * n + c];
            }
            b[r] -= factor * b[col];
        }
    }

    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let tail: f64 = (r + 1..n).map(|c| a[r * n + c] * x[c]).sum();
        x[r] = (b[r] - tail) / a[r * n + r];
    }
    Ok(x)
}
