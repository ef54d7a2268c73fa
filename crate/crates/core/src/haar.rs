//! Haar wavelet family on `[0, 1)`, its first two primitives and the
//! midpoint collocation grid.
//!
//! Wavelets are indexed `i = 1, 2, ...`. Index 1 is the scaling function
//! (constant 1); for `i >= 2` the wavelet lives at level `j` with
//! translation `k`, where `i = 2^j + k + 1`. The family is unnormalized: every
//! wavelet takes the values `+1` and `-1`. [`haar_normalized`] gives the
//! `2^{j/2}`-scaled variant used when talking about L2 projections.

use crate::error::{Error, Result};

/// Position of a wavelet inside the dyadic hierarchy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HaarIndex {
    pub index: usize,
    pub level: u32,
    pub translation: usize,
    /// `2^level`.
    pub width_inv: usize,
}

impl HaarIndex {
    /// Breakpoints `(k/m, (k+1/2)/m, (k+1)/m)`.
    pub fn breakpoints(&self) -> (f64, f64, f64) {
        let m = self.width_inv as f64;
        let k = self.translation as f64;
        (k / m, (k + 0.5) / m, (k + 1.0) / m)
    }
}

/// Splits a wavelet index `i >= 2` into level and translation.
pub fn index_decompose(i: usize) -> Result<HaarIndex> {
    if i < 2 {
        return Err(Error::InvalidIndex { index: i, reason: "decomposition requires i >= 2".into() });
    }
    let level = (i - 1).ilog2();
    let m = 1usize << level;
    Ok(HaarIndex { index: i, level, translation: i - m - 1, width_inv: m })
}

fn check_index(i: usize) -> Result<()> {
    if i == 0 {
        return Err(Error::InvalidIndex { index: 0, reason: "indices start at 1".into() });
    }
    Ok(())
}

fn check_closed(x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::OutOfDomain { x, interval: "[0, 1]" })
    }
}

#[inline]
fn breaks(i: usize) -> (f64, f64, f64, f64) {
    let level = (i - 1).ilog2();
    let m = (1usize << level) as f64;
    let k = (i - (1usize << level) - 1) as f64;
    (k / m, (k + 0.5) / m, (k + 1.0) / m, m)
}

#[inline]
pub(crate) fn h_unchecked(i: usize, x: f64) -> f64 {
    if i == 1 {
        return 1.0;
    }
    let (a, b, c, _) = breaks(i);
    if a <= x && x < b {
        1.0
    } else if b <= x && x < c {
        -1.0
    } else {
        0.0
    }
}

#[inline]
pub(crate) fn p1_unchecked(i: usize, x: f64) -> f64 {
    if i == 1 {
        return x;
    }
    let (a, b, c, _) = breaks(i);
    if a <= x && x < b {
        x - a
    } else if b <= x && x < c {
        c - x
    } else {
        0.0
    }
}

#[inline]
pub(crate) fn p2_unchecked(i: usize, x: f64) -> f64 {
    if i == 1 {
        return 0.5 * x * x;
    }
    let (a, b, c, m) = breaks(i);
    if x < a {
        0.0
    } else if x < b {
        0.5 * (x - a) * (x - a)
    } else if x < c {
        0.25 / (m * m) - 0.5 * (c - x) * (c - x)
    } else {
        0.25 / (m * m)
    }
}

#[inline]
pub(crate) fn c1_unchecked(i: usize) -> f64 {
    if i == 1 {
        return 0.5;
    }
    let m = (1usize << (i - 1).ilog2()) as f64;
    0.25 / (m * m)
}

/// `h_i(x)` on `[0, 1)`. The right endpoint is rejected.
pub fn haar_eval(i: usize, x: f64) -> Result<f64> {
    check_index(i)?;
    if !(0.0..1.0).contains(&x) {
        return Err(Error::OutOfDomain { x, interval: "[0, 1)" });
    }
    Ok(h_unchecked(i, x))
}

/// First primitive `p_{i,1}(x) = ∫_0^x h_i`. Continuous on `[0, 1]`.
pub fn p1_eval(i: usize, x: f64) -> Result<f64> {
    check_index(i)?;
    check_closed(x)?;
    Ok(p1_unchecked(i, x))
}

/// Second primitive `p_{i,2}(x) = ∫_0^x p_{i,1}`.
pub fn p2_eval(i: usize, x: f64) -> Result<f64> {
    check_index(i)?;
    check_closed(x)?;
    Ok(p2_unchecked(i, x))
}

/// `C_{i,1} = ∫_0^1 p_{i,1}`, in closed form: `1/2` for the scaling
/// function and `1/(4m^2)` otherwise.
pub fn c1_value(i: usize) -> Result<f64> {
    check_index(i)?;
    Ok(c1_unchecked(i))
}

/// `2^{j/2} h_i(x)`; the scaling function is returned unscaled.
pub fn haar_normalized(i: usize, x: f64) -> Result<f64> {
    let h = haar_eval(i, x)?;
    if i == 1 {
        return Ok(h);
    }
    let idx = index_decompose(i)?;
    Ok(2f64.powf(idx.level as f64 / 2.0) * h)
}

/// Midpoint grid `x_j = (j - 1/2) / 2M`, `j = 1..=2M`, `2M = 2^{level+1}`.
pub fn collocation_grid(level: u32) -> Vec<f64> {
    let n = 2usize << level;
    (1..=n).map(|j| (j as f64 - 0.5) / n as f64).collect()
}

/// Haar family truncated at resolution level `J`, with every basis quantity
/// tabulated on the collocation grid.
///
/// Tables are row-major with one row per grid point and one column per
/// wavelet, so row `r` column `c` holds `h_{c+1}(x_{r+1})`.
#[derive(Debug, Clone, PartialEq)]
pub struct HaarBasis {
    level: u32,
    grid: Vec<f64>,
    h: Vec<f64>,
    p1: Vec<f64>,
    p2: Vec<f64>,
    c1: Vec<f64>,
}

impl HaarBasis {
    /// Largest level accepted; `2M = 2^{21}` already means a 4·10^12-entry system.
    pub const MAX_LEVEL: u32 = 20;

    pub fn new(level: u32) -> Result<Self> {
        if level > Self::MAX_LEVEL {
            return Err(Error::InvalidConfig(format!("resolution level {level} exceeds {}", Self::MAX_LEVEL)));
        }
        let grid = collocation_grid(level);
        let n = grid.len();
        let mut h = Vec::with_capacity(n * n);
        let mut p1 = Vec::with_capacity(n * n);
        let mut p2 = Vec::with_capacity(n * n);
        for &x in &grid {
            for i in 1..=n {
                h.push(h_unchecked(i, x));
                p1.push(p1_unchecked(i, x));
                p2.push(p2_unchecked(i, x));
            }
        }
        let c1 = (1..=n).map(c1_unchecked).collect();
        Ok(Self { level, grid, h, p1, p2, c1 })
    }

    /// Maximum dilation level `J`.
    pub fn level(&self) -> u32 {
        self.level
    }

    /// `M = 2^J`.
    pub fn m(&self) -> usize {
        1 << self.level
    }

    /// Number of wavelets and grid points, `2M`.
    pub fn size(&self) -> usize {
        self.grid.len()
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn c1(&self) -> &[f64] {
        &self.c1
    }

    /// Row `r` of the `h` table (all wavelets at grid point `r`).
    pub fn h_row(&self, r: usize) -> &[f64] {
        let n = self.size();
        &self.h[r * n..(r + 1) * n]
    }

    pub fn p1_row(&self, r: usize) -> &[f64] {
        let n = self.size();
        &self.p1[r * n..(r + 1) * n]
    }

    pub fn p2_row(&self, r: usize) -> &[f64] {
        let n = self.size();
        &self.p2[r * n..(r + 1) * n]
    }

    fn check_member(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.size() {
            return Err(Error::InvalidIndex { index: i, reason: format!("basis holds indices 1..={}", self.size()) });
        }
        Ok(())
    }

    pub fn h(&self, i: usize, x: f64) -> Result<f64> {
        self.check_member(i)?;
        haar_eval(i, x)
    }

    pub fn p1(&self, i: usize, x: f64) -> Result<f64> {
        self.check_member(i)?;
        p1_eval(i, x)
    }

    pub fn p2(&self, i: usize, x: f64) -> Result<f64> {
        self.check_member(i)?;
        p2_eval(i, x)
    }

    pub fn c1_of(&self, i: usize) -> Result<f64> {
        self.check_member(i)?;
        Ok(self.c1[i - 1])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    // Composite midpoint rule, used only as an oracle.
    fn midpoint(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
        let w = (b - a) / n as f64;
        (0..n).map(|k| f(a + (k as f64 + 0.5) * w)).sum::<f64>() * w
    }

    #[test]
    fn decompose_examples() {
        let d = index_decompose(2).unwrap();
        assert_eq!((d.level, d.translation, d.width_inv), (0, 0, 1));
        let d = index_decompose(5).unwrap();
        assert_eq!((d.level, d.translation, d.width_inv), (2, 0, 4));
        let d = index_decompose(8).unwrap();
        assert_eq!((d.level, d.translation, d.width_inv), (2, 3, 4));
        assert!(index_decompose(1).is_err());
        assert!(index_decompose(0).is_err());
    }

    #[test]
    fn decomposition_matches_enumeration() {
        // enumerate (j, k) in the natural order and compare
        let mut i = 2;
        for j in 0..8u32 {
            let m = 1usize << j;
            for k in 0..m {
                let d = index_decompose(i).unwrap();
                assert_eq!((d.level, d.translation, d.width_inv), (j, k, m));
                let (a, b, c) = d.breakpoints();
                assert!(0.0 <= a && a < b && b < c && c <= 1.0);
                i += 1;
            }
        }
    }

    #[test]
    fn haar_values() {
        assert_eq!(haar_eval(1, 0.73).unwrap(), 1.0);
        assert_eq!(haar_eval(2, 0.25).unwrap(), 1.0);
        assert_eq!(haar_eval(2, 0.75).unwrap(), -1.0);
        assert_eq!(haar_eval(3, 0.3).unwrap(), -1.0);
        assert_eq!(haar_eval(3, 0.6).unwrap(), 0.0);
        assert!(haar_eval(2, 1.0).is_err());
        assert!(haar_eval(2, -0.1).is_err());
        assert!(haar_eval(0, 0.5).is_err());
    }

    #[test]
    fn primitive_values() {
        assert_abs_diff_eq!(p1_eval(2, 0.5).unwrap(), 0.5);
        assert_abs_diff_eq!(p1_eval(2, 1.0).unwrap(), 0.0);
        assert_abs_diff_eq!(p1_eval(1, 0.4).unwrap(), 0.4);
        assert_abs_diff_eq!(p2_eval(2, 1.0).unwrap(), 0.25);
        assert_abs_diff_eq!(p2_eval(1, 1.0).unwrap(), 0.5);
        assert_abs_diff_eq!(p2_eval(5, 0.9).unwrap(), 1.0 / 64.0);
        assert!(p1_eval(2, 1.5).is_err());
        assert!(p2_eval(0, 0.5).is_err());
    }

    #[test]
    fn c1_against_quadrature() {
        assert_eq!(c1_value(1).unwrap(), 0.5);
        assert_eq!(c1_value(2).unwrap(), 0.25);
        assert_eq!(c1_value(5).unwrap(), 0.015625);
        // p_{5,1} is piecewise linear with kinks on a 1/8 grid; midpoint on a
        // refinement of that grid is exact.
        let q = midpoint(|t| p1_unchecked(5, t), 0.0, 1.0, 64);
        assert_abs_diff_eq!(q, 0.015625, epsilon = 1e-15);
        assert!(c1_value(0).is_err());
    }

    #[test]
    fn grids() {
        assert_eq!(collocation_grid(0), vec![0.25, 0.75]);
        assert_eq!(collocation_grid(1), vec![0.125, 0.375, 0.625, 0.875]);
        let g = collocation_grid(3);
        assert_eq!(g.len(), 16);
        assert_eq!(g[0], 0.03125);
        assert_eq!(g[15], 0.96875);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn basis_tables_match_pointwise() {
        let b = HaarBasis::new(2).unwrap();
        assert_eq!(b.size(), 8);
        assert_eq!(b.m(), 4);
        for (r, &x) in b.grid().iter().enumerate() {
            for i in 1..=8 {
                assert_eq!(b.h_row(r)[i - 1], haar_eval(i, x).unwrap());
                assert_eq!(b.p1_row(r)[i - 1], p1_eval(i, x).unwrap());
                assert_eq!(b.p2_row(r)[i - 1], p2_eval(i, x).unwrap());
            }
        }
        assert!(b.h(9, 0.5).is_err());
        assert!(b.c1_of(0).is_err());
    }

    #[test]
    fn normalized_construction() {
        // H(2^j x - k) straight from the mother-wavelet definition
        let mother = |s: f64| {
            if (0.0..0.5).contains(&s) {
                1.0
            } else if (0.5..1.0).contains(&s) {
                -1.0
            } else {
                0.0
            }
        };
        for i in 2..=64 {
            let d = index_decompose(i).unwrap();
            let scale = 2f64.powf(d.level as f64 / 2.0);
            for s in 0..200 {
                let x = (s as f64 + 0.37) / 200.0;
                let direct = scale * mother(2f64.powi(d.level as i32) * x - d.translation as f64);
                assert_eq!(direct, haar_normalized(i, x).unwrap());
                assert_eq!(direct, scale * haar_eval(i, x).unwrap());
            }
        }
    }
}
