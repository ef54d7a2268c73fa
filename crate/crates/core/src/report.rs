//! Tabular studies and their CSV / markdown rendering.
//!
//! Every function here is deterministic: identical inputs give
//! byte-identical output. Numbers are printed with 10 significant digits.

use std::fmt::Write as _;
use std::sync::Arc;

use serde::Serialize;

use crate::catalog::{BenchmarkCase, TABLE_POINTS};
use crate::error::{Error, Result};
use crate::greens::{integral_residual, integral_residual_fn, KernelSpec};
use crate::haar::HaarBasis;
use crate::problem::ProblemSpec;
use crate::qlin::{solve, solve_with_basis, Solution, SolverConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Markdown,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    Empty,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::Num)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(v.into())
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Num(v) => fmt_sig(*v),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn is_numeric(&self) -> bool {
        matches!(self, Cell::Num(_) | Cell::Int(_))
    }
}

/// Formats with 10 significant digits: fixed notation for decimal exponents
/// in `[-4, 10)`, scientific otherwise. Trailing zeros are dropped.
pub fn fmt_sig(v: f64) -> String {
    if !v.is_finite() {
        return if v.is_nan() {
            "NaN".into()
        } else if v > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    if v == 0.0 {
        return "0".into();
    }
    let sci = format!("{v:.9e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..10).contains(&exp) {
        let decimals = (9 - exp) as usize;
        trim_zeros(&format!("{v:.decimals$}")).to_string()
    } else {
        format!("{}e{exp}", trim_zeros(mantissa))
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub title: String,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(title: impl Into<String>, columns: &[&'static str]) -> Self {
        Self { title: title.into(), columns: columns.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width for table `{}`", self.title);
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|c| csv_escape(&c.render())).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_markdown(&self) -> String {
        let mut out = String::new();
        if !self.title.is_empty() {
            let _ = writeln!(out, "### {}\n", self.title);
        }
        let _ = writeln!(out, "| {} |", self.columns.join(" | "));
        let align: Vec<&str> = (0..self.columns.len())
            .map(|k| {
                let numeric = self.rows.iter().any(|r| r[k].is_numeric());
                if numeric {
                    "---:"
                } else {
                    "---"
                }
            })
            .collect();
        let _ = writeln!(out, "| {} |", align.join(" | "));
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|c| c.render().replace('|', "\\|")).collect();
            let _ = writeln!(out, "| {} |", cells.join(" | "));
        }
        out
    }
}

fn csv_escape(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// One or more tables, separated by a blank line when rendered.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct Report {
    pub tables: Vec<Table>,
}

impl Report {
    pub fn single(table: Table) -> Self {
        Self { tables: vec![table] }
    }

    pub fn render(&self, format: Format) -> String {
        let parts: Vec<String> = self
            .tables
            .iter()
            .map(|t| match format {
                Format::Csv => t.to_csv(),
                Format::Markdown => t.to_markdown(),
            })
            .collect();
        parts.join("\n")
    }
}

// ---- bench ----

#[derive(Debug, Clone, Default)]
pub struct BenchOptions {
    /// Defaults to the published resolution.
    pub level: Option<u32>,
    /// Defaults to the published sweep count.
    pub iters: Option<usize>,
    /// Defaults to `f64::MIN_POSITIVE`, i.e. run exactly `iters` sweeps.
    pub tol: Option<f64>,
    /// Defaults to the table points.
    pub probes: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub x: f64,
    pub y_h: f64,
    pub exact: Option<f64>,
    pub e_a: Option<f64>,
    pub published_y_h: Option<f64>,
    pub published_e_a: Option<f64>,
    pub abs_diff_published: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct BenchReport {
    pub case_id: u32,
    pub level: u32,
    pub solution: Solution,
    pub rows: Vec<BenchRow>,
}

pub fn bench_config(case: &BenchmarkCase, opts: &BenchOptions) -> SolverConfig {
    SolverConfig::new(opts.level.unwrap_or(case.published_level))
        .max_iters(opts.iters.unwrap_or(case.published_iters))
        .tol_outer(opts.tol.unwrap_or(f64::MIN_POSITIVE))
}

pub fn bench_case(case: &BenchmarkCase, opts: &BenchOptions) -> Result<BenchReport> {
    let config = bench_config(case, opts);
    let solution = solve(&case.spec, &config)?;
    let probes = opts.probes.clone().unwrap_or_else(|| TABLE_POINTS.to_vec());
    let mut rows = Vec::with_capacity(probes.len());
    for x in probes {
        let y_h = solution.evaluate(x)?;
        let exact = case.exact.as_ref().map(|y| y(x));
        let published = case.row_at(x);
        let published_y_h = published.map(|r| r.y_h);
        rows.push(BenchRow {
            x,
            y_h,
            exact,
            e_a: exact.map(|e| (e - y_h).abs()),
            published_y_h,
            published_e_a: published.and_then(|r| r.e_a),
            abs_diff_published: published_y_h.map(|p| (p - y_h).abs()),
        });
    }
    Ok(BenchReport { case_id: case.id, level: solution.level(), solution, rows })
}

pub const BENCH_COLUMNS: [&str; 7] = ["case", "x", "y_h", "exact", "e_a", "published_y_h", "abs_diff_published"];

pub fn bench_table(reports: &[BenchReport]) -> Table {
    let mut t = Table::new("benchmark", &BENCH_COLUMNS);
    for r in reports {
        for row in &r.rows {
            t.push(vec![
                r.case_id.into(),
                row.x.into(),
                row.y_h.into(),
                row.exact.into(),
                row.e_a.into(),
                row.published_y_h.into(),
                row.abs_diff_published.into(),
            ]);
        }
    }
    t
}

// ---- convergence in J ----

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergeRow {
    pub level: u32,
    pub size: usize,
    pub max_grid_error: f64,
    /// `err(J - 1) / err(J)`; absent on the first row.
    pub ratio: Option<f64>,
    pub iterations: usize,
    pub final_delta: f64,
    pub history: Vec<f64>,
}

/// Solves at every level in `levels` and measures the max error on each
/// collocation grid. Without `exact`, a solve two levels finer than the
/// last serves as the reference.
pub fn converge_study(
    spec: &ProblemSpec,
    exact: Option<&(dyn Fn(f64) -> f64 + Sync)>,
    levels: std::ops::RangeInclusive<u32>,
    max_iters: usize,
    tol: f64,
) -> Result<Vec<ConvergeRow>> {
    if levels.is_empty() {
        return Err(Error::InvalidConfig("empty level range".into()));
    }
    let surrogate = match exact {
        Some(_) => None,
        None => {
            let cfg = SolverConfig::new(*levels.end() + 2).max_iters(max_iters).tol_outer(tol);
            Some(solve(spec, &cfg)?)
        }
    };
    let truth = |x: f64| -> Result<f64> {
        match (&exact, &surrogate) {
            (Some(y), _) => Ok(y(x)),
            (None, Some(s)) => s.evaluate(x),
            (None, None) => unreachable!(),
        }
    };
    let mut rows: Vec<ConvergeRow> = Vec::new();
    for level in levels {
        let cfg = SolverConfig::new(level).max_iters(max_iters).tol_outer(tol);
        let basis = Arc::new(HaarBasis::new(level)?);
        let sol = solve_with_basis(spec, &cfg, basis)?;
        let mut err = 0.0_f64;
        for (&x, &y) in sol.grid().iter().zip(&sol.y_grid) {
            err = err.max((y - truth(x)?).abs());
        }
        let ratio = rows.last().map(|prev| prev.max_grid_error / err);
        rows.push(ConvergeRow {
            level,
            size: sol.coeffs.len(),
            max_grid_error: err,
            ratio,
            iterations: sol.iters_used,
            final_delta: *sol.history.last().expect("at least one sweep"),
            history: sol.history.clone(),
        });
    }
    Ok(rows)
}

pub fn converge_table(rows: &[ConvergeRow]) -> Table {
    let mut t = Table::new(
        "convergence",
        &["J", "size", "max_grid_error", "ratio", "iterations", "final_delta", "delta_history"],
    );
    for r in rows {
        let hist: Vec<String> = r.history.iter().map(|d| fmt_sig(*d)).collect();
        t.push(vec![
            r.level.into(),
            r.size.into(),
            r.max_grid_error.into(),
            r.ratio.into(),
            r.iterations.into(),
            r.final_delta.into(),
            hist.join(";").into(),
        ]);
    }
    t
}

// ---- integral-form oracle ----

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleRow {
    pub n_quad: usize,
    pub residual: f64,
    /// `residual(n/2) / residual(n)`; absent on the first row.
    pub ratio: Option<f64>,
    /// Residual of the closed-form solution, when there is one.
    pub exact_residual: Option<f64>,
}

/// Quadrature counts `16, 32, ..` up to and including `max_quad`.
pub fn quad_ladder(max_quad: usize) -> Vec<usize> {
    std::iter::successors(Some(16usize), |n| Some(n * 2)).take_while(|&n| n <= max_quad.max(16)).collect()
}

pub fn oracle_study(
    solution: &Solution,
    spec: &ProblemSpec,
    ks: &KernelSpec,
    exact: Option<&(dyn Fn(f64) -> f64 + Sync)>,
    quads: &[usize],
) -> Result<Vec<OracleRow>> {
    let mut rows: Vec<OracleRow> = Vec::with_capacity(quads.len());
    for &n in quads {
        let residual = integral_residual(solution, spec, ks, n)?;
        let exact_residual = match exact {
            Some(y) => Some(integral_residual_fn(&|x| y(x), spec, ks, n)?),
            None => None,
        };
        let ratio = rows.last().map(|prev| prev.residual / residual);
        rows.push(OracleRow { n_quad: n, residual, ratio, exact_residual });
    }
    Ok(rows)
}

pub fn oracle_table(rows: &[OracleRow]) -> Table {
    let mut t = Table::new("integral-form residual", &["n_quad", "residual", "ratio", "exact_residual"]);
    for r in rows {
        t.push(vec![r.n_quad.into(), r.residual.into(), r.ratio.into(), r.exact_residual.into()]);
    }
    t
}

// ---- plain solves ----

pub fn probe_table(solution: &Solution, probes: &[f64]) -> Result<Table> {
    let mut t = Table::new("solution", &["x", "y", "dy"]);
    for &x in probes {
        t.push(vec![x.into(), solution.evaluate(x)?.into(), solution.derivative(x)?.into()]);
    }
    Ok(t)
}

pub fn history_table(solution: &Solution) -> Table {
    let mut t = Table::new("iteration history", &["iteration", "delta_norm"]);
    for (n, d) in solution.convergence_history() {
        t.push(vec![n.into(), d.into()]);
    }
    t
}

// ---- catalogue export ----

pub fn catalog_report(cases: &[BenchmarkCase]) -> Report {
    let mut meta =
        Table::new("cases", &["case", "name", "p", "q", "f", "exact", "bc", "published_J", "published_iters"]);
    let mut published =
        Table::new("published values", &["case", "x", "published_y_h", "published_exact", "published_e_a"]);
    let mut reference = Table::new("competing methods", &["case", "x", "method", "value"]);
    for c in cases {
        meta.push(vec![
            c.id.into(),
            c.name.into(),
            c.formulas.p.into(),
            c.formulas.q.into(),
            c.formulas.f.into(),
            c.formulas.exact.map_or(Cell::Empty, Cell::from),
            c.spec.bc.to_string().into(),
            c.published_level.into(),
            c.published_iters.into(),
        ]);
        for row in &c.table {
            published.push(vec![c.id.into(), row.x.into(), row.y_h.into(), row.exact.into(), row.e_a.into()]);
            for (method, v) in &row.reference {
                reference.push(vec![c.id.into(), row.x.into(), (*method).into(), (*v).into()]);
            }
        }
    }
    Report { tables: vec![meta, published, reference] }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::get_case;
    use crate::problem::BoundaryCondition;

    #[test]
    fn significant_digits() {
        assert_eq!(fmt_sig(0.0), "0");
        assert_eq!(fmt_sig(0.1), "0.1");
        assert_eq!(fmt_sig(1.0), "1");
        assert_eq!(fmt_sig(-2.5), "-2.5");
        assert_eq!(fmt_sig(1.0 / 3.0), "0.3333333333");
        assert_eq!(fmt_sig(123456.789012345), "123456.789");
        assert_eq!(fmt_sig(9.99999999999), "10");
        assert_eq!(fmt_sig(2.2e-6), "2.2e-6");
        assert_eq!(fmt_sig(1.0e-4), "0.0001");
        assert_eq!(fmt_sig(12345678901.0), "1.23456789e10");
        assert_eq!(fmt_sig(f64::NAN), "NaN");
    }

    #[test]
    fn csv_and_markdown_layout() {
        let mut t = Table::new("demo", &["a", "b"]);
        t.push(vec![1usize.into(), "x,y".into()]);
        t.push(vec![0.5.into(), Cell::Empty]);
        assert_eq!(t.to_csv(), "a,b\n1,\"x,y\"\n0.5,\n");
        let md = t.to_markdown();
        assert!(md.starts_with("### demo\n\n| a | b |\n| ---: | --- |\n"));
        let r = Report { tables: vec![t.clone(), t] };
        assert_eq!(r.render(Format::Csv), "a,b\n1,\"x,y\"\n0.5,\n\na,b\n1,\"x,y\"\n0.5,\n");
    }

    #[test]
    fn ladder() {
        assert_eq!(quad_ladder(128), vec![16, 32, 64, 128]);
        assert_eq!(quad_ladder(100), vec![16, 32, 64]);
        assert_eq!(quad_ladder(1), vec![16]);
    }

    #[test]
    fn bench_defaults_follow_table() {
        let case = get_case(1).unwrap();
        let r = bench_case(&case, &BenchOptions::default()).unwrap();
        assert_eq!(r.level, 3);
        assert_eq!(r.solution.iters_used, 8);
        assert_eq!(r.rows.len(), 5);
        let mid = &r.rows[2];
        assert!(mid.abs_diff_published.unwrap() < 5e-4);
        assert!(mid.e_a.unwrap() < 5e-4);
        let t = bench_table(&[r]);
        assert_eq!(t.columns, BENCH_COLUMNS);
    }

    #[test]
    fn off_table_probes_have_no_published_columns() {
        let case = get_case(6).unwrap();
        let opts = BenchOptions { probes: Some(vec![0.25]), ..Default::default() };
        let r = bench_case(&case, &opts).unwrap();
        assert_eq!(r.rows[0].published_y_h, None);
        assert_eq!(r.rows[0].exact, None);
    }

    #[test]
    fn surrogate_truth_without_closed_form() {
        let case = get_case(6).unwrap();
        let rows = converge_study(&case.spec, None, 2..=4, 20, 1e-12).unwrap();
        assert_eq!(rows.len(), 3);
        assert!(rows[2].max_grid_error < rows[0].max_grid_error);
        assert_eq!(rows[0].ratio, None);
    }

    #[test]
    fn linear_problem_converges_in_one_effective_sweep() {
        let bc = BoundaryCondition::dirichlet(0.0, 0.0).unwrap();
        let spec = ProblemSpec::new(|_| 1.0, |_| 1.0, |_, _| 2.0, |_, _| 0.0, bc).with_p_prime(|_| 0.0);
        let exact = |x: f64| x * (x - 1.0);
        let rows = converge_study(&spec, Some(&exact), 1..=3, 10, 1e-12).unwrap();
        for r in rows {
            assert!(r.max_grid_error < 1e-12);
            assert_eq!(r.iterations, 2);
        }
    }

    #[test]
    fn catalog_export_shapes() {
        let cases = crate::catalog::all_cases();
        let r = catalog_report(&cases);
        assert_eq!(r.tables[0].rows.len(), 8);
        assert_eq!(r.tables[1].rows.len(), 40);
        assert!(!r.tables[2].rows.is_empty());
    }
}
