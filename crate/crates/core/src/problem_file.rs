//! Plain-text problem descriptions.
//!
//! ```text
//! # Thomas-Fermi type example
//! p = 1
//! q = x^-0.5
//! f = y^1.5
//! f_y = 1.5*y^0.5
//! bc.kind = dirichlet
//! bc.alpha = 1        # y(0)
//! bc.beta = 0         # y(1)
//! guard = nonnegative
//! ```
//!
//! Robin files use `bc.kind = robin` with `bc.alpha`, `bc.beta`, `bc.gamma`
//! for `y'(0) = 0, alpha y(1) + beta y'(1) = gamma`. `p_prime` is optional
//! and falls back to central differences. `guard` is `nonnegative` (clamp
//! iterates at zero) or `nonzero <eps>` (reject `|y| < eps`).

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::problem::{BoundaryCondition, ProblemSpec};

const KEYS: [&str; 10] = ["p", "p_prime", "q", "f", "f_y", "bc.kind", "bc.alpha", "bc.beta", "bc.gamma", "guard"];

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Guard {
    Nonnegative,
    Nonzero(f64),
}

/// A parsed problem file; `spec` is ready for the solver.
#[derive(Debug, Clone)]
pub struct ProblemFile {
    pub spec: ProblemSpec,
    pub guard: Option<Guard>,
    /// Raw right-hand sides keyed by field name.
    pub sources: BTreeMap<String, String>,
}

struct Entry {
    line: usize,
    value: String,
}

fn parse_err(line: usize, field: &str, message: impl Into<String>) -> Error {
    Error::Parse { line, field: field.to_string(), message: message.into() }
}

pub fn parse_problem(text: &str) -> Result<ProblemFile> {
    let mut entries: BTreeMap<&'static str, Entry> = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            return Err(parse_err(line, content, "expected `key = value`"));
        };
        let key = key.trim();
        let value = value.trim();
        let Some(&known) = KEYS.iter().find(|k| **k == key) else {
            return Err(parse_err(line, key, "unknown key"));
        };
        if value.is_empty() {
            return Err(parse_err(line, key, "empty value"));
        }
        if let Some(prev) = entries.get(known) {
            return Err(parse_err(line, key, format!("duplicate key, first set on line {}", prev.line)));
        }
        entries.insert(known, Entry { line, value: value.to_string() });
    }

    let required = |key: &str| entries.get(key).ok_or_else(|| Error::MissingKey(key.to_string()));
    let expr_of = |key: &str, allow_y: bool| -> Result<Option<Expr>> {
        let Some(entry) = entries.get(key) else { return Ok(None) };
        let e = Expr::parse(&entry.value).map_err(|err| parse_err(entry.line, key, err.to_string()))?;
        if !allow_y && e.uses_y() {
            return Err(parse_err(entry.line, key, "may depend on x only"));
        }
        Ok(Some(e))
    };
    let constant = |key: &str| -> Result<f64> {
        let entry = required(key)?;
        let e = expr_of(key, false)?.expect("present");
        if e.uses_x() {
            return Err(parse_err(entry.line, key, "must be a constant"));
        }
        let v = e.eval(0.0, 0.0);
        if !v.is_finite() {
            return Err(parse_err(entry.line, key, "evaluates to a non-finite value"));
        }
        Ok(v)
    };

    for key in ["p", "q", "f", "f_y", "bc.kind"] {
        required(key)?;
    }
    let p = expr_of("p", false)?.expect("present");
    let q = expr_of("q", false)?.expect("present");
    let f = expr_of("f", true)?.expect("present");
    let f_y = expr_of("f_y", true)?.expect("present");
    let p_prime = expr_of("p_prime", false)?;

    let kind = required("bc.kind")?;
    let bc = match kind.value.as_str() {
        "dirichlet" => {
            if let Some(e) = entries.get("bc.gamma") {
                return Err(parse_err(e.line, "bc.gamma", "not used by dirichlet conditions"));
            }
            BoundaryCondition::dirichlet(constant("bc.alpha")?, constant("bc.beta")?)
        }
        "robin" => BoundaryCondition::robin(constant("bc.alpha")?, constant("bc.beta")?, constant("bc.gamma")?),
        other => {
            return Err(parse_err(kind.line, "bc.kind", format!("expected `dirichlet` or `robin`, got `{other}`")))
        }
    }
    .map_err(|e| parse_err(kind.line, "bc", e.to_string()))?;

    let guard = match entries.get("guard") {
        None => None,
        Some(entry) => {
            let mut words = entry.value.split_whitespace();
            let g = match (words.next(), words.next(), words.next()) {
                (Some("nonnegative"), None, None) => Guard::Nonnegative,
                (Some("nonzero"), Some(eps), None) => match eps.parse::<f64>() {
                    Ok(eps) if eps.is_finite() && eps > 0.0 => Guard::Nonzero(eps),
                    _ => return Err(parse_err(entry.line, "guard", "nonzero threshold must be a positive number")),
                },
                _ => return Err(parse_err(entry.line, "guard", "expected `nonnegative` or `nonzero <eps>`")),
            };
            Some(g)
        }
    };

    let mut spec = ProblemSpec::new(
        move |x| p.eval(x, 0.0),
        move |x| q.eval(x, 0.0),
        move |x, y| f.eval(x, y),
        move |x, y| f_y.eval(x, y),
        bc,
    );
    if let Some(dp) = p_prime {
        spec = spec.with_p_prime(move |x| dp.eval(x, 0.0));
    }
    spec = match guard {
        None => spec,
        Some(Guard::Nonnegative) => spec.with_guard(|y| Some(y.max(0.0))),
        Some(Guard::Nonzero(eps)) => spec.with_guard(move |y| (y.abs() >= eps).then_some(y)),
    };

    let sources = entries.into_iter().map(|(k, e)| (k.to_string(), e.value)).collect();
    Ok(ProblemFile { spec, guard, sources })
}
