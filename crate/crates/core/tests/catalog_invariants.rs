use haarql::catalog::{all_cases, get_case, TABLE_POINTS};
use haarql::BoundaryCondition;

fn central(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (f(x + h) - f(x - h)) / (2.0 * h)
}

#[test]
fn hand_derived_f_y_matches_finite_differences() {
    for case in all_cases() {
        for &x in &TABLE_POINTS {
            for y in [0.2, 0.5, 0.9, 1.3] {
                let fd = central(|v| (case.spec.f)(x, v), y, 1e-6);
                let an = (case.spec.f_y)(x, y);
                assert!((fd - an).abs() <= 1e-6 * an.abs().max(1.0), "case {}: f_y({x}, {y}) = {an}, fd {fd}", case.id);
            }
        }
    }
}

#[test]
fn analytic_p_prime_matches_finite_differences() {
    for case in all_cases() {
        let dp = case.spec.p_prime.as_ref().expect("catalogue supplies p'");
        for x in [0.05, 0.3, 0.77, 1.0] {
            let fd = central(|t| (case.spec.p)(t), x, 1e-6);
            assert!((fd - dp(x)).abs() <= 1e-6 * fd.abs().max(1.0), "case {} at {x}", case.id);
        }
    }
}

#[test]
fn closed_forms_satisfy_the_equation() {
    for case in all_cases().into_iter().filter(|c| c.has_exact()) {
        let y = |x: f64| case.exact_eval(x).unwrap();
        let s = &case.spec;
        let flux = |x: f64| (s.p)(x) * central(y, x, 1e-5);
        for k in 0..=18 {
            let x = 0.05 + 0.05 * k as f64;
            let lhs = central(flux, x, 1e-4);
            let rhs = (s.q)(x) * (s.f)(x, y(x));
            assert!((lhs - rhs).abs() <= 1e-6 * rhs.abs().max(1.0), "case {} at {x}: {lhs} vs {rhs}", case.id);
        }
    }
}

#[test]
fn closed_forms_satisfy_boundary_conditions() {
    for case in all_cases().into_iter().filter(|c| c.has_exact()) {
        let y = |x: f64| case.exact_eval(x).unwrap();
        match case.spec.bc {
            BoundaryCondition::Dirichlet { left, right } => {
                assert!((y(0.0) - left).abs() < 1e-12, "case {}", case.id);
                assert!((y(1.0) - right).abs() < 1e-12, "case {}", case.id);
            }
            BoundaryCondition::NeumannRobin { alpha, beta, gamma } => {
                let dy0 = (y(1e-6) - y(0.0)) / 1e-6;
                assert!(dy0.abs() < 1e-5, "case {}: y'(0) ~ {dy0}", case.id);
                let dy1 = central(y, 1.0 - 1e-5, 1e-5);
                assert!((alpha * y(1.0) + beta * dy1 - gamma).abs() < 1e-6, "case {}", case.id);
            }
        }
    }
}

#[test]
fn isothermal_sphere_is_flat_at_origin() {
    let case = get_case(4).unwrap();
    let y = |x: f64| case.exact_eval(x).unwrap();
    assert!(((y(1e-4) - y(0.0)) / 1e-4).abs() < 1e-4);
    assert!((y(1.0) - 0.75f64.sqrt()).abs() < 1e-15);
}

#[test]
fn published_tables_cover_the_probe_points() {
    for case in all_cases() {
        assert_eq!(case.table.len(), TABLE_POINTS.len());
        for &x in &TABLE_POINTS {
            assert!(case.row_at(x).is_some(), "case {} missing x = {x}", case.id);
        }
        assert_eq!(case.has_exact(), case.table[0].e_a.is_some(), "case {}", case.id);
    }
}
