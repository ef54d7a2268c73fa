use haarql::catalog::get_case;
use haarql::greens::{integral_residual, KernelSpec};
use haarql::haar::{p1_eval, p2_eval};
use haarql::problem_file::parse_problem;
use haarql::report::{bench_case, bench_table, BenchOptions, Format, Report};
use haarql::{solve, BoundaryCondition, ProblemSpec, SolverConfig};
use proptest::prelude::*;

fn linear_spec(bc: BoundaryCondition, k: f64) -> ProblemSpec {
    // (y')' = y - k: linear, f_y = 1
    ProblemSpec::new(|_| 1.0, |_| 1.0, move |_, y| y - k, |_, _| 1.0, bc).with_p_prime(|_| 0.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dirichlet_data_reproduced(a in -5.0f64..5.0, b in -5.0f64..5.0, level in 0u32..6, iters in 1usize..4) {
        let bc = BoundaryCondition::dirichlet(a, b).unwrap();
        let cfg = SolverConfig::new(level).max_iters(iters).tol_outer(f64::MIN_POSITIVE);
        let sol = solve(&linear_spec(bc, 2.0), &cfg).unwrap();
        prop_assert!((sol.evaluate(0.0).unwrap() - a).abs() <= 1e-12 * a.abs().max(1.0));
        prop_assert!((sol.evaluate(1.0).unwrap() - b).abs() <= 1e-12 * b.abs().max(1.0));
    }

    #[test]
    fn robin_data_reproduced(
        alpha in prop_oneof![0.1f64..5.0, -5.0f64..-0.1],
        beta in -3.0f64..3.0,
        gamma in -5.0f64..5.0,
        level in 0u32..6,
    ) {
        let bc = BoundaryCondition::robin(alpha, beta, gamma).unwrap();
        let spec = linear_spec(bc, 1.0);
        if let Ok(sol) = solve(&spec, &SolverConfig::new(level).max_iters(2)) {
            let y1 = sol.evaluate(1.0).unwrap();
            let dy1 = sol.derivative(1.0).unwrap();
            prop_assert!(sol.derivative(0.0).unwrap().abs() <= 1e-12);
            prop_assert!((alpha * y1 + beta * dy1 - gamma).abs() <= 1e-12 * gamma.abs().max(1.0) * (1.0 + alpha.abs() + beta.abs()));
        }
    }

    #[test]
    fn primitives_are_bounded_and_monotone_in_support(i in 2usize..256, x in 0.0f64..1.0) {
        let p1 = p1_eval(i, x).unwrap();
        let p2 = p2_eval(i, x).unwrap();
        prop_assert!((0.0..=0.5 + 1e-15).contains(&p1));
        prop_assert!(p2 >= 0.0);
        // p2 is nondecreasing since p2' = p1 >= 0
        let later = p2_eval(i, (x + 1e-3).min(1.0)).unwrap();
        prop_assert!(later + 1e-15 >= p2);
    }
}

#[test]
fn identical_runs_are_byte_identical() {
    let render = || {
        let reports: Vec<_> =
            (1..=8).map(|id| bench_case(&get_case(id).unwrap(), &BenchOptions::default()).unwrap()).collect();
        Report::single(bench_table(&reports)).render(Format::Csv)
    };
    let a = render();
    assert_eq!(a, render());
    assert!(a.starts_with("case,x,y_h,exact,e_a,published_y_h,abs_diff_published\n"));
    assert_eq!(a.lines().count(), 41);
}

#[test]
fn nonlinear_residual_shrinks_with_level() {
    let case = get_case(3).unwrap();
    let ks = case.kernel().unwrap();
    let mut prev = f64::INFINITY;
    for level in 2..=6 {
        let sol = solve(&case.spec, &SolverConfig::new(level).max_iters(20)).unwrap();
        assert!(sol.converged);
        // collocation residual is zero up to the linearization error
        assert!(sol.nonlinear_residual(&case.spec).unwrap() < 1e-8, "J = {level}");
        let r = integral_residual(&sol, &case.spec, &ks, 2048).unwrap();
        assert!(r < prev, "J = {level}: {r} >= {prev}");
        prev = r;
    }
}

#[test]
fn problem_file_matches_catalogue_case() {
    let text = "\
p = x^0.5
p_prime = 0.5*x^-0.5
q = x^0.5
f = 0.5*exp(y) - exp(2*y)
f_y = 0.5*exp(y) - 2*exp(2*y)
bc.kind = dirichlet
bc.alpha = ln(2)
bc.beta = 0
";
    let pf = parse_problem(text).unwrap();
    let cfg = SolverConfig::new(4).max_iters(20);
    let from_file = solve(&pf.spec, &cfg).unwrap();
    let builtin = solve(&get_case(1).unwrap().spec, &cfg).unwrap();
    for x in [0.1, 0.5, 0.9] {
        let d = (from_file.evaluate(x).unwrap() - builtin.evaluate(x).unwrap()).abs();
        assert!(d < 1e-12, "x = {x}: {d}");
    }
}

#[test]
fn numeric_kernel_agrees_with_closed_form() {
    let case = get_case(5).unwrap();
    let sol = solve(&case.spec, &SolverConfig::new(4).max_iters(20)).unwrap();
    let analytic = integral_residual(&sol, &case.spec, &case.kernel().unwrap(), 256).unwrap();
    let numeric = integral_residual(&sol, &case.spec, &KernelSpec::numeric(&case.spec).unwrap(), 256).unwrap();
    assert!((analytic - numeric).abs() < 1e-6 * analytic.max(1e-3), "{analytic} vs {numeric}");
}
