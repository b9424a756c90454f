use cube_entropy::info::BoundaryData;
use cube_entropy::lp::program::{layer_dominance, set_function_solution, variable_count};
use cube_entropy::lp::simplex::{solve, LinearProgram, SparseRow};
use cube_entropy::lp::{build_lp, check_symmetric_dominance, feasible_from_function, solve_lp, Status};
use cube_entropy::random::{random_consistent_boundary, random_iid_boundary, random_nonneg, random_set_function, seeded_rng};
use cube_entropy::symmetric::{symmetric_value, SymmetricData};
use cube_entropy::{NoiseParam, SubsetMask};

#[test]
fn gradient_data_admits_its_closed_form_point() {
    for k in 1..=4 {
        for lambda in [0.1, 0.5, 0.9] {
            let mut rng = seeded_rng(k as u64 * 10);
            let values = random_set_function(k, &mut rng);
            let b = BoundaryData::from_set_function(k, &values).unwrap();
            let p = build_lp(&b, lambda).unwrap();
            assert_eq!(p.vars.len(), variable_count(k));
            let x = set_function_solution(&p, &values).unwrap();
            assert!(p.residuals(&x).max() <= 1e-12);
            let sol = solve_lp(&p).unwrap();
            assert_eq!(sol.status, Status::Optimal);
            assert!(sol.residuals.max() <= 1e-9, "{:?}", sol.residuals);
            assert!(p.objective_value(&x) <= sol.objective + 1e-9);
        }
    }
}

#[test]
fn symmetric_value_bounds_consistent_programs() {
    let mut rng = seeded_rng(77);
    for k in 2..=4 {
        for lambda in [0.1, 0.5, 0.9] {
            let b = random_consistent_boundary(k, &mut rng).unwrap();
            let d = check_symmetric_dominance(&b, lambda).unwrap();
            assert!(d.pass, "{d:?}");
            for (lhs, rhs) in layer_dominance(&b, lambda).unwrap() {
                assert!(lhs <= rhs + 1e-7, "{lhs} > {rhs}");
            }
        }
    }
}

#[test]
fn symmetric_data_reaches_the_symmetric_value() {
    for k in 1..=3 {
        let profile: Vec<f64> = (0..k).map(|s| 1.0 / (1 + s) as f64).collect();
        let b = BoundaryData::symmetric(&profile).unwrap();
        let lambda = 0.4;
        let sym = symmetric_value(&SymmetricData::from_boundary(&b, lambda).unwrap()).unwrap();
        let sol = solve_lp(&build_lp(&b, lambda).unwrap()).unwrap();
        assert_eq!(sol.status, Status::Optimal);
        assert!(sol.objective <= sym + 1e-9, "{} > {sym}", sol.objective);
    }
}

#[test]
fn independent_entries_are_usually_infeasible() {
    let mut rng = seeded_rng(5);
    let mut infeasible = 0;
    for _ in 0..20 {
        let b = random_iid_boundary(3, &mut rng).unwrap();
        let sol = solve_lp(&build_lp(&b, 0.5).unwrap()).unwrap();
        assert_ne!(sol.status, Status::IterationLimit);
        infeasible += usize::from(sol.status == Status::Infeasible);
    }
    assert!(infeasible >= 15, "{infeasible}/20");
}

#[test]
fn function_data_is_feasible() {
    let mut rng = seeded_rng(8);
    for k in 1..=3 {
        let f = random_nonneg(5, &mut rng).unwrap();
        let a = SubsetMask::from_coords(0..k);
        let s = feasible_from_function(&f, a, k, NoiseParam::new(0.2).unwrap()).unwrap();
        assert!(s.residuals.max() <= 1e-9, "{:?}", s.residuals);
        assert!((s.objective - s.direct).abs() <= 1e-9 * (1.0 + s.direct.abs()));
    }
}

#[test]
fn large_programs_need_the_override() {
    let b = BoundaryData::zeros(5).unwrap();
    let p = build_lp(&b, 0.5).unwrap();
    assert!(solve_lp(&p).is_err());
    assert!(build_lp(&BoundaryData::zeros(1).unwrap(), 0.5).is_ok());
}

#[test]
fn export_lists_every_row_and_variable() {
    let p = build_lp(&random_consistent_boundary(2, &mut seeded_rng(1)).unwrap(), 0.5).unwrap();
    let text = p.to_text();
    assert!(text.starts_with("# k = 2 lambda = 0.5\nmaximize\n"));
    assert!(text.contains(&format!("equalities {}", p.equalities.len())));
    assert!(text.contains(&format!("inequalities {}", p.inequalities.len())));
    assert!(text.contains(&format!("variables {} free", p.vars.len())));
    assert_eq!(text.lines().filter(|l| l.starts_with('x')).count(), p.vars.len());
}

fn row(coeffs: &[(usize, f64)], rhs: f64) -> SparseRow {
    SparseRow { coeffs: coeffs.to_vec(), rhs }
}

#[test]
fn solver_handles_small_programs() {
    // max x + y, x + 2y <= 4, 3x + y <= 6, x, y >= 0.
    let lp = LinearProgram {
        num_vars: 2,
        objective: vec![(0, 1.0), (1, 1.0)],
        equalities: vec![],
        inequalities: vec![row(&[(0, 1.0), (1, 2.0)], 4.0), row(&[(0, 3.0), (1, 1.0)], 6.0), row(&[(0, -1.0)], 0.0), row(&[(1, -1.0)], 0.0)],
        scale: vec![],
    };
    let r = solve(&lp);
    assert_eq!(r.status, Status::Optimal);
    assert!((r.objective - 2.8).abs() < 1e-12);
    assert!((r.x[0] - 1.6).abs() < 1e-12 && (r.x[1] - 1.2).abs() < 1e-12);

    let unbounded = LinearProgram { inequalities: vec![row(&[(0, -1.0)], 0.0)], ..lp.clone() };
    assert_eq!(solve(&unbounded).status, Status::Unbounded);

    let infeasible = LinearProgram { equalities: vec![row(&[(0, 1.0)], 5.0)], ..lp };
    assert_eq!(solve(&infeasible).status, Status::Infeasible);
}
