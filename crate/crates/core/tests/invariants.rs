use hjlab::closed_forms::{Case, SuperSolutionSpec};
use hjlab::geometry::quarter_turn;
use hjlab::hamiltonian::{hamiltonian_with_cost, kinetic, rotate_gradient, HamiltonianParams};
use hjlab::probability::{liminf_lower, p_ck_lower, p_dk_given_ck_lower};
use hjlab::rng::SplitMix;
use hjlab::solver::{solve, SolverConfig};
use hjlab::{EnvParams, Environment, PlantSpec, Window};
use proptest::prelude::*;

fn sparse(seed: u64) -> EnvParams {
    EnvParams { lambda: 2.0, mu: 1.5, k_max: 3, seed, ..EnvParams::default() }
}

fn points(env: &Environment, n: usize, seed: u64) -> Vec<[f64; 2]> {
    let w = env.evaluable();
    let mut rng = SplitMix::new(seed);
    (0..n).map(|_| [rng.uniform(w.min[0], w.max[0]), rng.uniform(w.min[1], w.max[1])]).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn cost_ranges(seed in any::<u64>()) {
        let env = Environment::sample(sparse(seed), Window::centered_square(12.0), PlantSpec::default()).unwrap();
        for x in points(&env, 500, seed) {
            let c2 = env.c2_value(x).unwrap();
            prop_assert!(c2 == -0.5 || c2 == 0.0 || c2 == 0.5);
            let c = env.c_value(x).unwrap();
            prop_assert!((-0.5..=0.5).contains(&c));
        }
    }

    #[test]
    fn rotation_negates_the_cost(seed in any::<u64>()) {
        let env = Environment::sample(sparse(seed), Window::centered_square(12.0), PlantSpec::default()).unwrap();
        let rot = env.rotate();
        let g = env.params().env_grid_h;
        for x in points(&rot, 500, seed ^ 1) {
            let xh = quarter_turn(x);
            if !env.evaluable().contains(xh) {
                continue;
            }
            prop_assert!((rot.c_value(x).unwrap() + env.c_value(xh).unwrap()).abs() <= 4.0 * g);
            prop_assert_eq!(rot.c2_value(x).unwrap(), -env.c2_value(xh).unwrap());
        }
    }

    #[test]
    fn sampling_is_deterministic(seed in any::<u64>()) {
        let w = Window::centered_square(10.0);
        let a = Environment::sample(sparse(seed), w, PlantSpec::default()).unwrap();
        let b = Environment::sample(sparse(seed), w, PlantSpec::default()).unwrap();
        prop_assert_eq!(a.rectangles(), b.rectangles());
        let xs = points(&a, 200, seed);
        let bits = |e: &Environment| e.c_values(&xs).unwrap().into_iter().map(f64::to_bits).collect::<Vec<_>>();
        prop_assert_eq!(bits(&a), bits(&b));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn hamiltonian_is_separated(p1 in -50.0f64..50.0, p2 in -50.0f64..50.0, c in -0.5f64..0.5, d in -0.5f64..0.5) {
        let p = [p1, p2];
        prop_assert_eq!(hamiltonian_with_cost(p, c, 2.0), -c + kinetic(p, 2.0));
        let (a, b) = (hamiltonian_with_cost(p, c, 2.0) + c, hamiltonian_with_cost(p, d, 2.0) + d);
        prop_assert!((a - b).abs() <= 4.0 * f64::EPSILON * a.abs().max(1.0));
    }

    #[test]
    fn kinetic_antisymmetry(p1 in -2.0f64..=2.0, p2 in -2.0f64..=2.0, q in 1.1f64..4.0) {
        let p = [p1, p2];
        prop_assert_eq!(kinetic(rotate_gradient(p), q), -kinetic(p, q));
    }

    #[test]
    fn coercivity_floor(p1 in -40.0f64..40.0, p2 in -40.0f64..40.0, c in -0.5f64..0.5, q in 1.1f64..4.0) {
        let p = [p1, p2];
        let inf = p1.abs().max(p2.abs());
        let floor = (inf - 2.0).max(0.0).powf(q) - inf - 0.5;
        prop_assert!(hamiltonian_with_cost(p, c, q) >= floor - 1e-9);
    }

    #[test]
    fn supersolution_derivative_displays(
        k in 1u32..=8,
        eta in 0.05f64..0.5,
        extra in 0.0f64..40.0,
        t in 0.0f64..1.0,
        a in -4.0f64..4.0,
        b in -4.0f64..4.0,
    ) {
        let lambda = 16.0 / eta + extra;
        let mu = 16.0 / eta + 0.5 * extra;
        let spec = SuperSolutionSpec::new([1.0, -2.0], k, lambda, mu, eta).unwrap();
        let t = t * spec.t_max();
        let x = [1.0 + a * spec.sigma1(), -2.0 + b * spec.sigma2()];
        let g = spec.grad_u_plus(t, x).unwrap();
        let dt = spec.dt_u_plus(t, x).unwrap();
        prop_assert!(dt >= -0.5 + eta - 1e-12);
        prop_assert!(g[0].abs() <= 4.0 / lambda + 1e-12);
        prop_assert!(g[0].abs().max(g[1].abs()) <= 2.0);
        let (case, bound) = spec.residual_plus_case_bound(t, x).unwrap();
        prop_assert!((bound - spec.case_bound(case)).abs() < 1e-15);
        // far along x₁ (cases 1 and 3) and far across x₂ (cases 1 and 2)
        if matches!(case, Case::FarBoth | Case::FarAlong) {
            prop_assert!(dt >= 0.5 + eta - 1e-12);
        }
        if matches!(case, Case::FarBoth | Case::FarTransverse) {
            prop_assert!(g[1].abs() >= 1.0 - 1e-12);
        }
        prop_assert!(spec.case_bound(Case::Near) >= eta - 8.0 / lambda - 4.0 / mu - 1e-12);
    }

    #[test]
    fn closed_forms_are_probabilities(k in 1u32..=30, d1 in 0.0f64..2.0, d2 in 0.0f64..2.0, lambda in 0.25f64..3.0) {
        let (lo, hi) = if d1 <= d2 { (d1, d2) } else { (d2, d1) };
        let a = p_ck_lower(k, lo);
        let b = p_ck_lower(k, hi);
        prop_assert!((0.0..=1.0).contains(&a) && (0.0..=1.0).contains(&b));
        prop_assert!(a <= b);
        let params = EnvParams { lambda, mu: lambda, k_max: k + 6, ..EnvParams::default() };
        prop_assert!((0.0..=1.0).contains(&p_dk_given_ck_lower(k, &params)));
        prop_assert!((0.0..=1.0).contains(&liminf_lower(hi, lambda)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn solutions_stay_within_half_t(seed in any::<u64>()) {
        let params = sparse(seed);
        let config = SolverConfig { radius: 6.0, radius_override: true, ..SolverConfig::for_horizon(3.0) };
        let env = Environment::sample(params, Window::centered_square(8.0), PlantSpec::default()).unwrap();
        let run = solve(&HamiltonianParams::new(params.q, &env).unwrap(), config).unwrap();
        let t = run.final_field.t;
        prop_assert!(run.final_field.values.iter().all(|u| u.abs() <= 0.5 * t + 1e-12));
    }
}
