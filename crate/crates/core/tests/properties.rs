use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use glsf::boundary::{ForceProfile, TemperatureProfile};
use glsf::config::{parse_config, RunConfig};
use glsf::dynamics::{rhs, Scheme};
use glsf::functionals::{pointwise_identity_residual, pointwise_identity_scale, q_min_eigenvalue};
use glsf::init::random_smooth_state;
use glsf::io::{snapshot_bytes, state_from_bytes};
use glsf::ops::{self, Bc, Inner};
use glsf::splitting::{forcing_consistency, linear_rhs, LinearFlow};
use glsf::{derive_params, BoundaryData, Grid2D, ScalarField, VectorField};

fn grid_strategy() -> impl Strategy<Value = Grid2D> {
    (4usize..20, 4usize..20, 0.3f64..3.0, 0.3f64..3.0)
        .prop_map(|(nx, ny, lx, ly)| Grid2D::new(nx, ny, lx, ly).unwrap())
}

fn params_strategy() -> impl Strategy<Value = glsf::PhysicalParams> {
    (
        0.2f64..5.0,
        0.2f64..5.0,
        0.2f64..5.0,
        0.2f64..5.0,
        1e-2f64..1e2,
    )
        .prop_map(|(g, k, m, c, k0)| derive_params(g, k, m, c, k0).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn summation_by_parts(g in grid_strategy(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = ScalarField::from_values(g, (0..g.len()).map(|_| rng.gen_range(-1.0..1.0)).collect());
        let v = VectorField::from_components(
            g,
            (0..g.len()).map(|_| rng.gen_range(-1.0..1.0)).collect(),
            (0..g.len()).map(|_| rng.gen_range(-1.0..1.0)).collect(),
        );
        let gs = ops::grad(&s, Bc::Neumann);
        let dv = ops::div(&v);
        let scale = gs.norm() * v.norm() + s.norm() * dv.norm();
        prop_assert!((gs.inner(&v) + s.inner(&dv)).abs() <= 1e-12 * scale);
    }

    #[test]
    fn q_is_positive_definite(p in params_strategy()) {
        prop_assert!(q_min_eigenvalue(&p) > 0.0);
    }

    #[test]
    fn pointwise_identity_holds(re in -1e3f64..1e3, im in -1e3f64..1e3, tr in -1e3f64..1e3, ti in -1e3f64..1e3,
                                d in -1e3f64..1e3, kappa in 1e-2f64..1e2) {
        let (psi, psit) = (Complex64::new(re, im), Complex64::new(tr, ti));
        let scale = pointwise_identity_scale(psi, psit, d, kappa);
        prop_assert!(pointwise_identity_residual(psi, psit, d, kappa) <= 1e-13 * scale.max(f64::MIN_POSITIVE));
    }

    #[test]
    fn snapshot_round_trip(g in grid_strategy(), seed in any::<u64>()) {
        let s = random_smooth_state(g, seed, 2.0);
        let b = snapshot_bytes(&s);
        let back = state_from_bytes(&b).unwrap();
        prop_assert_eq!(snapshot_bytes(&back), b);
    }

    #[test]
    fn config_text_round_trip(nx in 4usize..200, ny in 4usize..200, lx in 0.1f64..10.0, gamma in 0.1f64..10.0,
                              k0 in 1e-3f64..1e3, omega in -3.0f64..3.0, ub in -2.0f64..2.0, linear in any::<bool>(),
                              amp in -1.0f64..1.0, dt in 1e-5f64..1e-2, explicit in any::<bool>(), seed in any::<u64>()) {
        let cfg = RunConfig {
            nx, ny, lx, gamma, k0, omega, dt, seed,
            u_b: if linear { TemperatureProfile::LinearX(ub) } else { TemperatureProfile::Constant(ub) },
            g: ForceProfile::Stream(amp),
            scheme: if explicit { Scheme::ExplicitEuler } else { Scheme::Imex },
            t_end: 1.0,
            ..RunConfig::default()
        };
        let back = parse_config(&cfg.to_text()).unwrap();
        prop_assert_eq!(&back, &cfg);
        prop_assert_eq!(back.to_text(), cfg.to_text());
    }

    #[test]
    fn linear_rhs_is_additive(p in params_strategy(), s1 in any::<u64>(), s2 in any::<u64>()) {
        let g = Grid2D::new(10, 7, 1.0, 0.7).unwrap();
        let (a, b) = (random_smooth_state(g, s1, 2.0), random_smooth_state(g, s2, 2.0));
        let sum = linear_rhs(&a.add(&b), &p);
        let (la, lb) = (linear_rhs(&a, &p), linear_rhs(&b, &p));
        let parts = [
            sum.psit.sub(&la.psit).sub(&lb.psit).max_abs(),
            sum.at.sub(&la.at).sub(&lb.at).max_abs(),
            sum.ut.sub(&la.ut).sub(&lb.ut).max_abs(),
        ];
        let scale = la.max_abs() + lb.max_abs();
        prop_assert!(parts.iter().all(|e| *e <= 1e-12 * scale), "{:?} vs {}", parts, scale);
    }

    #[test]
    fn forcings_reconstruct_the_vector_field(p in params_strategy(), seed in any::<u64>(), omega in -1.0f64..1.0,
                                             ub in -0.5f64..0.5, amp in -0.5f64..0.5) {
        let g = Grid2D::unit_square(10).unwrap();
        let b = BoundaryData::build(g, omega, TemperatureProfile::LinearX(ub), ForceProfile::Stream(amp), 1e-10).unwrap();
        let z = random_smooth_state(g, seed, 2.0);
        let scale = rhs(&z, &p, &b).unwrap().max_abs().max(1.0);
        prop_assert!(forcing_consistency(&z, &p, &b).unwrap() <= 1e-12 * scale);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn linear_flow_is_homogeneous(seed in any::<u64>(), k in -8i32..8) {
        let g = Grid2D::unit_square(8).unwrap();
        let p = glsf::PhysicalParams::unit();
        let flow = LinearFlow::new(&p, g, 1e-2, 1e-10).unwrap();
        let z = random_smooth_state(g, seed, 2.0);
        let c = 2f64.powi(k);
        let lhs = flow.advance(&z.scaled(c), 5).unwrap();
        let rhs = flow.advance(&z, 5).unwrap().scaled(c);
        prop_assert_eq!(lhs, rhs);
    }
}
