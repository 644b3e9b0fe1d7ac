mod common;

use common::{max_abs_diff, rk4};
use patankar::integrators::{explicit_euler_step, mpe_step, Integrator, IntegratorId, StepOptions};
use patankar::pds::{make_linear_test_pds, NonlinearPds};

#[test]
fn rk4_oracle_matches_closed_form() {
    let problem = make_linear_test_pds(5.0, 1.0).unwrap();
    let exact = (problem.exact.as_ref().unwrap())(1.0);
    let approx = rk4(problem.pds.as_ref(), &problem.u0, 1.0, 1e-3);
    assert!(max_abs_diff(&approx, &exact) < 1e-12, "{approx:?} vs {exact:?}");
}

#[test]
fn small_steps_agree_with_explicit_euler() {
    let pds = NonlinearPds::default();
    let u = [9.98, 0.01, 0.01];
    for dt in [1e-4, 1e-5] {
        let mp = mpe_step(&pds, &u, dt).unwrap().state;
        let ee = explicit_euler_step(&pds, &u, dt).unwrap();
        // both are first order, so they differ by O(dt^2)
        assert!(max_abs_diff(&mp, &ee) < 50.0 * dt * dt, "dt {dt}");
    }
}

#[test]
fn mp_integrators_approach_the_oracle() {
    let pds = NonlinearPds::default();
    let u0 = [9.98, 0.01, 0.01];
    let t_end = 2.0;
    let reference = rk4(&pds, &u0, t_end, 1e-4);
    for name in ["mpe", "mprk22(alpha=1)", "mpssprk3", "mpdec3", "mpdec5"] {
        let id: IntegratorId = name.parse().unwrap();
        let integrator = Integrator::new(id).unwrap();
        let mut errors = Vec::new();
        for steps in [40usize, 80] {
            let dt = t_end / steps as f64;
            let mut u = u0.to_vec();
            for _ in 0..steps {
                u = integrator.step(&pds, &u, dt, StepOptions::default()).unwrap().state;
            }
            errors.push(max_abs_diff(&u, &reference));
        }
        let rate = (errors[0] / errors[1]).log2();
        assert!(rate > id.order() as f64 - 0.5, "{name}: errors {errors:?}, rate {rate}");
    }
}
