use proptest::prelude::*;
use resilience::reach::{malfunctioning_reach_time, nominal_reach_time, time_ratio};
use resilience::resilience::{
    full_report, lambda_star, multi_column_assessment, quantitative_resilience, r_max, resilience_verdict,
    sweep_rq_upper_bound, MULTI_ACTUATOR_MARKER,
};
use resilience::{split, Matrix, Options, ReachTime, SystemSpec, Verdict};

fn t(r: ReachTime) -> f64 {
    match r {
        ReachTime::Finite(v) => v,
        ReachTime::Infinite => f64::INFINITY,
    }
}

/// Plant whose last column is a short combination of the others, so that
/// losing it is usually survivable.
fn resilient_candidate() -> impl Strategy<Value = SystemSpec> {
    (1usize..=4, 2usize..=3).prop_flat_map(|(n, extra)| {
        let m = n + extra - 1;
        (prop::collection::vec(-1.0f64..1.0, n * m), prop::collection::vec(-0.3f64..0.3, m), 0.5f64..2.0).prop_map(
            move |(data, coef, u_max)| {
                let b = Matrix::new(n, m, data).unwrap();
                let c = b.mul_vec(&coef);
                let cols: Vec<Vec<f64>> = (0..m).map(|j| b.column(j)).chain(std::iter::once(c)).collect();
                SystemSpec::new(Matrix::from_columns(n, &cols).unwrap(), u_max).unwrap()
            },
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn r_max_equals_reach_time_ratio_at_the_lost_column(sys in resilient_candidate()) {
        let ms = split(&sys, &[sys.num_inputs() - 1]).unwrap();
        prop_assume!(resilience_verdict(&ms).unwrap() == Verdict::Resilient);
        let c = ms.c().column(0);
        prop_assume!(c.iter().any(|v| *v != 0.0));
        let tn = t(nominal_reach_time(&sys, &c).unwrap());
        let tm = t(malfunctioning_reach_time(&ms, &c).unwrap().0);
        let rm = r_max(&ms).unwrap();
        prop_assert!((rm - tn / tm).abs() <= 1e-6 * rm.abs(), "r_max {rm} vs {}", tn / tm);
        let rq = quantitative_resilience(&ms).unwrap();
        prop_assert!((rq - 1.0 / time_ratio(&ms, &c).unwrap().as_f64()).abs() <= 1e-6 * rq);
    }

    #[test]
    fn planar_sweep_never_undercuts_r_q(sys in resilient_candidate(), phase in 0.0f64..std::f64::consts::TAU) {
        prop_assume!(sys.n() == 2);
        let ms = split(&sys, &[sys.num_inputs() - 1]).unwrap();
        let rq = quantitative_resilience(&ms).unwrap();
        let (s, c) = phase.sin_cos();
        let bound = sweep_rq_upper_bound(&ms, &[c, s], &[-s, c], 90, &Options::default()).unwrap();
        prop_assert!(bound >= rq - 1e-9, "sweep bound {bound} below r_q {rq}");
    }

    #[test]
    fn r_max_is_scale_and_bound_invariant(sys in resilient_candidate(), s in 0.1f64..10.0) {
        let j = sys.num_inputs() - 1;
        let base = r_max(&split(&sys, &[j]).unwrap()).unwrap();
        let scaled = r_max(&split(&sys.scaled(s).unwrap(), &[j]).unwrap()).unwrap();
        let doubled = r_max(&split(&sys.with_u_max(2.0 * sys.u_max()).unwrap(), &[j]).unwrap()).unwrap();
        prop_assert!((base - scaled).abs() <= 1e-7 * (1.0 + base.abs()));
        prop_assert!((base - doubled).abs() <= 1e-7 * (1.0 + base.abs()));
    }
}

#[test]
fn planar_sweep_through_the_lost_column_recovers_r_q() {
    let sys = SystemSpec::from_rows(&[[0.8, -0.9, 0.5, -0.5, 0.0], [0.9, -0.8, -0.4, 0.4, 0.1]], 1.0).unwrap();
    for j in 0..5 {
        let ms = split(&sys, &[j]).unwrap();
        let c = ms.c().column(0);
        let norm = (c[0] * c[0] + c[1] * c[1]).sqrt();
        let e1 = [c[0] / norm, c[1] / norm];
        let bound = sweep_rq_upper_bound(&ms, &e1, &[-e1[1], e1[0]], 720, &Options::default()).unwrap();
        let rq = quantitative_resilience(&ms).unwrap();
        assert!((bound - rq).abs() <= 1e-9, "column {j}: {bound} vs {rq}");
    }
}

#[test]
fn zero_column_is_fully_resilient() {
    let sys = SystemSpec::from_rows(&[[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]], 1.0).unwrap();
    let ms = split(&sys, &[2]).unwrap();
    assert_eq!(lambda_star(&ms).unwrap(), f64::INFINITY);
    assert_eq!(r_max(&ms).unwrap(), 1.0);
    assert_eq!(quantitative_resilience(&ms).unwrap(), 1.0);
}

#[test]
fn uncontrollable_plant_is_flagged_per_column() {
    let sys = SystemSpec::from_rows(&[[1.0, 2.0, 3.0], [2.0, 4.0, 6.0]], 1.0).unwrap();
    let report = full_report(&sys).unwrap();
    assert!(!report.controllable);
    assert!(report.per_column.iter().all(|c| c.verdict == Verdict::NotControllable && c.r_q == 0.0));
}

#[test]
fn multi_column_loss_is_marked_heuristic() {
    let sys = SystemSpec::from_rows(&[[1.0, 0.0, 1.0, 0.1, 0.0], [0.0, 1.0, 1.0, 0.0, 0.1]], 1.0).unwrap();
    let a = multi_column_assessment(&split(&sys, &[3, 4]).unwrap()).unwrap();
    assert!(a.heuristic);
    assert_eq!(a.marker, MULTI_ACTUATOR_MARKER);
    assert_eq!(a.verdict, Verdict::Resilient);
    assert_eq!(quantitative_resilience(&split(&sys, &[3, 4]).unwrap()).unwrap_err().kind(), "MultipleColumns");
}

#[test]
fn report_is_deterministic_across_thread_counts() {
    let sys = SystemSpec::from_rows(&[[0.8, -0.9, 0.5, -0.5, 0.0], [0.9, -0.8, -0.4, 0.4, 0.1]], 1.0).unwrap();
    let serial = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap().install(|| full_report(&sys).unwrap());
    let parallel = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap().install(|| full_report(&sys).unwrap());
    assert_eq!(serial.to_json(), parallel.to_json());
}
