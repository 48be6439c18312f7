use sparsepair_core::dictionaries::{build_dirac_fourier, build_mub_concat, build_random_pair};
use sparsepair_core::probabilistic::{
    appendix_g_params, check_theorem4_conditions, planted_instance, sample_support, tropp_two_onb_thresholds, CoefficientModel,
    RandomSupportSpec,
};
use sparsepair_core::solvers::{self, BpOptions, OMP_DEFAULT_TOL};
use sparsepair_core::spark::{spark_bruteforce_concat, SparkOutcome};
use sparsepair_core::thresholds::{threshold_pair_bp_omp, threshold_pair_p0};
use sparsepair_core::uncertainty::{dirac_fourier_comb, exhaustive_uncertainty_scan, verify_representation};

#[test]
fn second_case_of_the_bp_threshold() {
    let t = threshold_pair_bp_omp(0.0, 0.8).unwrap().value;
    assert!((t - 1.15625).abs() < 1e-12);
}

#[test]
fn comb_is_a_dual_representation_meeting_the_bound() {
    let c = build_dirac_fourier(16).unwrap();
    let rep = dirac_fourier_comb(&c).unwrap();
    assert_eq!((rep.na(), rep.nb()), (4, 4));
    assert!(verify_representation(&c, &rep).unwrap());
}

#[test]
fn scan_and_spark_agree_on_dirac_fourier() {
    let c = build_dirac_fourier(4).unwrap();
    let scan = exhaustive_uncertainty_scan(&c, 2, 2).unwrap();
    assert!(scan.violations().is_empty());
    let SparkOutcome::Exact(cert) = spark_bruteforce_concat(&c, 5).unwrap() else { panic!("spark must terminate") };
    // a dependent set of size 4 splits as (2, 2), the first achieved class
    assert_eq!(cert.spark, 4);
    assert!(scan.row(2, 2).unwrap().achieved);
    assert!(!scan.row(1, 2).unwrap().achieved);
}

#[test]
fn planted_recovery_below_both_thresholds() {
    let c = build_random_pair(8, 8, 8, 11).unwrap();
    let limit = threshold_pair_p0(&c.triple()).unwrap().value.min(threshold_pair_bp_omp(c.mu_b(), c.mu()).unwrap().value);
    assert!(limit > 1.0);
    let spec = RandomSupportSpec::new(vec![3], 0, 5);
    for i in 0..20 {
        let inst = planted_instance(&c, &spec, CoefficientModel::UniformPhase, i);
        let d = c.joint();
        let bp = solvers::basis_pursuit(d, &inst.y, BpOptions::default()).unwrap();
        let omp = solvers::omp(d, &inst.y, c.dim(), OMP_DEFAULT_TOL).unwrap();
        assert!(solvers::recovery_success(&bp.recovered, &inst.x));
        assert!(solvers::recovery_success(&omp.recovered, &inst.x));
    }
}

#[test]
fn support_sampling_is_reproducible() {
    let spec = RandomSupportSpec::new(vec![0, 2], 3, 42);
    let s = sample_support(&spec, 25);
    assert_eq!(s, sample_support(&spec, 25));
    assert_eq!(s.a, vec![0, 2]);
    assert_eq!(s.b.len(), 3);
    assert!(s.b.iter().all(|&j| j < 25));
    let all = sample_support(&RandomSupportSpec::new(vec![], 25, 1), 25);
    let mut b = all.b.clone();
    b.sort_unstable();
    assert_eq!(b, (0..25).collect::<Vec<_>>());
}

#[test]
fn random_support_conditions_fail_at_desk_scale() {
    let c = build_mub_concat(5, 1).unwrap();
    let r = check_theorem4_conditions(&c, 1, 1, 1.0, 0.5).unwrap();
    assert!(!r.cond_a.holds);
    assert!((r.cond_a.lhs - 6.0 * 2f64.sqrt() * (30f64.ln() / 5.0).sqrt()).abs() < 1e-9);
    let g = appendix_g_params(&c, 1, 1, 1.0).unwrap();
    assert!((g.u - (4.0 * 30f64.ln()).sqrt()).abs() < 1e-12);
    assert!((g.bound - 1.0 / 30.0).abs() < 1e-12);
    assert!(!g.threshold_ok());
}

#[test]
fn large_scale_constants_do_not_bind_at_small_n() {
    let t = tropp_two_onb_thresholds(0.125, 128, 1.0).unwrap();
    assert!((t.p0 - 0.004212 * 64.0 / 128f64.ln()).abs() < 1e-12);
    assert!(t.bp <= t.p0);
    assert!(tropp_two_onb_thresholds(0.5, 2, 1.0).is_err());
}
