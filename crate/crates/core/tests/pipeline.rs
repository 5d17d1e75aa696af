use nagao_core::estimator::{self, FitBasis, DEFAULT_S_GRID};
use nagao_core::parse::parse_t_poly;
use nagao_core::{
    corpus, fibercount, shioda, Convention, FamilyModel, Mode, TraceEngine, Weierstrass,
};
use proptest::prelude::*;

fn short_family(a4: &str, a6: &str) -> Option<FamilyModel> {
    let w = Weierstrass::short(parse_t_poly(a4).ok()?, parse_t_poly(a6).ok()?);
    FamilyModel::elliptic("random", w).ok()
}

#[test]
fn smooth_convention_shifts_b_by_vertical() {
    let m = corpus::legendre();
    let w = TraceEngine::new(m.clone(), Convention::WeierstrassFiber, Mode::Strict).unwrap();
    let s = TraceEngine::new(m, Convention::SmoothModelFiber, Mode::Strict).unwrap();
    let (rw, rs) = (
        w.records_up_to(300, 1).unwrap(),
        s.records_up_to(300, 1).unwrap(),
    );
    for (a, b) in rw.iter().zip(&rs) {
        assert_eq!(a.a, b.a);
        assert_eq!(
            b.b_avg - a.b_avg,
            nagao_core::Exact::from_integer(b.vertical as i128)
        );
    }
}

#[test]
fn estimators_on_short_streams() {
    let e = TraceEngine::new(
        corpus::x3_x_t2(),
        Convention::WeierstrassFiber,
        Mode::Strict,
    )
    .unwrap();
    let recs = e.records_up_to(1500, 1).unwrap();
    let good = e.good_primes_up_to(1500);
    let series = estimator::nagao_series(
        &recs,
        &good,
        &[500, 1500],
        &DEFAULT_S_GRID,
        FitBasis::ReferencePrimeSum,
    )
    .unwrap();
    // the combined series carries the extra pole from the B term
    assert!(
        (series.s_combined[1] - series.s_dirichlet[1] - 1.0).abs() < 0.1,
        "{series:?}"
    );
    assert!(series.s_tauberian[1] > 0.5);
    let ledger = shioda::ledger_for(e.model()).unwrap();
    assert!(recs.iter().all(|r| r.vertical <= ledger.sum_mv_minus_1));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn random_families_count_consistently(
        c in proptest::collection::vec(-3i64..=3, 4),
        pi in 0usize..12,
    ) {
        let a4 = format!("{} + {}*t", c[0], c[1]);
        let a6 = format!("{} + {}*t + t^2", c[2], c[3]);
        let model = short_family(&a4, &a6);
        prop_assume!(model.is_some());
        let model = model.unwrap();
        let e = TraceEngine::new(model, Convention::WeierstrassFiber, Mode::Lenient);
        prop_assume!(e.is_ok());
        let e = e.unwrap();
        let primes = e.good_primes_up_to(60);
        prop_assume!(pi < primes.len());
        let red = e.reduce(primes[pi]).unwrap();
        prop_assert!(fibercount::total_count(&red).is_ok());
        let sweep = fibercount::sweep(&red).unwrap();
        prop_assert_eq!(sweep.hasse_violations, 0);
        prop_assert!((sweep.max_smooth_abs_a.pow(2) as u64) <= 4 * primes[pi]);
    }
}
