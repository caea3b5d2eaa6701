use molres::config::ExperimentConfig;
use molres::dynamics::{classify_regime, eigen_closed_form, RegimeOptions};
use molres::reactor::{integrate, ChemState, InfluxProfile, ReactorParams, StepConfig};
use molres::benchmark::simulate_trial;
use proptest::prelude::*;

fn baseline(t_end: f64) -> molres::reactor::ChemTrace {
    let cfg = ExperimentConfig::default();
    integrate(&cfg.initial, &cfg.reactor, &InfluxProfile::constant([cfg.influx_base; 3]), t_end, StepConfig::default())
        .unwrap()
}

#[test]
fn totals_relax_exponentially() {
    let p = ReactorParams::default();
    let start = ChemState { t: 0.0, products: [300.0, 0.0, 4000.0], substrates: [100.0, 50.0, 0.0] };
    let influx = [2e-6, 5.45e-6, 9e-6];
    let trace = integrate(&start, &p, &InfluxProfile::constant(influx), 1000.0, StepConfig::default()).unwrap();
    let k = p.efflux / p.volume;
    for row in &trace.rows {
        for i in 0..3 {
            let c_inf = 1e9 * influx[i] / p.efflux;
            let c0 = start.products[i] + start.substrates[i];
            let exact = c_inf + (c0 - c_inf) * (-k * row.t).exp();
            let total = row.products[i] + row.substrates[i];
            assert!((total - exact).abs() <= 1e-9 * exact, "channel {i} at t={}", row.t);
        }
    }
}

#[test]
fn baseline_never_clamps() {
    let trace = baseline(4500.0);
    assert_eq!(trace.guard_violations, 0);
    assert_eq!(trace.negative_clamps, 0);
    let peak = trace.rows.iter().flat_map(|r| r.products).fold(0.0, f64::max);
    assert!(peak < 2500.0, "max product {peak}");
}

#[test]
fn empirical_period_matches_linearization() {
    let trace = baseline(4500.0);
    let report = classify_regime(&trace, &RegimeOptions::default());
    let measured = report.mean_period().expect("oscillates");

    let after: Vec<_> = trace.rows.iter().filter(|r| r.t >= 500.0).collect();
    let mean_s: [f64; 3] =
        std::array::from_fn(|i| after.iter().map(|r| r.substrates[i]).sum::<f64>() / after.len() as f64);
    let predicted = eigen_closed_form(&ReactorParams::default(), &mean_s).unwrap().period;
    assert!((measured / predicted - 1.0).abs() < 0.15, "measured {measured}, predicted {predicted}");
}

#[test]
fn trial_traces_are_reproducible() {
    let cfg = ExperimentConfig::default();
    let a = simulate_trial(&cfg, 42).unwrap();
    let b = simulate_trial(&cfg, 42).unwrap();
    assert_eq!(a.trace, b.trace);
    let c = simulate_trial(&cfg, 43).unwrap();
    assert_ne!(a.trace.rows, c.trace.rows);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn concentrations_stay_nonnegative(
        p in proptest::array::uniform3(0.0f64..3000.0),
        s in proptest::array::uniform3(0.0f64..80000.0),
        influx in proptest::array::uniform3(0.0f64..2e-5),
    ) {
        let start = ChemState { t: 0.0, products: p, substrates: s };
        let trace = integrate(&start, &ReactorParams::default(), &InfluxProfile::constant(influx), 300.0, StepConfig::default()).unwrap();
        for row in &trace.rows {
            prop_assert!(row.products.iter().chain(&row.substrates).all(|v| *v >= 0.0 && v.is_finite()));
        }
    }
}
