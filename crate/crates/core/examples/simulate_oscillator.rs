//! Integrates the unperturbed three-oscillator reactor and reports the `P₁` peaks.
//!
//! `cargo run --example simulate_oscillator [t_end] > trace.csv`

use molres::config::ExperimentConfig;
use molres::dynamics::{classify_regime, RegimeOptions};
use molres::format::write_trace_csv;
use molres::reactor::{integrate, InfluxProfile, StepConfig};

fn main() -> molres::Result<()> {
    let t_end: f64 = std::env::args().nth(1).map_or(4500.0, |s| s.parse().expect("t_end in seconds"));
    let cfg = ExperimentConfig::default();
    let influx = InfluxProfile::constant([cfg.influx_base; 3]);
    let trace = integrate(&cfg.initial, &cfg.reactor, &influx, t_end, StepConfig::default())?;

    let report = classify_regime(&trace, &RegimeOptions::default());
    eprintln!("{} peaks of P1 after the transient", report.peak_times.len());
    for (t, (p, a)) in report.peak_times.iter().zip(report.peak_values.iter().zip(&report.amplitudes)) {
        eprintln!("  t={t:>6.0} s  P1={p:>8.1} nM  swing={a:>7.1} nM");
    }
    if let Some(period) = report.mean_period() {
        eprintln!("mean period {period:.1} s, regime {:?}", report.regime);
    }
    write_trace_csv(&trace, std::io::stdout().lock())?;
    Ok(())
}
