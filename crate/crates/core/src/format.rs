//! Locale-independent text output.

use std::io::Write;

use crate::reactor::ChemTrace;

pub const TRACE_HEADER: &str = "t,P1,P2,P3,S1,S2,S3,Sm1";

/// C `printf("%.*g", precision, x)`.
pub fn fmt_g(x: f64, precision: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let p = precision.max(1);
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{:.*e}", p - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= p as i32 {
        let mantissa = strip_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (p as i32 - 1 - exp) as usize;
        strip_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Writes `t,P1,P2,P3,S1,S2,S3,Sm1` rows with `%.9g` numbers.
pub fn write_trace_csv<W: Write>(trace: &ChemTrace, mut out: W) -> std::io::Result<()> {
    writeln!(out, "{TRACE_HEADER}")?;
    for (row, sm1) in trace.rows.iter().zip(&trace.influx1) {
        let [p1, p2, p3] = row.products;
        let [s1, s2, s3] = row.substrates;
        let cells = [row.t, p1, p2, p3, s1, s2, s3, *sm1].map(|v| fmt_g(v, 9));
        writeln!(out, "{}", cells.join(","))?;
    }
    Ok(())
}
