//! Linearized spectrum of the ring oscillator as the substrate level varies.

use molres::dynamics::{eigen_closed_form, jacobian, sustained_substrate_level};
use molres::reactor::ReactorParams;

fn main() -> molres::Result<()> {
    let p = ReactorParams::default();
    let s_star = sustained_substrate_level(&p)?;
    println!("sustained level S* = {s_star:.1} nM");
    println!("{:>10} {:>12} {:>12} {:>10} {:>10}", "S (nM)", "lambda1", "Re l23", "period", "regime");
    for f in [0.8, 0.9, 0.95, 1.0, 1.02, 1.05, 1.2] {
        let s = f * s_star;
        let e = eigen_closed_form(&p, &[s; 3])?;
        println!(
            "{s:>10.0} {:>12.4e} {:>12.4e} {:>10.1} {:>10}",
            e.lambda1, e.lambda23_real, e.period, e.regime
        );
    }

    // Unequal levels only enter through their geometric mean.
    let s = [4.0e4, 6.0e4, 9.0e4];
    let e = eigen_closed_form(&p, &s)?;
    let numeric = jacobian(&p, &s)?.complex_eigenvalues();
    println!("\nS = {s:?}: closed form {:.6e} ± {:.6e}i", e.lambda23_real, e.lambda23_imag);
    for z in numeric.iter() {
        println!("  numeric {:.6e} {:+.6e}i", z.re, z.im);
    }
    Ok(())
}
