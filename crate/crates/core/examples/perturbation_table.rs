//! Perturbative levels of the one-dimensional box against exact
//! diagonalization.

use cho_spectra::hamiltonian::OscillatorConfig;
use cho_spectra::perturbation::{comparison_table, rows_to_csv, Oscillator1d};

fn main() -> cho_spectra::Result<()> {
    let osc = Oscillator1d::new(1.0)?;
    println!("lambda = 1 corrections of the ground level");
    println!("  E1 = {:+.15e}", osc.e1(0));
    println!("  E2 = {:+.15e}", osc.e2_closed(0));
    println!("  E3 = {:+.15e}", osc.e3_closed(0));

    let est = osc.e2_direct(0, 100_000)?;
    println!("  E2 by direct summation = {:+.15e} (tail {:.1e})", est.value, est.tail_bound);

    let cfg = OscillatorConfig::new(1, 60, 0.5)?;
    println!("\n{}", rows_to_csv(&comparison_table(&cfg, 6)?));
    Ok(())
}
