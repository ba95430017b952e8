//! Order of the perturbation series and variational convergence in N.

use cho_spectra::eigensolve::dense_eigen;
use cho_spectra::hamiltonian::{HamiltonianMatrix, OscillatorConfig};
use cho_spectra::perturbation::{fit_loglog_slope, series_deviation};

fn main() -> cho_spectra::Result<()> {
    let lambdas = [0.1, 0.2, 0.4];
    for m in 1..=3 {
        let deltas = lambdas
            .iter()
            .map(|&l| series_deviation(&OscillatorConfig::new(1, 60, l)?, 0, m))
            .collect::<cho_spectra::Result<Vec<_>>>()?;
        let slope = fit_loglog_slope(&lambdas, &deltas)?;
        let shown: Vec<String> = deltas.iter().map(|d| format!("{d:.2e}")).collect();
        println!("m = {m}: deviations [{}], slope {slope:.3}", shown.join(", "));
    }

    println!("\nground level at lambda = 2");
    for n in [4, 8, 16, 32, 64] {
        let cfg = OscillatorConfig::new(1, n, 2.0)?;
        let e = dense_eigen(&HamiltonianMatrix::assemble_dense(&cfg)?)?.eigenvalues[0];
        println!("  N = {n:>2}: {e:.15}");
    }
    Ok(())
}
