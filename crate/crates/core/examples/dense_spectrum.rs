//! Full spectrum of a small two-dimensional box with degeneracies.

use cho_spectra::eigensolve::dense_eigen;
use cho_spectra::hamiltonian::{HamiltonianMatrix, OscillatorConfig};

fn main() -> cho_spectra::Result<()> {
    for lambda in [0.0, 1.0, 4.0] {
        let cfg = OscillatorConfig::new(2, 8, lambda)?;
        let spec = dense_eigen(&HamiltonianMatrix::assemble_dense(&cfg)?)?;
        println!("lambda = {lambda} (max residual {:.1e})", spec.max_residual());
        for level in spec.levels().iter().take(6) {
            println!("  {:>12.8} x{}", level.energy, level.multiplicity);
        }
    }
    Ok(())
}
