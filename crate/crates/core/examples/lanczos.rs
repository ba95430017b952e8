//! Lowest states of a three-dimensional box too large to diagonalize densely.

use std::time::Instant;

use cho_spectra::eigensolve::{lanczos_lowest, LanczosOptions};
use cho_spectra::hamiltonian::{HamiltonianMatrix, OscillatorConfig};

fn main() -> cho_spectra::Result<()> {
    let cfg = OscillatorConfig::new(3, 20, 2.0)?;
    let h = HamiltonianMatrix::assemble_sparse(&cfg)?;
    println!("N^d = {}", cfg.dim());

    let start = Instant::now();
    let spec = lanczos_lowest(&h, &LanczosOptions::new(8).tol(1e-9))?;
    println!(
        "{} Krylov vectors, converged: {}, {:.2?}",
        spec.metadata.iterations,
        spec.metadata.converged,
        start.elapsed()
    );
    for (e, r) in spec.eigenvalues.iter().zip(&spec.residuals) {
        println!("  {e:>14.10}  residual {r:.1e}");
    }
    for level in spec.levels() {
        println!("level {:.8} has multiplicity {}", level.energy, level.multiplicity);
    }
    Ok(())
}
