//! A stiff oscillator barely feels the walls: its levels approach ħω(r + ½).

use cho_spectra::eigensolve::dense_eigen;
use cho_spectra::hamiltonian::{HamiltonianMatrix, PhysicalUnits};

fn main() -> cho_spectra::Result<()> {
    let units = PhysicalUnits::new(1.0, 1.0, 1.0, 80.0)?;
    let cfg = units.config(1, 200)?;
    println!("epsilon = {:.6}, lambda = {:.6}", units.epsilon(), cfg.lambda());

    let spec = dense_eigen(&HamiltonianMatrix::assemble_dense(&cfg)?)?;
    for r in 0..5 {
        let physical = spec.eigenvalues[r] * units.epsilon();
        let free = units.hbar * units.omega * (r as f64 + 0.5);
        println!("r = {r}: {physical:>12.6} vs {free:>8.2} ({:+.1e} relative)", physical / free - 1.0);
    }
    Ok(())
}
