//! Assemble the Hamiltonian in each storage format and write it as a Matrix
//! Market file.
//!
//! ```text
//! cargo run --example assemble_export -- 2 6 1.0 h.mtx
//! ```

use std::fs::File;
use std::io::BufWriter;

use cho_spectra::hamiltonian::{market, HamiltonianMatrix, OscillatorConfig, SparsityPattern};
use cho_spectra::linalg::{relative_max_diff, SymmetricOperator};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let d = args.first().map_or(Ok(2), |s| s.parse())?;
    let n = args.get(1).map_or(Ok(6), |s| s.parse())?;
    let lambda = args.get(2).map_or(Ok(1.0), |s| s.parse())?;
    let path = args.get(3).cloned().unwrap_or_else(|| "hamiltonian.mtx".into());

    let cfg = OscillatorConfig::new(d, n, lambda)?;
    let pattern = SparsityPattern::of(&cfg);
    println!("d = {d}, N = {n}, lambda = {lambda}: {} states, {} nonzeros", cfg.dim(), pattern.nnz());

    let dense = HamiltonianMatrix::assemble_dense(&cfg)?;
    let sparse = HamiltonianMatrix::assemble_sparse(&cfg)?;
    let free = HamiltonianMatrix::matrix_free(&cfg);

    let v: Vec<f64> = (0..cfg.dim()).map(|i| 1.0 / (i + 1) as f64).collect();
    let y = dense.matvec(&v)?;
    println!("sparse vs dense matvec:      {:.1e}", relative_max_diff(&y, &sparse.matvec(&v)?));
    println!("matrix-free vs dense matvec: {:.1e}", relative_max_diff(&y, &free.matvec(&v)?));

    let written = market::write(BufWriter::new(File::create(&path)?), sparse.as_sparse().unwrap(), Some(&cfg))?;
    println!("wrote {written} entries to {path}");
    Ok(())
}
