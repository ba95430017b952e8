//! Perturbative levels against exact diagonalization of the truncated
//! one-dimensional Hamiltonian.

use serde::Serialize;

use super::Oscillator1d;
use crate::eigensolve::{dense_eigen, rayleigh_quotient};
use crate::error::{Error, Result};
use crate::hamiltonian::{AssemblyLimits, HamiltonianMatrix, OscillatorConfig};

/// `E_r − ε(r+1)²` for the `N`-level matrix of `cfg`.
///
/// The matrix is assembled with `ε(r+1)²` already subtracted from the
/// diagonal and the eigenvalue is refined by a double-double Rayleigh
/// quotient, so the offset keeps nearly full relative precision even when
/// it is many orders of magnitude below `‖H‖`.
pub fn level_offset(cfg: &OscillatorConfig, r: usize) -> Result<f64> {
    Oscillator1d::from_config(cfg)?;
    if r >= cfg.n() {
        return Err(Error::Domain(format!("level {r} needs N > {r}, got N = {}", cfg.n())));
    }
    let shift = cfg.epsilon() * ((r + 1) * (r + 1)) as f64;
    let h = HamiltonianMatrix::assemble_dense_shifted(cfg, shift, &AssemblyLimits::default())?;
    let spec = dense_eigen(&h)?;
    let v = &spec.eigenvectors.as_ref().expect("dense solver returns eigenvectors")[r];
    rayleigh_quotient(h.as_dense().expect("assembled dense"), v)
}

/// Dense level `E_r` of the `N`-level one-dimensional matrix.
pub fn level_energy(cfg: &OscillatorConfig, r: usize) -> Result<f64> {
    Ok(cfg.epsilon() * ((r + 1) * (r + 1)) as f64 + level_offset(cfg, r)?)
}

/// `|E_r(dense) − Σ_{m'≤m} E_r^(m')|`, formed without cancelling `ε(r+1)²`.
pub fn series_deviation(cfg: &OscillatorConfig, r: usize, m: usize) -> Result<f64> {
    let osc = Oscillator1d::from_config(cfg)?;
    Ok((level_offset(cfg, r)? - osc.series_shift(r, m)?).abs())
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn fit_loglog_slope(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() {
        return Err(Error::DimensionMismatch { expected: xs.len(), actual: ys.len() });
    }
    if xs.len() < 2 {
        return Err(Error::Domain("a slope needs at least two points".into()));
    }
    if xs.iter().chain(ys).any(|&v| !(v > 0.0 && v.is_finite())) {
        return Err(Error::Domain("log-log fit needs positive finite data".into()));
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Domain("log-log fit needs distinct x values".into()));
    }
    Ok(sxy / sxx)
}

/// One level of the perturbation-versus-diagonalization table.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ComparisonRow {
    pub r: usize,
    pub e0: f64,
    pub e1: f64,
    pub e2: f64,
    pub e3: f64,
    pub series: f64,
    pub dense: f64,
    /// `dense − series`
    pub diff: f64,
}

/// Rows for levels `0..levels` of the one-dimensional `cfg`.
pub fn comparison_table(cfg: &OscillatorConfig, levels: usize) -> Result<Vec<ComparisonRow>> {
    let osc = Oscillator1d::from_config(cfg)?;
    if levels > cfg.n() {
        return Err(Error::Domain(format!("{levels} levels requested from an N = {} basis", cfg.n())));
    }
    (0..levels)
        .map(|r| {
            let offset = level_offset(cfg, r)?;
            let shift = osc.series_shift(r, 3)?;
            let e0 = osc.e0(r);
            Ok(ComparisonRow {
                r,
                e0,
                e1: osc.e1(r),
                e2: osc.e2_closed(r),
                e3: osc.e3_closed(r),
                series: e0 + shift,
                dense: e0 + offset,
                diff: offset - shift,
            })
        })
        .collect()
}

pub fn rows_to_csv(rows: &[ComparisonRow]) -> String {
    let mut out = String::from("r,E0,E1,E2,E3,series,dense,diff\n");
    for row in rows {
        out.push_str(&format!(
            "{},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.6e}\n",
            row.r, row.e0, row.e1, row.e2, row.e3, row.series, row.dense, row.diff
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(n: usize, lambda: f64) -> OscillatorConfig {
        OscillatorConfig::new(1, n, lambda).unwrap()
    }

    #[test]
    fn free_box_is_exact() {
        let rows = comparison_table(&cfg(20, 0.0), 6).unwrap();
        for row in rows {
            let exact = ((row.r + 1) * (row.r + 1)) as f64;
            assert_eq!(row.series, exact);
            assert_eq!(row.dense, exact);
            assert_eq!(row.diff, 0.0);
        }
    }

    #[test]
    fn offset_matches_plain_dense() {
        let c = cfg(30, 1.5);
        let plain = dense_eigen(&HamiltonianMatrix::assemble_dense(&c).unwrap()).unwrap();
        for r in 0..5 {
            assert!((level_energy(&c, r).unwrap() - plain.eigenvalues[r]).abs() < 1e-12);
        }
    }

    #[test]
    fn ground_level_close_to_series_at_half_coupling() {
        let c = cfg(60, 0.5);
        let rows = comparison_table(&c, 6).unwrap();
        assert!(rows[0].diff.abs() < 1e-4);
        // the truncation error scales like λ⁸
        assert!(rows[0].diff.abs() < 0.01 * 0.5f64.powi(8));
        let csv = rows_to_csv(&rows);
        assert!(csv.starts_with("r,E0,E1,E2,E3,series,dense,diff\n"));
        assert_eq!(csv.lines().count(), 7);
    }

    #[test]
    fn strong_coupling_leaves_perturbative_regime() {
        let weak = comparison_table(&cfg(60, 0.5), 1).unwrap()[0].diff.abs();
        let strong = comparison_table(&cfg(60, 2.0), 1).unwrap()[0].diff.abs();
        assert!(strong > 100.0 * weak);
    }

    #[test]
    fn slope_fit() {
        let xs = [0.1, 0.2, 0.4];
        let ys: Vec<f64> = xs.iter().map(|x: &f64| 3.0 * x.powi(6)).collect();
        assert!((fit_loglog_slope(&xs, &ys).unwrap() - 6.0).abs() < 1e-12);
        assert!(fit_loglog_slope(&xs, &[1.0, 0.0, 1.0]).is_err());
        assert!(fit_loglog_slope(&[1.0], &[1.0]).is_err());
    }

    #[test]
    fn perturbation_is_one_dimensional() {
        let c = OscillatorConfig::new(2, 6, 1.0).unwrap();
        assert!(level_offset(&c, 0).is_err());
        assert!(comparison_table(&c, 1).is_err());
        assert!(level_offset(&cfg(4, 1.0), 4).is_err());
    }
}
