//! Box eigenfunctions, their overlaps, and the potential matrix element by
//! Gauss–Legendre quadrature.

use cho_spectra::basis::{
    kinetic_quadrature, phi, potential_quadrature, quad_inner, BoxGeometry, GaussLegendre, DEFAULT_QUADRATURE_ORDER,
};
use cho_spectra::hamiltonian::OscillatorConfig;

fn main() -> cho_spectra::Result<()> {
    let geom = BoxGeometry::new(2.0)?;
    let rule = GaussLegendre::new(DEFAULT_QUADRATURE_ORDER)?;

    println!("overlaps <phi_r|phi_s> on [-2, 2]");
    for r in 0..4 {
        let row: Vec<String> = (0..4)
            .map(|s| {
                let ip = quad_inner(|x| phi(r, x, &geom).unwrap(), |x| phi(s, x, &geom).unwrap(), &geom, rule.order());
                format!("{:>9.2e}", ip.unwrap())
            })
            .collect();
        println!("  {}", row.join(" "));
    }

    println!("\nkinetic elements in units of epsilon");
    for r in 0..5 {
        println!("  r = {r}: {:.12}", kinetic_quadrature(r, &geom, &rule));
    }

    let lambda = 1.0;
    let cfg = OscillatorConfig::new(1, 8, lambda)?;
    println!("\nV_st: closed form vs quadrature (lambda = {lambda})");
    for (s, t) in [(0, 0), (0, 2), (1, 3), (2, 6), (0, 1)] {
        let quad = potential_quadrature(s, t, lambda, &geom, &rule, true);
        println!("  ({s}, {t}): {:+.15} {:+.15}", cfg.v_element(s, t)?, quad);
    }
    Ok(())
}
