//! Label ↔ quantum-number conversion and the α/c predicates.

use cho_spectra::indexing::Shape;

fn main() -> cho_spectra::Result<()> {
    let shape = Shape::new(3, 2)?;
    println!("N = {}, d = {}, N^d = {}", shape.n(), shape.d(), shape.size());

    for s in 0..shape.size() {
        let m = shape.decompose(s)?;
        println!("s = {s}: {:?}", m.components());
    }

    let (s, t) = (1, 7);
    println!("\nlabels {s} and {t}");
    println!("  axes in agreement: {}", shape.agreement(s, t)?);
    for axis in 1..=shape.d() {
        println!(
            "  axis {axis}: alpha = {}, c = {}",
            shape.alpha_element(axis, s, t)?,
            shape.c_element(axis, s, t)?
        );
    }
    Ok(())
}
