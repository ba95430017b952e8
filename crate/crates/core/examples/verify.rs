use cho_spectra::verify::run_all;

fn main() {
    let results = run_all();
    for r in &results {
        println!("{r}");
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    println!("{} checks, {failed} failed", results.len());
    std::process::exit(i32::from(failed > 0));
}
