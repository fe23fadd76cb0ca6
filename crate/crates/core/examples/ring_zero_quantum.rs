//! Zero-quantum dynamics of an N-spin ring: prints the coherence curves as
//! CSV and lists the zeros of the non-diagonal 0Q intensity.
//!
//!     cargo run --example ring_zero_quantum -- 4 > ring4.csv

use mqnmr::cli::write_scan_csv;
use mqnmr::{equilibrium_state, ring_couplings, trace_iz_squared, Model, Threshold, ZeroSearch};

fn main() -> mqnmr::Result<()> {
    let n: usize = std::env::args().nth(1).map_or(4, |a| a.parse().expect("spin count"));
    let model = Model::new(ring_couplings(n, 1.0)?)?;
    let rho = equilibrium_state(model.basis());

    let times: Vec<f64> = (0..=1000).map(|i| i as f64 * 0.01).collect();
    let spectra = model.scan(&rho, &times, trace_iz_squared(model.basis()))?;
    write_scan_csv(std::io::stdout().lock(), &spectra, &times).expect("stdout");

    match model.find_nd0q_zeros(&rho, 10.0, 0.01, Threshold::default())? {
        ZeroSearch::IdenticallyZero => eprintln!("non-diagonal 0Q intensity vanishes identically"),
        ZeroSearch::Zeros(z) => eprintln!("non-diagonal 0Q zeros: {z:.4?}"),
    }
    Ok(())
}
