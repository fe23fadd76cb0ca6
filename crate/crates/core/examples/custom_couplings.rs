//! Load a coupling file (`j,k,D` lines, 1-based) and print its MQ spectrum
//! at a few times.
//!
//!     cargo run --example custom_couplings -- configs/triangle.couplings 3

use mqnmr::{equilibrium_state, load_couplings, Model, Normalization};

fn main() -> mqnmr::Result<()> {
    let mut args = std::env::args().skip(1);
    let path = args.next().unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/configs/triangle.couplings").into());
    let n: usize = args.next().map_or(3, |a| a.parse().expect("spin count"));

    let system = load_couplings(&path, n)?;
    let model = Model::new(system)?;
    let rho = equilibrium_state(model.basis());
    let norm = Normalization::TraceIzSquared.value(model.basis(), &rho)?;
    let times = [0.0, 0.5, 1.0, 2.0, 4.0];
    for (t, s) in times.iter().zip(model.scan(&rho, &times, norm)?) {
        let orders: Vec<String> = s.orders().filter(|(k, _)| *k >= 0).map(|(k, v)| format!("J{k}={v:.4}")).collect();
        println!("t = {t:4.1}  {}  (0Q nondiag {:.4})", orders.join(" "), s.j0_nondiag());
    }
    Ok(())
}
