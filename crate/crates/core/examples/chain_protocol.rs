//! Open 4-spin chain: scan τ₁ = τ₂ for the schedule with the flattest
//! interior populations, and show the published long-time point.

use mqnmr::{chain_couplings, Model, ProtocolSchedule};

fn main() -> mqnmr::Result<()> {
    let model = Model::new(chain_couplings(4, 1.0)?)?;

    let published = model.run_protocol(&ProtocolSchedule::new(84.82, 2, 84.82))?;
    println!(
        "tau = 84.82: diag_deviation {:.4}, signs {}",
        published.diag_deviation(),
        published.sign_pattern()
    );

    let mut best = (f64::INFINITY, 0.0);
    for i in 1..=1000 {
        let tau = i as f64 * 0.1;
        let dev = model.run_protocol(&ProtocolSchedule::new(tau, 2, tau))?.diag_deviation();
        if dev < best.0 {
            best = (dev, tau);
        }
    }
    println!("best tau in (0, 100] on a 0.1 grid: {:.1} (diag_deviation {:.4})", best.1, best.0);
    Ok(())
}
