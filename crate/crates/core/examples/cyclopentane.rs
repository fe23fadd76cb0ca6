//! Ten-spin cyclopentane cluster. Takes a few seconds in release mode.
//!
//!     cargo run --release --example cyclopentane

use mqnmr::{cyclopentane_couplings, equilibrium_state, Model, ModelOptions, ProtocolSchedule};

fn main() -> mqnmr::Result<()> {
    let system = cyclopentane_couplings();
    print!("{}", system.to_pair_list());
    let options = ModelOptions { parity_blocking: true, ..Default::default() };
    let model = Model::with_options(system, options)?;

    let eq = equilibrium_state(model.basis());
    for (t, v) in model.find_homqc_maxima(&eq, 12.0, 0.01)?.iter().take(5) {
        println!("J_10Q maximum at t = {t:.3}: {v:.3e}");
    }

    for (tau1, tau2) in [(6.59, 6.59), (6.59, 9.04), (9.04, 9.04)] {
        let r = model.run_protocol(&ProtocolSchedule::new(tau1, 10, tau2))?;
        println!(
            "({tau1}, {tau2}): diag_deviation {:.4}, offdiag_norm {:.3}, signs {}",
            r.diag_deviation(),
            r.offdiag_norm(),
            r.sign_pattern()
        );
    }
    Ok(())
}
