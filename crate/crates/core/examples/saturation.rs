//! Stage iv on its own: partial saturation of an intermediate state, and the
//! resulting pseudopure form.

use mqnmr::{partial_saturate, pseudopure_metrics, ring_couplings, Model, ProtocolSchedule};

fn main() -> mqnmr::Result<()> {
    let model = Model::new(ring_couplings(6, 1.0)?)?;
    let r = model.run_protocol(&ProtocolSchedule::new(6.08, 6, 8.16))?;
    let before = &r.intermediate;
    let after = partial_saturate(before);

    let m = pseudopure_metrics(&after)?;
    println!("before: diag_deviation {:.4}, offdiag_norm {:.4}", r.diag_deviation(), r.offdiag_norm());
    println!("after:  diag_deviation {:.4}, offdiag_norm {:.4}", m.diag_deviation, m.offdiag_norm);
    println!("trace before {:.6e}, after {:.6e}", before.trace().re, after.trace().re);

    let d = after.diagonal();
    let background = d[0].re;
    let excess = d[d.len() - 1].re - background;
    println!("rho = {background:+.5e}·1 {excess:+.5e}·|dd><dd|");
    Ok(())
}
