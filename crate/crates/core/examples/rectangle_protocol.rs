//! Four spins on a rectangle: minima of the non-diagonal 0Q intensity, then
//! the excite / 2Q-filter / reverse sequence at the two published schedules.

use mqnmr::{equilibrium_state, rectangle_couplings, Model, ProtocolSchedule, Threshold};

fn main() -> mqnmr::Result<()> {
    let model = Model::new(rectangle_couplings())?;
    let rho = equilibrium_state(model.basis());

    let times: Vec<f64> = (0..=1500).map(|i| i as f64 * 0.01).collect();
    let curve = model.nd0q_curve(&rho, &times)?;
    let minima: Vec<(f64, f64)> = (1..times.len() - 1)
        .filter(|&i| curve[i] < curve[i - 1] && curve[i] <= curve[i + 1])
        .map(|i| (times[i], curve[i]))
        .collect();
    println!("local minima of J_0Q,nondiag (t, value): {minima:.4?}");
    let zeros = model.find_nd0q_zeros(&rho, 15.0, 0.01, Threshold::default())?;
    println!("sub-threshold zeros: {:.4?}", zeros.times());

    for (tau1, tau2) in [(7.86, 7.86), (12.61, 7.86)] {
        let r = model.run_protocol(&ProtocolSchedule::new(tau1, 2, tau2))?;
        println!(
            "tau1 = {tau1}, tau2 = {tau2}: diag_deviation {:.4}, offdiag_norm {:.3}, signs {}",
            r.diag_deviation(),
            r.offdiag_norm(),
            r.sign_pattern()
        );
        let row: Vec<String> = r.diagonal.iter().map(|v| format!("{v:+.3}")).collect();
        println!("  populations: {}", row.join(" "));
    }
    Ok(())
}
