//! Gain calculation with the phase-margin check of the delayed loop.
//!
//! ```text
//! cargo run --example tune_gains -- 0.0506 6 0.7 1
//! ```
//! Arguments: `Kp d zeta k`, all optional.

use ipdt::plant::IpdtModel;
use ipdt::tuning::{pi_gains, TuningSpec};

fn main() -> ipdt::Result<()> {
    let args: Vec<f64> = std::env::args()
        .skip(1)
        .map(|a| a.parse().expect("arguments must be numbers"))
        .collect();
    let arg = |i: usize, default: f64| args.get(i).copied().unwrap_or(default);
    let model = IpdtModel::new(arg(0, 0.0506), arg(1, 6.0))?;
    let spec = TuningSpec::new(arg(2, 0.7), arg(3, 1.0))?;

    let tuned = pi_gains(&model, &spec)?;
    println!("{:#?}", tuned);

    println!("\n   k      Kc        Ti     PM (deg)");
    for k in [0.5, 1.0, 1.5, 2.0, 2.5, 3.0] {
        let t = pi_gains(&model, &TuningSpec::new(spec.zeta, k)?)?;
        let pm = t.margin.map_or(f64::NAN, |m| m.phase_margin_deg);
        let note = if t.warnings.is_empty() { "" } else { "  warning" };
        println!("{k:>4.1}  {:>8.4}  {:>8.3}  {pm:>8.2}{note}", t.gains.kc, t.gains.ti);
    }
    Ok(())
}
