//! Mutual information along the interpolating family
//! `cos α |00⟩ + sin α/√(d-1) Σ|jj⟩` for the qubit QCD channel at η = 0.4.
//! Every curve passes through the same point.

use std::f64::consts::FRAC_PI_4;

use qudit_memory::{interpolating_state, mutual_information, ChannelSpec, Model};

fn main() -> qudit_memory::Result<()> {
    let alphas: Vec<f64> = (0..=4).map(|k| k as f64 * FRAC_PI_4 / 4.0).collect();
    let states: Vec<_> = alphas
        .iter()
        .map(|&a| interpolating_state(2, a).map(|s| s.to_density()))
        .collect::<Result<_, _>>()?;

    print!("{:>5}", "mu");
    for a in &alphas {
        print!("  alpha={a:.3}");
    }
    println!();
    for k in 0..=10 {
        let mu = k as f64 / 10.0;
        let spec = ChannelSpec::new(Model::Qcd, 2, 0.4, mu, 0.0)?;
        print!("{mu:>5.2}");
        for rho in &states {
            print!("  {:>11.6}", mutual_information(&spec, rho)?);
        }
        println!();
    }
    Ok(())
}
