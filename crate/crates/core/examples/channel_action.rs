//! Two uses of a correlated channel on a random input, checked against the
//! literal Kraus sum, and how ν changes the output for d = 2 and d = 3.

use qudit_memory::linalg::{hermitian_eigenvalues, max_abs_diff, trace};
use qudit_memory::sampling::{random_density, seeded_rng};
use qudit_memory::{apply_channel, apply_channel_naive, ChannelSpec, Model};

fn main() -> qudit_memory::Result<()> {
    let mut rng = seeded_rng(7);
    for model in [Model::Qd, Model::Qcd] {
        let spec = ChannelSpec::new(model, 3, 0.4, 0.6, 0.25)?;
        let rho = random_density(9, &mut rng);
        let out = apply_channel(&spec, &rho)?;
        let naive = apply_channel_naive(&spec, &rho)?;
        let ev = hermitian_eigenvalues(out.matrix());
        println!(
            "{model}: trace {:.15}, min eigenvalue {:.3e}, structured vs Kraus sum {:.1e}",
            trace(out.matrix()).re,
            ev.last().unwrap(),
            max_abs_diff(out.matrix(), naive.matrix())
        );
    }

    for d in [2, 3] {
        let rho = random_density(d * d, &mut rng);
        let a = apply_channel(&ChannelSpec::new(Model::Qd, d, 0.5, 0.8, 0.0)?, &rho)?;
        let b = apply_channel(&ChannelSpec::new(Model::Qd, d, 0.5, 0.8, 1.0)?, &rho)?;
        println!("d = {d}: output change between nu = 0 and nu = 1: {:.2e}", max_abs_diff(a.matrix(), b.matrix()));
    }
    Ok(())
}
