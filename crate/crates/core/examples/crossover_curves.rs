//! `I(μ)` for product and maximally entangled inputs and the crossover μ_c,
//! for even and odd d with correlated (ν = 0) and anticorrelated (ν = 1) phases.

use qudit_memory::cli::{curve_table, Command, RawConfig, RunConfig};
use qudit_memory::crossover::{DEFAULT_GRID_N, DEFAULT_TOL};
use qudit_memory::{find_crossover, ChannelSpec, Model};

fn main() -> qudit_memory::Result<()> {
    for d in [2, 3, 4] {
        for nu in [0.0, 1.0] {
            let spec = ChannelSpec::new(Model::Qd, d, 0.8, 0.0, nu)?;
            let r = find_crossover(&spec, DEFAULT_GRID_N, DEFAULT_TOL)?;
            let mu_c = r.mu_c.map_or("none".to_string(), |m| format!("{m:.8}"));
            println!("QD d = {d}, eta = 0.8, nu = {nu}: mu_c = {mu_c} (delta at mu=0 {:+.4}, at mu=1 {:+.4})", r.delta_at_0, r.delta_at_1);
        }
    }

    // the same curve the `curve` command writes
    let mut raw = RawConfig::new();
    for (k, v) in [("model", "qd"), ("d", "4"), ("eta", "0.8"), ("nu", "1"), ("mu-points", "6")] {
        raw.set(k, v)?;
    }
    let table = curve_table(&RunConfig::resolve(Command::Curve, &raw)?)?;
    println!("\n{:>5} {:>10} {:>12} {:>10}", "mu", "I_product", "I_entangled", "delta");
    for r in &table.rows {
        println!("{:>5.2} {:>10.6} {:>12.6} {:>+10.6}", r.mu, r.i_product, r.i_entangled, r.delta);
    }
    Ok(())
}
