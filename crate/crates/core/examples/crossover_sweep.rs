//! μ_c across dimensions for both models: parity matters only for
//! correlated phases, and the quasi-classical channel loses its entangled
//! advantage as d grows.

use qudit_memory::crossover::{DEFAULT_GRID_N, DEFAULT_TOL};
use qudit_memory::{sweep_crossover, Model};

fn main() -> qudit_memory::Result<()> {
    let runs = [(Model::Qd, 0.8, [0.0, 1.0]), (Model::Qcd, 0.3, [0.0, 0.3])];
    let dims: Vec<usize> = (2..=9).collect();
    for (model, eta, nus) in runs {
        println!("{model}, eta = {eta}");
        let rows = sweep_crossover(model, &dims, &[eta], &nus, DEFAULT_GRID_N, DEFAULT_TOL)?;
        for r in rows {
            let mu_c = r.mu_c.map_or("none".to_string(), |m| format!("{m:.6}"));
            println!("  d = {} ({}), nu = {}: mu_c = {mu_c}", r.d, r.parity, r.nu);
        }
    }
    Ok(())
}
