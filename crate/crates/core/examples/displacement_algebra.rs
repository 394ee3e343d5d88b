//! Displacement operators `U_{m,n} = X^m Z^n` and their commutation phases.

use qudit_memory::linalg::unitarity_error;
use qudit_memory::{commutation_phase, displacement, Displacement, DisplacementIndex};

fn main() -> qudit_memory::Result<()> {
    let d = 3;
    let x = DisplacementIndex::new(1, 0);
    let z = DisplacementIndex::new(0, 1);

    println!("U_(1,1) for d = {d}:");
    let u = displacement(d, DisplacementIndex::new(1, 1))?;
    for r in 0..d {
        let row: Vec<String> = (0..d)
            .map(|c| format!("{:>6.3}{:+.3}i", u[(r, c)].re, u[(r, c)].im))
            .collect();
        println!("  {}", row.join("  "));
    }
    println!("unitarity error {:.1e}", unitarity_error(&u));

    // X Z = phase · Z X
    let phase = commutation_phase(d, x, z)?;
    println!("X Z = ({:.4}{:+.4}i) Z X, arg/2pi = {:.4}", phase.re, phase.im, phase.arg() / std::f64::consts::TAU);

    // the monomial form acts on vectors without building the matrix
    let op = Displacement::new(d, DisplacementIndex::new(2, 1))?;
    for k in 0..d {
        println!("U_(2,1)|{k}> = ({:.3}{:+.3}i)|{}>", op.phase(k).re, op.phase(k).im, op.target(k));
    }
    Ok(())
}
