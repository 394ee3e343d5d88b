//! Self-check suite behind the `validate` command: algebraic identities,
//! channel validity, oracle agreement and known regimes at small dimension.

use std::f64::consts::PI;

use crate::blocks::{apply_channel_blocks, DifferenceBlocks};
use crate::channel::{apply_channel, apply_channel_naive, ChannelSpec, Model};
use crate::crossover::{find_crossover, DEFAULT_GRID_N, DEFAULT_TOL};
use crate::displacement::{commutation_phase, displacement, DisplacementIndex};
use crate::entropy::mutual_information;
use crate::error::Result;
use crate::linalg::{
    hermiticity_error, hermitian_eigenvalues, max_abs_diff, trace, unitarity_error, ComplexMatrix,
    DensityMatrix, C64, EIGEN_FLOOR, STRUCTURAL_TOL,
};
use crate::sampling::{random_density, seeded_rng};
use crate::states::{ansatz_state, averaging_map, AnsatzParams, PureState};

use rand::Rng;

/// Largest dimension the suite visits.
pub const MAX_D: usize = 4;
const SEED: u64 = 0x5eed;
const SAMPLES: usize = 20;

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn bound(name: &'static str, worst: f64, limit: f64) -> Self {
        Self {
            name,
            passed: worst <= limit,
            detail: format!("worst {worst:.3e}, limit {limit:.0e}"),
        }
    }
}

fn specs(rng: &mut impl Rng, d: usize) -> Result<Vec<ChannelSpec>> {
    let mut out = Vec::new();
    for model in [Model::Qd, Model::Qcd] {
        let (lo, hi) = model.eta_range(d);
        for (mu, nu) in [(0.0, 0.0), (1.0, 1.0), (rng.random(), rng.random())] {
            let eta = lo + rng.random::<f64>() * (hi - lo);
            out.push(ChannelSpec::new(model, d, eta, mu, nu)?);
        }
    }
    Ok(out)
}

fn unitarity() -> Result<Check> {
    let mut worst: f64 = 0.0;
    for d in 2..=MAX_D {
        for idx in DisplacementIndex::all(d) {
            worst = worst.max(unitarity_error(&displacement(d, idx)?));
        }
    }
    Ok(Check::bound("displacement unitarity", worst, STRUCTURAL_TOL))
}

fn commutation() -> Result<Check> {
    let mut worst: f64 = 0.0;
    for d in 2..=MAX_D {
        for a in DisplacementIndex::all(d) {
            for b in DisplacementIndex::all(d) {
                let (ua, ub) = (displacement(d, a)?, displacement(d, b)?);
                let phase = commutation_phase(d, a, b)?;
                worst = worst.max(max_abs_diff(&(&ua * &ub), &((&ub * &ua) * phase)));
            }
        }
    }
    Ok(Check::bound("commutation phase", worst, STRUCTURAL_TOL))
}

fn full_twirl() -> Result<Check> {
    let mut rng = seeded_rng(SEED);
    let mut worst: f64 = 0.0;
    for d in 2..=MAX_D {
        let x = crate::sampling::random_matrix(d, &mut rng);
        let mut avg = ComplexMatrix::zeros(d, d);
        for idx in DisplacementIndex::all(d) {
            let u = displacement(d, idx)?;
            avg += &u * &x * u.adjoint();
        }
        avg /= C64::new((d * d) as f64, 0.0);
        let expected = ComplexMatrix::identity(d, d) * (trace(&x) / d as f64);
        worst = worst.max(max_abs_diff(&avg, &expected));
    }
    Ok(Check::bound("full twirl depolarizes", worst, STRUCTURAL_TOL))
}

fn channel_validity() -> Result<Check> {
    let mut rng = seeded_rng(SEED + 1);
    let (mut tr_err, mut herm, mut min_ev) = (0.0f64, 0.0f64, f64::INFINITY);
    for d in 2..=MAX_D {
        for spec in specs(&mut rng, d)? {
            for _ in 0..SAMPLES / 4 {
                let rho = random_density(d * d, &mut rng);
                let out = apply_channel(&spec, &rho)?;
                tr_err = tr_err.max((trace(out.matrix()) - C64::new(1.0, 0.0)).norm());
                herm = herm.max(hermiticity_error(out.matrix()));
                min_ev = min_ev.min(*hermitian_eigenvalues(out.matrix()).last().unwrap());
            }
        }
    }
    Ok(Check {
        name: "channel output is a density matrix",
        passed: tr_err < STRUCTURAL_TOL && herm < STRUCTURAL_TOL && min_ev >= -EIGEN_FLOOR,
        detail: format!("trace err {tr_err:.3e}, hermiticity {herm:.3e}, min eigenvalue {min_ev:.3e}"),
    })
}

fn structured_vs_naive() -> Result<Check> {
    let mut rng = seeded_rng(SEED + 2);
    let mut worst: f64 = 0.0;
    for d in 2..=MAX_D {
        for spec in specs(&mut rng, d)? {
            let rho = random_density(d * d, &mut rng);
            let fast = apply_channel(&spec, &rho)?;
            let slow = apply_channel_naive(&spec, &rho)?;
            worst = worst.max(max_abs_diff(fast.matrix(), slow.matrix()));
        }
    }
    Ok(Check::bound("structured channel matches Kraus sum", worst, STRUCTURAL_TOL))
}

fn blocks_vs_dense() -> Result<Check> {
    let mut rng = seeded_rng(SEED + 3);
    let mut worst: f64 = 0.0;
    for d in 2..=MAX_D {
        for spec in specs(&mut rng, d)? {
            let raw: Vec<f64> = (0..d).map(|_| rng.random::<f64>() + 0.1).collect();
            let norm = raw.iter().map(|a| a * a).sum::<f64>().sqrt();
            let params = AnsatzParams::new(
                raw.iter().map(|a| a / norm).collect(),
                (0..d).map(|_| rng.random::<f64>() * 2.0 * PI).collect(),
                rng.random_range(0..d),
            )?;
            let psi = ansatz_state(d, &params)?;
            let dense = apply_channel(&spec, &psi.to_density())?;
            let blocks = DifferenceBlocks::from_pure(&psi).expect("ansatz states sit in one class");
            let ev_blocks = apply_channel_blocks(&spec, &blocks)?.eigenvalues();
            let ev_dense = hermitian_eigenvalues(dense.matrix());
            for (a, b) in ev_blocks.iter().zip(&ev_dense) {
                worst = worst.max((a - b).abs());
            }
        }
    }
    Ok(Check::bound("blockwise eigenvalues match dense", worst, EIGEN_FLOOR))
}

fn qubit_degeneracy() -> Result<Check> {
    let mut rng = seeded_rng(SEED + 4);
    let mut worst: f64 = 0.0;
    for model in [Model::Qd, Model::Qcd] {
        for _ in 0..SAMPLES / 4 {
            let (lo, hi) = model.eta_range(2);
            let eta = lo + rng.random::<f64>() * (hi - lo);
            let mu: f64 = rng.random();
            let rho = random_density(4, &mut rng);
            let a = apply_channel(&ChannelSpec::new(model, 2, eta, mu, 0.0)?, &rho)?;
            let b = apply_channel(&ChannelSpec::new(model, 2, eta, mu, 1.0)?, &rho)?;
            worst = worst.max(max_abs_diff(a.matrix(), b.matrix()));
        }
    }
    Ok(Check::bound("qubit channel ignores nu", worst, STRUCTURAL_TOL))
}

fn qcd_averaging() -> Result<Check> {
    let mut rng = seeded_rng(SEED + 5);
    let mut worst: f64 = 0.0;
    for d in 2..=MAX_D {
        let (lo, hi) = Model::Qcd.eta_range(d);
        let spec = ChannelSpec::new(Model::Qcd, d, lo + rng.random::<f64>() * (hi - lo), rng.random(), 0.0)?;
        let rho = random_density(d * d, &mut rng);
        let direct = apply_channel(&spec, &rho)?;
        let averaged = apply_channel(&spec, &averaging_map(d, &rho)?)?;
        worst = worst.max(max_abs_diff(direct.matrix(), averaged.matrix()));
    }
    Ok(Check::bound("phase averaging leaves QCD unchanged (nu = 0)", worst, EIGEN_FLOOR))
}

fn endpoints() -> Result<Check> {
    let mut worst: f64 = 0.0;
    for d in 2..=MAX_D {
        let full = 2.0 * (d as f64).log2();
        let states = [PureState::product(d)?, PureState::maximally_entangled(d)?];
        for s in &states {
            for mu in [0.0, 0.5, 1.0] {
                let clean = ChannelSpec::new(Model::Qd, d, 1.0, mu, 0.5)?;
                worst = worst.max((mutual_information(&clean, &s.to_density())? - full).abs());
            }
            let dead = ChannelSpec::new(Model::Qd, d, 0.0, 0.0, 0.0)?;
            worst = worst.max(mutual_information(&dead, &s.to_density())?.abs());
        }
    }
    Ok(Check::bound("noiseless and fully depolarizing endpoints", worst, EIGEN_FLOOR))
}

fn qubit_oracle() -> Result<Check> {
    // one qubit use keeps eigenvalues (1 ± η)/2; two uncorrelated uses square them
    let eta = 0.8;
    let h = |p: f64| -p * p.log2() - (1.0 - p) * (1.0 - p).log2();
    let expected = 2.0 - 2.0 * h((1.0 + eta) / 2.0);
    let spec = ChannelSpec::new(Model::Qd, 2, eta, 0.0, 0.0)?;
    let got = mutual_information(&spec, &PureState::product(2)?.to_density())?;
    Ok(Check::bound("qubit depolarizing oracle", (got - expected).abs(), EIGEN_FLOOR))
}

fn parity_regime() -> Result<Check> {
    let even = find_crossover(&ChannelSpec::new(Model::Qd, 2, 0.8, 0.0, 0.0)?, DEFAULT_GRID_N, DEFAULT_TOL)?;
    let odd = find_crossover(&ChannelSpec::new(Model::Qd, 3, 0.8, 0.0, 0.0)?, DEFAULT_GRID_N, DEFAULT_TOL)?;
    Ok(Check {
        name: "correlated phases: crossing for d = 2, none for d = 3",
        passed: even.mu_c.is_some_and(|m| m > 0.0 && m < 1.0) && odd.mu_c.is_none(),
        detail: format!("d = 2: {:?}, d = 3: {:?}", even.mu_c, odd.mu_c),
    })
}

fn densities_validate() -> Result<Check> {
    let mut rng = seeded_rng(SEED + 6);
    let mut failures = 0;
    for d in 2..=MAX_D {
        for _ in 0..SAMPLES / 4 {
            if DensityMatrix::new(random_density(d * d, &mut rng).into_matrix()).is_err() {
                failures += 1;
            }
        }
    }
    Ok(Check {
        name: "sampled inputs are valid densities",
        passed: failures == 0,
        detail: format!("{failures} rejected"),
    })
}

/// Runs every check. An error inside a check is reported as a failure of
/// that check rather than aborting the suite.
pub fn run_suite() -> Vec<Check> {
    let checks: [(&'static str, fn() -> Result<Check>); 12] = [
        ("displacement unitarity", unitarity),
        ("commutation phase", commutation),
        ("full twirl depolarizes", full_twirl),
        ("sampled inputs are valid densities", densities_validate),
        ("channel output is a density matrix", channel_validity),
        ("structured channel matches Kraus sum", structured_vs_naive),
        ("blockwise eigenvalues match dense", blocks_vs_dense),
        ("qubit channel ignores nu", qubit_degeneracy),
        ("phase averaging leaves QCD unchanged (nu = 0)", qcd_averaging),
        ("noiseless and fully depolarizing endpoints", endpoints),
        ("qubit depolarizing oracle", qubit_oracle),
        ("correlated phases: crossing for d = 2, none for d = 3", parity_regime),
    ];
    checks
        .iter()
        .map(|(name, f)| {
            f().unwrap_or_else(|e| Check {
                name,
                passed: false,
                detail: format!("error: {e}"),
            })
        })
        .collect()
}
