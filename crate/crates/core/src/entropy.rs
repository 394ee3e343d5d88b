//! Von Neumann entropy and the mutual-information figure of merit
//! `I = 2·log₂d − S(E₂(ρ))`.
//!
//! Inputs of the form `Σ_j α_j e^{iφ_j}|j⟩|j+m⟩` only populate the states
//! with coordinate difference `k - j ≡ m`, and every Kraus term shifts that
//! difference uniformly, so the channel output is block diagonal in
//! `k - j mod d` with `d` blocks of size `d` (see [`crate::blocks`]). Such
//! outputs are diagonalized block by block.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::blocks::{apply_channel_blocks, DifferenceBlocks};
use crate::channel::{apply_channel, ChannelSpec};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, hermiticity_error, ComplexMatrix, DensityMatrix, EIGEN_FLOOR, STRUCTURAL_TOL};

#[derive(Clone, Debug, PartialEq)]
pub struct EntropyResult {
    pub entropy_bits: f64,
    /// Clamped and renormalized, descending.
    pub eigenvalues: Vec<f64>,
    /// Total magnitude of the negative eigenvalues that were set to zero.
    pub clamped_mass: f64,
}

/// Entropy in bits of a spectrum. Eigenvalues in `[-EIGEN_FLOOR, 0)` are
/// clamped to zero; lower values are rejected.
pub fn entropy_from_eigenvalues(mut eigenvalues: Vec<f64>) -> Result<EntropyResult> {
    let dim = eigenvalues.len();
    let mut clamped_mass = 0.0;
    for ev in eigenvalues.iter_mut() {
        if *ev < -EIGEN_FLOOR || ev.is_nan() {
            return Err(Error::NegativeEigenvalue(*ev));
        }
        if *ev < 0.0 {
            clamped_mass += -*ev;
            *ev = 0.0;
        }
    }
    let total: f64 = eigenvalues.iter().sum();
    if !(total > 0.0) {
        return Err(Error::InvalidDensity(format!("spectrum sums to {total}")));
    }
    for ev in eigenvalues.iter_mut() {
        *ev /= total;
    }
    eigenvalues.sort_by(|a, b| b.total_cmp(a));
    let s: f64 = eigenvalues
        .iter()
        .filter(|&&l| l > 0.0)
        .map(|&l| -l * l.log2())
        .sum();
    let max = (dim.max(1) as f64).log2();
    Ok(EntropyResult {
        entropy_bits: s.clamp(0.0, max),
        eigenvalues,
        clamped_mass,
    })
}

/// Dense eigendecomposition route.
pub fn von_neumann_entropy(rho: &ComplexMatrix) -> Result<EntropyResult> {
    if !rho.is_square() {
        return Err(Error::InvalidDensity(format!(
            "expected a square matrix, got {}x{}",
            rho.nrows(),
            rho.ncols()
        )));
    }
    let herm = hermiticity_error(rho);
    if herm > STRUCTURAL_TOL {
        return Err(Error::NotHermitian(herm));
    }
    entropy_from_eigenvalues(hermitian_eigenvalues(rho))
}

/// Entropy of a two-qudit state, blockwise when the state allows it.
pub fn output_entropy(rho: &DensityMatrix, d: usize) -> Result<EntropyResult> {
    match DifferenceBlocks::from_matrix(rho.matrix(), d) {
        Some(blocks) => block_entropy(&blocks),
        None => von_neumann_entropy(rho.matrix()),
    }
}

/// Entropy of an operator given in difference-block form.
pub fn block_entropy(blocks: &DifferenceBlocks) -> Result<EntropyResult> {
    let herm = blocks.hermiticity_error();
    if herm > STRUCTURAL_TOL {
        return Err(Error::NotHermitian(herm));
    }
    entropy_from_eigenvalues(blocks.eigenvalues())
}

/// `2·log₂d − S(E₂(ρ_in))`: the mutual information of the covariant ensemble
/// generated from `ρ_in`.
///
/// Inputs that are block diagonal in the coordinate difference (every state of
/// the `|j⟩|j+m⟩` families) take the block route end to end; anything else
/// goes through the dense channel and a dense eigendecomposition.
pub fn mutual_information(spec: &ChannelSpec, rho_in: &DensityMatrix) -> Result<f64> {
    if rho_in.dim() == spec.d() * spec.d() {
        if let Some(blocks) = DifferenceBlocks::from_matrix(rho_in.matrix(), spec.d()) {
            return mutual_information_blocks(spec, &blocks);
        }
    }
    let out = apply_channel(spec, rho_in)?;
    let s = von_neumann_entropy(out.matrix())?;
    Ok(information_from_entropy(spec.d(), s.entropy_bits))
}

/// Same quantity for an input already split into difference blocks.
pub fn mutual_information_blocks(spec: &ChannelSpec, rho_in: &DifferenceBlocks) -> Result<f64> {
    let out = apply_channel_blocks(spec, rho_in)?;
    let s = block_entropy(&out)?;
    Ok(information_from_entropy(spec.d(), s.entropy_bits))
}

fn information_from_entropy(d: usize, entropy_bits: f64) -> f64 {
    (2.0 * (d as f64).log2() - entropy_bits).max(0.0)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MutualInfoPoint {
    pub mu: f64,
    pub i_bits: f64,
    pub state_label: String,
}

/// Non-empty, within `[0, 1]`, strictly increasing.
pub fn check_mu_grid(mu_grid: &[f64]) -> Result<()> {
    if mu_grid.is_empty() {
        return Err(Error::InvalidGrid("empty grid".into()));
    }
    if let Some(bad) = mu_grid.iter().find(|m| !(**m >= 0.0 && **m <= 1.0)) {
        return Err(Error::InvalidGrid(format!("mu = {bad} outside [0, 1]")));
    }
    if let Some(w) = mu_grid.windows(2).find(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidGrid(format!(
            "grid must be strictly increasing ({} then {})",
            w[0], w[1]
        )));
    }
    Ok(())
}

/// `I` at each `μ` of the grid with the other parameters of `spec_base` fixed.
/// Points are evaluated in parallel and returned in grid order.
pub fn mutual_information_curve(
    spec_base: &ChannelSpec,
    rho_in: &DensityMatrix,
    state_label: &str,
    mu_grid: &[f64],
) -> Result<Vec<MutualInfoPoint>> {
    check_mu_grid(mu_grid)?;
    mu_grid
        .par_iter()
        .map(|&mu| {
            let spec = spec_base.with_mu(mu)?;
            Ok(MutualInfoPoint {
                mu,
                i_bits: mutual_information(&spec, rho_in)?,
                state_label: state_label.to_string(),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::Model;
    use crate::linalg::C64;
    use crate::sampling::{random_density, random_pure_density, random_unitary, seeded_rng};
    use crate::states::{ansatz_state, AnsatzParams, PureState};
    use approx::assert_abs_diff_eq;
    use nalgebra::DVector;

    fn diag(v: &[f64]) -> ComplexMatrix {
        ComplexMatrix::from_diagonal(&DVector::from_iterator(v.len(), v.iter().map(|&x| C64::new(x, 0.0))))
    }

    /// Binary entropy, the qubit depolarizing oracle.
    fn h2(p: f64) -> f64 {
        -p * p.log2() - (1.0 - p) * (1.0 - p).log2()
    }

    #[test]
    fn entropy_examples() {
        let pure = random_pure_density(9, &mut seeded_rng(1));
        assert!(von_neumann_entropy(pure.matrix()).unwrap().entropy_bits < 1e-10);
        for d in 2..5 {
            let mixed = DensityMatrix::maximally_mixed(d * d);
            let s = von_neumann_entropy(mixed.matrix()).unwrap().entropy_bits;
            assert_abs_diff_eq!(s, 2.0 * (d as f64).log2(), epsilon = 1e-12);
        }
        let s = von_neumann_entropy(&diag(&[0.5, 0.5, 0.0, 0.0])).unwrap();
        assert_abs_diff_eq!(s.entropy_bits, 1.0, epsilon = 1e-15);
        assert_eq!(s.eigenvalues, vec![0.5, 0.5, 0.0, 0.0]);
    }

    #[test]
    fn clamping_window() {
        let s = entropy_from_eigenvalues(vec![1.0 + 5e-11, -5e-11]).unwrap();
        assert_abs_diff_eq!(s.clamped_mass, 5e-11, epsilon = 1e-20);
        assert_eq!(s.eigenvalues[1], 0.0);
        assert!(matches!(
            entropy_from_eigenvalues(vec![1.1, -0.1]),
            Err(Error::NegativeEigenvalue(_))
        ));
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut m = diag(&[0.5, 0.5]);
        m[(0, 1)] = C64::new(0.0, 0.3);
        assert!(matches!(von_neumann_entropy(&m), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn entropy_is_unitarily_invariant() {
        let mut rng = seeded_rng(3);
        for dim in [4, 9, 16] {
            let rho = random_density(dim, &mut rng);
            let u = random_unitary(dim, &mut rng);
            let rotated = &u * rho.matrix() * u.adjoint();
            let mut rotated = rotated;
            crate::sampling::hermitize(&mut rotated);
            let a = von_neumann_entropy(rho.matrix()).unwrap().entropy_bits;
            let b = von_neumann_entropy(&rotated).unwrap().entropy_bits;
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn mutual_information_endpoints() {
        for d in 2..6 {
            let prod = PureState::product(d).unwrap().to_density();
            let me = PureState::maximally_entangled(d).unwrap().to_density();
            let noiseless = ChannelSpec::new(Model::Qd, d, 1.0, 0.3, 0.7).unwrap();
            for rho in [&prod, &me] {
                let i = mutual_information(&noiseless, rho).unwrap();
                assert_abs_diff_eq!(i, 2.0 * (d as f64).log2(), epsilon = 1e-10);
            }
            let dead = ChannelSpec::new(Model::Qd, d, 0.0, 0.0, 0.0).unwrap();
            let rho = random_density(d * d, &mut seeded_rng(d as u64));
            assert!(mutual_information(&dead, &rho).unwrap().abs() < 1e-10);
        }
    }

    #[test]
    fn qubit_depolarizing_oracle() {
        // Single use maps |0⟩ to eigenvalues (1±η)/2; two memoryless uses give
        // the product spectrum, so S = 2·h((1+η)/2).
        let eta = 0.8;
        let expected = 2.0 - 2.0 * h2((1.0 + eta) / 2.0);
        let spec = ChannelSpec::new(Model::Qd, 2, eta, 0.0, 0.0).unwrap();
        let i = mutual_information(&spec, &PureState::product(2).unwrap().to_density()).unwrap();
        assert_abs_diff_eq!(i, expected, epsilon = 1e-12);
    }

    #[test]
    fn block_spectrum_matches_dense() {
        use rand::Rng;
        let mut rng = seeded_rng(9);
        for (model, d) in [(Model::Qd, 2), (Model::Qcd, 3), (Model::Qd, 4), (Model::Qcd, 5)] {
            for offset in 0..d {
                let raw: Vec<f64> = (0..d).map(|_| rng.random::<f64>()).collect();
                let norm = raw.iter().map(|a| a * a).sum::<f64>().sqrt();
                let params = AnsatzParams::new(
                    raw.iter().map(|a| a / norm).collect(),
                    (0..d).map(|_| rng.random::<f64>() * 6.0).collect(),
                    offset,
                )
                .unwrap();
                let rho = ansatz_state(d, &params).unwrap().to_density();
                let spec = ChannelSpec::new(model, d, 0.35, rng.random(), rng.random()).unwrap();
                let out = apply_channel(&spec, &rho).unwrap();
                let blocks = DifferenceBlocks::from_matrix(out.matrix(), d)
                    .expect("block diagonal")
                    .eigenvalues();
                let dense = hermitian_eigenvalues(out.matrix());
                for (a, b) in blocks.iter().zip(&dense) {
                    assert!((a - b).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn generic_states_fall_back_to_dense() {
        let rho = random_density(9, &mut seeded_rng(5));
        assert!(DifferenceBlocks::from_matrix(rho.matrix(), 3).is_none());
        let spec = ChannelSpec::new(Model::Qcd, 3, 0.2, 0.5, 0.5).unwrap();
        let out = apply_channel(&spec, &rho).unwrap();
        let fast = output_entropy(&out, 3).unwrap().entropy_bits;
        let dense = von_neumann_entropy(out.matrix()).unwrap().entropy_bits;
        assert_eq!(fast, dense);
    }

    #[test]
    fn curve_checks_grid() {
        let spec = ChannelSpec::new(Model::Qd, 2, 1.0, 0.0, 0.0).unwrap();
        let rho = PureState::product(2).unwrap().to_density();
        assert!(mutual_information_curve(&spec, &rho, "product", &[]).is_err());
        assert!(mutual_information_curve(&spec, &rho, "product", &[0.5, 0.2]).is_err());
        assert!(mutual_information_curve(&spec, &rho, "product", &[0.0, 1.5]).is_err());
        let pts = mutual_information_curve(&spec, &rho, "product", &[0.0, 1.0]).unwrap();
        assert_eq!(pts.len(), 2);
        for p in pts {
            assert_abs_diff_eq!(p.i_bits, 2.0, epsilon = 1e-12);
            assert_eq!(p.state_label, "product");
        }
    }

    #[test]
    fn product_curve_at_zero_ignores_nu() {
        let rho = PureState::product(3).unwrap().to_density();
        let a = ChannelSpec::new(Model::Qd, 3, 0.6, 0.0, 0.0).unwrap();
        let b = ChannelSpec::new(Model::Qd, 3, 0.6, 0.0, 1.0).unwrap();
        assert_eq!(mutual_information(&a, &rho).unwrap(), mutual_information(&b, &rho).unwrap());
    }

    #[test]
    fn qubit_curves_ignore_nu() {
        let grid: Vec<f64> = (0..=20).map(|i| i as f64 / 20.0).collect();
        for rho in [PureState::product(2).unwrap(), PureState::maximally_entangled(2).unwrap()] {
            let rho = rho.to_density();
            let a = mutual_information_curve(&ChannelSpec::new(Model::Qd, 2, 0.8, 0.0, 0.0).unwrap(), &rho, "x", &grid).unwrap();
            let b = mutual_information_curve(&ChannelSpec::new(Model::Qd, 2, 0.8, 0.0, 1.0).unwrap(), &rho, "x", &grid).unwrap();
            for (p, q) in a.iter().zip(&b) {
                assert!((p.i_bits - q.i_bits).abs() < 1e-12);
            }
        }
    }
}
