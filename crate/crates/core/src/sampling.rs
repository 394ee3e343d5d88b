//! Seeded random matrices and states for property checks.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{trace, ComplexMatrix, DensityMatrix, C64};

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Ginibre matrix: i.i.d. standard complex Gaussian entries.
pub fn random_matrix<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(dim, dim, |_, _| {
        C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

/// Full-rank mixed state `G G^H / Tr(G G^H)` from a Ginibre `G`.
pub fn random_density<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DensityMatrix {
    let g = random_matrix(dim, rng);
    let mut rho = &g * g.adjoint();
    let tr = trace(&rho);
    rho /= tr;
    hermitize(&mut rho);
    DensityMatrix::from_trusted(rho)
}

/// Rank-one projector onto a Gaussian random unit vector.
pub fn random_pure_density<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DensityMatrix {
    let v: Vec<C64> = (0..dim)
        .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let v: Vec<C64> = v.into_iter().map(|z| z / norm).collect();
    DensityMatrix::from_trusted(ComplexMatrix::from_fn(dim, dim, |r, c| v[r] * v[c].conj()))
}

/// Haar-distributed unitary: QR of a Ginibre matrix with the phases of
/// `diag(R)` divided out.
pub fn random_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    let qr = random_matrix(dim, rng).qr();
    let (mut q, r) = qr.unpack();
    for k in 0..dim {
        let d = r[(k, k)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        for row in 0..dim {
            q[(row, k)] *= phase;
        }
    }
    q
}

/// Symmetrizes away roundoff so the result is exactly Hermitian.
pub(crate) fn hermitize(m: &mut ComplexMatrix) {
    let n = m.nrows();
    for c in 0..n {
        m[(c, c)].im = 0.0;
        for r in 0..c {
            let avg = (m[(r, c)] + m[(c, r)].conj()) * 0.5;
            m[(r, c)] = avg;
            m[(c, r)] = avg.conj();
        }
    }
}
