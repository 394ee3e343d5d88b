//! Weyl–Heisenberg displacement operators on a single qudit.
//!
//! `U_{m,n} = Σ_k ω^{kn} |k+m⟩⟨k|` with `ω = e^{2πi/d}`: a cyclic shift of the
//! basis by `m` composed with the phase gradient `n`. Every `U_{m,n}` is a
//! monomial matrix (one nonzero per column), so besides the dense form this
//! module offers conjugation paths that never build the dense matrix.

use std::f64::consts::TAU;

use crate::error::{check_dimension, Error, Result};
use crate::linalg::{ComplexMatrix, C64, ZERO};

/// Mode shift `m` and phase shift `n`, both taken modulo `d`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DisplacementIndex {
    pub m: usize,
    pub n: usize,
}

impl DisplacementIndex {
    pub const IDENTITY: Self = Self { m: 0, n: 0 };

    pub fn new(m: usize, n: usize) -> Self {
        Self { m, n }
    }

    pub fn validate(self, d: usize) -> Result<Self> {
        check_dimension(d)?;
        if self.m >= d || self.n >= d {
            return Err(Error::IndexOutOfRange {
                m: self.m,
                n: self.n,
                d,
            });
        }
        Ok(self)
    }

    /// Index of the product `U_a U_b` up to phase.
    pub fn compose(self, other: Self, d: usize) -> Self {
        Self {
            m: (self.m + other.m) % d,
            n: (self.n + other.n) % d,
        }
    }

    /// Same shift, negated phase index: `(m, (d - n) mod d)`.
    pub fn phase_negated(self, d: usize) -> Self {
        Self {
            m: self.m,
            n: neg_mod(self.n, d),
        }
    }

    /// All `d²` indices in `(m, n)` lexicographic order.
    pub fn all(d: usize) -> impl Iterator<Item = Self> {
        (0..d).flat_map(move |m| (0..d).map(move |n| Self { m, n }))
    }
}

/// `(d - x) mod d` for `x < d`.
#[inline]
pub fn neg_mod(x: usize, d: usize) -> usize {
    (d - x % d) % d
}

/// `ω^k` for `k = 0..d`, evaluated from the reduced exponent.
pub fn roots_of_unity(d: usize) -> Vec<C64> {
    (0..d)
        .map(|k| C64::from_polar(1.0, TAU * k as f64 / d as f64))
        .collect()
}

/// Monomial form of `U_{m,n}`: column `k` has its single entry `ω^{kn}` in
/// row `(k + m) mod d`.
#[derive(Clone, Debug, PartialEq)]
pub struct Displacement {
    d: usize,
    index: DisplacementIndex,
    phases: Vec<C64>,
}

impl Displacement {
    pub fn new(d: usize, index: DisplacementIndex) -> Result<Self> {
        index.validate(d)?;
        let roots = roots_of_unity(d);
        let phases = (0..d).map(|k| roots[(k * index.n) % d]).collect();
        Ok(Self { d, index, phases })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn index(&self) -> DisplacementIndex {
        self.index
    }

    /// Row holding the nonzero entry of column `k`.
    #[inline]
    pub fn target(&self, k: usize) -> usize {
        (k + self.index.m) % self.d
    }

    /// Value of the nonzero entry of column `k`.
    #[inline]
    pub fn phase(&self, k: usize) -> C64 {
        self.phases[k]
    }

    pub fn to_matrix(&self) -> ComplexMatrix {
        let mut u = ComplexMatrix::zeros(self.d, self.d);
        for k in 0..self.d {
            u[(self.target(k), k)] = self.phases[k];
        }
        u
    }

    /// `U |v⟩`.
    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.d);
        let mut out = vec![ZERO; self.d];
        for (k, &x) in v.iter().enumerate() {
            out[self.target(k)] = self.phases[k] * x;
        }
        out
    }

    /// `U X U^H` in `O(d²)`.
    pub fn conjugate(&self, x: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(x.shape(), (self.d, self.d));
        let mut out = ComplexMatrix::zeros(self.d, self.d);
        for c in 0..self.d {
            let pc = self.phases[c].conj();
            let tc = self.target(c);
            for r in 0..self.d {
                out[(self.target(r), tc)] = self.phases[r] * x[(r, c)] * pc;
            }
        }
        out
    }
}

/// `(A ⊗ B) ρ (A ⊗ B)^H` on the two-qudit space with index `j·d + k`,
/// in `O(d⁴)` instead of the dense `O(d⁶)`.
pub fn conjugate_pair(a: &Displacement, b: &Displacement, rho: &ComplexMatrix) -> ComplexMatrix {
    let d = a.dim();
    assert_eq!(b.dim(), d);
    let dim = d * d;
    assert_eq!(rho.shape(), (dim, dim));
    let mut out = ComplexMatrix::zeros(dim, dim);
    for col in 0..dim {
        let (j2, k2) = (col / d, col % d);
        let pc = (a.phase(j2) * b.phase(k2)).conj();
        let tc = a.target(j2) * d + b.target(k2);
        for row in 0..dim {
            let (j1, k1) = (row / d, row % d);
            let tr = a.target(j1) * d + b.target(k1);
            out[(tr, tc)] = a.phase(j1) * b.phase(k1) * rho[(row, col)] * pc;
        }
    }
    out
}

/// Dense `d × d` matrix of `U_{m,n}`.
pub fn displacement(d: usize, index: DisplacementIndex) -> Result<ComplexMatrix> {
    Ok(Displacement::new(d, index)?.to_matrix())
}

/// Phase `e^{2πi(m'n - mn')/d}` with `U_a U_b = phase · U_b U_a`, where
/// `a = (m, n)` and `b = (m', n')`.
pub fn commutation_phase(d: usize, a: DisplacementIndex, b: DisplacementIndex) -> Result<C64> {
    a.validate(d)?;
    b.validate(d)?;
    let exponent = (b.m * a.n) as i64 - (a.m * b.n) as i64;
    let k = exponent.rem_euclid(d as i64) as usize;
    Ok(roots_of_unity(d)[k])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{max_abs_diff, unitarity_error};
    use crate::sampling::{random_matrix, seeded_rng};
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn qubit_bit_flip() {
        let u = displacement(2, DisplacementIndex::new(1, 0)).unwrap();
        let expected = ComplexMatrix::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]);
        assert!(max_abs_diff(&u, &expected) < 1e-15);
    }

    #[test]
    fn qubit_phase_flip() {
        let u = displacement(2, DisplacementIndex::new(0, 1)).unwrap();
        let expected = ComplexMatrix::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)]);
        assert!(max_abs_diff(&u, &expected) < 1e-15);
    }

    #[test]
    fn qutrit_shift_and_phase() {
        let w = C64::from_polar(1.0, TAU / 3.0);
        let u = displacement(3, DisplacementIndex::new(1, 1)).unwrap();
        let mut expected = ComplexMatrix::zeros(3, 3);
        expected[(1, 0)] = c(1., 0.);
        expected[(2, 1)] = w;
        expected[(0, 2)] = w * w;
        assert!(max_abs_diff(&u, &expected) < 1e-15);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            displacement(1, DisplacementIndex::IDENTITY),
            Err(Error::InvalidDimension(1))
        ));
        assert!(matches!(
            displacement(3, DisplacementIndex::new(3, 0)),
            Err(Error::IndexOutOfRange { .. })
        ));
        assert!(commutation_phase(3, DisplacementIndex::new(0, 5), DisplacementIndex::IDENTITY).is_err());
    }

    #[test]
    fn commutation_examples() {
        let x = DisplacementIndex::new(1, 0);
        let z = DisplacementIndex::new(0, 1);
        let p = commutation_phase(2, x, z).unwrap();
        assert_abs_diff_eq!(p.re, -1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(p.im, 0.0, epsilon = 1e-15);

        for d in 2..6 {
            for b in DisplacementIndex::all(d) {
                let p = commutation_phase(d, DisplacementIndex::IDENTITY, b).unwrap();
                assert!((p - c(1., 0.)).norm() < 1e-15);
            }
        }

        // d = 3 by multiplying the matrices both ways
        let ux = displacement(3, x).unwrap();
        let uz = displacement(3, z).unwrap();
        let xz = &ux * &uz;
        let zx = &uz * &ux;
        let ratio = xz[(1, 0)] / zx[(1, 0)];
        let p = commutation_phase(3, x, z).unwrap();
        assert!((ratio - p).norm() < 1e-14);
        // XZ = ω⁻¹ ZX
        assert!((p - C64::from_polar(1.0, -TAU / 3.0)).norm() < 1e-15);
    }

    #[test]
    fn all_unitary_up_to_d8() {
        for d in 2..=8 {
            for idx in DisplacementIndex::all(d) {
                let u = displacement(d, idx).unwrap();
                assert!(unitarity_error(&u) < 1e-12, "d={d} {idx:?}");
            }
        }
    }

    #[test]
    fn group_law_up_to_phase() {
        for d in 2..=6 {
            for a in DisplacementIndex::all(d) {
                for b in DisplacementIndex::all(d) {
                    let prod = displacement(d, a).unwrap() * displacement(d, b).unwrap();
                    let target = displacement(d, a.compose(b, d)).unwrap();
                    // phase read off the (any) nonzero entry of column 0
                    let r = target.column(0).iter().position(|z| z.norm() > 0.5).unwrap();
                    let phase = prod[(r, 0)] / target[(r, 0)];
                    assert!((phase.norm() - 1.0).abs() < 1e-12);
                    assert!(max_abs_diff(&prod, &(target * phase)) < 1e-12);
                }
            }
        }
    }

    #[test]
    fn conjugation_fast_paths_match_dense() {
        let mut rng = seeded_rng(7);
        for d in 2..=4 {
            let x = random_matrix(d, &mut rng);
            let rho = random_matrix(d * d, &mut rng);
            for a in DisplacementIndex::all(d) {
                let ua = Displacement::new(d, a).unwrap();
                let dense = ua.to_matrix();
                let expect = &dense * &x * dense.adjoint();
                assert!(max_abs_diff(&ua.conjugate(&x), &expect) < 1e-13);

                let ub = Displacement::new(d, a.phase_negated(d).compose(DisplacementIndex::new(1, 0), d)).unwrap();
                let kron = dense.kronecker(&ub.to_matrix());
                let expect = &kron * &rho * kron.adjoint();
                assert!(max_abs_diff(&conjugate_pair(&ua, &ub, &rho), &expect) < 1e-13);
            }
        }
    }

    #[test]
    fn apply_matches_matrix() {
        let d = 5;
        let u = Displacement::new(d, DisplacementIndex::new(2, 3)).unwrap();
        let v: Vec<C64> = (0..d).map(|k| c(k as f64, 1.0 - k as f64)).collect();
        let dense = u.to_matrix() * nalgebra::DVector::from_vec(v.clone());
        let fast = u.apply(&v);
        for k in 0..d {
            assert!((dense[k] - fast[k]).norm() < 1e-14);
        }
    }
}
