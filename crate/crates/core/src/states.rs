//! Two-qudit input states and the phase-averaging map.
//!
//! Basis ordering: `|j⟩|k⟩` has index `j·d + k`.

use std::f64::consts::FRAC_PI_2;

use crate::displacement::{conjugate_pair, neg_mod, Displacement, DisplacementIndex};
use crate::error::{check_dimension, check_range, Error, Result};
use crate::linalg::{ComplexMatrix, DensityMatrix, C64, NORM_TOL, ZERO};

/// Normalized amplitude vector on the `d²`-dimensional two-qudit space.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    d: usize,
    amplitudes: Vec<C64>,
}

impl PureState {
    pub fn new(d: usize, amplitudes: Vec<C64>) -> Result<Self> {
        check_dimension(d)?;
        if amplitudes.len() != d * d {
            return Err(Error::DimensionMismatch {
                expected: d * d,
                found: amplitudes.len(),
            });
        }
        let norm: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self { d, amplitudes })
    }

    /// `|00⟩`.
    pub fn product(d: usize) -> Result<Self> {
        interpolating_state(d, 0.0)
    }

    /// `Σ_j |jj⟩ / √d`.
    pub fn maximally_entangled(d: usize) -> Result<Self> {
        check_dimension(d)?;
        let a = 1.0 / (d as f64).sqrt();
        ansatz_state(d, &AnsatzParams::real(vec![a; d], 0)?)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, j: usize, k: usize) -> C64 {
        self.amplitudes[j * self.d + k]
    }

    pub fn to_density(&self) -> DensityMatrix {
        density_from_pure(self)
    }
}

/// Amplitudes `α_j ≥ 0`, phases `φ_j` and diagonal offset `m` of the state
/// `Σ_j α_j e^{iφ_j} |j⟩|j+m⟩`.
#[derive(Clone, Debug, PartialEq)]
pub struct AnsatzParams {
    alphas: Vec<f64>,
    phis: Vec<f64>,
    offset: usize,
}

impl AnsatzParams {
    pub fn new(alphas: Vec<f64>, phis: Vec<f64>, offset: usize) -> Result<Self> {
        if alphas.len() != phis.len() {
            return Err(Error::InvalidState(format!(
                "{} alphas but {} phis",
                alphas.len(),
                phis.len()
            )));
        }
        if let Some(&a) = alphas.iter().find(|&&a| !(a >= 0.0)) {
            return Err(Error::InvalidState(format!("alpha {a} is negative")));
        }
        if phis.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidState("phases must be finite".into()));
        }
        let norm: f64 = alphas.iter().map(|a| a * a).sum();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self {
            alphas,
            phis,
            offset,
        })
    }

    /// All phases zero.
    pub fn real(alphas: Vec<f64>, offset: usize) -> Result<Self> {
        let phis = vec![0.0; alphas.len()];
        Self::new(alphas, phis, offset)
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }
    pub fn phis(&self) -> &[f64] {
        &self.phis
    }
    pub fn offset(&self) -> usize {
        self.offset
    }
}

/// `Σ_j α_j e^{iφ_j} |j⟩|j+m mod d⟩`.
pub fn ansatz_state(d: usize, params: &AnsatzParams) -> Result<PureState> {
    check_dimension(d)?;
    if params.alphas.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: params.alphas.len(),
        });
    }
    if params.offset >= d {
        return Err(Error::InvalidState(format!(
            "offset m = {} must be below d = {d}",
            params.offset
        )));
    }
    let mut amps = vec![ZERO; d * d];
    for j in 0..d {
        amps[j * d + (j + params.offset) % d] = C64::from_polar(params.alphas[j], params.phis[j]);
    }
    PureState::new(d, amps)
}

/// `cos α |00⟩ + sin α/√(d-1) Σ_{j≥1} |jj⟩`. `α = 0` is the product state,
/// `cos²α = 1/d` the maximally entangled one.
pub fn interpolating_state(d: usize, alpha: f64) -> Result<PureState> {
    check_dimension(d)?;
    if !alpha.is_finite() {
        return Err(Error::InvalidState(format!("alpha = {alpha} is not finite")));
    }
    let mut amps = vec![ZERO; d * d];
    amps[0] = C64::new(alpha.cos(), 0.0);
    let tail = alpha.sin() / ((d - 1) as f64).sqrt();
    for j in 1..d {
        amps[j * d + j] = C64::new(tail, 0.0);
    }
    PureState::new(d, amps)
}

/// The angle with `cos²α = 1/d`, where [`interpolating_state`] is maximally entangled.
pub fn maximally_entangled_angle(d: usize) -> f64 {
    (1.0 / (d as f64).sqrt()).acos()
}

/// Checks `alpha` against the exposed interpolation interval `[0, π/2]`.
pub fn check_alpha(alpha: f64) -> Result<f64> {
    check_range("alpha", alpha, 0.0, FRAC_PI_2)?;
    Ok(alpha)
}

/// `|ψ⟩⟨ψ|`.
pub fn density_from_pure(state: &PureState) -> DensityMatrix {
    let v = &state.amplitudes;
    let dim = v.len();
    DensityMatrix::from_trusted(ComplexMatrix::from_fn(dim, dim, |r, c| v[r] * v[c].conj()))
}

/// Which phase operators the averaging map pairs on the two uses.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum PhaseTwirl {
    /// `U_{0,n} ⊗ U_{0,n}`. Commutes with the correlated (`ν = 0`) phase noise.
    Parallel,
    /// `U_{0,n} ⊗ U_{0,-n}`. Commutes with the anticorrelated (`ν = 1`) phase
    /// noise and fixes every `|ψ_m⟩`.
    Conjugate,
}

/// `F(ρ) = (1/d) Σ_n (U_{0,n} ⊗ U_{0,n}) ρ (U_{0,n} ⊗ U_{0,n})^H`.
pub fn averaging_map(d: usize, rho: &DensityMatrix) -> Result<DensityMatrix> {
    averaging_map_with(PhaseTwirl::Parallel, d, rho)
}

pub fn averaging_map_with(twirl: PhaseTwirl, d: usize, rho: &DensityMatrix) -> Result<DensityMatrix> {
    check_dimension(d)?;
    if rho.dim() != d * d {
        return Err(Error::DimensionMismatch {
            expected: d * d,
            found: rho.dim(),
        });
    }
    let mut out = ComplexMatrix::zeros(d * d, d * d);
    for n in 0..d {
        let second = match twirl {
            PhaseTwirl::Parallel => n,
            PhaseTwirl::Conjugate => neg_mod(n, d),
        };
        let a = Displacement::new(d, DisplacementIndex::new(0, n))?;
        let b = Displacement::new(d, DisplacementIndex::new(0, second))?;
        out += conjugate_pair(&a, &b, rho.matrix());
    }
    out /= C64::new(d as f64, 0.0);
    Ok(DensityMatrix::from_trusted(out))
}
