//! Noise marginals, the correlated two-use error distribution, and the
//! two-use channel map.
//!
//! The joint error distribution over `(m, n, m', n')` is
//!
//! ```text
//! p = (1-μ) q_{m,n} q_{m',n'} + μ q_{m,n} δ_{m,m'} ((1-ν) δ_{n,n'} + ν δ_{n,-n'})
//! ```
//!
//! where `-n'` is `(d - n') mod d`. The two-use map sums
//! `p · (U_{m,n} ⊗ U_{m',n'}) ρ (U_{m,n} ⊗ U_{m',n'})^H` over all `d⁴` terms.
//! [`apply_channel`] never enumerates those terms: it splits the sum into the
//! memoryless part `(1-μ)(E₁ ⊗ E₁)` and the correlated part, and folds the sum
//! over phase indices into a per-shift phase weight (a DFT of each marginal
//! row). A dense `ρ` costs `O(d⁵)`; the block-sparse outputs of the
//! diagonal input families cost `O(d⁴)`. [`apply_channel_naive`] is the literal
//! Kraus sum, kept as the oracle.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::displacement::{displacement, neg_mod, roots_of_unity, DisplacementIndex};
use crate::error::{check_dimension, check_range, Error, Result};
use crate::linalg::{compensated_sum, ComplexMatrix, DensityMatrix, C64, NORM_TOL, ZERO};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    /// Quantum depolarizing: identity with weight `p`, every other
    /// displacement with weight `q`.
    Qd,
    /// Quasi-classical depolarizing: weight depends on the shift `m` only.
    Qcd,
}

impl Model {
    /// Valid `[lo, hi]` interval for the shrinking factor η at dimension `d`.
    pub fn eta_range(self, d: usize) -> (f64, f64) {
        let d = d as f64;
        match self {
            Model::Qd => (-1.0 / (d * d - 1.0), 1.0),
            Model::Qcd => (-1.0 / (d - 1.0), 1.0),
        }
    }

    pub fn marginal(self, d: usize, eta: f64) -> Result<MarginalTable> {
        match self {
            Model::Qd => qd_marginal(d, eta),
            Model::Qcd => qcd_marginal(d, eta),
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Model::Qd => "qd",
            Model::Qcd => "qcd",
        })
    }
}

impl FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "qd" => Ok(Model::Qd),
            "qcd" => Ok(Model::Qcd),
            other => Err(Error::Config(format!(
                "model: unknown value '{other}', expected one of qd, qcd"
            ))),
        }
    }
}

/// Single-use error probabilities `q_{m,n}`, stored row-major in `m`.
#[derive(Clone, Debug, PartialEq)]
pub struct MarginalTable {
    d: usize,
    q: Vec<f64>,
}

impl MarginalTable {
    /// Checks nonnegativity and normalization.
    pub fn new(d: usize, q: Vec<f64>) -> Result<Self> {
        check_dimension(d)?;
        if q.len() != d * d {
            return Err(Error::DimensionMismatch {
                expected: d * d,
                found: q.len(),
            });
        }
        if let Some(&bad) = q.iter().find(|&&x| !(x >= 0.0)) {
            return Err(Error::OutOfRange {
                name: "q",
                value: bad,
                lo: 0.0,
                hi: 1.0,
            });
        }
        let total = compensated_sum(q.iter().copied());
        if (total - 1.0).abs() > NORM_TOL {
            return Err(Error::OutOfRange {
                name: "sum of q",
                value: total,
                lo: 1.0,
                hi: 1.0,
            });
        }
        Ok(Self { d, q })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    #[inline]
    pub fn get(&self, m: usize, n: usize) -> f64 {
        self.q[m * self.d + n]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.q
    }

    /// `W_m(a) = Σ_n q_{m,n} ω^{na}`, laid out as `w[m·d + a]`. Conjugating by
    /// `Z^n` multiplies entry `(r, c)` by `ω^{n(r-c)}`, so this is the
    /// combined weight of all phase indices at shift `m`.
    pub(crate) fn phase_weights(&self) -> Vec<C64> {
        let d = self.d;
        let roots = roots_of_unity(d);
        let mut w = vec![ZERO; d * d];
        for m in 0..d {
            for a in 0..d {
                w[m * d + a] = (0..d)
                    .map(|n| roots[(n * a) % d] * self.get(m, n))
                    .sum();
            }
        }
        w
    }
}

/// QD marginal: `p = (η(d²-1)+1)/d²` at `(0,0)`, `q = (1-p)/(d²-1)` elsewhere.
pub fn qd_marginal(d: usize, eta: f64) -> Result<MarginalTable> {
    check_dimension(d)?;
    let (lo, hi) = Model::Qd.eta_range(d);
    check_range("eta", eta, lo, hi)?;
    let n_err = (d * d - 1) as f64;
    let p = ((eta * n_err + 1.0) / (d * d) as f64).max(0.0);
    let q = ((1.0 - p) / n_err).max(0.0);
    let mut table = vec![q; d * d];
    table[0] = p;
    MarginalTable::new(d, table)
}

/// QCD marginal: `p = (1+η(d-1))/d²` on the whole `m = 0` row,
/// `q = (1-η)/d²` elsewhere.
pub fn qcd_marginal(d: usize, eta: f64) -> Result<MarginalTable> {
    check_dimension(d)?;
    let (lo, hi) = Model::Qcd.eta_range(d);
    check_range("eta", eta, lo, hi)?;
    let dd = (d * d) as f64;
    let p = ((1.0 + eta * (d - 1) as f64) / dd).max(0.0);
    let q = ((1.0 - eta) / dd).max(0.0);
    let mut table = vec![q; d * d];
    table[..d].fill(p);
    MarginalTable::new(d, table)
}

/// Channel model plus its parameters. Stores η; marginals are derived on demand.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChannelSpec {
    model: Model,
    d: usize,
    eta: f64,
    mu: f64,
    nu: f64,
}

impl ChannelSpec {
    pub fn new(model: Model, d: usize, eta: f64, mu: f64, nu: f64) -> Result<Self> {
        check_dimension(d)?;
        let (lo, hi) = model.eta_range(d);
        check_range("eta", eta, lo, hi)?;
        check_range("mu", mu, 0.0, 1.0)?;
        check_range("nu", nu, 0.0, 1.0)?;
        Ok(Self {
            model,
            d,
            eta,
            mu,
            nu,
        })
    }

    pub fn model(&self) -> Model {
        self.model
    }
    pub fn d(&self) -> usize {
        self.d
    }
    pub fn eta(&self) -> f64 {
        self.eta
    }
    pub fn mu(&self) -> f64 {
        self.mu
    }
    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn with_mu(&self, mu: f64) -> Result<Self> {
        Self::new(self.model, self.d, self.eta, mu, self.nu)
    }

    pub fn with_nu(&self, nu: f64) -> Result<Self> {
        Self::new(self.model, self.d, self.eta, self.mu, nu)
    }

    pub fn marginal(&self) -> MarginalTable {
        // parameters were range-checked on construction
        self.model
            .marginal(self.d, self.eta)
            .expect("validated channel spec")
    }

    pub fn joint(&self) -> JointProbTable {
        joint_probability(&self.marginal(), self.mu, self.nu).expect("validated channel spec")
    }
}

/// `p_{m,n,m',n'}` over all `d⁴` index tuples.
#[derive(Clone, Debug, PartialEq)]
pub struct JointProbTable {
    d: usize,
    p: Vec<f64>,
}

impl JointProbTable {
    pub fn d(&self) -> usize {
        self.d
    }

    #[inline]
    pub fn get(&self, first: DisplacementIndex, second: DisplacementIndex) -> f64 {
        let d = self.d;
        self.p[((first.m * d + first.n) * d + second.m) * d + second.n]
    }

    pub fn total(&self) -> f64 {
        compensated_sum(self.p.iter().copied())
    }

    /// Sum over the second use: the distribution of `(m, n)`.
    pub fn first_marginal(&self) -> Vec<f64> {
        let dd = self.d * self.d;
        self.p.chunks(dd).map(|row| compensated_sum(row.iter().copied())).collect()
    }

    /// Sum over the first use: the distribution of `(m', n')`.
    pub fn second_marginal(&self) -> Vec<f64> {
        let dd = self.d * self.d;
        let mut out = vec![0.0; dd];
        for row in self.p.chunks(dd) {
            for (o, x) in out.iter_mut().zip(row) {
                *o += x;
            }
        }
        out
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.p
    }
}

pub fn joint_probability(marginal: &MarginalTable, mu: f64, nu: f64) -> Result<JointProbTable> {
    check_range("mu", mu, 0.0, 1.0)?;
    check_range("nu", nu, 0.0, 1.0)?;
    let d = marginal.d();
    let mut p = vec![0.0; d * d * d * d];
    for a in DisplacementIndex::all(d) {
        let qa = marginal.get(a.m, a.n);
        for b in DisplacementIndex::all(d) {
            let mut v = (1.0 - mu) * qa * marginal.get(b.m, b.n);
            if a.m == b.m {
                let corr = if a.n == b.n { 1.0 - nu } else { 0.0 };
                let anti = if a.n == neg_mod(b.n, d) { nu } else { 0.0 };
                v += mu * qa * (corr + anti);
            }
            p[((a.m * d + a.n) * d + b.m) * d + b.n] = v;
        }
    }
    Ok(JointProbTable { d, p })
}

fn check_input(spec: &ChannelSpec, rho: &DensityMatrix) -> Result<()> {
    let dim = spec.d() * spec.d();
    if rho.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: rho.dim(),
        });
    }
    Ok(())
}

#[derive(Copy, Clone)]
enum Factor {
    First,
    Second,
}

/// `(E₁ ⊗ id)` or `(id ⊗ E₁)` of `x`, with `E₁` given by its phase weights.
fn single_use(x: &ComplexMatrix, w: &[C64], d: usize, factor: Factor) -> ComplexMatrix {
    let dim = d * d;
    let mut out = ComplexMatrix::zeros(dim, dim);
    for col in 0..dim {
        let (j2, k2) = (col / d, col % d);
        for row in 0..dim {
            let v = x[(row, col)];
            if v == ZERO {
                continue;
            }
            let (j1, k1) = (row / d, row % d);
            match factor {
                Factor::First => {
                    let a = (j1 + d - j2) % d;
                    for m in 0..d {
                        let wt = w[m * d + a];
                        if wt != ZERO {
                            let r = ((j1 + m) % d) * d + k1;
                            let c = ((j2 + m) % d) * d + k2;
                            out[(r, c)] += wt * v;
                        }
                    }
                }
                Factor::Second => {
                    let b = (k1 + d - k2) % d;
                    for m in 0..d {
                        let wt = w[m * d + b];
                        if wt != ZERO {
                            let r = j1 * d + (k1 + m) % d;
                            let c = j2 * d + (k2 + m) % d;
                            out[(r, c)] += wt * v;
                        }
                    }
                }
            }
        }
    }
    out
}

/// `Σ_{m,n} q_{m,n} (U_{m,n} ⊗ U_{m,±n}) x (·)^H` mixed with weights
/// `(1-ν)` for `+n` and `ν` for `-n`.
fn correlated_use(x: &ComplexMatrix, w: &[C64], d: usize, nu: f64) -> ComplexMatrix {
    let dim = d * d;
    let mut out = ComplexMatrix::zeros(dim, dim);
    for col in 0..dim {
        let (j2, k2) = (col / d, col % d);
        for row in 0..dim {
            let v = x[(row, col)];
            if v == ZERO {
                continue;
            }
            let (j1, k1) = (row / d, row % d);
            let a = (j1 + d - j2) % d;
            let b = (k1 + d - k2) % d;
            let same = (a + b) % d;
            let opposite = (a + d - b) % d;
            for m in 0..d {
                let wt = w[m * d + same] * (1.0 - nu) + w[m * d + opposite] * nu;
                if wt != ZERO {
                    let r = ((j1 + m) % d) * d + (k1 + m) % d;
                    let c = ((j2 + m) % d) * d + (k2 + m) % d;
                    out[(r, c)] += wt * v;
                }
            }
        }
    }
    out
}

/// Two correlated uses of the channel described by `spec`.
pub fn apply_channel(spec: &ChannelSpec, rho: &DensityMatrix) -> Result<DensityMatrix> {
    check_input(spec, rho)?;
    let d = spec.d();
    let w = spec.marginal().phase_weights();
    let (mu, nu) = (spec.mu(), spec.nu());
    let x = rho.matrix();

    let mut out = ComplexMatrix::zeros(d * d, d * d);
    if mu < 1.0 {
        let first = single_use(x, &w, d, Factor::First);
        out += single_use(&first, &w, d, Factor::Second) * C64::new(1.0 - mu, 0.0);
    }
    if mu > 0.0 {
        out += correlated_use(x, &w, d, nu) * C64::new(mu, 0.0);
    }
    Ok(DensityMatrix::from_trusted(out))
}

/// Literal `d⁴`-term Kraus sum with dense `U ⊗ U'` matrices. Meant for `d ≤ 4`.
pub fn apply_channel_naive(spec: &ChannelSpec, rho: &DensityMatrix) -> Result<DensityMatrix> {
    check_input(spec, rho)?;
    let d = spec.d();
    let joint = spec.joint();
    let ops: Vec<ComplexMatrix> = DisplacementIndex::all(d)
        .map(|idx| displacement(d, idx))
        .collect::<Result<_>>()?;
    let mut out = ComplexMatrix::zeros(d * d, d * d);
    for (ia, a) in DisplacementIndex::all(d).enumerate() {
        for (ib, b) in DisplacementIndex::all(d).enumerate() {
            let p = joint.get(a, b);
            if p == 0.0 {
                continue;
            }
            let k = ops[ia].kronecker(&ops[ib]);
            out += (&k * rho.matrix() * k.adjoint()) * C64::new(p, 0.0);
        }
    }
    Ok(DensityMatrix::from_trusted(out))
}
