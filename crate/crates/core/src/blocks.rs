//! Two-qudit operators that are block diagonal in the coordinate difference
//! `k - j mod d`.
//!
//! Block `c` collects the basis states `|j⟩|j+c⟩`, `j = 0..d`, so an operator
//! in this form is `d` blocks of size `d × d` (`d³` numbers instead of `d⁴`).
//! Every displacement pair `U_{m,n} ⊗ U_{m',n'}` maps block `c` to block
//! `c + m' - m` and keeps the phase differences of the two factors equal,
//! so the two-use channel acts block to block in `O(d⁴)`.

use crate::channel::ChannelSpec;
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, ComplexMatrix, C64, ZERO};
use crate::states::PureState;

/// Off-block entries up to this magnitude are treated as zero.
pub const BLOCK_TOL: f64 = 1e-13;

#[derive(Clone, Debug, PartialEq)]
pub struct DifferenceBlocks {
    d: usize,
    blocks: Vec<ComplexMatrix>,
}

#[inline]
fn class_of(i: usize, d: usize) -> usize {
    (i % d + d - i / d) % d
}

/// Full-space index of position `j` inside block `c`.
#[inline]
fn full_index(c: usize, j: usize, d: usize) -> usize {
    j * d + (j + c) % d
}

impl DifferenceBlocks {
    pub fn zeros(d: usize) -> Self {
        Self {
            d,
            blocks: vec![ComplexMatrix::zeros(d, d); d],
        }
    }

    /// Splits `rho` into its difference blocks, or `None` if some entry
    /// coupling two different classes exceeds [`BLOCK_TOL`].
    pub fn from_matrix(rho: &ComplexMatrix, d: usize) -> Option<Self> {
        let dim = d * d;
        if d < 2 || rho.shape() != (dim, dim) {
            return None;
        }
        for col in 0..dim {
            let cc = class_of(col, d);
            for row in 0..dim {
                if class_of(row, d) != cc && rho[(row, col)].norm() > BLOCK_TOL {
                    return None;
                }
            }
        }
        let blocks = (0..d)
            .map(|c| ComplexMatrix::from_fn(d, d, |r, s| rho[(full_index(c, r, d), full_index(c, s, d))]))
            .collect();
        Some(Self { d, blocks })
    }

    /// `|ψ⟩⟨ψ|` in block form, or `None` unless all amplitude sits in a
    /// single difference class (otherwise the projector couples blocks).
    pub fn from_pure(state: &PureState) -> Option<Self> {
        let d = state.d();
        let amps = state.amplitudes();
        let mut class = None;
        for (i, z) in amps.iter().enumerate() {
            if *z != ZERO {
                let c = class_of(i, d);
                match class {
                    None => class = Some(c),
                    Some(prev) if prev != c => return None,
                    _ => {}
                }
            }
        }
        let c = class?;
        let v: Vec<C64> = (0..d).map(|j| amps[full_index(c, j, d)]).collect();
        let mut out = Self::zeros(d);
        out.blocks[c] = ComplexMatrix::from_fn(d, d, |r, s| v[r] * v[s].conj());
        Some(out)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn blocks(&self) -> &[ComplexMatrix] {
        &self.blocks
    }

    pub fn to_matrix(&self) -> ComplexMatrix {
        let d = self.d;
        let mut out = ComplexMatrix::zeros(d * d, d * d);
        for (c, b) in self.blocks.iter().enumerate() {
            for s in 0..d {
                for r in 0..d {
                    out[(full_index(c, r, d), full_index(c, s, d))] = b[(r, s)];
                }
            }
        }
        out
    }

    /// Eigenvalues of the whole operator, descending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self.blocks.iter().flat_map(hermitian_eigenvalues).collect();
        ev.sort_by(|a, b| b.total_cmp(a));
        ev
    }

    pub fn hermiticity_error(&self) -> f64 {
        self.blocks
            .iter()
            .map(crate::linalg::hermiticity_error)
            .fold(0.0, f64::max)
    }
}

/// The two-use channel on an operator in difference-block form.
///
/// Within block `c` entry `(j₁, j₂)` both factors see the same phase
/// difference `a = j₁ - j₂`, so a shift `m` on the first use moves it to block
/// `c - m` at `(j₁+m, j₂+m)` with weight `W_m(a)`, a shift on the second use
/// moves it to block `c + m` unchanged, and a shared shift keeps the block
/// with weight `(1-ν) W_m(2a) + ν W_m(0)`.
pub fn apply_channel_blocks(spec: &ChannelSpec, rho: &DifferenceBlocks) -> Result<DifferenceBlocks> {
    let d = spec.d();
    if rho.d != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: rho.d,
        });
    }
    let w = spec.marginal().phase_weights();
    let (mu, nu) = (spec.mu(), spec.nu());
    let mut out = DifferenceBlocks::zeros(d);

    if mu < 1.0 {
        let mut first = DifferenceBlocks::zeros(d);
        for (c, b) in rho.blocks.iter().enumerate() {
            for m in 0..d {
                let target = &mut first.blocks[(c + d - m) % d];
                shift_add(target, b, &w[m * d..(m + 1) * d], m, d);
            }
        }
        let scale = 1.0 - mu;
        for (c, b) in first.blocks.iter().enumerate() {
            for m in 0..d {
                let wm: Vec<C64> = w[m * d..(m + 1) * d].iter().map(|x| x * scale).collect();
                let target = &mut out.blocks[(c + m) % d];
                shift_add(target, b, &wm, 0, d);
            }
        }
    }
    if mu > 0.0 {
        for (c, b) in rho.blocks.iter().enumerate() {
            for m in 0..d {
                let row = &w[m * d..(m + 1) * d];
                let mixed: Vec<C64> = (0..d)
                    .map(|a| (row[(2 * a) % d] * (1.0 - nu) + row[0] * nu) * mu)
                    .collect();
                shift_add(&mut out.blocks[c], b, &mixed, m, d);
            }
        }
    }
    Ok(out)
}

/// `target[(j₁+shift, j₂+shift)] += weight[j₁-j₂] · src[(j₁, j₂)]`.
#[inline]
fn shift_add(
    target: &mut ComplexMatrix,
    src: &ComplexMatrix,
    weight: &[C64],
    shift: usize,
    d: usize,
) {
    if weight.iter().all(|w| *w == ZERO) {
        return;
    }
    for j2 in 0..d {
        let t2 = (j2 + shift) % d;
        for j1 in 0..d {
            let v = src[(j1, j2)];
            if v == ZERO {
                continue;
            }
            let wt = weight[(j1 + d - j2) % d];
            target[((j1 + shift) % d, t2)] += wt * v;
        }
    }
}
