//! Crossover memory `μ_c` where the maximally entangled input overtakes the
//! product input, and sweeps of `μ_c` over dimension, η and ν.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{ChannelSpec, Model};
use crate::blocks::DifferenceBlocks;
use crate::entropy::mutual_information_blocks;
use crate::error::{Error, Result};
use crate::states::PureState;

pub const DEFAULT_GRID_N: usize = 64;
pub const DEFAULT_TOL: f64 = 1e-8;
pub const MIN_GRID_N: usize = 16;
/// `|ΔI|` at or below this counts as zero when classifying signs.
pub const SIGN_TOL: f64 = 1e-12;

/// Evaluates `ΔI(μ) = I(max-entangled) - I(product)` for a fixed base spec.
/// Both inputs live in the difference-0 block, so evaluation runs on the
/// block form.
#[derive(Clone, Debug)]
pub struct DeltaEvaluator {
    spec: ChannelSpec,
    product: DifferenceBlocks,
    entangled: DifferenceBlocks,
}

impl DeltaEvaluator {
    pub fn new(spec_base: &ChannelSpec) -> Result<Self> {
        let d = spec_base.d();
        let blocks = |s: PureState| DifferenceBlocks::from_pure(&s).expect("diagonal input state");
        Ok(Self {
            spec: *spec_base,
            product: blocks(PureState::product(d)?),
            entangled: blocks(PureState::maximally_entangled(d)?),
        })
    }

    pub fn spec(&self) -> &ChannelSpec {
        &self.spec
    }

    /// `(I_product, I_entangled)` at `mu`.
    pub fn both(&self, mu: f64) -> Result<(f64, f64)> {
        let spec = self.spec.with_mu(mu)?;
        Ok((
            mutual_information_blocks(&spec, &self.product)?,
            mutual_information_blocks(&spec, &self.entangled)?,
        ))
    }

    pub fn delta(&self, mu: f64) -> Result<f64> {
        let (p, e) = self.both(mu)?;
        Ok(e - p)
    }
}

/// `I(max-entangled) - I(product)` at `mu`, everything else from `spec_base`.
pub fn delta_i(spec_base: &ChannelSpec, mu: f64) -> Result<f64> {
    DeltaEvaluator::new(spec_base)?.delta(mu)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CrossoverResult {
    /// `None` when `ΔI` keeps one sign on the whole grid.
    pub mu_c: Option<f64>,
    pub delta_at_0: f64,
    pub delta_at_1: f64,
    pub iterations: usize,
    pub bracket_width: f64,
}

fn sign(x: f64) -> i8 {
    if x > SIGN_TOL {
        1
    } else if x < -SIGN_TOL {
        -1
    } else {
        0
    }
}

/// Scans `ΔI` on `grid_n + 1` uniform points of `[0, 1]`, then bisects the
/// unique sign change down to a bracket narrower than `tol`.
///
/// A grid on which `ΔI` never changes sign (including `ΔI ≡ 0`) gives
/// `mu_c = None`. More than one sign change is an error carrying every bracket.
pub fn find_crossover(spec_base: &ChannelSpec, grid_n: usize, tol: f64) -> Result<CrossoverResult> {
    if grid_n < MIN_GRID_N {
        return Err(Error::OutOfRange {
            name: "grid_n",
            value: grid_n as f64,
            lo: MIN_GRID_N as f64,
            hi: f64::INFINITY,
        });
    }
    if !(tol > 0.0) {
        return Err(Error::OutOfRange {
            name: "tol",
            value: tol,
            lo: f64::MIN_POSITIVE,
            hi: f64::INFINITY,
        });
    }
    let eval = DeltaEvaluator::new(spec_base)?;
    let grid: Vec<f64> = (0..=grid_n).map(|i| i as f64 / grid_n as f64).collect();
    let deltas: Vec<f64> = grid
        .par_iter()
        .map(|&mu| eval.delta(mu))
        .collect::<Result<_>>()?;

    let mut brackets = Vec::new();
    let mut last: Option<(f64, i8)> = None;
    for (&mu, &dl) in grid.iter().zip(&deltas) {
        let s = sign(dl);
        if s == 0 {
            continue;
        }
        if let Some((prev_mu, prev_s)) = last {
            if prev_s != s {
                brackets.push((prev_mu, mu));
            }
        }
        last = Some((mu, s));
    }

    let mut result = CrossoverResult {
        mu_c: None,
        delta_at_0: deltas[0],
        delta_at_1: deltas[grid_n],
        iterations: 0,
        bracket_width: 0.0,
    };
    match brackets.len() {
        0 => Ok(result),
        1 => {
            let (mut lo, mut hi) = brackets[0];
            let lo_sign = sign(eval.delta(lo)?);
            while hi - lo >= tol {
                let mid = 0.5 * (lo + hi);
                let s = sign(eval.delta(mid)?);
                result.iterations += 1;
                if s == 0 {
                    lo = mid;
                    hi = mid;
                    break;
                }
                if s == lo_sign {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            result.mu_c = Some(0.5 * (lo + hi));
            result.bracket_width = hi - lo;
            Ok(result)
        }
        _ => Err(Error::MultipleCrossings { brackets }),
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(d: usize) -> Self {
        if d.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub model: Model,
    pub d: usize,
    pub eta: f64,
    pub nu: f64,
    pub mu_c: Option<f64>,
    pub parity: Parity,
    /// Set when this row could not be evaluated; the sweep carries on.
    pub error: Option<String>,
}

/// One row per `(d, η, ν)` in that nesting order. Rows run in parallel and
/// come back in order.
pub fn sweep_crossover(
    model: Model,
    dims: &[usize],
    etas: &[f64],
    nus: &[f64],
    grid_n: usize,
    tol: f64,
) -> Result<Vec<SweepRow>> {
    for (name, empty) in [("dims", dims.is_empty()), ("etas", etas.is_empty()), ("nus", nus.is_empty())] {
        if empty {
            return Err(Error::Config(format!("{name}: sweep needs at least one value")));
        }
    }
    let combos: Vec<(usize, f64, f64)> = dims
        .iter()
        .flat_map(|&d| etas.iter().flat_map(move |&eta| nus.iter().map(move |&nu| (d, eta, nu))))
        .collect();
    Ok(combos
        .into_par_iter()
        .map(|(d, eta, nu)| {
            let outcome = ChannelSpec::new(model, d, eta, 0.0, nu)
                .and_then(|spec| find_crossover(&spec, grid_n, tol));
            let (mu_c, error) = match outcome {
                Ok(r) => (r.mu_c, None),
                Err(e) => (None, Some(e.to_string())),
            };
            SweepRow {
                model,
                d,
                eta,
                nu,
                mu_c,
                parity: Parity::of(d),
                error,
            }
        })
        .collect())
}
