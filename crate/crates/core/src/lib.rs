//! Two correlated uses of d-dimensional Heisenberg (Weyl) channels.
//!
//! The crate evaluates the mutual information `2·log₂d − S(E₂(ρ))` reached by
//! product and entangled inputs when the two uses share Markov-correlated
//! noise, and locates the memory value `μ_c` where entangled inputs start to
//! win.
//!
//! ```
//! use qudit_memory::{ChannelSpec, Model, PureState, mutual_information};
//!
//! let spec = ChannelSpec::new(Model::Qd, 2, 0.8, 0.9, 1.0).unwrap();
//! let product = mutual_information(&spec, &PureState::product(2).unwrap().to_density()).unwrap();
//! let bell = mutual_information(&spec, &PureState::maximally_entangled(2).unwrap().to_density()).unwrap();
//! assert!(bell > product);
//! ```

pub mod blocks;
pub mod channel;
pub mod cli;
pub mod crossover;
pub mod displacement;
pub mod entropy;
pub mod error;
pub mod linalg;
pub mod sampling;
pub mod states;
pub mod validation;

pub use channel::{
    apply_channel, apply_channel_naive, joint_probability, qcd_marginal, qd_marginal, ChannelSpec,
    JointProbTable, MarginalTable, Model,
};
pub use crossover::{delta_i, find_crossover, sweep_crossover, CrossoverResult, Parity, SweepRow};
pub use displacement::{commutation_phase, displacement, Displacement, DisplacementIndex};
pub use entropy::{
    mutual_information, mutual_information_curve, von_neumann_entropy, EntropyResult, MutualInfoPoint,
};
pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, DensityMatrix, C64};
pub use states::{
    ansatz_state, averaging_map, averaging_map_with, density_from_pure, interpolating_state, AnsatzParams,
    PhaseTwirl, PureState,
};
