//! Simulator for a compact photonic CNOT gate: a control photon is split by
//! polarization, its L branch passes a universal cloner, and the target photon
//! scatters off a quantum-dot spin in a double-sided microcavity.
//!
//! The crate computes the cavity coefficients ([`cavity`]), models each optical
//! element ([`components`]), produces the two-photon output in closed form and
//! by staged propagation ([`circuit`]), averages gate fidelity under an explicit
//! convention ([`fidelity`]) and sweeps it over coupling strengths ([`sweep`]).
//!
//! ```
//! use cnot_cavity_sim::{average_fidelity, AveragingSpec, CavityParams, ClonerModel};
//!
//! let params = CavityParams::from_ratios(0.01, 0.01, 0.1);
//! let convention = "flipboth/aswritten/raw/uniform".parse().unwrap();
//! let f = average_fidelity(&params, &ClonerModel::optimal(), &convention, &AveragingSpec::default())
//!     .unwrap();
//! assert!(f.value > 5.0 / 6.0);
//! ```

pub mod cavity;
pub mod circuit;
pub mod cli;
pub mod components;
pub mod defaults;
pub mod error;
pub mod fidelity;
pub mod sampling;
pub mod sweep;

pub use cavity::{coefficients, CavityCoefficients, CavityParams};
pub use circuit::{closed_form_output, propagate_pipeline, success_probability, JointState, Pipeline};
pub use components::{ClonerModel, ControlState, PhaseGateParams, SpinState, TargetState};
pub use defaults::PinnedDefaults;
pub use error::{Error, Result};
pub use fidelity::{
    average_fidelity, convention_search, input_fidelity, AveragingMethod, AveragingSpec,
    FidelityConvention, FidelityEstimate,
};
pub use sweep::{run_sweep, Regime, SweepConfig, SweepGrid};

// The guide's code blocks run as doc-tests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/cavity.md")]
    mod cavity {}
    #[doc = include_str!("../../../book/src/components.md")]
    mod components {}
    #[doc = include_str!("../../../book/src/circuit.md")]
    mod circuit {}
    #[doc = include_str!("../../../book/src/fidelity.md")]
    mod fidelity {}
    #[doc = include_str!("../../../book/src/sweep.md")]
    mod sweep {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
