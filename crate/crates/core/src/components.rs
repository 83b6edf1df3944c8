//! Discrete optical and spin elements of the gate.
//!
//! Every element acts on the complex amplitude carried by a single rail, or
//! on the spin label of the dot. Amplitudes between elements are not
//! renormalized.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tolerance on `|a_R|² + |a_L|² = 1` for states entering the gate.
pub const NORMALIZATION_TOL: f64 = 1e-12;

macro_rules! polarization_qubit {
    ($(#[$meta:meta])* $name:ident, $label:literal) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq)]
        pub struct $name {
            /// Amplitude of the right-circular (logical 0) component.
            pub a_r: Complex64,
            /// Amplitude of the left-circular (logical 1) component.
            pub a_l: Complex64,
        }

        impl $name {
            /// Normalized state; rejects non-finite or unnormalized amplitudes.
            pub fn new(a_r: Complex64, a_l: Complex64) -> Result<Self> {
                let state = Self { a_r, a_l };
                state.check_normalized()?;
                Ok(state)
            }

            /// Unchecked amplitudes, for intermediate rails.
            pub fn from_amplitudes(a_r: Complex64, a_l: Complex64) -> Self {
                Self { a_r, a_l }
            }

            /// Real-amplitude state `cos θ |R⟩ + sin θ |L⟩`.
            pub fn from_angle(theta: f64) -> Self {
                Self::from_amplitudes(theta.cos().into(), theta.sin().into())
            }

            pub fn r() -> Self {
                Self::from_amplitudes(1.0.into(), 0.0.into())
            }

            pub fn l() -> Self {
                Self::from_amplitudes(0.0.into(), 1.0.into())
            }

            pub fn norm_sqr(&self) -> f64 {
                self.a_r.norm_sqr() + self.a_l.norm_sqr()
            }

            pub fn scale(&self, factor: Complex64) -> Self {
                Self::from_amplitudes(self.a_r * factor, self.a_l * factor)
            }

            pub fn check_normalized(&self) -> Result<()> {
                let norm_sqr = self.norm_sqr();
                if !norm_sqr.is_finite() || (norm_sqr - 1.0).abs() > NORMALIZATION_TOL {
                    return Err(Error::NotNormalized {
                        name: $label,
                        norm_sqr,
                    });
                }
                Ok(())
            }
        }
    };
}

polarization_qubit!(
    /// Control photon `α|R₁⟩ + β|L₁⟩`.
    ControlState,
    "control"
);
polarization_qubit!(
    /// Target photon `γ|R₂⟩ + δ|L₂⟩`.
    TargetState,
    "target"
);

/// Electron spin of the quantum dot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpinState {
    Up,
    Down,
}

impl fmt::Display for SpinState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpinState::Up => f.write_str("up"),
            SpinState::Down => f.write_str("down"),
        }
    }
}

/// Universal cloner, modeled as the effective amplitude gain `2·√F_UC`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClonerModel {
    f_uc: f64,
}

impl ClonerModel {
    /// Optimal symmetric cloning fidelity.
    pub const OPTIMAL_FIDELITY: f64 = 5.0 / 6.0;

    pub fn new(f_uc: f64) -> Result<Self> {
        if !(f_uc.is_finite() && f_uc > 0.0 && f_uc <= 1.0) {
            return Err(Error::InvalidParameter {
                name: "f_uc",
                value: f_uc,
                reason: "cloner fidelity must lie in (0, 1]",
            });
        }
        Ok(Self { f_uc })
    }

    pub fn optimal() -> Self {
        Self {
            f_uc: Self::OPTIMAL_FIDELITY,
        }
    }

    pub fn fidelity(&self) -> f64 {
        self.f_uc
    }

    pub fn gain(&self) -> f64 {
        2.0 * self.f_uc.sqrt()
    }
}

/// Scalar phase gate `e^{iφπ}·𝟙`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseGateParams {
    phi: f64,
}

impl PhaseGateParams {
    pub fn new(phi: f64) -> Result<Self> {
        if !phi.is_finite() {
            return Err(Error::InvalidParameter {
                name: "phi",
                value: phi,
                reason: "must be finite",
            });
        }
        Ok(Self { phi })
    }

    /// The sign-flipping `φ = 1` gate used on the R rail.
    pub fn sign_flip() -> Self {
        Self { phi: 1.0 }
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn phase(&self) -> Complex64 {
        // Integer φ hits the real axis exactly.
        if self.phi.fract() == 0.0 {
            let sign = if self.phi.rem_euclid(2.0) == 0.0 { 1.0 } else { -1.0 };
            return Complex64::new(sign, 0.0);
        }
        Complex64::from_polar(1.0, self.phi * PI)
    }
}

pub fn apply_phase_gate(amplitude: Complex64, params: &PhaseGateParams) -> Complex64 {
    amplitude * params.phase()
}

pub fn apply_cloner(amplitude: Complex64, cloner: &ClonerModel) -> Complex64 {
    amplitude * cloner.gain()
}

/// Effective 50:50 split: each output rail carries half the input amplitude.
pub fn split_bs5050(amplitude: Complex64) -> (Complex64, Complex64) {
    let half = amplitude * 0.5;
    (half, half)
}

/// Circular polarizing beam splitter: R continues on the transmit rail, L on
/// the reflect rail. Returns `(transmit, reflect)`.
pub fn cpbs_route(state: &ControlState) -> (Complex64, Complex64) {
    (state.a_r, state.a_l)
}

/// Recombines a transmit (R) rail and a reflect (L) rail into one beam.
pub fn cpbs_merge(rail_r: Complex64, rail_l: Complex64) -> ControlState {
    ControlState::from_amplitudes(rail_r, rail_l)
}

/// π pulse on the electron spin.
pub fn apply_sigma_x_spin(spin: SpinState) -> SpinState {
    match spin {
        SpinState::Up => SpinState::Down,
        SpinState::Down => SpinState::Up,
    }
}
