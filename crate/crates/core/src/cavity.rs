//! Transmission and reflection coefficients of a double-sided optical
//! microcavity containing a single quantum-dot spin.
//!
//! With the dipole transition coupled to the cavity mode ("hot" cavity) the
//! input–output relations give
//!
//! ```text
//! t(ω) = −κ·D_x / (D_x·D_c + g²),      r(ω) = 1 + t(ω)
//! D_x  = −i·Δ_x + ρ/2                  Δ_x = ω − ω_X
//! D_c  = −i·Δ_c + κ + κ_s/2            Δ_c = ω − ω_c
//! ```
//!
//! and the uncoupled ("cold") cavity is the `g = 0` limit, `t₀ = −κ/D_c`.
//! Only rate ratios matter, so callers usually fix `κ = 1`.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Physical rates of the cavity/dot system, all in the same (arbitrary) unit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CavityParams {
    /// Mirror decay rate κ.
    pub kappa: f64,
    /// Side-leakage rate κ_s.
    pub kappa_s: f64,
    /// Dot–cavity coupling strength g.
    pub g: f64,
    /// Exciton dipole decay rate ρ.
    pub rho: f64,
    /// Detuning ω − ω_c of the photon from the cavity mode.
    pub delta_c: f64,
    /// Detuning ω − ω_X of the photon from the dipole transition.
    pub delta_x: f64,
}

impl CavityParams {
    /// Resonant parameters with `κ = 1` and the other rates given as ratios to κ.
    pub fn from_ratios(ks_ratio: f64, g_ratio: f64, rho_ratio: f64) -> Self {
        Self {
            kappa: 1.0,
            kappa_s: ks_ratio,
            g: g_ratio,
            rho: rho_ratio,
            delta_c: 0.0,
            delta_x: 0.0,
        }
    }

    /// κ_s/κ = g/κ = 0.01, ρ = 0.1κ, on resonance.
    pub fn reference_point() -> Self {
        Self::from_ratios(0.01, 0.01, 0.1)
    }

    /// Same physics with every rate and detuning multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            kappa: self.kappa * factor,
            kappa_s: self.kappa_s * factor,
            g: self.g * factor,
            rho: self.rho * factor,
            delta_c: self.delta_c * factor,
            delta_x: self.delta_x * factor,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("kappa", self.kappa),
            ("kappa_s", self.kappa_s),
            ("g", self.g),
            ("rho", self.rho),
            ("delta_c", self.delta_c),
            ("delta_x", self.delta_x),
        ];
        for (name, value) in fields {
            if !value.is_finite() {
                return Err(Error::InvalidParameter {
                    name,
                    value,
                    reason: "must be finite",
                });
            }
        }
        if self.kappa <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "kappa",
                value: self.kappa,
                reason: "must be positive",
            });
        }
        for (name, value) in [("kappa_s", self.kappa_s), ("g", self.g), ("rho", self.rho)] {
            if value < 0.0 {
                return Err(Error::InvalidParameter {
                    name,
                    value,
                    reason: "must be non-negative",
                });
            }
        }
        Ok(())
    }

    fn cavity_term(&self) -> Complex64 {
        Complex64::new(self.kappa + self.kappa_s / 2.0, -self.delta_c)
    }

    fn dipole_term(&self) -> Complex64 {
        Complex64::new(self.rho / 2.0, -self.delta_x)
    }
}

/// Cold-cavity `(t₀, r₀)` and hot-cavity `(t₁, r₁)` coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CavityCoefficients {
    pub t0: Complex64,
    pub r0: Complex64,
    pub t1: Complex64,
    pub r1: Complex64,
}

impl CavityCoefficients {
    /// Lossless strong-coupling limit: the cold cavity fully transmits, the
    /// hot cavity fully reflects.
    pub fn ideal() -> Self {
        Self {
            t0: Complex64::new(-1.0, 0.0),
            r0: Complex64::new(0.0, 0.0),
            t1: Complex64::new(0.0, 0.0),
            r1: Complex64::new(1.0, 0.0),
        }
    }

    /// Builds coefficients from the two transmissions, with `r = 1 + t`.
    pub fn from_transmissions(t0: Complex64, t1: Complex64) -> Self {
        Self {
            t0,
            r0: 1.0 + t0,
            t1,
            r1: 1.0 + t1,
        }
    }
}

/// Transmission and reflection of the coupled ("hot") cavity.
pub fn hot_coefficients(params: &CavityParams) -> Result<(Complex64, Complex64)> {
    params.validate()?;
    let dx = params.dipole_term();
    let dc = params.cavity_term();
    let denom = dx * dc + params.g * params.g;
    // D_x = 0 with g = 0 leaves an uncoupled cavity.
    let t1 = if denom == Complex64::new(0.0, 0.0) {
        -params.kappa / dc
    } else {
        -params.kappa * dx / denom
    };
    Ok((t1, 1.0 + t1))
}

/// Transmission and reflection of the uncoupled ("cold") cavity.
pub fn cold_coefficients(params: &CavityParams) -> Result<(Complex64, Complex64)> {
    params.validate()?;
    let t0 = -params.kappa / params.cavity_term();
    Ok((t0, 1.0 + t0))
}

pub fn coefficients(params: &CavityParams) -> Result<CavityCoefficients> {
    let (t0, r0) = cold_coefficients(params)?;
    let (t1, r1) = hot_coefficients(params)?;
    Ok(CavityCoefficients { t0, r0, t1, r1 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Complex64, re: f64, tol: f64) -> bool {
        (a.re - re).abs() < tol && a.im.abs() < tol
    }

    #[test]
    fn hot_at_reference_point() {
        let (t1, r1) = hot_coefficients(&CavityParams::reference_point()).unwrap();
        assert!(close(t1, -0.993049, 5e-7), "{t1}");
        assert!(close(r1, 0.006951, 5e-7), "{r1}");
    }

    #[test]
    fn hot_without_coupling_or_leakage_is_lossless_cold() {
        let (t1, r1) = hot_coefficients(&CavityParams::from_ratios(0.0, 0.0, 0.1)).unwrap();
        assert!(close(t1, -1.0, 1e-15));
        assert!(close(r1, 0.0, 1e-15));
    }

    #[test]
    fn hot_with_large_coupling_reflects() {
        let (t1, r1) = hot_coefficients(&CavityParams::from_ratios(0.0, 1e6, 0.1)).unwrap();
        assert!(t1.norm() < 1e-12);
        assert!(close(r1, 1.0, 1e-12));
    }

    #[test]
    fn hot_with_no_dipole_decay_and_no_coupling() {
        // D_x = 0 and g = 0: the 0/0 form falls back to the cold cavity.
        let (t1, _) = hot_coefficients(&CavityParams::from_ratios(0.0, 0.0, 0.0)).unwrap();
        assert!(close(t1, -1.0, 1e-15));
    }

    #[test]
    fn cold_at_reference_point() {
        let (t0, r0) = cold_coefficients(&CavityParams::reference_point()).unwrap();
        assert!(close(t0, -0.995025, 5e-7));
        assert!(close(r0, 0.004975, 5e-7));
        assert!((t0.re + 1.0 / 1.005).abs() < 1e-15);
    }

    #[test]
    fn cold_lossless_limits() {
        let (t0, r0) = cold_coefficients(&CavityParams::from_ratios(0.0, 0.3, 0.1)).unwrap();
        assert!(close(t0, -1.0, 1e-15));
        assert!(close(r0, 0.0, 1e-15));

        let detuned = CavityParams {
            delta_c: 1.0,
            ..CavityParams::from_ratios(0.0, 0.3, 0.1)
        };
        let (t0, r0) = cold_coefficients(&detuned).unwrap();
        assert!((t0.norm_sqr() + r0.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bundled_coefficients() {
        let c = coefficients(&CavityParams::reference_point()).unwrap();
        assert!(close(c.t0, -0.995025, 5e-7));
        assert!(close(c.r0, 0.004975, 5e-7));
        assert!(close(c.t1, -0.993049, 5e-7));
        assert!(close(c.r1, 0.006951, 5e-7));

        let strong = coefficients(&CavityParams::from_ratios(0.0, 1e7, 0.1)).unwrap();
        let ideal = CavityCoefficients::ideal();
        for (a, b) in [
            (strong.t0, ideal.t0),
            (strong.r0, ideal.r0),
            (strong.t1, ideal.t1),
            (strong.r1, ideal.r1),
        ] {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn regime_boundary_is_smooth() {
        let c = coefficients(&CavityParams::from_ratios(0.2, 0.3, 0.1)).unwrap();
        for z in [c.t0, c.r0, c.t1, c.r1] {
            assert!(z.re.is_finite() && z.im.is_finite());
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        let mut p = CavityParams::reference_point();
        p.kappa = 0.0;
        assert!(matches!(
            coefficients(&p),
            Err(Error::InvalidParameter { name: "kappa", .. })
        ));
        let mut p = CavityParams::reference_point();
        p.g = -0.1;
        assert!(matches!(
            hot_coefficients(&p),
            Err(Error::InvalidParameter { name: "g", .. })
        ));
        let mut p = CavityParams::reference_point();
        p.delta_x = f64::NAN;
        assert!(cold_coefficients(&p).is_err());
    }
}
