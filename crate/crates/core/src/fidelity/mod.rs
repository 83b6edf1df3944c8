//! Gate fidelity against an ideal CNOT, under an explicit convention.
//!
//! The fidelity of a single input pair is the squared overlap between the
//! ideal output and the (unnormalized) circuit output. Several choices enter
//! that number, and [`FidelityConvention`] makes each of them explicit:
//!
//! | field           | tokens                          |
//! |-----------------|---------------------------------|
//! | ideal variant   | `flipr`, `flipl`, `flipboth`    |
//! | R-branch sign   | `aswritten`, `negated`          |
//! | normalization   | `raw`, `renorm`                 |
//! | input measure   | `uniform`, `haar`, `basis`      |
//!
//! A convention is written as the four tokens joined by `/`, in that order,
//! e.g. `flipboth/aswritten/raw/uniform`.

pub mod quadrature;

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::cavity::{self, CavityCoefficients, CavityParams};
use crate::circuit::{closed_form_amplitudes, JointState};
use crate::components::{ClonerModel, ControlState, TargetState};
use crate::error::{Error, Result};
use crate::sampling::haar_qubit;
use quadrature::WeightedQubit;

/// Which branches of the ideal gate flip the target.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IdealVariant {
    /// Target flipped when the control is `|R⟩`.
    FlipOnR,
    /// Target flipped when the control is `|L⟩` (textbook CNOT with L = 1).
    FlipOnL,
    /// Target flipped on both branches.
    FlipBoth,
}

/// Extra sign applied to the R-control branch of the ideal state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RBranchSign {
    AsWritten,
    Negated,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Normalization {
    /// `|⟨ideal|out⟩|²`, which also charges the gate for lost norm.
    RawOverlap,
    /// `|⟨ideal|out⟩|² / ⟨out|out⟩`, conditional on success.
    Renormalized,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Measure {
    /// Real amplitudes `cos θ, sin θ` with θ uniform on `[0, 2π)`, per photon.
    UniformAngles,
    /// Independent Haar-random states per photon.
    HaarProduct,
    /// The four computational-basis pairs.
    BasisStates,
}

macro_rules! token_enum {
    ($ty:ty, $what:literal, [$(($variant:expr, $token:literal)),+ $(,)?]) => {
        impl $ty {
            pub const ALL: &'static [$ty] = &[$($variant),+];

            pub fn token(&self) -> &'static str {
                $(if *self == $variant { return $token; })+
                unreachable!()
            }

            fn from_token(s: &str) -> Option<Self> {
                match s {
                    $($token => Some($variant),)+
                    _ => None,
                }
            }

            fn expected() -> String {
                format!(concat!($what, " must be one of: {}"), [$($token),+].join(", "))
            }
        }
    };
}

token_enum!(IdealVariant, "ideal variant", [
    (IdealVariant::FlipOnR, "flipr"),
    (IdealVariant::FlipOnL, "flipl"),
    (IdealVariant::FlipBoth, "flipboth"),
]);
token_enum!(RBranchSign, "R-branch sign", [
    (RBranchSign::AsWritten, "aswritten"),
    (RBranchSign::Negated, "negated"),
]);
token_enum!(Normalization, "normalization", [
    (Normalization::RawOverlap, "raw"),
    (Normalization::Renormalized, "renorm"),
]);
token_enum!(Measure, "measure", [
    (Measure::UniformAngles, "uniform"),
    (Measure::HaarProduct, "haar"),
    (Measure::BasisStates, "basis"),
]);

/// One complete way of turning the gate output into a fidelity number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FidelityConvention {
    pub ideal_variant: IdealVariant,
    pub r_branch_sign: RBranchSign,
    pub normalization: Normalization,
    pub measure: Measure,
}

impl FidelityConvention {
    pub const fn new(
        ideal_variant: IdealVariant,
        r_branch_sign: RBranchSign,
        normalization: Normalization,
        measure: Measure,
    ) -> Self {
        Self {
            ideal_variant,
            r_branch_sign,
            normalization,
            measure,
        }
    }

    /// All 36 conventions, ideal variant outermost and measure innermost.
    pub fn all() -> Vec<Self> {
        let mut out = Vec::with_capacity(36);
        for &v in IdealVariant::ALL {
            for &s in RBranchSign::ALL {
                for &n in Normalization::ALL {
                    for &m in Measure::ALL {
                        out.push(Self::new(v, s, n, m));
                    }
                }
            }
        }
        out
    }

    /// Same convention with a different input measure.
    pub fn with_measure(self, measure: Measure) -> Self {
        Self { measure, ..self }
    }
}

impl fmt::Display for FidelityConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}/{}/{}/{}",
            self.ideal_variant.token(),
            self.r_branch_sign.token(),
            self.normalization.token(),
            self.measure.token()
        )
    }
}

impl FromStr for FidelityConvention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let err = |reason: String| Error::Convention {
            input: s.to_string(),
            reason,
        };
        let parts: Vec<&str> = s.trim().split('/').collect();
        let [v, sign, norm, measure] = parts[..] else {
            return Err(err(format!(
                "expected 4 `/`-separated fields, found {}",
                parts.len()
            )));
        };
        Ok(Self {
            ideal_variant: IdealVariant::from_token(v).ok_or_else(|| err(IdealVariant::expected()))?,
            r_branch_sign: RBranchSign::from_token(sign)
                .ok_or_else(|| err(RBranchSign::expected()))?,
            normalization: Normalization::from_token(norm)
                .ok_or_else(|| err(Normalization::expected()))?,
            measure: Measure::from_token(measure).ok_or_else(|| err(Measure::expected()))?,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AveragingMethod {
    Quadrature,
    MonteCarlo,
}

impl fmt::Display for AveragingMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AveragingMethod::Quadrature => "quadrature",
            AveragingMethod::MonteCarlo => "monte_carlo",
        })
    }
}

impl FromStr for AveragingMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quadrature" => Ok(AveragingMethod::Quadrature),
            "monte_carlo" | "mc" => Ok(AveragingMethod::MonteCarlo),
            other => Err(Error::Averaging(format!(
                "unknown method `{other}` (expected quadrature or monte_carlo)"
            ))),
        }
    }
}

/// How to average over the input measure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AveragingSpec {
    pub method: AveragingMethod,
    /// Points per angle for quadrature.
    pub quadrature_points: usize,
    pub mc_samples: usize,
    pub seed: u64,
}

impl Default for AveragingSpec {
    fn default() -> Self {
        Self {
            method: AveragingMethod::Quadrature,
            quadrature_points: 64,
            mc_samples: 100_000,
            seed: 0,
        }
    }
}

impl AveragingSpec {
    pub const MIN_POINTS: usize = 8;
    pub const MIN_SAMPLES: usize = 1_000;

    pub fn quadrature(points: usize) -> Self {
        Self {
            quadrature_points: points,
            ..Self::default()
        }
    }

    pub fn monte_carlo(samples: usize, seed: u64) -> Self {
        Self {
            method: AveragingMethod::MonteCarlo,
            mc_samples: samples,
            seed,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.quadrature_points < Self::MIN_POINTS {
            return Err(Error::Averaging(format!(
                "quadrature points must be at least {} (got {})",
                Self::MIN_POINTS,
                self.quadrature_points
            )));
        }
        if self.mc_samples < Self::MIN_SAMPLES {
            return Err(Error::Averaging(format!(
                "Monte Carlo samples must be at least {} (got {})",
                Self::MIN_SAMPLES,
                self.mc_samples
            )));
        }
        Ok(())
    }
}

/// An averaged fidelity. `std_error` is set for Monte Carlo estimates only.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FidelityEstimate {
    pub value: f64,
    pub std_error: Option<f64>,
}

/// Ideal gate output, normalized for normalized inputs, spin up.
///
/// In basis order `{R₁R₂, R₁L₂, L₁L₂, L₁R₂}` with control `(α, β)` and target
/// `(γ, δ)`:
///
/// | variant    | R₁R₂ | R₁L₂ | L₁L₂ | L₁R₂ |
/// |------------|------|------|------|------|
/// | `flipr`    | αδ   | αγ   | βδ   | βγ   |
/// | `flipl`    | αγ   | αδ   | βγ   | βδ   |
/// | `flipboth` | αδ   | αγ   | βγ   | βδ   |
pub fn ideal_output(control: &ControlState, target: &TargetState, variant: IdealVariant) -> JointState {
    let (a, b) = (control.a_r, control.a_l);
    let (g, d) = (target.a_r, target.a_l);
    let amps = match variant {
        IdealVariant::FlipOnR => [a * d, a * g, b * d, b * g],
        IdealVariant::FlipOnL => [a * g, a * d, b * g, b * d],
        IdealVariant::FlipBoth => [a * d, a * g, b * g, b * d],
    };
    JointState::from_amplitudes(amps)
}

fn signed_ideal(
    control: &ControlState,
    target: &TargetState,
    convention: &FidelityConvention,
) -> JointState {
    let mut ideal = ideal_output(control, target, convention.ideal_variant);
    if convention.r_branch_sign == RBranchSign::Negated {
        ideal.c_rr = -ideal.c_rr;
        ideal.c_rl = -ideal.c_rl;
    }
    ideal
}

fn finish(overlap: Complex64, norm_sqr: f64, normalization: Normalization) -> f64 {
    let raw = overlap.norm_sqr();
    match normalization {
        Normalization::RawOverlap => raw,
        Normalization::Renormalized if norm_sqr > 0.0 => (raw / norm_sqr).min(1.0),
        Normalization::Renormalized => 0.0,
    }
}

/// Fidelity of an already computed output against the ideal for these inputs.
pub fn output_fidelity(
    control: &ControlState,
    target: &TargetState,
    output: &JointState,
    convention: &FidelityConvention,
) -> f64 {
    let ideal = signed_ideal(control, target, convention);
    finish(ideal.inner(output), output.norm_sqr(), convention.normalization)
}

/// Fidelity model of the gate at fixed cavity coefficients and cloner.
#[derive(Debug, Clone, Copy)]
pub struct GateModel {
    pub coeffs: CavityCoefficients,
    pub cloner: ClonerModel,
}

impl GateModel {
    pub fn new(params: &CavityParams, cloner: ClonerModel) -> Result<Self> {
        Ok(Self {
            coeffs: cavity::coefficients(params)?,
            cloner,
        })
    }

    pub fn output(&self, control: &ControlState, target: &TargetState) -> JointState {
        closed_form_amplitudes(control, target, &self.coeffs, &self.cloner)
    }

    pub fn input_fidelity(
        &self,
        control: &ControlState,
        target: &TargetState,
        convention: &FidelityConvention,
    ) -> f64 {
        output_fidelity(control, target, &self.output(control, target), convention)
    }

    pub fn average(&self, convention: &FidelityConvention, avg: &AveragingSpec) -> Result<FidelityEstimate> {
        avg.validate()?;
        Ok(match avg.method {
            AveragingMethod::Quadrature => FidelityEstimate {
                value: self.quadrature_average(convention, avg.quadrature_points),
                std_error: None,
            },
            AveragingMethod::MonteCarlo => self.monte_carlo_average(convention, avg.mc_samples, avg.seed),
        })
    }

    /// Tensor-product quadrature, row-major over (control, target).
    ///
    /// Both the circuit output and the ideal are linear in the control
    /// amplitudes, so for a fixed target the overlap is the Hermitian form
    /// `Σ c̄ᵢ Kᵢⱼ cⱼ` with `Kᵢⱼ = ⟨ideal(eᵢ)|out(eⱼ)⟩`, and likewise the output
    /// norm. The 2×2 forms are built once per target node.
    fn quadrature_average(&self, convention: &FidelityConvention, points: usize) -> f64 {
        let states = match convention.measure {
            Measure::UniformAngles => quadrature::uniform_angle_states(points),
            Measure::HaarProduct => quadrature::haar_states(points),
            Measure::BasisStates => quadrature::basis_states(),
        };
        let forms: Vec<TargetForms> = states
            .iter()
            .map(|t| TargetForms::new(self, convention, t))
            .collect();
        let mut total = 0.0;
        for c in &states {
            let row: f64 = forms
                .iter()
                .map(|form| form.weight * form.fidelity(c, convention.normalization))
                .sum();
            total += c.weight * row;
        }
        total
    }

    fn monte_carlo_average(&self, convention: &FidelityConvention, samples: usize, seed: u64) -> FidelityEstimate {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let draw = |rng: &mut ChaCha8Rng| -> (Complex64, Complex64) {
            match convention.measure {
                Measure::UniformAngles => {
                    let theta = rng.gen_range(0.0..std::f64::consts::TAU);
                    (theta.cos().into(), theta.sin().into())
                }
                Measure::HaarProduct => haar_qubit(rng),
                Measure::BasisStates => {
                    if rng.gen::<bool>() {
                        (1.0.into(), 0.0.into())
                    } else {
                        (0.0.into(), 1.0.into())
                    }
                }
            }
        };
        let (mut sum, mut sum_sq) = (0.0, 0.0);
        for _ in 0..samples {
            let (a, b) = draw(&mut rng);
            let (g, d) = draw(&mut rng);
            let control = ControlState::from_amplitudes(a, b);
            let target = TargetState::from_amplitudes(g, d);
            let f = self.input_fidelity(&control, &target, convention);
            sum += f;
            sum_sq += f * f;
        }
        let n = samples as f64;
        let mean = sum / n;
        let var = ((sum_sq - n * mean * mean) / (n - 1.0)).max(0.0);
        FidelityEstimate {
            value: mean,
            std_error: Some((var / n).sqrt()),
        }
    }
}

struct TargetForms {
    weight: f64,
    overlap: [[Complex64; 2]; 2],
    norm: [[Complex64; 2]; 2],
}

impl TargetForms {
    fn new(model: &GateModel, convention: &FidelityConvention, t: &WeightedQubit) -> Self {
        let target = TargetState::from_amplitudes(t.a_r, t.a_l);
        let basis = [ControlState::r(), ControlState::l()];
        let outs = basis.map(|c| model.output(&c, &target));
        let ideals = basis.map(|c| signed_ideal(&c, &target, convention));
        let overlap = std::array::from_fn(|i| std::array::from_fn(|j| ideals[i].inner(&outs[j])));
        let norm = std::array::from_fn(|i| std::array::from_fn(|j| outs[i].inner(&outs[j])));
        Self {
            weight: t.weight,
            overlap,
            norm,
        }
    }

    fn fidelity(&self, c: &WeightedQubit, normalization: Normalization) -> f64 {
        let form = |m: &[[Complex64; 2]; 2]| {
            let v = [c.a_r, c.a_l];
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 0..2 {
                for j in 0..2 {
                    acc += v[i].conj() * m[i][j] * v[j];
                }
            }
            acc
        };
        let norm_sqr = match normalization {
            Normalization::RawOverlap => 0.0,
            Normalization::Renormalized => form(&self.norm).re,
        };
        finish(form(&self.overlap), norm_sqr, normalization)
    }
}

/// Fidelity of one normalized input pair.
pub fn input_fidelity(
    control: &ControlState,
    target: &TargetState,
    params: &CavityParams,
    cloner: &ClonerModel,
    convention: &FidelityConvention,
) -> Result<f64> {
    control.check_normalized()?;
    target.check_normalized()?;
    Ok(GateModel::new(params, *cloner)?.input_fidelity(control, target, convention))
}

/// Mean fidelity over the convention's input measure.
pub fn average_fidelity(
    params: &CavityParams,
    cloner: &ClonerModel,
    convention: &FidelityConvention,
    avg: &AveragingSpec,
) -> Result<FidelityEstimate> {
    GateModel::new(params, *cloner)?.average(convention, avg)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConventionScore {
    pub convention: FidelityConvention,
    pub value: f64,
    pub deviation: f64,
    pub flagged: bool,
}

/// Evaluates all 36 conventions by quadrature (64 points per angle) and ranks
/// them by distance from `target_value`; those within `tol` are flagged.
pub fn convention_search(
    params: &CavityParams,
    cloner: &ClonerModel,
    target_value: f64,
    tol: f64,
) -> Result<Vec<ConventionScore>> {
    convention_search_with(params, cloner, target_value, tol, &AveragingSpec::default())
}

pub fn convention_search_with(
    params: &CavityParams,
    cloner: &ClonerModel,
    target_value: f64,
    tol: f64,
    avg: &AveragingSpec,
) -> Result<Vec<ConventionScore>> {
    if !(target_value > 0.0 && target_value <= 1.0) {
        return Err(Error::InvalidParameter {
            name: "target",
            value: target_value,
            reason: "must lie in (0, 1]",
        });
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "tol",
            value: tol,
            reason: "must be positive",
        });
    }
    let avg = AveragingSpec {
        method: AveragingMethod::Quadrature,
        ..*avg
    };
    avg.validate()?;
    let model = GateModel::new(params, *cloner)?;
    let mut scores: Vec<ConventionScore> = FidelityConvention::all()
        .into_par_iter()
        .map(|convention| {
            let value = model.quadrature_average(&convention, avg.quadrature_points);
            let deviation = (value - target_value).abs();
            ConventionScore {
                convention,
                value,
                deviation,
                flagged: deviation <= tol,
            }
        })
        .collect();
    // Stable: equal deviations keep enumeration order.
    scores.sort_by(|a, b| a.deviation.total_cmp(&b.deviation));
    Ok(scores)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn conv(s: &str) -> FidelityConvention {
        s.parse().unwrap()
    }

    fn c(x: f64) -> Complex64 {
        x.into()
    }

    #[test]
    fn convention_strings_round_trip() {
        let all = FidelityConvention::all();
        assert_eq!(all.len(), 36);
        for cv in &all {
            assert_eq!(&conv(&cv.to_string()), cv);
        }
        let distinct: std::collections::HashSet<_> = all.iter().collect();
        assert_eq!(distinct.len(), 36);
        assert_eq!(
            conv("flipboth/aswritten/raw/uniform"),
            FidelityConvention::new(
                IdealVariant::FlipBoth,
                RBranchSign::AsWritten,
                Normalization::RawOverlap,
                Measure::UniformAngles
            )
        );
    }

    #[test]
    fn convention_parse_errors() {
        for bad in ["", "flipboth/aswritten/raw", "flipx/aswritten/raw/uniform", "flipr/aswritten/raw/uniform/x"] {
            assert!(matches!(bad.parse::<FidelityConvention>(), Err(Error::Convention { .. })), "{bad}");
        }
    }

    #[test]
    fn ideal_output_examples() {
        let out = ideal_output(&ControlState::r(), &TargetState::r(), IdealVariant::FlipOnL);
        assert_eq!(out.amplitudes(), [c(1.0), c(0.0), c(0.0), c(0.0)]);
        let out = ideal_output(&ControlState::l(), &TargetState::r(), IdealVariant::FlipOnL);
        assert_eq!(out.amplitudes(), [c(0.0), c(0.0), c(1.0), c(0.0)]);
        let control = ControlState::new(c(0.6), c(0.8)).unwrap();
        let out = ideal_output(&control, &TargetState::l(), IdealVariant::FlipBoth);
        assert_eq!(out.amplitudes(), [c(0.6), c(0.0), c(0.0), c(0.8)]);
        for v in IdealVariant::ALL {
            let out = ideal_output(&control, &TargetState::new(c(0.8), c(0.6)).unwrap(), *v);
            assert!((out.norm_sqr() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn ideal_cavity_matches_negated_flip_on_r() {
        let cv = conv("flipr/negated/renorm/uniform");
        let one = ClonerModel::new(1.0).unwrap();
        let model = GateModel {
            coeffs: CavityCoefficients::ideal(),
            cloner: one,
        };
        let control = ControlState::new(c(0.28), Complex64::new(0.0, 0.96)).unwrap();
        let target = TargetState::new(Complex64::new(0.6, 0.0), Complex64::new(0.0, -0.8)).unwrap();
        assert!((model.input_fidelity(&control, &target, &cv) - 1.0).abs() < 1e-14);
        for m in Measure::ALL {
            let v = model.average(&cv.with_measure(*m), &AveragingSpec::quadrature(16)).unwrap();
            assert!((v.value - 1.0).abs() < 1e-12, "{m:?}");
        }
    }

    #[test]
    fn zero_overlap_and_zero_output() {
        let cv = conv("flipl/aswritten/renorm/basis");
        let model = GateModel {
            coeffs: CavityCoefficients::ideal(),
            cloner: ClonerModel::new(1.0).unwrap(),
        };
        // Ideal cavity flips on R; flip-on-L ideal is orthogonal for |R⟩|R⟩.
        assert_eq!(model.input_fidelity(&ControlState::r(), &TargetState::r(), &cv), 0.0);
        let zero = JointState::zero();
        assert_eq!(output_fidelity(&ControlState::r(), &TargetState::r(), &zero, &cv), 0.0);
    }

    #[test]
    fn reference_point_single_input() {
        let h = FRAC_1_SQRT_2;
        let f = input_fidelity(
            &ControlState::new(c(h), c(h)).unwrap(),
            &TargetState::l(),
            &CavityParams::reference_point(),
            &ClonerModel::optimal(),
            &conv("flipboth/aswritten/raw/uniform"),
        )
        .unwrap();
        // |0.995025/2 + 0.912871·0.993049/2|², evaluated independently.
        assert!((f - 0.9039732223530204).abs() < 1e-12, "{f}");
    }

    #[test]
    fn quadrature_forms_match_direct_evaluation() {
        let model = GateModel::new(&CavityParams::from_ratios(0.3, 0.4, 0.2), ClonerModel::new(0.7).unwrap()).unwrap();
        for cv in FidelityConvention::all() {
            let states = match cv.measure {
                Measure::UniformAngles => quadrature::uniform_angle_states(8),
                Measure::HaarProduct => quadrature::haar_states(8),
                Measure::BasisStates => quadrature::basis_states(),
            };
            let mut direct = 0.0;
            for a in &states {
                for b in &states {
                    let control = ControlState::from_amplitudes(a.a_r, a.a_l);
                    let target = TargetState::from_amplitudes(b.a_r, b.a_l);
                    direct += a.weight * b.weight * model.input_fidelity(&control, &target, &cv);
                }
            }
            let fast = model.quadrature_average(&cv, 8);
            assert!((fast - direct).abs() < 1e-13, "{cv}: {fast} vs {direct}");
        }
    }

    #[test]
    fn basis_measure_is_mean_of_four_basis_fidelities() {
        let model = GateModel::new(&CavityParams::reference_point(), ClonerModel::optimal()).unwrap();
        let cv = conv("flipboth/aswritten/raw/basis");
        let avg = model.average(&cv, &AveragingSpec::default()).unwrap().value;
        // Hand values: |t0|², |t0|², F|t1|², F|t1|².
        let k = model.coeffs;
        let f = model.cloner.fidelity();
        let hand = (2.0 * k.t0.norm_sqr() + 2.0 * f * k.t1.norm_sqr()) / 4.0;
        assert!((avg - hand).abs() < 1e-12);
    }

    #[test]
    fn averaging_spec_validation() {
        assert!(AveragingSpec::quadrature(7).validate().is_err());
        assert!(AveragingSpec::monte_carlo(999, 0).validate().is_err());
        assert!(AveragingSpec::default().validate().is_ok());
        assert_eq!("mc".parse::<AveragingMethod>().unwrap(), AveragingMethod::MonteCarlo);
        assert!("simpson".parse::<AveragingMethod>().is_err());
    }

    #[test]
    fn search_rejects_bad_arguments() {
        let p = CavityParams::reference_point();
        let f = ClonerModel::optimal();
        assert!(convention_search(&p, &f, 0.0, 0.01).is_err());
        assert!(convention_search(&p, &f, 0.9, 0.0).is_err());
    }

    #[test]
    fn search_tolerance_extremes() {
        let p = CavityParams::reference_point();
        let f = ClonerModel::optimal();
        let all = convention_search(&p, &f, 0.9043, 1.0).unwrap();
        assert_eq!(all.len(), 36);
        assert!(all.iter().all(|s| s.flagged));
        assert!(all.windows(2).all(|w| w[0].deviation <= w[1].deviation));
        let none = convention_search(&p, &f, 1.0, 1e-9).unwrap();
        assert!(none.iter().all(|s| !s.flagged));
    }
}
