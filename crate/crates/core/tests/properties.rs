use cnot_cavity_sim::cavity::{self, CavityCoefficients, CavityParams};
use cnot_cavity_sim::circuit::{closed_form_amplitudes, closed_form_output, Pipeline};
use cnot_cavity_sim::components::{ClonerModel, ControlState, PhaseGateParams, SpinState, TargetState};
use cnot_cavity_sim::fidelity::{
    output_fidelity, AveragingSpec, FidelityConvention, GateModel, Measure,
};
use num_complex::Complex64;
use proptest::prelude::*;

fn log_rate(lo: f64, hi: f64) -> impl Strategy<Value = f64> {
    (lo.log10()..hi.log10()).prop_map(|e| 10f64.powf(e))
}

/// κ in [0.1, 10]; other rates log-uniform in [1e-3, 1e2]·κ; detunings in [−10, 10]·κ.
fn cavity_params() -> impl Strategy<Value = CavityParams> {
    (
        log_rate(0.1, 10.0),
        log_rate(1e-3, 1e2),
        log_rate(1e-3, 1e2),
        log_rate(1e-3, 1e2),
        -10.0..10.0f64,
        -10.0..10.0f64,
    )
        .prop_map(|(kappa, ks, g, rho, dc, dx)| CavityParams {
            kappa,
            kappa_s: ks * kappa,
            g: g * kappa,
            rho: rho * kappa,
            delta_c: dc * kappa,
            delta_x: dx * kappa,
        })
}

fn qubit() -> impl Strategy<Value = (Complex64, Complex64)> {
    (-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64)
        .prop_filter("non-zero", |(a, b, c, d)| a * a + b * b + c * c + d * d > 1e-6)
        .prop_map(|(a, b, c, d)| {
            let n = (a * a + b * b + c * c + d * d).sqrt();
            (Complex64::new(a / n, b / n), Complex64::new(c / n, d / n))
        })
}

fn control() -> impl Strategy<Value = ControlState> {
    qubit().prop_map(|(a, b)| ControlState::from_amplitudes(a, b))
}

fn target() -> impl Strategy<Value = TargetState> {
    qubit().prop_map(|(a, b)| TargetState::from_amplitudes(a, b))
}

fn cloner() -> impl Strategy<Value = ClonerModel> {
    (0.01..=1.0f64).prop_map(|f| ClonerModel::new(f).unwrap())
}

fn convention() -> impl Strategy<Value = FidelityConvention> {
    (0..36usize).prop_map(|i| FidelityConvention::all()[i])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn reflection_is_one_plus_transmission_and_passive(p in cavity_params()) {
        let c = cavity::coefficients(&p).unwrap();
        prop_assert!((c.r0 - (1.0 + c.t0)).norm() < 1e-12);
        prop_assert!((c.r1 - (1.0 + c.t1)).norm() < 1e-12);
        prop_assert!(c.t0.norm_sqr() + c.r0.norm_sqr() <= 1.0 + 1e-9);
        prop_assert!(c.t1.norm_sqr() + c.r1.norm_sqr() <= 1.0 + 1e-9);
    }
}

proptest! {
    #[test]
    fn cold_cavity_without_side_leakage_conserves_probability(p in cavity_params()) {
        let lossless = CavityParams { kappa_s: 0.0, ..p };
        let (t0, r0) = cavity::cold_coefficients(&lossless).unwrap();
        prop_assert!((t0.norm_sqr() + r0.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn coefficients_depend_only_on_rate_ratios(p in cavity_params(), e in -3.0..3.0f64) {
        let a = cavity::coefficients(&p).unwrap();
        let b = cavity::coefficients(&p.scaled(10f64.powf(e))).unwrap();
        for (u, v) in [(a.t0, b.t0), (a.r0, b.r0), (a.t1, b.t1), (a.r1, b.r1)] {
            prop_assert!((u - v).norm() < 1e-12);
        }
    }

    #[test]
    fn pipeline_equals_closed_form(p in cavity_params(), f in cloner(), c in control(), t in target()) {
        let pipeline = Pipeline::new(&p, f, PhaseGateParams::sign_flip()).unwrap();
        let staged = pipeline.run(&c, &t);
        let closed = closed_form_output(&c, &t, pipeline.coefficients(), &f).unwrap();
        prop_assert!(staged.max_deviation(&closed) < 1e-12);
        prop_assert_eq!(staged.spin, SpinState::Up);
    }

    #[test]
    fn output_is_linear_in_each_input(
        p in cavity_params(), f in cloner(), c in control(), t in target(),
        re in -3.0..3.0f64, im in -3.0..3.0f64,
    ) {
        let k = cavity::coefficients(&p).unwrap();
        let lambda = Complex64::new(re, im);
        let base = closed_form_amplitudes(&c, &t, &k, &f).scale(lambda);
        let scaled_control = closed_form_amplitudes(&c.scale(lambda), &t, &k, &f);
        let scaled_target = closed_form_amplitudes(&c, &t.scale(lambda), &k, &f);
        prop_assert!(base.max_deviation(&scaled_control) < 1e-12);
        prop_assert!(base.max_deviation(&scaled_target) < 1e-12);
    }

    #[test]
    fn global_phase_is_carried_through(
        p in cavity_params(), f in cloner(), c in control(), t in target(), theta in 0.0..6.3f64,
    ) {
        let k = cavity::coefficients(&p).unwrap();
        let phase = Complex64::from_polar(1.0, theta);
        let out = closed_form_amplitudes(&c, &t, &k, &f);
        let rotated = closed_form_amplitudes(&c.scale(phase), &t, &k, &f);
        prop_assert!(out.scale(phase).max_deviation(&rotated) < 1e-12);
        prop_assert!((out.norm_sqr() - rotated.norm_sqr()).abs() < 1e-12);
    }

    #[test]
    fn l_branch_scales_with_root_cloner_fidelity(
        p in cavity_params(), f1 in cloner(), f2 in cloner(), c in control(), t in target(),
    ) {
        let k = cavity::coefficients(&p).unwrap();
        let a = closed_form_amplitudes(&c, &t, &k, &f1);
        let b = closed_form_amplitudes(&c, &t, &k, &f2);
        let ratio = (f1.fidelity() / f2.fidelity()).sqrt();
        prop_assert!((a.c_ll - b.c_ll * ratio).norm() < 1e-12);
        prop_assert!((a.c_lr - b.c_lr * ratio).norm() < 1e-12);
        prop_assert_eq!(a.c_rr, b.c_rr);
        prop_assert_eq!(a.c_rl, b.c_rl);
    }

    #[test]
    fn output_norm_is_sub_unit(p in cavity_params(), f in cloner(), c in control(), t in target()) {
        let k = cavity::coefficients(&p).unwrap();
        let out = closed_form_output(&c, &t, &k, &f).unwrap();
        prop_assert!(out.norm_sqr() <= 1.0 + 1e-9);
    }

    #[test]
    fn input_fidelity_is_a_probability(
        p in cavity_params(), f in cloner(), c in control(), t in target(), cv in convention(),
    ) {
        let model = GateModel::new(&p, f).unwrap();
        let v = model.input_fidelity(&c, &t, &cv);
        prop_assert!((0.0..=1.0 + 1e-12).contains(&v), "{}", v);
    }

    #[test]
    fn renormalized_fidelity_ignores_output_scale(
        p in cavity_params(), f in cloner(), c in control(), t in target(), cv in convention(),
        re in 0.1..5.0f64, im in -5.0..5.0f64,
    ) {
        let cv = FidelityConvention { normalization: cnot_cavity_sim::fidelity::Normalization::Renormalized, ..cv };
        let model = GateModel::new(&p, f).unwrap();
        let out = model.output(&c, &t);
        let a = output_fidelity(&c, &t, &out, &cv);
        let b = output_fidelity(&c, &t, &out.scale(Complex64::new(re, im)), &cv);
        prop_assert!((a - b).abs() < 1e-12);
    }
}

#[test]
fn crosscheck_over_random_parameter_sets() {
    let report = cnot_cavity_sim::circuit::crosscheck(1000, 20, 77).unwrap();
    assert!(report.max_deviation < 1e-12, "{report:?}");
}

#[test]
fn raw_fidelity_nondecreasing_in_cloner_fidelity() {
    let p = CavityParams::reference_point();
    let mut previous = f64::NEG_INFINITY;
    for cv in FidelityConvention::all()
        .into_iter()
        .filter(|cv| cv.normalization == cnot_cavity_sim::fidelity::Normalization::RawOverlap)
        .filter(|cv| cv.measure != Measure::HaarProduct)
    {
        previous = f64::NEG_INFINITY;
        for step in 5..=10 {
            let f = ClonerModel::new(step as f64 / 10.0).unwrap();
            let v = GateModel::new(&p, f)
                .unwrap()
                .average(&cv, &AveragingSpec::quadrature(16))
                .unwrap()
                .value;
            assert!(v >= previous - 1e-15, "{cv} at F={}", f.fidelity());
            previous = v;
        }
    }
    assert!(previous.is_finite());
}

#[test]
fn pinned_convention_cloner_sweep_matches_oracle() {
    // Independent evaluations at F_UC = 0.5, 0.6, ..., 1.0.
    let expected = [
        0.7308669618669071,
        0.7845204477224508,
        0.8368334103434607,
        0.8880850786391469,
        0.9384694056722401,
        0.9881276074871614,
    ];
    let cv: FidelityConvention = "flipboth/aswritten/raw/uniform".parse().unwrap();
    for (step, want) in (5..=10).zip(expected) {
        let f = ClonerModel::new(step as f64 / 10.0).unwrap();
        let v = GateModel::new(&CavityParams::reference_point(), f)
            .unwrap()
            .average(&cv, &AveragingSpec::default())
            .unwrap()
            .value;
        assert!((v - want).abs() < 1e-12, "F={}: {v} vs {want}", f.fidelity());
    }
}

/// Uniform-angle average in closed form: with X = t₀ + r₀ s and
/// Y = √F (t₁ + r₁ s), s = sin 2θ_t, real coefficients on resonance,
/// F̄ = ⅜E[X²] + ⅜E[Y²] + ¼E[XY] and E[s] = 0, E[s²] = ½.
fn analytic_flip_both_uniform(k: &CavityCoefficients, f: f64) -> f64 {
    let (t0, r0, t1, r1) = (k.t0.re, k.r0.re, k.t1.re, k.r1.re);
    let xx = t0 * t0 + r0 * r0 / 2.0;
    let yy = f * (t1 * t1 + r1 * r1 / 2.0);
    let xy = f.sqrt() * (t0 * t1 + r0 * r1 / 2.0);
    0.375 * xx + 0.375 * yy + 0.25 * xy
}

#[test]
fn quadrature_matches_analytic_average() {
    let cv: FidelityConvention = "flipboth/aswritten/raw/uniform".parse().unwrap();
    for (ks, g) in [(0.01, 0.01), (0.5, 0.2), (0.01, 2.0), (2.0, 3.0)] {
        let p = CavityParams::from_ratios(ks, g, 0.1);
        let model = GateModel::new(&p, ClonerModel::optimal()).unwrap();
        let q = model.average(&cv, &AveragingSpec::default()).unwrap().value;
        let exact = analytic_flip_both_uniform(&model.coeffs, model.cloner.fidelity());
        assert!((q - exact).abs() < 1e-13, "({ks}, {g}): {q} vs {exact}");
    }
}

#[test]
fn quadrature_resolution_is_converged_for_every_measure() {
    let model = GateModel::new(&CavityParams::reference_point(), ClonerModel::optimal()).unwrap();
    for m in Measure::ALL {
        let cv = FidelityConvention::all()[0].with_measure(*m);
        let a = model.average(&cv, &AveragingSpec::quadrature(64)).unwrap().value;
        let b = model.average(&cv, &AveragingSpec::quadrature(128)).unwrap().value;
        assert!((a - b).abs() < 1e-10, "{cv}: {a} vs {b}");
    }
}

#[test]
fn monte_carlo_agrees_with_quadrature_for_every_measure() {
    let model = GateModel::new(&CavityParams::reference_point(), ClonerModel::optimal()).unwrap();
    for m in Measure::ALL {
        let cv: FidelityConvention = "flipboth/aswritten/raw/uniform".parse::<FidelityConvention>().unwrap().with_measure(*m);
        let q = model.average(&cv, &AveragingSpec::default()).unwrap().value;
        let mc = model.average(&cv, &AveragingSpec::monte_carlo(100_000, 3)).unwrap();
        let se = mc.std_error.unwrap();
        assert!((mc.value - q).abs() <= 4.0 * se, "{cv}: {} ± {se} vs {q}", mc.value);
    }
}

#[test]
fn monte_carlo_is_seed_deterministic() {
    let model = GateModel::new(&CavityParams::reference_point(), ClonerModel::optimal()).unwrap();
    let cv: FidelityConvention = "flipboth/aswritten/raw/haar".parse().unwrap();
    let a = model.average(&cv, &AveragingSpec::monte_carlo(5_000, 8)).unwrap();
    let b = model.average(&cv, &AveragingSpec::monte_carlo(5_000, 8)).unwrap();
    let c = model.average(&cv, &AveragingSpec::monte_carlo(5_000, 9)).unwrap();
    assert_eq!(a, b);
    assert_ne!(a.value, c.value);
}
