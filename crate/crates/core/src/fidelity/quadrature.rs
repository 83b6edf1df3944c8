//! Quadrature rules over single-qubit input states.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

/// Equispaced nodes `2πk/n` on `[0, 2π)`.
///
/// For a periodic integrand the trapezoid rule on these nodes (weights `1/n`)
/// is exact for trigonometric polynomials of degree `< n` and converges
/// geometrically for analytic ones.
pub fn periodic_nodes(n: usize) -> Vec<f64> {
    (0..n).map(|k| TAU * k as f64 / n as f64).collect()
}

/// Mean of a 2π-periodic function, by the trapezoid rule on `n` nodes.
pub fn periodic_mean(n: usize, mut f: impl FnMut(f64) -> f64) -> f64 {
    periodic_nodes(n).into_iter().map(&mut f).sum::<f64>() / n as f64
}

/// Gauss–Legendre nodes and weights on `[−1, 1]`, ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n > 0, "need at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        // Tricomi's initial guess, then Newton on P_n.
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d.is_finite() {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let dp = n as f64 * (x * p - p0) / (x * x - 1.0);
    (p, dp)
}

/// A weighted single-qubit state `(a_R, a_L)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightedQubit {
    pub a_r: Complex64,
    pub a_l: Complex64,
    pub weight: f64,
}

/// `cos θ|R⟩ + sin θ|L⟩` with θ on `n` equispaced nodes.
pub fn uniform_angle_states(n: usize) -> Vec<WeightedQubit> {
    let w = 1.0 / n as f64;
    periodic_nodes(n)
        .into_iter()
        .map(|theta| WeightedQubit {
            a_r: theta.cos().into(),
            a_l: theta.sin().into(),
            weight: w,
        })
        .collect()
}

/// Haar measure on the Bloch sphere: `cos(θ/2)|R⟩ + e^{iφ} sin(θ/2)|L⟩` with
/// Gauss–Legendre in `cos θ` and the trapezoid rule in φ, `n` points each.
/// Global phase drops out of every fidelity, so it is not sampled.
pub fn haar_states(n: usize) -> Vec<WeightedQubit> {
    let (u, wu) = gauss_legendre(n);
    let phis = periodic_nodes(n);
    let mut out = Vec::with_capacity(n * n);
    for (&ui, &wi) in u.iter().zip(&wu) {
        let up = ((1.0 + ui) / 2.0).max(0.0).sqrt();
        let down = ((1.0 - ui) / 2.0).max(0.0).sqrt();
        for &phi in &phis {
            out.push(WeightedQubit {
                a_r: up.into(),
                a_l: Complex64::from_polar(down, phi),
                weight: wi / 2.0 / n as f64,
            });
        }
    }
    out
}

/// `|R⟩` and `|L⟩`, weight ½ each.
pub fn basis_states() -> Vec<WeightedQubit> {
    vec![
        WeightedQubit {
            a_r: 1.0.into(),
            a_l: 0.0.into(),
            weight: 0.5,
        },
        WeightedQubit {
            a_r: 0.0.into(),
            a_l: 1.0.into(),
            weight: 0.5,
        },
    ]
}
