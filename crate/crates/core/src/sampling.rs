use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

/// Haar-random single-qubit amplitudes from a normalized complex Gaussian.
pub fn haar_qubit<R: Rng + ?Sized>(rng: &mut R) -> (Complex64, Complex64) {
    loop {
        let z: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
        let a = Complex64::new(z[0], z[1]);
        let b = Complex64::new(z[2], z[3]);
        let norm = (a.norm_sqr() + b.norm_sqr()).sqrt();
        if norm > 1e-150 {
            return (a / norm, b / norm);
        }
    }
}

/// SplitMix64 finalizer, used to derive independent per-cell seeds.
pub fn mix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}
