//! Seeded sampling helpers shared by the sampler, the trajectory driver and
//! the property checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::conic::transversality_of_sigma;
use crate::numeric::{cx, pencil_cubic, solve_cubic, Cx, Mat3, Tolerance, Vec3};

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard complex Gaussian (unit variance split over both parts).
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Cx {
    let a: f64 = rng.sample(StandardNormal);
    let b: f64 = rng.sample(StandardNormal);
    cx(a, b) * core::f64::consts::FRAC_1_SQRT_2
}

pub fn random_vec3<R: Rng + ?Sized>(rng: &mut R) -> Vec3 {
    [
        complex_gaussian(rng),
        complex_gaussian(rng),
        complex_gaussian(rng),
    ]
}

pub fn random_matrix<R: Rng + ?Sized>(rng: &mut R) -> Mat3 {
    Mat3::from_columns([random_vec3(rng), random_vec3(rng), random_vec3(rng)])
}

pub fn random_symmetric<R: Rng + ?Sized>(rng: &mut R) -> Mat3 {
    let mut m = Mat3::zero();
    for i in 0..3 {
        for j in i..3 {
            let z = complex_gaussian(rng);
            m.0[i][j] = z;
            m.0[j][i] = z;
        }
    }
    m
}

/// Frobenius condition number ‖A‖‖A⁻¹‖ (infinite when singular).
pub fn condition_number(a: &Mat3) -> f64 {
    match a.inverse() {
        Some(inv) => a.frobenius() * inv.frobenius(),
        None => f64::INFINITY,
    }
}

/// Random matrix with condition number at most `max_condition`.
pub fn random_invertible<R: Rng + ?Sized>(rng: &mut R, max_condition: f64) -> Mat3 {
    loop {
        let a = random_matrix(rng);
        if condition_number(&a) <= max_condition {
            return a;
        }
    }
}

/// Random pair of max-modulus-normalized symmetric matrices, both
/// non-degenerate with condition at most 1e3, forming a transverse pencil
/// whose roots are separated by at least `min_separation` (relative).
pub fn random_transverse_pair<R: Rng + ?Sized>(
    rng: &mut R,
    min_separation: f64,
    tol: &Tolerance,
) -> (Mat3, Mat3) {
    loop {
        let c = random_symmetric(rng).normalized();
        let d = random_symmetric(rng).normalized();
        if condition_number(&c) > 1e3 || condition_number(&d) > 1e3 {
            continue;
        }
        let sigma = pencil_cubic(&c, &d);
        if !transversality_of_sigma(&sigma, tol).transverse {
            continue;
        }
        let Ok(roots) = solve_cubic(sigma[0], sigma[1], sigma[2], sigma[3], tol) else {
            continue;
        };
        if roots.is_simple() && roots.separation() >= min_separation {
            return (c, d);
        }
    }
}
