//! Cayley's criterion: the square-root series of det(tC + D), Hankel
//! determinants for n-gons, the triangle equation γ and the fiber map ψ_D.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::conic::{is_transverse, Conic};
use crate::error::{Error, Result};
use crate::numeric::{
    det_dense, norm_max, pencil_cubic, principal_sqrt, solve_quadratic_homogeneous, Cx, Mat3,
    Tolerance, ZERO,
};
use crate::random::random_symmetric;

/// Taylor coefficients A₀, A₁, … of √(det(tC + D)) at t = 0.
#[derive(Clone, Debug, PartialEq)]
pub struct CayleySeries {
    pub coeffs: Vec<Cx>,
}

impl CayleySeries {
    /// The other branch of the square root.
    pub fn negated(&self) -> CayleySeries {
        CayleySeries {
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }

    pub fn get(&self, k: usize) -> Cx {
        self.coeffs[k]
    }
}

/// Square-root series of σ₀₃ + σ₁₂t + σ₂₁t² + σ₃₀t³ up to degree `terms − 1`
/// on the principal branch of A₀ = √σ₀₃.
pub fn sqrt_series(sigma: &[Cx; 4], terms: usize) -> Result<CayleySeries> {
    let p = [sigma[3], sigma[2], sigma[1], sigma[0]];
    if p[0].norm() == 0.0 {
        return Err(Error::BranchPole);
    }
    let mut a: Vec<Cx> = Vec::with_capacity(terms);
    if terms == 0 {
        return Ok(CayleySeries { coeffs: a });
    }
    a.push(principal_sqrt(p[0]));
    let two_a0 = a[0] * 2.0;
    for k in 1..terms {
        let pk = if k < 4 { p[k] } else { ZERO };
        let conv: Cx = (1..k).map(|i| a[i] * a[k - i]).sum();
        a.push((pk - conv) / two_a0);
    }
    Ok(CayleySeries { coeffs: a })
}

/// γ = −σ₁₂² + 4σ₀₃σ₂₁; vanishes exactly when a triangle inscribed in C is
/// circumscribed about D.
pub fn gamma_from_sigma(sigma: &[Cx; 4]) -> Cx {
    let [_, s21, s12, s03] = *sigma;
    -(s12 * s12) + s03 * s21 * 4.0
}

pub fn cayley_gamma(c: &Conic, d: &Conic) -> Cx {
    gamma_from_sigma(&pencil_cubic(&c.matrix(), &d.matrix()))
}

/// Hankel matrix of the Cayley condition for n-gons, row-major with its size.
///
/// n = 2m + 1: (A_{i+j}) for 1 ≤ i, j ≤ m. n = 2m: (A_{i+j+1}) for
/// 1 ≤ i, j ≤ m − 1.
pub fn hankel_matrix(series: &CayleySeries, n: usize) -> Result<(Vec<Cx>, usize)> {
    if n < 3 {
        return Err(Error::BadOrder(n));
    }
    let (size, offset) = if n % 2 == 1 {
        (n / 2, 0)
    } else {
        (n / 2 - 1, 1)
    };
    let needed = 2 * size + offset + 1;
    if series.coeffs.len() < needed {
        return Err(Error::BadOrder(n));
    }
    let mut h = vec![ZERO; size * size];
    for i in 0..size {
        for j in 0..size {
            h[i * size + j] = series.coeffs[i + j + 2 + offset];
        }
    }
    Ok((h, size))
}

/// Number of series terms the order-n condition reads.
pub fn terms_for_order(n: usize) -> usize {
    n
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CayleyVerdict {
    pub n: usize,
    /// The triangle equation, reported for every n.
    pub gamma: Cx,
    /// Hankel determinant of the raw series (A₂ for n = 3).
    pub hankel: Cx,
    pub satisfied: bool,
    /// Bound the decision statistic was compared against.
    pub threshold: f64,
}

/// Cayley's condition for a closed n-gon inscribed in C and circumscribed
/// about D.
///
/// For n = 3 the test is |γ| ≤ rel_eps·‖C‖²‖D‖⁴. For larger n the Hankel
/// determinant is recomputed on Ãₖ = Aₖρᵏ/A₀, ρ the smallest pencil-root
/// modulus, and compared with rel_eps·(maxₖ |Ãₖ|)^size.
pub fn cayley_condition_n(
    c: &Conic,
    d: &Conic,
    n: usize,
    tol: &Tolerance,
) -> Result<CayleyVerdict> {
    if n < 3 {
        return Err(Error::BadOrder(n));
    }
    if d.is_degenerate(tol) {
        return Err(Error::SingularConic);
    }
    let (cm, dm) = (c.matrix(), d.matrix());
    let sigma = pencil_cubic(&cm, &dm);
    let series = sqrt_series(&sigma, terms_for_order(n))?;
    let (h, size) = hankel_matrix(&series, n)?;
    let hankel = det_dense(h, size);
    let gamma = gamma_from_sigma(&sigma);
    if n == 3 {
        let (nc, nd) = (cm.norm_max(), dm.norm_max());
        let threshold = tol.rel_eps * nc * nc * nd.powi(4);
        return Ok(CayleyVerdict {
            n,
            gamma,
            hankel,
            satisfied: gamma.norm() <= threshold,
            threshold,
        });
    }
    let rho = smallest_root_modulus(&sigma)?;
    let a0 = series.coeffs[0];
    let mut scaled = series.clone();
    let mut power = 1.0;
    for a in scaled.coeffs.iter_mut() {
        *a = *a * power / a0;
        power *= rho;
    }
    let (hs, _) = hankel_matrix(&scaled, n)?;
    let scale = norm_max(&scaled.coeffs);
    let threshold = tol.rel_eps * scale.powi(size as i32);
    Ok(CayleyVerdict {
        n,
        gamma,
        hankel,
        satisfied: det_dense(hs, size).norm() <= threshold,
        threshold,
    })
}

fn smallest_root_modulus(sigma: &[Cx; 4]) -> Result<f64> {
    let start = sigma
        .iter()
        .position(|z| z.norm() != 0.0)
        .ok_or(Error::DegeneratePencil)?;
    let roots = crate::numeric::poly_roots(&sigma[start..], 2)?;
    let rho = roots.iter().map(|r| r.norm()).fold(f64::INFINITY, f64::min);
    // a polynomial without roots (C = 0 pencil) has an entire square root
    Ok(if rho.is_finite() && rho > 0.0 {
        rho
    } else {
        1.0
    })
}

/// E = D⁻¹C, the trivialization of the fiber over D.
pub fn trivialize_psi(c: &Conic, d: &Conic, tol: &Tolerance) -> Result<Mat3> {
    if d.is_degenerate(tol) {
        return Err(Error::SingularConic);
    }
    let inv = d.matrix().inverse().ok_or(Error::SingularConic)?;
    Ok(inv * c.matrix())
}

/// Inverse of [`trivialize_psi`]: C = D·E.
pub fn untrivialize(d: &Conic, e: &Mat3) -> Result<Conic> {
    Conic::from_matrix(&(d.matrix() * *e))
}

/// −Σeᵢᵢ² + 2Σ_{i<j}eᵢᵢeⱼⱼ − 4Σ_{i<j}eᵢⱼeⱼᵢ, which equals γ(E, I); hence
/// γ(C, D) = det(D)²·q(D⁻¹C).
pub fn psi_quadric(e: &Mat3) -> Cx {
    let mut q = ZERO;
    for i in 0..3 {
        q -= e[(i, i)] * e[(i, i)];
        for j in (i + 1)..3 {
            q += e[(i, i)] * e[(j, j)] * 2.0 - e[(i, j)] * e[(j, i)] * 4.0;
        }
    }
    q
}

/// |q(E)| / ‖E‖², scale-free.
pub fn quadric_residual(e: &Mat3) -> f64 {
    let n = e.norm_max();
    if n == 0.0 {
        return 0.0;
    }
    psi_quadric(e).norm() / (n * n)
}

const MAX_SAMPLING_ATTEMPTS: usize = 1000;

/// A conic C with γ(C, D) = 0 and (C, D) transverse.
///
/// γ(·, D) is a quadratic form on conics; it is restricted to a random line
/// of ℂℙ⁵ and one of the two roots kept. Degenerate draws are rejected.
pub fn sample_cayley<R: Rng + ?Sized>(d: &Conic, rng: &mut R, tol: &Tolerance) -> Result<Conic> {
    if d.is_degenerate(tol) {
        return Err(Error::SingularConic);
    }
    let dm = d.normalized().matrix();
    let gamma_at = |m: &Mat3| gamma_from_sigma(&pencil_cubic(m, &dm));
    for _ in 0..MAX_SAMPLING_ATTEMPTS {
        let c0 = random_symmetric(rng).normalized();
        let c1 = random_symmetric(rng).normalized();
        let g0 = gamma_at(&c0);
        let gp = gamma_at(&(c0 + c1));
        let gm = gamma_at(&(c0 - c1));
        // γ(c0 + s c1) = a s² + b s + g0
        let a = (gp + gm) * 0.5 - g0;
        let b = (gp - gm) * 0.5;
        let Some(q) = solve_quadratic_homogeneous(a, b, g0) else {
            continue;
        };
        let pick = usize::from(rng.random::<bool>());
        let [s, t] = q.roots[pick];
        let Ok(c) = Conic::from_matrix(&(c0.scale(t) + c1.scale(s))) else {
            continue;
        };
        let c = c.normalized();
        if c.is_degenerate(tol) {
            continue;
        }
        match is_transverse(&c, d, tol) {
            Ok(t) if t.transverse => {}
            _ => continue,
        }
        if !cayley_condition_n(&c, &d.normalized(), 3, tol)?.satisfied {
            continue;
        }
        return Ok(c);
    }
    Err(Error::SamplingExhausted(MAX_SAMPLING_ATTEMPTS))
}
