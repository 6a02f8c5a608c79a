//! The congruence action of PGL(3, ℂ) on conic pairs, simultaneous normal
//! forms (I, diag λ), isotropy groups and the quotient map to ℙ(1,2,3).

use alloc::vec::Vec;

use crate::conic::{is_transverse, Conic};
use crate::error::{Error, Result};
use crate::numeric::{
    eigen_pencil, norm_max, pencil_cubic, principal_sqrt, projective_distance, Cx, Mat3, Tolerance,
    ONE, ZERO,
};
use crate::random::condition_number;

/// (AᵀCA, AᵀDA). A point x on C maps to A⁻¹x on the image.
pub fn act(a: &Mat3, c: &Conic, d: &Conic, tol: &Tolerance) -> Result<(Conic, Conic)> {
    if !a.is_finite() {
        return Err(Error::NonFinite);
    }
    if a.normalized().det().norm() <= tol.abs_eps {
        return Err(Error::SingularTransform);
    }
    Ok((
        Conic::from_matrix(&c.matrix().congruence(a))?,
        Conic::from_matrix(&d.matrix().congruence(a))?,
    ))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormalForm {
    /// Columns are C-normalized pencil eigenvectors: AᵀCA = I, AᵀDA = diag λ.
    pub transform: Mat3,
    /// λᵢ = −rᵢ for the roots rᵢ of det(tC + D).
    pub lambda: [Cx; 3],
    /// Frobenius condition number of the transform.
    pub conditioning: f64,
    /// Relative separation of the pencil roots.
    pub separation: f64,
    /// Set when the separation is below 1e-4.
    pub ill_conditioned: bool,
}

impl NormalForm {
    /// max(‖AᵀCA − I‖, ‖AᵀDA − diag λ‖ / ‖λ‖), max-modulus norms.
    pub fn residual(&self, c: &Conic, d: &Conic) -> f64 {
        let a = &self.transform;
        let rc = (c.matrix().congruence(a) - Mat3::identity()).norm_max();
        let scale = norm_max(&self.lambda).max(f64::MIN_POSITIVE);
        let rd = (d.matrix().congruence(a) - Mat3::diag(self.lambda)).norm_max() / scale;
        rc.max(rd)
    }
}

const ILL_CONDITIONED_SEPARATION: f64 = 1e-4;

pub fn normal_form(c: &Conic, d: &Conic, tol: &Tolerance) -> Result<NormalForm> {
    let spectrum = eigen_pencil(&c.matrix(), &d.matrix(), tol)?;
    let transform = Mat3::from_columns(spectrum.vectors);
    Ok(NormalForm {
        transform,
        lambda: spectrum.roots.map(|r| -r),
        conditioning: condition_number(&transform),
        separation: spectrum.separation,
        ill_conditioned: spectrum.separation < ILL_CONDITIONED_SEPARATION,
    })
}

/// Image of a transverse pair in ℙ(1,2,3): the elementary symmetric
/// functions (e₁, e₂, e₃) of λ up to eᵢ ~ tⁱeᵢ.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModuliPoint {
    pub e: [Cx; 3],
    /// (1, e₂/e₁², e₃/e₁³) when e₁ ≠ 0; otherwise (0, 1, e₃s³) with s² = 1/e₂
    /// and the sign putting the last entry in the right half plane; (0, 0, 1)
    /// when e₁ = e₂ = 0.
    pub canonical: [Cx; 3],
    /// The orbit of (1, ω, ω²), with a 12-element isotropy group.
    pub special: bool,
}

impl ModuliPoint {
    /// From the pencil coefficients: e = (σ₂₁, σ₁₂, σ₀₃)/σ₃₀.
    pub fn from_sigma(sigma: &[Cx; 4], tol: &Tolerance) -> Result<Self> {
        if sigma[0].norm() == 0.0 {
            return Err(Error::SingularConic);
        }
        Self::from_symmetric(
            [
                sigma[1] / sigma[0],
                sigma[2] / sigma[0],
                sigma[3] / sigma[0],
            ],
            tol,
        )
    }

    pub fn from_lambda(lambda: &[Cx; 3], tol: &Tolerance) -> Result<Self> {
        let [a, b, c] = *lambda;
        Self::from_symmetric([a + b + c, a * b + a * c + b * c, a * b * c], tol)
    }

    pub fn from_symmetric(e: [Cx; 3], tol: &Tolerance) -> Result<Self> {
        if !e.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let w = weighted_scale(&e);
        if w == 0.0 {
            return Err(Error::ZeroVector);
        }
        let small = |z: Cx, weight: i32| z.norm() <= tol.cluster_eps * w.powi(weight);
        let (canonical, special) = if !small(e[0], 1) {
            let e1 = e[0];
            ([ONE, e[1] / (e1 * e1), e[2] / (e1 * e1 * e1)], false)
        } else if !small(e[1], 2) {
            let s = principal_sqrt(e[1].inv());
            let mut third = e[2] * s * s * s;
            if third.re < 0.0 || (third.re == 0.0 && third.im < 0.0) {
                third = -third;
            }
            ([ZERO, ONE, third], false)
        } else {
            ([ZERO, ZERO, ONE], true)
        };
        Ok(ModuliPoint {
            e,
            canonical,
            special,
        })
    }

    /// Max-modulus difference of the canonical representatives. On the
    /// e₁ = 0 chart the last entry is compared through its square, which
    /// does not depend on the sign choice.
    pub fn distance(&self, other: &ModuliPoint) -> f64 {
        let (a, b) = (&self.canonical, &other.canonical);
        let scale = 1.0 + norm_max(a).max(norm_max(b));
        let mut d = (0..3).map(|i| (a[i] - b[i]).norm()).fold(0.0, f64::max);
        if a[0] == ZERO && b[0] == ZERO && a[1] == ONE && b[1] == ONE {
            d = d.min((a[2] * a[2] - b[2] * b[2]).norm() / (1.0 + a[2].norm().max(b[2].norm())));
        }
        d / scale
    }

    pub fn approx_eq(&self, other: &ModuliPoint, eps: f64) -> bool {
        self.distance(other) <= eps
    }
}

/// max(|e₁|, |e₂|^½, |e₃|^⅓), homogeneous of weight one.
pub fn weighted_scale(e: &[Cx; 3]) -> f64 {
    e[0].norm()
        .max(libm::sqrt(e[1].norm()))
        .max(libm::cbrt(e[2].norm()))
}

pub fn moduli_point(c: &Conic, d: &Conic, tol: &Tolerance) -> Result<ModuliPoint> {
    if !is_transverse(c, d, tol)?.transverse {
        return Err(Error::NotTransverse);
    }
    let sigma = pencil_cubic(&c.normalized().matrix(), &d.normalized().matrix());
    ModuliPoint::from_sigma(&sigma, tol)
}

pub fn is_special_orbit(c: &Conic, d: &Conic, tol: &Tolerance) -> Result<bool> {
    Ok(moduli_point(c, d, tol)?.special)
}

/// Projective transformations preserving both conics, as max-normalized
/// matrices.
#[derive(Clone, Debug, PartialEq)]
pub struct IsotropyGroup {
    pub elements: Vec<Mat3>,
    pub order: usize,
}

impl IsotropyGroup {
    /// Largest projective distance from a product gh to the nearest element.
    pub fn closure_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for g in &self.elements {
            for h in &self.elements {
                let gh = *g * *h;
                let best = self
                    .elements
                    .iter()
                    .map(|k| gh.projective_distance(k))
                    .fold(f64::INFINITY, f64::min);
                worst = worst.max(best);
            }
        }
        worst
    }

    /// Largest projective distance between gᵀCg and C, or gᵀDg and D.
    pub fn stabilizer_residual(&self, c: &Conic, d: &Conic) -> f64 {
        let (cm, dm) = (c.matrix(), d.matrix());
        self.elements.iter().fold(0.0, |m, g| {
            m.max(cm.congruence(g).projective_distance(&cm))
                .max(dm.congruence(g).projective_distance(&dm))
        })
    }
}

const PERMUTATIONS: [[usize; 3]; 6] = [
    [0, 1, 2],
    [1, 2, 0],
    [2, 0, 1],
    [0, 2, 1],
    [2, 1, 0],
    [1, 0, 2],
];

/// Stabilizer of the pair, of order 4 generically and 12 on the special orbit.
///
/// In normal-form coordinates every stabilizer is a signed permutation
/// matrix; the 24 classes in PGL(3) are tested against λ and conjugated back.
pub fn isotropy_group(c: &Conic, d: &Conic, tol: &Tolerance) -> Result<IsotropyGroup> {
    let nf = normal_form(c, d, tol)?;
    let a = nf.transform;
    let a_inv = a.inverse().ok_or(Error::SingularTransform)?;
    let lambda = nf.lambda;
    let mut elements = Vec::new();
    for perm in PERMUTATIONS {
        let permuted = [lambda[perm[0]], lambda[perm[1]], lambda[perm[2]]];
        if projective_distance(&permuted, &lambda) > tol.cluster_eps {
            continue;
        }
        for (s2, s3) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
            let signs = [1.0, s2, s3];
            let mut h = Mat3::zero();
            // h e_j = ± e_{perm[j]}, so hᵀ diag(λ) h = diag(λ ∘ perm)
            for j in 0..3 {
                h[(perm[j], j)] = Cx::new(signs[j], 0.0);
            }
            elements.push((a * h * a_inv).normalized());
        }
    }
    let order = elements.len();
    Ok(IsotropyGroup { elements, order })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{omega, re};
    use crate::random::{random_invertible, random_transverse_pair, seeded};

    fn pair(l: [Cx; 3]) -> (Conic, Conic) {
        (
            Conic::from_matrix(&Mat3::identity()).unwrap(),
            Conic::from_matrix(&Mat3::diag(l)).unwrap(),
        )
    }

    #[test]
    fn normal_form_of_random_pairs() {
        let t = Tolerance::default();
        let mut rng = seeded(2);
        for _ in 0..50 {
            let (c, d) = random_transverse_pair(&mut rng, 1e-2, &t);
            let (c, d) = (
                Conic::from_matrix(&c).unwrap(),
                Conic::from_matrix(&d).unwrap(),
            );
            let nf = normal_form(&c, &d, &t).unwrap();
            assert!(nf.residual(&c, &d) < 1e-9);
            assert!(!nf.ill_conditioned);
        }
    }

    #[test]
    fn moduli_point_from_sigma_matches_lambda() {
        let t = Tolerance::default();
        let (c, d) = pair([re(1.0), re(2.0), re(3.0)]);
        let m = moduli_point(&c, &d, &t).unwrap();
        let l = ModuliPoint::from_lambda(&[re(1.0), re(2.0), re(3.0)], &t).unwrap();
        assert!(m.approx_eq(&l, 1e-14));
        assert!((m.canonical[1] - re(11.0 / 36.0)).norm() < 1e-15);
    }

    #[test]
    fn canonical_form_is_weighted_scale_invariant() {
        let t = Tolerance::default();
        let l = [re(1.0), Cx::new(0.5, 2.0), re(-3.0)];
        let a = ModuliPoint::from_lambda(&l, &t).unwrap();
        let s = Cx::new(-0.3, 1.7);
        let b = ModuliPoint::from_lambda(&l.map(|x| x * s), &t).unwrap();
        assert!(a.approx_eq(&b, 1e-13));
        let c = ModuliPoint::from_lambda(&[l[2], l[0], l[1]], &t).unwrap();
        assert!(a.approx_eq(&c, 1e-13));
    }

    #[test]
    fn canonical_form_with_vanishing_trace() {
        let t = Tolerance::default();
        let l = [re(1.0), re(2.0), re(-3.0)];
        let a = ModuliPoint::from_lambda(&l, &t).unwrap();
        assert_eq!(a.canonical[0], ZERO);
        assert_eq!(a.canonical[1], ONE);
        assert!(a.canonical[2].re >= 0.0);
        assert!((a.canonical[2] * a.canonical[2] - re(-36.0 / 343.0)).norm() < 1e-15);
        let s = Cx::new(0.2, -1.1);
        let b = ModuliPoint::from_lambda(&l.map(|x| x * s), &t).unwrap();
        assert!(a.approx_eq(&b, 1e-12));
        assert!(!a.special);
    }

    #[test]
    fn special_orbit() {
        let t = Tolerance::default();
        let w = omega();
        let (c, d) = pair([ONE, w, w * w]);
        assert!(is_special_orbit(&c, &d, &t).unwrap());
        let g = isotropy_group(&c, &d, &t).unwrap();
        assert_eq!(g.order, 12);
        assert!(g.closure_residual() < 1e-10);
        assert!(g.stabilizer_residual(&c, &d) < 1e-10);
    }

    #[test]
    fn generic_isotropy_has_order_four() {
        let t = Tolerance::default();
        let mut rng = seeded(9);
        for _ in 0..20 {
            let (c, d) = random_transverse_pair(&mut rng, 1e-2, &t);
            let (c, d) = (
                Conic::from_matrix(&c).unwrap(),
                Conic::from_matrix(&d).unwrap(),
            );
            let g = isotropy_group(&c, &d, &t).unwrap();
            assert_eq!(g.order, 4);
            assert!(g.closure_residual() < 1e-8);
            assert!(g.stabilizer_residual(&c, &d) < 1e-8);
        }
    }

    #[test]
    fn moduli_point_is_congruence_invariant() {
        let t = Tolerance::default();
        let mut rng = seeded(12);
        let (c, d) = random_transverse_pair(&mut rng, 1e-2, &t);
        let (c, d) = (
            Conic::from_matrix(&c).unwrap(),
            Conic::from_matrix(&d).unwrap(),
        );
        let base = moduli_point(&c, &d, &t).unwrap();
        for _ in 0..50 {
            let a = random_invertible(&mut rng, 1e2);
            let (c1, d1) = act(&a, &c, &d, &t).unwrap();
            let m = moduli_point(&c1, &d1, &t).unwrap();
            assert!(
                m.approx_eq(&base, 1e-9),
                "{:?} {:?}",
                m.canonical,
                base.canonical
            );
        }
    }

    #[test]
    fn act_rejects_singular_transform() {
        let t = Tolerance::default();
        let (c, d) = pair([re(1.0), re(2.0), re(3.0)]);
        let a = Mat3::diag([ONE, ONE, ZERO]);
        assert!(matches!(act(&a, &c, &d, &t), Err(Error::SingularTransform)));
    }

    #[test]
    fn non_transverse_pairs_have_no_moduli_point() {
        let t = Tolerance::default();
        let (c, d) = pair([re(1.0), re(1.0), re(3.0)]);
        assert!(matches!(
            moduli_point(&c, &d, &t),
            Err(Error::NotTransverse)
        ));
    }
}
