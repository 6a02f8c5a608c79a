use super::{
    det_columns, norm2, principal_sqrt, scale_vec3, solve_cubic, Cx, Mat3, Tolerance, Vec3,
};
use crate::conic::transversality_of_sigma;
use crate::error::{Error, Result};

/// Coefficients (σ₃₀, σ₂₁, σ₁₂, σ₀₃) of det(tC + D) = σ₃₀t³ + σ₂₁t² + σ₁₂t + σ₀₃,
/// expanded by multilinearity over the columns.
pub fn pencil_cubic(c: &Mat3, d: &Mat3) -> [Cx; 4] {
    let (c1, c2, c3) = (c.column(0), c.column(1), c.column(2));
    let (d1, d2, d3) = (d.column(0), d.column(1), d.column(2));
    [
        det_columns(&c1, &c2, &c3),
        det_columns(&c1, &c2, &d3) + det_columns(&c1, &d2, &c3) + det_columns(&d1, &c2, &c3),
        det_columns(&c1, &d2, &d3) + det_columns(&d1, &c2, &d3) + det_columns(&d1, &d2, &c3),
        det_columns(&d1, &d2, &d3),
    ]
}

/// Roots of det(tC + D) with their kernel vectors.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PencilSpectrum {
    /// Sorted by decreasing real part, then decreasing imaginary part.
    pub roots: [Cx; 3],
    /// (rᵢC + D)vᵢ = 0 with vᵢᵀCvᵢ = 1.
    pub vectors: [Vec3; 3],
    pub sigma: [Cx; 4],
    /// Minimum root distance relative to the largest root modulus.
    pub separation: f64,
}

impl PencilSpectrum {
    /// max ‖(rᵢC + D)vᵢ‖ / ((‖C‖ + ‖D‖)‖vᵢ‖).
    pub fn residual(&self, c: &Mat3, d: &Mat3) -> f64 {
        let scale = c.frobenius() + d.frobenius();
        (0..3).fold(0.0, |m, i| {
            let m_i = c.scale(self.roots[i]) + *d;
            let r = norm2(&m_i.mul_vec(&self.vectors[i]));
            m.max(r / (scale * norm2(&self.vectors[i])))
        })
    }
}

/// Simultaneous diagonalization data of a transverse pencil.
pub fn eigen_pencil(c: &Mat3, d: &Mat3, tol: &Tolerance) -> Result<PencilSpectrum> {
    if !(c.is_finite() && d.is_finite()) {
        return Err(Error::NonFinite);
    }
    let (cn, dn) = (c.normalized(), d.normalized());
    if cn.det().norm() <= tol.abs_eps || dn.det().norm() <= tol.abs_eps {
        return Err(Error::SingularConic);
    }
    let t = transversality_of_sigma(&pencil_cubic(&cn, &dn), tol);
    if !t.transverse {
        return Err(Error::DegeneratePencil);
    }
    let sigma = pencil_cubic(c, d);
    let cubic = solve_cubic(sigma[0], sigma[1], sigma[2], sigma[3], tol)?;
    if !cubic.is_simple() {
        return Err(Error::DegeneratePencil);
    }
    let mut roots = cubic.roots;
    roots.sort_by(|x, y| y.re.total_cmp(&x.re).then(y.im.total_cmp(&x.im)));
    let mut vectors = [[Cx::new(0.0, 0.0); 3]; 3];
    for (k, &r) in roots.iter().enumerate() {
        let v = kernel_vector(&(c.scale(r) + *d));
        let n = c.quad(&v);
        if n.norm() == 0.0 {
            return Err(Error::DegeneratePencil);
        }
        vectors[k] = scale_vec3(&v, principal_sqrt(n).inv());
    }
    Ok(PencilSpectrum {
        roots,
        vectors,
        sigma,
        separation: cubic.separation(),
    })
}

/// Kernel of a rank-2 matrix: the adjugate is rank one, proportional to vvᵀ
/// for symmetric input; take its column of largest norm.
pub(crate) fn kernel_vector(m: &Mat3) -> Vec3 {
    let adj = m.adjugate();
    let mut best = adj.column(0);
    let mut best_norm = norm2(&best);
    for j in 1..3 {
        let col = adj.column(j);
        let n = norm2(&col);
        if n > best_norm {
            best = col;
            best_norm = n;
        }
    }
    let s = best_norm.max(f64::MIN_POSITIVE);
    scale_vec3(&best, Cx::new(1.0 / s, 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{re, ZERO};
    use crate::random::{random_transverse_pair, seeded};

    fn diag(a: f64, b: f64, c: f64) -> Mat3 {
        Mat3::diag([re(a), re(b), re(c)])
    }

    #[test]
    fn diagonal_pencil() {
        let s = eigen_pencil(
            &Mat3::identity(),
            &diag(1.0, 2.0, 3.0),
            &Tolerance::default(),
        )
        .unwrap();
        for (k, want) in [-1.0, -2.0, -3.0].iter().enumerate() {
            assert!((s.roots[k] - re(*want)).norm() < 1e-12);
            for i in 0..3 {
                let e = if i == k { 1.0 } else { 0.0 };
                assert!((s.vectors[k][i].norm() - e).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn repeated_root_is_degenerate() {
        let r = eigen_pencil(
            &Mat3::identity(),
            &diag(1.0, 1.0, 2.0),
            &Tolerance::default(),
        );
        assert!(matches!(r, Err(Error::DegeneratePencil)));
    }

    #[test]
    fn singular_conic_rejected() {
        let r = eigen_pencil(
            &diag(1.0, 1.0, 0.0),
            &diag(1.0, 2.0, 3.0),
            &Tolerance::default(),
        );
        assert!(matches!(r, Err(Error::SingularConic)));
    }

    #[test]
    fn random_pairs_are_c_orthogonal() {
        let tol = Tolerance::default();
        let mut rng = seeded(11);
        for _ in 0..200 {
            let (c, d) = random_transverse_pair(&mut rng, 1e-2, &tol);
            let s = eigen_pencil(&c, &d, &tol).unwrap();
            assert!(s.residual(&c, &d) < tol.rel_eps);
            for i in 0..3 {
                assert!((c.quad(&s.vectors[i]) - re(1.0)).norm() < 1e-9);
                for j in 0..3 {
                    if i != j {
                        let x = c.bilinear(&s.vectors[i], &s.vectors[j]);
                        assert!(x.norm() < 1e-8, "{x}");
                    }
                }
            }
        }
    }

    #[test]
    fn pencil_cubic_interpolates_determinant() {
        let tol = Tolerance::default();
        let mut rng = seeded(3);
        for _ in 0..50 {
            let (c, d) = random_transverse_pair(&mut rng, 1e-3, &tol);
            let s = pencil_cubic(&c, &d);
            for t in [0.0, 1.0, -1.0, 2.0, -2.0] {
                let t = re(t);
                let direct = (c.scale(t) + d).det();
                let poly = ((s[0] * t + s[1]) * t + s[2]) * t + s[3];
                assert!((direct - poly).norm() < 1e-12 * (1.0 + direct.norm()));
            }
        }
        assert_eq!(pencil_cubic(&Mat3::zero(), &Mat3::zero()), [ZERO; 4]);
    }

    #[test]
    fn adjugate_of_pencil_member_is_rank_one_along_kernel() {
        let tol = Tolerance::default();
        let mut rng = seeded(5);
        let (c, d) = random_transverse_pair(&mut rng, 1e-2, &tol);
        let s = eigen_pencil(&c, &d, &tol).unwrap();
        for k in 0..3 {
            let m = c.scale(s.roots[k]) + d;
            let adj = m.adjugate();
            let v = s.vectors[k];
            let vvt = Mat3::outer(&v, &v);
            assert!(adj.projective_distance(&vvt) < 1e-7);
        }
    }
}
