//! Conics as symmetric matrices, pencil coefficients, the discriminant of the
//! pencil cubic, transversality, intersection points and dual conics.

use crate::error::{Error, Result};
use crate::numeric::{
    is_finite, norm_max, pencil_cubic, pivot_index, solve_cubic, solve_quadratic_homogeneous, Cx,
    Mat3, Point2, Tolerance, Vec3, ZERO,
};

/// A conic given by six homogeneous coordinates [x₀ : … : x₅], the upper
/// triangle of its matrix read row by row:
///
/// ```text
/// x0 x1 x2
/// x1 x3 x4
/// x2 x4 x5
/// ```
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Conic {
    coords: [Cx; 6],
}

const UPPER: [(usize, usize); 6] = [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)];

impl Conic {
    pub fn new(coords: [Cx; 6]) -> Result<Self> {
        if !coords.iter().all(|z| is_finite(*z)) {
            return Err(Error::NonFinite);
        }
        if coords.iter().all(|z| z.norm() == 0.0) {
            return Err(Error::ZeroVector);
        }
        Ok(Conic { coords })
    }

    /// Off-diagonal entries are averaged, so nearly symmetric input (e.g. a
    /// congruence image) is accepted.
    pub fn from_matrix(m: &Mat3) -> Result<Self> {
        let s = m.symmetrized();
        Self::new(UPPER.map(|(i, j)| s[(i, j)]))
    }

    pub fn coords(&self) -> &[Cx; 6] {
        &self.coords
    }

    pub fn matrix(&self) -> Mat3 {
        let x = &self.coords;
        Mat3([[x[0], x[1], x[2]], [x[1], x[3], x[4]], [x[2], x[4], x[5]]])
    }

    /// Representative whose coordinate of largest modulus is 1.
    pub fn normalized(&self) -> Conic {
        let p = self.coords[pivot_index(&self.coords)];
        Conic {
            coords: self.coords.map(|z| z / p),
        }
    }

    pub fn scaled(&self, s: Cx) -> Conic {
        Conic {
            coords: self.coords.map(|z| z * s),
        }
    }

    /// Determinant of the max-modulus-normalized matrix.
    pub fn normalized_det(&self) -> Cx {
        self.normalized().matrix().det()
    }

    pub fn is_degenerate(&self, tol: &Tolerance) -> bool {
        self.normalized_det().norm() <= tol.abs_eps
    }

    pub fn projective_distance(&self, other: &Conic) -> f64 {
        crate::numeric::projective_distance(&self.coords, &other.coords)
    }
}

/// An ordered pair (C, D) with its pencil coefficients.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConicPair {
    pub c: Conic,
    pub d: Conic,
    /// (σ₃₀, σ₂₁, σ₁₂, σ₀₃) of det(tC + D) for the stored representatives.
    pub sigma: [Cx; 4],
    pub discriminant: Cx,
}

impl ConicPair {
    pub fn new(c: Conic, d: Conic) -> Self {
        let sigma = sigma_coefficients(&c, &d);
        ConicPair {
            c,
            d,
            sigma,
            discriminant: discriminant(&sigma),
        }
    }

    pub fn from_matrices(c: &Mat3, d: &Mat3) -> Result<Self> {
        Ok(Self::new(Conic::from_matrix(c)?, Conic::from_matrix(d)?))
    }

    pub fn c_matrix(&self) -> Mat3 {
        self.c.matrix()
    }

    pub fn d_matrix(&self) -> Mat3 {
        self.d.matrix()
    }

    /// Both conics rescaled to unit maximum modulus.
    pub fn normalized(&self) -> ConicPair {
        Self::new(self.c.normalized(), self.d.normalized())
    }

    /// Largest mismatch between the cubic and det(tC + D) at t ∈ {0, ±1, ±2},
    /// relative to the determinant's size.
    pub fn sigma_residual(&self) -> f64 {
        let (c, d) = (self.c_matrix(), self.d_matrix());
        let s = &self.sigma;
        [0.0, 1.0, -1.0, 2.0, -2.0]
            .iter()
            .map(|&t| {
                let t = Cx::new(t, 0.0);
                let direct = (c.scale(t) + d).det();
                let poly = ((s[0] * t + s[1]) * t + s[2]) * t + s[3];
                (direct - poly).norm() / (1.0 + direct.norm())
            })
            .fold(0.0, f64::max)
    }

    pub fn is_transverse(&self, tol: &Tolerance) -> Result<Transversality> {
        is_transverse(&self.c, &self.d, tol)
    }
}

pub fn sigma_coefficients(c: &Conic, d: &Conic) -> [Cx; 4] {
    pencil_cubic(&c.matrix(), &d.matrix())
}

/// Discriminant of σ₃₀t³ + σ₂₁t² + σ₁₂t + σ₀₃ in the unnormalized polynomial
/// form; it equals σ₃₀⁴ ∏(rᵢ − rⱼ)².
pub fn discriminant(sigma: &[Cx; 4]) -> Cx {
    let [s30, s21, s12, s03] = *sigma;
    s21 * s21 * s12 * s12
        - s30 * s12 * s12 * s12 * 4.0
        - s21 * s21 * s21 * s03 * 4.0
        - s30 * s30 * s03 * s03 * 27.0
        + s30 * s21 * s12 * s03 * 18.0
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Transversality {
    pub transverse: bool,
    /// Discriminant of the pencil of the normalized pair.
    pub discriminant: Cx,
    /// rel_eps · (max |σ|)⁴.
    pub threshold: f64,
    /// Minimum pencil-root distance relative to the largest root; NaN when
    /// the cubic degenerates.
    pub root_separation: f64,
}

pub(crate) fn transversality_of_sigma(sigma: &[Cx; 4], tol: &Tolerance) -> Transversality {
    let disc = discriminant(sigma);
    let scale = norm_max(sigma);
    let threshold = tol.rel_eps * scale.powi(4);
    let root_separation = solve_cubic(sigma[0], sigma[1], sigma[2], sigma[3], tol)
        .map(|r| r.separation())
        .unwrap_or(f64::NAN);
    Transversality {
        transverse: scale > 0.0 && disc.norm() > threshold,
        discriminant: disc,
        threshold,
        root_separation,
    }
}

pub fn is_transverse(c: &Conic, d: &Conic, tol: &Tolerance) -> Result<Transversality> {
    if c.is_degenerate(tol) || d.is_degenerate(tol) {
        return Err(Error::SingularConic);
    }
    let sigma = sigma_coefficients(&c.normalized(), &d.normalized());
    Ok(transversality_of_sigma(&sigma, tol))
}

pub fn dual_conic(c: &Conic, tol: &Tolerance) -> Result<Conic> {
    if c.is_degenerate(tol) {
        return Err(Error::SingularConic);
    }
    Conic::from_matrix(&c.matrix().adjugate())
}

/// Splits a rank-2 symmetric matrix M = lmᵀ + mlᵀ into its two lines.
///
/// adj(M) = −ppᵀ with p = l × m the singular point, and M − [p]ₓ = 2lmᵀ has
/// rank one.
pub fn split_degenerate_conic(m: &Mat3) -> [Vec3; 2] {
    let b = m.adjugate();
    let diag = [b[(0, 0)], b[(1, 1)], b[(2, 2)]];
    let i = pivot_index(&diag);
    let beta = (-diag[i]).sqrt();
    let p = if beta.norm() == 0.0 {
        [ZERO; 3]
    } else {
        let col = b.column(i);
        [-col[0] / beta, -col[1] / beta, -col[2] / beta]
    };
    let n = *m - Mat3::cross_matrix(&p);
    let entries = n.entries();
    let k = pivot_index(&entries);
    let (r, c) = (k / 3, k % 3);
    [n.column(c), n.row(r)]
}

/// Two independent points spanning the line `l`.
pub(crate) fn line_basis(l: &Vec3) -> [Vec3; 2] {
    let p = pivot_index(l);
    let others = [(p + 1) % 3, (p + 2) % 3];
    others.map(|j| {
        let mut u = [ZERO; 3];
        u[j] = l[p];
        u[p] = -l[j];
        u
    })
}

/// The two intersection points of line `l` with the conic `c`.
pub(crate) fn line_conic_intersection(l: &Vec3, c: &Mat3) -> Option<[Vec3; 2]> {
    let [u, w] = line_basis(l);
    let q = solve_quadratic_homogeneous(c.quad(&u), c.bilinear(&u, &w) * 2.0, c.quad(&w))?;
    Some(q.roots.map(|[s, t]| {
        [
            u[0] * s + w[0] * t,
            u[1] * s + w[1] * t,
            u[2] * s + w[2] * t,
        ]
    }))
}

/// Newton refinement of a common point of two conics in the affine chart of
/// its largest coordinate.
fn refine_common_point(x: Vec3, c: &Mat3, d: &Mat3) -> Vec3 {
    let p = pivot_index(&x);
    let mut x = x.map(|z| z / x[p]);
    let (j, k) = ((p + 1) % 3, (p + 2) % 3);
    for _ in 0..4 {
        let (f, g) = (c.quad(&x), d.quad(&x));
        let (cx_, dx_) = (c.mul_vec(&x), d.mul_vec(&x));
        let (a, b, cc, dd) = (cx_[j] * 2.0, cx_[k] * 2.0, dx_[j] * 2.0, dx_[k] * 2.0);
        let det = a * dd - b * cc;
        if det.norm() == 0.0 {
            break;
        }
        let dj = (f * dd - b * g) / det;
        let dk = (a * g - cc * f) / det;
        let mut y = x;
        y[j] -= dj;
        y[k] -= dk;
        if !(is_finite(y[j]) && is_finite(y[k])) {
            break;
        }
        let before = f.norm() + g.norm();
        let after = c.quad(&y).norm() + d.quad(&y).norm();
        if after >= before {
            break;
        }
        x = y;
    }
    x
}

/// The four intersection points of a transverse pair.
///
/// Splits the best-conditioned singular member of the pencil into two lines
/// and intersects each with C.
pub fn intersection_points(c: &Conic, d: &Conic, tol: &Tolerance) -> Result<[Point2; 4]> {
    if !is_transverse(c, d, tol)?.transverse {
        return Err(Error::DegeneratePencil);
    }
    let (cm, dm) = (c.normalized().matrix(), d.normalized().matrix());
    let sigma = pencil_cubic(&cm, &dm);
    let roots = solve_cubic(sigma[0], sigma[1], sigma[2], sigma[3], tol)?;
    let member = roots
        .roots
        .iter()
        .map(|&r| cm.scale(r) + dm)
        .max_by(|a, b| rank_two_quality(a).total_cmp(&rank_two_quality(b)))
        .ok_or(Error::DegeneratePencil)?;
    let lines = split_degenerate_conic(&member);
    let mut pts = [[ZERO; 3]; 4];
    for (i, l) in lines.iter().enumerate() {
        let [a, b] = line_conic_intersection(l, &cm).ok_or(Error::DegeneratePencil)?;
        pts[2 * i] = refine_common_point(a, &cm, &dm);
        pts[2 * i + 1] = refine_common_point(b, &cm, &dm);
    }
    let points = [
        Point2::new(pts[0])?,
        Point2::new(pts[1])?,
        Point2::new(pts[2])?,
        Point2::new(pts[3])?,
    ];
    for i in 0..4 {
        for j in (i + 1)..4 {
            if points[i].distance(&points[j]) < tol.cluster_eps {
                return Err(Error::DegeneratePencil);
            }
        }
    }
    Ok(points)
}

/// ‖adj M‖ / ‖M‖²: zero for rank ≤ 1, largest for a well-separated line pair.
fn rank_two_quality(m: &Mat3) -> f64 {
    let n = m.norm_max();
    if n == 0.0 {
        return 0.0;
    }
    m.adjugate().norm_max() / (n * n)
}

/// |p̂ᵀ M̂ p̂| for the max-modulus-normalized point and matrix.
pub fn incidence_residual(m: &Mat3, p: &Point2) -> f64 {
    let v = p.unit_scaled();
    m.normalized().quad(&v).norm()
}

/// Whether a line (in line coordinates) is tangent to `c`.
pub fn is_tangent_line(c: &Conic, line: &Point2, tol: &Tolerance) -> Result<bool> {
    let dual = dual_conic(c, tol)?;
    Ok(incidence_residual(&dual.matrix(), line) < tol.rel_eps)
}

#[cfg(test)]
pub(crate) fn conic_from_real(rows: [[f64; 3]; 3]) -> Conic {
    Conic::from_matrix(&Mat3::from_real(rows)).expect("nonzero literal conic")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{cx, re};
    use crate::random::{random_invertible, random_transverse_pair, seeded};

    fn diag(a: f64, b: f64, c: f64) -> Conic {
        conic_from_real([[a, 0.0, 0.0], [0.0, b, 0.0], [0.0, 0.0, c]])
    }

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn matrix_layout_follows_coordinate_order() {
        let c = Conic::new([re(0.0), re(1.0), re(2.0), re(3.0), re(4.0), re(5.0)]).unwrap();
        let m = c.matrix();
        assert_eq!(m[(0, 1)], re(1.0));
        assert_eq!(m[(1, 0)], re(1.0));
        assert_eq!(m[(0, 2)], re(2.0));
        assert_eq!(m[(1, 1)], re(3.0));
        assert_eq!(m[(2, 1)], re(4.0));
        assert_eq!(m[(2, 2)], re(5.0));
        assert_eq!(m.asymmetry(), 0.0);
    }

    #[test]
    fn sigma_of_diagonal_pencil() {
        let s = sigma_coefficients(&diag(1.0, 1.0, 1.0), &diag(1.0, 2.0, 3.0));
        assert_eq!(s, [re(1.0), re(6.0), re(11.0), re(6.0)]);
    }

    #[test]
    fn sigma_of_identical_conics() {
        let mut rng = seeded(1);
        let (c, _) = random_transverse_pair(&mut rng, 1e-2, &tol());
        let c = Conic::from_matrix(&c).unwrap();
        let s = sigma_coefficients(&c, &c);
        let det = c.matrix().det();
        for (k, binom) in [1.0, 3.0, 3.0, 1.0].iter().enumerate() {
            assert!((s[k] - det * *binom).norm() < 1e-12);
        }
    }

    #[test]
    fn discriminant_examples() {
        assert_eq!(
            discriminant(&[re(1.0), re(-6.0), re(11.0), re(-6.0)]),
            re(4.0)
        );
        assert_eq!(discriminant(&[re(1.0), ZERO, ZERO, ZERO]), ZERO);
        // doubled polynomial: leading-coefficient factor σ₃₀⁴
        let d2 = discriminant(&[re(2.0), re(-12.0), re(22.0), re(-12.0)]);
        assert!((d2 - re(64.0)).norm() < 1e-9);
    }

    #[test]
    fn transversality_examples() {
        assert!(
            is_transverse(&diag(1.0, 1.0, 1.0), &diag(1.0, 2.0, 3.0), &tol())
                .unwrap()
                .transverse
        );
        assert!(
            !is_transverse(&diag(1.0, 1.0, -4.0), &diag(1.0, 1.0, -1.0), &tol())
                .unwrap()
                .transverse
        );
        let c = diag(1.0, 2.0, 3.0);
        assert!(!is_transverse(&c, &c, &tol()).unwrap().transverse);
        assert!(matches!(
            is_transverse(&diag(1.0, 1.0, 0.0), &c, &tol()),
            Err(Error::SingularConic)
        ));
    }

    #[test]
    fn transversality_is_congruence_invariant() {
        let t = tol();
        let mut rng = seeded(21);
        let (c, d) = random_transverse_pair(&mut rng, 1e-2, &t);
        let (c0, d0) = (
            Conic::from_matrix(&c).unwrap(),
            Conic::from_matrix(&d).unwrap(),
        );
        let base = is_transverse(&c0, &d0, &t).unwrap().transverse;
        let (e, f) = (diag(1.0, 1.0, -4.0), diag(1.0, 1.0, -1.0));
        for _ in 0..100 {
            let a = random_invertible(&mut rng, 1e2);
            let c1 = Conic::from_matrix(&c.congruence(&a)).unwrap();
            let d1 = Conic::from_matrix(&d.congruence(&a)).unwrap();
            assert_eq!(is_transverse(&c1, &d1, &t).unwrap().transverse, base);
            let e1 = Conic::from_matrix(&e.matrix().congruence(&a)).unwrap();
            let f1 = Conic::from_matrix(&f.matrix().congruence(&a)).unwrap();
            assert!(!is_transverse(&e1, &f1, &t).unwrap().transverse);
        }
    }

    #[test]
    fn circle_and_ellipse_intersections() {
        let c = diag(1.0, 1.0, -1.0);
        let d = diag(0.25, 4.0, -1.0);
        let pts = intersection_points(&c, &d, &tol()).unwrap();
        let (x, y) = (libm::sqrt(0.8), libm::sqrt(0.2));
        for (sx, sy) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
            let want = Point2::new([re(sx * x), re(sy * y), re(1.0)]).unwrap();
            assert!(
                pts.iter().any(|p| p.distance(&want) < 1e-12),
                "missing {sx} {sy}"
            );
        }
    }

    #[test]
    fn intersections_in_general_position() {
        let c = diag(1.0, 1.0, 1.0);
        let d = diag(1.0, 2.0, 3.0);
        let pts = intersection_points(&c, &d, &tol()).unwrap();
        for p in &pts {
            assert!(incidence_residual(&c.matrix(), p) < 1e-12);
            assert!(incidence_residual(&d.matrix(), p) < 1e-12);
        }
        for skip in 0..4 {
            let v: Vec<Vec3> = (0..4)
                .filter(|&i| i != skip)
                .map(|i| pts[i].unit_scaled())
                .collect();
            let det = crate::numeric::det_columns(&v[0], &v[1], &v[2]);
            assert!(det.norm() > 1e-3);
        }
    }

    #[test]
    fn intersections_are_equivariant() {
        let t = tol();
        let mut rng = seeded(8);
        for _ in 0..20 {
            let (c, d) = random_transverse_pair(&mut rng, 1e-2, &t);
            let a = random_invertible(&mut rng, 50.0);
            let (c0, d0) = (
                Conic::from_matrix(&c).unwrap(),
                Conic::from_matrix(&d).unwrap(),
            );
            let (c1, d1) = (
                Conic::from_matrix(&c.congruence(&a)).unwrap(),
                Conic::from_matrix(&d.congruence(&a)).unwrap(),
            );
            let p0 = intersection_points(&c0, &d0, &t).unwrap();
            let p1 = intersection_points(&c1, &d1, &t).unwrap();
            let ainv = a.inverse().unwrap();
            for p in &p0 {
                let img = Point2::new(ainv.mul_vec(p.coords())).unwrap();
                assert!(p1.iter().any(|q| q.distance(&img) < 1e-7));
            }
        }
    }

    #[test]
    fn intersection_requires_transversality() {
        let r = intersection_points(&diag(1.0, 1.0, -4.0), &diag(1.0, 1.0, -1.0), &tol());
        assert!(matches!(r, Err(Error::DegeneratePencil)));
    }

    #[test]
    fn dual_conic_examples() {
        let i = diag(1.0, 1.0, 1.0);
        assert_eq!(dual_conic(&i, &tol()).unwrap(), i);
        let d = dual_conic(&diag(2.0, 3.0, 5.0), &tol()).unwrap();
        assert_eq!(d, diag(15.0, 10.0, 6.0));
        assert!(matches!(
            dual_conic(&diag(1.0, 0.0, 1.0), &tol()),
            Err(Error::SingularConic)
        ));
        let mut rng = seeded(4);
        let (c, _) = random_transverse_pair(&mut rng, 1e-2, &tol());
        let c = Conic::from_matrix(&c).unwrap();
        let dd = dual_conic(&dual_conic(&c, &tol()).unwrap(), &tol()).unwrap();
        assert!(dd.projective_distance(&c) < 1e-12);
    }

    #[test]
    fn tangent_lines_of_unit_circle() {
        let c = diag(1.0, 1.0, -1.0);
        // x = 1 is tangent, x = 0.5 is not
        let t = Point2::new([re(1.0), ZERO, re(-1.0)]).unwrap();
        let s = Point2::new([re(1.0), ZERO, re(-0.5)]).unwrap();
        assert!(is_tangent_line(&c, &t, &tol()).unwrap());
        assert!(!is_tangent_line(&c, &s, &tol()).unwrap());
    }

    #[test]
    fn line_pair_split() {
        let l = [re(1.0), cx(2.0, 1.0), re(-3.0)];
        let m = [cx(0.5, -1.0), re(1.0), re(2.0)];
        let pair = Mat3::outer(&l, &m) + Mat3::outer(&m, &l);
        let [a, b] = split_degenerate_conic(&pair);
        let (pa, pb) = (Point2::new(a).unwrap(), Point2::new(b).unwrap());
        let (pl, pm) = (Point2::new(l).unwrap(), Point2::new(m).unwrap());
        assert!(
            (pa.distance(&pl) < 1e-12 && pb.distance(&pm) < 1e-12)
                || (pa.distance(&pm) < 1e-12 && pb.distance(&pl) < 1e-12)
        );
    }
}
