//! Complex scalars, 3×3 matrices, projective points and the tolerance policy
//! shared by every other module.

mod eigen;
mod roots;
mod spectrum;

use core::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

pub use eigen::hessenberg_eigenvalues;
pub use roots::{
    cluster_labels, multiplicities, poly_eval, poly_roots, solve_cubic,
    solve_quadratic_homogeneous, CubicRoots,
};
pub use spectrum::{eigen_pencil, pencil_cubic, PencilSpectrum};

use crate::error::{Error, Result};

pub type Cx = num_complex::Complex<f64>;

pub const ZERO: Cx = Cx::new(0.0, 0.0);
pub const ONE: Cx = Cx::new(1.0, 0.0);

#[inline]
pub const fn cx(re: f64, im: f64) -> Cx {
    Cx::new(re, im)
}

#[inline]
pub const fn re(x: f64) -> Cx {
    Cx::new(x, 0.0)
}

/// The primitive cube root of unity e^{2πi/3}.
pub fn omega() -> Cx {
    cx(-0.5, libm::sqrt(3.0) / 2.0)
}

#[inline]
pub fn is_finite(z: Cx) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// Principal square root with argument in (−π/2, π/2].
pub fn principal_sqrt(z: Cx) -> Cx {
    let s = z.sqrt();
    if s.re < 0.0 || (s.re == 0.0 && s.im < 0.0) {
        -s
    } else {
        s
    }
}

pub type Vec3 = [Cx; 3];

pub fn dot(a: &Vec3, b: &Vec3) -> Cx {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn cross(a: &Vec3, b: &Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub fn norm_max(v: &[Cx]) -> f64 {
    v.iter().fold(0.0, |m, z| m.max(z.norm()))
}

pub fn norm2(v: &[Cx]) -> f64 {
    libm::sqrt(v.iter().map(|z| z.norm_sqr()).sum())
}

/// Index of the coordinate of largest modulus, lowest index on ties.
pub fn pivot_index(v: &[Cx]) -> usize {
    let mut best = 0;
    let mut best_mod = -1.0;
    for (i, z) in v.iter().enumerate() {
        let m = z.norm();
        if m > best_mod {
            best = i;
            best_mod = m;
        }
    }
    best
}

/// Coordinate-wise distance of two projective vectors after dividing both by
/// their entry at the pivot of the first argument; symmetrized over both pivots.
pub fn projective_distance(a: &[Cx], b: &[Cx]) -> f64 {
    fn one_sided(a: &[Cx], b: &[Cx]) -> f64 {
        let p = pivot_index(a);
        if b[p].norm() == 0.0 {
            return f64::INFINITY;
        }
        let (sa, sb) = (a[p], b[p]);
        a.iter()
            .zip(b)
            .fold(0.0, |m, (x, y)| m.max((*x / sa - *y / sb).norm()))
    }
    one_sided(a, b).max(one_sided(b, a))
}

pub fn scale_vec3(v: &Vec3, s: Cx) -> Vec3 {
    [v[0] * s, v[1] * s, v[2] * s]
}

/// Dense 3×3 complex matrix, row-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat3(pub [[Cx; 3]; 3]);

impl Mat3 {
    pub const fn zero() -> Self {
        Mat3([[ZERO; 3]; 3])
    }

    pub fn identity() -> Self {
        Self::diag([ONE; 3])
    }

    pub fn diag(d: [Cx; 3]) -> Self {
        let mut m = Self::zero();
        for i in 0..3 {
            m.0[i][i] = d[i];
        }
        m
    }

    pub fn from_real(rows: [[f64; 3]; 3]) -> Self {
        let mut m = Self::zero();
        for i in 0..3 {
            for j in 0..3 {
                m.0[i][j] = re(rows[i][j]);
            }
        }
        m
    }

    pub fn from_columns(cols: [Vec3; 3]) -> Self {
        let mut m = Self::zero();
        for j in 0..3 {
            for i in 0..3 {
                m.0[i][j] = cols[j][i];
            }
        }
        m
    }

    pub fn column(&self, j: usize) -> Vec3 {
        [self.0[0][j], self.0[1][j], self.0[2][j]]
    }

    pub fn row(&self, i: usize) -> Vec3 {
        self.0[i]
    }

    pub fn outer(u: &Vec3, v: &Vec3) -> Self {
        let mut m = Self::zero();
        for i in 0..3 {
            for j in 0..3 {
                m.0[i][j] = u[i] * v[j];
            }
        }
        m
    }

    /// The matrix of x ↦ p × x.
    pub fn cross_matrix(p: &Vec3) -> Self {
        Mat3([
            [ZERO, -p[2], p[1]],
            [p[2], ZERO, -p[0]],
            [-p[1], p[0], ZERO],
        ])
    }

    pub fn entries(&self) -> [Cx; 9] {
        let m = &self.0;
        [
            m[0][0], m[0][1], m[0][2], m[1][0], m[1][1], m[1][2], m[2][0], m[2][1], m[2][2],
        ]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zero();
        for i in 0..3 {
            for j in 0..3 {
                t.0[i][j] = self.0[j][i];
            }
        }
        t
    }

    pub fn scale(&self, s: Cx) -> Self {
        let mut m = *self;
        m.0.iter_mut().flatten().for_each(|z| *z *= s);
        m
    }

    pub fn trace(&self) -> Cx {
        self.0[0][0] + self.0[1][1] + self.0[2][2]
    }

    pub fn det(&self) -> Cx {
        det_columns(&self.column(0), &self.column(1), &self.column(2))
    }

    /// Transpose of the cofactor matrix.
    pub fn adjugate(&self) -> Self {
        let m = &self.0;
        let cof = |r0: usize, r1: usize, c0: usize, c1: usize| {
            m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0]
        };
        Mat3([
            [cof(1, 2, 1, 2), -cof(0, 2, 1, 2), cof(0, 1, 1, 2)],
            [-cof(1, 2, 0, 2), cof(0, 2, 0, 2), -cof(0, 1, 0, 2)],
            [cof(1, 2, 0, 1), -cof(0, 2, 0, 1), cof(0, 1, 0, 1)],
        ])
    }

    pub fn inverse(&self) -> Option<Self> {
        let d = self.det();
        if d.norm() == 0.0 || !is_finite(d) {
            return None;
        }
        Some(self.adjugate().scale(d.inv()))
    }

    pub fn mul_vec(&self, v: &Vec3) -> Vec3 {
        [dot(&self.0[0], v), dot(&self.0[1], v), dot(&self.0[2], v)]
    }

    /// uᵀ M v.
    pub fn bilinear(&self, u: &Vec3, v: &Vec3) -> Cx {
        dot(u, &self.mul_vec(v))
    }

    /// vᵀ M v.
    pub fn quad(&self, v: &Vec3) -> Cx {
        self.bilinear(v, v)
    }

    /// Aᵀ M A.
    pub fn congruence(&self, a: &Mat3) -> Self {
        a.transpose() * *self * *a
    }

    pub fn norm_max(&self) -> f64 {
        norm_max(&self.entries())
    }

    pub fn frobenius(&self) -> f64 {
        norm2(&self.entries())
    }

    /// Divided by its entry of largest modulus.
    pub fn normalized(&self) -> Self {
        let e = self.entries();
        let p = e[pivot_index(&e)];
        if p.norm() == 0.0 {
            return *self;
        }
        self.scale(p.inv())
    }

    pub fn symmetrized(&self) -> Self {
        let mut m = *self;
        for i in 0..3 {
            for j in (i + 1)..3 {
                let s = (self.0[i][j] + self.0[j][i]) * 0.5;
                m.0[i][j] = s;
                m.0[j][i] = s;
            }
        }
        m
    }

    pub fn asymmetry(&self) -> f64 {
        let mut a: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                a = a.max((self.0[i][j] - self.0[j][i]).norm());
            }
        }
        a
    }

    pub fn projective_distance(&self, other: &Mat3) -> f64 {
        projective_distance(&self.entries(), &other.entries())
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|z| is_finite(*z))
    }
}

impl Index<(usize, usize)> for Mat3 {
    type Output = Cx;
    fn index(&self, (i, j): (usize, usize)) -> &Cx {
        &self.0[i][j]
    }
}

impl IndexMut<(usize, usize)> for Mat3 {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Cx {
        &mut self.0[i][j]
    }
}

impl Add for Mat3 {
    type Output = Mat3;
    fn add(mut self, rhs: Mat3) -> Mat3 {
        for i in 0..3 {
            for j in 0..3 {
                self.0[i][j] += rhs.0[i][j];
            }
        }
        self
    }
}

impl Sub for Mat3 {
    type Output = Mat3;
    fn sub(mut self, rhs: Mat3) -> Mat3 {
        for i in 0..3 {
            for j in 0..3 {
                self.0[i][j] -= rhs.0[i][j];
            }
        }
        self
    }
}

impl Neg for Mat3 {
    type Output = Mat3;
    fn neg(self) -> Mat3 {
        self.scale(-ONE)
    }
}

impl Mul for Mat3 {
    type Output = Mat3;
    fn mul(self, rhs: Mat3) -> Mat3 {
        let mut m = Mat3::zero();
        for i in 0..3 {
            for j in 0..3 {
                m.0[i][j] = (0..3).map(|k| self.0[i][k] * rhs.0[k][j]).sum();
            }
        }
        m
    }
}

impl Mul<Cx> for Mat3 {
    type Output = Mat3;
    fn mul(self, rhs: Cx) -> Mat3 {
        self.scale(rhs)
    }
}

impl Mul<f64> for Mat3 {
    type Output = Mat3;
    fn mul(self, rhs: f64) -> Mat3 {
        self.scale(re(rhs))
    }
}

/// det(a, b, c) for column vectors a, b, c.
pub fn det_columns(a: &Vec3, b: &Vec3, c: &Vec3) -> Cx {
    dot(a, &cross(b, c))
}

/// Adjugate of a 3×3 matrix: adj(M)·M = det(M)·I.
pub fn adjugate3(m: &Mat3) -> Mat3 {
    m.adjugate()
}

/// A point of complex projective space of dimension `LEN − 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProjPoint<const LEN: usize> {
    coords: [Cx; LEN],
}

/// A point (or line) of the projective plane.
pub type Point2 = ProjPoint<3>;
/// A point of the projective line.
pub type Point1 = ProjPoint<2>;

impl<const LEN: usize> ProjPoint<LEN> {
    pub fn new(coords: [Cx; LEN]) -> Result<Self> {
        if !coords.iter().all(|z| is_finite(*z)) {
            return Err(Error::NonFinite);
        }
        if coords.iter().all(|z| z.norm() == 0.0) {
            return Err(Error::ZeroVector);
        }
        Ok(ProjPoint { coords })
    }

    pub fn coords(&self) -> &[Cx; LEN] {
        &self.coords
    }

    /// Representative whose coordinate of largest modulus is exactly 1.
    pub fn normalized(&self) -> [Cx; LEN] {
        let p = pivot_index(&self.coords);
        let s = self.coords[p].inv();
        let mut out = self.coords.map(|z| z * s);
        out[p] = ONE;
        out
    }

    /// Representative of unit maximum modulus (a phase-free rescaling).
    pub fn unit_scaled(&self) -> [Cx; LEN] {
        let s = norm_max(&self.coords);
        self.coords.map(|z| z / s)
    }

    pub fn distance(&self, other: &Self) -> f64 {
        projective_distance(&self.coords, &other.coords)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.distance(other) < tol
    }
}

/// Lexicographic order on (re, im) of the normalized coordinates.
pub fn lexicographic_cmp<const LEN: usize>(
    a: &ProjPoint<LEN>,
    b: &ProjPoint<LEN>,
) -> core::cmp::Ordering {
    let (x, y) = (a.normalized(), b.normalized());
    for k in 0..LEN {
        let o = x[k]
            .re
            .total_cmp(&y[k].re)
            .then(x[k].im.total_cmp(&y[k].im));
        if o.is_ne() {
            return o;
        }
    }
    core::cmp::Ordering::Equal
}

/// Numerical thresholds consumed by every module.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance {
    pub abs_eps: f64,
    pub rel_eps: f64,
    pub cluster_eps: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            abs_eps: 1e-10,
            rel_eps: 1e-8,
            cluster_eps: 1e-6,
        }
    }
}

impl Tolerance {
    pub fn new(abs_eps: f64, rel_eps: f64, cluster_eps: f64) -> Result<Self> {
        let ok = |x: f64| x.is_finite() && x > 0.0;
        if !(ok(abs_eps) && ok(rel_eps) && ok(cluster_eps)) {
            return Err(Error::InvalidTolerance(
                "all tolerances must be positive and finite",
            ));
        }
        if cluster_eps < abs_eps {
            return Err(Error::InvalidTolerance(
                "cluster_eps must not be smaller than abs_eps",
            ));
        }
        Ok(Tolerance {
            abs_eps,
            rel_eps,
            cluster_eps,
        })
    }

    pub fn with_rel_eps(self, rel_eps: f64) -> Result<Self> {
        Self::new(self.abs_eps, rel_eps, self.cluster_eps)
    }
}

/// Determinant by Gaussian elimination with partial pivoting.
pub fn det_dense(mut a: alloc::vec::Vec<Cx>, n: usize) -> Cx {
    let mut det = Cx::new(1.0, 0.0);
    for k in 0..n {
        let p = (k..n)
            .max_by(|&i, &j| a[i * n + k].norm().total_cmp(&a[j * n + k].norm()))
            .unwrap_or(k);
        if a[p * n + k].norm() == 0.0 {
            return ZERO;
        }
        if p != k {
            for j in 0..n {
                a.swap(k * n + j, p * n + j);
            }
            det = -det;
        }
        let pivot = a[k * n + k];
        det *= pivot;
        for i in (k + 1)..n {
            let f = a[i * n + k] / pivot;
            for j in k..n {
                let v = a[k * n + j];
                a[i * n + j] -= f * v;
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_matrix, seeded};

    #[test]
    fn adjugate_of_diagonal() {
        let m = Mat3::diag([re(2.0), re(3.0), re(5.0)]);
        assert_eq!(adjugate3(&m), Mat3::diag([re(15.0), re(10.0), re(6.0)]));
        assert_eq!(adjugate3(&Mat3::identity()), Mat3::identity());
    }

    #[test]
    fn adjugate_identity_on_random_matrices() {
        let mut rng = seeded(7);
        for _ in 0..1000 {
            let m = random_matrix(&mut rng);
            let lhs = adjugate3(&m) * m;
            let rhs = Mat3::identity().scale(m.det());
            let bound = 1e-8 * m.norm_max().powi(3);
            assert!((lhs - rhs).norm_max() <= bound);
        }
    }

    #[test]
    fn principal_sqrt_branch() {
        assert_eq!(principal_sqrt(cx(-4.0, -0.0)), cx(0.0, 2.0));
        assert_eq!(principal_sqrt(cx(-4.0, 0.0)), cx(0.0, 2.0));
        let s = principal_sqrt(cx(-3.0, -1.0));
        assert!(s.re > 0.0);
        assert!((s * s - cx(-3.0, -1.0)).norm() < 1e-15);
    }

    #[test]
    fn normalization_pivot_ties_lowest_index() {
        let p = Point2::new([re(-2.0), re(2.0), re(1.0)]).unwrap();
        assert_eq!(p.normalized(), [ONE, re(-1.0), re(-0.5)]);
    }

    #[test]
    fn zero_point_rejected() {
        assert!(matches!(Point2::new([ZERO; 3]), Err(Error::ZeroVector)));
        assert!(matches!(
            Point1::new([cx(f64::NAN, 0.0), ONE]),
            Err(Error::NonFinite)
        ));
    }

    #[test]
    fn projective_equality_is_scale_free() {
        let p = Point2::new([cx(1.0, 2.0), re(3.0), cx(0.0, -1.0)]).unwrap();
        let s = cx(-0.3, 4.0);
        let q = Point2::new(p.coords().map(|z| z * s)).unwrap();
        assert!(p.approx_eq(&q, 1e-14));
        let r = Point2::new([cx(1.0, 2.0), re(3.0), cx(0.0, -1.1)]).unwrap();
        assert!(!p.approx_eq(&r, 1e-3));
    }

    #[test]
    fn tolerance_validation() {
        assert!(Tolerance::new(1e-10, 1e-8, 1e-6).is_ok());
        assert!(Tolerance::new(-1.0, 1e-8, 1e-6).is_err());
        assert!(Tolerance::new(1e-5, 1e-8, 1e-6).is_err());
    }

    #[test]
    fn cross_matrix_matches_cross_product() {
        let p = [cx(1.0, 1.0), re(2.0), cx(0.0, 3.0)];
        let x = [re(0.5), cx(1.0, -1.0), re(4.0)];
        let a = Mat3::cross_matrix(&p).mul_vec(&x);
        let b = cross(&p, &x);
        assert!(norm_max(&[a[0] - b[0], a[1] - b[1], a[2] - b[2]]) < 1e-15);
    }
}
