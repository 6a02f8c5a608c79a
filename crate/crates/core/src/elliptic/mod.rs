//! j-invariants of the curve y² = det(xC + D), the critical locus, the Cayley
//! moduli curve Q(λ) = 0 and the degree-24 fibers of j restricted to it.

mod bivariate;
mod fiber;

use alloc::vec::Vec;

pub use bivariate::{sylvester, Poly2};
pub use fiber::{fiber_solutions, AtlasRecord, Elimination, FiberRoot};

use crate::error::{Error, Result};
use crate::moduli::ModuliPoint;
use crate::numeric::{norm_max, omega, Cx, Point2, Tolerance, ONE, ZERO};

/// Arithmetic shared by scalars and bivariate polynomials, so each defining
/// polynomial is written once.
pub trait Ring: Clone {
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn scale(&self, s: Cx) -> Self;
}

impl Ring for Cx {
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn scale(&self, s: Cx) -> Self {
        self * s
    }
}

impl Ring for Poly2 {
    fn add(&self, other: &Self) -> Self {
        Poly2::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        Poly2::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        Poly2::mul(self, other)
    }
    fn scale(&self, s: Cx) -> Self {
        Poly2::scale(self, s)
    }
}

fn k(x: f64) -> Cx {
    Cx::new(x, 0.0)
}

/// The Cayley moduli quartic
/// −λ₁²λ₂² + 2λ₁²λ₂λ₃ − λ₁²λ₃² + 2λ₁λ₂²λ₃ + 2λ₁λ₂λ₃² − λ₂²λ₃².
pub fn moduli_quartic<R: Ring>(l: &[R; 3]) -> R {
    let [a, b, c] = l;
    let (aa, bb, cc) = (a.mul(a), b.mul(b), c.mul(c));
    aa.mul(&bb)
        .scale(k(-1.0))
        .add(&aa.mul(b).mul(c).scale(k(2.0)))
        .sub(&aa.mul(&cc))
        .add(&a.mul(&bb).mul(c).scale(k(2.0)))
        .add(&a.mul(b).mul(&cc).scale(k(2.0)))
        .sub(&bb.mul(&cc))
}

/// λ₁² − λ₁λ₂ − λ₁λ₃ + λ₂² − λ₂λ₃ + λ₃².
pub fn j_numerator_factor<R: Ring>(l: &[R; 3]) -> R {
    let [a, b, c] = l;
    a.mul(a)
        .sub(&a.mul(b))
        .sub(&a.mul(c))
        .add(&b.mul(b))
        .sub(&b.mul(c))
        .add(&c.mul(c))
}

/// (λ₁ − λ₂)²(λ₁ − λ₃)²(λ₂ − λ₃)².
pub fn lambda_discriminant<R: Ring>(l: &[R; 3]) -> R {
    let [a, b, c] = l;
    let p = a.sub(b).mul(&a.sub(c)).mul(&b.sub(c));
    p.mul(&p)
}

/// 256N³ − zΔ, whose zeros are the λ with j(λ) = z.
pub fn fiber_curve<R: Ring>(l: &[R; 3], z: Cx) -> R {
    let n = j_numerator_factor(l);
    n.mul(&n)
        .mul(&n)
        .scale(k(256.0))
        .sub(&lambda_discriminant(l).scale(z))
}

pub fn cayley_moduli_residual(lambda: &[Cx; 3]) -> Cx {
    moduli_quartic(lambda)
}

/// j = 256(3σ₁₂σ₃₀ − σ₂₁²)³ / (σ₃₀²(27σ₀₃²σ₃₀² + 2σ₁₂σ₃₀(−9σ₀₃σ₂₁ + 2σ₁₂²)
/// + σ₂₁²(4σ₀₃σ₂₁ − σ₁₂²))).
///
/// σ is first made monic with roots of modulus at most one, so the
/// degeneracy test does not depend on how C and D are scaled.
pub fn j_from_sigma(sigma: &[Cx; 4], tol: &Tolerance) -> Result<Cx> {
    let lead = sigma[0];
    if lead.norm() == 0.0 || !sigma.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::DegeneratePencil);
    }
    let radius = (1..4)
        .map(|k| libm::pow(sigma[k].norm() / lead.norm(), 1.0 / k as f64))
        .fold(0.0, f64::max);
    if radius == 0.0 {
        return Err(Error::DegeneratePencil);
    }
    let mut balanced = [ZERO; 4];
    for k in 0..4 {
        balanced[k] = sigma[k] / (lead * radius.powi(k as i32));
    }
    let [s30, s21, s12, s03] = balanced;
    let num = (s12 * s30 * 3.0 - s21 * s21).powu(3) * 256.0;
    let inner = s03 * s03 * s30 * s30 * 27.0
        + s12 * s30 * 2.0 * (-(s03 * s21 * 9.0) + s12 * s12 * 2.0)
        + s21 * s21 * (s03 * s21 * 4.0 - s12 * s12);
    let den = s30 * s30 * inner;
    let scale = norm_max(&balanced);
    if den.norm() <= tol.rel_eps * scale.powi(6) || den.norm() == 0.0 {
        return Err(Error::DegeneratePencil);
    }
    Ok(num / den)
}

fn has_repeated(lambda: &[Cx; 3], tol: &Tolerance) -> bool {
    let scale = norm_max(lambda);
    let [a, b, c] = *lambda;
    scale == 0.0
        || [(a, b), (a, c), (b, c)]
            .iter()
            .any(|(x, y)| (x - y).norm() <= tol.cluster_eps * scale)
}

/// j = 256N³ / Δ in the diagonal entries λ.
pub fn j_from_lambda(lambda: &[Cx; 3], tol: &Tolerance) -> Result<Cx> {
    if has_repeated(lambda, tol) {
        return Err(Error::RepeatedLambda);
    }
    let n = j_numerator_factor(lambda);
    Ok(n * n * n * 256.0 / lambda_discriminant(lambda))
}

/// σ = (1, −e₁, e₂, −e₃), the pencil cubic of (I, diag λ) read with roots −λ.
pub fn sigma_of_lambda(lambda: &[Cx; 3]) -> [Cx; 4] {
    let [a, b, c] = *lambda;
    [ONE, a + b + c, a * b + a * c + b * c, a * b * c]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CriticalClass {
    Regular,
    J0,
    J1728,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JValue {
    pub z: Cx,
    pub critical_class: CriticalClass,
}

/// Class of a j-value by distance to 0 and 1728, relative to 1728.
pub fn critical_class_of_z(z: Cx, tol: &Tolerance) -> CriticalClass {
    let eps = tol.cluster_eps * 1728.0;
    if z.norm() < eps {
        CriticalClass::J0
    } else if (z - 1728.0).norm() < eps {
        CriticalClass::J1728
    } else {
        CriticalClass::Regular
    }
}

/// The linear factors (λ₁ − 2λ₂ + λ₃)(λ₁ + λ₂ − 2λ₃)(2λ₁ − λ₂ − λ₃) vanish
/// on j = 1728, the quadratic N on j = 0.
pub fn classify_critical(lambda: &[Cx; 3], tol: &Tolerance) -> Result<JValue> {
    let z = j_from_lambda(lambda, tol)?;
    let scale = norm_max(lambda);
    let [a, b, c] = *lambda;
    let linear = [a - b * 2.0 + c, a + b - c * 2.0, a * 2.0 - b - c];
    let critical_class = if linear.iter().any(|f| f.norm() <= tol.cluster_eps * scale) {
        CriticalClass::J1728
    } else if j_numerator_factor(lambda).norm() <= tol.cluster_eps * scale * scale {
        CriticalClass::J0
    } else {
        CriticalClass::Regular
    };
    Ok(JValue { z, critical_class })
}

/// Points of the Cayley moduli curve over j = 0 and j = 1728.
#[derive(Clone, Debug, PartialEq)]
pub struct CriticalSets {
    pub s0: Vec<Point2>,
    pub s1728: Vec<Point2>,
}

impl CriticalSets {
    pub fn moduli_points(&self, tol: &Tolerance) -> Result<(Vec<ModuliPoint>, Vec<ModuliPoint>)> {
        let map = |v: &[Point2]| -> Result<Vec<ModuliPoint>> {
            v.iter()
                .map(|p| ModuliPoint::from_lambda(p.coords(), tol))
                .collect()
        };
        Ok((map(&self.s0)?, map(&self.s1728)?))
    }
}

/// The two points over j = 0 and the twelve over j = 1728 in the chart λ₃ = 1.
pub fn critical_sets_s() -> CriticalSets {
    let w = omega();
    let point = |a: Cx, b: Cx| Point2::new([a, b, ONE]).expect("finite literal point");
    let s0 = alloc::vec![point(w * w, w), point(w, w * w)];

    let r3 = libm::sqrt(3.0);
    let sq = |x: f64| k(x).sqrt();
    let a = sq(-3.0 + 2.0 * r3);
    let b = sq(-2.0 * r3 - 3.0);
    let c = sq(3.0 + 2.0 * r3);
    let d = sq(3.0 - 2.0 * r3);
    let e = sq(0.75 + r3 / 2.0);
    let f = sq(0.75 - r3 / 2.0);
    let one = ONE;
    let s1728 = alloc::vec![
        point(one - a, one + a),
        point(one - b, one + b),
        point(one + b, one - b),
        point(one + a, one - a),
        point(k(1.0 + r3) + c, k(r3 / 2.0 + 1.0) + e),
        point(k(1.0 - r3) - d, k(1.0 - r3 / 2.0) - f),
        point(k(1.0 - r3) + d, k(1.0 - r3 / 2.0) + f),
        point((k(2.0 - r3) - d) / 2.0, k(1.0 - r3) - d),
        point((k(2.0 - r3) + d) / 2.0, k(1.0 - r3) + d),
        point((k(2.0 + r3) + c) / 2.0, k(1.0 + r3) + c),
        point(k(1.0 + r3) - c, k(r3 / 2.0 + 1.0) - e),
        point((k(2.0 + r3) - c) / 2.0, k(1.0 + r3) - c),
    ];
    CriticalSets { s0, s1728 }
}
