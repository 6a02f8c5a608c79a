use alloc::vec::Vec;

use super::bivariate::{sylvester, Poly2};
use super::{critical_class_of_z, fiber_curve, moduli_quartic, CriticalClass};
use crate::error::{Error, Result};
use crate::moduli::ModuliPoint;
use crate::numeric::{
    cluster_labels, cx, det_dense, multiplicities, norm_max, poly_roots, Cx, Point2, Tolerance,
    ONE, ZERO,
};

const FIBER_DEGREE: usize = 24;
const SAMPLES: usize = 32;
const SAMPLE_PHASE: f64 = 0.1;
/// Shear λ₁ = x + κλ₂ of the fallback elimination.
const SHEAR: Cx = cx(0.5377, 0.2113);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Elimination {
    /// Resultant in λ₂ with λ₁ = x.
    Direct,
    /// Resultant in λ₂ with λ₁ = x + κλ₂.
    Sheared,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FiberRoot {
    pub lambda: Point2,
    /// Size of the cluster this root represents.
    pub mult: usize,
    /// |Q(λ̂)| on the max-modulus-normalized representative.
    pub res7: f64,
    /// |256N³ − zΔ|(λ̂) / (256 + |z|).
    pub res8: f64,
}

/// One j-fiber of the Cayley moduli curve.
#[derive(Clone, Debug, PartialEq)]
pub struct AtlasRecord {
    pub z: Cx,
    pub roots: Vec<FiberRoot>,
    /// Number of S₃-orbits among the roots.
    pub orbits: usize,
    /// Root count with multiplicity.
    pub total: usize,
    pub elimination: Elimination,
}

impl AtlasRecord {
    pub fn max_res7(&self) -> f64 {
        self.roots.iter().map(|r| r.res7).fold(0.0, f64::max)
    }

    pub fn max_res8(&self) -> f64 {
        self.roots.iter().map(|r| r.res8).fold(0.0, f64::max)
    }

    pub fn max_residual(&self) -> f64 {
        self.max_res7().max(self.max_res8())
    }

    pub fn all_simple(&self) -> bool {
        self.roots.iter().all(|r| r.mult == 1)
    }

    fn is_complete(&self, tol: &Tolerance) -> bool {
        self.total == FIBER_DEGREE && self.all_simple() && self.max_residual() <= tol.rel_eps
    }
}

/// All λ ∈ ℂℙ² with Q(λ) = 0 and j(λ) = z.
///
/// Works in the chart λ₃ = 1: the resultant of Q and 256N³ − zΔ with
/// respect to λ₂ is interpolated from its values on a circle, its 24 roots
/// are found from the companion matrix, λ₂ is recovered among the roots of Q
/// and both are polished by Newton's method on the 2×2 system. When roots
/// collide in the projection the elimination is repeated after a shear.
pub fn fiber_solutions(z: Cx, tol: &Tolerance) -> Result<AtlasRecord> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::NonFinite);
    }
    if critical_class_of_z(z, tol) != CriticalClass::Regular {
        return Err(Error::CriticalZ { re: z.re, im: z.im });
    }
    if !line_at_infinity_clear(z) {
        return Err(Error::ResultantIllConditioned(
            "solutions on the line λ₃ = 0",
        ));
    }
    let mut last_err = Error::ResultantIllConditioned("no elimination order succeeded");
    for (elimination, shear) in [(Elimination::Direct, ZERO), (Elimination::Sheared, SHEAR)] {
        match solve_in_chart(z, shear) {
            Ok(points) => {
                let record = assemble(z, &points, elimination, tol)?;
                if record.is_complete(tol) {
                    return Ok(record);
                }
                last_err =
                    Error::ResultantIllConditioned("roots collide or fail the residual bound");
            }
            Err(e) => last_err = e,
        }
    }
    Err(last_err)
}

/// On λ₃ = 0 the quartic is −λ₁²λ₂², so a common point would be [1:0:0] or
/// [0:1:0]; the fiber curve is 256 at both.
fn line_at_infinity_clear(z: Cx) -> bool {
    [[ONE, ZERO, ZERO], [ZERO, ONE, ZERO]]
        .iter()
        .all(|p| fiber_curve(p, z).norm() > 0.0)
}

fn chart_polys(z: Cx, shear: Cx) -> (Poly2, Poly2) {
    let l = [
        Poly2::linear(ONE, shear, ZERO),
        Poly2::y(),
        Poly2::constant(ONE),
    ];
    (moduli_quartic(&l), fiber_curve(&l, z))
}

fn solve_in_chart(z: Cx, shear: Cx) -> Result<Vec<[Cx; 3]>> {
    let (q, f) = chart_polys(z, shear);
    let coeffs = resultant_coefficients(&q, &f)?;
    let desc: Vec<Cx> = coeffs.iter().rev().copied().collect();
    let xs = poly_roots(&desc, 3)?;
    let (sq, sf) = (q.size(), f.size());
    let mut out = Vec::with_capacity(xs.len());
    for x in xs {
        let Some(y) = best_partner(&q, &f, x) else {
            continue;
        };
        let (x, y) = newton_polish(&q, &f, x, y, sq, sf);
        out.push([x + shear * y, y, ONE]);
    }
    Ok(out)
}

/// Coefficients (ascending) of Res_y(Q, F) as a polynomial of degree 24 in x.
fn resultant_coefficients(q: &Poly2, f: &Poly2) -> Result<Vec<Cx>> {
    let values: Vec<Cx> = (0..SAMPLES)
        .map(|k| {
            let x = sample_point(k);
            let (s, n) = sylvester(&q.coeffs_in_y(x), &f.coeffs_in_y(x));
            det_dense(s, n)
        })
        .collect();
    // inverse DFT, then undo the phase offset of the sample circle
    let mut coeffs = Vec::with_capacity(SAMPLES);
    for m in 0..SAMPLES {
        let mut acc = ZERO;
        for (k, v) in values.iter().enumerate() {
            acc += v * sample_point(k).powi(-(m as i32));
        }
        coeffs.push(acc / SAMPLES as f64);
    }
    let size = norm_max(&coeffs);
    if size == 0.0 {
        return Err(Error::ResultantIllConditioned(
            "resultant vanishes identically",
        ));
    }
    let alias = norm_max(&coeffs[FIBER_DEGREE + 1..]);
    if alias > 1e-9 * size {
        return Err(Error::ResultantIllConditioned(
            "resultant degree exceeds 24",
        ));
    }
    if coeffs[FIBER_DEGREE].norm() < 1e-13 * size {
        return Err(Error::ResultantIllConditioned(
            "resultant leading coefficient vanishes",
        ));
    }
    coeffs.truncate(FIBER_DEGREE + 1);
    Ok(coeffs)
}

fn sample_point(k: usize) -> Cx {
    Cx::from_polar(
        1.0,
        core::f64::consts::TAU * k as f64 / SAMPLES as f64 + SAMPLE_PHASE,
    )
}

/// The root of Q(x, ·) at which F is smallest.
fn best_partner(q: &Poly2, f: &Poly2, x: Cx) -> Option<Cx> {
    let desc: Vec<Cx> = q.coeffs_in_y(x).into_iter().rev().collect();
    let ys = poly_roots(&desc, 2).ok()?;
    ys.into_iter()
        .filter(|y| y.re.is_finite() && y.im.is_finite())
        .min_by(|a, b| f.eval(x, *a).norm().total_cmp(&f.eval(x, *b).norm()))
}

fn newton_polish(q: &Poly2, f: &Poly2, mut x: Cx, mut y: Cx, sq: f64, sf: f64) -> (Cx, Cx) {
    let residual = |x: Cx, y: Cx| q.eval(x, y).norm() / sq + f.eval(x, y).norm() / sf;
    let mut res = residual(x, y);
    for _ in 0..12 {
        let (qv, qx, qy) = q.eval_grad(x, y);
        let (fv, fx, fy) = f.eval_grad(x, y);
        let det = qx * fy - qy * fx;
        if det.norm() == 0.0 {
            break;
        }
        let dx = (qv * fy - qy * fv) / det;
        let dy = (qx * fv - fx * qv) / det;
        let (nx, ny) = (x - dx, y - dy);
        let nres = residual(nx, ny);
        if nres.partial_cmp(&res) != Some(core::cmp::Ordering::Less) {
            break;
        }
        x = nx;
        y = ny;
        res = nres;
    }
    (x, y)
}

fn assemble(
    z: Cx,
    points: &[[Cx; 3]],
    elimination: Elimination,
    tol: &Tolerance,
) -> Result<AtlasRecord> {
    let points: Vec<Point2> = points
        .iter()
        .map(|p| Point2::new(*p))
        .collect::<Result<_>>()?;
    let labels = cluster_labels(&points, tol.cluster_eps, |a, b| a.distance(b));
    let mult = multiplicities(&labels);
    let scale = 256.0 + z.norm();
    let mut roots = Vec::new();
    for (i, p) in points.iter().enumerate() {
        if labels[..i].contains(&labels[i]) {
            continue;
        }
        let u = p.unit_scaled();
        roots.push(FiberRoot {
            lambda: *p,
            mult: mult[i],
            res7: moduli_quartic(&u).norm(),
            res8: fiber_curve(&u, z).norm() / scale,
        });
    }
    let moduli: Vec<ModuliPoint> = roots
        .iter()
        .map(|r| ModuliPoint::from_lambda(r.lambda.coords(), tol))
        .collect::<Result<_>>()?;
    let orbit_labels = cluster_labels(&moduli, tol.cluster_eps, |a, b| a.distance(b));
    let orbits = orbit_labels.iter().copied().max().map_or(0, |m| m + 1);
    Ok(AtlasRecord {
        z,
        total: roots.iter().map(|r| r.mult).sum(),
        roots,
        orbits,
        elimination,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::re;

    #[test]
    fn fiber_over_100() {
        let t = Tolerance::default();
        let rec = fiber_solutions(re(100.0), &t).unwrap();
        assert_eq!(rec.total, 24);
        assert_eq!(rec.roots.len(), 24);
        assert!(rec.all_simple());
        assert!(rec.max_residual() < 1e-8, "{}", rec.max_residual());
        assert_eq!(rec.orbits, 4);
    }

    #[test]
    fn critical_values_rejected() {
        let t = Tolerance::default();
        assert!(matches!(
            fiber_solutions(re(1728.0), &t),
            Err(Error::CriticalZ { .. })
        ));
        assert!(matches!(
            fiber_solutions(ZERO, &t),
            Err(Error::CriticalZ { .. })
        ));
    }

    #[test]
    fn sheared_chart_finds_the_same_points() {
        let z = cx(250.0, -80.0);
        let direct = solve_in_chart(z, ZERO).unwrap();
        let sheared = solve_in_chart(z, SHEAR).unwrap();
        assert_eq!(direct.len(), 24);
        assert_eq!(sheared.len(), 24);
        for p in &direct {
            let p = Point2::new(*p).unwrap();
            assert!(
                sheared
                    .iter()
                    .any(|q| Point2::new(*q).unwrap().distance(&p) < 1e-8),
                "{p:?}"
            );
        }
    }
}
