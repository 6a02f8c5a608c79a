//! The Poncelet map: from a point of C follow a tangent of D to the second
//! intersection with C. Also membership tests for the correspondence
//! {(p, l) : p ∈ C, l tangent to D, p ∈ l} and the curve
//! u₀²r₁³ = u₁²·det(r₀C + r₁D).

use alloc::vec::Vec;

use rand::Rng;

use crate::conic::{incidence_residual, line_basis, line_conic_intersection, Conic};
use crate::error::{Error, Result};
use crate::numeric::{
    cross, dot, lexicographic_cmp, pivot_index, solve_quadratic_homogeneous, Cx, Mat3, Point1,
    Point2, Tolerance, Vec3, ZERO,
};
use crate::random::random_vec3;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    /// Leave along the tangent that differs from the incoming line.
    Advance,
    /// Go back along the incoming line.
    Return,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PonceletState {
    pub point: Point2,
    /// The tangent to D through `point` on which it was reached.
    pub line: Point2,
    pub history: Vec<Branch>,
}

impl PonceletState {
    /// (|p̂ᵀĈp̂|, |l̂ᵀ adj(D̂) l̂|, |l̂·p̂|) on max-modulus-normalized data.
    pub fn residuals(&self, c: &Conic, d: &Conic) -> [f64; 3] {
        membership_residuals(c, d, &self.point, &self.line)
    }
}

pub fn membership_residuals(c: &Conic, d: &Conic, p: &Point2, l: &Point2) -> [f64; 3] {
    let dual = d.normalized().matrix().adjugate();
    [
        incidence_residual(&c.matrix(), p),
        incidence_residual(&dual, l),
        dot(&p.unit_scaled(), &l.unit_scaled()).norm(),
    ]
}

/// The two tangents from p to D, as line coordinates.
///
/// Lines through p form the pencil u₀l₁ + u₁l₂ with lᵢ = p × eᵢ; tangency is
/// the quadratic lᵀ adj(D) l = 0 in [u₀ : u₁].
pub fn tangents_from(p: &Point2, d: &Conic, tol: &Tolerance) -> Result<[Point2; 2]> {
    let dm = d.normalized().matrix();
    let pv = p.unit_scaled();
    if dm.quad(&pv).norm() <= tol.rel_eps {
        return Err(Error::BranchCollapse);
    }
    let dual = dm.adjugate().normalized();
    let k = pivot_index(&pv);
    let basis = [(k + 1) % 3, (k + 2) % 3].map(|i| {
        let mut e = [ZERO; 3];
        e[i] = Cx::new(1.0, 0.0);
        cross(&pv, &e)
    });
    let [l1, l2] = basis;
    let q = solve_quadratic_homogeneous(
        dual.quad(&l1),
        dual.bilinear(&l1, &l2) * 2.0,
        dual.quad(&l2),
    )
    .ok_or(Error::NumericalTangency)?;
    if q.discriminant_ratio <= tol.abs_eps {
        return Err(Error::NumericalTangency);
    }
    let line = |[u0, u1]: [Cx; 2]| -> Result<Point2> {
        Point2::new([
            l1[0] * u0 + l2[0] * u1,
            l1[1] * u0 + l2[1] * u1,
            l1[2] * u0 + l2[2] * u1,
        ])
    };
    Ok([line(q.roots[0])?, line(q.roots[1])?])
}

/// Second intersection of the line with C, p being the first.
fn second_intersection(c: &Mat3, p: &Vec3, l: &Vec3) -> Result<Point2> {
    let [u, w] = line_basis(l);
    // the basis vector less aligned with p spans the line together with p
    let w = if Point2::new(u)?.distance(&Point2::new(*p)?)
        > Point2::new(w)?.distance(&Point2::new(*p)?)
    {
        u
    } else {
        w
    };
    let (a, b) = (c.quad(&w), c.bilinear(p, &w) * 2.0);
    let q = [
        p[0] * a - w[0] * b,
        p[1] * a - w[1] * b,
        p[2] * a - w[2] * b,
    ];
    Point2::new(q).map_err(|_| Error::BranchCollapse)
}

/// Start at p ∈ C on the lexicographically smaller tangent.
pub fn initial_state(c: &Conic, d: &Conic, p: &Point2, tol: &Tolerance) -> Result<PonceletState> {
    if incidence_residual(&c.matrix(), p) > tol.rel_eps {
        return Err(Error::NotOnConic);
    }
    let [a, b] = tangents_from(p, d, tol)?;
    let line = if lexicographic_cmp(&a, &b).is_le() {
        a
    } else {
        b
    };
    Ok(PonceletState {
        point: *p,
        line,
        history: Vec::new(),
    })
}

pub fn poncelet_step(
    c: &Conic,
    d: &Conic,
    state: &PonceletState,
    branch: Branch,
    tol: &Tolerance,
) -> Result<PonceletState> {
    let [a, b] = tangents_from(&state.point, d, tol)?;
    let (da, db) = (a.distance(&state.line), b.distance(&state.line));
    let line = match (branch, da >= db) {
        (Branch::Advance, true) | (Branch::Return, false) => a,
        _ => b,
    };
    let cm = c.normalized().matrix();
    let point = second_intersection(&cm, &state.point.unit_scaled(), &line.unit_scaled())?;
    let mut history = state.history.clone();
    history.push(branch);
    Ok(PonceletState {
        point,
        line,
        history,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Trace {
    pub states: Vec<PonceletState>,
    /// Distance between the last and the first point.
    pub closure_error: f64,
}

/// `steps` advancing steps from p₀.
pub fn trace(c: &Conic, d: &Conic, p0: &Point2, steps: usize, tol: &Tolerance) -> Result<Trace> {
    let mut states = Vec::with_capacity(steps + 1);
    states.push(initial_state(c, d, p0, tol)?);
    for _ in 0..steps {
        let next = poncelet_step(c, d, states.last().expect("nonempty"), Branch::Advance, tol)?;
        states.push(next);
    }
    let closure_error = states.last().expect("nonempty").point.distance(p0);
    Ok(Trace {
        states,
        closure_error,
    })
}

/// Distance from p₀ after three steps; zero when a triangle closes.
pub fn triangle_closure(c: &Conic, d: &Conic, p0: &Point2, tol: &Tolerance) -> Result<f64> {
    Ok(trace(c, d, p0, 3, tol)?.closure_error)
}

pub fn correspondence_member(
    c: &Conic,
    d: &Conic,
    p: &Point2,
    l: &Point2,
    tol: &Tolerance,
) -> bool {
    membership_residuals(c, d, p, l)
        .iter()
        .all(|r| *r < tol.rel_eps)
}

/// u₀²r₁³ − u₁²·det(r₀C + r₁D) on normalized representatives.
pub fn e_curve_residual(c: &Conic, d: &Conic, r: &Point1, u: &Point1) -> Cx {
    let (cm, dm) = (c.normalized().matrix(), d.normalized().matrix());
    let [r0, r1] = r.unit_scaled();
    let [u0, u1] = u.unit_scaled();
    u0 * u0 * r1 * r1 * r1 - u1 * u1 * (cm.scale(r0) + dm.scale(r1)).det()
}

/// A point of C cut out by a random line.
pub fn random_point_on_conic<R: Rng + ?Sized>(c: &Conic, rng: &mut R) -> Result<Point2> {
    let cm = c.normalized().matrix();
    for _ in 0..64 {
        let l = random_vec3(rng);
        if let Some(pts) = line_conic_intersection(&l, &cm) {
            let p = pts[usize::from(rng.random::<bool>())];
            if let Ok(p) = Point2::new(p) {
                return Ok(p);
            }
        }
    }
    Err(Error::SamplingExhausted(64))
}
