//! First-order perturbation of the pencil roots: entry-wise gradients,
//! directional derivatives, the tangent vectors showing that the moduli map
//! is a submersion, and a finite-difference check.

use alloc::vec::Vec;

use crate::conic::Conic;
use crate::error::{Error, Result};
use crate::numeric::{
    eigen_pencil, pencil_cubic, solve_cubic, Cx, Mat3, PencilSpectrum, Tolerance, Vec3,
};

/// Gradients of one pencil root r of det(tC + D) with respect to the nine
/// entries of C and of D, treated as independent.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GradientPair {
    /// −r·vvᵀ / (vᵀCv).
    pub grad_c: Mat3,
    /// −vvᵀ / (vᵀCv).
    pub grad_d: Mat3,
    pub root: Cx,
    /// Kernel vector of rC + D.
    pub vector: Vec3,
    /// vᵀCv, nonzero on transverse pairs.
    pub v_c_v: Cx,
}

impl GradientPair {
    /// Derivatives with respect to the six conic coordinates of C, then of D;
    /// off-diagonal coordinates fill two entries and carry a factor 2.
    pub fn symmetric_coordinates(&self) -> [Cx; 12] {
        let mut out = [Cx::new(0.0, 0.0); 12];
        for (block, g) in [self.grad_c, self.grad_d].iter().enumerate() {
            let coords = symmetric_coords(g);
            out[6 * block..6 * block + 6].copy_from_slice(&coords);
        }
        out
    }
}

const UPPER: [(usize, usize); 6] = [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)];

fn symmetric_coords(g: &Mat3) -> [Cx; 6] {
    UPPER.map(|(i, j)| {
        if i == j {
            g[(i, j)]
        } else {
            g[(i, j)] + g[(j, i)]
        }
    })
}

/// The symmetric matrix with a single conic coordinate set to one.
pub fn coordinate_direction(k: usize) -> Mat3 {
    let (i, j) = UPPER[k];
    let mut m = Mat3::zero();
    m[(i, j)] = Cx::new(1.0, 0.0);
    m[(j, i)] = Cx::new(1.0, 0.0);
    m
}

fn spectrum(c: &Conic, d: &Conic, root_index: usize, tol: &Tolerance) -> Result<PencilSpectrum> {
    if root_index > 2 {
        return Err(Error::DegeneratePencil);
    }
    eigen_pencil(&c.matrix(), &d.matrix(), tol)
}

/// Root order follows [`eigen_pencil`].
pub fn eigenvalue_gradients(
    c: &Conic,
    d: &Conic,
    root_index: usize,
    tol: &Tolerance,
) -> Result<GradientPair> {
    let s = spectrum(c, d, root_index, tol)?;
    let (r, v) = (s.roots[root_index], s.vectors[root_index]);
    let v_c_v = c.matrix().quad(&v);
    if v_c_v.norm() == 0.0 {
        return Err(Error::DegeneratePencil);
    }
    let vvt = Mat3::outer(&v, &v);
    let grad_d = vvt.scale(-v_c_v.inv());
    Ok(GradientPair {
        grad_c: grad_d.scale(r),
        grad_d,
        root: r,
        vector: v,
        v_c_v,
    })
}

/// −(vᵀ·dD·v + r·vᵀ·dC·v) / (vᵀCv).
pub fn directional_derivative(
    c: &Conic,
    d: &Conic,
    root_index: usize,
    dc: &Mat3,
    dd: &Mat3,
    tol: &Tolerance,
) -> Result<Cx> {
    let s = spectrum(c, d, root_index, tol)?;
    Ok(derivative_from_spectrum(
        &c.matrix(),
        &s,
        root_index,
        dc,
        dd,
    ))
}

fn derivative_from_spectrum(c: &Mat3, s: &PencilSpectrum, k: usize, dc: &Mat3, dd: &Mat3) -> Cx {
    let (r, v) = (s.roots[k], s.vectors[k]);
    -(dd.quad(&v) + r * dc.quad(&v)) / c.quad(&v)
}

/// Induced root velocities along T₁ = (0, Cv₁v₁ᵀC) and T₂ = (0, Cv₂v₂ᵀC).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SubmersionTangents {
    pub t1: [Cx; 3],
    pub t2: [Cx; 3],
    /// Determinant of the two images in the chart (r₁/r₃, r₂/r₃).
    pub chart_det: Cx,
}

pub fn submersion_tangents(c: &Conic, d: &Conic, tol: &Tolerance) -> Result<SubmersionTangents> {
    let cm = c.matrix();
    let s = eigen_pencil(&cm, &d.matrix(), tol)?;
    let velocities = |i: usize| -> [Cx; 3] {
        let w = cm.mul_vec(&s.vectors[i]);
        let dd = Mat3::outer(&w, &w);
        [0, 1, 2].map(|k| derivative_from_spectrum(&cm, &s, k, &Mat3::zero(), &dd))
    };
    let (t1, t2) = (velocities(0), velocities(1));
    let r = s.roots;
    let chart = |t: &[Cx; 3]| {
        let r3 = r[2] * r[2];
        [
            (t[0] * r[2] - r[0] * t[2]) / r3,
            (t[1] * r[2] - r[1] * t[2]) / r3,
        ]
    };
    let (a, b) = (chart(&t1), chart(&t2));
    Ok(SubmersionTangents {
        t1,
        t2,
        chart_det: a[0] * b[1] - a[1] * b[0],
    })
}

/// Central finite-difference step on unit-normalized pairs.
pub const FD_STEP: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq)]
pub struct RootCheck {
    pub root: Cx,
    pub analytic: [Cx; 12],
    pub finite_difference: [Cx; 12],
    /// max |analytic − fd| / max |analytic|.
    pub rel_error: f64,
    /// Index (0–11) of the symmetric coordinate with the largest error.
    pub worst_entry: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GradcheckReport {
    pub roots: Vec<RootCheck>,
    pub worst: f64,
    pub pass: bool,
}

/// Root of the perturbed pencil nearest to `r`.
fn tracked_root(c: &Mat3, d: &Mat3, r: Cx, tol: &Tolerance) -> Result<Cx> {
    let s = pencil_cubic(c, d);
    let roots = solve_cubic(s[0], s[1], s[2], s[3], tol)?;
    roots
        .roots
        .into_iter()
        .min_by(|a, b| (a - r).norm().total_cmp(&(b - r).norm()))
        .ok_or(Error::DegeneratePencil)
}

/// Compares the analytic gradients of all three roots with central
/// differences in the twelve symmetric coordinates; passes when every
/// relative error is below `bound`.
pub fn gradcheck(c: &Conic, d: &Conic, bound: f64, tol: &Tolerance) -> Result<GradcheckReport> {
    let (c, d) = (c.normalized(), d.normalized());
    let (cm, dm) = (c.matrix(), d.matrix());
    let mut roots = Vec::with_capacity(3);
    for k in 0..3 {
        let g = eigenvalue_gradients(&c, &d, k, tol)?;
        let analytic = g.symmetric_coordinates();
        let mut fd = [Cx::new(0.0, 0.0); 12];
        for (idx, slot) in fd.iter_mut().enumerate() {
            let e = coordinate_direction(idx % 6) * FD_STEP;
            let (plus, minus) = if idx < 6 {
                (
                    tracked_root(&(cm + e), &dm, g.root, tol)?,
                    tracked_root(&(cm - e), &dm, g.root, tol)?,
                )
            } else {
                (
                    tracked_root(&cm, &(dm + e), g.root, tol)?,
                    tracked_root(&cm, &(dm - e), g.root, tol)?,
                )
            };
            *slot = (plus - minus) / (2.0 * FD_STEP);
        }
        let scale = analytic
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
            .max(f64::MIN_POSITIVE);
        let (mut rel_error, mut worst_entry) = (0.0, 0);
        for i in 0..12 {
            let err = (analytic[i] - fd[i]).norm() / scale;
            if err > rel_error {
                rel_error = err;
                worst_entry = i;
            }
        }
        roots.push(RootCheck {
            root: g.root,
            analytic,
            finite_difference: fd,
            rel_error,
            worst_entry,
        });
    }
    let worst = roots.iter().map(|r| r.rel_error).fold(0.0, f64::max);
    Ok(GradcheckReport {
        roots,
        worst,
        pass: worst < bound,
    })
}
