use alloc::vec;
use alloc::vec::Vec;

use super::{hessenberg_eigenvalues, is_finite, norm_max, Cx, Tolerance, ONE, ZERO};
use crate::error::{Error, Result};

/// Horner evaluation; `coeffs` in descending degree order.
pub fn poly_eval(coeffs: &[Cx], x: Cx) -> Cx {
    coeffs.iter().fold(ZERO, |acc, &c| acc * x + c)
}

fn poly_eval_with_derivative(coeffs: &[Cx], x: Cx) -> (Cx, Cx) {
    let mut p = ZERO;
    let mut dp = ZERO;
    for &c in coeffs {
        dp = dp * x + p;
        p = p * x + c;
    }
    (p, dp)
}

/// All complex roots of a polynomial given in descending degree order.
///
/// Companion-matrix eigenvalues followed by up to `polish` Newton steps per
/// root; a step is kept only when it lowers the residual.
pub fn poly_roots(coeffs: &[Cx], polish: usize) -> Result<Vec<Cx>> {
    if !coeffs.iter().all(|z| is_finite(*z)) {
        return Err(Error::NonFinite);
    }
    let start = coeffs
        .iter()
        .position(|z| z.norm() != 0.0)
        .ok_or(Error::DegreeError)?;
    let mut p = &coeffs[start..];
    let mut roots = Vec::with_capacity(p.len().saturating_sub(1));
    while p.len() > 1 && p[p.len() - 1].norm() == 0.0 {
        roots.push(ZERO);
        p = &p[..p.len() - 1];
    }
    let n = p.len() - 1;
    if n == 0 {
        return Ok(roots);
    }
    if n == 1 {
        roots.push(-p[1] / p[0]);
        return Ok(roots);
    }
    let lead = p[0];
    let mut companion = vec![ZERO; n * n];
    for j in 0..n {
        companion[j] = -p[j + 1] / lead;
    }
    for i in 1..n {
        companion[i * n + i - 1] = ONE;
    }
    let eig = hessenberg_eigenvalues(companion, n)?;
    for mut r in eig {
        let mut res = poly_eval(p, r).norm();
        for _ in 0..polish {
            let (v, dv) = poly_eval_with_derivative(p, r);
            if dv.norm() == 0.0 {
                break;
            }
            let cand = r - v / dv;
            let cres = poly_eval(p, cand).norm();
            if is_finite(cand) && cres < res {
                r = cand;
                res = cres;
            } else {
                break;
            }
        }
        roots.push(r);
    }
    Ok(roots)
}

/// Union-find single-linkage clustering; labels are numbered in order of
/// first appearance.
pub fn cluster_labels<T>(items: &[T], eps: f64, dist: impl Fn(&T, &T) -> f64) -> Vec<usize> {
    let n = items.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if dist(&items[i], &items[j]) <= eps {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut labels = vec![usize::MAX; n];
    let mut remap: Vec<(usize, usize)> = Vec::new();
    for i in 0..n {
        let root = find(&mut parent, i);
        let label = match remap.iter().find(|(r, _)| *r == root) {
            Some(&(_, l)) => l,
            None => {
                let l = remap.len();
                remap.push((root, l));
                l
            }
        };
        labels[i] = label;
    }
    labels
}

/// Cluster size of each element's cluster.
pub fn multiplicities(labels: &[usize]) -> Vec<usize> {
    labels
        .iter()
        .map(|l| labels.iter().filter(|m| *m == l).count())
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CubicRoots {
    /// Sorted by real part, then imaginary part.
    pub roots: [Cx; 3],
    /// Size of the cluster each root belongs to.
    pub multiplicity: [usize; 3],
}

impl CubicRoots {
    pub fn is_simple(&self) -> bool {
        self.multiplicity.iter().all(|&m| m == 1)
    }

    /// Minimum pairwise distance relative to the largest root modulus.
    pub fn separation(&self) -> f64 {
        let r = &self.roots;
        let scale = norm_max(r).max(f64::MIN_POSITIVE);
        let mut s = f64::INFINITY;
        for i in 0..3 {
            for j in (i + 1)..3 {
                s = s.min((r[i] - r[j]).norm() / scale);
            }
        }
        s
    }
}

/// Roots of a t³ + b t² + c t + d.
pub fn solve_cubic(a: Cx, b: Cx, c: Cx, d: Cx, tol: &Tolerance) -> Result<CubicRoots> {
    if ![a, b, c, d].iter().all(|z| is_finite(*z)) {
        return Err(Error::NonFinite);
    }
    if a.norm() == 0.0 {
        return Err(Error::DegreeError);
    }
    let found = poly_roots(&[a, b, c, d], 1)?;
    let mut roots = [found[0], found[1], found[2]];
    if !roots.iter().all(|z| is_finite(*z)) {
        return Err(Error::NonFinite);
    }
    roots.sort_by(|x, y| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)));
    let scale = norm_max(&roots);
    let scale = if scale > 0.0 { scale } else { 1.0 };
    let labels = cluster_labels(&roots, tol.cluster_eps, |x, y| (*x - *y).norm() / scale);
    let m = multiplicities(&labels);
    Ok(CubicRoots {
        roots,
        multiplicity: [m[0], m[1], m[2]],
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadraticRoots {
    /// Homogeneous solutions [s : t].
    pub roots: [[Cx; 2]; 2],
    /// |b² − 4ac| / (|a| + |b| + |c|)².
    pub discriminant_ratio: f64,
}

/// Solutions [s : t] of a s² + b s t + c t² = 0; `None` when all coefficients vanish.
pub fn solve_quadratic_homogeneous(a: Cx, b: Cx, c: Cx) -> Option<QuadraticRoots> {
    let size = a.norm() + b.norm() + c.norm();
    if size == 0.0 {
        return None;
    }
    let disc = b * b - a * c * 4.0;
    let discriminant_ratio = disc.norm() / (size * size);
    // stable form on whichever affine chart has the larger leading coefficient
    let (lead, mid, tail, flipped) = if a.norm() >= c.norm() {
        (a, b, c, false)
    } else {
        (c, b, a, true)
    };
    let sq = disc.sqrt();
    let q = if (mid + sq).norm() >= (mid - sq).norm() {
        -(mid + sq) * 0.5
    } else {
        -(mid - sq) * 0.5
    };
    let pair = if lead.norm() == 0.0 {
        // a = c = 0: b s t = 0
        [[ONE, ZERO], [ZERO, ONE]]
    } else if q.norm() == 0.0 {
        [[ZERO, ONE], [ZERO, ONE]]
    } else {
        [[q / lead, ONE], [tail / q, ONE]]
    };
    let roots = if flipped {
        [[pair[0][1], pair[0][0]], [pair[1][1], pair[1][0]]]
    } else {
        pair
    };
    Some(QuadraticRoots {
        roots,
        discriminant_ratio,
    })
}
