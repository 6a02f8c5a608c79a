use alloc::vec;
use alloc::vec::Vec;

use super::{Cx, ZERO};
use crate::error::{Error, Result};

const MAX_SWEEPS_PER_EIGENVALUE: usize = 60;

/// Eigenvalues of an upper Hessenberg matrix stored row-major in `h` (n×n).
///
/// Single-shift complex QR with Wilkinson shifts, Givens rotations and
/// exceptional shifts every ten stagnant sweeps. The matrix is balanced first.
pub fn hessenberg_eigenvalues(mut h: Vec<Cx>, n: usize) -> Result<Vec<Cx>> {
    assert_eq!(h.len(), n * n);
    balance(&mut h, n);
    let at = |i: usize, j: usize| i * n + j;
    let mut eig = vec![ZERO; n];
    let mut hi = n;
    let mut stagnant = 0usize;
    let mut total = 0usize;

    while hi > 0 {
        if hi == 1 {
            eig[0] = h[at(0, 0)];
            break;
        }
        // start of the trailing unreduced block
        let mut lo = hi - 1;
        while lo > 0 {
            let sub = h[at(lo, lo - 1)].norm();
            let diag = h[at(lo, lo)].norm() + h[at(lo - 1, lo - 1)].norm();
            if sub <= f64::EPSILON * diag || sub < f64::MIN_POSITIVE {
                h[at(lo, lo - 1)] = ZERO;
                break;
            }
            lo -= 1;
        }
        if lo == hi - 1 {
            eig[hi - 1] = h[at(hi - 1, hi - 1)];
            hi -= 1;
            stagnant = 0;
            continue;
        }

        total += 1;
        stagnant += 1;
        if total > MAX_SWEEPS_PER_EIGENVALUE * n {
            return Err(Error::NoConvergence);
        }

        let a = h[at(hi - 2, hi - 2)];
        let b = h[at(hi - 2, hi - 1)];
        let c = h[at(hi - 1, hi - 2)];
        let d = h[at(hi - 1, hi - 1)];
        let shift = if stagnant.is_multiple_of(10) {
            let phase = Cx::from_polar(1.0, 0.7 * stagnant as f64 + 0.3);
            let mut size = c.norm();
            if hi - 2 > lo {
                size += h[at(hi - 2, hi - 3)].norm();
            }
            d + phase * (0.75 * size)
        } else {
            wilkinson_shift(a, b, c, d)
        };

        for k in lo..hi {
            h[at(k, k)] -= shift;
        }
        let mut rotations: Vec<(Cx, Cx)> = Vec::with_capacity(hi - lo);
        for k in lo..hi - 1 {
            let x = h[at(k, k)];
            let y = h[at(k + 1, k)];
            let r = libm::hypot(x.norm(), y.norm());
            let (cs, sn) = if r == 0.0 {
                (Cx::new(1.0, 0.0), ZERO)
            } else {
                (x / r, y / r)
            };
            // rows k, k+1 ← G · rows, G = [[c̄, s̄], [−s, c]]
            for j in k..hi {
                let u = h[at(k, j)];
                let v = h[at(k + 1, j)];
                h[at(k, j)] = cs.conj() * u + sn.conj() * v;
                h[at(k + 1, j)] = -sn * u + cs * v;
            }
            rotations.push((cs, sn));
        }
        for (idx, &(cs, sn)) in rotations.iter().enumerate() {
            let k = lo + idx;
            // columns k, k+1 ← cols · Gᴴ
            for i in lo..(k + 2).min(hi) {
                let u = h[at(i, k)];
                let v = h[at(i, k + 1)];
                h[at(i, k)] = u * cs + v * sn;
                h[at(i, k + 1)] = -u * sn.conj() + v * cs.conj();
            }
        }
        for k in lo..hi {
            h[at(k, k)] += shift;
        }
    }
    Ok(eig)
}

/// Eigenvalue of [[a, b], [c, d]] closest to d.
fn wilkinson_shift(a: Cx, b: Cx, c: Cx, d: Cx) -> Cx {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let m1 = (a + d) * 0.5 + disc;
    let m2 = (a + d) * 0.5 - disc;
    if (m1 - d).norm() < (m2 - d).norm() {
        m1
    } else {
        m2
    }
}

/// Diagonal similarity with powers of two equalizing row and column norms.
fn balance(h: &mut [Cx], n: usize) {
    const RADIX: f64 = 2.0;
    let mut done = false;
    let mut sweeps = 0;
    while !done && sweeps < 100 {
        done = true;
        sweeps += 1;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += h[j * n + i].l1_norm();
                    r += h[i * n + j].l1_norm();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let mut g = r / RADIX;
            while c < g {
                f *= RADIX;
                c *= RADIX * RADIX;
            }
            g = r * RADIX;
            while c > g {
                f /= RADIX;
                c /= RADIX * RADIX;
            }
            if (c + r) / f < 0.95 * s {
                done = false;
                let inv = 1.0 / f;
                for j in 0..n {
                    h[i * n + j] *= inv;
                }
                for j in 0..n {
                    h[j * n + i] *= f;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{cx, re};

    fn sorted(mut v: Vec<Cx>) -> Vec<Cx> {
        v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        v
    }

    #[test]
    fn triangular_is_immediate() {
        let h = vec![re(1.0), re(2.0), ZERO, re(3.0)];
        let e = sorted(hessenberg_eigenvalues(h, 2).unwrap());
        assert!((e[0] - re(1.0)).norm() < 1e-15);
        assert!((e[1] - re(3.0)).norm() < 1e-15);
    }

    #[test]
    fn cyclic_permutation_needs_exceptional_shift() {
        // companion of t^3 - 1: a unitary cyclic shift, a fixed point of unshifted QR
        let z = ZERO;
        let o = re(1.0);
        let h = vec![z, z, o, o, z, z, z, o, z];
        let e = hessenberg_eigenvalues(h, 3).unwrap();
        for w in e {
            assert!((w * w * w - o).norm() < 1e-12, "{w}");
        }
    }

    #[test]
    fn rotation_matrix_complex_pair() {
        let h = vec![re(0.0), re(-1.0), re(1.0), re(0.0)];
        let e = sorted(hessenberg_eigenvalues(h, 2).unwrap());
        assert!((e[0] - cx(0.0, -1.0)).norm() < 1e-14);
        assert!((e[1] - cx(0.0, 1.0)).norm() < 1e-14);
    }
}
