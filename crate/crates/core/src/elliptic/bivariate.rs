use alloc::vec;
use alloc::vec::Vec;

use crate::numeric::{Cx, ONE, ZERO};

/// Dense polynomial in two variables; `coeffs[i][j]` multiplies xⁱyʲ.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly2 {
    coeffs: Vec<Vec<Cx>>,
}

impl Poly2 {
    pub fn constant(c: Cx) -> Self {
        Poly2 {
            coeffs: vec![vec![c]],
        }
    }

    pub fn x() -> Self {
        Poly2 {
            coeffs: vec![vec![ZERO], vec![ONE]],
        }
    }

    pub fn y() -> Self {
        Poly2 {
            coeffs: vec![vec![ZERO, ONE]],
        }
    }

    /// a·x + b·y + c.
    pub fn linear(a: Cx, b: Cx, c: Cx) -> Self {
        Poly2 {
            coeffs: vec![vec![c, b], vec![a, ZERO]],
        }
    }

    pub fn deg_x(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn deg_y(&self) -> usize {
        self.coeffs.iter().map(|r| r.len()).max().unwrap_or(1) - 1
    }

    fn get(&self, i: usize, j: usize) -> Cx {
        self.coeffs
            .get(i)
            .and_then(|r| r.get(j))
            .copied()
            .unwrap_or(ZERO)
    }

    fn from_fn(nx: usize, ny: usize, f: impl Fn(usize, usize) -> Cx) -> Self {
        Poly2 {
            coeffs: (0..nx)
                .map(|i| (0..ny).map(|j| f(i, j)).collect())
                .collect(),
        }
    }

    pub fn add(&self, other: &Poly2) -> Poly2 {
        let nx = self.coeffs.len().max(other.coeffs.len());
        let ny = self.deg_y().max(other.deg_y()) + 1;
        Self::from_fn(nx, ny, |i, j| self.get(i, j) + other.get(i, j))
    }

    pub fn sub(&self, other: &Poly2) -> Poly2 {
        self.add(&other.scale(-ONE))
    }

    pub fn scale(&self, s: Cx) -> Poly2 {
        Poly2 {
            coeffs: self
                .coeffs
                .iter()
                .map(|r| r.iter().map(|c| c * s).collect())
                .collect(),
        }
    }

    pub fn mul(&self, other: &Poly2) -> Poly2 {
        let (ax, ay) = (self.deg_x(), self.deg_y());
        let (bx, by) = (other.deg_x(), other.deg_y());
        let mut out = Self::from_fn(ax + bx + 1, ay + by + 1, |_, _| ZERO);
        for i in 0..=ax {
            for j in 0..=ay {
                let a = self.get(i, j);
                if a == ZERO {
                    continue;
                }
                for k in 0..=bx {
                    for l in 0..=by {
                        out.coeffs[i + k][j + l] += a * other.get(k, l);
                    }
                }
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Poly2 {
        (0..n).fold(Self::constant(ONE), |acc, _| acc.mul(self))
    }

    pub fn eval(&self, x: Cx, y: Cx) -> Cx {
        self.coeffs_in_y(x)
            .iter()
            .rev()
            .fold(ZERO, |acc, &c| acc * y + c)
    }

    /// Value and both partial derivatives.
    pub fn eval_grad(&self, x: Cx, y: Cx) -> (Cx, Cx, Cx) {
        let (mut v, mut dx, mut dy) = (ZERO, ZERO, ZERO);
        let ny = self.deg_y() + 1;
        let xp: Vec<Cx> = powers(x, self.coeffs.len());
        let yp: Vec<Cx> = powers(y, ny);
        for i in 0..self.coeffs.len() {
            for j in 0..self.coeffs[i].len() {
                let c = self.coeffs[i][j];
                if c == ZERO {
                    continue;
                }
                v += c * xp[i] * yp[j];
                if i > 0 {
                    dx += c * (i as f64) * xp[i - 1] * yp[j];
                }
                if j > 0 {
                    dy += c * (j as f64) * xp[i] * yp[j - 1];
                }
            }
        }
        (v, dx, dy)
    }

    /// Coefficients in y (ascending) after substituting x.
    pub fn coeffs_in_y(&self, x: Cx) -> Vec<Cx> {
        let ny = self.deg_y() + 1;
        let mut out = vec![ZERO; ny];
        let mut xp = ONE;
        for row in &self.coeffs {
            for (j, c) in row.iter().enumerate() {
                out[j] += c * xp;
            }
            xp *= x;
        }
        out
    }

    /// Largest coefficient modulus.
    pub fn size(&self) -> f64 {
        self.coeffs
            .iter()
            .flat_map(|r| r.iter())
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }
}

fn powers(x: Cx, n: usize) -> Vec<Cx> {
    let mut out = Vec::with_capacity(n);
    let mut p = ONE;
    for _ in 0..n {
        out.push(p);
        p *= x;
    }
    out
}

/// Sylvester matrix of two polynomials given ascending in y, using the
/// formal degrees len − 1; row-major with its size.
pub fn sylvester(p: &[Cx], q: &[Cx]) -> (Vec<Cx>, usize) {
    let (m, n) = (p.len() - 1, q.len() - 1);
    let size = m + n;
    let mut s = vec![ZERO; size * size];
    for r in 0..n {
        for (k, c) in p.iter().rev().enumerate() {
            s[r * size + r + k] = *c;
        }
    }
    for r in 0..m {
        for (k, c) in q.iter().rev().enumerate() {
            s[(n + r) * size + r + k] = *c;
        }
    }
    (s, size)
}
