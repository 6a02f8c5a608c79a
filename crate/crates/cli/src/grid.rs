//! Grids of j-values for `atlas`.

use std::f64::consts::TAU;

use poncelet_core::{cx, Cx};

use crate::CliError;

/// `circle:CRE,CIM,R,N` puts N points on |z − c| = R at angles 2π(k + ½)/N;
/// `rect:RE0,RE1,NRE,IM0,IM1,NIM` is a row-major lattice, real part fastest.
pub fn parse_grid(text: &str) -> Result<Vec<Cx>, CliError> {
    let bad = |why: &str| CliError::Input(format!("grid {text:?}: {why}"));
    let (kind, rest) = text
        .split_once(':')
        .ok_or_else(|| bad("expected circle:... or rect:..."))?;
    let nums: Vec<f64> = rest
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| bad("non-numeric field"))?;
    if nums.iter().any(|x| !x.is_finite()) {
        return Err(bad("non-finite field"));
    }
    let count = |x: f64| -> Result<usize, CliError> {
        if x >= 1.0 && x.fract() == 0.0 && x <= 1e6 {
            Ok(x as usize)
        } else {
            Err(bad("point counts must be positive integers"))
        }
    };
    match (kind, nums.as_slice()) {
        ("circle", &[cre, cim, r, n]) => {
            let n = count(n)?;
            if r <= 0.0 {
                return Err(bad("radius must be positive"));
            }
            Ok((0..n)
                .map(|k| cx(cre, cim) + Cx::from_polar(r, TAU * (k as f64 + 0.5) / n as f64))
                .collect())
        }
        ("rect", &[re0, re1, nre, im0, im1, nim]) => {
            let (nre, nim) = (count(nre)?, count(nim)?);
            let at = |a: f64, b: f64, n: usize, k: usize| {
                if n == 1 {
                    a
                } else {
                    a + (b - a) * k as f64 / (n - 1) as f64
                }
            };
            let mut out = Vec::with_capacity(nre * nim);
            for j in 0..nim {
                for i in 0..nre {
                    out.push(cx(at(re0, re1, nre, i), at(im0, im1, nim, j)));
                }
            }
            Ok(out)
        }
        ("circle", _) => Err(bad("circle takes CRE,CIM,R,N")),
        ("rect", _) => Err(bad("rect takes RE0,RE1,NRE,IM0,IM1,NIM")),
        _ => Err(bad("unknown grid kind")),
    }
}
