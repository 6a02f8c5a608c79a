//! A quick run of the library's invariants on classical and random pairs.

use poncelet_core::cayley::{
    cayley_condition_n, cayley_gamma, quadric_residual, sample_cayley, trivialize_psi,
};
use poncelet_core::conic::{sigma_coefficients, Conic};
use poncelet_core::elliptic::{fiber_solutions, j_from_lambda, j_from_sigma};
use poncelet_core::gradients::gradcheck;
use poncelet_core::moduli::{act, isotropy_group, moduli_point, normal_form};
use poncelet_core::numeric::{omega, re};
use poncelet_core::poncelet::{random_point_on_conic, triangle_closure};
use poncelet_core::random::{random_invertible, random_transverse_pair, seeded};
use poncelet_core::{Mat3, Result, Tolerance};

use crate::report::CheckResult;

fn real_conic(rows: [[f64; 3]; 3]) -> Conic {
    Conic::from_matrix(&Mat3::from_real(rows)).expect("nonzero matrix")
}

/// Circles of radius 3 and 1 with centers √3 apart.
pub fn chapple_pair() -> (Conic, Conic) {
    let d = 3f64.sqrt();
    (
        real_conic([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, -9.0]]),
        real_conic([[1.0, 0.0, -d], [0.0, 1.0, 0.0], [-d, 0.0, 2.0]]),
    )
}

/// (I, diag(1, 2, 3)).
pub fn diagonal_pair() -> (Conic, Conic) {
    (
        Conic::from_matrix(&Mat3::identity()).expect("identity"),
        Conic::from_matrix(&Mat3::diag([re(1.0), re(2.0), re(3.0)])).expect("diagonal"),
    )
}

fn record(name: &'static str, value: Result<f64>, bound: f64) -> CheckResult {
    let value = value.unwrap_or(f64::INFINITY);
    CheckResult {
        name,
        pass: value <= bound,
        value,
        bound,
    }
}

fn random_pair(
    rng: &mut poncelet_core::random::SeededRng,
    tol: &Tolerance,
) -> Result<(Conic, Conic)> {
    let (c, d) = random_transverse_pair(rng, 1e-2, tol);
    Ok((Conic::from_matrix(&c)?, Conic::from_matrix(&d)?))
}

pub fn run(seed: u64, tol: &Tolerance) -> Vec<CheckResult> {
    let mut rng = seeded(seed);
    let mut out = Vec::new();
    let (c, d) = chapple_pair();
    out.push(record(
        "chapple_gamma",
        Ok(cayley_gamma(&c.normalized(), &d.normalized()).norm()),
        1e-9,
    ));
    out.push(record(
        "chapple_closure",
        (0..5).try_fold(0.0f64, |acc, _| {
            let p = random_point_on_conic(&c, &mut rng)?;
            Ok(acc.max(triangle_closure(&c, &d, &p, tol)?))
        }),
        1e-8,
    ));
    let (i, diag) = diagonal_pair();
    out.push(record(
        "diagonal_gamma_is_23",
        Ok((cayley_gamma(&i, &diag) - 23.0).norm()),
        1e-12,
    ));
    out.push(record(
        "diagonal_open",
        (0..5)
            .try_fold(f64::INFINITY, |acc, _| {
                let p = random_point_on_conic(&i, &mut rng)?;
                Ok(acc.min(triangle_closure(&i, &diag, &p, tol)?))
            })
            .map(|m| 1e-3 / m),
        1.0,
    ));
    out.push(record(
        "j_routes_agree",
        (0..50).try_fold(0.0f64, |acc, _| {
            let (c, d) = random_pair(&mut rng, tol)?;
            let js = j_from_sigma(&sigma_coefficients(&c, &d), tol)?;
            let jl = j_from_lambda(&normal_form(&c, &d, tol)?.lambda, tol)?;
            Ok(acc.max((js - jl).norm() / js.norm()))
        }),
        1e-10,
    ));
    let w = omega();
    let special = Conic::from_matrix(&Mat3::diag([re(1.0), w, w * w])).expect("diagonal");
    out.push(record(
        "isotropy_orders",
        isotropy_group(&i, &diag, tol).and_then(|g| {
            let s = isotropy_group(&i, &special, tol)?;
            Ok(((g.order as f64 - 4.0).abs()).max((s.order as f64 - 12.0).abs()))
        }),
        0.0,
    ));
    out.push(record(
        "fiber_degree_24",
        fiber_solutions(re(100.0), tol).map(|r| {
            if r.total == 24 && r.all_simple() {
                r.max_residual()
            } else {
                f64::INFINITY
            }
        }),
        1e-8,
    ));
    out.push(record(
        "gradients",
        (0..10).try_fold(0.0f64, |acc, _| {
            let (c, d) = random_pair(&mut rng, tol)?;
            Ok(acc.max(gradcheck(&c, &d, 1e-6, tol)?.worst))
        }),
        1e-6,
    ));
    out.push(record(
        "congruence_invariance",
        (0..10).try_fold(0.0f64, |acc, _| {
            let (c, d) = random_pair(&mut rng, tol)?;
            let a = random_invertible(&mut rng, 1e2);
            let (ca, da) = act(&a, &c, &d, tol)?;
            let m = moduli_point(&c, &d, tol)?;
            Ok(acc.max(m.distance(&moduli_point(&ca, &da, tol)?)))
        }),
        1e-8,
    ));
    out.push(record(
        "fuss_quadrilateral",
        {
            let d2 = 5.0 - 17f64.sqrt();
            let d = d2.sqrt();
            let c = real_conic([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, -4.0]]);
            let inner = real_conic([[1.0, 0.0, -d], [0.0, 1.0, 0.0], [-d, 0.0, d2 - 1.0]]);
            cayley_condition_n(&c, &inner, 4, tol).map(|v| v.hankel.norm())
        },
        1e-8,
    ));
    out.push(record(
        "sampled_quadric",
        (0..10).try_fold(0.0f64, |acc, _| {
            let c = sample_cayley(&i, &mut rng, tol)?;
            Ok(acc.max(quadric_residual(&trivialize_psi(&c, &i, tol)?)))
        }),
        1e-9,
    ));
    out
}
