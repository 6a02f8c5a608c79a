use poncelet_core::cayley::{
    cayley_condition_n, cayley_gamma, quadric_residual, sample_cayley, trivialize_psi,
};
use poncelet_core::conic::{is_transverse, sigma_coefficients, Conic};
use poncelet_core::elliptic::{
    classify_critical, critical_class_of_z, fiber_solutions, j_from_sigma, AtlasRecord, JValue,
};
use poncelet_core::gradients::{gradcheck, GradcheckReport};
use poncelet_core::moduli::{moduli_point, normal_form};
use poncelet_core::poncelet::{random_point_on_conic, trace};
use poncelet_core::random::{random_transverse_pair, seeded};
use poncelet_core::{Cx, Error};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{Format, RunConfig};
use crate::grid::parse_grid;
use crate::io::{self, fmt_f64, read_conic, read_pair, to_csv, to_json, ConicJson};
use crate::report::*;
use crate::{selftest, CliError, Command};

/// Rendered output and the exit code to report after writing it.
#[derive(Debug)]
pub struct Outcome {
    pub text: String,
    pub code: i32,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome { text, code: 0 }
    }
}

pub fn execute(cmd: &Command, cfg: &RunConfig) -> Result<Outcome, CliError> {
    match cmd {
        Command::Check { pair, n, strict } => {
            let (c, d) = read_pair(pair)?;
            let out = check(&c, &d, *n, cfg)?;
            let code = if *strict && !(out.verdict.satisfied && out.transversality.transverse) {
                1
            } else {
                0
            };
            Ok(Outcome {
                text: json_only(&out, cfg, "check")?,
                code,
            })
        }
        Command::Normalize { pair } => {
            let (c, d) = read_pair(pair)?;
            let nf = normal_form(&c, &d, &cfg.tol)?;
            let out = NormalizeJson {
                normal_form: NormalFormJson::new(&nf, nf.residual(&c, &d)),
                moduli: ModuliJson::from(&moduli_point(&c, &d, &cfg.tol)?),
            };
            Ok(Outcome::ok(json_only(&out, cfg, "normalize")?))
        }
        Command::Jinv { pair, lambda } => {
            let j = match (pair, lambda) {
                (_, Some(l)) => {
                    let mut v = [Cx::default(); 3];
                    for (slot, s) in v.iter_mut().zip(l) {
                        *slot = io::parse_complex(s)?;
                    }
                    classify_critical(&v, &cfg.tol)?
                }
                (Some(p), None) => {
                    let (c, d) = read_pair(p)?;
                    pair_j(&c, &d, cfg)?
                }
                (None, None) => {
                    return Err(CliError::Input("jinv needs a pair file or --lambda".into()))
                }
            };
            Ok(Outcome::ok(json_only(&JValueJson::from(&j), cfg, "jinv")?))
        }
        Command::Fiber { z } => {
            let rec = fiber_solutions(io::parse_complex(z)?, &cfg.tol)?;
            Ok(Outcome::ok(render_atlas(
                std::slice::from_ref(&rec),
                cfg,
                false,
            )?))
        }
        Command::Atlas { grid } => {
            let zs = parse_grid(grid)?;
            // rejected up front so no work is wasted on a bad grid
            if let Some(z) = zs.iter().find(|z| {
                critical_class_of_z(**z, &cfg.tol)
                    != poncelet_core::elliptic::CriticalClass::Regular
            }) {
                return Err(Error::CriticalZ { re: z.re, im: z.im }.into());
            }
            let records: Vec<_> = zs
                .par_iter()
                .map(|z| fiber_solutions(*z, &cfg.tol))
                .collect();
            let records = records.into_iter().collect::<Result<Vec<_>, _>>()?;
            Ok(Outcome::ok(render_atlas(&records, cfg, true)?))
        }
        Command::Sample { d, count } => {
            let d = read_conic(d)?;
            let mut rng = seeded(cfg.seed);
            let mut out = Vec::with_capacity(*count);
            for _ in 0..*count {
                let c = sample_cayley(&d, &mut rng, &cfg.tol)?;
                let e = trivialize_psi(&c, &d, &cfg.tol)?;
                out.push(SampleJson {
                    c: ConicJson::from_conic(&c),
                    d: ConicJson::from_conic(&d),
                    gamma: c_of(cayley_gamma(&c.normalized(), &d.normalized())),
                    quadric_residual: quadric_residual(&e),
                });
            }
            Ok(Outcome::ok(json_only(&out, cfg, "sample")?))
        }
        Command::Trace {
            pair,
            start_seed,
            count,
            steps,
        } => {
            let (c, d) = read_pair(pair)?;
            let traces = traces(&c, &d, *start_seed, *count, *steps, cfg)?;
            let text = match cfg.format {
                Format::Json => to_json(&traces)?,
                Format::Csv => {
                    let rows: Vec<Vec<String>> = traces
                        .iter()
                        .map(|t| {
                            let worst = t
                                .states
                                .iter()
                                .flat_map(|s| s.residuals)
                                .fold(0.0, f64::max);
                            vec![
                                t.seed.to_string(),
                                fmt_f64(t.closure_error),
                                t.closed.to_string(),
                                fmt_f64(worst),
                            ]
                        })
                        .collect();
                    to_csv(&["seed", "closure_error", "closed", "max_residual"], &rows)?
                }
            };
            Ok(Outcome::ok(text))
        }
        Command::Gradcheck { pair, count, bound } => {
            if !(bound.is_finite() && *bound > 0.0) {
                return Err(CliError::Input(format!(
                    "--bound must be positive, got {bound}"
                )));
            }
            let pairs: Vec<(Conic, Conic)> = match pair {
                Some(p) => vec![read_pair(p)?],
                None => {
                    let mut rng = seeded(cfg.seed);
                    (0..*count)
                        .map(|_| {
                            let (c, d) = random_transverse_pair(&mut rng, 1e-2, &cfg.tol);
                            Ok((Conic::from_matrix(&c)?, Conic::from_matrix(&d)?))
                        })
                        .collect::<Result<_, Error>>()?
                }
            };
            let reports: Vec<GradcheckReport> = pairs
                .iter()
                .map(|(c, d)| gradcheck(c, d, *bound, &cfg.tol))
                .collect::<Result<_, _>>()?;
            let pass = reports.iter().all(|r| r.pass);
            let text = match cfg.format {
                Format::Json => {
                    #[derive(Serialize)]
                    struct Out {
                        reports: Vec<GradcheckJson>,
                        worst: f64,
                        pass: bool,
                    }
                    to_json(&Out {
                        reports: reports.iter().map(GradcheckJson::from).collect(),
                        worst: reports.iter().map(|r| r.worst).fold(0.0, f64::max),
                        pass,
                    })?
                }
                Format::Csv => {
                    let mut rows = Vec::new();
                    for (k, r) in reports.iter().enumerate() {
                        for root in &r.roots {
                            rows.push(vec![
                                k.to_string(),
                                fmt_f64(root.root.re),
                                fmt_f64(root.root.im),
                                fmt_f64(root.rel_error),
                                root.worst_entry.to_string(),
                                (root.rel_error < *bound).to_string(),
                            ]);
                        }
                    }
                    to_csv(
                        &[
                            "pair",
                            "root_re",
                            "root_im",
                            "rel_error",
                            "worst_entry",
                            "pass",
                        ],
                        &rows,
                    )?
                }
            };
            Ok(Outcome {
                text,
                code: if pass { 0 } else { 3 },
            })
        }
        Command::Selftest => {
            let results = selftest::run(cfg.seed, &cfg.tol);
            let pass = results.iter().all(|r| r.pass);
            let text = match cfg.format {
                Format::Json => to_json(&results)?,
                Format::Csv => {
                    let rows: Vec<Vec<String>> = results
                        .iter()
                        .map(|r| {
                            vec![
                                r.name.to_string(),
                                r.pass.to_string(),
                                fmt_f64(r.value),
                                fmt_f64(r.bound),
                            ]
                        })
                        .collect();
                    to_csv(&["name", "pass", "value", "bound"], &rows)?
                }
            };
            Ok(Outcome {
                text,
                code: if pass { 0 } else { 3 },
            })
        }
    }
}

fn c_of(z: Cx) -> C {
    [z.re, z.im]
}

fn json_only<T: Serialize>(value: &T, cfg: &RunConfig, name: &str) -> Result<String, CliError> {
    match cfg.format {
        Format::Json => to_json(value),
        Format::Csv => Err(CliError::Input(format!(
            "{name} has no CSV form; CSV is available for fiber, atlas, trace, gradcheck and selftest"
        ))),
    }
}

/// A single record is written as an object, a grid as an array.
fn render_atlas(
    records: &[AtlasRecord],
    cfg: &RunConfig,
    as_list: bool,
) -> Result<String, CliError> {
    match cfg.format {
        Format::Json if as_list => {
            to_json(&records.iter().map(AtlasJson::from).collect::<Vec<_>>())
        }
        Format::Json => to_json(&AtlasJson::from(&records[0])),
        Format::Csv => {
            let rows: Vec<Vec<String>> = records.iter().flat_map(atlas_rows).collect();
            to_csv(&ATLAS_CSV_HEADER, &rows)
        }
    }
}

pub fn pair_j(c: &Conic, d: &Conic, cfg: &RunConfig) -> Result<JValue, CliError> {
    let z = j_from_sigma(
        &sigma_coefficients(&c.normalized(), &d.normalized()),
        &cfg.tol,
    )?;
    Ok(JValue {
        z,
        critical_class: critical_class_of_z(z, &cfg.tol),
    })
}

pub fn check(c: &Conic, d: &Conic, n: usize, cfg: &RunConfig) -> Result<CheckJson, CliError> {
    let verdict = cayley_condition_n(c, d, n, &cfg.tol)?;
    let transversality = is_transverse(c, d, &cfg.tol)?;
    let j = match pair_j(c, d, cfg) {
        Ok(j) => Some(JValueJson::from(&j)),
        Err(CliError::Input(_)) => None,
        Err(e) => return Err(e),
    };
    Ok(CheckJson {
        verdict: VerdictJson::from(&verdict),
        transversality: TransversalityJson::from(&transversality),
        j,
    })
}

pub fn traces(
    c: &Conic,
    d: &Conic,
    start_seed: u64,
    count: usize,
    steps: usize,
    cfg: &RunConfig,
) -> Result<Vec<TraceJson>, CliError> {
    (0..count as u64)
        .map(|k| {
            let seed = start_seed.wrapping_add(k);
            let p0 = random_point_on_conic(c, &mut seeded(seed))?;
            let t = trace(c, d, &p0, steps, &cfg.tol)?;
            let residuals = t.states.iter().map(|s| s.residuals(c, d)).collect();
            let closed = t.closure_error <= cfg.tol.cluster_eps;
            Ok(TraceJson::new(seed, &t, residuals, closed))
        })
        .collect()
}
