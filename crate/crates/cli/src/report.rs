//! JSON views of library results. Field order here is the output key order.

use poncelet_core::cayley::CayleyVerdict;
use poncelet_core::conic::Transversality;
use poncelet_core::elliptic::{AtlasRecord, CriticalClass, JValue};
use poncelet_core::gradients::{GradcheckReport, RootCheck};
use poncelet_core::moduli::{ModuliPoint, NormalForm};
use poncelet_core::poncelet::Trace;
use poncelet_core::{Cx, Mat3};
use serde::Serialize;

pub type C = [f64; 2];

pub fn c(z: Cx) -> C {
    [z.re, z.im]
}

pub fn cs<const N: usize>(v: &[Cx; N]) -> [C; N] {
    v.map(c)
}

pub fn mat(m: &Mat3) -> [[C; 3]; 3] {
    m.0.map(|row| row.map(c))
}

#[derive(Serialize)]
pub struct VerdictJson {
    pub n: usize,
    pub gamma: C,
    pub hankel: C,
    pub satisfied: bool,
    pub threshold: f64,
}

impl From<&CayleyVerdict> for VerdictJson {
    fn from(v: &CayleyVerdict) -> Self {
        VerdictJson {
            n: v.n,
            gamma: c(v.gamma),
            hankel: c(v.hankel),
            satisfied: v.satisfied,
            threshold: v.threshold,
        }
    }
}

#[derive(Serialize)]
pub struct TransversalityJson {
    pub transverse: bool,
    pub discriminant: C,
    pub threshold: f64,
    pub root_separation: f64,
}

impl From<&Transversality> for TransversalityJson {
    fn from(t: &Transversality) -> Self {
        TransversalityJson {
            transverse: t.transverse,
            discriminant: c(t.discriminant),
            threshold: t.threshold,
            root_separation: t.root_separation,
        }
    }
}

#[derive(Serialize)]
pub struct JValueJson {
    pub z: C,
    pub critical_class: &'static str,
}

pub fn class_name(k: CriticalClass) -> &'static str {
    match k {
        CriticalClass::Regular => "regular",
        CriticalClass::J0 => "j0",
        CriticalClass::J1728 => "j1728",
    }
}

impl From<&JValue> for JValueJson {
    fn from(j: &JValue) -> Self {
        JValueJson {
            z: c(j.z),
            critical_class: class_name(j.critical_class),
        }
    }
}

#[derive(Serialize)]
pub struct CheckJson {
    #[serde(flatten)]
    pub verdict: VerdictJson,
    pub transversality: TransversalityJson,
    /// Absent when the pencil is degenerate.
    pub j: Option<JValueJson>,
}

#[derive(Serialize)]
pub struct ModuliJson {
    pub e: [C; 3],
    pub canonical: [C; 3],
    pub special: bool,
}

impl From<&ModuliPoint> for ModuliJson {
    fn from(m: &ModuliPoint) -> Self {
        ModuliJson {
            e: cs(&m.e),
            canonical: cs(&m.canonical),
            special: m.special,
        }
    }
}

#[derive(Serialize)]
pub struct NormalFormJson {
    pub transform: [[C; 3]; 3],
    pub lambda: [C; 3],
    pub conditioning: f64,
    pub separation: f64,
    pub ill_conditioned: bool,
    pub residual: f64,
}

impl NormalFormJson {
    pub fn new(nf: &NormalForm, residual: f64) -> Self {
        NormalFormJson {
            transform: mat(&nf.transform),
            lambda: cs(&nf.lambda),
            conditioning: nf.conditioning,
            separation: nf.separation,
            ill_conditioned: nf.ill_conditioned,
            residual,
        }
    }
}

#[derive(Serialize)]
pub struct NormalizeJson {
    pub normal_form: NormalFormJson,
    pub moduli: ModuliJson,
}

#[derive(Serialize)]
pub struct RootJson {
    pub lambda: [C; 3],
    pub mult: usize,
    pub res7: f64,
    pub res8: f64,
}

#[derive(Serialize)]
pub struct AtlasJson {
    pub z: C,
    pub roots: Vec<RootJson>,
    pub orbits: usize,
    pub total: usize,
}

impl From<&AtlasRecord> for AtlasJson {
    fn from(r: &AtlasRecord) -> Self {
        AtlasJson {
            z: c(r.z),
            roots: r
                .roots
                .iter()
                .map(|root| RootJson {
                    lambda: cs(&root.lambda.normalized()),
                    mult: root.mult,
                    res7: root.res7,
                    res8: root.res8,
                })
                .collect(),
            orbits: r.orbits,
            total: r.total,
        }
    }
}

pub const ATLAS_CSV_HEADER: [&str; 14] = [
    "z_re",
    "z_im",
    "root",
    "lambda1_re",
    "lambda1_im",
    "lambda2_re",
    "lambda2_im",
    "lambda3_re",
    "lambda3_im",
    "mult",
    "res7",
    "res8",
    "orbits",
    "total",
];

pub fn atlas_rows(r: &AtlasRecord) -> Vec<Vec<String>> {
    use crate::io::fmt_f64;
    r.roots
        .iter()
        .enumerate()
        .map(|(k, root)| {
            let mut row = vec![fmt_f64(r.z.re), fmt_f64(r.z.im), k.to_string()];
            for z in root.lambda.normalized() {
                row.push(fmt_f64(z.re));
                row.push(fmt_f64(z.im));
            }
            row.push(root.mult.to_string());
            row.push(fmt_f64(root.res7));
            row.push(fmt_f64(root.res8));
            row.push(r.orbits.to_string());
            row.push(r.total.to_string());
            row
        })
        .collect()
}

#[derive(Serialize)]
pub struct SampleJson {
    #[serde(rename = "C")]
    pub c: crate::io::ConicJson,
    #[serde(rename = "D")]
    pub d: crate::io::ConicJson,
    pub gamma: C,
    pub quadric_residual: f64,
}

#[derive(Serialize)]
pub struct StateJson {
    pub point: [C; 3],
    pub line: [C; 3],
    pub residuals: [f64; 3],
}

#[derive(Serialize)]
pub struct TraceJson {
    pub seed: u64,
    pub states: Vec<StateJson>,
    pub closure_error: f64,
    pub closed: bool,
}

impl TraceJson {
    pub fn new(seed: u64, trace: &Trace, residuals: Vec<[f64; 3]>, closed: bool) -> Self {
        TraceJson {
            seed,
            states: trace
                .states
                .iter()
                .zip(residuals)
                .map(|(s, residuals)| StateJson {
                    point: cs(&s.point.normalized()),
                    line: cs(&s.line.normalized()),
                    residuals,
                })
                .collect(),
            closure_error: trace.closure_error,
            closed,
        }
    }
}

#[derive(Serialize)]
pub struct RootCheckJson {
    pub root: C,
    pub rel_error: f64,
    pub worst_entry: usize,
    pub analytic: [C; 12],
    pub finite_difference: [C; 12],
}

impl From<&RootCheck> for RootCheckJson {
    fn from(r: &RootCheck) -> Self {
        RootCheckJson {
            root: c(r.root),
            rel_error: r.rel_error,
            worst_entry: r.worst_entry,
            analytic: cs(&r.analytic),
            finite_difference: cs(&r.finite_difference),
        }
    }
}

#[derive(Serialize)]
pub struct GradcheckJson {
    pub roots: Vec<RootCheckJson>,
    pub worst: f64,
    pub pass: bool,
}

impl From<&GradcheckReport> for GradcheckJson {
    fn from(r: &GradcheckReport) -> Self {
        GradcheckJson {
            roots: r.roots.iter().map(RootCheckJson::from).collect(),
            worst: r.worst,
            pass: r.pass,
        }
    }
}

#[derive(Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub pass: bool,
    pub value: f64,
    pub bound: f64,
}
