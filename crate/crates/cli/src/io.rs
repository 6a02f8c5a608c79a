//! Interchange formats: pair files in, JSON and CSV out.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use poncelet_core::conic::Conic;
use poncelet_core::{cx, Cx};
use serde::{Deserialize, Serialize};
use serde_json::ser::Formatter;

use crate::CliError;

/// `{"coords": [[re, im] × 6]}` for the matrix [[x₀,x₁,x₂],[x₁,x₃,x₄],[x₂,x₄,x₅]].
#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ConicJson {
    pub coords: [[f64; 2]; 6],
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct PairJson {
    #[serde(rename = "C")]
    pub c: ConicJson,
    #[serde(rename = "D")]
    pub d: ConicJson,
}

impl ConicJson {
    pub fn from_conic(c: &Conic) -> Self {
        let mut coords = [[0.0; 2]; 6];
        for (out, z) in coords.iter_mut().zip(c.coords()) {
            *out = [z.re, z.im];
        }
        ConicJson { coords }
    }

    pub fn to_conic(&self, name: &str) -> Result<Conic, CliError> {
        let mut z = [Cx::default(); 6];
        for (out, &[re, im]) in z.iter_mut().zip(&self.coords) {
            *out = cx(re, im);
        }
        Conic::new(z).map_err(|e| CliError::Input(format!("conic {name}: {e}")))
    }
}

fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

pub fn parse_pair(text: &str) -> Result<(Conic, Conic), CliError> {
    let pair: PairJson = serde_json::from_str(text)
        .map_err(|e| CliError::Input(format!("invalid pair file: {e}")))?;
    Ok((pair.c.to_conic("C")?, pair.d.to_conic("D")?))
}

pub fn read_pair(path: &Path) -> Result<(Conic, Conic), CliError> {
    parse_pair(&read_text(path)?).map_err(|e| match e {
        CliError::Input(m) => CliError::Input(format!("{}: {m}", path.display())),
        other => other,
    })
}

/// A conic file, or the `D` entry of a pair file.
pub fn read_conic(path: &Path) -> Result<Conic, CliError> {
    let text = read_text(path)?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| CliError::Input(format!("{}: invalid JSON: {e}", path.display())))?;
    let (inner, name) = match value.get("D") {
        Some(d) => (d.clone(), "D"),
        None => (value, "conic"),
    };
    let conic: ConicJson = serde_json::from_value(inner)
        .map_err(|e| CliError::Input(format!("{}: invalid {name}: {e}", path.display())))?;
    conic.to_conic(name)
}

/// "RE" or "RE,IM".
pub fn parse_complex(s: &str) -> Result<Cx, CliError> {
    let bad = || CliError::Input(format!("cannot parse {s:?} as RE or RE,IM"));
    let mut parts = s.split(',').map(|p| p.trim().parse::<f64>());
    let re = parts.next().ok_or_else(bad)?.map_err(|_| bad())?;
    let im = match parts.next() {
        Some(p) => p.map_err(|_| bad())?,
        None => 0.0,
    };
    if parts.next().is_some() || !re.is_finite() || !im.is_finite() {
        return Err(bad());
    }
    Ok(cx(re, im))
}

/// Floats with 17 significant digits, so output is reproducible bit for bit.
struct ExactFloats;

impl Formatter for ExactFloats {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{}", fmt_f64(value))
    }
}

pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, ExactFloats);
    value
        .serialize(&mut ser)
        .map_err(|e| CliError::Io(format!("serialization failed: {e}")))?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("serde_json writes UTF-8"))
}

pub fn to_csv(header: &[&str], rows: &[Vec<String>]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io_err = |e: csv::Error| CliError::Io(e.to_string());
    w.write_record(header).map_err(io_err)?;
    for row in rows {
        w.write_record(row).map_err(io_err)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv writes UTF-8"))
}

pub fn emit(text: &str, output: Option<&Path>) -> Result<(), CliError> {
    match output {
        Some(path) => {
            fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
        }
        None => io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Io(e.to_string())),
    }
}
